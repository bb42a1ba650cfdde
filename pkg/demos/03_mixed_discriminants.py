# det(x_1 A_1 + ... + x_n A_n) is a homogeneous polynomial whose coefficients
# are mixed discriminants, and these are nonnegative for PSD A_i. This is
# what makes log det(sum e^{t_i} v_i v_i^T) convex.
import itertools

import numpy as np

from xsec import det_expansion_check, logdet_convexity_check, mixed_discriminant

if __name__ == "__main__":
    rng = np.random.default_rng(7)
    vs = rng.normal(size=(4, 2))
    ms = [np.outer(v, v) for v in vs]

    print("mixed discriminants D(A_i, A_j) of rank-one matrices:")
    for i, j in itertools.combinations_with_replacement(range(4), 2):
        print(f"  D(A{i}, A{j}) = {mixed_discriminant([ms[i], ms[j]]):+.4f}")

    x = rng.uniform(0, 1, 4)
    print("expansion residual:", det_expansion_check(ms, x))

    res = logdet_convexity_check(vs, pairs=2000, seed=1)
    print("largest midpoint margin of log det (must be <= 0):", res.margin)
