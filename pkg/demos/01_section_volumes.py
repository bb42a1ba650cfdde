# Volumes of central sections of a dilated cross-polytope, three ways.
#
# The regular hexagon B_1^3 ∩ {x1 + x2 + x3 = 0} has area 3*sqrt(3)/4. We
# compute it from the complement of H, from a spanning basis of H, and with
# the exact polygon oracle, then repeat for a random plane in R^5.
import math

import numpy as np

from xsec import MCConfig, estimate_volume, make_subspace, oracle_volume

if __name__ == "__main__":
    cfg = MCConfig(samples=10**6, batches=100, seed=1)

    hexagon = make_subspace(3, "complement", [[1, 1, 1]])
    print("exact area           ", 3 * math.sqrt(3) / 4)
    for mode in ("codim", "dim"):
        est = estimate_volume(hexagon, [1, 1, 1], mode, cfg)
        print(f"{mode:5s} estimator      {est.value:.6f} ± {est.stderr:.1e}")
    print("polygon oracle       ", oracle_volume(hexagon, [1, 1, 1]).value)

    # a random 2-plane in R^5 and an uneven dilation
    rng = np.random.default_rng(0)
    plane = make_subspace(5, "H", rng.normal(size=(2, 5)))
    a = rng.uniform(0.5, 2.0, 5)
    print()
    print("dilation a =", np.round(a, 3))
    for mode in ("codim", "dim"):
        est = estimate_volume(plane, a, mode, cfg)
        print(f"{mode:5s} estimator      {est.value:.6f} ± {est.stderr:.1e}")
    print("polygon oracle       ", oracle_volume(plane, a).value)

    # a 3-dimensional section has no exact oracle here; hit-or-miss instead
    space = make_subspace(5, "H", rng.normal(size=(3, 5)))
    est = estimate_volume(space, a, "dim", cfg)
    mc = oracle_volume(space, a, cfg)
    print()
    print(f"3-dim section: dim estimator {est.value:.5f} ± {est.stderr:.1e}, hit-or-miss {mc.value:.5f} ± {mc.stderr:.1e}")
