# The uniform measure on a parallelogram K is symmetric and log-concave, yet
# f(t) = log(|diag(1, e^t) K ∩ K| / |K|) is not concave: it peaks at t = 0,
# tends to -inf as t -> -inf, but stays bounded as t -> +inf.
import math

from xsec import counterexample_curve, counterexample_violation

if __name__ == "__main__":
    for t, f in counterexample_curve([-20, -10, -5, -2, -1, 0, 1, 2, 5, 10, 20]):
        bar = "#" * max(0, int(40 + 8 * f)) if math.isfinite(f) else ""
        print(f"t = {t:6.1f}  f = {f:9.5f}  {bar}")

    # for large t the intersection approaches {(x, y) in K : |x| <= 1/3}
    print("limit value log(1/3) =", math.log(1 / 3))
    triple, margin = counterexample_violation()
    print(f"midpoint margin on {triple}: {margin:.4f}  (negative: not concave)")
