# A tour of the Petz function family that parameterizes quantum Fisher metrics.
#
# Every function here satisfies f(1) = 1 and f(t) = t f(1/t).  The named
# members (sld, bkm, rrld, half) are operator-monotone; the sandwiched family
# sw:alpha leaves the monotone hull for alpha in (-1, 0) u (0, 1/2).

import numpy as np

from qngm import petz

grid = petz.default_grid(9, lo=0.1, hi=10.0)

print("values on a small grid")
print("t       :", "  ".join(f"{t:8.3f}" for t in grid))
for spec in ("sld", "bkm", "half", "rrld", "sw:0.1", "sw:-0.3", "sw:inf", "lin:3:rrld:sld"):
    f = petz.parse(spec)
    vals = petz.evaluate(f, grid)
    print(f"{spec:15s}:", "  ".join(f"{v:8.3f}" for v in vals))

print()
print("the monotone hull: rrld is the minimum element, sld the maximum")
for spec in ("bkm", "half", "sw:2", "sw:-1", "sw:inf", "st:0.5", "lin:0.3:rrld:sld"):
    f = petz.parse(spec)
    lower = petz.compare(petz.RRLD, f)
    upper = petz.compare(f, petz.SLD)
    print(f"  rrld {lower.value} {spec} {upper.value} sld")

print()
print("coincidences inside the sandwiched family")
for spec, ref in (("sw:0.5", "sld"), ("sw:2", "half"), ("sw:-1", "rrld")):
    gap = np.abs(
        petz.evaluate(petz.parse(spec), grid) - petz.evaluate(petz.parse(ref), grid)
    ).max()
    print(f"  {spec} = {ref}   (max gap {gap:.2e})")

print()
print("operator-monotonicity classification (sw:alpha monotone iff 1/alpha in [-1, 2])")
for alpha in (0.1, 0.25, 0.5, 2.0, -0.5, -1.0, -3.0):
    f = petz.sandwiched(alpha)
    print(f"  sw:{alpha:<5g} monotone = {petz.is_operator_monotone(f)}")

print()
print("the family grows toward alpha -> 0+: derivative in beta = 1/alpha is nonnegative")
ts = np.array([0.2, 0.5, 2.0, 5.0])
for beta in (-2.0, 0.5, 3.0):
    vals = petz.beta_derivative(beta, ts)
    print(f"  beta={beta:+.1f}:", "  ".join(f"{v:9.5f}" for v in vals))
