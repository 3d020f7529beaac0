# Distances between states and the pure-state corner of the metric family.
#
# For pure states the whole family collapses to a single metric up to the
# overall factor 2 / f(0): only functions with f(0) > 0 survive, which is
# why sld (f(0) = 1/2) is the usual choice there.

import numpy as np

from qngm import divergence, petz, qfim, states

up = states.bloch_state(0, 0, 1)
down = states.bloch_state(0, 0, -1)
tilted = states.bloch_state(0.5, 0, 0)

print("fidelity / Bures angle / Bures distance")
for name, (a, b) in (
    ("up vs up    ", (up, up)),
    ("up vs down  ", (up, down)),
    ("up vs tilted", (up, tilted)),
):
    print(
        f"  {name}: F = {divergence.fidelity(a, b):.4f}"
        f"   angle = {divergence.bures_angle(a, b):.4f}"
        f"   distance = {divergence.bures_distance(a, b):.4f}"
    )

print()
print("for pure states the Bures angle reduces to the Fubini-Study distance")
rng = np.random.default_rng(1)
psi = rng.normal(size=2) + 1j * rng.normal(size=2)
phi = rng.normal(size=2) + 1j * rng.normal(size=2)
rho_psi = np.outer(psi, psi.conj()) / np.linalg.norm(psi) ** 2
rho_phi = np.outer(phi, phi.conj()) / np.linalg.norm(phi) ** 2
print(f"  Bures angle   : {divergence.bures_angle(rho_psi, rho_phi):.10f}")
print(f"  Fubini-Study  : {divergence.fubini_study(psi, phi):.10f}")

print()
print("pure-state metrics differ only by the factor 2 / f(0)")
psi = psi / np.linalg.norm(psi)
dpsi = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(2)]
base = qfim.metric_pure(psi, dpsi, petz.SLD)
print(f"  sld (4 x geometric tensor): diag = {np.diag(base).round(4)}")
for spec in ("sw:0+", "sw:0.25", "st:0.5"):
    f = petz.parse(spec)
    g = qfim.metric_pure(psi, dpsi, f)
    print(f"  {spec:8s} f(0) = {petz.eval_zero(f):5.2f}   ratio to sld = {g[0, 0] / base[0, 0]:.4f}")
print("  bkm has f(0) = 0: the pure-state metric is undefined")
try:
    qfim.metric_pure(psi, dpsi, petz.BKM)
except Exception as exc:
    print(f"    -> {type(exc).__name__}: {exc}")
