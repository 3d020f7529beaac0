# The quantum Fisher metric of a Petz function equals the coincidence Hessian
# of its paired divergence: sandwiched Renyi for sw:alpha, the quantum
# relative entropy for bkm, standard Renyi for st:alpha.  This script builds
# both sides for a random two-qubit state and shows the agreement, then the
# order transfer (smaller Petz function -> larger metric).

import numpy as np

from qngm import divergence, petz, qfim, states

rng = np.random.default_rng(42)
rho = qfim.random_density(rng, 4, floor=0.2)
tangents = [qfim.random_tangent(rng, 4) for _ in range(3)]
family = states.linear_family(rho, tangents)

print("metric vs divergence Hessian (random 4-dim state, 3 tangents)")
for spec in ("sld", "bkm", "rrld", "sw:0.1", "sw:2", "st:0.5"):
    f = petz.parse(spec)
    g = qfim.metric(rho, tangents, f)
    div = divergence.paired_divergence(f)
    hess = divergence.fd_hessian(lambda u: div(family(u), rho), np.zeros(3), h=1e-3)
    rel = np.linalg.norm(hess - g) / np.linalg.norm(g)
    print(f"  {spec:8s} rel difference {rel:.2e}")

print()
print("order transfer: f <= g pointwise implies G_f - G_g is PSD")
pairs = [("rrld", "sld"), ("rrld", "bkm"), ("sw:2", "sld"), ("sld", "sw:0.1")]
for a, b in pairs:
    ga = qfim.metric(rho, tangents, petz.parse(a))
    gb = qfim.metric(rho, tangents, petz.parse(b))
    low = np.linalg.eigvalsh(ga - gb).min()
    print(f"  {a:6s} <= {b:7s}:  min eig of G_{a} - G_{b} = {low:+.3e}")

print()
print("classical reduction: on commuting data every Petz function gives the")
print("same (classical Fisher) metric")
p = np.array([0.2, 0.3, 0.5])
diag_rho = np.diag(p).astype(complex)
diag_tangents = [
    np.diag([1.0, 0.0, -1.0]).astype(complex),
    np.diag([0.0, 1.0, -1.0]).astype(complex),
]
for spec in ("sld", "rrld", "sw:0.1"):
    g = qfim.metric(diag_rho, diag_tangents, petz.parse(spec))
    print(f"  {spec:7s}", np.round(g, 10).tolist())
