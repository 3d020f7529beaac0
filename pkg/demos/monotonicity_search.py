# Monotone metrics contract under every quantum channel; metrics outside the
# monotone hull do not.  This script probes random (state, tangent, channel)
# triples and prints a concrete violating triple for sw:0.25.

import numpy as np

from qngm import petz, qfim

SEED = 12345
SAMPLES = 500

print(f"probing {SAMPLES} random qubit triples per metric (seed {SEED})")
for spec in ("sld", "rrld", "bkm", "half", "sw:0.25", "sw:-0.5"):
    result = qfim.monotonicity_probe(petz.parse(spec), SAMPLES, seed=SEED)
    tag = "monotone (contracts)" if result.max_violation <= 1e-9 else "VIOLATED"
    print(f"  {spec:8s} max(after - before) = {result.max_violation:+.3e}   {tag}")

witness = qfim.monotonicity_probe(petz.sandwiched(0.25), SAMPLES, seed=SEED).witness
print()
print(f"witness for sw:0.25 at sample {witness.index}:")
print("  state:")
print(np.round(witness.rho, 4))
print("  tangent direction:")
print(np.round(witness.tangent, 4))
print(f"  Kraus operators: {len(witness.kraus)}")
print(f"  metric before: {witness.before:.6f}")
print(f"  metric after : {witness.after:.6f}   (grew by {witness.violation:.6f})")
