"""Covariance engine versus brute-force state vectors.

Replays identical scripted jump schedules through the Gaussian engine and
through dense exact evolution in the full Fock space, then compares every
covariance snapshot and entropy.
"""

import json

from sshjump.cli import oracle_compare

report = oracle_compare(v=1.0, w=2.0, gamma=1.0, dt=1e-3, t_final=2.0)
print(f"{len(report['cases'])} scripted schedules compared (both dissipator kinds, L = 4 and 6)")
print(f"worst covariance mismatch:  {report['max_dG']:.3e}")
print(f"worst DEE mismatch:         {report['max_dSD']:.3e}")
print()
print(json.dumps(report["cases"][0], indent=2))
