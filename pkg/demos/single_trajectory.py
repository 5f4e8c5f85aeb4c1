"""One monitored trajectory: deterministic drift interrupted by jumps.

Runs a single quantum trajectory of the uniformly dissipated chain and
prints the jump log together with the DEE staircase it produces.
"""

from sshjump import (
    DissipatorKind,
    ModelSpec,
    build_hamiltonian,
    ground_state,
    run_trajectory,
)

spec = ModelSpec(8, v=2.0, w=20.0, gamma=1.0, alpha=1.0,
                 dissipator=DissipatorKind.SPD)
init = ground_state(build_hamiltonian(spec))
rec = run_trajectory(spec, init, t_final=4.0, dt=1e-3, sample_dt=0.5, seed=42)

print(f"trajectory with {len(rec.events)} jumps; purity defect {rec.purity_max:.1e}")
print(f"{'t':>6} {'S^D':>8}")
for t, s in zip(rec.sample_times, rec.sdee):
    print(f"{t:6.2f} {s:8.4f}")

print("\nfirst ten jumps:")
print(f"{'t':>7} {'kind':>5} {'sites':>8} {'dS^D':>8}")
for e in rec.events[:10]:
    sites = "-".join(map(str, e.support))
    print(f"{e.time:7.3f} {e.kind:>5} {sites:>8} {e.dsd:8.4f}")
