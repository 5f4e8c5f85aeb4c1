"""Dissipative tenfold way: which jump operators respect the chain's class.

Single-site loss/gain dissipation preserves the generalized TRS/PHS/PAH
relations of the shape matrix; the two-site loss channels break two of
them, independently of the overall rate.
"""

from sshjump import (
    DissipatorKind,
    ModelSpec,
    build_channels,
    build_hamiltonian,
    check_symmetries,
    majorana_rep,
)

for kind in (DissipatorKind.NONE, DissipatorKind.SPD, DissipatorKind.SBD):
    spec = ModelSpec(8, v=2.0, w=20.0, gamma=1.0, alpha=1.0, dissipator=kind)
    rep = majorana_rep(build_hamiltonian(spec), build_channels(spec))
    report = check_symmetries(rep.x)
    res = ", ".join(f"{k}={v:.2e}" for k, v in report.residuals.items())
    print(f"{kind.value:>4}: {report.class_label}   ({res})")
    print(f"      min Re rapidity = {rep.rapidities().real.min():.3e}")
