"""
Balanced cloner walkthrough
===========================

Builds the smallest interesting machine, one signal plus one conjugate
replica turned into two clones and two anticlones, and checks the
closed-form numbers against the explicitly constructed network.
"""

import numpy as np

from pciclone import (
    CloningConfig,
    apply_map,
    build_machine,
    fidelity_with_coherent,
    noise_report,
    quadrature_variance,
    to_symplectic,
)

config = CloningConfig(n_inputs=1, n_conj=1, m_clones=2)
report = noise_report(config)

print("closed form for (1,1) -> 2 clones + 2 anticlones")
print(f"  amplifier gain      {report.gain:.6f}")
print(f"  clone variance      {report.var_clone:.6f}   (vacuum is 0.5)")
print(f"  clone fidelity      {report.f_clone:.6f}   (= 16/17)")
print(f"  best without conjugates: fidelity {report.baseline_f:.6f}")

# Run a coherent state through the actual network.
psi = 1.0 + 0.5j
transform, layout = build_machine(config)
state = apply_map(layout.input_state(psi), to_symplectic(transform))

print(f"\nmachine outputs for psi = {psi}")
for mode in layout.clone_slots:
    vx, vp = quadrature_variance(state, mode)
    amp = (state.mean[2 * mode] + 1j * state.mean[2 * mode + 1]) / np.sqrt(2)
    f = fidelity_with_coherent(state, mode, psi)
    print(f"  clone mode {mode}: amplitude {amp:.6f}, var ({vx:.4f}, {vp:.4f}), "
          f"fidelity {f:.6f}")
for mode in layout.anticlone_slots:
    amp = (state.mean[2 * mode] + 1j * state.mean[2 * mode + 1]) / np.sqrt(2)
    f = fidelity_with_coherent(state, mode, np.conj(psi))
    print(f"  anticlone mode {mode}: amplitude {amp:.6f}, fidelity {f:.6f}")
