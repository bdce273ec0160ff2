"""
Monte-Carlo cross-check
=======================

Samples a machine's inputs in phase space, pushes every sample through
the symplectic matrix, and compares the empirical moments of each output
mode against the analytic noise report.  Agreement is scored in standard
errors; anything beyond five would be flagged.
"""

from pciclone import (
    CloningConfig,
    SampleConfig,
    build_machine,
    compare_to_analytic,
    noise_report,
    simulate,
)

config = CloningConfig(n_inputs=2, n_conj=1, m_clones=3)
transform, layout = build_machine(config)
samples = SampleConfig(sample_count=200_000, seed=42, psi=0.8 - 0.3j)

moments = simulate(transform, layout, samples)
summary = compare_to_analytic(moments, noise_report(config), layout)

print(f"(2,1) -> 3 clones + 2 anticlones, {samples.sample_count} samples, "
      f"psi = {samples.psi}")
print(f"{'mode':>4} {'role':>10} {'z mean x':>9} {'z mean p':>9} "
      f"{'z var x':>9} {'z var p':>9} {'z fid':>9}")
for row in summary.rows:
    print(f"{row.mode:>4} {row.role:>10} {row.z_mean_x:>9.2f} "
          f"{row.z_mean_p:>9.2f} {row.z_var_x:>9.2f} {row.z_var_p:>9.2f} "
          f"{row.z_fidelity:>9.2f}")
print(f"\nlargest |z| = {summary.max_abs_z:.2f}, "
      f"{'consistent' if summary.passed else 'INCONSISTENT'} "
      f"at the {summary.threshold:.0f} sigma level")
