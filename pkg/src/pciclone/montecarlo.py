"""Statistical oracle: push phase-space samples through a machine.

For Gaussian inputs and linear mode transforms, sampling each input
quadrature pair from a Gaussian with the mode's mean and covariance
(1/2)I and applying the symplectic map to every sample reproduces the
exact output moments in expectation, so empirical moments converge to
the analytic predictions without any method bias.

Sample streams are versioned and reproducible: the run is split into
fixed-size blocks and block ``b`` draws its standard normals from a
Philox generator keyed (seed, b).  Layout version 1 draws one
(rows, 2K) array per block, samples along rows, mode m's x and p in
columns 2m and 2m+1.  Block moments are merged in block order with the
pooled mean/covariance update, so a blockwise run equals a single pass
over the concatenated samples up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .canonical import (
    CANONICAL_TOL,
    CanonicalTransform,
    commutation_residual,
    to_symplectic,
)
from .errors import DomainError
from .gaussian import GaussianState, fidelity_with_coherent
from .machine import MachineLayout, NoiseReport

BLOCK_SIZE = 1 << 17
STREAM_VERSION = 1
# z-scores at or above this many standard errors are flagged.
Z_FLAG = 5.0


def block_normals(seed: int, block_index: int, rows: int, cols: int) -> np.ndarray:
    """Standard normals of block ``block_index`` under stream version 1."""
    key = np.array([seed, block_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key)).standard_normal(
        (rows, cols)
    )


@dataclass(frozen=True)
class SampleConfig:
    """Sampling run parameters."""

    sample_count: int
    seed: int
    psi: complex = 0j

    def __post_init__(self):
        if self.sample_count < 2:
            raise DomainError(
                f"sample_count must be >= 2 to estimate variances, "
                f"got {self.sample_count}"
            )
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must fit in 64 unsigned bits, got {self.seed}")


@dataclass(frozen=True)
class EmpiricalMoments:
    """Per-mode empirical means and covariances with standard errors.

    ``means`` is (K, 2), ``covariances`` (K, 2, 2); ``mean_se`` and
    ``var_se`` give the standard errors of the mean and of the diagonal
    variances, the latter as var*sqrt(2/(n-1)).
    """

    sample_count: int
    psi: complex
    means: np.ndarray
    covariances: np.ndarray
    mean_se: np.ndarray
    var_se: np.ndarray

    def __post_init__(self):
        for name in ("means", "covariances", "mean_se", "var_se"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        k = self.means.shape[0]
        shapes = {
            "means": (k, 2),
            "covariances": (k, 2, 2),
            "mean_se": (k, 2),
            "var_se": (k, 2),
        }
        for name, want in shapes.items():
            got = getattr(self, name).shape
            if got != want:
                raise DomainError(f"{name} must have shape {want}, got {got}")

    @property
    def mode_count(self) -> int:
        return self.means.shape[0]

    def mode_state(self, mode: int) -> GaussianState:
        """Single-mode Gaussian state built from the empirical moments."""
        return GaussianState(
            mode_count=1,
            mean=self.means[mode],
            covariance=self.covariances[mode],
        )

    def to_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "psi": [self.psi.real, self.psi.imag],
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "mean_se": self.mean_se.tolist(),
            "var_se": self.var_se.tolist(),
        }


def _merge_blocks(acc, block):
    # Pooled update for (count, mean, centered square sums, centered
    # cross sums); associative with fixed order, so blockwise equals a
    # single pass up to rounding.
    n1, mu1, sq1, cross1 = acc
    n2, mu2, sq2, cross2 = block
    n = n1 + n2
    delta = mu2 - mu1
    w = n1 * n2 / n
    mu = mu1 + delta * (n2 / n)
    sq = sq1 + sq2 + w * delta * delta
    cross = cross1 + cross2 + w * delta[0::2] * delta[1::2]
    return n, mu, sq, cross


def simulate(
    transform: CanonicalTransform,
    layout: MachineLayout,
    config: SampleConfig,
) -> EmpiricalMoments:
    """Empirical output moments of a machine fed its coherent inputs.

    Each block is generated, transformed, and reduced in two passes
    (mean first, then moments of the mean-centered samples, which stay
    accurate for large input amplitudes); blocks merge in order.
    Identical arguments give bit-identical results.
    """
    residual = commutation_residual(transform)
    if residual > CANONICAL_TOL:
        raise DomainError(
            f"machine is not canonical (commutation residual {residual:.3e})"
        )
    if transform.mode_count != layout.total_modes:
        raise DomainError(
            f"transform has {transform.mode_count} modes, "
            f"layout expects {layout.total_modes}"
        )
    k = layout.total_modes
    s_t = to_symplectic(transform).matrix.T
    amps = layout.input_amplitudes(config.psi)
    mu_in = np.empty(2 * k)
    mu_in[0::2] = math.sqrt(2.0) * amps.real
    mu_in[1::2] = math.sqrt(2.0) * amps.imag

    acc = (0.0, np.zeros(2 * k), np.zeros(2 * k), np.zeros(k))
    sigma = math.sqrt(0.5)
    for block_index, start in enumerate(range(0, config.sample_count, BLOCK_SIZE)):
        rows = min(BLOCK_SIZE, config.sample_count - start)
        z = block_normals(config.seed, block_index, rows, 2 * k)
        y = (sigma * z + mu_in) @ s_t
        mu = y.mean(axis=0)
        y -= mu
        sq = np.einsum("ij,ij->j", y, y)
        cross = np.einsum("ij,ij->j", y[:, 0::2], y[:, 1::2])
        acc = _merge_blocks(acc, (float(rows), mu, sq, cross))

    n, mu, sq, cross = acc
    var = sq / (n - 1.0)
    cov_xp = cross / (n - 1.0)
    covariances = np.empty((k, 2, 2))
    covariances[:, 0, 0] = var[0::2]
    covariances[:, 1, 1] = var[1::2]
    covariances[:, 0, 1] = covariances[:, 1, 0] = cov_xp
    var_pairs = var.reshape(k, 2)
    return EmpiricalMoments(
        sample_count=config.sample_count,
        psi=config.psi,
        means=mu.reshape(k, 2),
        covariances=covariances,
        mean_se=np.sqrt(var_pairs / n),
        var_se=var_pairs * math.sqrt(2.0 / (n - 1.0)),
    )


@dataclass(frozen=True)
class ComparisonRow:
    """z-scores of one output mode against its analytic prediction."""

    mode: int
    role: str
    z_mean_x: float
    z_mean_p: float
    z_var_x: float
    z_var_p: float
    z_fidelity: float

    @property
    def max_abs_z(self) -> float:
        return max(
            abs(self.z_mean_x),
            abs(self.z_mean_p),
            abs(self.z_var_x),
            abs(self.z_var_p),
            abs(self.z_fidelity),
        )

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "role": self.role,
            "z_mean_x": self.z_mean_x,
            "z_mean_p": self.z_mean_p,
            "z_var_x": self.z_var_x,
            "z_var_p": self.z_var_p,
            "z_fidelity": self.z_fidelity,
        }


@dataclass(frozen=True)
class ComparisonSummary:
    """All per-mode z-scores plus the overall verdict."""

    rows: tuple[ComparisonRow, ...]
    threshold: float
    max_abs_z: float
    passed: bool

    def flagged(self) -> list[int]:
        return [row.mode for row in self.rows if row.max_abs_z > self.threshold]

    def to_dict(self) -> dict:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "threshold": self.threshold,
            "max_abs_z": self.max_abs_z,
            "passed": self.passed,
        }


def _z(diff: float, se: float) -> float:
    if se == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return float(diff / se)


def compare_to_analytic(
    emp: EmpiricalMoments,
    report: NoiseReport,
    layout: MachineLayout,
    threshold: float = Z_FLAG,
) -> ComparisonSummary:
    """z-scores of empirical moments against the closed-form predictions.

    Clone and anticlone modes are checked against their predicted means,
    variances, and fidelities (the latter recomputed from the empirical
    moments via :func:`fidelity_with_coherent`, with a delta-method
    standard error); residual modes must look like vacuum.  Any
    |z| > threshold marks the summary as failed.
    """
    if emp.mode_count != layout.total_modes:
        raise DomainError(
            f"moments cover {emp.mode_count} modes, layout has {layout.total_modes}"
        )
    if layout.anticlone_slots and report.var_anticlone is None:
        raise DomainError("layout has anticlones but the report carries none")

    psi = emp.psi
    sqrt2 = math.sqrt(2.0)
    expectations = {}
    for mode in layout.clone_slots:
        expectations[mode] = ("clone", psi, report.var_clone, report.f_clone)
    for mode in layout.anticlone_slots:
        expectations[mode] = (
            "anticlone",
            psi.conjugate(),
            report.var_anticlone,
            report.f_anticlone,
        )
    for mode in layout.residual_slots:
        expectations[mode] = ("residual", 0j, 0.5, 1.0)

    rows = []
    for mode in sorted(expectations):
        role, amp, var_pred, f_pred = expectations[mode]
        mean_pred = (sqrt2 * amp.real, sqrt2 * amp.imag)
        mx, mp = emp.means[mode]
        vx, vp = emp.covariances[mode, 0, 0], emp.covariances[mode, 1, 1]
        se_mx, se_mp = emp.mean_se[mode]
        se_vx, se_vp = emp.var_se[mode]

        f_emp = fidelity_with_coherent(emp.mode_state(mode), 0, amp)
        # Delta method through f = 1/(1 + n_th) with n_th estimated from
        # the two quadrature variances.
        n_th_emp = 0.5 * (vx + vp) - 0.5
        se_n_th = 0.5 * math.hypot(se_vx, se_vp)
        se_f = se_n_th / (1.0 + n_th_emp) ** 2

        rows.append(
            ComparisonRow(
                mode=mode,
                role=role,
                z_mean_x=_z(mx - mean_pred[0], se_mx),
                z_mean_p=_z(mp - mean_pred[1], se_mp),
                z_var_x=_z(vx - var_pred, se_vx),
                z_var_p=_z(vp - var_pred, se_vp),
                z_fidelity=_z(f_emp - f_pred, se_f),
            )
        )
    max_abs_z = float(max(row.max_abs_z for row in rows))
    return ComparisonSummary(
        rows=tuple(rows),
        threshold=threshold,
        max_abs_z=max_abs_z,
        passed=max_abs_z <= threshold,
    )


__all__ = [
    "BLOCK_SIZE",
    "STREAM_VERSION",
    "Z_FLAG",
    "ComparisonRow",
    "ComparisonSummary",
    "EmpiricalMoments",
    "SampleConfig",
    "block_normals",
    "compare_to_analytic",
    "simulate",
]
