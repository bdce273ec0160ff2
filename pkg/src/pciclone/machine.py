"""Multimode cloning machine for coherent states with phase-conjugate inputs.

The machine takes N replicas of a coherent state psi together with N'
replicas of its phase conjugate psi*, and emits M clones plus
M' = M + N' - N anticlones.  It is built from three stages acting on
K modes:

    1. concentrate: a DFT merges the N signal replicas into one mode and
       the N' conjugate replicas into another,
    2. amplify: a two-mode phase-insensitive amplifier of gain G couples
       the two concentrated modes,
    3. distribute: inverse DFTs spread the amplified modes over M clone
       and M' anticlone outputs.

Every clone carries mean exactly psi with added thermal noise (G-1)/M per
mode; anticlones carry psi* with (G-1)/M'.  The closed-form evaluators
here (gains, noise, fidelities, comparison baselines) are what the
explicit transform is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .canonical import (
    CanonicalTransform,
    compose,
    dft_transform,
    embed,
    identity_transform,
    pcia_transform,
)
from .errors import DomainError
from .gaussian import GaussianState, coherent_state


@dataclass(frozen=True)
class CloningConfig:
    """Input/output multiplicities (N, N', M) of a cloning run.

    The anticlone count is not free: mean preservation on both channels
    forces M' = M + N' - N.  Only the amplification regime M >= N is
    supported; M < N would call for attenuation instead.
    """

    n_inputs: int
    n_conj: int
    m_clones: int

    def __post_init__(self):
        n, nc, m = self.n_inputs, self.n_conj, self.m_clones
        for label, value in (("n_inputs", n), ("n_conj", nc), ("m_clones", m)):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise DomainError(f"{label} must be an integer, got {value!r}")
        if n < 0 or nc < 0:
            raise DomainError(f"input counts must be >= 0, got N={n}, N'={nc}")
        if n + nc < 1:
            raise DomainError("need at least one input replica (N + N' >= 1)")
        if m < 1:
            raise DomainError(f"m_clones must be >= 1, got {m}")
        if m < n:
            raise DomainError(
                f"M={m} < N={n} is the attenuation regime, not supported"
            )

    @property
    def m_anticlones(self) -> int:
        """M' = M + N' - N; >= N' whenever M >= N."""
        return self.m_clones + self.n_conj - self.n_inputs


@dataclass(frozen=True)
class MachineLayout:
    """Slot assignment for the K-mode transform of one machine.

    Input roles partition range(total_modes) into signal replicas,
    conjugate replicas, and the vacua consumed by each distribution
    stage.  Output roles partition the same slots into clones,
    anticlones, and residual modes left over by the concentration DFTs.
    """

    total_modes: int
    signal_slots: tuple[int, ...]
    conjugate_slots: tuple[int, ...]
    clone_vacuum_slots: tuple[int, ...]
    anticlone_vacuum_slots: tuple[int, ...]
    clone_slots: tuple[int, ...]
    anticlone_slots: tuple[int, ...]
    residual_slots: tuple[int, ...]

    def __post_init__(self):
        k = self.total_modes
        everything = range(k)
        inputs = (
            self.signal_slots
            + self.conjugate_slots
            + self.clone_vacuum_slots
            + self.anticlone_vacuum_slots
        )
        outputs = self.clone_slots + self.anticlone_slots + self.residual_slots
        if sorted(inputs) != list(everything):
            raise DomainError("input roles do not partition the mode slots")
        if sorted(outputs) != list(everything):
            raise DomainError("output roles do not partition the mode slots")

    def input_amplitudes(self, psi: complex) -> np.ndarray:
        """Complex amplitude vector: psi on signal slots, conj(psi) on
        conjugate slots, 0 on vacuum slots."""
        amps = np.zeros(self.total_modes, dtype=complex)
        amps[list(self.signal_slots)] = psi
        amps[list(self.conjugate_slots)] = np.conj(psi)
        return amps

    def input_state(self, psi: complex) -> GaussianState:
        """Coherent product state carrying the replicas and vacua."""
        return coherent_state(self.input_amplitudes(psi))


@dataclass(frozen=True)
class NoiseReport:
    """Closed-form predictions for one configuration.

    Thermal photon numbers obey var = 1/2 + n_th and f = 1/(1 + n_th) in
    each channel.  The anticlone fields are None when M' = 0 (no
    anticlone channel exists).  Baselines describe the best standard
    cloner fed the same K = N + N' replicas of psi: variance add
    1/K - 1/M (clamped at zero for M <= K, where standard cloning is
    already perfect) and the matching fidelities.
    """

    gain: float
    n_th_clone: float
    n_th_anticlone: float | None
    var_clone: float
    var_anticlone: float | None
    f_clone: float
    f_anticlone: float | None
    baseline_var: float
    baseline_f: float
    baseline_f_anticlone: float
    measurement_limit_noise: float

    def to_dict(self) -> dict:
        return {
            "gain": self.gain,
            "n_th_clone": self.n_th_clone,
            "n_th_anticlone": self.n_th_anticlone,
            "var_clone": self.var_clone,
            "var_anticlone": self.var_anticlone,
            "f_clone": self.f_clone,
            "f_anticlone": self.f_anticlone,
            "baseline_var": self.baseline_var,
            "baseline_f": self.baseline_f,
            "baseline_f_anticlone": self.baseline_f_anticlone,
            "measurement_limit_noise": self.measurement_limit_noise,
        }


def gain_from_amplitudes(alpha: float, beta: float, gamma: float) -> float:
    """Gain of the minimal-noise amplifier matching the mean constraint.

    For inputs with means alpha*psi and beta*psi* on its two ports, the
    cheapest canonical transform producing mean gamma*psi on port 1 has

        sqrt(G) = (gamma^2 + beta^2)
                  / (alpha*gamma + beta*sqrt(gamma^2 - alpha^2 + beta^2)).

    This is the quotient form of the quadratic-root solution; unlike the
    root form it has no removable singularity at alpha = beta, where it
    equals the limit (gamma^2 + alpha^2) / (2*alpha*gamma) directly.
    Signs are immaterial (they can be absorbed into mode phases), so
    magnitudes are used.  |gamma| < |alpha| would require attenuation
    rather than amplification and is rejected.
    """
    a, b, c = abs(alpha), abs(beta), abs(gamma)
    if a == 0.0 and b == 0.0:
        raise DomainError("alpha and beta cannot both vanish")
    if c < a:
        raise DomainError(
            f"|gamma|={c} < |alpha|={a} is the attenuation regime, not supported"
        )
    root = math.sqrt(c * c - a * a + b * b)
    return ((c * c + b * b) / (a * c + b * root)) ** 2


def gain_from_counts(config: CloningConfig) -> float:
    """Amplifier gain that copies N + N' replicas onto M clones.

    Evaluates sqrt(G) = (M + N') / (sqrt(N M) + sqrt(N' M')), a
    rationalized quotient that is finite and smooth at N = N' where it
    reduces to the balanced value G = (M + N)^2 / (4 M N).  Written this
    way the duality G(N, N', M) = G(N', N, M') holds bit-exactly.
    """
    n, nc, m = config.n_inputs, config.n_conj, config.m_clones
    mc = config.m_anticlones
    return ((m + nc) / (math.sqrt(n * m) + math.sqrt(nc * mc))) ** 2


def asymmetry_gain(n: float, m: float, a: float) -> float:
    """Gain for splitting n total inputs as (1-a)*n signals, a*n conjugates.

    Continuous relaxation of :func:`gain_from_counts` with N = (1-a)n,
    N' = a*n, M' = M + (2a-1)n; non-integer replica counts are allowed.
    Feasibility requires M >= N, i.e. a >= 1 - M/n.
    """
    if n <= 0:
        raise DomainError(f"total input count must be > 0, got {n}")
    if m <= 0:
        raise DomainError(f"clone count must be > 0, got {m}")
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"conjugate fraction must lie in [0, 1], got {a}")
    # Slack of a few ulps so the boundary a = 1 - M/n itself, which is not
    # exactly representable, stays inside the domain.
    if (1.0 - a) * n - m > 1e-9 * max(m, n):
        raise DomainError(
            f"M={m} < (1-a)n={(1.0 - a) * n} is the attenuation regime"
        )
    n_sig = (1.0 - a) * n
    n_con = a * n
    m_anti = max(m + (2.0 * a - 1.0) * n, 0.0)
    return ((m + n_con) / (math.sqrt(n_sig * m) + math.sqrt(n_con * m_anti))) ** 2


def measurement_noise(n_inputs: int, n_conj: int) -> float:
    """Large-M noise floor 1/(sqrt(N) + sqrt(N'))^2 per clone quadrature pair.

    This is the added thermal photon number left when distributing over
    infinitely many clones; equivalently the accuracy of the best joint
    measurement on the same input set.
    """
    if n_inputs < 0 or n_conj < 0:
        raise DomainError("replica counts must be >= 0")
    if n_inputs + n_conj < 1:
        raise DomainError("need at least one input replica")
    return 1.0 / (math.sqrt(n_inputs) + math.sqrt(n_conj)) ** 2


def p_function_density(n_th: float, xi: complex, psi: complex) -> float:
    """Glauber P density of a clone: thermal Gaussian of mean photon
    number n_th centred on the target amplitude psi.

    Normalized so that the integral over the complex plane is 1; the
    n_th -> 0 limit is a Dirac delta and must be handled by the caller.
    """
    if n_th <= 0:
        raise DomainError(f"thermal photon number must be > 0, got {n_th}")
    return math.exp(-abs(xi - psi) ** 2 / n_th) / (math.pi * n_th)


def _standard_baseline(k_inputs: int, m_clones: int) -> tuple[float, float]:
    # Best k -> M cloner without conjugate inputs adds 1/k - 1/M thermal
    # photons; for M <= k copying is already perfect, so clamp at zero.
    added = max(0.0, 1.0 / k_inputs - 1.0 / m_clones)
    return 0.5 + added, 1.0 / (1.0 + added)


def noise_report(config: CloningConfig) -> NoiseReport:
    """All closed-form predictions for one configuration."""
    gain = gain_from_counts(config)
    m, mc = config.m_clones, config.m_anticlones
    n_th = (gain - 1.0) / m
    if mc >= 1:
        n_th_anti = (gain - 1.0) / mc
        var_anti = 0.5 + n_th_anti
        f_anti = 1.0 / (1.0 + n_th_anti)
    else:
        n_th_anti = var_anti = f_anti = None
    k = config.n_inputs + config.n_conj
    baseline_var, baseline_f = _standard_baseline(k, m)
    return NoiseReport(
        gain=gain,
        n_th_clone=n_th,
        n_th_anticlone=n_th_anti,
        var_clone=0.5 + n_th,
        var_anticlone=var_anti,
        f_clone=1.0 / (1.0 + n_th),
        f_anticlone=f_anti,
        baseline_var=baseline_var,
        baseline_f=baseline_f,
        baseline_f_anticlone=k / (k + 1.0),
        measurement_limit_noise=measurement_noise(config.n_inputs, config.n_conj),
    )


def _machine_layout(config: CloningConfig) -> MachineLayout:
    n, nc, m, mc = config.n_inputs, config.n_conj, config.m_clones, config.m_anticlones
    # Both amplifier ports exist even when a channel has no replicas (the
    # slot is then fed vacuum), hence the max(., 1) block widths.
    a1 = 0
    a2 = max(n, 1)
    dist_start = a2 + max(nc, 1)
    clone_extra = tuple(range(dist_start, dist_start + m - 1))
    anti_start = dist_start + m - 1
    anti_extra = tuple(range(anti_start, anti_start + max(mc - 1, 0)))
    total = anti_start + max(mc - 1, 0)

    signal = tuple(range(n))
    conjugate = tuple(range(a2, a2 + nc))
    clone_vac = clone_extra if n else (a1,) + clone_extra
    anti_vac = anti_extra if nc else (a2,) + anti_extra

    clones = (a1,) + clone_extra
    anticlones = (a2,) + anti_extra if mc >= 1 else ()
    leftover = () if mc >= 1 else (a2,)
    residual = tuple(range(1, n)) + tuple(range(a2 + 1, a2 + nc)) + leftover
    return MachineLayout(
        total_modes=total,
        signal_slots=signal,
        conjugate_slots=conjugate,
        clone_vacuum_slots=clone_vac,
        anticlone_vacuum_slots=anti_vac,
        clone_slots=clones,
        anticlone_slots=anticlones,
        residual_slots=residual,
    )


def build_machine(config: CloningConfig) -> tuple[CanonicalTransform, MachineLayout]:
    """Explicit K-mode canonical transform of the machine plus its layout.

    Concentration DFTs act on the replica blocks, the amplifier couples
    the two concentrated ports, and inverse DFTs distribute each port
    over its output block.  Feeding the layout's input state yields
    clones of mean exactly psi and anticlones of mean exactly psi*.
    """
    layout = _machine_layout(config)
    n, nc, mc = config.n_inputs, config.n_conj, config.m_anticlones
    a1, a2 = 0, max(n, 1)
    k = layout.total_modes
    stages = []
    if n > 1:
        stages.append(embed(dft_transform(n), list(range(n)), k))
    if nc > 1:
        stages.append(embed(dft_transform(nc), list(range(a2, a2 + nc)), k))
    stages.append(embed(pcia_transform(gain_from_counts(config)), [a1, a2], k))
    stages.append(
        embed(dft_transform(config.m_clones, inverse=True), list(layout.clone_slots), k)
    )
    if mc > 1:
        stages.append(
            embed(dft_transform(mc, inverse=True), list(layout.anticlone_slots), k)
        )
    transform = identity_transform(k)
    for stage in stages:
        transform = compose(transform, stage)
    return transform, layout


__all__ = [
    "CloningConfig",
    "MachineLayout",
    "NoiseReport",
    "asymmetry_gain",
    "build_machine",
    "gain_from_amplitudes",
    "gain_from_counts",
    "measurement_noise",
    "noise_report",
    "p_function_density",
]
