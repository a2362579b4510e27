"""Remote creation of coherence over a shared singlet.

Alice knows a target qubit ``|psi> = alpha|0> + beta|1>`` and wants Bob to end
up holding a state with the same l1 coherence ``2|alpha||beta|``. The
noiseless scheme uses the singlet directly. The noisy scenarios send Bob's
half through a quantum SWITCH, post-select the control on ``|+>``, and then
let Alice measure in ``{|psi>, |psi_bar>}``:

* ``A``: two complete depolarizing channels;
* ``B``: complete depolarizing (first) and the rotation ``U(gamma, delta)`` (second);
* ``C``: two partial depolarizing channels of equal strength ``q``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np
from scipy.optimize import minimize

from . import channels as ch
from . import measures as ms
from .linalg import (
    I2,
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    SIGMA_Y,
    DensityMatrix,
    dagger,
    kron,
)

SCENARIOS = ("noiseless", "A", "B", "C")


@dataclass(frozen=True)
class TargetQubit:
    """Pure qubit ``alpha|0> + beta|1>`` that Alice wants to reproduce remotely."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm:.12g}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def normalized(cls, alpha: complex, beta: complex) -> "TargetQubit":
        norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if norm == 0:
            raise ValueError("alpha and beta cannot both be zero")
        return cls(alpha / norm, beta / norm)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "TargetQubit":
        return cls(np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2))

    @property
    def phi(self) -> float:
        """Relative phase ``arg(alpha* beta)``."""
        return float(np.angle(np.conj(self.alpha) * self.beta))

    @property
    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    @property
    def ket_bar(self) -> np.ndarray:
        """Orthogonal partner ``alpha*|1> - beta*|0>``."""
        return np.array([-np.conj(self.beta), np.conj(self.alpha)], dtype=complex)

    @property
    def coherence(self) -> float:
        return 2 * abs(self.alpha) * abs(self.beta)


@dataclass(frozen=True)
class ScenarioParams:
    scenario: str
    target: TargetQubit
    p: Optional[float] = None
    gamma: Optional[float] = None
    delta: Optional[float] = None
    q: Optional[float] = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        needed = {
            "noiseless": set(),
            "A": {"p"},
            "B": {"p", "gamma", "delta"},
            "C": {"p", "q"},
        }[self.scenario]
        for name in ("p", "gamma", "delta", "q"):
            present = getattr(self, name) is not None
            if name in needed and not present:
                raise ValueError(f"scenario {self.scenario} requires parameter {name}")
            if name not in needed and present:
                raise ValueError(f"parameter {name} does not apply to scenario {self.scenario}")
            if present:
                value = float(getattr(self, name))
                if not np.isfinite(value):
                    raise ValueError(f"parameter {name} must be finite")
                object.__setattr__(self, name, value)
        for name in ("p", "q"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"scenario": self.scenario}
        for name in ("p", "gamma", "delta", "q"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        out["alpha"] = [self.target.alpha.real, self.target.alpha.imag]
        out["beta"] = [self.target.beta.real, self.target.beta.imag]
        return out


@dataclass
class ProtocolReport:
    """Everything measured in one protocol run.

    ``coherence_numeric`` is Bob's coherence after the ``psi`` outcome;
    ``coherence_numeric_psibar`` the same after ``psi_bar``. Fields that do
    not apply to a scenario are ``None``.
    """

    params: ScenarioParams
    control_plus_probability: Optional[float]
    bob_state_psi: DensityMatrix
    bob_state_psibar: DensityMatrix
    outcome_probabilities: tuple[float, float]
    coherence_numeric: float
    coherence_numeric_psibar: float
    coherence_analytic: float
    discord_shared: float
    min_pt_eigenvalue: float
    coherence_fraction: Optional[float] = None
    baseline_coherence: Optional[float] = None
    advantage: Optional[float] = None
    discord_analytic: Optional[float] = None
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        def mat(m):
            return {"real": np.real(m.matrix).tolist(), "imag": np.imag(m.matrix).tolist()}

        out = {
            "params": self.params.as_dict(),
            "control_plus_probability": self.control_plus_probability,
            "outcome_probabilities": list(self.outcome_probabilities),
            "bob_state_psi": mat(self.bob_state_psi),
            "bob_state_psibar": mat(self.bob_state_psibar),
        }
        skip = {"params", "control_plus_probability", "outcome_probabilities",
                "bob_state_psi", "bob_state_psibar", "extras"}
        for name, value in asdict(self).items():
            if name not in skip:
                out[name] = value
        out["extras"] = dict(self.extras)
        return out


def epr_singlet() -> DensityMatrix:
    """``(|01> - |10>)/sqrt(2)`` on (Alice, Bob)."""
    ket = (np.kron(KET0, KET1) - np.kron(KET1, KET0)) / np.sqrt(2)
    return DensityMatrix.from_ket(ket, (2, 2))


def alice_basis_measurement(rho12: DensityMatrix, target: TargetQubit) -> list[ch.MeasurementResult]:
    """Alice measures in ``{|psi>, |psi_bar>}``; results hold Bob's conditional states."""
    if rho12.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got layout {rho12.dims}")
    return ch.measure_register(rho12, 0, [target.ket, target.ket_bar], labels=["psi", "psi_bar"])


def run_noiseless(target: TargetQubit) -> ProtocolReport:
    """Alice rotates by ``U(alpha, beta)^dagger``, measures ``{|0>, |1>}``; Bob fixes outcome 0 with ``i sigma_y``."""
    singlet = epr_singlet()
    u = ch.state_unitary(target.alpha, target.beta)
    rotated = DensityMatrix(kron(dagger(u), I2) @ singlet.matrix @ kron(u, I2), (2, 2))
    zero, one = ch.measure_register(rotated, 0, [KET0, KET1], labels=["0", "1"])
    fix = 1j * SIGMA_Y
    bob_psi = one.post_state
    bob_fixed = DensityMatrix(fix @ zero.post_state.matrix @ dagger(fix))
    breakdown = ms.discord_bruteforce(singlet)
    return ProtocolReport(
        params=ScenarioParams("noiseless", target),
        control_plus_probability=None,
        bob_state_psi=bob_psi,
        bob_state_psibar=bob_fixed,
        outcome_probabilities=(one.probability, zero.probability),
        coherence_numeric=ms.l1_coherence(bob_psi),
        coherence_numeric_psibar=ms.l1_coherence(bob_fixed),
        coherence_analytic=target.coherence,
        discord_shared=breakdown.discord,
        min_pt_eigenvalue=ms.min_pt_eigenvalue(singlet),
        coherence_fraction=_fraction(ms.l1_coherence(bob_psi), target),
    )


def switch_for(params: ScenarioParams) -> ch.SwitchChannel:
    control = ch.ControlSpec(params.p)
    if params.scenario == "A":
        dep = ch.complete_depolarizing()
        return ch.switch_channel(dep, dep, control)
    if params.scenario == "B":
        u = ch.unitary_channel(ch.unitary_u(params.gamma, params.delta), label="U(gamma, delta)")
        return ch.switch_channel(ch.complete_depolarizing(), u, control)
    if params.scenario == "C":
        dep = ch.partial_depolarizing(params.q)
        return ch.switch_channel(dep, dep, control)
    raise ValueError(f"scenario {params.scenario!r} has no SWITCH")


def conditional_shared_states(sw: ch.SwitchChannel) -> list[ch.MeasurementResult]:
    """Send Bob's half of the singlet through ``sw`` and measure the control in ``{|+>, |->}``."""
    out = ch.apply_switch_to_second_qubit(epr_singlet(), sw)
    return ch.measure_register(out, 2, [KET_PLUS, KET_MINUS], labels=["+", "-"])


def shared_state_plus(params: ScenarioParams) -> tuple[float, DensityMatrix]:
    plus, _ = conditional_shared_states(switch_for(params))
    return plus.probability, plus.post_state


def _fraction(coherence: float, target: TargetQubit) -> Optional[float]:
    return coherence / target.coherence if target.coherence > 0 else None


def _run_switch(params: ScenarioParams, analytic: float, discord_analytic: Optional[float]) -> ProtocolReport:
    plus, minus = conditional_shared_states(switch_for(params))
    rho12 = plus.post_state
    psi, psibar = alice_basis_measurement(rho12, params.target)
    bob_psi, bob_psibar = psi.post_state, psibar.post_state
    c_num = ms.l1_coherence(bob_psi)
    return ProtocolReport(
        params=params,
        control_plus_probability=plus.probability,
        bob_state_psi=bob_psi,
        bob_state_psibar=bob_psibar,
        outcome_probabilities=(psi.probability, psibar.probability),
        coherence_numeric=c_num,
        coherence_numeric_psibar=ms.l1_coherence(bob_psibar),
        coherence_analytic=analytic,
        discord_shared=ms.discord_bruteforce(rho12).discord,
        min_pt_eigenvalue=ms.min_pt_eigenvalue(rho12),
        coherence_fraction=_fraction(c_num, params.target),
        discord_analytic=discord_analytic,
        extras={"control_minus_probability": minus.probability},
    )


# --- scenario A: two complete depolarizing channels -------------------------

def coherence_A_analytic(p: float, target: TargetQubit) -> float:
    k = ch.ControlSpec(p).k
    return 2 * k * abs(target.alpha) * abs(target.beta) / (2 + k)


def bob_state_A_analytic(p: float, target: TargetQubit) -> np.ndarray:
    k = ch.ControlSpec(p).k
    a, b = target.alpha, target.beta
    inner = np.array([[abs(b) ** 2, -a * np.conj(b)], [-np.conj(a) * b, abs(a) ** 2]])
    return (I2 + k * inner) / (2 + k)


def run_scenario_A(p: float, target: TargetQubit) -> ProtocolReport:
    params = ScenarioParams("A", target, p=p)
    return _run_switch(params, coherence_A_analytic(p, target), ms.discord_scenario_A(p))


# --- scenario B: complete depolarizing and a unitary ------------------------

def _coherence_B(k, gamma, delta, a, b):
    phase = np.abs(np.exp(-1j * delta) * np.conj(a) * b - np.exp(1j * delta) * a * np.conj(b))
    return 2 * k * np.sin(gamma / 2) ** 2 * phase / (1 + 2 * k * np.cos(gamma / 2) ** 2)


def coherence_B_analytic(p: float, gamma: float, delta: float, target: TargetQubit) -> float:
    k = ch.ControlSpec(p).k
    return float(_coherence_B(k, gamma, delta, target.alpha, target.beta))


def bob_state_B_analytic(p: float, gamma: float, delta: float, target: TargetQubit) -> np.ndarray:
    k = ch.ControlSpec(p).k
    a, b = target.alpha, target.beta
    u = ch.unitary_u(gamma, delta)
    ud = dagger(u)
    phase = np.exp(-1j * delta) * np.conj(a) * b - np.exp(1j * delta) * a * np.conj(b)
    num = I2 + k * np.cos(gamma / 2) * (ud + u) + k * np.sin(gamma / 2) * (ud - u) * phase
    return num / (2 + 4 * k * np.cos(gamma / 2) ** 2)


def perfect_coherence_B(p: float, target: TargetQubit) -> dict[str, Any]:
    """Maximize the analytic scenario-B coherence over ``(gamma, delta)``.

    Deterministic: a dense grid followed by a bounded local polish.
    """
    k = ch.ControlSpec(p).k
    g, d = np.meshgrid(np.linspace(0, np.pi, 181), np.linspace(0, 2 * np.pi, 361), indexing="ij")
    values = _coherence_B(k, g, d, target.alpha, target.beta)
    idx = np.unravel_index(np.argmax(values), values.shape)
    best = (float(values[idx]), float(g[idx]), float(d[idx]))
    res = minimize(
        lambda x: -coherence_B_analytic(p, x[0], x[1], target),
        x0=[best[1], best[2]],
        bounds=[(0, np.pi), (0, 2 * np.pi)],
        method="L-BFGS-B",
    )
    value, (g_opt, d_opt) = -float(res.fun), res.x
    if value < best[0]:
        value, g_opt, d_opt = best
    return {
        "max_coherence": value,
        "target_coherence": target.coherence,
        "gamma_opt": float(g_opt),
        "delta_opt": float(d_opt),
        "derived_condition": "p = 1/2, gamma = pi, delta = phi +/- pi/2",
        "stated_condition": "gamma = (2n+1) pi/2, delta = pi/2 - phi",
    }


def scenario_B_discord_report(p: float, gamma: float, delta: float) -> dict[str, float]:
    """Closed-form scenario-B discord next to the brute-force value on the numeric state."""
    target = TargetQubit(1.0, 0.0)
    _, rho12 = shared_state_plus(ScenarioParams("B", target, p=p, gamma=gamma, delta=delta))
    brute = ms.discord_bruteforce(rho12)
    analytic = ms.discord_scenario_B(p, gamma, delta)
    return {
        "p": p,
        "gamma": gamma,
        "delta": delta,
        "discord_analytic": analytic,
        "discord_bruteforce": brute.discord,
        "mutual_information": brute.mutual_information,
        "deviation": analytic - brute.discord,
    }


def run_scenario_B(p: float, gamma: float, delta: float, target: TargetQubit) -> ProtocolReport:
    params = ScenarioParams("B", target, p=p, gamma=gamma, delta=delta)
    d_analytic = ms.discord_scenario_B(p, gamma, delta) if 0 <= delta <= np.pi / 2 else None
    report = _run_switch(params, coherence_B_analytic(p, gamma, delta, target), d_analytic)
    report.extras["pt_eigenvalues_analytic"] = list(ms.pt_eigs_scenario_B(p, gamma))
    if d_analytic is not None:
        report.extras["discord_deviation"] = d_analytic - report.discord_shared
    report.extras["perfect_coherence"] = perfect_coherence_B(p, target)
    return report


# --- scenario C: two partial depolarizing channels --------------------------

def coherence_fraction_C(p: float, q: float) -> float:
    k = ch.ControlSpec(p).k
    num = 2 * (1 - q) ** 2 + (4 - 8 * q + 5 * q**2) * k
    den = -2 - (4 - 3 * q**2) * k
    return abs(num / den)


def coherence_C_analytic(p: float, q: float, target: TargetQubit) -> float:
    return target.coherence * coherence_fraction_C(p, q)


def baseline_sequential_C(q: float, target: TargetQubit) -> float:
    """Coherence reached when the two channels act one after the other (no SWITCH)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    return target.coherence * (1 - q) ** 2


def baseline_sequential_C_numeric(q: float, target: TargetQubit) -> float:
    dep = ch.partial_depolarizing(q)
    shared = ch.sequential_on_second_qubit(epr_singlet(), dep, dep)
    psi, _ = alice_basis_measurement(shared, target)
    return ms.l1_coherence(psi.post_state)


def advantage_C(p: float, q: float, target: TargetQubit | None = None) -> float:
    """Coherence fraction gained by the SWITCH over sequential use, ``R_c - (1-q)^2``.

    Independent of the target for any target with nonzero coherence.
    """
    return coherence_fraction_C(p, q) - (1 - q) ** 2


def run_scenario_C(p: float, q: float, target: TargetQubit) -> ProtocolReport:
    params = ScenarioParams("C", target, p=p, q=q)
    report = _run_switch(params, coherence_C_analytic(p, q, target), None)
    baseline = baseline_sequential_C_numeric(q, target)
    report.baseline_coherence = baseline
    if report.coherence_fraction is not None:
        report.advantage = report.coherence_fraction - baseline / target.coherence
    report.extras["baseline_coherence_analytic"] = baseline_sequential_C(q, target)
    report.extras["advantage_analytic"] = advantage_C(p, q)
    return report


def run(params: ScenarioParams) -> ProtocolReport:
    if params.scenario == "noiseless":
        return run_noiseless(params.target)
    if params.scenario == "A":
        return run_scenario_A(params.p, params.target)
    if params.scenario == "B":
        return run_scenario_B(params.p, params.gamma, params.delta, params.target)
    return run_scenario_C(params.p, params.q, params.target)
