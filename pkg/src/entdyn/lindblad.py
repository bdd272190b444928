"""Local Markovian decoherence generators and time propagation.

Each subsystem couples independently to its own reservoir, and both
couplings have the same form, so the full generator is the sum of the
local one lifted to each factor: L (x) 1 + 1 (x) L acting on rho through

    L rho = sum_i Gamma_i/2 (2 L_i rho L_i^+ - L_i^+ L_i rho - rho L_i^+ L_i).

Two propagation backends: a dense superoperator matrix exponential
(reference, small systems) and direct right/left matrix products with
adaptive step-doubling RK4 (any size).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import expm

from .errors import ConfigurationError, DomainError, IntegrityError, NumericError
from .hilbert import DensityMatrix, HilbertDims, PureState, symmetrize


class EnvironmentKind(Enum):
    DEPHASING = "dephasing"
    THERMAL = "thermal"
    INFINITE_TEMPERATURE = "infinite_temperature"


class LadderKind(Enum):
    QUBIT_SIGMA = "qubit"
    BOSONIC_TRUNCATED = "bosonic"


@dataclass(frozen=True)
class EnvironmentModel:
    """Tagged description of the local decoherence channel.

    ``gamma`` is Gamma for dephasing/thermal channels and Gamma-tilde
    (the constant product Gamma*nbar of the limit) for the
    infinite-temperature one.
    """

    kind: EnvironmentKind
    gamma: float
    nbar: float = 0.0
    ladder: LadderKind = LadderKind.BOSONIC_TRUNCATED

    def __post_init__(self):
        if self.gamma < 0:
            raise ConfigurationError("rate must be non-negative")
        if self.nbar < 0:
            raise ConfigurationError("mean thermal occupation must be non-negative")


def annihilation(d: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, a|n> = sqrt(n)|n-1>, a|d-1> capped."""
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)


def sigma_minus() -> np.ndarray:
    return np.array([[0, 1], [0, 0]], dtype=complex)


def _lowering(model: EnvironmentModel, d: int) -> np.ndarray:
    if model.ladder is LadderKind.QUBIT_SIGMA:
        if d != 2:
            raise ConfigurationError(f"qubit ladder requires d = 2, got d = {d}")
        return sigma_minus()
    return annihilation(d)


def local_jump_operators(model: EnvironmentModel, d: int) -> list[tuple[np.ndarray, float]]:
    """Jump operators (matrix, rate) of the local channel on one subsystem.

    Dephasing uses the number operator a^+a (sigma_+ sigma_- for qubits)
    at rate Gamma. A thermal bath decays at Gamma(nbar+1) and excites at
    Gamma*nbar; nbar = 0 reduces entrywise to the pure-decay channel. The
    infinite-temperature channel is the nbar->inf, Gamma->0 limit at fixed
    Gamma*nbar = Gamma-tilde: decay and excitation at the same rate.
    """
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    a = _lowering(model, d)
    adag = a.conj().T
    if model.kind is EnvironmentKind.DEPHASING:
        return [(adag @ a, model.gamma)]
    if model.kind is EnvironmentKind.THERMAL:
        if model.nbar == 0.0:
            return _zero_temperature_jump_operators(model, d)
        return [(a, model.gamma * (model.nbar + 1.0)), (adag, model.gamma * model.nbar)]
    if model.kind is EnvironmentKind.INFINITE_TEMPERATURE:
        return [(a, model.gamma), (adag, model.gamma)]
    raise ConfigurationError(f"unknown environment kind {model.kind!r}")


def _zero_temperature_jump_operators(model, d):
    # dedicated zero-temperature path: pure decay, single jump operator
    return [(_lowering(model, d), model.gamma)]


@dataclass(frozen=True)
class Generator:
    """Lindblad generator for two identical local channels on d1 x d2."""

    dims: HilbertDims
    model: EnvironmentModel
    jumps: list = field(repr=False)          # lifted (L, rate) on the full space
    jump_products: list = field(repr=False)  # matching L^+ L

    @classmethod
    def build(cls, model: EnvironmentModel, dims: HilbertDims) -> "Generator":
        lifted = []
        for d, embed in ((dims.d1, lambda L: np.kron(L, np.eye(dims.d2))),
                         (dims.d2, lambda L: np.kron(np.eye(dims.d1), L))):
            for L, rate in local_jump_operators(model, d):
                lifted.append((embed(L), rate))
        products = [(L.conj().T @ L) for L, _ in lifted]
        return cls(dims, model, lifted, products)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """d rho / dt for a raw matrix (no invariant checks)."""
        out = np.zeros_like(rho, dtype=complex)
        for (L, rate), LdL in zip(self.jumps, self.jump_products):
            out += (rate / 2.0) * (2.0 * (L @ rho @ L.conj().T) - LdL @ rho - rho @ LdL)
        return out

    def superoperator(self) -> np.ndarray:
        """Dense N^2 x N^2 matrix acting on row-major vec(rho)."""
        N = self.dims.total
        eye = np.eye(N)
        S = np.zeros((N * N, N * N), dtype=complex)
        for (L, rate), LdL in zip(self.jumps, self.jump_products):
            S += (rate / 2.0) * (2.0 * np.kron(L, L.conj())
                                 - np.kron(LdL, eye) - np.kron(eye, LdL.T))
        return S


def apply_generator(gen: Generator, rho: DensityMatrix) -> np.ndarray:
    if rho.dims != gen.dims:
        raise DomainError(f"dimension mismatch: generator {gen.dims}, state {rho.dims}")
    return gen.apply(np.asarray(rho.mat))


@dataclass(frozen=True)
class IntegratorConfig:
    """Propagation settings.

    method: "auto" picks the matrix exponential for N <= 16 and RK4 above;
    "expm" and "rk4" force a backend. ``adaptive=False`` runs fixed-step
    RK4 with ``initial_step`` (used by convergence-order tests).
    """

    method: str = "auto"
    abs_tol: float = 1e-10
    initial_step: float = 0.01
    max_steps: int = 2_000_000
    adaptive: bool = True
    expm_limit: int = 16

    def backend(self, N: int) -> str:
        if self.method == "auto":
            return "expm" if N <= self.expm_limit else "rk4"
        if self.method not in ("expm", "rk4"):
            raise ConfigurationError(f"unknown integrator method {self.method!r}")
        return self.method


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: list
    model: EnvironmentModel
    initial: DensityMatrix


def _as_density(rho0) -> DensityMatrix:
    if isinstance(rho0, PureState):
        return rho0.projector()
    return rho0


def _rk4_step(gen: Generator, rho: np.ndarray, h: float) -> np.ndarray:
    k1 = gen.apply(rho)
    k2 = gen.apply(rho + 0.5 * h * k1)
    k3 = gen.apply(rho + 0.5 * h * k2)
    k4 = gen.apply(rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_advance(gen: Generator, rho: np.ndarray, t_span: float,
                 cfg: IntegratorConfig) -> np.ndarray:
    """Advance by t_span with embedded step-doubling RK4."""
    if t_span == 0.0:
        return rho
    if not cfg.adaptive:
        n = max(1, int(round(t_span / cfg.initial_step)))
        h = t_span / n
        for _ in range(n):
            rho = _rk4_step(gen, rho, h)
        return symmetrize(rho, warn_above=np.inf)
    t, h = 0.0, min(cfg.initial_step, t_span)
    for _ in range(cfg.max_steps):
        if t >= t_span:
            return rho
        h = min(h, t_span - t)
        if h < 1e-15 * max(t_span, 1.0):
            raise NumericError(f"step size underflow at t = {t:.6g}")
        full = _rk4_step(gen, rho, h)
        half = _rk4_step(gen, _rk4_step(gen, rho, h / 2.0), h / 2.0)
        err = float(np.max(np.abs(full - half)))
        if err <= cfg.abs_tol:
            t += h
            rho = symmetrize(half, warn_above=np.inf)
        factor = 0.9 * (cfg.abs_tol / err) ** 0.2 if err > 0 else 2.0
        h *= min(2.0, max(0.2, factor))
    raise NumericError(f"step budget ({cfg.max_steps}) exhausted at t = {t:.6g}")


def _check_integrity(mat: np.ndarray, dims: HilbertDims) -> DensityMatrix:
    tr = float(np.real(np.trace(mat)))
    lo = float(np.linalg.eigvalsh(mat)[0])
    if abs(tr - 1.0) > 1e-6 or lo < -1e-6:
        raise IntegrityError(f"propagated state broke invariants: trace {tr!r}, min eig {lo:.3e}")
    return DensityMatrix(dims, mat)


def propagate(rho0, model: EnvironmentModel, t: float,
              cfg: IntegratorConfig = IntegratorConfig()) -> DensityMatrix:
    """rho(t) from the initial state under the given channel."""
    if t < 0:
        raise DomainError("propagation time must be non-negative")
    rho0 = _as_density(rho0)
    if t == 0.0:
        return rho0
    gen = Generator.build(model, rho0.dims)
    mat = np.asarray(rho0.mat)
    if cfg.backend(rho0.dims.total) == "expm":
        N = rho0.dims.total
        out = (expm(gen.superoperator() * t) @ mat.reshape(-1)).reshape(N, N)
        out = symmetrize(out, warn_above=np.inf)
    else:
        out = _rk4_advance(gen, mat, t, cfg)
    return _check_integrity(out, rho0.dims)


def evolve_trajectory(rho0, model: EnvironmentModel, times,
                      cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    """States at every requested time, reusing the previous state per segment."""
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise ConfigurationError("time grid must start at 0")
    if np.any(np.diff(times) <= 0) and times.size > 1:
        raise ConfigurationError("time grid must be strictly increasing")
    rho0 = _as_density(rho0)
    N = rho0.dims.total
    states = [rho0]
    if cfg.backend(N) == "expm":
        gen = Generator.build(model, rho0.dims)
        S = gen.superoperator()
        steppers: dict[float, np.ndarray] = {}
        vec = np.asarray(rho0.mat).reshape(-1)
        for i, dt in enumerate(np.diff(times)):
            key = round(float(dt), 15)
            if key not in steppers:
                steppers[key] = expm(S * dt)
            vec = steppers[key] @ vec
            mat = symmetrize(vec.reshape(N, N), warn_above=np.inf)
            try:
                states.append(_check_integrity(mat, rho0.dims))
            except IntegrityError as exc:
                raise IntegrityError(f"at t = {times[i + 1]:.6g}: {exc}") from exc
            vec = np.asarray(states[-1].mat).reshape(-1)
    else:
        gen = Generator.build(model, rho0.dims)
        mat = np.asarray(rho0.mat)
        for i, dt in enumerate(np.diff(times)):
            try:
                mat = _rk4_advance(gen, mat, float(dt), cfg)
                states.append(_check_integrity(mat, rho0.dims))
            except (NumericError, IntegrityError) as exc:
                raise type(exc)(f"at t = {times[i + 1]:.6g}: {exc}") from exc
            mat = np.asarray(states[-1].mat)
    return Trajectory(times, states, model, rho0)


def boundary_population(rho: DensityMatrix) -> float:
    """Largest diagonal weight on a level with local index d-1 (truncation probe)."""
    from .hilbert import flat_index

    d1, d2 = rho.dims.d1, rho.dims.d2
    diag = np.real(np.diag(np.asarray(rho.mat)))
    idx = [flat_index(d1 - 1, m, rho.dims) for m in range(d2)]
    idx += [flat_index(n, d2 - 1, rho.dims) for n in range(d1)]
    return float(np.max(diag[idx]))
