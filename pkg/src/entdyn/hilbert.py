"""Bipartite Hilbert-space bookkeeping.

State construction, row-major tensor indexing, the two-copy index
isomorphism, and spectral decomposition of density matrices. Every other
module goes through :func:`flat_index`; nothing inlines the arithmetic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError, ValidationError

NORM_TOL = 1e-12
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-8
EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class HilbertDims:
    """Dimensions (d1, d2) of the two local factors."""

    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 2 or self.d2 < 2:
            raise ValidationError(f"local dimensions must be >= 2, got {self.d1}x{self.d2}")

    @property
    def total(self) -> int:
        return self.d1 * self.d2


def flat_index(n: int, m: int, dims: HilbertDims) -> int:
    """Row-major flattening of the product basis label |n m> -> n*d2 + m."""
    if not (0 <= n < dims.d1):
        raise DomainError(f"first-factor index {n} out of range [0, {dims.d1})")
    if not (0 <= m < dims.d2):
        raise DomainError(f"second-factor index {m} out of range [0, {dims.d2})")
    return n * dims.d2 + m


def copy_space_map(k: int, l: int, m: int, n: int, dims: HilbertDims) -> tuple[int, int]:
    """Map a basis element of H1 x H1 x H2 x H2 to the reordered two-copy space.

    |i_k i_l> (x) |j_m j_n| corresponds to component
    (flat_index(k, m), flat_index(l, n)) of |phi> (x) |phi'>, each copy
    living on H1 x H2.
    """
    return flat_index(k, m, dims), flat_index(l, n, dims)


def _as_immutable(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector on H1 (x) H2, row-major flattened."""

    dims: HilbertDims
    amp: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amp, dtype=complex).reshape(-1)
        if amp.size != self.dims.total:
            raise ValidationError(
                f"amplitude vector has length {amp.size}, expected {self.dims.total}"
            )
        norm2 = float(np.sum(np.abs(amp) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(f"state not normalized: sum |amp|^2 = {norm2!r}")
        object.__setattr__(self, "amp", _as_immutable(amp))

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to a d1 x d2 coefficient matrix."""
        return self.amp.reshape(self.dims.d1, self.dims.d2)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amp, self.amp.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, numerically-PSD matrix on H1 (x) H2."""

    dims: HilbertDims
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        N = self.dims.total
        if mat.shape != (N, N):
            raise ValidationError(f"matrix shape {mat.shape}, expected ({N}, {N})")
        asym = float(np.max(np.abs(mat - mat.conj().T)))
        if asym > HERM_TOL:
            raise ValidationError(f"matrix not Hermitian: max asymmetry {asym:.3e}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace {tr!r} differs from 1 beyond {TRACE_TOL}")
        lo = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)[0])
        if lo < -PSD_TOL:
            raise ValidationError(f"smallest eigenvalue {lo:.3e} below -{PSD_TOL}")
        object.__setattr__(self, "mat", _as_immutable(mat))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigen-decomposition of a density matrix, eigenvalues decreasing.

    ``subnormalized[i]`` is sqrt(mu_i) * eigenvector i; their projectors sum
    back to rho up to truncation at the eigenvalue cutoff.
    """

    dims: HilbertDims
    eigenvalues: np.ndarray
    eigenstates: list = field(repr=False)
    subnormalized: list = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.eigenvalues)


def two_term_state(a: complex, b: complex, m1: int, m2: int, n1: int, n2: int,
                   dims: HilbertDims) -> PureState:
    """Build the two-term superposition a|m1 m2> + b|n1 n2>."""
    if (m1, m2) == (n1, n2):
        raise ValidationError("the two basis labels must differ")
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > NORM_TOL:
        raise ValidationError("|a|^2 + |b|^2 must equal 1")
    amp = np.zeros(dims.total, dtype=complex)
    amp[flat_index(m1, m2, dims)] = a
    amp[flat_index(n1, n2, dims)] = b
    return PureState(dims, amp)


def bell_state(kind: str, dims: HilbertDims | None = None) -> PureState:
    """One of the four maximally entangled two-qubit states, optionally
    embedded in a larger d1 x d2 space."""
    dims = dims or HilbertDims(2, 2)
    s = 1.0 / np.sqrt(2.0)
    table = {
        "psi_plus": (s, s, 0, 1, 1, 0),
        "psi_minus": (s, -s, 0, 1, 1, 0),
        "phi_plus": (s, s, 0, 0, 1, 1),
        "phi_minus": (s, -s, 0, 0, 1, 1),
    }
    try:
        a, b, m1, m2, n1, n2 = table[kind]
    except KeyError:
        raise DomainError(f"unknown Bell state {kind!r}") from None
    return two_term_state(a, b, m1, m2, n1, n2, dims)


def symmetrize(mat: np.ndarray, warn_above: float = 1e-10) -> np.ndarray:
    """(M + M^dagger)/2, warning when the discarded asymmetry is large."""
    asym = float(np.max(np.abs(mat - mat.conj().T)))
    if asym > warn_above:
        warnings.warn(f"symmetrizing matrix with asymmetry {asym:.3e}", stacklevel=2)
    return (mat + mat.conj().T) / 2.0


def spectral(rho: DensityMatrix, cutoff: float = EIG_CUTOFF) -> SpectralDecomposition:
    """Eigen-decompose rho, keeping eigenvalues above ``cutoff``, decreasing."""
    mat = symmetrize(np.asarray(rho.mat))
    try:
        vals, vecs = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed on {mat.shape} matrix: {exc}") from exc
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    keep = vals > cutoff
    vals, vecs = vals[keep], vecs[:, keep]
    states = [PureState(rho.dims, vecs[:, i]) for i in range(vals.size)]
    sub = [np.sqrt(vals[i]) * vecs[:, i] for i in range(vals.size)]
    return SpectralDecomposition(rho.dims, _as_immutable(vals), states, sub)
