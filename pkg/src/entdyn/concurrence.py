"""Concurrence estimators for bipartite d1 x d2 states.

The stack, from cheapest to most expensive:

* :func:`wootters` -- the exact two-qubit closed form.
* :func:`pure_concurrence` -- the antisymmetric-projector generalization
  for pure states, c = 2 sqrt(sum of squared 2x2 minors).
* :func:`lower_bound_fixed_z` / :func:`optimize_lower_bound` -- lower
  bounds from singular values of linear combinations of the T^alpha
  matrices of a decomposition.
* :func:`quasipure_concurrence` -- the leading-order truncation valid
  when one eigenvalue of rho dominates.
* :func:`upper_convex_roof` -- numerical ensemble-decomposition search;
  an upper bound, since only local minima are guaranteed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError
from .hilbert import (DensityMatrix, HilbertDims, PureState, flat_index,
                      spectral)

SV_FLOOR = 1e-13  # singular values below this are treated as zero


@dataclass(frozen=True)
class ChiIndex:
    """Multi-index [k, l, m, n] of one antisymmetric basis direction, k<l, m<n."""

    k: int
    l: int
    m: int
    n: int

    def __post_init__(self):
        if not (self.k < self.l and self.m < self.n):
            raise DomainError("chi index requires k < l and m < n")


def chi_indices(dims: HilbertDims) -> list[ChiIndex]:
    return [ChiIndex(k, l, m, n)
            for k in range(dims.d1) for l in range(k + 1, dims.d1)
            for m in range(dims.d2) for n in range(m + 1, dims.d2)]


@dataclass(frozen=True)
class TMatrixSet:
    """The family {T^alpha} of one decomposition, T^alpha_{jk} = <chi_a|phi_j (x) phi_k>."""

    dims: HilbertDims
    chis: list
    mats: np.ndarray  # (n_alpha, r, r), each symmetric

    @property
    def rank(self) -> int:
        return self.mats.shape[1]


@dataclass(frozen=True)
class ZVector:
    """Unit-norm complex weights over the chi indices."""

    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex).reshape(-1)
        if abs(float(np.sum(np.abs(z) ** 2)) - 1.0) > 1e-12:
            raise DomainError("Z vector must have unit norm")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class ConcurrenceEstimate:
    value: float
    estimator: str
    iterations: int = 0
    converged: bool = True
    valid: bool = True

    def __post_init__(self):
        if self.value < 0:
            raise NumericError(f"negative concurrence value {self.value!r}")


def _max_concurrence(dims: HilbertDims) -> float:
    d = min(dims.d1, dims.d2)
    return float(np.sqrt(2.0 * (d - 1) / d))


_SIGMA_YY = np.array([[0, 0, 0, -1],
                      [0, 0, 1, 0],
                      [0, 1, 0, 0],
                      [-1, 0, 0, 0]], dtype=complex)


def wootters_functional(mat: np.ndarray) -> float:
    """max{l1 - l2 - l3 - l4, 0} on a raw (possibly subnormalized) 4x4 block.

    The l_i are the decreasing square roots of the eigenvalues of
    M (sy x sy) M* (sy x sy); conjugation in the computational basis.
    The functional is homogeneous of degree one, so subnormalized blocks
    carry their weight through.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (4, 4):
        raise DomainError(f"expected a 4x4 block, got {mat.shape}")
    R = mat @ _SIGMA_YY @ mat.conj() @ _SIGMA_YY
    ev = np.linalg.eigvals(R).real
    if np.min(ev) < -1e-9:
        raise NumericError(f"Wootters spectrum has eigenvalue {np.min(ev):.3e} < -1e-9")
    lam = np.sqrt(np.clip(ev, 0.0, None))
    lam.sort()
    return float(max(lam[3] - lam[2] - lam[1] - lam[0], 0.0))


def wootters(rho: DensityMatrix) -> ConcurrenceEstimate:
    """Exact two-qubit concurrence."""
    if (rho.dims.d1, rho.dims.d2) != (2, 2):
        raise DomainError(f"Wootters form needs 2x2 subsystems, got {rho.dims}")
    return ConcurrenceEstimate(wootters_functional(np.asarray(rho.mat)), "exact_wootters")


def _minor_sum(coeff: np.ndarray) -> float:
    """sum over k<l, m<n of |c_km c_ln - c_kn c_lm|^2 for a d1 x d2 coefficient matrix."""
    d1, d2 = coeff.shape
    total = 0.0
    for k in range(d1):
        for l in range(k + 1, d1):
            minors = np.outer(coeff[k], coeff[l]) - np.outer(coeff[l], coeff[k])
            iu = np.triu_indices(d2, k=1)
            total += float(np.sum(np.abs(minors[iu]) ** 2))
    return total


def pure_concurrence(psi: PureState) -> ConcurrenceEstimate:
    """Generalized concurrence of a pure state, via the 2x2-minor sum."""
    c = 2.0 * np.sqrt(_minor_sum(psi.as_matrix()))
    return ConcurrenceEstimate(float(c), "pure_exact")


def _sub_concurrence_batch(coeffs: np.ndarray) -> np.ndarray:
    """Pure concurrence of subnormalized states, batched over axis 0.

    Uses c^2 = 2[(tr G)^2 - tr G^2] with G the single-party Gram matrix;
    equal to four times the minor sum (verified by property test).
    """
    G = np.einsum("bij,bkj->bik", coeffs, coeffs.conj())
    tr = np.einsum("bii->b", G).real
    tr2 = np.einsum("bij,bji->b", G, G).real
    return np.sqrt(np.clip(2.0 * (tr * tr - tr2), 0.0, None))


def build_T(decomp: list[np.ndarray], dims: HilbertDims) -> TMatrixSet:
    """T^alpha matrices of a decomposition rho = sum_i |phi_i><phi_i|.

    Via the two-copy index isomorphism,
    T^a_{jk} = phi_j(k,m) phi_k(l,n) + phi_j(l,n) phi_k(k,m)
             - phi_j(k,n) phi_k(l,m) - phi_j(l,m) phi_k(k,n).
    """
    chis = chi_indices(dims)
    phis = np.asarray(decomp, dtype=complex)
    if phis.ndim != 2 or phis.shape[1] != dims.total:
        raise DomainError(f"decomposition vectors must have length {dims.total}")
    C = phis.reshape(-1, dims.d1, dims.d2)
    ks = np.array([x.k for x in chis])
    ls = np.array([x.l for x in chis])
    ms = np.array([x.m for x in chis])
    ns = np.array([x.n for x in chis])
    A, B = C[:, ks, ms], C[:, ls, ns]   # (r, n_alpha)
    E, F = C[:, ks, ns], C[:, ls, ms]
    mats = (np.einsum("ja,ka->ajk", A, B) + np.einsum("ja,ka->ajk", B, A)
            - np.einsum("ja,ka->ajk", E, F) - np.einsum("ja,ka->ajk", F, E))
    return TMatrixSet(dims, chis, mats)


def a_tensor(tset: TMatrixSet) -> np.ndarray:
    """A^{lm}_{jk} = sum_a conj(T^a_{lm}) T^a_{jk}, indexed [l, m, j, k]."""
    return np.einsum("alm,ajk->lmjk", tset.mats.conj(), tset.mats)


def _sv_functional(mat: np.ndarray) -> float:
    sv = np.linalg.svd(mat, compute_uv=False)
    sv = sv[sv > SV_FLOOR]
    if sv.size == 0:
        return 0.0
    return float(max(sv[0] - np.sum(sv[1:]), 0.0))


def lower_bound_fixed_z(tset: TMatrixSet, z: ZVector) -> ConcurrenceEstimate:
    """Lower bound from the singular values of sum_a z_a T^a."""
    if z.z.size != len(tset.chis):
        raise DomainError("Z vector length does not match the chi set")
    T = np.tensordot(z.z, tset.mats, axes=(0, 0))
    try:
        value = _sv_functional(T)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc
    return ConcurrenceEstimate(value, "lower_fixed_z")


@dataclass(frozen=True)
class ZOptConfig:
    restarts: int = 50
    max_iters: int = 400
    tol: float = 1e-10
    seed: int = 7


def _z_objective(mats: np.ndarray, z: np.ndarray) -> float:
    return _sv_functional(np.tensordot(z, mats, axes=(0, 0)))


def optimize_lower_bound(tset: TMatrixSet,
                         cfg: ZOptConfig = ZOptConfig()) -> tuple[ConcurrenceEstimate, ZVector]:
    """Maximize the fixed-Z bound over the unit sphere of Z weights.

    Multi-start: every single-alpha unit vector (each T^alpha is itself a
    lower bound) plus random complex-Gaussian points, refined by
    derivative-free coordinate steps with a shrinking stencil.
    """
    mats = tset.mats
    n = mats.shape[0]
    if n == 1:
        z = np.ones(1, dtype=complex)
        return (ConcurrenceEstimate(_z_objective(mats, z), "lower_optimized",
                                    iterations=1), ZVector(z))
    rng = np.random.default_rng(cfg.seed)
    starts = [np.eye(n, dtype=complex)[i] for i in range(n)]
    for _ in range(cfg.restarts):
        g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        starts.append(g / np.linalg.norm(g))
    best_val, best_z, total_iters, converged = -1.0, starts[0], 0, True
    for z0 in starts:
        z = z0.copy()
        T = np.tensordot(z, mats, axes=(0, 0))
        val = _sv_functional(T)
        step, iters = 0.5, 0
        while iters < cfg.max_iters:
            improved = False
            for a in range(n):
                for direction in (1.0, -1.0, 1.0j, -1.0j):
                    # z + step*dir*e_a, renormalized; the functional is
                    # homogeneous, so work on T directly and divide by |z'|
                    delta = step * direction
                    norm = np.sqrt(1.0 + 2.0 * np.real(np.conj(z[a]) * delta)
                                   + abs(delta) ** 2)
                    v = _sv_functional(T + delta * mats[a]) / norm
                    if v > val + cfg.tol:
                        z[a] += delta
                        z /= norm
                        T = (T + delta * mats[a]) / norm
                        val, improved = v, True
            iters += 1
            if not improved:
                step *= 0.3
                if step < 1e-8:
                    break
        total_iters += iters
        if iters >= cfg.max_iters:
            converged = False
        if val > best_val:
            best_val, best_z = val, z
    est = ConcurrenceEstimate(best_val, "lower_optimized",
                              iterations=total_iters, converged=converged)
    return est, ZVector(best_z)


def best_single_alpha(tset: TMatrixSet) -> ConcurrenceEstimate:
    """Cheapest member of the lower-bound family: the best single T^alpha."""
    value = max(_sv_functional(tset.mats[a]) for a in range(tset.mats.shape[0]))
    return ConcurrenceEstimate(value, "lower_fixed_z", iterations=1)


def quasipure_T(rho: DensityMatrix, cutoff: float = 1e-12) -> np.ndarray:
    """Leading-order T matrix of the quasi-pure truncation.

    Built from the subnormalized eigenvectors psi_i of rho as
    T_{jk} = A^{11}_{jk} / sqrt(A^{11}_{11}).
    """
    dec = spectral(rho, cutoff=cutoff)
    return _quasipure_T_from(dec.subnormalized, rho.dims)


def _quasipure_T_from(subnormalized: list[np.ndarray], dims: HilbertDims) -> np.ndarray:
    tset = build_T(subnormalized, dims)
    t11 = tset.mats[:, 0, 0]
    a11 = np.einsum("a,ajk->jk", t11.conj(), tset.mats)
    head = float(np.real(a11[0, 0]))
    if head <= 1e-14:
        raise NumericError(
            "leading eigenvector is (nearly) separable; quasi-pure truncation degenerate")
    return a11 / np.sqrt(head)


def quasipure_concurrence(rho: DensityMatrix, cutoff: float = 1e-12) -> ConcurrenceEstimate:
    """Quasi-pure estimate with the eigenvalue-dominance validity gate.

    The estimate is flagged invalid once the largest eigenvalue no longer
    strictly dominates (mu1 - mu2 < 1e-9 or mu1 < 0.5), mirroring the
    stopping rule at the eigenvalue crossing.
    """
    dec = spectral(rho, cutoff=cutoff)
    mus = dec.eigenvalues
    valid = True
    if mus.size > 1 and (mus[0] - mus[1] < 1e-9 or mus[0] < 0.5):
        valid = False
    T = _quasipure_T_from(dec.subnormalized, rho.dims)
    return ConcurrenceEstimate(_sv_functional(T), "quasi_pure", valid=valid)


@dataclass(frozen=True)
class RoofConfig:
    ensemble_extra: int = 2    # ensemble size = rank(rho) + ensemble_extra
    restarts: int = 20
    max_sweeps: int = 40
    tol: float = 1e-9
    seed: int = 11
    coarse_grid: int = 8
    refine_levels: int = 4


def _pair_rotation_search(coeffs: np.ndarray, p: int, q: int,
                          cfg: RoofConfig) -> tuple[float, np.ndarray, np.ndarray]:
    """Best 2x2 rotation mixing ensemble members p and q (grid + refinement).

    Rotations act as phi_p' = cos(t) phi_p + e^{i s} sin(t) phi_q,
    phi_q' = -e^{-i s} sin(t) phi_p + cos(t) phi_q; they preserve
    sum_j |phi_j><phi_j| exactly.
    """
    cp, cq = coeffs[p], coeffs[q]
    t_lo, t_hi = 0.0, np.pi
    s_lo, s_hi = 0.0, 2.0 * np.pi
    best = (float(np.sum(_sub_concurrence_batch(np.stack([cp, cq])))), cp, cq)
    for _ in range(cfg.refine_levels):
        ts = np.linspace(t_lo, t_hi, cfg.coarse_grid, endpoint=False)
        ss = np.linspace(s_lo, s_hi, cfg.coarse_grid, endpoint=False)
        tt, sf = np.meshgrid(ts, ss, indexing="ij")
        tt, sf = tt.ravel(), sf.ravel()
        ct, st = np.cos(tt), np.sin(tt)
        ph = np.exp(1j * sf)
        new_p = ct[:, None, None] * cp + (ph * st)[:, None, None] * cq
        new_q = -(st / ph)[:, None, None] * cp + ct[:, None, None] * cq
        both = _sub_concurrence_batch(np.concatenate([new_p, new_q]))
        vals = both[:tt.size] + both[tt.size:]
        i = int(np.argmin(vals))
        if vals[i] < best[0] - 1e-15:
            best = (float(vals[i]), new_p[i], new_q[i])
        dt = (t_hi - t_lo) / cfg.coarse_grid
        ds = (s_hi - s_lo) / cfg.coarse_grid
        t_lo, t_hi = tt[i] - dt, tt[i] + dt
        s_lo, s_hi = sf[i] - ds, sf[i] + ds
    return best


def _roof_refine(coeffs: np.ndarray, cfg: RoofConfig) -> tuple[float, int, bool]:
    """Pairwise-rotation sweeps on one ensemble until a sweep stalls.

    Jacobi-style bookkeeping: a pair is revisited only while one of its
    members changed in the previous sweep, and pairs whose joint
    contribution is already zero are skipped (rotations cannot improve them).
    """
    K = coeffs.shape[0]
    member_c = _sub_concurrence_batch(coeffs)
    val = float(np.sum(member_c))
    dirty = np.ones(K, dtype=bool)
    for sweep in range(cfg.max_sweeps):
        before = val
        touched = np.zeros(K, dtype=bool)
        for p in range(K):
            for q in range(p + 1, K):
                if not (dirty[p] or dirty[q]):
                    continue
                old = float(member_c[p] + member_c[q])
                if old <= SV_FLOOR:
                    continue
                pair_val, new_p, new_q = _pair_rotation_search(coeffs, p, q, cfg)
                if pair_val < old - 1e-15:
                    val += pair_val - old
                    coeffs[p], coeffs[q] = new_p, new_q
                    pair_c = _sub_concurrence_batch(np.stack([new_p, new_q]))
                    member_c[p], member_c[q] = pair_c
                    touched[p] = touched[q] = True
        dirty = touched
        if before - val < cfg.tol:
            break
    converged = (before - val < cfg.tol) or not dirty.any()
    return float(np.sum(_sub_concurrence_batch(coeffs))), sweep + 1, converged


def roof_minimize(rho: DensityMatrix, cfg: RoofConfig = RoofConfig(),
                  warm_start: np.ndarray | None = None
                  ) -> tuple[ConcurrenceEstimate, np.ndarray]:
    """Convex-roof search returning the best ensemble coefficients as well.

    The ensemble is phi_j = sum_i V_ji psi_i with V a (rank + extra)-row
    isometry; pairwise rotations preserve the decomposition constraint
    exactly, so every iterate is a valid decomposition of rho. Starts:
    an optional warm-start ensemble (matched to the current psi basis by
    least squares), the spectral decomposition itself, and random
    isometries. Ties keep the earliest start.
    """
    dec = spectral(rho)
    psis = np.asarray(dec.subnormalized).reshape(dec.rank, rho.dims.d1, rho.dims.d2)
    if dec.rank == 1:
        est = ConcurrenceEstimate(float(_sub_concurrence_batch(psis)[0]),
                                  "upper_convex_roof", iterations=1)
        return est, psis.copy()
    K = dec.rank + cfg.ensemble_extra
    rng = np.random.default_rng(cfg.seed)
    starts = []
    if warm_start is not None and warm_start.shape == (K, dec.rank):
        starts.append(np.array(warm_start))
    starts.append(np.eye(K, dec.rank, dtype=complex))
    for _ in range(max(cfg.restarts - len(starts), 0)):
        g = rng.standard_normal((K, dec.rank)) + 1j * rng.standard_normal((K, dec.rank))
        V, _ = np.linalg.qr(g)
        starts.append(V)
    best = (np.inf, None, 0, True)
    total_sweeps = 0
    for V in starts:
        coeffs = np.einsum("ji,iab->jab", V, psis)
        val, sweeps, conv = _roof_refine(coeffs, cfg)
        total_sweeps += sweeps
        if val < best[0]:
            best = (val, coeffs, total_sweeps, conv)
    val, coeffs, _, conv = best
    # recover the isometry of the winning ensemble for warm-starting:
    # coeffs_j = sum_i V_ji psi_i with psi_i linearly independent
    P = np.asarray(dec.subnormalized)            # (r, N)
    C = coeffs.reshape(K, -1)                    # (K, N)
    V_best = np.linalg.lstsq(P.T, C.T, rcond=None)[0].T
    est = ConcurrenceEstimate(val, "upper_convex_roof",
                              iterations=total_sweeps, converged=conv)
    return est, V_best


def upper_convex_roof(rho: DensityMatrix,
                      cfg: RoofConfig = RoofConfig()) -> ConcurrenceEstimate:
    """Upper bound on c(rho) by ensemble-decomposition minimization."""
    est, _ = roof_minimize(rho, cfg)
    return est


def two_qubit_block(rho: DensityMatrix, m: int) -> np.ndarray:
    """Subnormalized 4x4 block of rho on local levels {0, m} of each party.

    For the a|00> + b|mm> family under zero-temperature decay the Wootters
    functional of this block upper-bounds c(rho) and is exact.
    """
    if not (0 < m < min(rho.dims.d1, rho.dims.d2)):
        raise DomainError(f"block level m = {m} out of range for {rho.dims}")
    levels = (0, m)
    idx = [flat_index(i, j, rho.dims) for i in levels for j in levels]
    return np.asarray(rho.mat)[np.ix_(idx, idx)]
