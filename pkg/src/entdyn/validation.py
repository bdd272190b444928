"""Randomized invariant suite behind the CLI ``validate`` verb.

Each check draws seeded random inputs and verifies one of the structural
invariants the estimators rely on. Checks return (name, passed, detail)
so the CLI can print one line per invariant.
"""

from __future__ import annotations

import numpy as np

from .concurrence import (RoofConfig, ZOptConfig, a_tensor, build_T,
                          optimize_lower_bound, pure_concurrence,
                          upper_convex_roof, wootters)
from .hilbert import DensityMatrix, HilbertDims, PureState, spectral
from .lindblad import EnvironmentKind, EnvironmentModel, propagate
from .sampling import random_density_matrix, random_pure_state, random_unitary


def check_propagation_invariants(samples: int, rng) -> tuple[bool, str]:
    kinds = list(EnvironmentKind)
    worst = 0.0
    for i in range(samples):
        dims = HilbertDims(int(rng.integers(2, 4)), int(rng.integers(2, 4)))
        rho = random_density_matrix(dims, rng, rank=int(rng.integers(1, dims.total + 1)))
        model = EnvironmentModel(kinds[i % len(kinds)], gamma=float(rng.uniform(0.1, 2.0)),
                                 nbar=float(rng.uniform(0.0, 1.0)))
        out = propagate(rho, model, t=float(rng.uniform(0.0, 2.0)))
        mat = np.asarray(out.mat)
        worst = max(worst,
                    abs(float(np.real(np.trace(mat))) - 1.0),
                    max(0.0, -float(np.linalg.eigvalsh(mat)[0])))
    return worst <= 1e-8, f"worst trace/positivity defect {worst:.2e}"


def check_estimator_ordering(samples: int, rng) -> tuple[bool, str]:
    worst = -np.inf
    roof = RoofConfig(restarts=2, max_sweeps=8)
    zopt = ZOptConfig(restarts=8)
    for _ in range(samples):
        dims = HilbertDims(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        rho = random_density_matrix(dims, rng, rank=int(rng.integers(1, 5)))
        lower, _ = optimize_lower_bound(build_T(spectral(rho).subnormalized, dims), zopt)
        upper = upper_convex_roof(rho, roof)
        worst = max(worst, lower.value - upper.value)
    return worst <= 1e-6, f"max (lower - upper) = {worst:.2e}"


def check_two_qubit_collapse(samples: int, rng) -> tuple[bool, str]:
    dims = HilbertDims(2, 2)
    worst = 0.0
    for _ in range(samples):
        rho = random_density_matrix(dims, rng, rank=int(rng.integers(1, 5)))
        lower, _ = optimize_lower_bound(build_T(spectral(rho).subnormalized, dims))
        worst = max(worst, abs(lower.value - wootters(rho).value))
    return worst <= 1e-6, f"max |lower_opt - wootters| = {worst:.2e}"


def check_pure_concurrence_identity(samples: int, rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(samples):
        dims = HilbertDims(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        psi = random_pure_state(dims, rng)
        M = psi.as_matrix()
        red = M @ M.conj().T
        ref = np.sqrt(max(2.0 * (1.0 - float(np.real(np.trace(red @ red)))), 0.0))
        worst = max(worst, abs(pure_concurrence(psi).value - ref))
    return worst <= 1e-10, f"max |c - sqrt(2(1 - tr rho_r^2))| = {worst:.2e}"


def check_local_unitary_invariance(samples: int, rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(samples):
        dims = HilbertDims(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        psi = random_pure_state(dims, rng)
        U = np.kron(random_unitary(dims.d1, rng), random_unitary(dims.d2, rng))
        rotated = PureState(dims, U @ psi.amp)
        worst = max(worst, abs(pure_concurrence(psi).value - pure_concurrence(rotated).value))
    return worst <= 1e-10, f"max concurrence shift under U1 x U2 = {worst:.2e}"


def check_a_tensor_reconstruction(samples: int, rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(samples):
        dims = HilbertDims(int(rng.integers(2, 4)), int(rng.integers(2, 4)))
        rho = random_density_matrix(dims, rng, rank=int(rng.integers(1, 4)))
        dec = spectral(rho)
        tset = build_T(dec.subnormalized, dims)
        A = a_tensor(tset)
        direct = _a_tensor_direct(dec.subnormalized, dims)
        worst = max(worst, float(np.max(np.abs(A - direct))))
    return worst <= 1e-10, f"max |A from T - A direct| = {worst:.2e}"


def _a_tensor_direct(sub, dims) -> np.ndarray:
    """A^{lm}_{jk} by explicit contraction with the antisymmetric projector."""
    from .concurrence import chi_indices
    from .hilbert import copy_space_map

    N = dims.total
    chis = chi_indices(dims)
    chi_vecs = np.zeros((len(chis), N * N), dtype=complex)
    for i, x in enumerate(chis):
        for sign_kl, (k, l) in ((1, (x.k, x.l)), (-1, (x.l, x.k))):
            for sign_mn, (m, n) in ((1, (x.m, x.n)), (-1, (x.n, x.m))):
                p, q = copy_space_map(k, l, m, n, dims)
                chi_vecs[i, p * N + q] += sign_kl * sign_mn
    r = len(sub)
    overlaps = np.empty((len(chis), r, r), dtype=complex)
    for j in range(r):
        for k in range(r):
            prod = np.kron(sub[j], sub[k])
            overlaps[:, j, k] = chi_vecs.conj() @ prod
    return np.einsum("alm,ajk->lmjk", overlaps.conj(), overlaps)


CHECKS = [
    ("propagation_invariants", check_propagation_invariants),
    ("estimator_ordering", check_estimator_ordering),
    ("two_qubit_collapse", check_two_qubit_collapse),
    ("pure_concurrence_identity", check_pure_concurrence_identity),
    ("local_unitary_invariance", check_local_unitary_invariance),
    ("a_tensor_reconstruction", check_a_tensor_reconstruction),
]


def run_validation(samples: int = 500, seed: int = 0):
    """Run every check; yields (name, passed, detail)."""
    results = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        passed, detail = fn(samples, rng)
        results.append((name, passed, detail))
    return results
