"""Exact austerity tests for symmetric matrices and matrix subspaces, and
constructors for the three maximal austere models of 4x4 symmetric space.

A matrix is austere when its spectrum is symmetric under negation; in
dimension <= 4 that is equivalent to the vanishing of the odd power traces
tr S and tr S^3, which extends to subspaces by polarization and gives a
sampling-free subspace criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import SymMatrix, _as_sym, numerical_rank, sym_eig


class SingularParameterError(ValueError):
    """A model-parameter relation hit a singular configuration."""


@dataclass(frozen=True)
class SymSpan:
    """A spanned subspace of symmetric matrices (basis need not be orthonormal)."""

    basis: tuple

    def __post_init__(self):
        basis = tuple(
            b if isinstance(b, SymMatrix) else SymMatrix(np.asarray(b, dtype=float))
            for b in self.basis
        )
        if not basis:
            raise ValueError("SymSpan needs at least one basis element")
        dims = {b.dim for b in basis}
        if len(dims) != 1:
            raise ValueError(f"mixed matrix sizes {sorted(dims)}")
        object.__setattr__(self, "basis", basis)

    @property
    def dim_ambient(self) -> int:
        return self.basis[0].dim

    @property
    def span_dim(self) -> int:
        return numerical_rank([b.entries for b in self.basis])

    def arrays(self) -> list[np.ndarray]:
        return [b.entries for b in self.basis]

    def reduced_basis(self) -> list[np.ndarray]:
        """Orthonormal (Frobenius) basis of the span, via SVD principal directions."""
        m = self.dim_ambient
        A = np.vstack([b.entries.ravel() for b in self.basis])
        _, sv, vt = np.linalg.svd(A)
        r = int(np.sum(sv > 1e-8 * sv[0])) if sv[0] > 0.0 else 0
        out = []
        for i in range(r):
            B = vt[i].reshape(m, m)
            out.append((B + B.T) / 2.0)
        return out

    def random_element(self, rng) -> SymMatrix:
        coeffs = rng.standard_normal(len(self.basis))
        total = sum(c * b.entries for c, b in zip(coeffs, self.basis))
        return SymMatrix(np.asarray(total))


def is_austere_matrix(S, tol: float = 1e-9) -> bool:
    """Exact spectral-symmetry test: all odd power traces vanish (scaled)."""
    a = _as_sym(S)
    m = a.shape[0]
    if m > 8:
        raise ValueError("austerity test restricted to dim <= 8")
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return True
    power = a
    for k in range(1, m + 1):
        if k % 2 == 1 and abs(np.trace(power)) > tol * norm**k:
            return False
        if k < m:
            power = power @ a
    return True


def eigen_symmetry_oracle(S, tol: float = 1e-9) -> bool:
    """Brute-force check that the sorted spectrum is symmetric under negation."""
    a = _as_sym(S)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return True
    w, _ = sym_eig(a)
    return bool(np.all(np.abs(w + w[::-1]) <= tol * norm))


def _cubic_trace_sym(A, B, C) -> float:
    """Fully symmetrized trilinear extension of X -> tr X^3 (up to normalization)."""
    return float(np.trace(A @ B @ C + A @ C @ B)) / 2.0


def is_austere_subspace(span: SymSpan, tol: float = 1e-9) -> bool:
    """Every element of the span has negation-symmetric spectrum.

    Exact polynomial criterion: zero traces plus vanishing of the polarized
    cubic trace over all basis triples.  No sampling involved; intended for
    4x4 spans, where degrees 1 and 3 are the only odd constraints.
    """
    if span.dim_ambient != 4:
        raise ValueError("subspace criterion is specific to 4x4 matrices")
    return span_odd_trace_defect(span.arrays()) <= tol


def span_odd_trace_defect(matrices) -> float:
    """Largest scaled odd-trace obstruction over a spanned set of symmetric
    matrices (dimension <= 4: linear traces and polarized cubic traces).

    Zero exactly when every linear combination has negation-symmetric
    spectrum; usable as a graded austerity defect.
    """
    mats = []
    scale = 0.0
    for M in matrices:
        a = _as_sym(M)
        n = np.linalg.norm(a)
        scale = max(scale, n)
        if n > 0.0:
            mats.append(a / n)
    if not mats or scale == 0.0:
        return 0.0
    if mats[0].shape[0] > 4:
        raise ValueError("odd-trace defect implemented for dim <= 4")
    defect = max(abs(float(np.trace(a))) for a in mats)
    k = len(mats)
    for i in range(k):
        for j in range(i, k):
            for l in range(j, k):
                defect = max(defect, abs(_cubic_trace_sym(mats[i], mats[j], mats[l])))
    return defect


# ---------------------------------------------------------------------------
# Model Q_A: symmetric matrices anticommuting with a complex structure
# ---------------------------------------------------------------------------


def qa_complex_structure() -> np.ndarray:
    """The standard orthogonal complex structure on R^4 (2x2 block form)."""
    return np.array(
        [
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )


def _sym_basis(m: int) -> list[np.ndarray]:
    out = []
    for i in range(m):
        for j in range(i, m):
            E = np.zeros((m, m))
            E[i, j] = E[j, i] = 1.0
            out.append(E)
    return out


@lru_cache(maxsize=1)
def qa_basis() -> SymSpan:
    """Basis of {S symmetric : SJ + JS = 0}, the anticommuting model.

    Computed by solving the linear system on the 10-dimensional symmetric
    space; elements are austere since conjugation by J negates them.
    """
    J = qa_complex_structure()
    cols = []
    basis = _sym_basis(4)
    for E in basis:
        cols.append((E @ J + J @ E).ravel())
    A = np.array(cols).T  # 16 x 10
    _, sv, vt = np.linalg.svd(A)
    null_vecs = vt[sv <= 1e-12 * sv[0]]
    mats = []
    for coeff in null_vecs:
        M = sum(c * E for c, E in zip(coeff, basis))
        mats.append(SymMatrix.from_array(M / np.linalg.norm(M)))
    return SymSpan(tuple(mats))


# ---------------------------------------------------------------------------
# Model Q_B: a reflection plus the symmetric matrices commuting with it
# ---------------------------------------------------------------------------


def qb_matrix(m: float, b1: float, b2: float, b3: float, b4: float) -> SymMatrix:
    """Element of the reflection model: diagonal part m*diag(1,1,-1,-1) and a
    free 2x2 off block (b1..b4)."""
    return SymMatrix(
        np.array(
            [
                [m, 0.0, b1, b2],
                [0.0, m, b3, b4],
                [b1, b3, -m, 0.0],
                [b2, b4, 0.0, -m],
            ]
        )
    )


def qb_basis() -> SymSpan:
    """The five coordinate basis elements of the reflection model."""
    eye = np.eye(5)
    return SymSpan(tuple(qb_matrix(*row) for row in eye))


# ---------------------------------------------------------------------------
# Model Q_C: the three-parameter family with the cubic parameter relation
# ---------------------------------------------------------------------------


LAMBDA_RELATION_TOL = 1e-10


@dataclass(frozen=True)
class QCParams:
    """Parameters (lambda1, lambda2, lambda3) constrained by
    lambda1*lambda2*lambda3 + lambda1 + lambda2 + lambda3 = 0."""

    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        r = self.relation_residual()
        if r >= LAMBDA_RELATION_TOL:
            raise ValueError(f"parameter relation violated (residual {r:.3e})")

    def relation_residual(self) -> float:
        l1, l2, l3 = self.lambda1, self.lambda2, self.lambda3
        return abs(l1 * l2 * l3 + l1 + l2 + l3)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)


def lambda3_from(lambda1: float, lambda2: float) -> float:
    """Solve the parameter relation for the third value given the other two."""
    den = 1.0 + lambda1 * lambda2
    if abs(den) <= 1e-10:
        raise SingularParameterError(
            f"1 + lambda1*lambda2 = {den:.3e}: third parameter unconstrained"
        )
    return -(lambda1 + lambda2) / den


def qc_matrix(x1: float, x2: float, x3: float, params: QCParams) -> SymMatrix:
    """Element of the three-parameter model at linear coordinates (x1,x2,x3)."""
    l1, l2, l3 = params.as_tuple()
    return SymMatrix(
        np.array(
            [
                [0.0, x1, x2, x3],
                [x1, 0.0, l3 * x3, l2 * x2],
                [x2, l3 * x3, 0.0, l1 * x1],
                [x3, l2 * x2, l1 * x1, 0.0],
            ]
        )
    )


def qc_basis(params: QCParams) -> SymSpan:
    """The three coordinate basis elements of the model at fixed parameters."""
    return SymSpan(
        (
            qc_matrix(1.0, 0.0, 0.0, params),
            qc_matrix(0.0, 1.0, 0.0, params),
            qc_matrix(0.0, 0.0, 1.0, params),
        )
    )


# ---------------------------------------------------------------------------
# Simplicity (common linear factor) of a span
# ---------------------------------------------------------------------------


def _simple_objective(spans: list[np.ndarray]):
    def f(u: np.ndarray) -> float:
        u = u / np.linalg.norm(u)
        total = 0.0
        for S in spans:
            Su = S @ u
            # P S P with P = I - u u^T, via rank-one updates
            PSP = S - np.outer(u, Su) - np.outer(Su, u) + (u @ Su) * np.outer(u, u)
            total += float(np.sum(PSP * PSP))
        return total

    return f


def is_simple(span: SymSpan, tol: float = 1e-8, restarts: int = 32, seed: int = 0) -> bool:
    """Whether all quadratic forms in the span share a common linear factor.

    Equivalent formulation: some unit vector u annihilates every form on its
    orthogonal complement.  Decided by seeded multi-start minimization of
    sum ||P_{u-perp} S_i P_{u-perp}||^2 over unit u.
    """
    if span.dim_ambient != 4:
        raise ValueError("simplicity test is specific to 4x4 spans")
    mats = span.reduced_basis()
    if not mats:
        return True
    from .optimize import minimize_on_sphere_multistart

    f = _simple_objective(mats)
    best, _ = minimize_on_sphere_multistart(f, dim=4, restarts=restarts, seed=seed,
                                            success=tol * tol)
    return best <= tol * tol
