"""Shared numeric substrate: exact second-order jets of closed-form maps,
symmetric eigensolving, orthonormal complements, and numerical rank.

Maps are closed expression trees over named domain variables, so values,
Jacobians and Hessians are exact (truncated Taylor arithmetic), not finite
differences.  Finite differences are kept alongside as an independent
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    """A primitive was evaluated outside its domain (e.g. sqrt of a negative)."""


class SingularImmersionError(ValueError):
    """A Jacobian or basis matrix is rank deficient where full rank is required."""


# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------


class Expr:
    """Node of a scalar expression over domain variables u_0 .. u_{m-1}.

    Supports +, -, *, /, ** (constant exponent) plus the function nodes
    built by sin/cos/exp/sqrt below.  Python numbers mix in freely.
    """

    __slots__ = ()

    def __add__(self, other):
        return _mk("add", self, _expr(other))

    def __radd__(self, other):
        return _mk("add", _expr(other), self)

    def __sub__(self, other):
        return _mk("sub", self, _expr(other))

    def __rsub__(self, other):
        return _mk("sub", _expr(other), self)

    def __mul__(self, other):
        return _mk("mul", self, _expr(other))

    def __rmul__(self, other):
        return _mk("mul", _expr(other), self)

    def __truediv__(self, other):
        return _mk("div", self, _expr(other))

    def __rtruediv__(self, other):
        return _mk("div", _expr(other), self)

    def __neg__(self):
        return _mk("neg", self)

    def __pow__(self, exponent):
        if isinstance(exponent, Expr):
            raise TypeError("only constant exponents are supported")
        return Pow(self, float(exponent))


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(Expr):
    index: int


@dataclass(frozen=True, slots=True)
class Node(Expr):
    op: str
    args: tuple


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: float


def _expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(float(x))


def _mk(op: str, *args: Expr) -> Expr:
    return Node(op, args)


def var(index: int) -> Expr:
    return Var(index)


def const(value: float) -> Expr:
    return Const(float(value))


def sin(x) -> Expr:
    return _mk("sin", _expr(x))


def cos(x) -> Expr:
    return _mk("cos", _expr(x))


def exp(x) -> Expr:
    return _mk("exp", _expr(x))


def sqrt(x) -> Expr:
    return _mk("sqrt", _expr(x))


# ---------------------------------------------------------------------------
# Second-order jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Jet2:
    """Value, Jacobian and Hessian of a map at a point.

    value: (n,), jacobian: (n, m), hessian: (n, m, m) with
    hessian[a] symmetric for every ambient component a.
    """

    value: np.ndarray
    jacobian: np.ndarray
    hessian: np.ndarray


# internal scalar jet: (v, g (m,), H (m, m)); H stays exactly symmetric
# because every rule below builds it from symmetric pieces.


def _jet_unary(v, g, H, f0, f1, f2):
    gg = np.outer(g, g)
    return f0, f1 * g, f1 * H + f2 * (gg + gg.T) / 2.0


def _eval_jet(e: Expr, x: np.ndarray):
    m = x.shape[0]
    if isinstance(e, Const):
        return e.value, np.zeros(m), np.zeros((m, m))
    if isinstance(e, Var):
        g = np.zeros(m)
        g[e.index] = 1.0
        return x[e.index], g, np.zeros((m, m))
    if isinstance(e, Pow):
        v, g, H = _eval_jet(e.base, x)
        k = e.exponent
        if k != round(k) and v <= 0.0:
            raise DomainError(f"pow: non-integer exponent {k} at non-positive base {v}")
        if k == round(k) and k < 0 and v == 0.0:
            raise DomainError("pow: negative exponent at zero base")
        f0 = v**k
        f1 = k * v ** (k - 1) if k != 0 else 0.0
        f2 = k * (k - 1) * v ** (k - 2) if k not in (0, 1) else 0.0
        return _jet_unary(v, g, H, f0, f1, f2)
    assert isinstance(e, Node)
    op = e.op
    if op == "neg":
        v, g, H = _eval_jet(e.args[0], x)
        return -v, -g, -H
    if op in ("sin", "cos", "exp", "sqrt"):
        v, g, H = _eval_jet(e.args[0], x)
        if op == "sin":
            return _jet_unary(v, g, H, math.sin(v), math.cos(v), -math.sin(v))
        if op == "cos":
            return _jet_unary(v, g, H, math.cos(v), -math.sin(v), -math.cos(v))
        if op == "exp":
            ev = math.exp(v)
            return _jet_unary(v, g, H, ev, ev, ev)
        if v <= 0.0:
            raise DomainError(f"sqrt: non-positive argument {v}")
        r = math.sqrt(v)
        return _jet_unary(v, g, H, r, 0.5 / r, -0.25 / (v * r))
    va, ga, Ha = _eval_jet(e.args[0], x)
    vb, gb, Hb = _eval_jet(e.args[1], x)
    if op == "add":
        return va + vb, ga + gb, Ha + Hb
    if op == "sub":
        return va - vb, ga - gb, Ha - Hb
    if op == "mul":
        cross = np.outer(ga, gb)
        return va * vb, va * gb + vb * ga, va * Hb + vb * Ha + cross + cross.T
    if op == "div":
        if vb == 0.0:
            raise DomainError("div: division by zero")
        v = va / vb
        g = (ga - v * gb) / vb
        cross = np.outer(g, gb)
        H = (Ha - v * Hb - cross - cross.T) / vb
        return v, g, H
    raise ValueError(f"unknown op {op!r}")


def _eval_value(e: Expr, x: np.ndarray) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(x[e.index])
    if isinstance(e, Pow):
        v = _eval_value(e.base, x)
        k = e.exponent
        if k != round(k) and v <= 0.0:
            raise DomainError(f"pow: non-integer exponent {k} at non-positive base {v}")
        return v**k
    op = e.op
    if op == "neg":
        return -_eval_value(e.args[0], x)
    if op in ("sin", "cos", "exp", "sqrt"):
        v = _eval_value(e.args[0], x)
        if op == "sin":
            return math.sin(v)
        if op == "cos":
            return math.cos(v)
        if op == "exp":
            return math.exp(v)
        if v < 0.0:
            raise DomainError(f"sqrt: negative argument {v}")
        return math.sqrt(v)
    va = _eval_value(e.args[0], x)
    vb = _eval_value(e.args[1], x)
    if op == "add":
        return va + vb
    if op == "sub":
        return va - vb
    if op == "mul":
        return va * vb
    if vb == 0.0:
        raise DomainError("div: division by zero")
    return va / vb


def _subst(e: Expr, table: list[Expr]) -> Expr:
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return table[e.index]
    if isinstance(e, Pow):
        return Pow(_subst(e.base, table), e.exponent)
    return Node(e.op, tuple(_subst(a, table) for a in e.args))


@dataclass(frozen=True)
class ExprMap:
    """A map R^m -> R^n given by one expression per ambient component."""

    arity: int
    exprs: tuple = field(default_factory=tuple)

    @property
    def codim(self) -> int:
        return len(self.exprs)

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([_eval_value(e, x) for e in self.exprs])

    def shift_vars(self, offset: int, new_arity: int) -> "ExprMap":
        table = [Var(i + offset) for i in range(self.arity)]
        return ExprMap(new_arity, tuple(_subst(e, table) for e in self.exprs))

    def precompose_affine(self, A, b) -> "ExprMap":
        """Return x |-> F(A x + b); A is (m, m'), b length m."""
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        table = []
        for i in range(self.arity):
            e: Expr = Const(b[i])
            for j in range(A.shape[1]):
                if A[i, j] != 0.0:
                    e = e + Const(A[i, j]) * Var(j)
            table.append(e)
        return ExprMap(A.shape[1], tuple(_subst(e, table) for e in self.exprs))

    def postcompose_linear(self, Q) -> "ExprMap":
        """Return x |-> Q F(x); Q is (n', n)."""
        Q = np.asarray(Q, dtype=float)
        out = []
        for r in range(Q.shape[0]):
            e: Expr = Const(0.0)
            for c in range(len(self.exprs)):
                if Q[r, c] != 0.0:
                    e = e + Const(Q[r, c]) * self.exprs[c]
            out.append(e)
        return ExprMap(self.arity, tuple(out))


def jet_eval(f: ExprMap, x) -> Jet2:
    """Exact value, Jacobian and Hessian of f at x via Taylor arithmetic."""
    x = np.asarray(x, dtype=float)
    if x.shape != (f.arity,):
        raise ValueError(f"point has shape {x.shape}, map arity is {f.arity}")
    n, m = f.codim, f.arity
    value = np.empty(n)
    jac = np.empty((n, m))
    hess = np.empty((n, m, m))
    for a, e in enumerate(f.exprs):
        v, g, H = _eval_jet(e, x)
        value[a] = v
        jac[a] = g
        hess[a] = H
    return Jet2(value, jac, hess)


def finite_diff_second(f: ExprMap, x, h: float = 1e-4):
    """Central-difference Jacobian and Hessian of f at x (O(h^2) accurate).

    Independent of jet_eval: relies only on plain map evaluation.
    """
    x = np.asarray(x, dtype=float)
    n, m = f.codim, f.arity
    f0 = f.value(x)
    jac = np.empty((n, m))
    hess = np.empty((n, m, m))
    plus = np.empty((m, n))
    minus = np.empty((m, n))
    for i in range(m):
        ei = np.zeros(m)
        ei[i] = h
        plus[i] = f.value(x + ei)
        minus[i] = f.value(x - ei)
        jac[:, i] = (plus[i] - minus[i]) / (2.0 * h)
        hess[:, i, i] = (plus[i] - 2.0 * f0 + minus[i]) / (h * h)
    for i in range(m):
        for j in range(i + 1, m):
            step = np.zeros(m)
            step[i] = h
            step[j] = h
            dij = np.zeros(m)
            dij[i] = h
            dij[j] = -h
            fpp = f.value(x + step)
            fmm = f.value(x - step)
            fpm = f.value(x + dij)
            fmp = f.value(x - dij)
            hess[:, i, j] = (fpp - fpm - fmp + fmm) / (4.0 * h * h)
            hess[:, j, i] = hess[:, i, j]
    return jac, hess


# ---------------------------------------------------------------------------
# Symmetric matrices and eigensolving
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymMatrix:
    """A real symmetric matrix; symmetry is exact, not approximate."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"not square: shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("entries are not exactly symmetric")
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_array(cls, a) -> "SymMatrix":
        """Symmetrize a nearly-symmetric array and wrap it."""
        a = np.asarray(a, dtype=float)
        return cls((a + a.T) / 2.0)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


def _as_sym(S) -> np.ndarray:
    if isinstance(S, SymMatrix):
        return S.entries
    return SymMatrix(np.asarray(S, dtype=float)).entries


JACOBI_SWEEP_CAP = 100


def sym_eig(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a SymMatrix.

    Cyclic Jacobi rotations; adequate and provably convergent for the
    small dense matrices used here (dim <= 8).
    """
    a = _as_sym(S).copy()
    k = a.shape[0]
    v = np.eye(k)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(k), v
    stop = 1e-15 * scale
    mask = ~np.eye(k, dtype=bool)
    for _ in range(JACOBI_SWEEP_CAP):
        off = math.sqrt(float(np.sum(a[mask] ** 2)))
        if off <= stop:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                a[p, :], a[q, :] = c * a[p, :] - s * a[q, :], s * a[p, :] + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
                v[:, p], v[:, q] = c * v[:, p] - s * v[:, q], s * v[:, p] + c * v[:, q]
    else:
        raise RuntimeError("sym_eig: Jacobi sweep cap exceeded (internal fault)")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# Orthonormalization and rank
# ---------------------------------------------------------------------------


def gram_schmidt(B) -> np.ndarray:
    """Orthonormalize the columns of B in their given order (two passes)."""
    B = np.asarray(B, dtype=float)
    n, m = B.shape
    Q = np.empty((n, m))
    for j in range(m):
        u = B[:, j].copy()
        for _ in range(2):
            for i in range(j):
                u -= (Q[:, i] @ u) * Q[:, i]
        nu = np.linalg.norm(u)
        if nu <= 1e-13 * max(1.0, np.linalg.norm(B[:, j])):
            raise SingularImmersionError(f"column {j} is linearly dependent")
        Q[:, j] = u / nu
    return Q


def orthonormal_complement(B, rel_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of col(B).

    Completes col(B) with standard basis vectors in coordinate order
    (deterministic, and continuous in B away from pivot changes), then
    re-orthogonalizes.  Raises SingularImmersionError when B is rank
    deficient relative to rel_tol.
    """
    B = np.asarray(B, dtype=float)
    n, m = B.shape
    sv = np.linalg.svd(B, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= rel_tol * sv[0]:
        raise SingularImmersionError(
            f"rank-deficient basis: singular values {sv.tolist()}"
        )
    Q = gram_schmidt(B)
    comp = []
    for k in range(n):
        if len(comp) == n - m:
            break
        u = np.zeros(n)
        u[k] = 1.0
        for _ in range(2):
            u -= Q @ (Q.T @ u)
            for c in comp:
                u -= (c @ u) * c
        nu = np.linalg.norm(u)
        if nu > 1e-6:
            comp.append(u / nu)
    if len(comp) != n - m:
        raise SingularImmersionError("failed to complete an orthonormal basis")
    return np.column_stack(comp) if comp else np.zeros((n, 0))


def numerical_rank(vectors, tol: float = 1e-8) -> int:
    """Number of singular values above tol times the largest one.

    vectors: nonempty sequence of equal-length real vectors (any shape;
    each is flattened).  All-zero input has rank 0.
    """
    vecs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not vecs:
        raise ValueError("numerical_rank: empty input")
    A = np.vstack(vecs)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))
