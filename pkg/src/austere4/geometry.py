"""Adapted frames, fundamental forms, shape operators, rulings, relative
nullity, and the holomorphy check for ruling maps of complex-structured
immersions.

Conventions: tangent frames come from Gram-Schmidt on Jacobian columns in
coordinate order; normal frames complete them deterministically.  All
spectrum-level outputs are invariant under these arbitrary choices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .austere import span_odd_trace_defect
from .numerics import (
    ExprMap,
    SingularImmersionError,
    SymMatrix,
    gram_schmidt,
    jet_eval,
    numerical_rank,
    orthonormal_complement,
    sym_eig,
)


class PreconditionError(ValueError):
    """An operation was invoked on data that does not satisfy its contract."""


DEFAULT_MARGIN = 0.05
DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class Immersion:
    """A parametrized m-dimensional submanifold of R^n over a box domain.

    ruling_coords flags domain coordinates sweeping an affine ruling;
    complex_structure declares that domain coordinates pair as
    (u0,u1),(u2,u3) with J(du0)=du1, J(du2)=du3.
    """

    evaluator: ExprMap
    domain: tuple
    ruling_coords: tuple | None = None
    complex_structure: bool = False
    name: str = ""

    def __post_init__(self):
        dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        object.__setattr__(self, "domain", dom)
        if self.ruling_coords is not None:
            object.__setattr__(self, "ruling_coords", tuple(int(i) for i in self.ruling_coords))
        if len(dom) != self.evaluator.arity:
            raise ValueError("domain box count does not match evaluator arity")
        if self.domain_dim >= self.ambient_dim:
            raise ValueError(
                f"need domain dim < ambient dim, got {self.domain_dim} >= {self.ambient_dim}"
            )
        if self.complex_structure and self.domain_dim != 4:
            raise ValueError("complex structure pairing needs a 4-dimensional domain")

    @property
    def domain_dim(self) -> int:
        return self.evaluator.arity

    @property
    def ambient_dim(self) -> int:
        return self.evaluator.codim


@dataclass(frozen=True)
class PointFrame:
    """Adapted orthonormal frames at one point of an immersion."""

    point: np.ndarray
    tangent_frame: np.ndarray  # n x m
    normal_frame: np.ndarray  # n x (n-m)
    coord_to_frame: np.ndarray  # m x m, coordinate vectors -> tangent frame


@dataclass(frozen=True)
class SecondFundamentalForm:
    """Components S^a (one symmetric m x m matrix per normal direction)."""

    components: tuple
    frame: PointFrame

    @property
    def tangent_dim(self) -> int:
        return self.components[0].dim if self.components else self.frame.tangent_frame.shape[1]

    def arrays(self) -> list[np.ndarray]:
        return [c.entries for c in self.components]


def sample_grid(imm: Immersion, counts, margin: float = DEFAULT_MARGIN) -> list[np.ndarray]:
    """Uniform grid over the domain box, shrunk by `margin` per interval end."""
    axes = []
    counts = list(counts)
    if len(counts) == 1:
        counts = counts * imm.domain_dim
    if len(counts) != imm.domain_dim:
        raise ValueError("one grid count per domain coordinate required")
    for (lo, hi), k in zip(imm.domain, counts):
        pad = margin * (hi - lo)
        axes.append(np.linspace(lo + pad, hi - pad, int(k)))
    return [np.array(p) for p in product(*axes)]


def sample_random(
    imm: Immersion, count: int, rng, margin: float = DEFAULT_MARGIN
) -> list[np.ndarray]:
    """Seeded uniform points in the margin-shrunk domain box."""
    lo = np.array([a + margin * (b - a) for a, b in imm.domain])
    hi = np.array([b - margin * (b - a) for a, b in imm.domain])
    return [lo + (hi - lo) * rng.uniform(size=len(lo)) for _ in range(count)]


def frame_at(imm: Immersion, x) -> PointFrame:
    """Adapted frame from Gram-Schmidt on the Jacobian in coordinate order."""
    jet = jet_eval(imm.evaluator, x)
    return _frame_from_jacobian(jet.value, jet.jacobian)


def _frame_from_jacobian(point, jac) -> PointFrame:
    try:
        E = gram_schmidt(jac)
    except SingularImmersionError as err:
        raise SingularImmersionError(f"immersion is singular here: {err}") from err
    R = E.T @ jac  # upper triangular, positive diagonal
    N = orthonormal_complement(jac)
    return PointFrame(point=point, tangent_frame=E, normal_frame=N, coord_to_frame=R)


def second_fundamental_form(imm: Immersion, x) -> SecondFundamentalForm:
    """Normal components of the immersion Hessian in the adapted frame."""
    jet = jet_eval(imm.evaluator, np.asarray(x, dtype=float))
    frame = _frame_from_jacobian(jet.value, jet.jacobian)
    m = imm.domain_dim
    V = np.linalg.solve(frame.coord_to_frame, np.eye(m))  # frame vectors in coords
    comps = []
    for a in range(frame.normal_frame.shape[1]):
        normal = frame.normal_frame[:, a]
        A = np.einsum("c,cij->ij", normal, jet.hessian)
        comps.append(SymMatrix.from_array(V.T @ A @ V))
    return SecondFundamentalForm(components=tuple(comps), frame=frame)


def shape_operator(sff: SecondFundamentalForm, xi) -> SymMatrix:
    """Shape operator for a unit normal direction given in normal-frame coords."""
    xi = np.asarray(xi, dtype=float)
    if abs(np.linalg.norm(xi) - 1.0) > 1e-8:
        raise PreconditionError("normal direction must be a unit vector")
    m = sff.tangent_dim
    total = np.zeros((m, m))
    for c, S in zip(xi, sff.components):
        total = total + c * S.entries
    return SymMatrix.from_array(total)


def mean_curvature_vector(sff: SecondFundamentalForm) -> np.ndarray:
    """Traces of the components; vanishes for minimal submanifolds."""
    return np.array([np.trace(c.entries) for c in sff.components])


def normal_rank(sff: SecondFundamentalForm, tol: float = DEFAULT_RANK_TOL) -> int:
    """Dimension of the span of the shape operators over normal directions."""
    return numerical_rank(sff.arrays(), tol=tol)


def austere_defect(sff: SecondFundamentalForm) -> float:
    """Scaled odd-trace obstruction of the shape-operator span; zero iff every
    normal direction has a negation-symmetric spectrum."""
    return span_odd_trace_defect(sff.arrays())


def is_austere_immersion(
    imm: Immersion, points, tol: float = 1e-8
) -> bool:
    return all(austere_defect(second_fundamental_form(imm, x)) <= tol for x in points)


def ruling_straightness_defect(imm: Immersion, x, samples: int = 8, seed: int = 7) -> float:
    """Largest second partial of the evaluator among ruling coordinates over a
    seeded sample of domain points (plus x itself); zero iff the declared
    ruling sweeps affine fibers."""
    if imm.ruling_coords is None:
        raise PreconditionError("immersion has no declared ruling coordinates")
    rng = np.random.default_rng(seed)
    points = [np.asarray(x, dtype=float)]
    points += sample_random(imm, max(0, samples - 1), rng)
    worst = 0.0
    for p in points:
        hess = jet_eval(imm.evaluator, p).hessian
        for r in imm.ruling_coords:
            for s in imm.ruling_coords:
                worst = max(worst, float(np.linalg.norm(hess[:, r, s])))
    return worst


def ruling_frame_basis(frame: PointFrame, ruling_coords) -> np.ndarray:
    """Tangent-frame coordinates of the ruling directions, orthonormalized."""
    cols = frame.coord_to_frame[:, list(ruling_coords)]
    return gram_schmidt(cols)


def ruled_condition_check(sff: SecondFundamentalForm, E) -> float:
    """Largest |II(v, w)| component over pairs from a tangent ruling basis E
    (m x k, tangent-frame coordinates).  Near zero on genuine rulings."""
    E = np.asarray(E, dtype=float)
    if numerical_rank(list(E.T)) < E.shape[1]:
        raise PreconditionError("ruling basis is rank deficient")
    Q = gram_schmidt(E)
    worst = 0.0
    for S in sff.arrays():
        worst = max(worst, float(np.max(np.abs(Q.T @ S @ Q))))
    return worst


def relative_nullity(
    sff: SecondFundamentalForm, tol: float = DEFAULT_RANK_TOL
) -> tuple[int, np.ndarray]:
    """Common kernel of the shape operators: kernel of sum of squares.

    Returns (dimension, m x dim orthonormal basis in the tangent frame).
    """
    m = sff.tangent_dim
    total = np.zeros((m, m))
    for S in sff.arrays():
        sq = S @ S
        total = total + (sq + sq.T) / 2.0
    w, v = sym_eig(SymMatrix.from_array(total))
    if w[-1] <= 0.0:
        return m, np.eye(m)
    mask = w <= tol * w[-1]
    return int(np.sum(mask)), v[:, mask]


def gauss_map_rank(sff: SecondFundamentalForm, tol: float = DEFAULT_RANK_TOL) -> int:
    dim, _ = relative_nullity(sff, tol=tol)
    return sff.tangent_dim - dim


# ---------------------------------------------------------------------------
# Ruling-map holomorphy via the oriented-2-plane quadric chart
# ---------------------------------------------------------------------------


def ambient_complex_structure(n: int) -> np.ndarray:
    """Standard complex structure on R^n (n even), pairing coordinates
    (2k, 2k+1) as real/imaginary parts: J e_{2k} = e_{2k+1}."""
    if n % 2 != 0:
        raise ValueError("ambient complex structure needs even dimension")
    J = np.zeros((n, n))
    for k in range(n // 2):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def _quadric_representative(imm: Immersion, x, J: np.ndarray, orientation: int) -> np.ndarray:
    jac = jet_eval(imm.evaluator, x).jacobian
    d1 = jac[:, imm.ruling_coords[0]]
    norm = np.linalg.norm(d1)
    if norm <= 1e-12:
        raise SingularImmersionError("ruling direction degenerates at this point")
    v1 = d1 / norm
    v2 = orientation * (J @ v1)
    return (v1 + 1j * v2) / np.sqrt(2.0)


def ruling_invariance_defect(imm: Immersion, x) -> float:
    """How far the ruling plane is from being invariant under the ambient
    complex structure: ||P_E J - J P_E|| for the orthogonal projector P_E."""
    if imm.ruling_coords is None or len(imm.ruling_coords) != 2:
        raise PreconditionError("a 2-dimensional ruling is required")
    J = ambient_complex_structure(imm.ambient_dim)
    jac = jet_eval(imm.evaluator, x).jacobian
    E = gram_schmidt(jac[:, list(imm.ruling_coords)])
    P = E @ E.T
    return float(np.linalg.norm(P @ J - J @ P))


def ruling_map_holomorphy_defect(
    imm: Immersion,
    x,
    h: float = 1e-4,
    orientation: int = 1,
    invariance_tol: float = 1e-8,
) -> float:
    """Cauchy-Riemann defect of the ruling map into the oriented-2-plane
    quadric, by central differences of the chart representative.

    The oriented ruling plane at u is represented as the projective point
    [v1(u) + i v2(u)] with v1 the unit first ruling direction and
    v2 = orientation * J v1; derivatives are projected orthogonal to the
    representative, removing the projective gauge.  The defect is the largest
    ||D_{Ju} gamma - i D_u gamma|| over the paired domain directions.
    """
    if not imm.complex_structure:
        raise PreconditionError("immersion does not declare a complex structure")
    if orientation not in (-1, 1):
        raise ValueError("orientation must be +1 or -1")
    x = np.asarray(x, dtype=float)
    defect_inv = ruling_invariance_defect(imm, x)
    if defect_inv > invariance_tol:
        raise PreconditionError(
            f"ruling plane is not J-invariant here (defect {defect_inv:.3e})"
        )
    for (lo, hi), xi in zip(imm.domain, x):
        if xi - h < lo or xi + h > hi:
            raise PreconditionError("step h leaves the domain at this point")
    J = ambient_complex_structure(imm.ambient_dim)
    z0 = _quadric_representative(imm, x, J, orientation)
    derivs = []
    for d in range(4):
        step = np.zeros(4)
        step[d] = h
        zp = _quadric_representative(imm, x + step, J, orientation)
        zm = _quadric_representative(imm, x - step, J, orientation)
        dz = (zp - zm) / (2.0 * h)
        dz = dz - (np.vdot(z0, dz)) * z0  # remove projective gauge
        derivs.append(dz)
    defect = 0.0
    for u, ju in ((0, 1), (2, 3)):
        defect = max(defect, float(np.linalg.norm(derivs[ju] - 1j * derivs[u])))
    return defect
