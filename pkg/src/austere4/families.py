"""Constructors for the explicit austere families: generalized helicoids,
products, the Clifford-torus cone, complex cones over holomorphic curves,
and a round sphere as a non-austere control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics as nm
from .geometry import Immersion
from .numerics import Const, Expr, ExprMap, Var

DEFAULT_AXIS_BOX = (0.0, 2.0 * math.pi)
DEFAULT_RULING_BOX = (0.2, 2.0)


@dataclass(frozen=True)
class HelicoidSpec:
    """Generalized helicoid data: an m-fold swept by rotating s-planes.

    lambdas = (pitch, rate_1 .. rate_s); all rates must be nonzero.  The
    ambient dimension is m + s.
    """

    m: int
    s: int
    lambdas: tuple
    domain: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if not 0 < self.s < self.m:
            raise ValueError(f"need 0 < s < m, got s={self.s}, m={self.m}")
        if len(self.lambdas) != self.s + 1:
            raise ValueError(f"expected {self.s + 1} lambda values, got {len(self.lambdas)}")
        if any(v == 0.0 for v in self.lambdas[1:]):
            raise ValueError("rotation rates lambda_1..lambda_s must be nonzero")

    @property
    def ambient_dim(self) -> int:
        return self.m + self.s

    def domain_boxes(self) -> tuple:
        if self.domain is not None:
            return tuple(self.domain)
        return (DEFAULT_AXIS_BOX,) + (DEFAULT_RULING_BOX,) * (self.m - 1)


def _helicoid_exprs(spec: HelicoidSpec) -> list[Expr]:
    x0 = Var(0)
    exprs: list[Expr] = [Const(spec.lambdas[0]) * x0]
    for i in range(1, spec.s + 1):
        angle = Const(spec.lambdas[i]) * x0
        exprs.append(Var(i) * nm.cos(angle))
        exprs.append(Var(i) * nm.sin(angle))
    for i in range(spec.s + 1, spec.m):
        exprs.append(Var(i))
    return exprs


def generalized_helicoid(spec: HelicoidSpec, extended_ruling: bool = False) -> Immersion:
    """s-planes rotating about an axis with the given rates.

    The ruling annotation covers x1..xs; with extended_ruling the trailing
    flat coordinates join it (they also enter affinely).
    """
    ruling = tuple(range(1, spec.s + 1))
    if extended_ruling:
        ruling = ruling + tuple(range(spec.s + 1, spec.m))
    return Immersion(
        evaluator=ExprMap(spec.m, tuple(_helicoid_exprs(spec))),
        domain=spec.domain_boxes(),
        ruling_coords=ruling,
        name=f"helicoid(m={spec.m},s={spec.s})",
    )


def classical_helicoid(b: float = 1.0) -> Immersion:
    """The minimal helicoid surface (b x0, x1 cos x0, x1 sin x0)."""
    return generalized_helicoid(HelicoidSpec(m=2, s=1, lambdas=(b, 1.0)))


def helicoid_shape_eigenvalue(b: float, x1: float) -> float:
    """Closed-form principal curvature of the classical helicoid at radius x1
    (hand-derived; used as an independent oracle)."""
    return b / (x1 * x1 + b * b)


def helicoid_times_plane(b: float = 1.0) -> Immersion:
    """Classical helicoid times a flat R^2, substantial in R^5: the split case
    of the helicoid family with one rotating line and two flat coordinates."""
    imm = generalized_helicoid(HelicoidSpec(m=4, s=1, lambdas=(b, 1.0)))
    return Immersion(
        evaluator=imm.evaluator,
        domain=imm.domain,
        ruling_coords=imm.ruling_coords,
        name=f"helicoid_x_plane(b={b:g})",
    )


def product_immersion(a: Immersion, b: Immersion, name: str = "") -> Immersion:
    """Cartesian product: domains and ambient spaces concatenate, rulings join."""
    ma = a.evaluator.arity
    m = ma + b.evaluator.arity
    exprs = a.evaluator.shift_vars(0, m).exprs + b.evaluator.shift_vars(ma, m).exprs
    ruling = None
    if a.ruling_coords is not None or b.ruling_coords is not None:
        ruling = tuple(a.ruling_coords or ()) + tuple(
            i + ma for i in (b.ruling_coords or ())
        )
    return Immersion(
        evaluator=ExprMap(m, exprs),
        domain=a.domain + b.domain,
        ruling_coords=ruling,
        name=name or f"product({a.name},{b.name})",
    )


def product_of_helicoids(b1: float = 1.0, b2: float = 1.0) -> Immersion:
    """Two classical helicoids side by side in R^6, with orthogonal rulings."""
    return product_immersion(
        classical_helicoid(b1),
        classical_helicoid(b2),
        name=f"product_helicoids(b1={b1:g},b2={b2:g})",
    )


def helicoid_cone(lam: float = 1.0) -> Immersion:
    """Cone in R^6 over a generalized Clifford torus: the helicoid family with
    zero pitch, three equal rates, and the identically-zero axis coordinate
    dropped so the image is substantial."""
    if lam == 0.0:
        raise ValueError("cone rate must be nonzero")
    spec = HelicoidSpec(m=4, s=3, lambdas=(0.0, lam, lam, lam))
    exprs = _helicoid_exprs(spec)[1:]  # first component is identically zero
    return Immersion(
        evaluator=ExprMap(4, tuple(exprs)),
        domain=spec.domain_boxes(),
        ruling_coords=(1, 2, 3),
        name=f"helicoid_cone(lambda={lam:g})",
    )


# ---------------------------------------------------------------------------
# Complex cones over holomorphic curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HoloCurveSpec:
    """Polynomial curve C -> C^k given per-component coefficient tuples
    (constant term first).  Degree is capped to keep evaluators small."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(
            tuple(complex(c) for c in comp) for comp in self.coefficients
        )
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ValueError("curve needs at least one component")
        if all(len(comp) <= 1 for comp in coeffs):
            raise ValueError("curve must have degree >= 1 in some component")
        if any(len(comp) > 7 for comp in coeffs):
            raise ValueError("polynomial degree capped at 6")

    @property
    def n_complex(self) -> int:
        return len(self.coefficients)

    def value(self, z: complex) -> np.ndarray:
        return np.array(
            [
                sum(c * z**d for d, c in enumerate(comp))
                for comp in self.coefficients
            ]
        )


def _complex_poly_exprs(coeffs, re_var: Expr, im_var: Expr) -> tuple[Expr, Expr]:
    """Real and imaginary expression trees of sum_d c_d (re + i im)^d."""
    re_pow: Expr = Const(1.0)
    im_pow: Expr = Const(0.0)
    re_out: Expr = Const(coeffs[0].real)
    im_out: Expr = Const(coeffs[0].imag)
    for c in coeffs[1:]:
        re_pow, im_pow = (
            re_pow * re_var - im_pow * im_var,
            re_pow * im_var + im_pow * re_var,
        )
        re_out = re_out + Const(c.real) * re_pow - Const(c.imag) * im_pow
        im_out = im_out + Const(c.real) * im_pow + Const(c.imag) * re_pow
    return re_out, im_out


def complex_cone(spec: HoloCurveSpec, domain: tuple | None = None) -> Immersion:
    """Real 4-fold (u0..u3) -> w * curve(z) with w = u0 + i u1, z = u2 + i u3,
    written in interleaved real/imaginary ambient coordinates.

    The complex lines w -> w * curve(z) are the (J-invariant) 2-ruling.
    """
    w_re, w_im = Var(0), Var(1)
    exprs: list[Expr] = []
    for comp in spec.coefficients:
        g_re, g_im = _complex_poly_exprs(comp, Var(2), Var(3))
        exprs.append(w_re * g_re - w_im * g_im)
        exprs.append(w_re * g_im + w_im * g_re)
    dom = domain if domain is not None else (DEFAULT_RULING_BOX,) * 4
    imm = Immersion(
        evaluator=ExprMap(4, tuple(exprs)),
        domain=dom,
        ruling_coords=(0, 1),
        complex_structure=True,
        name="complex_cone",
    )
    _check_curve_nonvanishing(spec, imm)
    return imm


def _check_curve_nonvanishing(spec: HoloCurveSpec, imm: Immersion, samples: int = 64):
    rng = np.random.default_rng(11)
    (lo2, hi2), (lo3, hi3) = imm.domain[2], imm.domain[3]
    for _ in range(samples):
        z = complex(rng.uniform(lo2, hi2), rng.uniform(lo3, hi3))
        if np.linalg.norm(spec.value(z)) < 1e-9:
            raise ValueError(f"curve vanishes near z={z}; shrink the domain")


def default_complex_cone() -> Immersion:
    return complex_cone(HoloCurveSpec(((1.0,), (0.0, 1.0), (0.0, 0.0, 1.0))))


# ---------------------------------------------------------------------------
# Negative control
# ---------------------------------------------------------------------------


def sphere(n: int = 3, r: float = 1.0, domain: tuple | None = None) -> Immersion:
    """Round sphere S^{n-1} in R^n via spherical angles (not austere)."""
    if n < 3:
        raise ValueError("ambient dimension must be at least 3")
    if r <= 0.0:
        raise ValueError("radius must be positive")
    m = n - 1
    exprs: list[Expr] = []
    for k in range(n):
        e: Expr = Const(float(r))
        for j in range(min(k, m)):
            e = e * nm.sin(Var(j))
        if k < m:
            e = e * nm.cos(Var(k))
        exprs.append(e)
    dom = domain
    if dom is None:
        dom = tuple((0.3, math.pi - 0.3) for _ in range(m - 1)) + ((0.3, 2.0 * math.pi - 0.3),)
    return Immersion(
        evaluator=ExprMap(m, tuple(exprs)),
        domain=dom,
        name=f"sphere(n={n},r={r:g})",
    )
