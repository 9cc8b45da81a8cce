"""Small deterministic local optimizers for the model-fitting routines.

Multi-start descent with numerically differentiated objectives and a
step-halving line search; a short damped Newton polish tightens minima that
plain descent approaches only linearly.  All randomness comes from explicit
seeds, so repeated runs are identical.
"""

from __future__ import annotations

import math

import numpy as np


def fd_gradient(f, x: np.ndarray, eps: float) -> np.ndarray:
    g = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        step = np.zeros(x.shape[0])
        step[i] = eps
        g[i] = (f(x + step) - f(x - step)) / (2.0 * eps)
    return g


def fd_hessian(f, x: np.ndarray, eps: float) -> np.ndarray:
    d = x.shape[0]
    H = np.empty((d, d))
    f0 = f(x)
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = eps
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / (eps * eps)
        for j in range(i + 1, d):
            ej = np.zeros(d)
            ej[j] = eps
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * eps * eps)
    return H


def _newton_polish(f, x, fx, *, eps, gtol, iters, success):
    for _ in range(iters):
        if fx <= success:
            break
        g = fd_gradient(f, x, eps)
        if np.linalg.norm(g) <= gtol:
            break
        H = fd_hessian(f, x, eps)
        accepted = False
        damp = 1e-10 * max(1.0, float(np.max(np.abs(H))))
        for _ in range(8):
            try:
                d = np.linalg.solve(H + damp * np.eye(len(x)), -g)
            except np.linalg.LinAlgError:
                damp *= 100.0
                continue
            xn = x + d
            fn = f(xn)
            if fn < fx:
                x, fx = xn, fn
                accepted = True
                break
            damp *= 100.0
        if not accepted:
            break
    return fx, x


def minimize_descent(
    f,
    x0,
    *,
    step0: float = 0.25,
    grad_eps: float = 1e-7,
    gtol: float = 1e-10,
    max_iter: int = 500,
    polish_iters: int = 15,
    success: float = -math.inf,
    renormalize: bool = False,
):
    """Gradient descent with adaptive step and step-halving line search.

    `renormalize` rescales the iterate to unit norm each step (for
    objectives defined on a sphere and extended homogeneously).
    Returns (best value, best point).
    """
    x = np.asarray(x0, dtype=float).copy()
    if renormalize:
        x = x / np.linalg.norm(x)
    fx = f(x)
    step = step0
    for _ in range(max_iter):
        if fx <= success:
            break
        g = fd_gradient(f, x, grad_eps)
        gn = np.linalg.norm(g)
        if gn <= gtol:
            break
        d = -g / gn
        s = step
        improved = False
        for _ in range(40):
            xn = x + s * d
            if renormalize:
                xn = xn / np.linalg.norm(xn)
            fn = f(xn)
            if fn < fx:
                x, fx = xn, fn
                improved = True
                break
            s *= 0.5
        if not improved:
            break
        step = 2.0 * s
    if polish_iters > 0 and fx > success:
        fx, x = _newton_polish(
            f, x, fx, eps=grad_eps, gtol=gtol, iters=polish_iters, success=success
        )
        if renormalize:
            x = x / np.linalg.norm(x)
            fx = min(fx, f(x))
    return fx, x


def minimize_on_sphere_multistart(
    f, *, dim: int, restarts: int, seed: int, success: float = -math.inf, **kw
):
    """Multi-start sphere minimization; stops early once `success` is reached."""
    rng = np.random.default_rng(seed)
    best_f, best_x = math.inf, None
    starts = [np.eye(dim)[i] for i in range(dim)]
    while len(starts) < restarts:
        starts.append(rng.standard_normal(dim))
    for x0 in starts[:restarts]:
        fx, x = minimize_descent(f, x0, renormalize=True, success=success, **kw)
        if fx < best_f:
            best_f, best_x = fx, x
        if best_f <= success:
            break
    return best_f, best_x


# ---------------------------------------------------------------------------
# The rotation group SO(4) via the exponential chart on so(4)
# ---------------------------------------------------------------------------

_SO4_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def skew_from_params(theta) -> np.ndarray:
    """Skew 4x4 matrix with the six independent entries taken from theta."""
    K = np.zeros((4, 4))
    for t, (i, j) in zip(theta, _SO4_PAIRS):
        K[i, j] = t
        K[j, i] = -t
    return K


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential (small dense matrices)."""
    norm = np.linalg.norm(A)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    B = A / (2.0**squarings)
    term = np.eye(A.shape[0])
    out = term.copy()
    for k in range(1, 30):
        term = term @ B / k
        out += term
        if np.linalg.norm(term) < 1e-18:
            break
    for _ in range(squarings):
        out = out @ out
    return out


def so4_exp(theta) -> np.ndarray:
    return matrix_exp(skew_from_params(np.asarray(theta, dtype=float)))


def random_rotation(rng) -> np.ndarray:
    """Seeded random SO(4) element via the exponential chart."""
    return so4_exp(rng.uniform(-math.pi, math.pi, size=6) * 0.5)


def minimize_so4(
    obj,
    R0: np.ndarray,
    *,
    step0: float = 0.2,
    grad_eps: float = 1e-6,
    gtol: float = 1e-10,
    max_iter: int = 500,
    polish_iters: int = 12,
    success: float = -math.inf,
):
    """Minimize obj(R) over SO(4), recentering the so(4) chart each step.

    Gradients are central differences in the local chart; after descent a
    damped Newton polish in the final chart tightens the minimum.
    """
    R = R0.copy()
    fR = obj(R)
    step = step0

    def local(theta):
        return obj(R @ so4_exp(theta))

    for _ in range(max_iter):
        if fR <= success:
            break
        g = fd_gradient(local, np.zeros(6), grad_eps)
        gn = np.linalg.norm(g)
        if gn <= gtol:
            break
        d = -g / gn
        s = step
        improved = False
        for _ in range(40):
            Rn = R @ so4_exp(s * d)
            fn = obj(Rn)
            if fn < fR:
                R, fR = Rn, fn
                improved = True
                break
            s *= 0.5
        if not improved:
            break
        step = 2.0 * s
    if polish_iters > 0 and fR > success:
        fT, theta = _newton_polish(
            local,
            np.zeros(6),
            fR,
            eps=grad_eps,
            gtol=gtol,
            iters=polish_iters,
            success=success,
        )
        if fT < fR:
            R, fR = R @ so4_exp(theta), fT
    return fR, R


def minimize_so4_multistart(
    obj, *, restarts: int, seed: int, success: float = -math.inf, **kw
):
    """Multi-start SO(4) minimization, identity first, early exit on success."""
    rng = np.random.default_rng(seed)
    best_f, best_R = math.inf, np.eye(4)
    for k in range(restarts):
        R0 = np.eye(4) if k == 0 else random_rotation(rng)
        fR, R = minimize_so4(obj, R0, success=success, **kw)
        if fR < best_f:
            best_f, best_R = fR, R
        if best_f <= success:
            break
    return best_f, best_R
