"""Small numeric helpers: 1-D searches, quadrature nodes, number formatting."""

import numpy as np

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, a, b, tol=1e-12, maxiter=200):
    """Golden-section minimum of f on [a, b]; returns (x, f(x)).

    Endpoints are included in the final comparison, so boundary minima
    are reported exactly at the boundary.
    """
    a = float(a)
    b = float(b)
    if b < a:
        a, b = b, a
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while (b - a) > tol and it < maxiter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        it += 1
    cands = [(a, f(a)), (b, f(b)), (x1, f1), (x2, f2)]
    return min(cands, key=lambda p: p[1])


def golden_max(f, a, b, tol=1e-12, maxiter=200):
    """Golden-section maximum of f on [a, b]; returns (x, f(x))."""
    x, fx = golden_min(lambda s: -f(s), a, b, tol=tol, maxiter=maxiter)
    return x, -fx


def gauss_legendre(n):
    """Cached Gauss-Legendre nodes/weights on [0, 1]."""
    key = int(n)
    cached = _GL_CACHE.get(key)
    if cached is None:
        x, w = np.polynomial.legendre.leggauss(key)
        cached = ((x + 1.0) / 2.0, w / 2.0)
        _GL_CACHE[key] = cached
    return cached


_GL_CACHE: dict = {}


def quintic_smoothstep(u):
    """C^2 unit step 6u^5 - 15u^4 + 10u^3, clipped outside [0, 1]."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0)


def quintic_smoothstep_d1(u):
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    uu = np.clip(u, 0.0, 1.0)
    d = 30.0 * uu * uu * (1.0 - uu) ** 2
    return np.where(inside, d, 0.0)


def quintic_smoothstep_int(u):
    """Antiderivative of the quintic smoothstep, zero at u = 0."""
    u = np.asarray(u, dtype=float)
    below = np.clip(u, 0.0, 1.0)
    val = below**4 * (below * (below - 3.0) + 2.5)
    return val + np.maximum(u - 1.0, 0.0)


def float17(x):
    """17-significant-digit decimal form; infinities become 'inf'/'-inf'."""
    x = float(x)
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    if np.isnan(x):
        return "nan"
    return format(x, ".17g")
