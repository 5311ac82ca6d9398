"""Curves in R^n reparametrized by arclength, with exact first three derivatives.

Closed components use truncated Fourier series in the raw parameter,
open arcs use Chebyshev series, and a few analytic presets (unit circle,
circle arcs, ellipses, and a smoothed stadium built from a curvature
profile) are evaluated in closed form. All derivatives come from series
or closed-form differentiation, never finite differences, so curvature
and the third derivative are trustworthy at machine precision.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import NonRegularCurveError, OutOfDomainError, QuadratureFailureError
from .util import (
    gauss_legendre,
    quintic_smoothstep,
    quintic_smoothstep_d1,
    quintic_smoothstep_int,
)

ABSENT = None


@dataclass(frozen=True)
class FrenetData:
    """Pointwise frame data at arclength s."""

    s: float
    point: np.ndarray
    tangent: np.ndarray
    second_deriv: np.ndarray
    curvature: float
    principal_normal: np.ndarray | None


class ArclengthCurve:
    """A single C^3 component parametrized by arclength.

    Subclasses implement `_eval(s, order)` on arrays of in-domain,
    already-wrapped arclength values. Public evaluators accept scalars
    or arrays, wrap closed components periodically, and reject
    out-of-domain values on open arcs.
    """

    def __init__(self, ambient_dim, length, closed, s_min, kappa_tol_factor=1e-9):
        self.ambient_dim = int(ambient_dim)
        self.length = float(length)
        self.closed = bool(closed)
        self.s_min = float(s_min)
        self.s_max = self.s_min + self.length
        self.kappa_tol = kappa_tol_factor / self.length

    # -- domain handling ---------------------------------------------------

    def wrap(self, s):
        """Map s into the fundamental domain (periodically for closed curves)."""
        s = np.asarray(s, dtype=float)
        if self.closed:
            return self.s_min + np.mod(s - self.s_min, self.length)
        lo, hi = self.s_min, self.s_max
        tol = 1e-9 * self.length
        if np.any(s < lo - tol) or np.any(s > hi + tol):
            raise OutOfDomainError(
                f"s outside [{lo}, {hi}] for open arc (got range "
                f"[{float(np.min(s))}, {float(np.max(s))}])"
            )
        return np.clip(s, lo, hi)

    def grid(self, n):
        """n arclength samples: uniform without endpoint duplication when closed,
        endpoints included for open arcs."""
        if self.closed:
            return self.s_min + self.length * np.arange(n) / n
        return np.linspace(self.s_min, self.s_max, n)

    def periodic_distance(self, s1, s2):
        d = np.abs(np.asarray(s1, dtype=float) - np.asarray(s2, dtype=float))
        if self.closed:
            d = np.minimum(d, self.length - np.mod(d, self.length))
            d = np.abs(d)
        return d

    # -- evaluation --------------------------------------------------------

    def _eval(self, s, order):
        raise NotImplementedError

    def _vectorized(self, s, order):
        s = self.wrap(s)
        scalar = s.ndim == 0
        out = self._eval(np.atleast_1d(s), order)
        return out[0] if scalar else out

    def point(self, s):
        return self._vectorized(s, 0)

    def tangent(self, s):
        return self._vectorized(s, 1)

    def second_derivative(self, s):
        return self._vectorized(s, 2)

    def third_derivative(self, s):
        return self._vectorized(s, 3)

    def curvature(self, s):
        d2 = self.second_derivative(s)
        return np.linalg.norm(d2, axis=-1)

    def curvature_rate(self, s):
        """d(kappa)/ds from exact derivatives; 0 where kappa vanishes."""
        d2 = self.second_derivative(s)
        d3 = self.third_derivative(s)
        kap = np.linalg.norm(d2, axis=-1)
        dot = np.sum(d2 * d3, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = np.where(kap > self.kappa_tol, dot / np.where(kap > 0, kap, 1.0), 0.0)
        return rate

    def frame(self, s):
        """FrenetData at scalar s; principal normal ABSENT below kappa_tol."""
        s = float(np.asarray(self.wrap(s)))
        p = self.point(s)
        t = self.tangent(s)
        d2 = self.second_derivative(s)
        kap = float(np.linalg.norm(d2))
        if kap > self.kappa_tol:
            normal = d2 / kap
        else:
            normal = ABSENT
        return FrenetData(s, p, t, d2, kap, normal)


def evaluate_frame(curve, s):
    """Frenet-type data at s (see FrenetData)."""
    return curve.frame(s)


def third_derivative(curve, s):
    return curve.third_derivative(s)


def collapse_ode_residual(curve, s):
    """|gamma''' + kappa^2 gamma'|, zero exactly on circular arcs."""
    d3 = curve.third_derivative(s)
    t = curve.tangent(s)
    kap = curve.curvature(s)
    res = d3 + (np.asarray(kap)[..., None] ** 2) * t
    return np.linalg.norm(res, axis=-1)


# ---------------------------------------------------------------------------
# Analytic presets
# ---------------------------------------------------------------------------


class CircleArcCurve(ArclengthCurve):
    """Arc (or full loop) of the unit circle in the x1-x2 plane of R^n.

    Already arclength-parametrized, so all derivatives are exact trig.
    """

    def __init__(self, s_start=0.0, s_end=2.0 * np.pi, ambient_dim=2, closed=None):
        length = float(s_end) - float(s_start)
        if length <= 0:
            raise NonRegularCurveError("circle arc needs s_end > s_start")
        if closed is None:
            closed = abs(length - 2.0 * np.pi) < 1e-12
        super().__init__(ambient_dim, length, closed, s_start)

    def _eval(self, s, order):
        out = np.zeros(s.shape + (self.ambient_dim,))
        c, si = np.cos(s), np.sin(s)
        if order == 0:
            out[..., 0], out[..., 1] = c, si
        elif order == 1:
            out[..., 0], out[..., 1] = -si, c
        elif order == 2:
            out[..., 0], out[..., 1] = -c, -si
        elif order == 3:
            out[..., 0], out[..., 1] = si, -c
        else:
            raise ValueError(f"order {order}")
        return out


class SegmentCurve(ArclengthCurve):
    """Straight segment from a to b, arclength parametrized on [0, |b-a|]."""

    def __init__(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        length = float(np.linalg.norm(b - a))
        if length <= 0:
            raise NonRegularCurveError("segment endpoints coincide")
        super().__init__(a.size, length, False, 0.0)
        self._a = a
        self._dir = (b - a) / length

    def _eval(self, s, order):
        out = np.zeros(s.shape + (self.ambient_dim,))
        if order == 0:
            out[:] = self._a + s[..., None] * self._dir
        elif order == 1:
            out[:] = self._dir
        return out


# ---------------------------------------------------------------------------
# Series curves in a raw parameter, reparametrized by arclength
# ---------------------------------------------------------------------------


class _RawCurve(ArclengthCurve):
    """Curve given by raw-parameter evaluators, reparametrized to arclength.

    The map s -> t is tabulated on a uniform raw grid (composite
    Gauss-Legendre per cell), interpolated monotonically (PCHIP) and
    polished by Newton so |s(t) - s| <= 1e-12 * L.
    """

    _GL_N = 16
    _TABLE_N = 1024

    def __init__(self, closed, raw_domain, tol=1e-10, table_n=None):
        self._t0, self._t1 = float(raw_domain[0]), float(raw_domain[1])
        if self._t1 <= self._t0:
            raise NonRegularCurveError("raw domain is empty")
        n = int(table_n or self._TABLE_N)
        tg = np.linspace(self._t0, self._t1, n + 1)
        speeds = np.linalg.norm(self._raw(tg, 1), axis=-1)
        if np.min(speeds) <= 0 or not np.all(np.isfinite(speeds)):
            raise NonRegularCurveError("raw parametrization has vanishing speed")
        nodes, wts = gauss_legendre(self._GL_N)
        h = tg[1:] - tg[:-1]
        tt = tg[:-1, None] + h[:, None] * nodes[None, :]
        sp = np.linalg.norm(self._raw(tt.ravel(), 1), axis=-1).reshape(tt.shape)
        if np.min(sp) <= 0:
            raise NonRegularCurveError("raw parametrization has vanishing speed")
        cell = (sp * wts[None, :]).sum(axis=1) * h
        cum = np.concatenate([[0.0], np.cumsum(cell)])
        length = float(cum[-1])
        # Budget-checked refinement of the total length (doubling rule).
        check, ok = self._length_refined(length, tol)
        if not ok:
            raise QuadratureFailureError("arclength quadrature did not stabilize")
        length = check
        cum *= length / cum[-1] if cum[-1] > 0 else 1.0
        super().__init__(self._raw(np.array([self._t0]), 0).shape[-1], length, closed, 0.0)
        self._t_grid = tg
        self._s_grid = cum
        self._t_of_s = PchipInterpolator(cum, tg)

    def _length_refined(self, base, tol, max_doublings=6):
        nodes, wts = gauss_legendre(self._GL_N)
        prev = base
        m = 2 * self._TABLE_N
        for _ in range(max_doublings):
            tg = np.linspace(self._t0, self._t1, m + 1)
            h = tg[1:] - tg[:-1]
            tt = tg[:-1, None] + h[:, None] * nodes[None, :]
            sp = np.linalg.norm(self._raw(tt.ravel(), 1), axis=-1).reshape(tt.shape)
            val = float(((sp * wts[None, :]).sum(axis=1) * h).sum())
            if abs(val - prev) <= tol * max(1.0, abs(val)):
                return val, True
            prev = val
            m *= 2
        return prev, False

    def _raw(self, t, order):
        raise NotImplementedError

    def _s_of_t(self, t):
        """Arclength from the table start, via per-cell Gauss-Legendre."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx = np.clip(np.searchsorted(self._t_grid, t, side="right") - 1, 0, len(self._t_grid) - 2)
        a = self._t_grid[idx]
        nodes, wts = gauss_legendre(self._GL_N)
        tt = a[:, None] + (t - a)[:, None] * nodes[None, :]
        sp = np.linalg.norm(self._raw(tt.ravel(), 1), axis=-1).reshape(tt.shape)
        return self._s_grid[idx] + (sp * wts[None, :]).sum(axis=1) * (t - a)

    def t_of_s(self, s):
        # Newton is pushed to the roundoff floor: second differences of
        # downstream quantities divide by h^2 and would amplify any slack.
        s = np.atleast_1d(np.asarray(s, dtype=float))
        t = np.asarray(self._t_of_s(np.clip(s, 0.0, self.length)), dtype=float)
        tol = 4e-16 * self.length
        for _ in range(6):
            resid = self._s_of_t(t) - s
            if np.max(np.abs(resid)) <= tol:
                break
            speed = np.linalg.norm(self._raw(t, 1), axis=-1)
            t = t - resid / speed
            t = np.clip(t, self._t0, self._t1)
        return t

    def _t_cached(self, s):
        """Single-slot memo: point/tangent/... calls reuse one inversion."""
        key = s.tobytes()
        cached = getattr(self, "_t_memo", None)
        if cached is not None and cached[0] == key:
            return cached[1]
        t = self.t_of_s(s - self.s_min)
        self._t_memo = (key, t)
        return t

    def _eval(self, s, order):
        t = self._t_cached(s)
        g1 = self._raw(t, 1)
        speed = np.linalg.norm(g1, axis=-1)
        inv = 1.0 / speed
        if order == 0:
            return self._raw(t, 0)
        if order == 1:
            return g1 * inv[..., None]
        g2 = self._raw(t, 2)
        sp1 = np.sum(g1 * g2, axis=-1) * inv  # d(speed)/dt
        t1 = inv
        t2 = -sp1 * inv**3
        if order == 2:
            return g2 * (t1**2)[..., None] + g1 * t2[..., None]
        g3 = self._raw(t, 3)
        sp2 = (np.sum(g2 * g2, axis=-1) + np.sum(g1 * g3, axis=-1)) * inv - sp1**2 * inv
        t3 = (-sp2 * inv**4 + 3.0 * sp1**2 * inv**5)
        if order == 3:
            return (
                g3 * (t1**3)[..., None]
                + 3.0 * g2 * (t1 * t2)[..., None]
                + g1 * t3[..., None]
            )
        raise ValueError(f"order {order}")


class FourierCurve(_RawCurve):
    """Closed curve with one real Fourier series per coordinate.

    coefficients[i] = [a0, a1, b1, a2, b2, ...] meaning
    x_i(t) = a0 + sum_k a_k cos(k w t) + b_k sin(k w t), w = 2 pi / period.
    """

    def __init__(self, coefficients, period=2.0 * np.pi, tol=1e-10, table_n=None):
        coeffs = [np.asarray(c, dtype=float) for c in coefficients]
        if len(coeffs) < 2:
            raise NonRegularCurveError("need at least 2 coordinates")
        if any(c.size < 3 or c.size % 2 == 0 for c in coeffs):
            raise NonRegularCurveError("each coordinate needs [a0, a1, b1, ...]")
        if not all(np.all(np.isfinite(c)) for c in coeffs):
            raise NonRegularCurveError("non-finite Fourier coefficients")
        self._coeffs = coeffs
        self._omega = 2.0 * np.pi / float(period)
        self._period = float(period)
        super().__init__(True, (0.0, float(period)), tol=tol, table_n=table_n)

    def t_of_s(self, s):
        s = np.mod(np.atleast_1d(np.asarray(s, dtype=float)), self.length)
        return super().t_of_s(s)

    def _raw(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape + (len(self._coeffs),))
        for i, c in enumerate(self._coeffs):
            kmax = (c.size - 1) // 2
            acc = np.zeros_like(t)
            if order == 0:
                acc += c[0]
            for k in range(1, kmax + 1):
                ak, bk = c[2 * k - 1], c[2 * k]
                w = k * self._omega
                ph = w * t
                fac = w**order
                # d/dt rotates (cos, sin) a quarter period per order.
                if order % 4 == 0:
                    acc += fac * (ak * np.cos(ph) + bk * np.sin(ph))
                elif order % 4 == 1:
                    acc += fac * (-ak * np.sin(ph) + bk * np.cos(ph))
                elif order % 4 == 2:
                    acc += fac * (-ak * np.cos(ph) - bk * np.sin(ph))
                else:
                    acc += fac * (ak * np.sin(ph) - bk * np.cos(ph))
            out[..., i] = acc
        return out


class ChebyshevCurve(_RawCurve):
    """Open arc with one Chebyshev series per coordinate on [t0, t1]."""

    def __init__(self, coefficients, raw_domain, tol=1e-10, table_n=None):
        coeffs = [np.asarray(c, dtype=float) for c in coefficients]
        if len(coeffs) < 2:
            raise NonRegularCurveError("need at least 2 coordinates")
        if any(c.size < 2 for c in coeffs):
            raise NonRegularCurveError("truncation order must be >= 1")
        if not all(np.all(np.isfinite(c)) for c in coeffs):
            raise NonRegularCurveError("non-finite Chebyshev coefficients")
        dom = [float(raw_domain[0]), float(raw_domain[1])]
        self._series = [npcheb.Chebyshev(c, domain=dom) for c in coeffs]
        self._derivs = [[p.deriv(m) for m in range(1, 4)] for p in self._series]
        super().__init__(False, dom, tol=tol, table_n=table_n)

    def _raw(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape + (len(self._series),))
        for i, p in enumerate(self._series):
            out[..., i] = p(t) if order == 0 else self._derivs[i][order - 1](t)
        return out


class EllipseCurve(FourierCurve):
    """Ellipse (a cos t, b sin t), reparametrized by arclength."""

    def __init__(self, a=2.0, b=1.0, tol=1e-12, table_n=2048):
        if a <= 0 or b <= 0:
            raise NonRegularCurveError("ellipse semi-axes must be positive")
        self.a, self.b = float(a), float(b)
        super().__init__(
            [[0.0, a, 0.0], [0.0, 0.0, b]], period=2.0 * np.pi, tol=tol, table_n=table_n
        )


# ---------------------------------------------------------------------------
# Curvature-profile curves (planar): used for the stadium preset
# ---------------------------------------------------------------------------


class _Piece:
    """One maximal piece of a curvature profile on [s0, s1].

    kind 'const': kappa = k0.
    kind 'step':  kappa = k0 + (k1 - k0) * S((s - s0) / (s1 - s0)) with the
    quintic smoothstep S, so the profile is C^2 and the curve C^4.
    """

    __slots__ = ("s0", "s1", "kind", "k0", "k1", "theta0", "x0", "y0")

    def __init__(self, s0, s1, kind, k0, k1):
        self.s0, self.s1, self.kind, self.k0, self.k1 = s0, s1, kind, k0, k1


class CurvatureProfileCurve(ArclengthCurve):
    """Planar arclength-native curve defined by a piecewise curvature profile.

    The tangent angle is the exact integral of kappa (piecewise polynomial),
    positions use closed forms on constant pieces and Gauss-Legendre on the
    short smoothstep transitions. The profile may be declared symmetric, in
    which case only [0, L/2] is stored and s in [L/2, L] is evaluated by
    mirror symmetry about the x-axis.
    """

    _GL_N = 24

    def __init__(self, pieces, start_point, start_angle, closed, mirrored=False):
        self._pieces = pieces
        self._mirrored = bool(mirrored)
        half = pieces[-1].s1
        length = 2.0 * half if mirrored else half
        x, y = float(start_point[0]), float(start_point[1])
        th = float(start_angle)
        for p in pieces:
            p.theta0, p.x0, p.y0 = th, x, y
            dx, dy, dth = self._advance(p, p.s1)
            x, y, th = x + dx, y + dy, th + dth
        self._end_state = (x, y, th)
        super().__init__(2, length, closed, 0.0)

    # -- profile primitives --------------------------------------------------

    def _theta_local(self, p, s):
        """theta(s) - theta(p.s0) for s within piece p (vectorized)."""
        ds = s - p.s0
        if p.kind == "const":
            return p.k0 * ds
        w = p.s1 - p.s0
        u = ds / w
        return p.k0 * ds + (p.k1 - p.k0) * w * quintic_smoothstep_int(u)

    def _kappa_local(self, p, s):
        if p.kind == "const":
            return np.full(np.shape(s), p.k0, dtype=float)
        u = (s - p.s0) / (p.s1 - p.s0)
        return p.k0 + (p.k1 - p.k0) * quintic_smoothstep(u)

    def _kappa_rate_local(self, p, s):
        if p.kind == "const":
            return np.zeros(np.shape(s), dtype=float)
        w = p.s1 - p.s0
        u = (s - p.s0) / w
        return (p.k1 - p.k0) / w * quintic_smoothstep_d1(u)

    def _advance(self, p, s_end):
        """(dx, dy, dtheta) from p.s0 to s_end inside piece p (scalars)."""
        if p.kind == "const" and p.k0 == 0.0:
            ds = s_end - p.s0
            return ds * np.cos(p.theta0), ds * np.sin(p.theta0), 0.0
        if p.kind == "const":
            k = p.k0
            th1 = p.theta0 + k * (s_end - p.s0)
            dx = (np.sin(th1) - np.sin(p.theta0)) / k
            dy = (-np.cos(th1) + np.cos(p.theta0)) / k
            return dx, dy, th1 - p.theta0
        nodes, wts = gauss_legendre(self._GL_N)
        ss = p.s0 + (s_end - p.s0) * nodes
        th = p.theta0 + self._theta_local(p, ss)
        h = s_end - p.s0
        return (
            float(np.sum(np.cos(th) * wts) * h),
            float(np.sum(np.sin(th) * wts) * h),
            float(self._theta_local(p, np.asarray(s_end))),
        )

    # -- vectorized evaluation -------------------------------------------------

    def _piece_index(self, s):
        bounds = np.array([p.s1 for p in self._pieces])
        return np.clip(np.searchsorted(bounds, s, side="left"), 0, len(self._pieces) - 1)

    def _half_eval(self, s, order):
        """Evaluate on the stored half-profile domain [0, half-length]."""
        s = np.asarray(s, dtype=float)
        idx = self._piece_index(s)
        out = np.zeros(s.shape + (2,))
        for j, p in enumerate(self._pieces):
            m = idx == j
            if not np.any(m):
                continue
            sj = s[m]
            th = p.theta0 + self._theta_local(p, sj)
            if order == 0:
                if p.kind == "const" and p.k0 == 0.0:
                    ds = sj - p.s0
                    x = p.x0 + ds * np.cos(p.theta0)
                    y = p.y0 + ds * np.sin(p.theta0)
                elif p.kind == "const":
                    k = p.k0
                    x = p.x0 + (np.sin(th) - np.sin(p.theta0)) / k
                    y = p.y0 + (-np.cos(th) + np.cos(p.theta0)) / k
                else:
                    nodes, wts = gauss_legendre(self._GL_N)
                    h = sj - p.s0
                    ss = p.s0 + h[:, None] * nodes[None, :]
                    tt = p.theta0 + self._theta_local(p, ss)
                    x = p.x0 + (np.cos(tt) * wts[None, :]).sum(axis=1) * h
                    y = p.y0 + (np.sin(tt) * wts[None, :]).sum(axis=1) * h
                out[m, 0], out[m, 1] = x, y
            elif order == 1:
                out[m, 0], out[m, 1] = np.cos(th), np.sin(th)
            elif order == 2:
                k = self._kappa_local(p, sj)
                out[m, 0], out[m, 1] = -k * np.sin(th), k * np.cos(th)
            elif order == 3:
                k = self._kappa_local(p, sj)
                kr = self._kappa_rate_local(p, sj)
                out[m, 0] = -kr * np.sin(th) - k * k * np.cos(th)
                out[m, 1] = kr * np.cos(th) - k * k * np.sin(th)
            else:
                raise ValueError(f"order {order}")
        return out

    def _eval(self, s, order):
        if not self._mirrored:
            return self._half_eval(s, order)
        half = self.length / 2.0
        s = np.asarray(s, dtype=float)
        hi = s > half
        sref = np.where(hi, self.length - s, s)
        out = self._half_eval(sref, order)
        # Mirror about the x-axis: gamma(L-s) = M gamma(s), M = diag(1,-1);
        # odd derivative orders pick up an extra overall sign.
        sign_y = np.where(hi, -1.0, 1.0)
        sign_all = np.where(hi & (order % 2 == 1), -1.0, 1.0)
        out = out * sign_all[..., None]
        out[..., 1] *= sign_y
        return out

    def profile_curvature(self, s):
        """kappa(s) straight from the profile (no norm round-off)."""
        s = np.atleast_1d(self.wrap(s))
        if self._mirrored:
            half = self.length / 2.0
            s = np.where(s > half, self.length - s, s)
        idx = self._piece_index(s)
        out = np.zeros_like(s)
        for j, p in enumerate(self._pieces):
            m = idx == j
            if np.any(m):
                out[m] = self._kappa_local(p, s[m])
        return out


def make_stadium(circle_turn=0.3, transition=0.05, line_length=7.0):
    """Smoothed stadium: exact unit-circle arc |s| <= circle_turn, straight
    sides, and a far cap whose curvature is solved so the curve closes.

    Returns (curve, layout) where layout records the piece boundaries needed
    by the matching weight preset.
    """
    p1 = float(circle_turn)
    d2 = 2.0 * float(transition)
    ell = float(line_length)
    if p1 <= 0 or transition <= 0 or ell <= 0:
        raise NonRegularCurveError("stadium parameters must be positive")
    s1, s2 = p1, p1 + d2
    s3, s4 = s2 + ell, s2 + ell + d2
    turn_fixed = p1 + 0.5 * d2  # circle + down-transition turning

    def build(kappa2):
        cap_turn = np.pi - turn_fixed - kappa2 * 0.5 * d2
        if cap_turn <= 0:
            raise NonRegularCurveError("stadium cap turn is non-positive")
        s5 = s4 + cap_turn / kappa2
        pieces = [
            _Piece(0.0, s1, "const", 1.0, 1.0),
            _Piece(s1, s2, "step", 1.0, 0.0),
            _Piece(s2, s3, "const", 0.0, 0.0),
            _Piece(s3, s4, "step", 0.0, kappa2),
            _Piece(s4, s5, "const", kappa2, kappa2),
        ]
        return CurvatureProfileCurve(pieces, (1.0, 0.0), np.pi / 2.0, True, mirrored=True)

    def end_y(kappa2):
        return build(kappa2)._end_state[1]

    kappa2 = brentq(end_y, 1e-3, 0.9, xtol=1e-14, rtol=1e-15)
    curve = build(kappa2)
    layout = {
        "circle_end": s1,
        "transition_end": s2,
        "line_end": s3,
        "cap_start": s4,
        "cap_curvature": kappa2,
        "half_length": curve.length / 2.0,
    }
    return curve, layout


# ---------------------------------------------------------------------------
# Factory
# ---------------------------------------------------------------------------


def build_arclength_curve(kind, tol=1e-10, **params):
    """Build a component by kind: 'fourier', 'chebyshev', or a preset name
    ('unit_circle', 'circle_arc', 'ellipse', 'stadium', 'segment').

    Raises NonRegularCurveError / QuadratureFailureError per the contracts.
    """
    if kind == "fourier":
        return FourierCurve(
            params["coefficients"], period=params.get("period", 2.0 * np.pi), tol=tol,
            table_n=params.get("table_n"),
        )
    if kind == "chebyshev":
        return ChebyshevCurve(
            params["coefficients"], params["raw_domain"], tol=tol,
            table_n=params.get("table_n"),
        )
    if kind == "unit_circle":
        return CircleArcCurve(0.0, 2.0 * np.pi, params.get("ambient_dim", 2), closed=True)
    if kind == "circle_arc":
        return CircleArcCurve(
            params["s_start"], params["s_end"], params.get("ambient_dim", 2), closed=False
        )
    if kind == "ellipse":
        return EllipseCurve(params.get("a", 2.0), params.get("b", 1.0))
    if kind == "stadium":
        curve, _ = make_stadium(
            params.get("circle_turn", 0.3),
            params.get("transition", 0.05),
            params.get("line_length", 7.0),
        )
        return curve
    if kind == "segment":
        return SegmentCurve(params["a"], params["b"])
    raise NonRegularCurveError(f"unknown curve kind {kind!r}")
