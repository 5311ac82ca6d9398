"""Positive weight functions along a component, with exact derivatives.

Weights are functions of the arclength parameter s and expose exact first,
second and third derivatives (the singularity and collapse tests need a
trustworthy third derivative). Kinds mirror the curve bases: constant,
polynomial, cosine, Fourier and Chebyshev series, plus the piecewise blend
used by the stadium scene and an additive-offset wrapper for weight
families.
"""

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly

from .errors import NonpositiveWeightError


class WeightFunction:
    """Scalar weight mu(s) > 0 with derivatives up to third order."""

    def mu(self, s):
        raise NotImplementedError

    def d1(self, s):
        raise NotImplementedError

    def d2(self, s):
        raise NotImplementedError

    def d3(self, s):
        raise NotImplementedError

    def eval_all(self, s):
        return self.mu(s), self.d1(s), self.d2(s), self.d3(s)

    def validate_on(self, curve, samples=4096):
        """Reject non-positive weights (sampled densely over the domain)."""
        sg = curve.grid(samples)
        vals = np.asarray(self.mu(sg), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NonpositiveWeightError("weight is not finite on the domain")
        if np.min(vals) <= 0.0:
            smin = float(sg[int(np.argmin(vals))])
            raise NonpositiveWeightError(
                f"weight must be positive; min {float(np.min(vals))} near s={smin}"
            )
        return self


def weight_eval(weight, s):
    """(mu, mu', mu'') at s; mu > 0 is guaranteed at construction time."""
    return weight.mu(s), weight.d1(s), weight.d2(s)


class ConstantWeight(WeightFunction):
    def __init__(self, value):
        if value <= 0:
            raise NonpositiveWeightError("constant weight must be positive")
        self.value = float(value)

    def mu(self, s):
        return np.full(np.shape(s), self.value, dtype=float) if np.ndim(s) else self.value

    def d1(self, s):
        return np.zeros(np.shape(s)) if np.ndim(s) else 0.0

    d2 = d1
    d3 = d1


class PolynomialWeight(WeightFunction):
    """mu(s) = sum_k c_k s^k."""

    def __init__(self, coefficients):
        c = np.asarray(coefficients, dtype=float)
        self._p = [c] + [nppoly.polyder(c, m) for m in range(1, 4)]

    def mu(self, s):
        return nppoly.polyval(s, self._p[0])

    def d1(self, s):
        return nppoly.polyval(s, self._p[1])

    def d2(self, s):
        return nppoly.polyval(s, self._p[2])

    def d3(self, s):
        return nppoly.polyval(s, self._p[3])


class CosineWeight(WeightFunction):
    """mu(s) = amplitude * cos(frequency * s + phase) + offset."""

    def __init__(self, amplitude=1.0, frequency=0.5, phase=0.0, offset=0.0):
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)
        self.phase = float(phase)
        self.offset = float(offset)

    def _ph(self, s):
        return self.frequency * np.asarray(s, dtype=float) + self.phase

    def mu(self, s):
        return self.amplitude * np.cos(self._ph(s)) + self.offset

    def d1(self, s):
        return -self.amplitude * self.frequency * np.sin(self._ph(s))

    def d2(self, s):
        return -self.amplitude * self.frequency**2 * np.cos(self._ph(s))

    def d3(self, s):
        return self.amplitude * self.frequency**3 * np.sin(self._ph(s))


class FourierWeight(WeightFunction):
    """Periodic series a0 + sum a_k cos(k w s) + b_k sin(k w s), w = 2 pi / period."""

    def __init__(self, coefficients, period):
        self._c = np.asarray(coefficients, dtype=float)
        if self._c.size % 2 == 0:
            raise NonpositiveWeightError("Fourier weight needs [a0, a1, b1, ...]")
        self._omega = 2.0 * np.pi / float(period)

    def _eval(self, s, order):
        s = np.asarray(s, dtype=float)
        acc = np.zeros_like(s, dtype=float)
        if order == 0:
            acc = acc + self._c[0]
        kmax = (self._c.size - 1) // 2
        for k in range(1, kmax + 1):
            ak, bk = self._c[2 * k - 1], self._c[2 * k]
            w = k * self._omega
            ph = w * s
            fac = w**order
            if order % 4 == 0:
                acc = acc + fac * (ak * np.cos(ph) + bk * np.sin(ph))
            elif order % 4 == 1:
                acc = acc + fac * (-ak * np.sin(ph) + bk * np.cos(ph))
            elif order % 4 == 2:
                acc = acc + fac * (-ak * np.cos(ph) - bk * np.sin(ph))
            else:
                acc = acc + fac * (ak * np.sin(ph) - bk * np.cos(ph))
        return acc

    def mu(self, s):
        return self._eval(s, 0)

    def d1(self, s):
        return self._eval(s, 1)

    def d2(self, s):
        return self._eval(s, 2)

    def d3(self, s):
        return self._eval(s, 3)


class ChebyshevWeight(WeightFunction):
    def __init__(self, coefficients, domain):
        self._p = npcheb.Chebyshev(np.asarray(coefficients, dtype=float), domain=list(domain))
        self._d = [self._p.deriv(m) for m in range(1, 4)]

    def mu(self, s):
        return self._p(np.asarray(s, dtype=float))

    def d1(self, s):
        return self._d[0](np.asarray(s, dtype=float))

    def d2(self, s):
        return self._d[1](np.asarray(s, dtype=float))

    def d3(self, s):
        return self._d[2](np.asarray(s, dtype=float))


class OffsetWeight(WeightFunction):
    """mu_t = base + t; derivatives are the base's (weight families)."""

    def __init__(self, base, t):
        self.base = base
        self.t = float(t)

    def mu(self, s):
        return self.base.mu(s) + self.t

    def d1(self, s):
        return self.base.d1(s)

    def d2(self, s):
        return self.base.d2(s)

    def d3(self, s):
        return self.base.d3(s)


class SymmetricPiecewiseWeight(WeightFunction):
    """Even, L-periodic weight: cos(s/2) near s = 0, a controlled two-stage
    polynomial fade of the slope, then a constant plateau to the far side.

    On the folded coordinate u = |s| (reflected into [0, L/2]) the weight is

        cos(u/2)            on [0, cos_end],
        recovery stage      on [cos_end, cos_end + stage_a]   (mu'' fades
                            from the cosine's value back to 0, C^1 shape),
        braking stage       on the next stage_b units (mu'' is a flat-topped
                            C^1 bump scaled so mu' lands exactly at 0),
        plateau constant    out to L/2.

    All pieces are polynomials, so derivatives are exact; the fold points at
    u = 0 and u = L/2 have vanishing odd derivatives, making the periodic
    weight C^3 overall. The braking stage keeps mu * mu'' + mu'^2 small,
    which is what bounds the focal-radius profile away from the curve's
    circle section.
    """

    def __init__(self, period, cos_end, stage_a, stage_b, shoulder=0.2):
        self.period = float(period)
        self.u1 = float(cos_end)
        ta, tb, r = float(stage_a), float(stage_b), float(shoulder)
        if not (0.0 < self.u1 and ta > 0 and tb > 0 and 0 < r < 0.5):
            raise NonpositiveWeightError("blend stage parameters must be positive")
        self.u2 = self.u1 + ta + tb
        if self.u2 >= self.period / 2.0:
            raise NonpositiveWeightError("blend must finish before the far side")
        v = np.cos(self.u1 / 2.0)
        v1 = -np.sin(self.u1 / 2.0) / 2.0
        v2 = -np.cos(self.u1 / 2.0) / 4.0
        v3 = np.sin(self.u1 / 2.0) / 8.0
        # Recovery: mu''(x) = v2 * psi(x/ta), cubic psi with psi(0)=1,
        # psi'(0) matching mu''' continuity, psi(1)=psi'(1)=0.
        # Solving 1 + p + a + b = 0 and p + 2a + 3b = 0:
        p = v3 * ta / v2
        a = -3.0 - 2.0 * p
        b = 2.0 + p
        int_psi = 1.0 + p / 2.0 + a / 3.0 + b / 4.0
        # Braking: mu''(x) = P * phi(x/tb); phi = smoothstep shoulders of
        # relative width r around a unit plateau, integral 1 - r.
        va1 = v1 + v2 * ta * int_psi
        scale = -va1 / (tb * (1.0 - r))
        pieces = []  # (u_lo, u_hi, mu-coeffs in local x)
        d2a = v2 * np.array([1.0, p / ta, a / ta**2, b / ta**3])
        pieces.append(self._integrate_piece(self.u1, ta, d2a, v, v1))
        va = pieces[-1][3]
        # smoothstep S(y) = 10y^3 - 15y^4 + 6y^5 on the shoulders
        rb = r * tb
        s_up = scale * np.array([0.0, 0.0, 0.0, 10.0 / rb**3, -15.0 / rb**4, 6.0 / rb**5])
        pieces.append(self._integrate_piece(self.u1 + ta, rb, s_up, va, va1))
        vb, vb1 = pieces[-1][3], pieces[-1][4]
        flat = np.array([scale])
        pieces.append(self._integrate_piece(self.u1 + ta + rb, tb - 2 * rb, flat, vb, vb1))
        vc, vc1 = pieces[-1][3], pieces[-1][4]
        s_down = scale * np.array(
            [1.0, 0.0, 0.0, -10.0 / rb**3, 15.0 / rb**4, -6.0 / rb**5]
        )
        pieces.append(self._integrate_piece(self.u2 - rb, rb, s_down, vc, vc1))
        self.plateau = float(pieces[-1][3])
        self._slope_residual = float(pieces[-1][4])  # should be ~0 by scaling
        if self.plateau <= 0:
            raise NonpositiveWeightError("blend plateau is non-positive; widen the stages")
        self._pieces = [(lo, hi, coeffs) for lo, hi, coeffs, _, _ in pieces]

    @staticmethod
    def _integrate_piece(u_lo, width, d2_coeffs, value0, slope0):
        """Integrate mu'' coefficients twice on local x in [0, width]."""
        d1 = nppoly.polyint(d2_coeffs, 1, k=[slope0])
        mu = nppoly.polyint(d1, 1, k=[value0])
        end_val = float(nppoly.polyval(width, mu))
        end_slope = float(nppoly.polyval(width, d1))
        return (u_lo, u_lo + width, mu, end_val, end_slope)

    def _fold(self, s):
        s = np.mod(np.asarray(s, dtype=float), self.period)
        half = self.period / 2.0
        hi = s > half
        u = np.where(hi, self.period - s, s)
        sign = np.where(hi, -1.0, 1.0)  # du/ds
        return u, sign

    def _eval(self, s, order):
        u, sign = self._fold(s)
        out = np.empty_like(u)
        m_cos = u <= self.u1
        m_flat = u >= self.u2
        if np.any(m_cos):
            ph = u[m_cos] / 2.0
            quarter = order % 4
            if quarter == 0:
                val = np.cos(ph)
            elif quarter == 1:
                val = -np.sin(ph)
            elif quarter == 2:
                val = -np.cos(ph)
            else:
                val = np.sin(ph)
            out[m_cos] = 0.5**order * val
        out[m_flat] = self.plateau if order == 0 else 0.0
        for lo, hi, coeffs in self._pieces:
            m = (u > lo) & (u < hi) & ~m_cos & ~m_flat
            if not np.any(m):
                continue
            c = coeffs if order == 0 else nppoly.polyder(coeffs, order)
            out[m] = nppoly.polyval(u[m] - lo, c)
        if order % 2 == 1:
            out = out * sign
        return out

    def mu(self, s):
        return self._eval(s, 0)

    def d1(self, s):
        return self._eval(s, 1)

    def d2(self, s):
        return self._eval(s, 2)

    def d3(self, s):
        return self._eval(s, 3)


def fd_consistency(weight, s_values, h, order=1, rel_tol=1e-6):
    """Max relative gap between series derivatives and centered differences.

    Used by construction-time validation and the property tests.
    """
    s = np.asarray(s_values, dtype=float)
    if order == 1:
        exact = weight.d1(s)
        fd = (weight.mu(s + h) - weight.mu(s - h)) / (2.0 * h)
    elif order == 2:
        exact = weight.d2(s)
        fd = (weight.mu(s + h) - 2.0 * weight.mu(s) + weight.mu(s - h)) / h**2
    else:
        raise ValueError("order must be 1 or 2")
    scale = np.maximum(1.0, np.abs(exact))
    gap = float(np.max(np.abs(exact - fd) / scale))
    return gap, gap <= rel_tol


def build_weight(kind, curve=None, **params):
    """Weight factory used by the scene loader."""
    if kind == "constant":
        return ConstantWeight(params["value"])
    if kind == "polynomial":
        return PolynomialWeight(params["coefficients"])
    if kind == "cosine":
        return CosineWeight(
            params.get("amplitude", 1.0),
            params.get("frequency", 0.5),
            params.get("phase", 0.0),
            params.get("offset", 0.0),
        )
    if kind == "fourier":
        period = params.get("period")
        if period is None:
            if curve is None:
                raise NonpositiveWeightError("fourier weight needs period or a curve")
            period = curve.length
        return FourierWeight(params["coefficients"], period)
    if kind == "chebyshev":
        domain = params.get("domain")
        if domain is None:
            if curve is None:
                raise NonpositiveWeightError("chebyshev weight needs domain or a curve")
            domain = [curve.s_min, curve.s_max]
        return ChebyshevWeight(params["coefficients"], domain)
    if kind == "stadium_blend":
        if curve is None and "period" not in params:
            raise NonpositiveWeightError("stadium_blend weight needs its curve")
        period = params.get("period", curve.length if curve is not None else None)
        return SymmetricPiecewiseWeight(
            period,
            params.get("cos_end", 0.4),
            params.get("stage_a", 0.8),
            params.get("stage_b", 6.0),
            params.get("shoulder", 0.2),
        )
    raise NonpositiveWeightError(f"unknown weight kind {kind!r}")
