"""The weighted normal exponential map and the squared weighted distance.

For a foot gamma(s) with unit normal v and height R the map is

    exp(s, v, R) = gamma - mu mu' R^2 gamma' + mu R sqrt(1 - (mu' R)^2) v,

defined while R <= 1/|mu'(s)|. The squared weighted distance from p,
F_p(s) = |p - gamma(s)|^2 / mu(s)^2, drives everything else: feet of the
map are critical points of F_p, and the second derivative of F_p decides
regularity of the map.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonUniqueFootError,
    NotCriticalFootError,
    OutOfWError,
)

PLANE = "PLANE"
SPHERE = "SPHERE"

NOT_CRITICAL = "NOT_CRITICAL"
CP_PLUS = "CP_PLUS"
CP_ZERO = "CP_ZERO"
CP_MINUS = "CP_MINUS"


@dataclass(frozen=True)
class NormalOffset:
    """A normal-bundle point (foot s, unit normal v, height R >= 0)."""

    s: float
    v: np.ndarray
    R: float
    boundary: bool = False


@dataclass(frozen=True)
class FiberShape:
    """Image of the normal space at one foot: a plane or a sphere."""

    kind: str
    base_point: np.ndarray
    normal: np.ndarray | None = None  # PLANE: unit normal (the tangent)
    center: np.ndarray | None = None  # SPHERE
    radius: float | None = None  # SPHERE

    def contains(self, points, tol=1e-10):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == PLANE:
            gap = np.abs((pts - self.base_point) @ self.normal)
        else:
            gap = np.abs(np.linalg.norm(pts - self.center, axis=-1) - self.radius)
        return np.all(gap <= tol)


def w_bound(weight, s):
    """Admissible height bound 1/|mu'(s)| (+inf where mu' = 0)."""
    d1 = np.abs(np.asarray(weight.d1(s), dtype=float))
    with np.errstate(divide="ignore"):
        return np.where(d1 > 0.0, 1.0 / np.where(d1 > 0, d1, 1.0), np.inf)


def make_offset(curve, weight, s, v, R, w_tol=1e-12):
    """Project v into the normal space at s, normalize, and range-check R."""
    s = float(s)
    t = curve.tangent(s)
    v = np.asarray(v, dtype=float)
    v = v - (v @ t) * t
    nv = np.linalg.norm(v)
    if nv <= 1e-14:
        raise OutOfWError("direction is tangent to the curve at s")
    v = v / nv
    R = float(R)
    if R < 0:
        raise OutOfWError("height R must be nonnegative")
    bound = float(w_bound(weight, s))
    if R > bound * (1.0 + w_tol):
        raise OutOfWError(f"R={R} exceeds admissible bound {bound} at s={s}")
    boundary = np.isfinite(bound) and abs(R - bound) <= w_tol * max(1.0, bound)
    return NormalOffset(s, v, R, boundary)


def exp_mu(curve, weight, s, v, R):
    """Evaluate the map at foot s, unit normal v, height(s) R (scalar or array)."""
    s = float(s)
    off = make_offset(curve, weight, s, v, R if np.ndim(R) == 0 else np.max(R))
    g = curve.point(s)
    t = curve.tangent(s)
    mu = float(weight.mu(s))
    d1 = float(weight.d1(s))
    R = np.asarray(R, dtype=float)
    rad = np.sqrt(np.clip(1.0 - (d1 * R) ** 2, 0.0, None))
    return g - (mu * d1) * (R**2)[..., None] * t + (mu * R * rad)[..., None] * off.v


def exp_mu_batch(curve, weight, s, v, R):
    """Vectorized map over matched arrays s (m,), v (m,n), R (m,)."""
    s = np.asarray(s, dtype=float)
    R = np.asarray(R, dtype=float)
    g = curve.point(s)
    t = curve.tangent(s)
    mu = np.asarray(weight.mu(s), dtype=float)
    d1 = np.asarray(weight.d1(s), dtype=float)
    v = np.asarray(v, dtype=float)
    rad = np.sqrt(np.clip(1.0 - (d1 * R) ** 2, 0.0, None))
    return g - (mu * d1 * R**2)[:, None] * t + (mu * R * rad)[:, None] * v


def fiber_geometry(curve, weight, s, tol_plane=1e-10):
    """Shape of the normal-space image at s: plane iff |mu'(s)| <= tol_plane,
    else the sphere of radius mu/(2|mu'|) centered at gamma - (mu/(2 mu')) gamma'."""
    s = float(s)
    g = curve.point(s)
    t = curve.tangent(s)
    mu = float(weight.mu(s))
    d1 = float(weight.d1(s))
    if abs(d1) <= tol_plane:
        return FiberShape(PLANE, g, normal=t)
    center = g - (mu / (2.0 * d1)) * t
    return FiberShape(SPHERE, g, center=center, radius=mu / (2.0 * abs(d1)))


# ---------------------------------------------------------------------------
# Squared weighted distance and its s-derivatives
# ---------------------------------------------------------------------------


def f_value(curve, weight, s, p):
    p = np.asarray(p, dtype=float)
    g = curve.point(s)
    diff = p - g
    e = np.sum(diff * diff, axis=-1)
    mu = np.asarray(weight.mu(s), dtype=float)
    return e / mu**2


def f_prime(curve, weight, s, p):
    """dF_p/ds via logarithmic differentiation of E / mu^2."""
    p = np.asarray(p, dtype=float)
    g = curve.point(s)
    t = curve.tangent(s)
    diff = p - g
    e = np.sum(diff * diff, axis=-1)
    e1 = -2.0 * np.sum(diff * t, axis=-1)
    mu = np.asarray(weight.mu(s), dtype=float)
    d1 = np.asarray(weight.d1(s), dtype=float)
    return (e1 - 2.0 * e * d1 / mu) / mu**2


def f_second(curve, weight, s, p):
    """d^2F_p/ds^2, valid at any s (not only critical feet)."""
    p = np.asarray(p, dtype=float)
    g = curve.point(s)
    t = curve.tangent(s)
    g2 = curve.second_derivative(s)
    diff = p - g
    e = np.sum(diff * diff, axis=-1)
    e1 = -2.0 * np.sum(diff * t, axis=-1)
    e2 = 2.0 * (1.0 - np.sum(diff * g2, axis=-1))
    mu = np.asarray(weight.mu(s), dtype=float)
    d1 = np.asarray(weight.d1(s), dtype=float)
    d2 = np.asarray(weight.d2(s), dtype=float)
    return (
        e2 / mu**2
        - 4.0 * e1 * d1 / mu**3
        + 6.0 * e * d1**2 / mu**4
        - 2.0 * e * d2 / mu**3
    )


def f_second_critical(curve, weight, s, p, grad_tol=None):
    """Closed-form d^2F_p/ds^2 at a critical foot s of p:

        (2/mu^2) (1 - kappa R mu sqrt(1-(mu' R)^2) cos(beta) - (R^2/2)(mu^2)''),

    with R = |p - gamma(s)| / mu(s) and beta the angle between gamma''(s)
    and the normal part of the direction to p (0 when either vanishes).
    Raises NotCriticalFootError when s fails the first-order criticality
    test for p, and OutOfWError when the recovered height exceeds the
    admissible bound.
    """
    s = float(np.asarray(curve.wrap(s)))
    p = np.asarray(p, dtype=float)
    g = curve.point(s)
    mu = float(weight.mu(s))
    d1 = float(weight.d1(s))
    d2 = float(weight.d2(s))
    R = float(np.linalg.norm(p - g)) / mu
    bound = float(w_bound(weight, s))
    if R > bound * (1.0 + 1e-12):
        raise OutOfWError(f"recovered height {R} exceeds admissible bound {bound}")
    if grad_tol is None:
        grad_tol = 1e-8 * 2.0 / mu**2 * max(1.0, R) * max(1.0, curve.length)
    fp = float(f_prime(curve, weight, s, p))
    if abs(fp) > grad_tol:
        raise NotCriticalFootError(f"foot not critical: |F'|={abs(fp)} > {grad_tol}")
    g2 = curve.second_derivative(s)
    kap = float(np.linalg.norm(g2))
    cosb = 1.0
    if R > 0 and kap > curve.kappa_tol:
        u = (p - g) / np.linalg.norm(p - g)
        t = curve.tangent(s)
        un = u - (u @ t) * t
        nun = np.linalg.norm(un)
        if nun > 1e-14:
            cosb = float(g2 @ un / (kap * nun))
    musq2 = 2.0 * (d1**2 + mu * d2)  # (mu^2)''
    root = np.sqrt(max(0.0, 1.0 - (d1 * R) ** 2))
    return (2.0 / mu**2) * (1.0 - kap * R * mu * root * cosb - 0.5 * R**2 * musq2)


def f_second_at_offset(curve, weight, s, v, R):
    """Closed-form second derivative at the foot of exp(s, v, R)."""
    off = make_offset(curve, weight, s, v, R)
    p = exp_mu(curve, weight, off.s, off.v, off.R)
    return f_second_critical(curve, weight, off.s, p)


def classify_critical(curve, weight, s, p, tol_grad=None, tol_hess=None):
    """First/second-order class of s for F_p with banded thresholds."""
    mu = float(weight.mu(s))
    scale = 2.0 / mu**2
    if tol_grad is None:
        tol_grad = 1e-8 * scale
    if tol_hess is None:
        tol_hess = 1e-8 * scale
    if abs(float(f_prime(curve, weight, s, p))) > tol_grad:
        return NOT_CRITICAL
    h = float(f_second(curve, weight, s, p))
    if abs(h) <= tol_hess:
        return CP_ZERO
    return CP_PLUS if h > 0 else CP_MINUS


# ---------------------------------------------------------------------------
# Weighted closest points and the ambient potential G
# ---------------------------------------------------------------------------


@dataclass
class ClosestPoint:
    """Global minimizer of F_p over the scene."""

    component: int
    s: float
    value: float
    unique: bool
    ties: list = field(default_factory=list)


def _as_pairs(pairs):
    if isinstance(pairs, (list, tuple)) and pairs and isinstance(pairs[0], (list, tuple)):
        return list(pairs)
    return [tuple(pairs)]


def mu_closest_point(pairs, p, samples=2048, newton_iters=30, tie_rel=1e-9):
    """Weighted closest point via dense grid plus Newton polish.

    `pairs` is one (curve, weight) pair or a list of them. Grid minima tied
    within tie_rel (relative) at separated parameters are reported as ties
    and flip `unique` to False.
    """
    pairs = _as_pairs(pairs)
    p = np.asarray(p, dtype=float)
    best = None
    candidates = []
    for ci, (curve, weight) in enumerate(pairs):
        sg = curve.grid(samples)
        fv = f_value(curve, weight, sg, p)
        order = np.argsort(fv, kind="stable")
        i0 = int(order[0])
        step = curve.length / samples
        s_star, val = _polish_minimum(curve, weight, p, float(sg[i0]), step, newton_iters)
        candidates.append((ci, s_star, val))
        # Collect well-separated near-ties on the grid for the tie report.
        vmin = fv[i0]
        tie_mask = fv <= vmin + tie_rel * max(1.0, abs(vmin))
        tie_idx = np.nonzero(tie_mask)[0]
        for j in tie_idx:
            if curve.periodic_distance(sg[j], sg[i0]) > 3.0 * step:
                candidates.append((ci, float(sg[j]), float(fv[j])))
                break
        if best is None or val < best[2]:
            best = (ci, s_star, val)
    ties = []
    for ci, s_c, v_c in candidates:
        if v_c <= best[2] + tie_rel * max(1.0, abs(best[2])):
            same = ci == best[0] and pairs[ci][0].periodic_distance(s_c, best[1]) <= (
                3.0 * pairs[ci][0].length / samples
            )
            if not same:
                ties.append((ci, s_c, v_c))
    return ClosestPoint(best[0], best[1], best[2], unique=not ties, ties=ties)


def _polish_minimum(curve, weight, p, s0, bracket, iters):
    """Newton polish of a local minimum of F_p, golden fallback on failure."""
    s = s0
    lo, hi = s0 - bracket, s0 + bracket
    for _ in range(iters):
        g1 = float(f_prime(curve, weight, s, p))
        g2 = float(f_second(curve, weight, s, p))
        if g2 <= 0 or not np.isfinite(g1):
            break
        step = -g1 / g2
        step = float(np.clip(step, -bracket, bracket))
        s_new = s + step
        if not curve.closed:
            s_new = float(np.clip(s_new, curve.s_min, curve.s_max))
        if abs(s_new - s) <= 1e-15 * max(1.0, curve.length):
            s = s_new
            break
        s = s_new
    from .util import golden_min

    if not curve.closed:
        lo = max(lo, curve.s_min)
        hi = min(hi, curve.s_max)
    sg, vg = golden_min(lambda x: float(f_value(curve, weight, x, p)), lo, hi, tol=1e-13)
    vn = float(f_value(curve, weight, s, p))
    return (s, vn) if vn <= vg else (sg, vg)


def g_potential(pairs, points, samples=2048, refine_iters=40):
    """Vectorized G(p) = min_s F_p over all components for many ambient points.

    Refinement is a fixed-iteration golden section per point (branch-free,
    deterministic); returns (values, component_index, s_values).
    """
    pairs = _as_pairs(pairs)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m = pts.shape[0]
    best_v = np.full(m, np.inf)
    best_c = np.zeros(m, dtype=int)
    best_s = np.zeros(m)
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    for ci, (curve, weight) in enumerate(pairs):
        sg = curve.grid(samples)
        gp = curve.point(sg)
        mug = np.asarray(weight.mu(sg), dtype=float)
        d2mat = ((pts[:, None, :] - gp[None, :, :]) ** 2).sum(axis=2)
        fmat = d2mat / mug[None, :] ** 2
        idx = np.argmin(fmat, axis=1)
        step = curve.length / samples
        lo = sg[idx] - step
        hi = sg[idx] + step
        if not curve.closed:
            lo = np.clip(lo, curve.s_min, curve.s_max)
            hi = np.clip(hi, curve.s_min, curve.s_max)
        for _ in range(refine_iters):
            x1 = hi - golden * (hi - lo)
            x2 = lo + golden * (hi - lo)
            f1 = _f_batch(curve, weight, x1, pts)
            f2 = _f_batch(curve, weight, x2, pts)
            take1 = f1 <= f2
            hi = np.where(take1, x2, hi)
            lo = np.where(take1, lo, x1)
        smid = 0.5 * (lo + hi)
        vmid = _f_batch(curve, weight, smid, pts)
        better = vmid < best_v
        best_v = np.where(better, vmid, best_v)
        best_c = np.where(better, ci, best_c)
        best_s = np.where(better, smid, best_s)
    return best_v, best_c, best_s


def _f_batch(curve, weight, s, pts):
    g = curve.point(s)
    mu = np.asarray(weight.mu(s), dtype=float)
    return ((pts - g) ** 2).sum(axis=1) / mu**2


def grad_g_check(pairs, p, h=1e-6, tie_rel=1e-9, samples=2048):
    """Finite-difference gradient of G at p, compared with the radial law.

    Returns (cos_angle_gap, magnitude, lower_bound) where cos_angle_gap is
    the angle (radians) between grad G and the unit vector from the foot to
    p, and lower_bound = 2 |p - q| / mu(q)^2. Raises NonUniqueFootError on
    tied feet.
    """
    pairs = _as_pairs(pairs)
    p = np.asarray(p, dtype=float)
    cp = mu_closest_point(pairs, p, samples=samples, tie_rel=tie_rel)
    if not cp.unique:
        raise NonUniqueFootError(f"tied weighted-closest feet at {cp.ties}")
    curve, weight = pairs[cp.component]
    q = curve.point(cp.s)
    n = p.size
    shifts = np.zeros((2 * n, n))
    for i in range(n):
        shifts[2 * i, i] = h
        shifts[2 * i + 1, i] = -h
    vals, _, _ = g_potential(pairs, p[None, :] + shifts, samples=samples)
    grad = (vals[0::2] - vals[1::2]) / (2.0 * h)
    mag = float(np.linalg.norm(grad))
    u = p - q
    dist = float(np.linalg.norm(u))
    if dist <= 0 or mag <= 0:
        return np.pi, mag, 0.0
    u = u / dist
    cosang = float(np.clip(grad @ u / mag, -1.0, 1.0))
    angle = float(np.arccos(cosang))
    bound = 2.0 * dist / float(weight.mu(cp.s)) ** 2
    return angle, mag, bound


# ---------------------------------------------------------------------------
# Normal frames
# ---------------------------------------------------------------------------


def normal_frame(curve, s, reference=None):
    """Orthonormal basis of the normal space at s.

    Gram-Schmidt of either the ambient standard basis (deterministic pivot
    order, residuals below 0.5 are skipped) or a caller-supplied reference
    frame, the latter giving a frame that varies smoothly with s nearby.
    """
    t = curve.tangent(s)
    n = t.size
    seeds = np.eye(n) if reference is None else np.asarray(reference, dtype=float)
    frame = []
    for row in seeds:
        w = row - (row @ t) * t
        for b in frame:
            w = w - (w @ b) * b
        norm = np.linalg.norm(w)
        if norm > 0.5 if reference is None else norm > 1e-8:
            frame.append(w / norm)
        if len(frame) == n - 1:
            break
    if len(frame) < n - 1:
        # Fall back to unconditional pivoting over all seeds.
        frame = []
        for row in np.eye(n):
            w = row - (row @ t) * t
            for b in frame:
                w = w - (w @ b) * b
            norm = np.linalg.norm(w)
            if norm > 1e-10:
                frame.append(w / norm)
            if len(frame) == n - 1:
                break
    return np.array(frame)


def random_unit_normals(curve, s_values, rng):
    """One random unit normal per foot (seeded Gaussian, projected)."""
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    tans = curve.tangent(s_values)
    raw = rng.standard_normal(tans.shape)
    raw = raw - (np.sum(raw * tans, axis=-1, keepdims=True)) * tans
    norms = np.linalg.norm(raw, axis=-1, keepdims=True)
    low = norms[:, 0] < 1e-12
    if np.any(low):
        frame0 = np.array([normal_frame(curve, s)[0] for s in s_values[low]])
        raw[low] = frame0
        norms = np.linalg.norm(raw, axis=-1, keepdims=True)
    return raw / norms
