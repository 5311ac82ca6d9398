"""Where the weighted normal map degenerates.

The singular set inside the almost-injective range is a graph over the
curve: feet where mu'' + kappa^2 mu / 4 = 0 (with positive curvature),
lifted to the height ((mu')^2 - mu mu'')^{-1/2} along the principal
normal. Two extremes: the half-circle scene is singular along a whole
height-2 curve (a collapse arc), while the quadratic-weight arc of
example4 has exactly one degenerate point and no arc at all. The
transversality diagnostic separates the two situations.
"""

from weighted_tubes import (
    detect_collapse_arcs,
    is_singular,
    jacobian_determinant,
    load_scene,
    radii_report,
    singular_set,
    transversality_check,
)

for name in ("example1a", "example4", "circle_mu1"):
    scene = load_scene(name)
    rep = radii_report(scene.pairs, scene.tolerances)
    points = singular_set(scene.pairs, rep.ur, scene.tolerances)
    arcs = detect_collapse_arcs(scene.pairs, rep.ur, scene.tolerances)
    ok, witnesses = transversality_check(scene.pairs, scene.tolerances)
    print(f"{name}: {len(points)} singular point(s), {len(arcs)} collapse arc(s), "
          f"condition transversal: {ok}")
    if points and len(points) <= 3:
        for p in points:
            print(f"  s = {p.s: .6f}, height {p.R:.6f}, image ({p.location[0]:.4f}, {p.location[1]:.4f})")
    elif points:
        heights = {round(p.R, 9) for p in points}
        print(f"  a continuum: {len(points)} sampled feet, heights {sorted(heights)}")
    print()

print("cross-checking the two singularity tests on the half circle:")
scene = load_scene("example1a")
curve, weight = scene.pairs[0]
for s, R in ((0.3, 1.0), (0.3, 2.0), (0.3, 2.5)):
    v = -curve.point(s)
    flag, hess = is_singular(curve, weight, s, v, R)
    det = jacobian_determinant(curve, weight, s, v, R)
    print(f"  s={s}, R={R}: second-derivative {hess: .3e} -> singular={flag}; "
          f"finite-difference det {det: .3e}")
print("both tests flag exactly the height-2 offsets.")
