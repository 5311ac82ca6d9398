"""Radii reports for the bundled scenes.

Three radii govern a weighted tube: below dir the normal map is a
diffeomorphism, below tir a homeomorphism, and below air a homeomorphism
off a thin singular set. Constant weights collapse all three to the
classic min(focal radius, half the double-critical self distance); the
bundled scenes showcase every way the three can split apart.
"""

from weighted_tubes import load_scene, radii_report

for name in ("circle_mu1", "ellipse_mu1", "example1a", "example4", "example2_stadium"):
    scene = load_scene(name)
    rep = radii_report(scene.pairs, scene.tolerances)
    print(f"{name}:")
    print(f"  focal radii      {rep.focrad0:.6f} (closed band) / {rep.focradminus:.6f} (open band)")
    dc = "none found" if rep.dcsd_half == float("inf") else f"{rep.dcsd_half:.6f}"
    print(f"  half dcsd        {dc}")
    print(f"  dir / tir / air  {rep.dir:.6f} / {rep.tir:.6f} / {rep.air:.6f}")
    arcs = rep.witnesses["collapse_arcs"]
    if arcs:
        arc = arcs[0]
        print(
            f"  collapse arc     [{arc.s_start:.4f}, {arc.s_end:.4f}]"
            f" at height {arc.r:.6f} onto ({arc.p0[0]:.4f}, {arc.p0[1]:.4f})"
        )
    print()

print("readings:")
print("  circle_mu1:       uniform tube, all radii agree at 1.")
print("  ellipse_mu1:      focal radius at the pointy vertices wins over the waist pair.")
print("  example1a:        dir = tir = 2 from the collapse, air = 2 sqrt 2 beyond it.")
print("  example4:         a lone degenerate point: dir = 2 but tir = air = 4.")
print("  example2_stadium: a closed curve where dir = tir = 2 while air stays near 4.")
