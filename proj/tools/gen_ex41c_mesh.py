#!/usr/bin/env python3
"""Write the nonuniform triangular fixture used by case ex41c.

Domain (-pi, pi)^2 with graded grid lines, jittered interior vertices and
randomly chosen quad diagonals. The right side x1 = pi is ROBIN, the other
three sides are DIRICHLET. With 20 x 21 cells this leaves 400 free DOFs.

Usage: gen_ex41c_mesh.py [output] [--seed S]
"""

import argparse
import math
import random

NX, NY = 20, 21


def graded(count, strength):
    # t + s sin(pi t) (t - 1) is increasing on [0, 1] for |s| < 1/pi
    pts = [-math.pi + 2.0 * math.pi * (t + strength * math.sin(math.pi * t) * (t - 1.0))
           for t in (i / count for i in range(count + 1))]
    assert all(a < b for a, b in zip(pts, pts[1:]))
    return pts


def build(seed):
    rng = random.Random(seed)
    xs = graded(NX, 0.25)
    ys = graded(NY, -0.2)
    verts = []
    for j in range(NY + 1):
        for i in range(NX + 1):
            x, y = xs[i], ys[j]
            if 0 < i < NX and 0 < j < NY:
                hx = min(xs[i] - xs[i - 1], xs[i + 1] - xs[i])
                hy = min(ys[j] - ys[j - 1], ys[j + 1] - ys[j])
                x += rng.uniform(-0.2, 0.2) * hx
                y += rng.uniform(-0.2, 0.2) * hy
            verts.append((x, y))

    def vid(i, j):
        return j * (NX + 1) + i

    tris, bnd = [], []
    for j in range(NY):
        for i in range(NX):
            v0, v1, v2, v3 = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            # local edges of each triangle run k -> k+1; remember which cell side each covers
            if rng.random() < 0.5:
                cell = [(v0, v1, v2), (v0, v2, v3)]
                sides = {"bottom": (0, 0), "right": (0, 1), "top": (1, 1), "left": (1, 2)}
            else:
                cell = [(v0, v1, v3), (v1, v2, v3)]
                sides = {"bottom": (0, 0), "right": (1, 0), "top": (1, 1), "left": (0, 2)}
            base = len(tris)
            tris.extend(cell)
            on = {"bottom": j == 0, "top": j == NY - 1, "left": i == 0, "right": i == NX - 1}
            for side, hit in on.items():
                if hit:
                    t, local = sides[side]
                    bnd.append((base + t, local, "ROBIN" if side == "right" else "DIRICHLET"))
    return verts, tris, bnd


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("output", nargs="?", default="data/ex41c.mesh")
    ap.add_argument("--seed", type=int, default=41)
    args = ap.parse_args()
    verts, tris, bnd = build(args.seed)
    with open(args.output, "w") as f:
        f.write(f"# ex41c fixture: {NX}x{NY} cells, graded and jittered, seed {args.seed}\n")
        f.write("meshfmt 1 2\n")
        for x, y in verts:
            f.write(f"v {x!r} {y!r}\n")
        for a, b, c in tris:
            f.write(f"e tri {a} {b} {c}\n")
        for e, local, tag in bnd:
            f.write(f"b {e} {local} {tag}\n")


if __name__ == "__main__":
    main()
