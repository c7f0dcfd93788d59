#!/usr/bin/env python3
"""Build a solution, verify it, classify it back, and look at the y-side oracle."""

from feq import build_context, classify, construct, enumerate_characters, make_carrier, solve_y_side, verify
from feq.scalar import exact


def main():
    c6 = make_carrier("C6")
    chars = enumerate_characters(c6)
    ctx = build_context("E2", c6, {"mu1": chars[1], "mu2": chars[5], "chi": chars[2]})
    tup = construct(ctx, 3, {"a": exact(2), "b": exact(1), "c": exact(0)})
    rep = verify(ctx, tup)
    print(f"verify: {rep.verdict} on {rep.pairs_checked} pairs")
    res = classify(ctx, tup)
    print(f"classified as {res.key} with", {k: str(v) for k, v in res.params.items()})
    x_side = {s: tup[s] for s in ("f",) + tuple(ctx.x_side_slots())}
    space = solve_y_side(ctx, x_side)
    print(f"y-side solutions: particular + {space.dimension}-dimensional homogeneous part")
    print("recovered y side matches:", space.contains({s: tup[s] for s in space.slots}))


if __name__ == "__main__":
    main()
