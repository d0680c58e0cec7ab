#!/usr/bin/env python3
"""Empirical probe: fraction of seeded counterexample-component builds whose
enumerated simple closed curves all stay safely hyperbolic at a given depth.

This reports statistics only; no threshold is asserted. The corresponding
full-measure statement is not decidable by sampling.
"""
from __future__ import annotations

import argparse
import time

from psltilde.audit import audit_rep
from psltilde.constructors import BuildRequest, build_rep
from psltilde.curves import enumerate_scc
from psltilde.sampling import derive_seed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=0)
    ap.add_argument("--punctures", type=int, default=4)
    ap.add_argument("--euler", type=int, default=1)
    ap.add_argument("--signs", default="+,+,+,-")
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--margin", type=float, default=1e-6)
    ap.add_argument("--seed", type=int, default=20260808)
    args = ap.parse_args()

    signs = tuple(1 if t.strip() in ("+", "+1", "1") else -1
                  for t in args.signs.split(","))
    req = BuildRequest(args.genus, args.punctures, args.euler, signs, args.seed)
    curves = enumerate_scc(req.surface(), args.depth)
    print(f"surface ({args.genus},{args.punctures}), euler {args.euler}, "
          f"signs {args.signs}; depth {args.depth}: {len(curves)} curves")

    passes = 0
    min_margin = float("inf")
    t0 = time.time()
    for i in range(args.count):
        child = BuildRequest(req.genus, req.punctures, req.euler, req.signs,
                             derive_seed(args.seed, i + 1))
        rep = build_rep(child)
        report = audit_rep(rep, args.depth, args.margin, curves=curves)
        min_margin = min(min_margin, report.min_trace_margin)
        if not report.violations:
            passes += 1
        if (i + 1) % 100 == 0:
            print(f"  {i + 1}/{args.count}: pass fraction "
                  f"{passes / (i + 1):.4f} ({time.time() - t0:.1f} s)")
    print(f"passes: {passes}/{args.count} "
          f"(fraction {passes / args.count:.4f}), "
          f"smallest |trace|-2 margin seen: {min_margin:.3e}")


if __name__ == "__main__":
    main()
