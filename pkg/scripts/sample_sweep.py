#!/usr/bin/env python3
"""Timing sweep: validate every bundled omega-generator at a range of
sample counts and report wall time per derivation.

Usage: python scripts/sample_sweep.py [samples ...]   (default: 4 8 16 32)
"""

from __future__ import annotations

import sys
import time

from omegatruth.kernel import GAMMA, SIGMA, check
from omegatruth.syntax import Eq, Succ, ZERO
from omegatruth.tactics import refl
from omegatruth.theorems import (
    formalized_loeb, m1, m2, m3, mcgee_original, mcgee_via_loeb,
    tomega_provability,
)


def main() -> int:
    counts = [int(a) for a in sys.argv[1:]] or [4, 8, 16, 32]
    zero = Eq(ZERO, ZERO)
    z01 = Eq(ZERO, Succ(ZERO))
    rows = []
    for n in counts:
        g = GAMMA.with_samples(n)
        s = SIGMA.with_samples(n)
        jobs = {
            "mcgee": lambda: mcgee_original(g).positive,
            "mcgee-via-loeb": lambda: mcgee_via_loeb(g).positive,
            "m1": lambda: m1(check(refl(ZERO).proof, s)),
            "m2": lambda: m2(z01, zero, s),
            "m3": lambda: m3(zero, s),
            "formalized-loeb": lambda: formalized_loeb(tomega_provability(), z01, s),
        }
        for name, job in jobs.items():
            t0 = time.perf_counter()
            cert = job()
            dt = time.perf_counter() - t0
            rows.append((name, n, dt, cert.samples_checked, cert.proof_size))
    print(f"{'derivation':<16} {'samples':>7} {'seconds':>8} {'checked':>8} {'size':>8}")
    for name, n, dt, checked, size in rows:
        print(f"{name:<16} {n:>7} {dt:>8.2f} {checked:>8} {size:>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
