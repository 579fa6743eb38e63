#!/usr/bin/env python3
# Exact adaptive-proportion cutoff: smallest c with
# P[Binomial(W-1, 2^-H) >= c-1] < 2^-20. H = 1 uses rational arithmetic;
# other H values use mpmath at 60 significant digits.
from fractions import Fraction
from math import comb

import mpmath


def first_below(tails, alpha):
    for c in range(1, len(tails) + 1):
        if tails[c - 1] < alpha:
            return c
    raise RuntimeError("no cutoff")


def cutoff_exact_half(w):
    n = w - 1
    total = 0
    tails = [0] * (n + 2)
    for k in range(n, -1, -1):
        total += comb(n, k)
        tails[k] = Fraction(total, 1 << n)
    return first_below(tails, Fraction(1, 1 << 20))


def cutoff_mp(w, h):
    mpmath.mp.dps = 60
    n = w - 1
    p = mpmath.mpf(2) ** (-mpmath.mpf(h))
    tails = [mpmath.mpf(0)] * (n + 2)
    total = mpmath.mpf(0)
    for k in range(n, -1, -1):
        total += comb(n, k) * p ** k * (1 - p) ** (n - k)
        tails[k] = total
    return first_below(tails, mpmath.mpf(2) ** -20)


def check_cli(extru):
    """Compare the library's cutoffs (via `extru rngtest`) with this oracle."""
    import json
    import subprocess

    failures = 0
    for h in (1.0, 0.5, 0.8, 0.25):
        out = subprocess.run([extru, "rngtest", "--source", "seeded", "--samples", "8", "--entropy", str(h)],
                             capture_output=True, text=True).stdout
        got = json.loads(out.splitlines()[0])["apt_cutoff"]
        want = cutoff_exact_half(1024) if h == 1.0 else cutoff_mp(1024, h)
        status = "ok" if got == want else "MISMATCH"
        failures += got != want
        print("H=%s oracle %d library %d %s" % (h, want, got, status))
    return failures


if __name__ == "__main__":
    import sys

    if len(sys.argv) > 1:
        sys.exit(1 if check_cli(sys.argv[1]) else 0)
    print("H=1.0 W=1024", cutoff_exact_half(1024), cutoff_mp(1024, 1.0))
    for h in (0.5, 0.8, 0.25):
        print("H=%s W=1024" % h, cutoff_mp(1024, h))
