#!/usr/bin/env python3
"""Independent cross-check of the estimate pipeline.

Reimplements the order formulas and the five candidate terms from scratch
(pure stdlib) and compares them against the CLI's JSON output on randomized
queries. Exponent samples stay away from the p = 2 walls and from lambda
ties, where branch selection is a measure-zero boundary.

usage: crosscheck_estimates.py <path-to-widthlab-binary> [count] [seed]
"""

import json
import math
import random
import subprocess
import sys


def lam(p, q):
    if q == 2:
        return 1.0
    return min((1.0 / p - 1.0 / q) / (0.5 - 1.0 / q), 1.0)


def ball_order(m, k, n, p, th, q, s):
    """Value of the displayed piecewise order formula, constants suppressed."""
    t_flat = m ** (2.0 / q) * k ** (2.0 / s)
    xinv = 1.0 if n == 0 else m ** (1.0 / q) * k ** (1.0 / s) / math.sqrt(n)
    if max(p, th) <= 2:
        return min(1.0, xinv) if n > 0 else 1.0
    lp, lt = lam(p, q), lam(th, s)
    if p >= 2 and lp <= lt:
        if n <= t_flat:
            return 1.0
        if n <= m * k ** (2.0 / s):
            return xinv ** lp
        return m ** (1.0 / q - 1.0 / p) * (math.sqrt(m) * k ** (1.0 / s) / math.sqrt(n)) ** lt
    if n <= t_flat:
        return 1.0
    if n <= k * m ** (2.0 / q):
        return xinv ** lt
    return k ** (1.0 / s - 1.0 / th) * (math.sqrt(k) * m ** (1.0 / q) / math.sqrt(n)) ** lp


def half_interp(a, b):
    if abs(a - b) < 1e-14:
        return 0.0 if abs(a - 2.0) < 1e-14 else None
    t = (1.0 / a - 0.5) / (1.0 / a - 1.0 / b)
    return t if -1e-12 <= t <= 1 + 1e-12 else None


def interp(a, b, t):
    return 1.0 / ((1.0 - t) / a + t / b)


def phi5_lambda_scan(p1, t1, p2, t2, q, s, grid=200001):
    """Smallest feasible root by brute scan; None when no sign change."""
    best = None
    prev = None
    for i in range(grid):
        lam_ = i / (grid - 1)
        p = interp(p1, p2, lam_)
        th = interp(t1, t2, lam_)
        if not (2 - 1e-9 <= p <= q + 1e-9 and 2 - 1e-9 <= th <= s + 1e-9):
            prev = None
            continue
        g = lam(max(2.0, min(p, q)), q) - lam(max(2.0, min(th, s)), s)
        if abs(g) < 1e-13:
            return lam_
        if prev is not None and prev[1] * g < 0:
            # linear interpolation of the sign change
            l0, g0 = prev
            return l0 + (lam_ - l0) * g0 / (g0 - g)
        prev = (lam_, g)
    return best


def phi_values(m, k, n, q, s, balls):
    (nu1, p1, t1), (nu2, p2, t2) = balls
    phis = [nu1 * ball_order(m, k, n, p1, t1, q, s), nu2 * ball_order(m, k, n, p2, t2, q, s)]
    lt = half_interp(p1, p2)
    if lt is None:
        phis.append(math.inf)
    else:
        th = interp(t1, t2, lt)
        phis.append(nu1 ** (1 - lt) * nu2 ** lt * ball_order(m, k, n, 2.0, th, q, s))
    mt = half_interp(t1, t2)
    if mt is None:
        phis.append(math.inf)
    else:
        p = interp(p1, p2, mt)
        phis.append(nu1 ** (1 - mt) * nu2 ** mt * ball_order(m, k, n, p, 2.0, q, s))
    l5 = phi5_lambda_scan(p1, t1, p2, t2, q, s)
    if l5 is None:
        phis.append(math.inf)
    else:
        p = interp(p1, p2, l5)
        th = interp(t1, t2, l5)
        phis.append(nu1 ** (1 - l5) * nu2 ** l5 * ball_order(m, k, n, p, th, q, s))
    return phis


def sample_query(rng):
    m = rng.randint(4, 20)
    k = rng.randint(4, 20)
    q = rng.uniform(2.3, 6.0)
    s = rng.uniform(2.3, 6.0)

    def expo(hi):
        # strictly off the p = 2 wall on either side
        return rng.uniform(1.0, 1.9) if rng.random() < 0.5 else rng.uniform(2.1, hi)

    balls = [(math.exp(rng.uniform(-1.2, 1.2)), expo(q), expo(s)) for _ in range(2)]
    n = rng.randint(0, (m * k) // 2)
    return m, k, n, q, s, balls


def main():
    binary = sys.argv[1]
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 150
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 2027
    rng = random.Random(seed)
    checked = 0
    mismatches = 0
    while checked < count:
        m, k, n, q, s, balls = sample_query(rng)
        want = phi_values(m, k, n, q, s, balls)
        cmd = [binary, "estimate", "-m", str(m), "-k", str(k), "-n", str(n), "-q", repr(q),
               "-s", repr(s), "--json"]
        for nu, p, th in balls:
            cmd += ["--ball", f"{nu!r},{p!r},{th!r}"]
        out = subprocess.run(cmd, capture_output=True, text=True)
        if out.returncode != 0:
            print("UNEXPECTED EXIT", out.returncode, cmd, out.stderr)
            mismatches += 1
            checked += 1
            continue
        got = json.loads(out.stdout)
        got_phi = [math.inf if v == "inf" else float(v) for v in got["phi"]]
        ok = True
        for a, b in zip(want, got_phi):
            if math.isinf(a) != math.isinf(b):
                ok = False
            elif not math.isinf(a) and abs(a - b) > 1e-9 * max(abs(a), abs(b), 1e-30):
                ok = False
        # argmin agreement whenever the oracle sees a clear gap
        finite = sorted(v for v in want if not math.isinf(v))
        if ok and len(finite) >= 2 and finite[1] - finite[0] > 1e-9 * finite[1]:
            arg = 1 + want.index(min(want))
            if arg != got["argmin_j"]:
                ok = False
        if not ok:
            mismatches += 1
            print("MISMATCH", (m, k, n, q, s, balls))
            print("  oracle:", want)
            print("  binary:", got_phi, "argmin", got["argmin_j"])
        checked += 1
    print(f"crosscheck: {checked} queries, {mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
