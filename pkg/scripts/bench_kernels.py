#!/usr/bin/env python3
"""Benchmark the compiled term-arithmetic kernel against the pure-Python
fallback on the workloads that dominate certification runs.

Run from the repository root:

    python scripts/bench_kernels.py

The pure backend is timed in a subprocess with POLYAUTO_PURE=1 so that both
backends are measured under identical import-time selection.
"""

import json
import os
import subprocess
import sys
import time

WORKLOAD = r"""
import json, random, time
from fractions import Fraction
from polyauto import kernels
from polyauto.fields import Field
from polyauto.poly import Polynomial
from polyauto.autos import FactoredAuto, Triangular, compose
from polyauto.slin import SlinContext, slin_from_monomial_elementary
from polyauto.certificates import verify_certificate

def dense_poly(field, n, deg, seed):
    rng = random.Random(seed)
    p = Polynomial.zero(field, n)
    for _ in range(40):
        exps = tuple(rng.randint(0, deg) for _ in range(n))
        c = rng.randrange(1, field.order) if field.order else \
            Fraction(rng.randint(1, 9), rng.randint(1, 4))
        p = p + Polynomial.monomial(field, n, field.elem(c), exps)
    return p

out = {"backend": kernels.BACKEND}

# raw sparse products
for tag, field in (("F5", Field.prime(5)), ("Q", Field.rationals()),
                   ("F9", Field.of_order(9))):
    a = dense_poly(field, 3, 6, 1)
    b = dense_poly(field, 3, 6, 2)
    t0 = time.perf_counter()
    for _ in range(60):
        _ = a * b
    out[f"mul-{tag}"] = time.perf_counter() - t0

# composition chains of triangular maps over Q (the certification hot path)
field = Field.rationals()
rng = random.Random(3)

def tri_poly(upto, deg, seed):
    rng2 = random.Random(seed)
    p = Polynomial.zero(field, 3)
    for _ in range(8):
        exps = [0, 0, 0]
        for j in range(upto):
            exps[j] = rng2.randint(0, deg)
        p = p + Polynomial.monomial(
            field, 3, Fraction(rng2.randint(1, 5), rng2.randint(1, 3)),
            tuple(exps))
    return p

taus = []
for s in range(5):
    polys = (Polynomial.zero(field, 3), tri_poly(1, 3, 20 + s),
             tri_poly(2, 3, 40 + s))
    taus.append(Triangular(field, 3, (field.one,) * 3, polys).expand())
t0 = time.perf_counter()
acc = taus[0]
for t in taus[1:]:
    acc = compose(acc, t, cap=1 << 20)
out["compose-Q"] = time.perf_counter() - t0

# finite-field membership certificates
t0 = time.perf_counter()
ctx = SlinContext(Field.of_order(9), 3)
for exps in ((0, 3, 2), (0, 5, 1), (0, 2, 4), (0, 6, 0)):
    cert = slin_from_monomial_elementary(ctx, 1, ctx.field.generator(), exps)
    assert verify_certificate(cert).verdict == "PASS"
out["slin-F9"] = time.perf_counter() - t0

print(json.dumps(out))
"""


def run(pure: bool) -> dict:
    env = dict(os.environ)
    if pure:
        env["POLYAUTO_PURE"] = "1"
    else:
        env.pop("POLYAUTO_PURE", None)
    proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    compiled = run(pure=False)
    pure = run(pure=True)
    print(f"{'workload':14} {'pure (s)':>10} {compiled['backend']+' (s)':>12} "
          f"{'speedup':>8}")
    for key in sorted(pure):
        if key == "backend":
            continue
        ratio = pure[key] / compiled[key] if compiled[key] else float("inf")
        print(f"{key:14} {pure[key]:10.4f} {compiled[key]:12.4f} "
              f"{ratio:7.2f}x")
    if compiled["backend"] == "python":
        print("note: compiled kernel unavailable; both runs used the "
              "pure backend")


if __name__ == "__main__":
    main()
