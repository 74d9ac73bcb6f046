#!/usr/bin/env python3
"""Benchmark the compiled term kernel against the pure-Python fallback.

Two views:
  * kernel microbenchmarks, both backends in one process (they are separate
    modules, so terms are mirrored into each);
  * an end-to-end goal evaluation, one subprocess per backend, selected with
    CHAINFORM_PURE.

Run:  python3 benchmarks/bench_backends.py
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time

from chainform import _termcore_py

try:
    from chainform import _termcore as _compiled
except ImportError:
    _compiled = None


def build(mod, spec, varmap):
    kind = spec[0]
    if kind == "var":
        if spec[1] not in varmap:
            varmap[spec[1]] = mod.Variable("V%d" % spec[1])
        return varmap[spec[1]]
    if kind == "const":
        return mod.Constant(spec[1])
    return mod.Compound(spec[1], tuple(build(mod, s, varmap) for s in spec[2]))


def random_spec(rng, depth=4):
    roll = rng.random()
    if roll < 0.25:
        return ("var", rng.randrange(4))
    if depth == 0 or roll < 0.5:
        return ("const", rng.choice(["a", "b", 0, 1]))
    name, arity = rng.choice([("f", 1), ("g", 2), ("h", 3)])
    return ("cmp", name, [random_spec(rng, depth - 1) for _ in range(arity)])


def make_workload(mod, n=600, seed=13):
    rng = random.Random(seed)
    pairs = []
    for _ in range(n):
        varmap = {}
        a = build(mod, random_spec(rng), varmap)
        b = build(mod, random_spec(rng), varmap)
        pairs.append((a, b))
    return pairs


def time_op(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_bench():
    backends = [("python", _termcore_py)]
    if _compiled is not None:
        backends.insert(0, ("compiled", _compiled))
    results = {}
    for name, mod in backends:
        pairs = make_workload(mod)
        substs = [s for s in (mod.unify(a, b) for a, b in pairs) if s is not None]
        terms = [a for a, _ in pairs]

        def run_unify():
            for a, b in pairs:
                mod.unify(a, b)

        def run_match():
            for a, b in pairs:
                mod.match(a, b)

        def run_apply():
            for s in substs:
                for a, _ in pairs[:100]:
                    s.apply(a)

        def run_rename():
            for t in terms:
                mod.rename_apart(t)

        results[name] = {
            "unify": time_op(run_unify),
            "match": time_op(run_match),
            "apply": time_op(run_apply),
            "rename": time_op(run_rename),
        }
    print("kernel microbenchmarks (seconds per pass, lower is better)")
    ops = ("unify", "match", "apply", "rename")
    header = "%-10s" + " %10s" * len(ops)
    print(header % ("backend", *ops))
    for name, row in results.items():
        print(("%-10s" + " %10.4f" * len(ops)) % (name, *(row[o] for o in ops)))
    if len(results) == 2:
        print(
            "speedup:  "
            + "  ".join(
                "%s %.1fx" % (o, results["python"][o] / results["compiled"][o])
                for o in ops
            )
        )
    print()


SOLVE_SNIPPET = r"""
import time
from chainform import BACKEND
from chainform.chainir import compile_to_registry
from chainform.engines import eval_abcde
from chainform.fixtures import load_fixture
from chainform.syntax import parse_goal
from chainform.transform import compile_goal, transform_moded

program = load_fixture("split")
chain = transform_moded(program)
registry = compile_to_registry(chain)
plan = compile_goal(parse_goal("s([%s],Y,Z)" % ",".join("e%d" % i for i in range(60))), chain, "moded")
t0 = time.perf_counter()
for _ in range(3):
    answers = eval_abcde(plan.initial, plan.continuations, registry, "match")
dt = (time.perf_counter() - t0) / 3
print("%s %.4f %d" % (BACKEND, dt, len(answers)))
"""


def engine_bench():
    print("end-to-end: split a 60-element list, eval_abcde, 3 runs")
    rows = []
    for pure in ("", "1"):
        env = dict(os.environ, CHAINFORM_PURE=pure)
        out = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        ).stdout.split()
        rows.append((out[0], float(out[1]), int(out[2])))
    for backend, dt, n in rows:
        print("%-10s %8.4f s   (%d answers)" % (backend, dt, n))
    if rows[0][0] != rows[1][0]:
        print("speedup: %.1fx" % (rows[1][1] / rows[0][1]))


if __name__ == "__main__":
    kernel_bench()
    engine_bench()
