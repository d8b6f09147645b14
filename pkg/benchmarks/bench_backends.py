#!/usr/bin/env python3
"""Benchmark the compiled assembly kernel against the pure-Python fallback.

Lattice construction is dominated by the pairwise assembly loop, which is
what the compiled kernel accelerates; classification throughput is also
reported for context (it runs on plain int bitsets and is identical across
backends). Run from a checkout with the package installed:

    python benchmarks/bench_backends.py --objects 60 --attributes 30
"""

import argparse
import random
import statistics
import time

from latticecell import (DocumentVector, backend, build_lattice,
                         classify, compile_model)
from latticecell.context import FormalContext


def random_context(rnd, n_obj, n_attr, density):
    rows = []
    for _ in range(n_obj):
        row = 0
        for a in range(n_attr):
            if rnd.random() < density:
                row |= 1 << a
        rows.append(row)
    return FormalContext(tuple(f"o{i}" for i in range(n_obj)),
                         tuple(f"a{j}" for j in range(n_attr)),
                         tuple(rows))


def time_call(fn, repeat):
    samples = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.mean(samples), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--objects", type=int, default=60)
    parser.add_argument("--attributes", type=int, default=30)
    parser.add_argument("--density", type=float, default=0.25)
    parser.add_argument("--queries", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rnd = random.Random(args.seed)
    ctx = random_context(rnd, args.objects, args.attributes, args.density)
    queries = [DocumentVector(rnd.getrandbits(args.attributes), args.attributes)
               for _ in range(args.queries)]
    labels = {oid: rnd.choice("ABC") for oid in ctx.object_ids}

    available = backend.available_backends()
    print(f"context: {args.objects} objects x {args.attributes} attributes, "
          f"density {args.density}")
    print(f"backends: {', '.join(available)}\n")

    results = {}
    lattice = None
    for name in available:
        backend.set_backend(name)
        best, mean, lattice = time_call(lambda: build_lattice(ctx), args.repeat)
        results[name] = best
        print(f"[{name:>8}] build: best {best * 1e3:9.2f} ms "
              f"(mean {mean * 1e3:9.2f} ms), {len(lattice.concepts)} concepts")

    model = compile_model(lattice, labels, ("A", "B", "C"))
    t0 = time.perf_counter()
    for q in queries:
        classify(model, q, "inner", "max")
    classify_s = time.perf_counter() - t0
    print(f"\nclassify (backend-independent): "
          f"{classify_s / len(queries) * 1e6:8.2f} us/doc over "
          f"{model.engine_template.n_rules} rules")

    if len(results) == 2:
        print(f"build speedup (pure/compiled): "
              f"x{results['pure'] / results['compiled']:.2f}")


if __name__ == "__main__":
    main()
