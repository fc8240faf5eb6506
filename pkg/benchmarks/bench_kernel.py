"""Compare the compiled reduction kernel against the pure-Python fallback.

Both implementations are imported side by side and run on the same workloads:
Church-numeral arithmetic (substitution under binders), duplicating redexes
(exponential term growth), spine flattening, and eta contraction of large
normal forms.  A final pair of rows times a full corpus file end to end in a
subprocess, once per backend, since the prover picks its kernel at import.

Usage: python benchmarks/bench_kernel.py [--repeat N] [--skip-e2e]
"""

import argparse
import os
import subprocess
import sys
import tempfile
import time

from nablacheck import _kernel_py
from nablacheck.nodes import App, Bound, Const, Lam
from nablacheck.terms import struct_eq

try:
    from nablacheck import _kernel_c
except ImportError:
    _kernel_c = None


def church(n):
    """λf.λx. f (f ... (f x))"""
    body = Bound(0)
    for _ in range(n):
        body = App(Bound(1), (body,))
    return Lam(Lam(body, "x"), "f")


MULT = Lam(Lam(Lam(App(Bound(2), (App(Bound(1), (Bound(0),)),)), "f"), "n"), "m")
DUP = Lam(App(Const("f"), (Bound(0), Bound(0))), "x")


def church_mult(i, j):
    return App(MULT, (church(i), church(j)))


def dup_tower(depth):
    """depth nested copies of (λx. f x x) applied to a constant; its normal
    form is a binary tree with 2^depth leaves."""
    t = Const("a")
    for _ in range(depth):
        t = App(DUP, (t,))
    return t


def deep_spine(n):
    """(λx.x) buried under n unary applications, forcing a long rigid spine."""
    t = App(Lam(Bound(0), "x"), (Const("a"),))
    for _ in range(n):
        t = App(Const("f"), (t,))
    return t


WORKLOADS = [
    ("church 12*12", lambda k: k.normalize(church_mult(12, 12), 10**7)),
    ("church 20*20", lambda k: k.normalize(church_mult(20, 20), 10**7)),
    ("dup tower 2^14", lambda k: k.normalize(dup_tower(14), 10**7)),
    ("deep spine 4k", lambda k: k.normalize(deep_spine(4000), 10**7)),
    ("eta on 2^14 tree", lambda k: k.eta_contract(k.normalize(dup_tower(14), 10**7))),
]


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def run_cli_once(cli_args, env_extra):
    env = dict(os.environ, **env_extra)
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "nablacheck.cli", *cli_args],
        capture_output=True,
        env=env,
    )
    dt = time.perf_counter() - t0
    if proc.returncode != 0:
        raise RuntimeError(proc.stdout.decode() + proc.stderr.decode())
    return dt


def e2e_rows(tmpdir):
    """(label, cli args) pairs: a search-bound corpus file and a
    reduction-bound query over deep numerals."""
    corpus = os.path.join(
        os.path.dirname(_kernel_py.__file__), "corpus", "ccs_sim.def"
    )
    fib_def = os.path.join(tmpdir, "fib.def")
    with open(fib_def, "w") as f:
        f.write("fib z.\nfib (s z).\nfib (s (s N)) := fib (s N) /\\ fib N.\n")
        f.write("#table inductive fib.\n")
    numeral = "z"
    for _ in range(400):
        numeral = f"(s {numeral})"
    return [
        ("ccs corpus end-to-end", [corpus]),
        ("fib 400 end-to-end", [fib_def, "--query", f"fib {numeral}"]),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="runs per cell, best kept")
    ap.add_argument("--skip-e2e", action="store_true", help="kernel rows only")
    args = ap.parse_args(argv)
    # the kernels recurse on term structure, and the spine workload is deep
    sys.setrecursionlimit(50000)

    if _kernel_c is None:
        print("compiled kernel not built; showing pure-Python times only")
        for name, fn in WORKLOADS:
            dt, _ = best_of(lambda: fn(_kernel_py), args.repeat)
            print(f"  {name:<22} {dt * 1000:9.1f} ms")
        return 0

    print(f"{'workload':<22} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for name, fn in WORKLOADS:
        tp, rp = best_of(lambda: fn(_kernel_py), args.repeat)
        tc, rc = best_of(lambda: fn(_kernel_c), args.repeat)
        assert struct_eq(rp, rc), f"backends disagree on {name}"
        print(
            f"{name:<22} {tp * 1000:8.1f}ms {tc * 1000:8.1f}ms "
            f"{tp / tc:8.1f}x"
        )

    if not args.skip_e2e:
        with tempfile.TemporaryDirectory() as tmpdir:
            for label, cli_args in e2e_rows(tmpdir):
                tp, _ = best_of(
                    lambda: run_cli_once(cli_args, {"NABLA_CHECK_PURE": "1"}),
                    args.repeat,
                )
                tc, _ = best_of(
                    lambda: run_cli_once(cli_args, {"NABLA_CHECK_PURE": ""}),
                    args.repeat,
                )
                print(
                    f"{label:<22} {tp * 1000:8.1f}ms {tc * 1000:8.1f}ms "
                    f"{tp / tc:8.1f}x"
                )
    return 0


if __name__ == "__main__":
    sys.exit(main())
