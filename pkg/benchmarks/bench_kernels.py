"""Compare the compiled and pure-Python numeric kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times batched polynomial evaluation, batched Newton solves and one full
numeric characteristic polynomial on each available backend, and checks that
both backends return the same numbers.
"""

import argparse
import time

import numpy as np

from lojax.charpoly import charpoly_numeric
from lojax.milnor import Germ
from lojax.numeric import available_backends, compile_map, compile_system, eval_points, set_backend


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    g = Germ.parse("x^4 + y^5 + x^2*y^3")
    grad = g.gradient()
    rng = np.random.default_rng(0)
    Z = 0.3 * (rng.standard_normal((20000, 2)) + 1j * rng.standard_normal((20000, 2)))
    pm = compile_map([g.f] + grad, g.vars)
    sys_ = compile_system(grad, g.vars)
    W = np.array([1e-3 + 2e-3j, -1e-3j])
    Z0 = Z[:2000] * 0.5
    yield "eval 3 polys x 20000 pts", lambda: eval_points(pm, Z)
    yield "newton 2000 starts", lambda: sys_.newton(W, Z0, 1e-12, 50)[0]
    yield "charpoly_numeric x^3+y^4", lambda: charpoly_numeric(Germ.parse("x^3+y^4")).coefficients[0].tables[0].values


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases():
        row, outs = [], []
        for b in backends:
            prev = set_backend(b)
            try:
                dt, out = best_of(fn, args.repeat)
            finally:
                set_backend(prev)
            row.append(dt)
            outs.append(np.asarray(out))
        line = f"{name:32s}" + "".join(f"{dt * 1e3:10.2f}ms" for dt in row)
        if len(row) > 1:
            line += f"{row[0] / row[1]:11.1f}x"
            a, b = outs
            same = np.allclose(a, b, rtol=1e-9, atol=1e-12, equal_nan=True)
            line += "" if same else "  (outputs differ!)"
        print(line)


if __name__ == "__main__":
    main()
