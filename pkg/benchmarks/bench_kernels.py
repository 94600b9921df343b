"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import random
import time

from toricstab import kernels
from toricstab.cli import load_model
from pathlib import Path

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    rng = random.Random(0)
    for stem, m in (("p2", 40), ("bl2p2", 40), ("p113", 20), ("p1xp1xp1", 16)):
        P = load_model(CORPUS / f"{stem}.json").polytope
        k = m * P.ell0
        normals = [n for n, _ in P.facets]
        rhs = [-k * o for _, o in P.facets]
        lo = [k * min(v[i] for v in P.vertices) for i in range(P.dim)]
        hi = [k * max(v[i] for v in P.vertices) for i in range(P.dim)]
        box = (normals, [int(r) for r in rhs], [int(x) for x in lo], [int(x) for x in hi])
        pts = kernels.lattice_points(*box, 10**7)
        grads = [tuple(rng.randint(-6, 6) for _ in range(P.dim)) for _ in range(6)]
        consts = [rng.randint(-50, 50) for _ in grads]
        yield f"{stem} m={m}", box, pts, grads, consts


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if kernels.compiled_backend is None:
        print("compiled extension not available; build it with `pip install -e . --no-build-isolation`")
        return
    backends = {"python": kernels.python_backend, "compiled": kernels.compiled_backend}
    print(f"{'case':<18}{'kernel':<16}{'points':>8}{'python s':>12}{'compiled s':>12}{'speedup':>9}")
    for label, box, pts, grads, consts in cases():
        t = {}
        for name, mod in backends.items():
            t[name, "lattice"] = best_of(lambda: mod.lattice_points(*box, 10**7), args.repeat)
            t[name, "max_affine"] = best_of(lambda: mod.max_affine_int(pts, grads, consts), args.repeat)
        for kernel in ("lattice", "max_affine"):
            py, c = t["python", kernel], t["compiled", kernel]
            print(f"{label:<18}{kernel:<16}{len(pts):>8}{py:>12.4f}{c:>12.4f}{py / c:>8.1f}x")


if __name__ == "__main__":
    main()
