"""Time the numba kernels against their numpy references.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Kernel rows call both implementations directly, so the BNN_KERNELS flag does
not matter there. int_dense is left out: both backends use float64 BLAS
whenever that is exact. ``--end-to-end`` times an exact forward pass of a preset
network once per backend, each in a fresh interpreter with BNN_KERNELS set.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from bnn_bet import _kernels as K
from bnn_bet.tensor import pack_rows


def cases(rng):
    n = 784
    w = pack_rows(rng.random((256, n)) > 0.5)
    x = pack_rows(rng.random((500, n)) > 0.5)
    maps = rng.normal(size=(200, 16, 26, 26)).astype(np.float32)
    products = rng.choice([-1, 1], size=(4, 14)).astype(np.int64)
    products[:, :10] = 1  # large margin, so the search runs to the end
    h = products.sum(axis=1)
    return {
        "xor_popcount_dot 500x784 . 256x784": ("xor_popcount_dot", (w, x, n)),
        "maxpool2 200x16x26x26 float32": ("maxpool2", (maps,)),
        "flip_search fan-in 14, budget 5": ("flip_search", (products, h, 0, 5)),
    }


E2E = """
import time, numpy as np
from bnn_bet.model import build_preset
from bnn_bet import _kernels
g = build_preset("{preset}", "{scale}", seed=0)
x = np.random.default_rng(0).integers(0, g.z + 1, size=(1000,) + g.input_shape)
g.forward_exact(x[:10])
t = time.perf_counter(); g.forward_exact(x); dt = time.perf_counter() - t
print(_kernels.BACKEND, dt)
"""


def equal(a, b):
    if isinstance(a, tuple):
        return all(equal(p, q) for p, q in zip(a, b))
    return np.array_equal(a, b)


def end_to_end(preset, scale):
    out = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, BNN_KERNELS=backend)
        res = subprocess.run([sys.executable, "-c", E2E.format(preset=preset, scale=scale)],
                             env=env, capture_output=True, text=True, check=True)
        name, dt = res.stdout.split()
        out[name] = float(dt)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if K.numba is None:
        sys.exit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, (name, a) in cases(rng).items():
        ref, fast = getattr(K, f"{name}_numpy"), getattr(K, f"{name}_numba")
        r_np, r_nb = ref(*a), fast(*a)  # also compiles the numba version
        same = equal(r_np, r_nb)
        t_np = min(timeit.repeat(lambda: ref(*a), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fast(*a), number=1, repeat=args.repeat)) * 1e3
        flag = "" if same else "  MISMATCH"
        print(f"{label:40s} {t_np:10.2f} {t_nb:10.2f} {t_np / t_nb:7.1f}x{flag}")
    if args.end_to_end:
        for preset, scale in [("fashion-fcnn", "1/8"), ("fashion-cnn", "1/4")]:
            t = end_to_end(preset, scale)
            print(f"forward_exact {preset} {scale}, 1000 samples: numpy {t['numpy']:.2f} s, "
                  f"numba {t['numba']:.2f} s ({t['numpy'] / t['numba']:.1f}x)")


if __name__ == "__main__":
    main()
