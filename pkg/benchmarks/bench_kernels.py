"""Time the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import random
import timeit

import numpy as np

from mvklr import _pykernels
from mvklr._kernels import COMPILED

try:
    from mvklr import _ckernels
except ImportError:
    _ckernels = None


def shuffle_case(rng):
    a = {tuple(rng.randint(0, 2) for _ in range(5)): rng.randint(1, 4) for _ in range(4)}
    b = {tuple(rng.randint(0, 2) for _ in range(5)): rng.randint(1, 4) for _ in range(4)}
    return a, b


def rref_case(rng, n=60):
    return np.array([[rng.randint(0, 32002) for _ in range(n)] for _ in range(n)], dtype=np.int64)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    a, b = shuffle_case(rng)
    m = rref_case(rng)
    impls = [("python", _pykernels)]
    if _ckernels is not None:
        impls.append(("compiled", _ckernels))
    print(f"compiled kernels selected at import: {COMPILED}")
    for name, mod in impls:
        # the Python shuffle memoizes word pairs, so clear it each round
        from mvklr.word_characters import shuffle_words

        t_sh = min(timeit.repeat(lambda: (shuffle_words.cache_clear(), mod.shuffle_terms(a, b)), number=3, repeat=args.repeat)) / 3
        t_rr = min(timeit.repeat(lambda: mod.rref_mod(m, 32003), number=3, repeat=args.repeat)) / 3
        print(f"{name:9s} shuffle 4x4 words of length 5: {t_sh * 1e3:8.2f} ms   rref 60x60 mod 32003: {t_rr * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
