#!/usr/bin/env python3
"""Compare the compiled range-coder kernel with the pure-Python fallback.

Both backends implement the same interface and emit bit-identical
streams; this script measures encode and decode throughput on a shared
workload and reports the speedup.  Run from anywhere:

    python3 benchmarks/bench_coder.py [--symbols N] [--repeats R]
"""

import argparse
import random
import statistics
import sys
import time

from semcomm import _coder_py

try:
    from semcomm import _coder_cy
except ImportError:
    _coder_cy = None


def make_workload(n_symbols: int, seed: int = 2024):
    """Mixed blocks: small and large alphabets, skewed and flat."""
    rnd = random.Random(seed)
    blocks = []
    remaining = n_symbols
    while remaining > 0:
        k = rnd.choice((4, 16, 64, 256))
        size = min(remaining, rnd.randint(200, 2000))
        if rnd.random() < 0.5:
            hot = rnd.randrange(k)
            symbols = [hot if rnd.random() < 0.7 else rnd.randrange(k)
                       for _ in range(size)]
        else:
            symbols = [rnd.randrange(k) for _ in range(size)]
        blocks.append((k, symbols))
        remaining -= size
    return blocks


def run_encode(impl, blocks):
    enc = impl.RangeEncoder()
    for k, symbols in blocks:
        impl.encode_block_adaptive(symbols, k, enc)
    return enc.finish()


def run_decode(impl, blocks, blob):
    dec = impl.RangeDecoder(blob)
    out = []
    for k, symbols in blocks:
        out.append(impl.decode_block_adaptive(len(symbols), k, dec))
    return out


def time_backend(impl, blocks, repeats):
    encode_times, decode_times = [], []
    blob = run_encode(impl, blocks)
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_encode(impl, blocks)
        encode_times.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        decoded = run_decode(impl, blocks, blob)
        decode_times.append(time.perf_counter() - t0)
    assert [s for _, s in blocks] == decoded, "decode mismatch"
    return blob, statistics.median(encode_times), statistics.median(decode_times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--symbols", type=int, default=200_000,
                        help="total symbols in the workload (default 200000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repetitions per backend (default 3)")
    args = parser.parse_args(argv)

    blocks = make_workload(args.symbols)
    n = sum(len(s) for _, s in blocks)
    print(f"workload: {n} symbols in {len(blocks)} adaptive blocks")

    results = {}
    backends = [("pure-python", _coder_py)]
    if _coder_cy is not None:
        backends.insert(0, ("cython", _coder_cy))
    else:
        print("compiled backend not built; timing the fallback only")

    blobs = {}
    for name, impl in backends:
        blob, t_enc, t_dec = time_backend(impl, blocks, args.repeats)
        blobs[name] = blob
        results[name] = (t_enc, t_dec)
        print(f"{name:>12}: encode {t_enc * 1e3:8.1f} ms "
              f"({n / t_enc / 1e6:6.2f} Msym/s)   "
              f"decode {t_dec * 1e3:8.1f} ms "
              f"({n / t_dec / 1e6:6.2f} Msym/s)")

    if len(blobs) == 2:
        streams = list(blobs.values())
        assert streams[0] == streams[1], "backends emitted different streams"
        print("streams: bit-identical across backends")
        enc_speedup = results["pure-python"][0] / results["cython"][0]
        dec_speedup = results["pure-python"][1] / results["cython"][1]
        print(f"speedup: encode {enc_speedup:.1f}x, decode {dec_speedup:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
