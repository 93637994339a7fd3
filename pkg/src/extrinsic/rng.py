"""Counter-based random streams.

Every simulated path owns a disjoint window of a Philox4x64 stream keyed by the
run seed, so the numbers drawn for path ``p`` depend only on ``(seed, p,
n_draws)``.  Splitting paths across workers or chunks therefore never changes a
result.
"""
import numpy as np
from scipy.special import ndtri

_TWO_M53 = 2.0 ** -53

#: Paths handed to one worker task; results do not depend on this value.
CHUNK_PATHS = 1 << 16


def _blocks_per_path(n_draws):
    # one Philox counter increment yields four 64-bit words
    return -(-n_draws // 4)


def uniforms(seed, start, stop, n_draws):
    """Open-interval uniforms for paths ``start .. stop-1``.

    Returns an array of shape ``(stop - start, n_draws)``.
    """
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    n_paths = stop - start
    if n_paths <= 0 or n_draws <= 0:
        return np.empty((max(n_paths, 0), max(n_draws, 0)))
    bpp = _blocks_per_path(n_draws)
    gen = np.random.Philox(key=int(seed), counter=int(start) * bpp)
    raw = gen.random_raw(n_paths * bpp * 4).reshape(n_paths, bpp * 4)[:, :n_draws]
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53


def normals(seed, start, stop, n_draws):
    """Standard normals by inversion of :func:`uniforms`."""
    return ndtri(uniforms(seed, start, stop, n_draws))


def chunks(n_paths, size=CHUNK_PATHS):
    return [(a, min(a + size, n_paths)) for a in range(0, n_paths, size)]


def map_chunks(fn, n_paths, n_workers=1):
    """Apply ``fn(start, stop)`` over fixed path chunks and stack in path order."""
    spans = chunks(n_paths)
    if n_workers <= 1 or len(spans) == 1:
        parts = [fn(a, b) for a, b in spans]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(lambda s: fn(*s), spans))
    return np.concatenate(parts, axis=0)
