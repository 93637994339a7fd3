import numpy as np
import pytest

from extrinsic import rng


def test_open_interval():
    u = rng.uniforms(1, 0, 10_000, 7)
    assert u.shape == (10_000, 7)
    assert u.min() > 0.0 and u.max() < 1.0


def test_paths_are_addressable():
    full = rng.uniforms(3, 0, 1000, 5)
    np.testing.assert_array_equal(rng.uniforms(3, 137, 400, 5), full[137:400])


@pytest.mark.parametrize("workers", [1, 2, 5])
def test_map_chunks_independent_of_workers(workers):
    n = 3 * rng.CHUNK_PATHS + 11
    got = rng.map_chunks(lambda a, b: rng.normals(9, a, b, 3), n, workers)
    np.testing.assert_array_equal(got, rng.normals(9, 0, n, 3))


def test_seeds_differ():
    assert not np.array_equal(rng.uniforms(1, 0, 10, 4), rng.uniforms(2, 0, 10, 4))


def test_seed_range():
    with pytest.raises(ValueError):
        rng.uniforms(-1, 0, 1, 1)
    rng.uniforms(2 ** 64 - 1, 0, 1, 1)


def test_normal_moments():
    z = rng.normals(5, 0, 200_000, 2)
    assert abs(z.mean()) < 4 / np.sqrt(z.size)
    assert abs(z.var() - 1) < 4 * np.sqrt(2 / z.size)
