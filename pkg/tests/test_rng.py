import numpy as np

from relheat._rng import derive_key, philox4x32, uniforms


def test_philox_known_answers():
    z = np.uint64(0)
    out = [int(v) for v in philox4x32(z, z, z, z, z, z)]
    assert out == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]
    f = np.uint64(0xFFFFFFFF)
    out = [int(v) for v in philox4x32(f, f, f, f, f, f)]
    assert out == [0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD]


def test_uniform_streams():
    a = uniforms(7, 0, 20000)
    assert np.array_equal(a, uniforms(7, 0, 20000))
    assert 0.0 < a.min() and a.max() < 1.0
    assert abs(a.mean() - 0.5) < 4 * np.sqrt(1 / 12 / a.size)
    b = uniforms(7, 1, 20000)
    corr = np.corrcoef(a.ravel(), b.ravel())[0, 1]
    assert abs(corr) < 3 / np.sqrt(a.size)


def test_replicate_ranges_are_independent_of_batching():
    whole = uniforms(3, 5, 10, k=4)
    tail = uniforms(3, 5, 4, k=4, first=6)
    assert np.array_equal(whole[6:], tail)


def test_derived_keys_differ():
    keys = {derive_key(0, s) for s in range(100)} | {derive_key(1, s) for s in range(100)}
    assert len(keys) == 200
