import numpy as np

from levylab.rng import RngStream, as_generator, make_streams, run_blocks


def test_replay_is_bit_exact():
    a = RngStream(123, 4).generator().standard_normal(1000)
    b = RngStream(123, 4).generator().standard_normal(1000)
    assert np.array_equal(a, b)


def test_make_streams_matches_direct_seeding():
    streams = make_streams(99, 1)
    direct = RngStream(99, 0)
    assert streams[0] == direct
    assert np.array_equal(streams[0].generator().random(10),
                          direct.generator().random(10))


def test_distinct_streams_are_uncorrelated():
    u = RngStream(2024, 0).generator().random(1_000_000)
    v = RngStream(2024, 1).generator().random(1_000_000)
    r = np.corrcoef(u, v)[0, 1]
    assert abs(r) < 0.005


def test_distinct_seeds_differ():
    a = RngStream(1, 0).generator().random(8)
    b = RngStream(2, 0).generator().random(8)
    assert not np.array_equal(a, b)


def test_counter_advance_replays_midstream():
    gen = RngStream(7, 3).generator()
    gen.bit_generator.advance(100)
    expected = gen.random(5)
    resumed = RngStream(7, 3, counter=100).generator().random(5)
    assert np.array_equal(expected, resumed)


def test_as_generator_accepts_both():
    s = RngStream(5, 0)
    g = s.generator()
    assert as_generator(g) is g
    assert np.array_equal(as_generator(s).random(3), s.generator().random(3))


def test_run_blocks_independent_of_worker_count():
    def work(stream, n):
        return stream.generator().random(n)

    for workers in (1, 2, 4):
        parts = run_blocks(10_000, 1024, work, master_seed=11, workers=workers)
        if workers == 1:
            baseline = np.concatenate(parts)
        else:
            assert np.array_equal(np.concatenate(parts), baseline)
    assert baseline.size == 10_000
