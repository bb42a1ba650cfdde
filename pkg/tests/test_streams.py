import math

import numpy as np
import pytest

from xsec.streams import MCConfig, run_batches, sample_exponentials, sample_uniform, substream


def test_same_key_same_draws():
    a = sample_exponentials(substream(7, 3), 10)
    b = sample_exponentials(substream(7, 3), 10)
    np.testing.assert_array_equal(a, b)


def test_different_batches_differ():
    assert not np.array_equal(sample_exponentials(substream(7, 0), 10), sample_exponentials(substream(7, 1), 10))


def test_exponential_moments():
    y = sample_exponentials(substream(1, 0), 10**6)
    assert (y > 0).all()
    assert abs(y.mean() - 1.0) < 0.005
    assert abs((y > 1).mean() - math.exp(-1)) < 0.002


class _ZeroThenHalf:
    def __init__(self):
        self.calls = 0

    def random(self, size):
        self.calls += 1
        out = np.full(size, 0.5)
        if self.calls == 1:
            out[0] = 0.0
        return out


def test_zero_uniforms_are_redrawn():
    stream = _ZeroThenHalf()
    u = sample_uniform(stream, 4)
    assert stream.calls == 2
    np.testing.assert_array_equal(u, 0.5)


@pytest.mark.parametrize(
    "kwargs",
    [dict(samples=10, batches=1), dict(samples=10, batches=3), dict(samples=2, batches=4), dict(seed=-1)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        MCConfig(**kwargs)


def test_results_independent_of_workers(monkeypatch):
    cfg = MCConfig(1000, 10, 5)

    def fn(stream, b):
        return b, stream.random(3)

    serial = run_batches(MCConfig(1000, 10, 5, workers=1), fn)
    parallel = run_batches(MCConfig(1000, 10, 5, workers=4), fn)
    monkeypatch.setenv("XSEC_THREADS", "3")
    env = run_batches(cfg, fn)
    for x, y, z in zip(serial, parallel, env):
        assert x[0] == y[0] == z[0]
        np.testing.assert_array_equal(x[1], y[1])
        np.testing.assert_array_equal(x[1], z[1])
