import math

import numpy as np
import pytest

import oerc


def test_reservoir_shape_and_bounds():
    cfg = oerc.ReservoirConfig()
    cfg.n_neurons = 10
    mask = oerc.make_mask(oerc.Rng(1), 10)
    assert mask.shape == (10,)
    u = np.linspace(-3, 3, 200)
    x = oerc.run_reservoir(u, mask, cfg)
    assert x.shape == (200, 10)
    assert np.all(np.abs(x) <= 1.0)
    assert np.array_equal(x, oerc.run_reservoir(u, mask, cfg))


def test_zero_input_stays_at_rest():
    cfg = oerc.ReservoirConfig()
    x = oerc.run_reservoir(np.zeros(20), np.ones(cfg.n_neurons), cfg)
    assert not x.any()


def test_config_errors_surface_as_value_error():
    cfg = oerc.ReservoirConfig()
    cfg.rc_ratio = 0.0
    with pytest.raises(ValueError):
        cfg.validate()


def test_metrics():
    d = np.array([1.0, -1.0])
    assert oerc.nmse(d, d) == 0.0
    assert oerc.nmse(np.zeros(2), d) == 1.0
    assert oerc.ser(np.array([0.7, -2.5, 2.1]), np.array([1.0, -3.0, 3.0])) == 0.0


def test_narma_fixed_point():
    d = oerc.narma10_targets(np.zeros(5000))
    assert abs(d[-1] - (0.7 - math.sqrt(0.29))) < 1e-10


def test_schedule_and_photodiodes():
    s = oerc.TrainSchedule()
    assert oerc.lambda_at(0, s) == pytest.approx(0.4)
    assert oerc.lambda_at(100, s) == pytest.approx(0.396018, abs=1e-6)
    for x in np.linspace(-5, 5, 41):
        assert oerc.logistic_response(x) == pytest.approx(math.tanh(x), abs=1e-12)
    q = oerc.quantize(0.4, 2, 48.0)
    assert oerc.quantize(q, 2, 48.0) == q


def test_online_and_offline_channel():
    cfg = oerc.ReservoirConfig()
    sched = oerc.TrainSchedule()
    sched.train_len = 5000
    root = oerc.Rng(3)
    task = oerc.make_task(oerc.TaskKind.ChannelEq, root.derive("train"), root.derive("test"), 5000, 2000)
    assert len(task) >= 7000
    mask = oerc.make_mask(root.derive("mask"), cfg.n_neurons)
    run = oerc.run_online(task, mask, cfg, sched)
    assert run["test_output"].shape == (2000,)
    assert run["sq_error"].shape == (5000,)
    target = task.target[task.train_len:task.train_len + task.test_len]
    assert oerc.ser(run["test_output"], target, cfg.washout) < 0.1
    weights, offset = oerc.train_offline_ridge(task, mask, cfg)
    assert weights.shape == (cfg.n_neurons,)
    assert math.isfinite(offset)


def test_run_once_is_deterministic():
    cfg = oerc.ReservoirConfig()
    cfg.feedback_gain, cfg.input_gain, cfg.rc_ratio = 0.95, 0.8, 0.003
    sched = oerc.TrainSchedule()
    sched.train_len = 3000
    a = oerc.run_once(cfg, sched, oerc.TaskKind.Narma10, 1000, 0)
    b = oerc.run_once(cfg, sched, oerc.TaskKind.Narma10, 1000, 0)
    assert a.ok() and a.metric == "NMSE"
    assert a.value == b.value
