"""Checkpoint container: round trip, header validation, topology guard."""

import numpy as np
import pytest

from bessrl.checkpoint import (
    FORMAT_VERSION,
    MAGIC,
    load_checkpoint,
    require_topology,
    save_checkpoint,
)
from bessrl.nets import AdamState, adam_step, backward, build_net, forward


def make_state(seed=0):
    rng = np.random.default_rng(seed)
    net = build_net((9, 12, 3), "linear", rng)
    adam = AdamState.for_net(net, lr=3e-4)
    out, cache = forward(net, rng.normal(size=(4, 9)))
    adam_step(net, backward(net, cache, np.ones_like(out)), adam)
    return net, adam


def test_round_trip_restores_everything_bit_exactly(tmp_path):
    net, adam = make_state()
    rng = np.random.default_rng(1234)
    rng.normal(size=10)
    rng_state = rng.bit_generator.state
    meta = {"config_hash": "abc123", "price_mean": 47.5, "price_std": 12.25, "algo": "dqn"}
    path = tmp_path / "ck.npz"
    save_checkpoint(path, {"q": net}, {"q": adam}, meta=meta, rng_state=rng_state)

    loaded = load_checkpoint(path)
    assert loaded.meta == meta
    got = loaded.nets["q"]
    for a, b in zip(got.weights + got.biases, net.weights + net.biases):
        assert np.array_equal(a, b)
    st = loaded.adam["q"]
    assert st.lr == adam.lr and st.step_count == adam.step_count
    for a, b in zip(st.m_weights + st.v_biases, adam.m_weights + adam.v_biases):
        assert np.array_equal(a, b)
    # the RNG continues identically from the stored state
    resumed = np.random.default_rng()
    resumed.bit_generator.state = loaded.rng_state
    assert np.array_equal(resumed.normal(size=5), rng.normal(size=5))


def test_round_trip_multiple_nets(tmp_path):
    rng = np.random.default_rng(2)
    actor = build_net((9, 8, 3), "policy", rng)
    critic = build_net((9, 8, 15), "categorical", rng, n_actions=3, n_atoms=5)
    path = tmp_path / "pair.npz"
    save_checkpoint(path, {"actor": actor, "critic": critic})
    loaded = load_checkpoint(path)
    assert set(loaded.nets) == {"actor", "critic"}
    assert loaded.nets["critic"].n_atoms == 5
    assert loaded.adam == {}


def test_magic_and_version_are_enforced(tmp_path):
    bogus = tmp_path / "bogus.npz"
    np.savez(bogus, data=np.zeros(3))
    with pytest.raises(ValueError, match="missing header"):
        load_checkpoint(bogus)

    import json

    wrong_magic = tmp_path / "wrong.npz"
    header = json.dumps({"magic": "OTHER", "version": FORMAT_VERSION, "nets": {}, "adam": {}, "rng_state": None, "meta": {}})
    np.savez(wrong_magic, __meta__=np.frombuffer(header.encode(), dtype=np.uint8))
    with pytest.raises(ValueError, match="bad magic"):
        load_checkpoint(wrong_magic)

    future = tmp_path / "future.npz"
    header = json.dumps({"magic": MAGIC, "version": 99, "nets": {}, "adam": {}, "rng_state": None, "meta": {}})
    np.savez(future, __meta__=np.frombuffer(header.encode(), dtype=np.uint8))
    with pytest.raises(ValueError, match="version 99"):
        load_checkpoint(future)


def test_require_topology_flags_mismatch(tmp_path):
    net, _ = make_state()
    path = tmp_path / "c.npz"
    save_checkpoint(path, {"q": net})
    loaded = load_checkpoint(path)
    assert require_topology(loaded, "q", net.signature()) is loaded.nets["q"]
    other = build_net((9, 24, 3), "linear", np.random.default_rng(0))
    with pytest.raises(ValueError, match="topology"):
        require_topology(loaded, "q", other.signature())
    with pytest.raises(ValueError, match="no network named"):
        require_topology(loaded, "missing", net.signature())
