"""Self-describing checkpoint container for agent training state.

A checkpoint is a single ``.npz`` archive.  The entry ``__meta__`` holds a
JSON document with a magic tag and format version, the topology signature of
every stored network, Adam scalar state, the bit-generator state of the
training RNG, and a caller-supplied metadata dict (run configuration, its
hash, normalization statistics, ...).  All parameter and moment arrays are
stored as float64 under namespaced keys, so a load rebuilds training state
exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .nets import AdamState, DenseNet

MAGIC = "BESSRL-CKPT"
FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    nets: dict[str, DenseNet]
    adam: dict[str, AdamState]
    meta: dict = field(default_factory=dict)
    rng_state: dict | None = None


def _net_arrays(name: str, net: DenseNet) -> dict[str, np.ndarray]:
    arrays = {}
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        arrays[f"net/{name}/w{i}"] = w
        arrays[f"net/{name}/b{i}"] = b
    return arrays


def _adam_arrays(name: str, state: AdamState) -> dict[str, np.ndarray]:
    arrays = {}
    for i in range(len(state.m_weights)):
        arrays[f"adam/{name}/mw{i}"] = state.m_weights[i]
        arrays[f"adam/{name}/vw{i}"] = state.v_weights[i]
        arrays[f"adam/{name}/mb{i}"] = state.m_biases[i]
        arrays[f"adam/{name}/vb{i}"] = state.v_biases[i]
    return arrays


def save_checkpoint(
    path,
    nets: dict[str, DenseNet],
    adam: dict[str, AdamState] | None = None,
    meta: dict | None = None,
    rng_state: dict | None = None,
) -> None:
    """Write networks, optimizer state and metadata to ``path``."""
    adam = adam or {}
    header = {
        "magic": MAGIC,
        "version": FORMAT_VERSION,
        "nets": {name: net.signature() for name, net in nets.items()},
        "adam": {
            name: {
                "lr": st.lr,
                "beta1": st.beta1,
                "beta2": st.beta2,
                "eps": st.eps,
                "step_count": st.step_count,
            }
            for name, st in adam.items()
        },
        "rng_state": rng_state,
        "meta": meta or {},
    }
    arrays: dict[str, np.ndarray] = {}
    for name, net in nets.items():
        arrays.update(_net_arrays(name, net))
    for name, state in adam.items():
        arrays.update(_adam_arrays(name, state))
    arrays["__meta__"] = np.frombuffer(json.dumps(header).encode(), dtype=np.uint8)
    np.savez(path, **arrays)


def load_checkpoint(path) -> Checkpoint:
    """Read a checkpoint; validates the magic tag and format version."""
    with np.load(path) as archive:
        if "__meta__" not in archive:
            raise ValueError(f"{path}: not a recognised checkpoint (missing header)")
        header = json.loads(bytes(archive["__meta__"].tobytes()).decode())
        if header.get("magic") != MAGIC:
            raise ValueError(f"{path}: not a recognised checkpoint (bad magic)")
        if header.get("version") != FORMAT_VERSION:
            raise ValueError(
                f"{path}: unsupported checkpoint version {header.get('version')} "
                f"(this build reads version {FORMAT_VERSION})"
            )
        nets: dict[str, DenseNet] = {}
        for name, sig in header["nets"].items():
            n_layers = len(sig["layer_sizes"]) - 1
            nets[name] = DenseNet(
                weights=[archive[f"net/{name}/w{i}"] for i in range(n_layers)],
                biases=[archive[f"net/{name}/b{i}"] for i in range(n_layers)],
                head=sig["head"],
                n_actions=sig["n_actions"],
                n_atoms=sig["n_atoms"],
            )
        adam: dict[str, AdamState] = {}
        for name, scalars in header["adam"].items():
            n_layers = nets[name].n_layers
            adam[name] = AdamState(
                lr=scalars["lr"],
                beta1=scalars["beta1"],
                beta2=scalars["beta2"],
                eps=scalars["eps"],
                step_count=scalars["step_count"],
                m_weights=[archive[f"adam/{name}/mw{i}"] for i in range(n_layers)],
                v_weights=[archive[f"adam/{name}/vw{i}"] for i in range(n_layers)],
                m_biases=[archive[f"adam/{name}/mb{i}"] for i in range(n_layers)],
                v_biases=[archive[f"adam/{name}/vb{i}"] for i in range(n_layers)],
            )
    return Checkpoint(nets=nets, adam=adam, meta=header["meta"], rng_state=header["rng_state"])


def require_topology(checkpoint: Checkpoint, name: str, signature: dict) -> DenseNet:
    """Fetch a net from a checkpoint, failing loudly on topology mismatch."""
    if name not in checkpoint.nets:
        raise ValueError(f"checkpoint holds no network named {name!r}")
    net = checkpoint.nets[name]
    if net.signature() != signature:
        raise ValueError(
            f"checkpoint network {name!r} has topology {net.signature()}, "
            f"expected {signature}"
        )
    return net
