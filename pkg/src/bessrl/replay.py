"""Fixed-capacity experience replay with uniform sampling.

Transitions are stored column-wise in preallocated float64/int64 arrays; a
write cursor wraps around so the buffer always holds the most recent
``capacity`` transitions exactly (FIFO overwrite).  Sampling is uniform with
replacement from the live region and is driven by a caller-supplied seeded
generator, so sampling is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_ACTIONS = 3


@dataclass(frozen=True)
class Transition:
    """One environment step, with the action as its index (0, 1, 2)."""

    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


@dataclass(frozen=True)
class Batch:
    states: np.ndarray  # (n, n_features)
    actions: np.ndarray  # (n,) int64
    rewards: np.ndarray  # (n,)
    next_states: np.ndarray  # (n, n_features)
    dones: np.ndarray  # (n,) bool

    def __len__(self) -> int:
        return len(self.actions)


class ReplayBuffer:
    """Ring buffer of transitions with uniform with-replacement sampling."""

    def __init__(self, capacity: int, n_features: int):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        if n_features < 1:
            raise ValueError("n_features must be at least 1")
        self.capacity = int(capacity)
        self.n_features = int(n_features)
        self._states = np.zeros((capacity, n_features))
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity)
        self._next_states = np.zeros((capacity, n_features))
        self._dones = np.zeros(capacity, dtype=bool)
        self._cursor = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, transition: Transition) -> None:
        """Append one transition, overwriting the oldest when full."""
        state = np.asarray(transition.state, dtype=np.float64)
        next_state = np.asarray(transition.next_state, dtype=np.float64)
        if state.shape != (self.n_features,) or next_state.shape != (self.n_features,):
            raise ValueError(
                f"feature width mismatch: buffer stores {self.n_features}, "
                f"got {state.shape} / {next_state.shape}"
            )
        action = int(transition.action)
        if not 0 <= action < N_ACTIONS:
            raise ValueError(f"action index {action} outside 0..{N_ACTIONS - 1}")
        i = self._cursor
        self._states[i] = state
        self._actions[i] = action
        self._rewards[i] = float(transition.reward)
        self._next_states[i] = next_state
        self._dones[i] = bool(transition.done)
        self._cursor = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, n: int, rng: np.random.Generator, allow_small: bool = False) -> Batch:
        """Draw ``n`` transitions uniformly with replacement.

        Raises:
            ValueError: fewer than ``n`` transitions stored and
                ``allow_small`` is false.  A mini-batch larger than the
                population silently repeats the same few transitions, so by
                default it is rejected; statistical probes that want exactly
                that behaviour opt in.
        """
        if n < 1:
            raise ValueError("sample size must be positive")
        if self._size < n and not allow_small:
            raise ValueError(f"buffer holds {self._size} transitions, cannot sample {n}")
        idx = rng.integers(0, self._size, size=n)
        return Batch(
            states=self._states[idx],
            actions=self._actions[idx],
            rewards=self._rewards[idx],
            next_states=self._next_states[idx],
            dones=self._dones[idx],
        )

    def dataset(self) -> Batch:
        """A view-copy of everything currently stored, in storage order."""
        n = self._size
        return Batch(
            states=self._states[:n].copy(),
            actions=self._actions[:n].copy(),
            rewards=self._rewards[:n].copy(),
            next_states=self._next_states[:n].copy(),
            dones=self._dones[:n].copy(),
        )
