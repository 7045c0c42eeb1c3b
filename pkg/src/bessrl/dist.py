"""Categorical return distributions on a fixed value support.

A return distribution is represented by probability masses over ``n_atoms``
evenly spaced support points between configured value bounds.  This module
builds supports, projects arbitrary weighted atom sets back onto a support
(splitting each atom's mass linearly between its two nearest support points,
with out-of-range atoms clipped to the boundary), and evaluates the
value-at-risk of a distribution: the smallest support point whose cumulative
probability reaches the risk level.
"""

from __future__ import annotations

import numpy as np


def make_support(v_min: float, v_max: float, n_atoms: int) -> np.ndarray:
    """Evenly spaced value atoms from v_min to v_max inclusive."""
    if n_atoms < 2:
        raise ValueError("need at least two atoms")
    if not v_min < v_max:
        raise ValueError("v_min must be below v_max")
    return np.linspace(float(v_min), float(v_max), int(n_atoms))


def project_onto_support(
    atoms: np.ndarray,
    probs: np.ndarray,
    support: np.ndarray,
) -> np.ndarray:
    """Project weighted atoms onto a support, conserving mass and mean.

    Args:
        atoms: (..., k) atom positions (any values; clipped to the support
            range first).
        probs: (..., k) non-negative masses per atom; each trailing row
            should sum to one but is not rescaled here.
        support: (n,) evenly spaced support.

    Returns:
        (..., n) projected masses.  Each atom's mass is split between the two
        neighbouring support points in linear proportion, so the mass total
        is conserved exactly and the mean of in-range atoms is preserved.
    """
    atoms = np.asarray(atoms, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if atoms.shape != probs.shape:
        raise ValueError(f"atoms shape {atoms.shape} != probs shape {probs.shape}")
    n = len(support)
    v_min = float(support[0])
    v_max = float(support[-1])
    dz = float(support[1] - support[0])

    lead_shape = atoms.shape[:-1]
    k = atoms.shape[-1]
    flat_atoms = atoms.reshape(-1, k)
    flat_probs = probs.reshape(-1, k)
    rows = flat_atoms.shape[0]

    pos = (np.clip(flat_atoms, v_min, v_max) - v_min) / dz
    lower = np.floor(pos).astype(np.int64)
    np.clip(lower, 0, n - 1, out=lower)
    upper = np.minimum(lower + 1, n - 1)
    frac = pos - lower

    out = np.zeros((rows, n))
    row_idx = np.repeat(np.arange(rows), k)
    np.add.at(out, (row_idx, lower.ravel()), (flat_probs * (1.0 - frac)).ravel())
    np.add.at(out, (row_idx, upper.ravel()), (flat_probs * frac).ravel())
    return out.reshape(*lead_shape, n)


def value_at_risk(probs: np.ndarray, support: np.ndarray, level: float) -> np.ndarray:
    """Lower-tail value-at-risk of categorical distributions.

    Returns, per distribution, the smallest support point whose cumulative
    probability is at least ``level``.  If accumulated float mass never
    reaches ``level`` (possible when level is 1 and the sums round just
    short), the largest atom carrying positive mass is returned.

    Args:
        probs: (..., n) masses.
        support: (n,) support values, ascending.
        level: risk level in (0, 1].

    Returns:
        Array of shape (...) of support values (scalar array for 1-D input).
    """
    if not 0.0 < level <= 1.0:
        raise ValueError("risk level must lie in (0, 1]")
    probs = np.asarray(probs, dtype=np.float64)
    n = probs.shape[-1]
    if len(support) != n:
        raise ValueError("support length does not match distribution width")
    flat = probs.reshape(-1, n)
    cdf = np.cumsum(flat, axis=1)
    reached = cdf >= level
    idx = np.argmax(reached, axis=1)
    # rows whose cumulative mass never reaches the level: take the last atom
    # with positive mass instead
    missed = ~reached[np.arange(len(flat)), idx]
    if np.any(missed):
        has_mass = flat[missed] > 0.0
        last_pos = n - 1 - np.argmax(has_mass[:, ::-1], axis=1)
        idx[missed] = last_pos
    values = np.asarray(support, dtype=np.float64)[idx]
    return values.reshape(probs.shape[:-1])


def dist_mean(probs: np.ndarray, support: np.ndarray) -> np.ndarray:
    """Expected value of categorical distributions: sum_i z_i p_i."""
    return np.asarray(probs, dtype=np.float64) @ np.asarray(support, dtype=np.float64)
