"""Counter-based random draws shared by every simulation backend.

All stochastic decisions in a simulation are keyed draws: a 64-bit hash of
(seed, iteration, purpose tag, two event words) mapped into [0, 1). Because a
draw depends only on its key, trajectories do not depend on node visitation
order, the compiled and vectorized backends agree bit-for-bit, and paired
runs of two models that share a transition consume identical randomness for
it. The mixer is the splitmix64 finalizer chained over the key words.
"""

from __future__ import annotations

import secrets

import numpy as np

MASK64 = (1 << 64) - 1

# Word-absorption constants; distinct per position so permuted keys collide
# no more often than random ones.
_K_ITER = 0x9E3779B97F4A7C15
_K_TAG = 0xBF58476D1CE4E5B9
_K_A = 0x94D049BB133111EB
_K_B = 0xD6E8FEB86659FD93

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# 2^-53: the top 53 hash bits become the mantissa, so results lie in [0, 1).
INV53 = 1.0 / 9007199254740992.0

# Purpose tags. Each transition kind draws under its own tag so that a model
# evaluating several rules for one node in one iteration never reuses a draw.
TAG_CONTACT = 1
TAG_RECOVER = 2
TAG_RESUSCEPT = 3
TAG_INCUBATE = 4
TAG_SPONTANEOUS = 5
TAG_PROFILE = 6
TAG_PICK = 7
TAG_PANEL = 8
TAG_EDGE = 9

# Stream constants for seed derivation (not draw tags).
_STREAM_INIT = 0x5EEDB10C
_STREAM_RUN = 0x0C0FFEE5


def mix64(z: int) -> int:
    """Splitmix64 finalizer on a 64-bit word (python-int reference)."""
    z &= MASK64
    z ^= z >> 30
    z = (z * _M1) & MASK64
    z ^= z >> 27
    z = (z * _M2) & MASK64
    z ^= z >> 31
    return z


def u01(seed: int, iteration: int, tag: int, a: int, b: int) -> float:
    """One keyed uniform draw in [0, 1). Reference implementation.

    Args:
        seed: 64-bit simulation seed.
        iteration: engine iteration index (micro-update stepped models fold
            the substep index into ``a``/``b``).
        tag: purpose tag (``TAG_*``), separating rule kinds.
        a, b: event words, e.g. (source, target) for a contact.
    """
    h = seed & MASK64
    h = mix64(h ^ ((iteration + _K_ITER) & MASK64))
    h = mix64(h ^ ((tag + _K_TAG) & MASK64))
    h = mix64(h ^ ((a + _K_A) & MASK64))
    h = mix64(h ^ ((b + _K_B) & MASK64))
    return (h >> 11) * INV53


def u01_array(seed: int, iteration: int, tag: int, a, b) -> np.ndarray:
    """Vectorized ``u01`` over broadcast arrays of event words."""
    ua = np.asarray(a, dtype=np.uint64)
    ub = np.asarray(b, dtype=np.uint64)
    shape = np.broadcast_shapes(ua.shape, ub.shape)
    h = np.full(shape, np.uint64(seed & MASK64), dtype=np.uint64)
    for word, const in (
        (np.uint64(iteration & MASK64), np.uint64(_K_ITER)),
        (np.uint64(tag & MASK64), np.uint64(_K_TAG)),
    ):
        h ^= word + const
        h ^= h >> np.uint64(30)
        h *= np.uint64(_M1)
        h ^= h >> np.uint64(27)
        h *= np.uint64(_M2)
        h ^= h >> np.uint64(31)
    for word, const in ((ua, np.uint64(_K_A)), (ub, np.uint64(_K_B))):
        h = h ^ (word + const)
        h ^= h >> np.uint64(30)
        h *= np.uint64(_M1)
        h ^= h >> np.uint64(27)
        h *= np.uint64(_M2)
        h ^= h >> np.uint64(31)
    return (h >> np.uint64(11)) * INV53


def derive_seed(base: int, index: int, stream: int = _STREAM_RUN) -> int:
    """Child seed for run ``index``; independent of all other indices."""
    return mix64(mix64((base & MASK64) ^ mix64(index & MASK64)) ^ stream)


def init_seed(base: int) -> int:
    """Seed for the initial-status sampler (numpy Generator stream)."""
    return derive_seed(base, 0, stream=_STREAM_INIT)


def normalize_seed(seed: int) -> int:
    """Clamp an arbitrary python int (possibly negative) to 64 bits."""
    return seed & MASK64


def fresh_seed() -> int:
    """Draw a cryptographically random 64-bit seed (when none supplied)."""
    return secrets.randbits(64)
