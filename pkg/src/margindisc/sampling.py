"""Seeded random states, unitaries and POVMs for property checks and restarts."""

from __future__ import annotations

import numpy as np

from .linalg import dagger


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def ginibre(rng, d: int, k: int | None = None) -> np.ndarray:
    k = d if k is None else k
    return rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))


def haar_unitary(rng, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, d: int, scale: float = 1.0) -> np.ndarray:
    g = ginibre(rng, d)
    return scale * 0.5 * (g + dagger(g))


def random_psd(rng, d: int, rank: int | None = None) -> np.ndarray:
    g = ginibre(rng, d, rank)
    return g @ dagger(g)


def random_pure_state(rng, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(rng, d: int, rank: int | None = None) -> np.ndarray:
    m = random_psd(rng, d, rank)
    return m / np.trace(m).real


def random_povm(rng, d: int, outcomes: int) -> list[np.ndarray]:
    """Random POVM with ``outcomes`` elements summing to the identity."""
    es = [random_psd(rng, d) for _ in range(outcomes)]
    total = np.sum(es, axis=0)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ dagger(v)
    return [inv_sqrt @ e @ dagger(inv_sqrt) for e in es]
