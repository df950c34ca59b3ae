"""Seeded 2-D toy data generators.

These exist to make solver behavior reproducible in tests and demos:
`separable_blobs` guarantees a margin along the first axis, `noisy_blobs`
does not, and `ring_in_disk` gives an imbalanced set whose classes need a
curved boundary.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset


def separable_blobs(
    n_pos: int, n_neg: int, seed: int = 0, spread: float = 0.8, gap: float = 1.0
) -> Dataset:
    """Two Gaussian-ish clouds kept strictly apart.

    Positive samples are folded onto x0 >= gap/2 and negatives onto
    x0 <= -gap/2, so the set is linearly separable with margin >= gap no
    matter the seed.
    """
    rng = np.random.default_rng(seed)
    half = gap / 2.0
    pos = np.column_stack(
        [half + np.abs(rng.normal(1.0, spread, n_pos)), rng.normal(0.0, spread, n_pos)]
    )
    neg = np.column_stack(
        [-half - np.abs(rng.normal(1.0, spread, n_neg)), rng.normal(0.0, spread, n_neg)]
    )
    x = np.vstack([pos, neg])
    y = np.concatenate([np.ones(n_pos, dtype=np.int64), -np.ones(n_neg, dtype=np.int64)])
    return Dataset(x, y, name=f"separable_blobs(seed={seed})")


def noisy_blobs(
    n_pos: int,
    n_neg: int,
    seed: int = 0,
    separation: float = 2.0,
    spread: float = 1.0,
) -> Dataset:
    """Two overlapping clouds; useful when bounded SVs are wanted."""
    rng = np.random.default_rng(seed)
    pos = rng.normal((separation / 2.0, 0.0), spread, (n_pos, 2))
    neg = rng.normal((-separation / 2.0, 0.0), spread, (n_neg, 2))
    x = np.vstack([pos, neg])
    y = np.concatenate([np.ones(n_pos, dtype=np.int64), -np.ones(n_neg, dtype=np.int64)])
    return Dataset(x, y, name=f"noisy_blobs(seed={seed})")


def ring_in_disk(
    n_minority: int,
    n_majority: int,
    seed: int = 0,
    disk_radius: float = 1.0,
    ring_radii: tuple[float, float] = (2.0, 3.0),
) -> Dataset:
    """Minority class (+1) inside a disk, majority (-1) on a ring around it.

    Radial sampling uses the square-root trick so density is uniform in
    area, not in radius.
    """
    rng = np.random.default_rng(seed)

    def annulus(n: int, r_lo: float, r_hi: float) -> np.ndarray:
        theta = rng.uniform(0.0, 2.0 * np.pi, n)
        r = np.sqrt(rng.uniform(r_lo**2, r_hi**2, n))
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    inner = annulus(n_minority, 0.0, disk_radius)
    outer = annulus(n_majority, ring_radii[0], ring_radii[1])
    x = np.vstack([inner, outer])
    y = np.concatenate(
        [np.ones(n_minority, dtype=np.int64), -np.ones(n_majority, dtype=np.int64)]
    )
    return Dataset(x, y, name=f"ring_in_disk(seed={seed})")
