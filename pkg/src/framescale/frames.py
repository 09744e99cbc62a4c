"""Finite vector-sequence pairs and their frame-theoretic operators.

A pair is two finite sequences (x_k), (y_k) in C^d of equal length.  The
inner product convention is linear in the first slot: <a, b> = sum a_i
conj(b_i).  Vectors are stored as rows of (n, d) arrays.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import hermitian_extreme_eig, top_singular_triplet

MIN_VECTOR_NORM = 1e-14


def _check_vectors(vectors: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(vectors, dtype=np.complex128)
    if v.ndim != 2:
        raise ValueError(f"{name}: expected shape (n, d), got {v.shape}")
    if v.shape[0] < 1 or v.shape[1] < 1:
        raise ValueError(f"{name}: need at least one vector in dimension >= 1")
    if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
        raise ValueError(f"{name}: non-finite entries")
    norms = np.sqrt(np.sum(np.abs(v) ** 2, axis=1))
    if np.any(norms <= MIN_VECTOR_NORM):
        raise ValueError(f"{name}: vector norms must exceed {MIN_VECTOR_NORM:g}")
    return v


@dataclass(frozen=True)
class FramePair:
    """Two equal-length sequences of nonzero vectors in the same C^d."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = _check_vectors(self.xs, "xs")
        ys = _check_vectors(self.ys, "ys")
        if xs.shape != ys.shape:
            raise ValueError(f"shape mismatch: xs {xs.shape} vs ys {ys.shape}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    @property
    def dim(self) -> int:
        return self.xs.shape[1]


class BesselBounds(NamedTuple):
    lower: float
    upper: float
    is_frame: bool


def frame_operator(vectors: np.ndarray) -> np.ndarray:
    """Sum of rank-one maps v_k v_k^*; Hermitian positive semidefinite."""
    v = _check_vectors(vectors, "vectors")
    return np.einsum("ki,kj->ij", v, v.conj())


def bessel_and_frame_bounds(vectors: np.ndarray,
                            frame_tol: float = 1e-10) -> BesselBounds:
    """Optimal Bessel bound and lower frame bound of a vector sequence.

    The upper bound is the largest eigenvalue of the frame operator, the
    lower bound the smallest; is_frame reports whether the lower bound
    clears frame_tol.
    """
    s = frame_operator(vectors)
    lam_min, lam_max, _, _ = hermitian_extreme_eig(s)
    lam_min = max(lam_min, 0.0)
    return BesselBounds(lam_min, lam_max, lam_min > frame_tol)


def pair_operator(pair: FramePair) -> np.ndarray:
    """The map u -> sum_k <u, y_k> x_k as a d x d matrix."""
    return np.einsum("ki,kj->ij", pair.xs, pair.ys.conj())


def is_schauder_identity(pair: FramePair, tol: float = 1e-10) -> bool:
    """Whether the pair reproduces every vector: sum_k <u, y_k> x_k = u."""
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    t = pair_operator(pair) - np.eye(pair.dim)
    sigma, _, _ = top_singular_triplet(t, tol=min(1e-10, max(tol * 1e-2, 1e-14)))
    return sigma <= tol
