"""Shared random-instance helpers for the test suite.

Oracle computations in tests go through numpy.linalg (LAPACK), which is
independent of the package's own Jacobi and power-iteration kernels.
"""

import numpy as np


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = random_complex(rng, d, d)
    return 0.5 * (a + a.conj().T)


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, d, d))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    return random_complex(rng, n, d) / np.sqrt(d)
