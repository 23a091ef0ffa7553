"""Shared sample generators for the test suite."""

import numpy as np

from cpnorm import random_psd, schatten_norm


def well_conditioned_pd(n, seed, ridge=0.1):
    """Full-rank PSD sample with bounded condition number."""
    a = random_psd(n, n, seed)
    scale = float(np.trace(a).real) / n
    return a + ridge * scale * np.eye(n)


def loewner_pair(n, seed):
    """Pair (a, b) with a >= b >= 0 in the Loewner order."""
    rng = np.random.default_rng(seed)
    b = random_psd(n, n, rng)
    return b + random_psd(n, n, rng), b


def shared_range_pair(n, r, seed):
    """Two rank-r PSD matrices with identical range (same part of the cone)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    basis, _ = np.linalg.qr(g)
    a = basis @ well_conditioned_pd(r, rng) @ basis.conj().T
    b = basis @ well_conditioned_pd(r, rng) @ basis.conj().T
    return a, b


def unit_sp(a, p):
    return a / schatten_norm(a, p)
