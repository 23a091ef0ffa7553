"""Schatten norms and the norm's gradient (duality) map on the PSD cone."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidExponent, ZeroInput
from .hermitian import hermitian_part, psd_spectrum, require_hermitian


@dataclass(frozen=True)
class SchattenExponent:
    """Exponent p in (1, inf) paired with its dual p/(p-1)."""

    p: float
    p_star: float


def dual_exponent(p) -> SchattenExponent:
    """Build the validated exponent pair with 1/p + 1/p_star = 1."""
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise InvalidExponent(f"exponent must lie in the open interval (1, inf), got {p}")
    return SchattenExponent(p, p / (p - 1.0))


def as_exponent(p) -> SchattenExponent:
    if isinstance(p, SchattenExponent):
        return p
    return dual_exponent(p)


def schatten_norm(a, p) -> float:
    """tr(|A|^p)^(1/p), the l^p norm of the eigenvalue vector of Hermitian A.

    The endpoints are meaningful here: p=1 is the trace norm and p=inf the
    operator norm. The duality map below requires 1 < p < inf.
    """
    if isinstance(p, SchattenExponent):
        p = p.p
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise InvalidExponent(f"Schatten norms need p >= 1, got {p}")
    vals = np.abs(np.linalg.eigvalsh(require_hermitian(a)))
    top = float(vals.max())
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    if p == 1.0:
        return float(vals.sum())
    return float(top * np.sum((vals / top) ** p) ** (1.0 / p))


def duality_map(a, p) -> np.ndarray:
    """Gradient of the Schatten p-norm at a nonzero PSD matrix.

    Returns the unique PSD matrix B with <A, B> = ||A||_p and ||B||_{p*} = 1,
    obtained by raising the spectrum to the power p-1 and normalizing in the
    dual norm. Zero eigenvalues map to zero (the continuous extension valid
    for p > 1), and the result is invariant under positive scaling of A.
    """
    exp = as_exponent(p)
    dec = psd_spectrum(a)
    top = dec.eigenvalues[0]
    if top <= 0.0:
        raise ZeroInput("duality map is undefined at the zero matrix")
    mu = dec.eigenvalues / top
    w = mu ** (exp.p - 1.0)
    w = w / np.sum(w**exp.p_star) ** (1.0 / exp.p_star)
    return hermitian_part((dec.eigenvectors * w) @ dec.eigenvectors.conj().T)
