"""The duality-map power iteration for the Schatten p->q norm.

One step sends A to J_{p*}( adjoint(phi)( J_q( phi(A) ) ) ), where J_r is
the gradient of the Schatten r-norm. Fixed points of the step map are
exactly the critical points of the ratio ||phi(A)||_q / ||A||_p, and the
iteration converges to the unique maximizer whenever the step map is a
contraction in the Hilbert projective metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateMap, DimMismatch, InvalidInput, ZeroInput
from .cpmap import CPMap, objective
from .hermitian import (
    eig_decompose,
    hermitian_part,
    numerical_rank,
    psd_spectrum,
    require_hermitian,
)
from .hilbert import ContractionReport, contraction_report, hilbert_distance
from .schatten import SchattenExponent, as_exponent, duality_map, schatten_norm

# Eigenvalues of an iterate may drift this far below zero before the run is
# flagged as having left the cone.
_CONE_DRIFT_TOL = 1e-12


class IterationStatus(Enum):
    CONVERGED = "converged"
    MAX_ITER_REACHED = "max_iter_reached"
    LEFT_CONE = "left_cone"


@dataclass(frozen=True, eq=False)
class PowerConfig:
    """Parameters of one power-method run.

    Convergence requires both criteria at once: the Frobenius displacement
    of the iterate below ``tol_fixed_point`` and the objective stall below
    ``tol_objective``. The objective is quadratically flat near the
    maximizer, so it stalls long before the iterate settles; requiring both
    keeps the returned maximizer accurate to the displacement tolerance.
    The trace records which criterion was binding. The default start is
    I/n^(1/p), positive definite and therefore in the same part of the cone
    as the positive definite fixed point whenever one exists.
    """

    p: float
    q: float
    tol_fixed_point: float = 1e-10
    tol_objective: float = 1e-12
    max_iter: int = 1000
    start: np.ndarray | None = None
    seed: int = 0
    with_contraction: bool = True
    contraction_samples: int = 64

    def __post_init__(self):
        as_exponent(self.p)
        as_exponent(self.q)
        if self.tol_fixed_point <= 0 or self.tol_objective <= 0:
            raise InvalidInput("tolerances must be positive")
        if self.max_iter < 1:
            raise InvalidInput("max_iter must be at least 1")
        if self.start is not None:
            dec = psd_spectrum(require_hermitian(self.start))
            if dec.eigenvalues[0] <= 0:
                raise ZeroInput("start matrix must be nonzero")


@dataclass(frozen=True)
class TraceRow:
    k: int
    objective: float
    hilbert_step: float
    frobenius_step: float
    residual: float


@dataclass(frozen=True, eq=False)
class PowerTrace:
    rows: tuple[TraceRow, ...]
    status: IterationStatus
    termination_reason: str | None


@dataclass(frozen=True, eq=False)
class NormResult:
    norm_estimate: float
    maximizer: np.ndarray
    iterations: int
    trace: PowerTrace
    contraction: ContractionReport | None
    warnings: tuple[str, ...]

    @property
    def status(self) -> IterationStatus:
        return self.trace.status


def default_start(n: int, p) -> np.ndarray:
    """I/n^(1/p): positive definite with unit Schatten-p norm."""
    sp = as_exponent(p)
    return np.eye(n, dtype=np.complex128) / n ** (1.0 / sp.p)


def power_step(phi: CPMap, a, p, q) -> np.ndarray:
    """One update of the fixed-point iteration.

    Returns a PSD matrix of unit Schatten-p norm; scale invariant in the
    input. Raises ``DegenerateMap`` when the map annihilates the input,
    since no information about the norm can be extracted from that start.
    """
    sp = as_exponent(p)
    sq = as_exponent(q)
    image = phi.apply(a)
    if numerical_rank(image) == 0:
        raise DegenerateMap("the map annihilates this starting point")
    pulled_back = phi.adjoint_apply(duality_map(image, sq))
    return duality_map(pulled_back, SchattenExponent(sp.p_star, sp.p))


def critical_point_residual(phi: CPMap, a, p, q) -> float:
    """Frobenius norm of adjoint(phi)(J_q(phi(A))) - f(A) * J_p(A).

    Zero exactly at critical points of the objective; the input must be PSD
    with unit Schatten-p norm.
    """
    sp = as_exponent(p)
    sq = as_exponent(q)
    mat = require_hermitian(a)
    if abs(schatten_norm(mat, sp.p) - 1.0) > 1e-9:
        raise InvalidInput("residual is defined on unit Schatten-p norm matrices")
    value = objective(phi, mat, sp, sq)
    image = phi.apply(mat)
    if numerical_rank(image) == 0:
        raise DegenerateMap("the map annihilates this point")
    lhs = phi.adjoint_apply(duality_map(image, sq))
    rhs = value * duality_map(mat, sp)
    return float(np.linalg.norm(lhs - rhs))


def _repair_cone(a: np.ndarray):
    """Re-symmetrize and clamp tiny negative drift; report real escapes."""
    mat = hermitian_part(a)
    vals = np.linalg.eigvalsh(mat)
    if vals[0] < -_CONE_DRIFT_TOL:
        return mat, True
    if vals[0] < 0.0:
        dec = eig_decompose(mat)
        clipped = np.clip(dec.eigenvalues, 0.0, None)
        mat = hermitian_part(
            (dec.eigenvectors * clipped) @ dec.eigenvectors.conj().T
        )
    return mat, False


def run_power_method(phi: CPMap, config: PowerConfig) -> NormResult:
    """Iterate the power step until both convergence criteria hold.

    The returned estimate is the objective at the final iterate, so it is
    always a valid lower bound on the norm; it equals the norm when the
    contraction report certifies the step map as a contraction. Runs in the
    p <= q regime carry an explicit warning because no convergence
    certificate exists there.
    """
    sp = as_exponent(config.p)
    sq = as_exponent(config.q)
    n = phi.input_dim

    if config.start is None:
        a = default_start(n, sp)
    else:
        mat = require_hermitian(config.start)
        if mat.shape[0] != n:
            raise DimMismatch(f"start must be {n}x{n}, got {mat.shape}")
        dec = psd_spectrum(mat)
        if dec.eigenvalues[0] <= 0:
            raise ZeroInput("start matrix must be nonzero")
        a = mat / schatten_norm(mat, sp.p)

    run_warnings: list[str] = []
    if sp.p <= sq.p:
        run_warnings.append(
            f"unproven regime p={sp.p} <= q={sq.p}: convergence to the global "
            "maximum is not certified"
        )

    f_prev = objective(phi, a, sp, sq)
    rows = [TraceRow(0, f_prev, math.nan, math.nan,
                     critical_point_residual(phi, a, sp, sq))]
    status = IterationStatus.MAX_ITER_REACHED
    reason = None
    iterations = 0
    prev_settled = prev_stalled = False

    for k in range(1, config.max_iter + 1):
        nxt = power_step(phi, a, sp, sq)
        nxt, escaped = _repair_cone(nxt)
        if escaped:
            status = IterationStatus.LEFT_CONE
            reason = None
            run_warnings.append(
                f"iterate left the PSD cone at step {k}; this signals a bug, "
                "the run was aborted"
            )
            break
        frobenius_step = float(np.linalg.norm(nxt - a))
        hilbert_step = hilbert_distance(nxt, a).value
        f_cur = objective(phi, nxt, sp, sq)
        residual = critical_point_residual(phi, nxt, sp, sq)
        rows.append(TraceRow(k, f_cur, hilbert_step, frobenius_step, residual))
        a = nxt
        iterations = k
        settled = frobenius_step <= config.tol_fixed_point
        stalled = abs(f_cur - f_prev) <= config.tol_objective
        if settled and stalled:
            status = IterationStatus.CONVERGED
            if prev_stalled and not prev_settled:
                reason = "fixed_point"
            elif prev_settled and not prev_stalled:
                reason = "objective_stall"
            else:
                reason = "both"
            break
        prev_settled, prev_stalled = settled, stalled
        f_prev = f_cur

    contraction = None
    if config.with_contraction:
        contraction = contraction_report(
            phi, sp, sq, samples=config.contraction_samples, seed=config.seed
        )
        if not contraction.step_certified:
            run_warnings.append(
                "step contraction bound "
                f"{contraction.kappa_step_upper:.6g} >= 1: the estimate is a "
                "lower bound on the norm but uniqueness of the limit is not "
                "certified"
            )

    return NormResult(
        norm_estimate=rows[-1].objective,
        maximizer=a,
        iterations=iterations,
        trace=PowerTrace(tuple(rows), status, reason),
        contraction=contraction,
        warnings=tuple(run_warnings),
    )
