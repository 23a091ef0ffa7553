"""On-disk formats and seeded map generation.

Map files and run records are canonical JSON: sorted keys, two-space
indent, complex entries as [re, im] pairs, non-finite floats as strings.
Parsing followed by serialization is byte-identical on canonical input.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import __about__
from .config import subseed
from .errors import InvalidInput
from .cpmap import CPMap, StructuralVerdict, embed_nonnegative_matrix
from .hilbert import ContractionReport, DiagnosticsReport
from .oracle import CrossValidation, OracleResult
from .power import NormResult, PowerConfig, PowerTrace

FORMAT_VERSION = 1

GENERATOR_KINDS = ("generic", "positively_improving", "diagonal_from_matrix")


@dataclass(frozen=True, eq=False)
class MapFile:
    """Parsed map file: Kraus operators plus free-form metadata."""

    version: int
    n: int
    m: int
    kraus: tuple
    metadata: dict

    def to_cpmap(self) -> CPMap:
        return CPMap(self.kraus)

    @classmethod
    def from_cpmap(cls, phi: CPMap, metadata: dict | None = None) -> "MapFile":
        return cls(
            version=FORMAT_VERSION,
            n=phi.input_dim,
            m=phi.output_dim,
            kraus=phi.kraus,
            metadata=dict(metadata or {}),
        )


def encode_complex_matrix(a) -> list:
    mat = np.asarray(a, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def decode_complex_matrix(entries, rows: int, cols: int, where: str) -> np.ndarray:
    try:
        arr = np.asarray(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{where}: entries must be [re, im] number pairs ({exc})")
    if arr.shape != (rows, cols, 2):
        raise InvalidInput(
            f"{where}: expected shape {rows}x{cols} of [re, im] pairs, "
            f"got {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def _require_field(obj: dict, name: str, where: str):
    if name not in obj:
        raise InvalidInput(f"{where}: missing required field '{name}'")
    return obj[name]


def parse_map(text: str, source: str = "<string>") -> MapFile:
    """Parse a map file, reporting the offending line or field on failure."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(
            f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        )
    if not isinstance(obj, dict):
        raise InvalidInput(f"{source}: top level must be an object")
    version = _require_field(obj, "version", source)
    if version != FORMAT_VERSION:
        raise InvalidInput(f"{source}: unsupported version {version!r}")
    n = _require_field(obj, "n", source)
    m = _require_field(obj, "m", source)
    if not (isinstance(n, int) and isinstance(m, int) and n >= 1 and m >= 1):
        raise InvalidInput(f"{source}: fields 'n' and 'm' must be positive integers")
    kraus_raw = _require_field(obj, "kraus", source)
    if not isinstance(kraus_raw, list) or not kraus_raw:
        raise InvalidInput(f"{source}: field 'kraus' must be a nonempty list")
    kraus = tuple(
        decode_complex_matrix(entry, m, n, f"{source}: kraus[{i}]")
        for i, entry in enumerate(kraus_raw)
    )
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise InvalidInput(f"{source}: field 'metadata' must be an object")
    return MapFile(version=version, n=n, m=m, kraus=kraus, metadata=metadata)


def serialize_map(mapfile: MapFile) -> str:
    obj = {
        "version": mapfile.version,
        "n": mapfile.n,
        "m": mapfile.m,
        "kraus": [encode_complex_matrix(v) for v in mapfile.kraus],
        "metadata": mapfile.metadata,
    }
    return canonical_json(obj)


def load_map(path) -> MapFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_map(fh.read(), source=str(path))


def save_map(mapfile: MapFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_map(mapfile))


def load_matrix(path) -> np.ndarray:
    """Read a plain 2-d JSON array of reals (nonnegative-matrix input files)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            )
    try:
        mat = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{path}: expected a 2-d array of numbers ({exc})")
    if mat.ndim != 2:
        raise InvalidInput(f"{path}: expected a 2-d array, got shape {mat.shape}")
    return mat


def load_hermitian(path) -> np.ndarray:
    """Read an n x n matrix of [re, im] pairs (start-matrix files)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            )
    arr = np.asarray(obj, dtype=object)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise InvalidInput(f"{path}: expected an n x n matrix of [re, im] pairs")
    return decode_complex_matrix(obj, arr.shape[0], arr.shape[1], str(path))


def generate_map(n: int, m: int, k: int, seed: int, kind: str = "generic",
                 matrix=None) -> MapFile:
    """Deterministically generate a map file of the requested kind.

    ``generic`` draws k Gaussian Kraus operators (k <= n*m enforced).
    ``positively_improving`` adds a scaled depolarizing block to k generic
    operators so every nonzero PSD input maps to a positive definite output.
    ``diagonal_from_matrix`` embeds a nonnegative matrix, ignoring n, m, k.
    """
    if kind not in GENERATOR_KINDS:
        raise InvalidInput(f"unknown kind {kind!r}; expected one of {GENERATOR_KINDS}")

    if kind == "diagonal_from_matrix":
        if matrix is None:
            raise InvalidInput("kind 'diagonal_from_matrix' requires a matrix")
        phi = embed_nonnegative_matrix(matrix)
        metadata = {
            "kind": kind,
            "name": f"diagonal-embedding-{phi.output_dim}x{phi.input_dim}",
            "matrix": [[float(x) for x in row] for row in np.asarray(matrix)],
        }
        return MapFile.from_cpmap(phi, metadata)

    if n < 1 or m < 1 or k < 1:
        raise InvalidInput(f"dimensions must be positive, got n={n} m={m} k={k}")
    if kind == "generic" and k > n * m:
        raise InvalidInput(f"generic kind requires k <= n*m = {n * m}, got k={k}")

    rng = subseed(seed, "generate", kind)
    ops = [
        (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)
        for _ in range(k)
    ]
    if kind == "positively_improving":
        # eps-scaled depolarizing block: adds eps * tr(A) * I to every output
        eps = 0.2
        for i in range(m):
            for j in range(n):
                v = np.zeros((m, n), dtype=np.complex128)
                v[i, j] = math.sqrt(eps)
                ops.append(v)
    metadata = {"kind": kind, "name": f"{kind}-n{n}-m{m}-k{k}-seed{seed}", "seed": seed}
    return MapFile(
        version=FORMAT_VERSION,
        n=n,
        m=m,
        kraus=tuple(np.asarray(v) for v in ops),
        metadata=metadata,
    )


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        f = float(x)
        if math.isfinite(f):
            return f
        if math.isnan(f):
            return "nan"
        return "inf" if f > 0 else "-inf"
    if x is None or isinstance(x, str):
        return x
    raise TypeError(f"cannot serialize {type(x)!r}")


def canonical_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def encode_verdict(v: StructuralVerdict) -> dict:
    return {
        "property": v.property,
        "verdict": v.verdict,
        "trials": v.trials,
        "witness": None if v.witness is None else encode_complex_matrix(v.witness),
        "margin": v.margin,
    }


def encode_contraction(c: ContractionReport | None) -> dict | None:
    if c is None:
        return None
    return {
        "diameter_lower_bound": c.diameter_lower_bound,
        "kappa_lower": c.kappa_lower,
        "sample_count": c.sample_count,
        "diameter_upper_bound": c.diameter_upper_bound,
        "kappa_upper": c.kappa_upper,
        "improving": c.improving,
        "adjoint": encode_contraction(c.adjoint),
        "kappa_step_upper": c.kappa_step_upper,
        "step_certified": c.step_certified,
        "upper_source": c.upper_source,
    }


def encode_trace_summary(trace: PowerTrace) -> dict:
    last = trace.rows[-1]
    return {
        "rows": len(trace.rows),
        "status": trace.status,
        "termination_reason": trace.termination_reason,
        "final_objective": last.objective,
        "final_frobenius_step": last.frobenius_step,
        "final_hilbert_step": last.hilbert_step,
        "final_residual": last.residual,
    }


def encode_norm_result(result: NormResult) -> dict:
    return {
        "norm_estimate": result.norm_estimate,
        "maximizer": encode_complex_matrix(result.maximizer),
        "iterations": result.iterations,
        "status": result.trace.status,
        "termination_reason": result.trace.termination_reason,
        "warnings": list(result.warnings),
        "trace": encode_trace_summary(result.trace),
        "contraction": encode_contraction(result.contraction),
    }


def encode_diagnostics(report: DiagnosticsReport) -> dict:
    return {
        "p": report.p,
        "q": report.q,
        "fully_indecomposable": encode_verdict(report.fully_indecomposable),
        "positively_improving": encode_verdict(report.positively_improving),
        "adjoint_positively_improving": encode_verdict(
            report.adjoint_positively_improving
        ),
        "contraction": encode_contraction(report.contraction),
    }


def encode_oracle(result: OracleResult) -> dict:
    return {
        "best_value": result.best_value,
        "best_point": encode_complex_matrix(result.best_point),
        "restarts": result.restarts,
        "budget_used": result.budget_used,
        "method": result.method,
        "best_from_psd_starts": result.best_from_psd_starts,
        "best_from_hermitian_starts": result.best_from_hermitian_starts,
    }


def encode_cross_validation(cv: CrossValidation) -> dict:
    return {
        "status": cv.status,
        "certified": cv.certified,
        "power_value": cv.power_value,
        "oracle_value": cv.oracle_value,
        "difference": cv.difference,
        "tol": cv.tol,
        "maximizer_distance": cv.maximizer_distance,
        "messages": list(cv.messages),
    }


def encode_config(config: PowerConfig) -> dict:
    return {
        "p": config.p,
        "q": config.q,
        "tol_fixed_point": config.tol_fixed_point,
        "tol_objective": config.tol_objective,
        "max_iter": config.max_iter,
        "start": None if config.start is None else encode_complex_matrix(config.start),
        "seed": config.seed,
        "with_contraction": config.with_contraction,
        "contraction_samples": config.contraction_samples,
    }


def build_run_record(mapfile: MapFile, command: str, inputs: dict, **sections) -> dict:
    """Assemble a self-contained record: tool version, input echo, results."""
    record = {
        "version": FORMAT_VERSION,
        "tool": {"name": "cpnorm", "version": __about__.__version__},
        "command": command,
        "input": {
            "map": {
                "version": mapfile.version,
                "n": mapfile.n,
                "m": mapfile.m,
                "kraus": [encode_complex_matrix(v) for v in mapfile.kraus],
                "metadata": mapfile.metadata,
            },
            **inputs,
        },
    }
    record.update(sections)
    return record


def write_trace(path, trace: PowerTrace) -> None:
    """Emit per-iteration rows as tab-delimited text for direct plotting."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# k\tobjective\thilbert_step\tfrobenius_step\tresidual\n")
        for row in trace.rows:
            fh.write(
                f"{row.k}\t{row.objective!r}\t{row.hilbert_step!r}"
                f"\t{row.frobenius_step!r}\t{row.residual!r}\n"
            )
