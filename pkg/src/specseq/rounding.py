"""Randomized projection, binary quantization, filtering, and selection.

Each trial draws a standard normal vector v from its own substream
(seed XOR trial index, so trials are reproducible independently of
batching), projects it through the relaxation factor, and quantizes the
signs. Candidates whose interferer power stays below the full tolerance
alpha are feasible; the best feasible candidate under the chosen score
wins, with ties broken by the lower trial index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateObjectiveError, EmptyInterfererError, RankZeroError
from .problem import (
    DesignProblem,
    MetricBundle,
    ScoreKind,
    metric_bundle,
    null_tolerance,
    validate_problem,
)
from .sdp import SdpSolution
from .spectral import GramMatrix, build_partial_dft, gram

#: trials are evaluated in fixed-size blocks; block boundaries never
#: affect results because every trial has its own substream
_CHUNK = 16384

#: objective values at or below this are too degenerate to normalize by
_OBJECTIVE_FLOOR = 1e-12


@dataclass(frozen=True)
class Candidate:
    """One rounded binary sequence with its metrics and approximation ratio."""

    sequence: np.ndarray
    metrics: MetricBundle
    trial_index: int
    gamma: float | None

    def to_json_dict(self) -> dict:
        return {
            "sequence": [int(v) for v in self.sequence],
            "metrics": self.metrics.to_json_dict(),
            "trial_index": self.trial_index,
            "gamma": self.gamma,
        }


@dataclass(frozen=True)
class TrialTable:
    """Per-trial metric arrays retained for experiment harnesses."""

    message_power: np.ndarray
    interferer_power: np.ndarray
    rejection_ratio: np.ndarray
    reciprocal_dynamic_range: np.ndarray
    feasible: np.ndarray
    gamma: np.ndarray | None


@dataclass(frozen=True)
class DesignResult:
    """Outcome of one full randomized design run."""

    best: Candidate | None
    n_feasible: int
    n_trials: int
    feasibility_rate: float
    gamma_min_feasible: float | None
    beta: float
    score_kind: ScoreKind
    trial_table: TrialTable | None = None

    def to_json_dict(self) -> dict:
        return {
            "best": None if self.best is None else self.best.to_json_dict(),
            "n_feasible": self.n_feasible,
            "n_trials": self.n_trials,
            "feasibility_rate": self.feasibility_rate,
            "gamma_min_feasible": self.gamma_min_feasible,
            "beta": self.beta,
            "score_kind": self.score_kind.value,
        }


def sample_candidate(factor: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Quantize one Gaussian projection through the factor to signs.

    Zero entries map to +1, so a zero factor yields the all-ones sequence.
    """
    v = rng.standard_normal(factor.shape[1])
    w = factor @ v
    return np.where(w >= 0.0, 1, -1).astype(np.int8)


def _trial_normals(seed: int, start: int, count: int, n: int) -> np.ndarray:
    v = np.empty((count, n))
    for j in range(count):
        v[j] = np.random.default_rng(seed ^ (start + j)).standard_normal(n)
    return v


def _batch_band_power(signs: np.ndarray, cols: np.ndarray):
    """Per-row band magnitudes and total power for a block of sequences."""
    if cols.shape[1] == 0:
        zeros = np.zeros(signs.shape[0])
        return np.zeros((signs.shape[0], 0)), zeros
    re = signs @ cols.real
    im = signs @ cols.imag
    sq = re**2 + im**2
    return np.sqrt(sq), sq.sum(axis=1)


def _score_array(kind: ScoreKind, f, mag_m, mag_i, tol: float):
    if kind is ScoreKind.MESSAGE_POWER:
        return f
    min_m = mag_m.min(axis=1)
    if kind is ScoreKind.REJECTION_RATIO:
        # nulled interferer with a live message is a perfect notch; a
        # sequence that nulls the message too is worthless (0/0 -> 0)
        perfect = np.where(min_m > tol, np.inf, 0.0)
        if mag_i.shape[1] == 0:
            return perfect
        max_i = mag_i.max(axis=1)
        null = max_i <= tol
        return np.where(null, perfect, min_m / np.where(null, 1.0, max_i))
    max_m = mag_m.max(axis=1)
    null = max_m <= tol
    return np.where(null, 0.0, min_m / np.where(null, 1.0, max_m))


def run_design(
    p: DesignProblem,
    sol: SdpSolution,
    score: ScoreKind = ScoreKind.MESSAGE_POWER,
    retain: bool = False,
) -> DesignResult:
    """Run all p.trials rounding trials and select the best feasible candidate.

    Deterministic given (p, sol): trial ell draws its normal vector from a
    generator seeded with p.seed XOR ell. Set retain=True to keep per-trial
    metric arrays (used by the experiment harnesses); by default only the
    winner and summary statistics are kept.
    """
    validate_problem(p)
    conj_m = build_partial_dft(p.n, p.message).columns.conj()
    conj_i = build_partial_dft(p.n, p.interferer).columns.conj()
    factor_t = np.ascontiguousarray(sol.factor.T)
    objective = sol.objective
    tol = null_tolerance(p.n)

    best_score = -math.inf
    best_seq = None
    best_trial = -1
    n_feasible = 0
    gamma_min = math.inf
    kept = {"f": [], "g": [], "rho": [], "chi": [], "feasible": []} if retain else None

    for start in range(0, p.trials, _CHUNK):
        count = min(_CHUNK, p.trials - start)
        v = _trial_normals(p.seed, start, count, p.n)
        w = v @ factor_t
        signs = np.where(w >= 0.0, 1.0, -1.0)
        mag_m, f = _batch_band_power(signs, conj_m)
        mag_i, g = _batch_band_power(signs, conj_i)
        feasible = g <= p.alpha
        n_feasible += int(feasible.sum())
        scores = _score_array(score, f, mag_m, mag_i, tol)
        masked = np.where(feasible, scores, -np.inf)
        idx = int(np.argmax(masked))
        if masked[idx] > best_score:
            best_score = float(masked[idx])
            best_seq = signs[idx].astype(np.int8)
            best_trial = start + idx
        if feasible.any() and objective > _OBJECTIVE_FLOOR:
            gamma_min = min(gamma_min, float(f[feasible].min()) / objective)
        if retain:
            kept["f"].append(f)
            kept["g"].append(g)
            kept["rho"].append(_score_array(ScoreKind.REJECTION_RATIO, f, mag_m, mag_i, tol))
            kept["chi"].append(
                _score_array(ScoreKind.RECIPROCAL_DYNAMIC_RANGE, f, mag_m, mag_i, tol)
            )
            kept["feasible"].append(feasible)

    best = None
    if best_seq is not None and best_score > -math.inf:
        metrics = metric_bundle(p, best_seq)
        gamma = None
        if objective > _OBJECTIVE_FLOOR:
            gamma = metrics.message_power / objective
        best = Candidate(
            sequence=best_seq, metrics=metrics, trial_index=best_trial, gamma=gamma
        )

    table = None
    if retain:
        f_all = np.concatenate(kept["f"])
        gamma_all = f_all / objective if objective > _OBJECTIVE_FLOOR else None
        table = TrialTable(
            message_power=f_all,
            interferer_power=np.concatenate(kept["g"]),
            rejection_ratio=np.concatenate(kept["rho"]),
            reciprocal_dynamic_range=np.concatenate(kept["chi"]),
            feasible=np.concatenate(kept["feasible"]),
            gamma=gamma_all,
        )

    return DesignResult(
        best=best,
        n_feasible=n_feasible,
        n_trials=p.trials,
        feasibility_rate=n_feasible / p.trials,
        gamma_min_feasible=None if math.isinf(gamma_min) else gamma_min,
        beta=arcsin_trace_ratio(sol, _interferer_gram(p)),
        score_kind=score,
        trial_table=table,
    )


def _interferer_gram(p: DesignProblem) -> GramMatrix:
    return gram(build_partial_dft(p.n, p.interferer))


def quantized_principal_eigenvector(p: DesignProblem, sol: SdpSolution) -> Candidate:
    """Sign-quantize the top eigenvector scaled by sqrt of its eigenvalue."""
    lead = sol.factor[:, 0]
    if sol.rank < 1 or not np.any(lead):
        raise RankZeroError("solution matrix has no positive eigenvalue")
    seq = np.where(lead >= 0.0, 1, -1).astype(np.int8)
    metrics = metric_bundle(p, seq)
    gamma = None
    if sol.objective > _OBJECTIVE_FLOOR:
        gamma = metrics.message_power / sol.objective
    return Candidate(sequence=seq, metrics=metrics, trial_index=-1, gamma=gamma)


def arcsin_trace_ratio(sol, gram_i) -> float:
    """tr(A_I arcsin(S)) / tr(A_I S) with element-wise arcsin.

    Accepts an SdpSolution or a bare unit-diagonal PSD matrix. Entries
    are clamped to [-1, 1] before the arcsin. Returns +inf when the
    denominator is below 1e-12 (the solution spectrum already nulls the
    interferer band).
    """
    matrix = getattr(sol, "matrix", sol)
    a = gram_i.values if isinstance(gram_i, GramMatrix) else np.asarray(gram_i)
    clipped = np.clip(matrix, -1.0, 1.0)
    denom = float(np.sum(a * matrix))
    if abs(denom) <= 1e-12:
        return math.inf
    return float(np.sum(a * np.arcsin(clipped))) / denom


def mcdiarmid_bound(p: DesignProblem) -> float:
    """Concentration bound exp(-alpha^2 / (8 n pi^2 K^2)) on the tail of g.

    This is the bounded-differences bound for the interferer power of a
    quantized projection exceeding (beta + 1) * alpha / pi; a single
    entry flip moves the interferer power by at most 4K.
    """
    k = len(p.interferer)
    if k == 0:
        raise EmptyInterfererError("bound requires a nonempty interferer band")
    return math.exp(-(p.alpha**2) / (8.0 * p.n * math.pi**2 * k**2))


def approximation_ratio(candidate: Candidate, sol: SdpSolution) -> float:
    """Message power of the candidate over the relaxation objective."""
    if sol.objective <= _OBJECTIVE_FLOOR:
        raise DegenerateObjectiveError(
            f"relaxation objective {sol.objective:.3e} too small to normalize by"
        )
    return candidate.metrics.message_power / sol.objective
