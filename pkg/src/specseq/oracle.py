"""Exhaustive search over binary sequences for small lengths.

Negating a sequence changes no metric, so the first entry is fixed to +1
and only 2^(n-1) sequences are visited. Enumeration follows Gray-code
order: each step flips a single entry and updates the two band spectra
incrementally, costing O(|message| + |interferer|) per sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoFeasibleError, SizeLimitError
from .problem import DesignProblem, MetricBundle, metric_bundle, null_tolerance, validate_problem
from .spectral import build_partial_dft

DEFAULT_LIMIT = 24


@dataclass(frozen=True)
class OracleResult:
    """Ground-truth optima for all three selection scores."""

    best_by_power: tuple
    best_by_rho: tuple
    best_by_chi: tuple
    n_feasible: int
    n_enumerated: int


def _gray_flips(nbits: int):
    """Yield the bit flipped at each Gray-code step over 2^nbits - 1 steps."""
    prev = 0
    for m in range(1, 1 << nbits):
        code = m ^ (m >> 1)
        yield (code ^ prev).bit_length() - 1
        prev = code


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    """Lexicographic order on sequences with -1 sorting before +1."""
    diff = np.nonzero(a != b)[0]
    if diff.size == 0:
        return False
    return bool(a[diff[0]] < b[diff[0]])


class _Tracker:
    """Keeps the best (score, sequence); ties go to the lex-smaller sequence."""

    def __init__(self):
        self.score = -np.inf
        self.sequence = None

    def offer(self, score: float, seq: np.ndarray):
        if score > self.score or (
            score == self.score and self.sequence is not None and _lex_less(seq, self.sequence)
        ):
            self.score = score
            self.sequence = seq.copy()


def exhaustive_search(p: DesignProblem, n_limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Enumerate every binary sequence and return the feasible optima.

    Raises SizeLimitError when p.n exceeds n_limit and NoFeasibleError
    when no sequence satisfies the interferer bound.
    """
    validate_problem(p)
    if p.n > n_limit:
        raise SizeLimitError(f"n={p.n} exceeds exhaustive-search limit {n_limit}")

    cols_m = build_partial_dft(p.n, p.message).columns
    cols_i = build_partial_dft(p.n, p.interferer).columns
    # row i of these is the update to the band spectrum when s_i flips by 2
    upd_m = 2.0 * cols_m.conj()
    upd_i = 2.0 * cols_i.conj()

    s = np.ones(p.n, dtype=np.int8)
    y_m = cols_m.conj().T @ s.astype(float)
    y_i = cols_i.conj().T @ s.astype(float)
    has_interferer = len(p.interferer) > 0
    tol = null_tolerance(p.n)

    by_power = _Tracker()
    by_rho = _Tracker()
    by_chi = _Tracker()
    n_feasible = 0

    def consider():
        nonlocal n_feasible
        g = float(np.sum(y_i.real**2 + y_i.imag**2))
        if g > p.alpha:
            return
        n_feasible += 1
        mag_m = np.abs(y_m)
        f = float(np.sum(mag_m**2))
        min_m = float(mag_m.min())
        max_m = float(mag_m.max())
        if has_interferer:
            max_i = float(np.max(np.abs(y_i)))
            if max_i <= tol:
                rho = np.inf if min_m > tol else 0.0
            else:
                rho = min_m / max_i
        else:
            rho = np.inf if min_m > tol else 0.0
        chi = 0.0 if max_m <= tol else min_m / max_m
        by_power.offer(f, s)
        by_rho.offer(rho, s)
        by_chi.offer(chi, s)

    consider()
    for bit in _gray_flips(p.n - 1):
        c = bit + 1  # entry 0 stays +1
        s[c] = -s[c]
        step = float(s[c])
        y_m += step * upd_m[c]
        y_i += step * upd_i[c]
        consider()

    if n_feasible == 0:
        raise NoFeasibleError(f"no binary sequence has interferer power <= {p.alpha}")

    def pack(tracker: _Tracker) -> tuple:
        return tracker.sequence, metric_bundle(p, tracker.sequence)

    return OracleResult(
        best_by_power=pack(by_power),
        best_by_rho=pack(by_rho),
        best_by_chi=pack(by_chi),
        n_feasible=n_feasible,
        n_enumerated=1 << (p.n - 1),
    )


def halved_constraint_optimum(p: DesignProblem, n_limit: int = DEFAULT_LIMIT) -> float:
    """Max message power over binary sequences with interferer power <= alpha/2.

    Returns -inf when that feasible set is empty. This is the ground
    truth the relaxation objective must dominate.
    """
    validate_problem(p)
    if p.n > n_limit:
        raise SizeLimitError(f"n={p.n} exceeds exhaustive-search limit {n_limit}")

    cols_m = build_partial_dft(p.n, p.message).columns
    cols_i = build_partial_dft(p.n, p.interferer).columns
    upd_m = 2.0 * cols_m.conj()
    upd_i = 2.0 * cols_i.conj()

    s = np.ones(p.n, dtype=np.int8)
    y_m = cols_m.conj().T @ s.astype(float)
    y_i = cols_i.conj().T @ s.astype(float)
    bound = p.alpha / 2.0
    best = -np.inf

    def consider():
        nonlocal best
        g = float(np.sum(y_i.real**2 + y_i.imag**2))
        if g <= bound:
            f = float(np.sum(y_m.real**2 + y_m.imag**2))
            if f > best:
                best = f

    consider()
    for bit in _gray_flips(p.n - 1):
        c = bit + 1
        s[c] = -s[c]
        step = float(s[c])
        y_m += step * upd_m[c]
        y_i += step * upd_i[c]
        consider()
    return best
