"""Solver for the lifted relaxation of the binary design problem.

The relaxation maximizes tr(A_M S) over unit-diagonal PSD matrices S
subject to tr(A_I S) <= alpha/2, where A_M and A_I are the real Gram
matrices of the message and interferer bands. The halved bound mirrors
the feasibility analysis of the rounding step; the rounding filter
itself uses the full alpha.

Architecture: the single trace inequality is dualized with a scalar
multiplier lam, found by bisection. Each inner problem
max tr((A_M - lam*A_I) S) over unit-diagonal PSD matrices is the
classic max-cut style SDP and is solved by ADMM: the S-update projects
onto the unit-diagonal affine set, the Z-update projects onto the PSD
cone, and the penalty self-adapts by residual balancing. Inner solves
are warm-started across bisection steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import InfeasibleRelaxationError, NonConvergenceError
from .problem import DesignProblem, validate_problem
from .spectral import GramMatrix, build_partial_dft, gram


@dataclass(frozen=True)
class SolverConfig:
    max_outer_iters: int = 5000
    primal_tol: float = 1e-6
    dual_tol: float = 1e-6
    penalty: float = 1.0
    bisection_tol: float = 1e-5
    max_bisection: int = 60

    def __post_init__(self):
        for name in ("primal_tol", "dual_tol", "penalty", "bisection_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class SdpSolution:
    """Solution of the relaxation, polished to exact unit diagonal.

    matrix            n x n real symmetric PSD with unit diagonal
    objective         tr(A_M matrix)
    interferer_trace  tr(A_I matrix), at most alpha/2 up to solver slack
    factor            U * sqrt(eigenvalues) columnwise, so factor @ factor.T
                      reconstructs matrix and w = factor @ v has covariance
                      matrix for standard normal v
    rank              count of eigenvalues above the relative rank threshold
    kkt_residual      max of primal violations, dual stationarity, and
                      normalized complementary slackness
    dual_multiplier   nonnegative multiplier of the trace inequality
    """

    matrix: np.ndarray
    objective: float
    interferer_trace: float
    factor: np.ndarray
    rank: int
    kkt_residual: float
    dual_multiplier: float


class _AdmmState:
    """Mutable warm-start state carried across bisection steps."""

    def __init__(self, n: int, penalty: float):
        self.s = np.eye(n)
        self.z = np.eye(n)
        self.u = np.zeros((n, n))
        self.rho = penalty


def _psd_project(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    np.maximum(w, 0.0, out=w)
    return (v * w) @ v.T


def _polish(z: np.ndarray) -> np.ndarray:
    """Rescale a PSD iterate to exact unit diagonal (congruence keeps PSD)."""
    b = (z + z.T) / 2.0
    d = np.diag(b).copy()
    d[d <= 0.0] = 1.0
    inv = 1.0 / np.sqrt(d)
    b = b * inv[:, None] * inv[None, :]
    np.fill_diagonal(b, 1.0)
    return b


def _admm_maxcut(a: np.ndarray, cfg: SolverConfig, state: _AdmmState | None = None):
    """max tr(a S) s.t. diag(S) = 1, S PSD. Returns (polished S, state, iters)."""
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    g = a / scale
    if state is None:
        state = _AdmmState(n, cfg.penalty)
    z, u, rho = state.z, state.u, state.rho
    s_mat = state.s
    for it in range(1, cfg.max_outer_iters + 1):
        s_mat = z - u + g / rho
        np.fill_diagonal(s_mat, 1.0)
        v = s_mat + u
        z_new = _psd_project(v)
        u = v - z_new
        r_norm = float(np.linalg.norm(s_mat - z_new))
        d_norm = rho * float(np.linalg.norm(z_new - z))
        z = z_new
        eps_pri = cfg.primal_tol * max(1.0, float(np.linalg.norm(s_mat)), float(np.linalg.norm(z)))
        eps_dual = cfg.dual_tol * max(1.0, rho * float(np.linalg.norm(u)))
        if r_norm <= eps_pri and d_norm <= eps_dual:
            state.s, state.z, state.u, state.rho = s_mat, z, u, rho
            return _polish(z), state, it
        # balance residuals at a coarse cadence during a warmup window
        # only: per-iteration changes stall convergence, and near-cyclic
        # rho flapping can sustain a limit cycle indefinitely, while
        # fixed-penalty iterations are guaranteed to converge
        if it % 10 == 0 and it <= 1000:
            if r_norm > 10.0 * d_norm and rho < 1e6:
                rho *= 2.0
                u = u / 2.0
            elif d_norm > 10.0 * r_norm and rho > 1e-6:
                rho /= 2.0
                u = u * 2.0
    raise NonConvergenceError(
        f"ADMM did not reach tolerance in {cfg.max_outer_iters} iterations "
        f"(primal {r_norm:.3e}, dual {d_norm:.3e})"
    )


def inner_maxcut_sdp(a, cfg: SolverConfig = SolverConfig()) -> np.ndarray:
    """Solve max tr(a S) over unit-diagonal PSD matrices S.

    Accepts a GramMatrix or a plain symmetric ndarray; returns the
    polished solution matrix with exact unit diagonal.
    """
    arr = a.values if isinstance(a, GramMatrix) else np.asarray(a, dtype=float)
    matrix, _, _ = _admm_maxcut(arr, cfg)
    return matrix


def _kkt_value(matrix, a_m, a_i, lam, bound, alpha) -> float:
    """Max KKT violation of a candidate solution (see SdpSolution docstring)."""
    atil = a_m - lam * a_i
    nu = np.sum(atil * matrix, axis=1)  # (atil @ matrix) diagonal, matrix symmetric
    dual_gap = atil - np.diag(nu)
    eig_dual = np.linalg.eigvalsh(dual_gap)
    stationarity = max(0.0, float(eig_dual[-1])) / max(1.0, float(np.linalg.norm(atil)))
    eig_primal = np.linalg.eigvalsh((matrix + matrix.T) / 2.0)
    min_eig_violation = max(0.0, -float(eig_primal[0]))
    diag_violation = float(np.max(np.abs(np.diag(matrix) - 1.0)))
    itrace = float(np.sum(a_i * matrix))
    ineq_violation = max(0.0, itrace - bound)
    slackness = lam * abs(itrace - bound) / max(1.0, alpha)
    return max(diag_violation, ineq_violation, min_eig_violation, stationarity, slackness)


def _assemble(matrix, a_m, a_i, lam, bound, alpha) -> SdpSolution:
    ef = spectral.eigh(matrix)
    factor = ef.eigenvectors * np.sqrt(np.maximum(ef.eigenvalues, 0.0))[None, :]
    matrix.setflags(write=False)
    factor.setflags(write=False)
    return SdpSolution(
        matrix=matrix,
        objective=float(np.sum(a_m * matrix)),
        interferer_trace=float(np.sum(a_i * matrix)),
        factor=factor,
        rank=ef.rank,
        kkt_residual=_kkt_value(matrix, a_m, a_i, lam, bound, alpha),
        dual_multiplier=lam,
    )


def dual_bisection(p: DesignProblem, cfg: SolverConfig = SolverConfig()):
    """Find the multiplier of the trace inequality by bisection.

    Returns (lam, SdpSolution). lam = 0 when the unconstrained inner
    solution already satisfies the halved bound; otherwise lam > 0 with
    tr(A_I S(lam)) within bisection_tol * max(1, alpha) below the bound.
    Raises InfeasibleRelaxationError when doubling lam max_bisection times
    never drives the interferer trace under the bound.
    """
    validate_problem(p)
    a_m = gram(build_partial_dft(p.n, p.message)).values
    a_i = gram(build_partial_dft(p.n, p.interferer)).values
    bound = p.alpha / 2.0
    comp_tol = 1e-6

    matrix, state, _ = _admm_maxcut(a_m, cfg)
    itrace = float(np.sum(a_i * matrix))
    if itrace <= bound + 10.0 * cfg.primal_tol:
        return 0.0, _assemble(matrix, a_m, a_i, 0.0, bound, p.alpha)

    lo, mat_lo, tr_lo = 0.0, matrix, itrace
    hi = 1.0
    mat_hi = None
    tr_hi = itrace
    for _ in range(cfg.max_bisection):
        mat_hi, state, _ = _admm_maxcut(a_m - hi * a_i, cfg, state)
        tr_hi = float(np.sum(a_i * mat_hi))
        if tr_hi <= bound:
            break
        lo, mat_lo, tr_lo = hi, mat_hi, tr_hi
        hi *= 2.0
    else:
        raise InfeasibleRelaxationError(
            f"interferer trace floor {tr_hi:.6g} stays above alpha/2 = {bound:.6g}"
        )

    tol = cfg.bisection_tol * max(1.0, p.alpha)
    for _ in range(cfg.max_bisection):
        gap = bound - tr_hi
        if gap <= tol or hi * gap <= comp_tol * max(1.0, p.alpha):
            break
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
        mid = (lo + hi) / 2.0
        mat_mid, state, _ = _admm_maxcut(a_m - mid * a_i, cfg, state)
        tr_mid = float(np.sum(a_i * mat_mid))
        if tr_mid <= bound:
            hi, mat_hi, tr_hi = mid, mat_mid, tr_mid
        else:
            lo, mat_lo, tr_lo = mid, mat_mid, tr_mid

    gap = bound - tr_hi
    if gap > tol:
        if hi * gap > comp_tol * max(1.0, p.alpha) and tr_lo > bound:
            # The trace jumps across the bound at the critical multiplier:
            # the inner problem there has a flat optimal face, and both
            # bracket solutions lie on it. The face point meeting the
            # bound with equality is their convex combination, and it is
            # optimal for the constrained program.
            t = gap / (tr_lo - tr_hi)
            blended = (1.0 - t) * mat_hi + t * mat_lo
            lam = (lo + hi) / 2.0
            return lam, _assemble(blended, a_m, a_i, lam, bound, p.alpha)
        # Constraint is slack for every positive multiplier: it is
        # inactive, and only the first unconstrained solve landed on a
        # violating optimum. Re-derive the multiplier-free solution.
        mat0, state, _ = _admm_maxcut(a_m, cfg, state)
        tr0 = float(np.sum(a_i * mat0))
        if tr0 <= bound + 10.0 * cfg.primal_tol:
            return 0.0, _assemble(mat0, a_m, a_i, 0.0, bound, p.alpha)
    return hi, _assemble(mat_hi, a_m, a_i, hi, bound, p.alpha)


def solve_relaxation(p: DesignProblem, cfg: SolverConfig = SolverConfig()) -> SdpSolution:
    """Solve the relaxation for a validated problem and certify it by KKT residual."""
    _, solution = dual_bisection(p, cfg)
    return solution


def kkt_residuals(solution: SdpSolution, p: DesignProblem) -> float:
    """Recompute the KKT residual of a solution from scratch.

    The value is the max of: diagonal violation, inequality violation
    against alpha/2, negative-eigenvalue magnitude, dual stationarity
    (positive part of A_M - lam*A_I - Diag(nu), nu recovered from the
    solution, normalized by the objective matrix norm), and complementary
    slackness |lam * (tr(A_I S) - alpha/2)| / max(1, alpha).
    """
    a_m = gram(build_partial_dft(p.n, p.message)).values
    a_i = gram(build_partial_dft(p.n, p.interferer)).values
    return _kkt_value(
        solution.matrix, a_m, a_i, solution.dual_multiplier, p.alpha / 2.0, p.alpha
    )
