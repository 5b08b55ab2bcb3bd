"""Descent to a delta-stationary point of the regret objective f.

One iteration: rebalance the profile so both players' regrets agree, solve
the minimax direction program for the steepest feasible descent direction
(value V and a dual witness), stop once V - f >= -delta, otherwise take the
closed-form line-search step.  The dual witness attached to the returned
stationary point feeds every adjustment method downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game import SUPPORT_TOL, Game, Profile, mixed, regrets, supports
from .lp import EQ, GE, LE, MINIMIZE, OPTIMAL, LinearProgram, LpNumericalError, _as_strategy, solve_lp

# |fR - fC| band inside which a profile counts as balanced and the balance
# LP is skipped.
BALANCE_BAND = 1e-7
# fR/fC proximity under which the derivative takes the max of both branches.
EQUAL_REGRET_TOL = 1e-9


@dataclass(frozen=True)
class DualSolution:
    """Max-min witness (rho, w, z) of the direction program.

    w is supported on the row player's best responses to y, z on the column
    player's best responses to x; rho in [0,1] mixes the two regret terms.
    """

    rho: float
    w: np.ndarray
    z: np.ndarray


@dataclass(frozen=True)
class DirectionResult:
    """Outcome of the minimax direction program at a balanced profile."""

    x_new: np.ndarray
    y_new: np.ndarray
    value: float
    dual: DualSolution


@dataclass(frozen=True)
class StationaryPoint:
    profile: Profile
    dual: DualSolution
    f: float
    value: float
    lambda_star: float
    mu_star: float
    iterations: int
    f_history: tuple = ()


@dataclass(frozen=True)
class StationarityReport:
    ok: bool
    failures: tuple
    A: np.ndarray
    B: np.ndarray


class DescentBudgetError(RuntimeError):
    """Iteration budget exhausted; carries the best profile reached so far."""

    def __init__(self, profile: Profile, f: float, iterations: int):
        super().__init__(
            f"descent did not reach a stationary point in {iterations} iterations"
            f" (best f={f:.6g})"
        )
        self.profile = profile
        self.f = f
        self.iterations = iterations


def bilinear_matrix(game: Game, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """The (m+n)x(m+n) matrix G with T = (rho*w, (1-rho)*z)' G (y', x')."""
    R, C = game.R, game.C
    m, n = game.m, game.n
    xR = x @ R
    Cy = C @ y
    xRy = float(xR @ y)
    xC = x @ C
    Ry = R @ y
    xCy = float(xC @ y)
    top = np.hstack([R - np.tile(xR, (m, 1)), np.tile(xRy - Ry, (m, 1))])
    bot = np.hstack([np.tile(xCy - xC, (n, 1)), C.T - np.tile(Cy, (n, 1))])
    return np.vstack([top, bot])


def balance(game: Game, p: Profile, tol: float = SUPPORT_TOL) -> Profile:
    """Equalize fR and fC by re-optimizing the lagging player's strategy.

    With fR > fC the row strategy is re-solved to minimize fR subject to
    fR >= fC (one linear row per opponent column); the symmetric program runs
    when fC > fR.  Profiles already within BALANCE_BAND are returned as is.
    """
    r = regrets(game, p)
    if abs(r.fR - r.fC) <= BALANCE_BAND:
        return p
    R, C = game.R, game.C
    x, y = p
    if r.fR > r.fC:
        Ry = R @ y
        Cy = C @ y
        rows = []
        for j in range(game.n):
            rows.append((Ry + C[:, j] - Cy, LE, float(Ry.max())))
        rows.append((np.ones(game.m), EQ, 1.0))
        sol = solve_lp(LinearProgram(-Ry, MINIMIZE, rows))
        if sol.status != OPTIMAL:
            raise LpNumericalError(f"balance LP ended {sol.status}")
        return Profile(_as_strategy(sol.x), y)
    xR = x @ R
    xC = x @ C
    rows = []
    for i in range(game.m):
        rows.append((R[i, :] - xR + xC, LE, float(xC.max())))
    rows.append((np.ones(game.n), EQ, 1.0))
    sol = solve_lp(LinearProgram(-xC, MINIMIZE, rows))
    if sol.status != OPTIMAL:
        raise LpNumericalError(f"balance LP ended {sol.status}")
    return Profile(x, _as_strategy(sol.x))


def _support_rows(game: Game, p: Profile, tol: float):
    sup = supports(game, p, tol)
    return list(sup.row_best) + [game.m + int(j) for j in sup.col_best], sup


def _dual_from_weights(game: Game, weights: np.ndarray, row_ids, sup) -> DualSolution:
    m, n = game.m, game.n
    u = np.clip(weights, 0.0, None)
    total = u.sum()
    if total <= 0:
        u = np.ones_like(u)
        total = u.sum()
    u /= total
    w_full = np.zeros(m)
    z_full = np.zeros(n)
    # row_ids lists row-player ids first (0..m-1), then n-shifted column ids.
    nw = len(sup.row_best)
    for uk, i in zip(u[:nw], sup.row_best):
        w_full[int(i)] = uk
    for uk, j in zip(u[nw:], sup.col_best):
        z_full[int(j)] = uk
    rho = float(w_full.sum())
    if rho > SUPPORT_TOL:
        w = w_full / w_full.sum()
    else:  # degenerate certificate: any best-response row works
        w = np.zeros(m)
        w[sup.row_best] = 1.0 / len(sup.row_best)
    if z_full.sum() > SUPPORT_TOL:
        z = z_full / z_full.sum()
    else:
        z = np.zeros(n)
        z[sup.col_best] = 1.0 / len(sup.col_best)
    return DualSolution(rho=min(max(rho, 0.0), 1.0), w=mixed(w), z=mixed(z))


def direction(
    game: Game,
    p: Profile,
    tol: float = SUPPORT_TOL,
    canonicalize: bool = False,
) -> DirectionResult:
    """Solve min over (x',y') of max over (rho,w,z) of T at a balanced profile.

    The max side reduces to the rows of G indexed by the two best-response
    sets, so the program is the LP  min v  s.t.  G_k (y';x') <= v  on those
    rows with (x',y') on the simplices.  The dual weights on the rows give
    (rho, w, z).  With ``canonicalize`` a second LP picks, among all optimal
    dual witnesses, the one minimizing the largest deviation of the induced
    coefficient vectors from their minima; this equalized witness is the one
    worst-case-tight instances are built around, and it is unique there.
    """
    m, n = game.m, game.n
    G = bilinear_matrix(game, p.x, p.y)
    row_ids, sup = _support_rows(game, p, tol)
    k = len(row_ids)

    # Variables: y' (n), x' (m), v (free).
    nv = n + m + 1
    c = np.zeros(nv)
    c[-1] = 1.0
    rows = []
    for rid in row_ids:
        a = np.zeros(nv)
        a[: n + m] = -G[rid]
        a[-1] = 1.0
        rows.append((a, GE, 0.0))
    ay = np.zeros(nv)
    ay[:n] = 1.0
    rows.append((ay, EQ, 1.0))
    ax = np.zeros(nv)
    ax[n : n + m] = 1.0
    rows.append((ax, EQ, 1.0))
    lower = [0.0] * (n + m) + [None]
    sol = solve_lp(LinearProgram(c, MINIMIZE, rows, lower=lower))
    if sol.status != OPTIMAL:
        raise LpNumericalError(f"direction LP ended {sol.status}")
    value = float(sol.objective)
    y_new = _as_strategy(sol.x[:n])
    x_new = _as_strategy(sol.x[n : n + m])
    weights = sol.duals[:k]

    if canonicalize:
        try:
            refined = _equalized_dual_weights(G, row_ids, n, m, value)
        except LpNumericalError:
            refined = None
        if refined is not None:
            weights = refined
    dual = _dual_from_weights(game, weights, row_ids, sup)
    return DirectionResult(x_new=x_new, y_new=y_new, value=value, dual=dual)


def _equalized_dual_weights(G, row_ids, n, m, value):
    """Among optimal dual weights, minimize the worst suppmin slack.

    Feasible set: u >= 0 on the best-response rows, sum u = 1, and the
    column minima of u'G split into dy + dx >= value (so u stays on the
    dual-optimal face); the objective presses every column of u'G down
    toward its group minimum.
    """
    k = len(row_ids)
    Gs = G[row_ids]  # k x (n+m)
    # Variables: u (k), dy, dx (free), s (>= 0).
    nv = k + 3
    c = np.zeros(nv)
    c[-1] = 1.0
    rows = []
    for col in range(n + m):
        a = np.zeros(nv)
        a[:k] = Gs[:, col]
        a[k + (0 if col < n else 1)] = -1.0
        rows.append((a, GE, 0.0))
        a2 = a.copy()
        a2[-1] = -1.0
        rows.append((a2, LE, 0.0))
    asum = np.zeros(nv)
    asum[:k] = 1.0
    rows.append((asum, EQ, 1.0))
    aface = np.zeros(nv)
    aface[k] = 1.0
    aface[k + 1] = 1.0
    rows.append((aface, GE, value - 1e-10))
    lower = [0.0] * k + [None, None, 0.0]
    sol = solve_lp(LinearProgram(c, MINIMIZE, rows, lower=lower))
    if sol.status != OPTIMAL:
        return None
    return sol.x[:k]


def scaled_derivative(game: Game, p: Profile, q: Profile, tol: float = SUPPORT_TOL):
    """One-sided derivative of f along the unnormalized displacement q - p.

    Returns (Df, DfR, DfC).  The branch follows whichever regret is active;
    when the regrets agree (within 1e-9) the derivative is the max of both.
    """
    R, C = game.R, game.C
    x, y = game.check_profile(p)
    xp, yp = game.check_profile(q)
    r = regrets(game, p)
    sup = supports(game, p, tol)
    Ry = R @ y
    Ryp = R @ yp
    dfR = float(
        Ryp[sup.row_best].max() - xp @ Ry - x @ Ryp + x @ Ry - r.fR
    )
    Cx = C.T @ x
    Cxp = C.T @ xp
    dfC = float(
        Cxp[sup.col_best].max() - xp @ C @ y - Cx @ yp + Cx @ y - r.fC
    )
    if r.fR > r.fC + EQUAL_REGRET_TOL:
        df = dfR
    elif r.fC > r.fR + EQUAL_REGRET_TOL:
        df = dfC
    else:
        df = max(dfR, dfC)
    return df, dfR, dfC


def t_value(game: Game, p: Profile, q: Profile, d: DualSolution, tol: float = SUPPORT_TOL) -> float:
    """The smoothed derivative form T(x,y,x',y',rho,w,z) evaluated directly."""
    sup = supports(game, p, tol)
    if np.any(d.w[np.setdiff1d(np.arange(game.m), sup.row_best)] > tol):
        raise ValueError("w is not supported on the row best-response set")
    if np.any(d.z[np.setdiff1d(np.arange(game.n), sup.col_best)] > tol):
        raise ValueError("z is not supported on the column best-response set")
    R, C = game.R, game.C
    x, y = p
    xp, yp = q
    term_r = d.w @ R @ yp - x @ R @ yp - xp @ R @ y + x @ R @ y
    term_c = xp @ C @ d.z - x @ C @ yp - xp @ C @ y + x @ C @ y
    return float(d.rho * term_r + (1.0 - d.rho) * term_c)


def line_search(game: Game, p: Profile, dres: DirectionResult, tol: float = SUPPORT_TOL) -> float:
    """Closed-form step size in (0,1] toward (x_new, y_new).

    The two support bounds keep the best-response sets from being overtaken
    mid-step; indices whose payoff cannot catch up along the direction
    (nonpositive gap growth) impose no bound.  A negative quadratic cross
    term H additionally caps the step at |V-f|/(2|H|).
    """
    R, C = game.R, game.C
    x, y = p
    xp, yp = dres.x_new, dres.y_new
    r = regrets(game, p)

    def support_bound(vals, vals_new):
        vmax = vals.max()
        best = vals >= vmax - tol
        if np.all(best):
            return np.inf
        m_new = vals_new[best].max()
        num = vmax - vals[~best]
        gap = vals_new[~best] - m_new
        den = num + gap
        ok = (gap > 0) & (den > 1e-12)
        if not np.any(ok):
            return np.inf
        return float((num[ok] / den[ok]).min())

    eps1 = support_bound(R @ y, R @ yp)
    eps2 = support_bound(C.T @ x, C.T @ xp)
    eps = min(eps1, eps2, 1.0)
    dx = xp - x
    dy = yp - y
    H = min(float(dx @ R @ dy), float(dx @ C @ dy))
    if H < 0:
        eps = min(eps, abs(dres.value - r.f) / (2.0 * abs(H)))
    return min(eps, 1.0)


def lambda_mu_star(game: Game, p: Profile, d: DualSolution) -> tuple[float, float]:
    """Height differences lambda* = (w-x)'Rz and mu* = w'C(z-y)."""
    lam = float((d.w - p.x) @ game.R @ d.z)
    mu = float(d.w @ game.C @ (d.z - p.y))
    return lam, mu


def find_stationary(
    game: Game,
    p0: Profile,
    delta: float = 1e-3,
    max_iter: int | None = None,
    tol: float = SUPPORT_TOL,
    record_history: bool = False,
) -> StationaryPoint:
    """Iterate balance / direction / line search until V - f >= -delta.

    Returns the stationary point together with its equalized dual witness
    and the derived quantities lambda*, mu*.  Raises DescentBudgetError
    (carrying the best profile) if the iteration cap is hit; the default
    cap ceil(4/delta^2) honors the quadratic convergence bound.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if max_iter is None:
        max_iter = math.ceil(4.0 / (delta * delta))
    p = game.check_profile(p0)
    history = []
    iterations = 0
    while True:
        p = balance(game, p, tol)
        r = regrets(game, p)
        if record_history:
            history.append(r.f)
        d = direction(game, p, tol)
        if d.value - r.f >= -delta:
            dual = direction(game, p, tol, canonicalize=True).dual
            lam, mu = lambda_mu_star(game, p, dual)
            return StationaryPoint(
                profile=p,
                dual=dual,
                f=r.f,
                value=d.value,
                lambda_star=lam,
                mu_star=mu,
                iterations=iterations,
                f_history=tuple(history),
            )
        if iterations >= max_iter:
            raise DescentBudgetError(p, r.f, iterations)
        eps = line_search(game, p, d, tol)
        p = Profile(
            mixed(np.clip(p.x + eps * (d.x_new - p.x), 0.0, None)),
            mixed(np.clip(p.y + eps * (d.y_new - p.y), 0.0, None)),
        )
        iterations += 1


def stationary_from(game: Game, p: Profile, d: DualSolution, iterations: int = 0) -> StationaryPoint:
    """Package a known profile and dual witness as a StationaryPoint.

    Used for canonical instances whose stationary data is specified rather
    than discovered by descent.
    """
    r = regrets(game, p)
    lam, mu = lambda_mu_star(game, p, d)
    return StationaryPoint(
        profile=p,
        dual=d,
        f=r.f,
        value=r.f,
        lambda_star=lam,
        mu_star=mu,
        iterations=iterations,
    )


def verify_stationary(game: Game, sp: StationaryPoint, tol: float = 1e-6) -> StationarityReport:
    """Check the stationarity characterization at sp's profile and dual.

    Conditions: equal regrets, supp(x) inside the minimizers of
    A = -rho*Ry + (1-rho)C(z-y), and supp(y) inside the minimizers of
    B = rho*R'(w-x) - (1-rho)C'x, all within ``tol``.
    """
    R, C = game.R, game.C
    x, y = sp.profile
    d = sp.dual
    A = -d.rho * (R @ y) + (1.0 - d.rho) * (C @ (d.z - y))
    B = d.rho * (R.T @ (d.w - x)) - (1.0 - d.rho) * (C.T @ x)
    failures = []
    r = regrets(game, sp.profile)
    if abs(r.fR - r.fC) > tol:
        failures.append(f"|fR - fC| = {abs(r.fR - r.fC):.3g} > {tol:.3g}")
    for i in np.nonzero(x > SUPPORT_TOL)[0]:
        if A[i] > A.min() + tol:
            failures.append(f"x support index {i}: A[{i}] exceeds min(A) by {A[i] - A.min():.3g}")
    for j in np.nonzero(y > SUPPORT_TOL)[0]:
        if B[j] > B.min() + tol:
            failures.append(f"y support index {j}: B[{j}] exceeds min(B) by {B[j] - B.min():.3g}")
    return StationarityReport(ok=not failures, failures=tuple(failures), A=A, B=B)
