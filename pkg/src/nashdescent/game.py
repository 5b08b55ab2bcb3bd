"""Bimatrix games normalized to [0,1], mixed strategies, regrets and
approximate-equilibrium predicates.

Conventions used throughout the package: the row player has m pure
strategies and payoff matrix R, the column player has n pure strategies
and payoff matrix C (both m x n).  Mixed strategies are plain 1-D numpy
arrays on the probability simplex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

# Entries may drift below 0 / above 1 by this much before we reject them.
ENTRY_TOL = 1e-12
# Clamp threshold for tiny negative strategy weights produced by line-search
# arithmetic; anything more negative is a genuine error.
NEG_TOL = 1e-12
# A strategy must sum to 1 within this much before renormalization.
SUM_TOL = 1e-9
# Default absolute tolerance for best-response support sets.
SUPPORT_TOL = 1e-9


class GameError(ValueError):
    """Malformed game data (shape, range, or non-finite entries)."""


def mixed(vec, k: int | None = None) -> np.ndarray:
    """Validate a vector as a mixed strategy and return it as a read-only array.

    Tiny negatives (>= -1e-12) are clamped to zero and the vector is
    renormalized to sum exactly to 1.
    """
    v = np.array(vec, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise GameError("mixed strategy must be a nonempty vector")
    if k is not None and v.size != k:
        raise GameError(f"mixed strategy has length {v.size}, expected {k}")
    if not np.all(np.isfinite(v)):
        raise GameError("mixed strategy has non-finite entries")
    if v.min() < -NEG_TOL:
        raise GameError(f"mixed strategy entry {v.min()} is negative")
    v[v < 0] = 0.0
    s = v.sum()
    if abs(s - 1.0) > SUM_TOL:
        raise GameError(f"mixed strategy sums to {s}, not 1")
    v /= s
    v.flags.writeable = False
    return v


def pure(k: int, i: int) -> np.ndarray:
    """The pure strategy e_i in a k-action strategy space."""
    v = np.zeros(k)
    v[i] = 1.0
    v.flags.writeable = False
    return v


def uniform(k: int) -> np.ndarray:
    v = np.full(k, 1.0 / k)
    v.flags.writeable = False
    return v


class Profile(NamedTuple):
    """A pair of mixed strategies (x for the row player, y for the column player)."""

    x: np.ndarray
    y: np.ndarray


class Regrets(NamedTuple):
    """Row regret, column regret and their maximum at a profile."""

    fR: float
    fC: float
    f: float


class Supports(NamedTuple):
    """Best-response index sets and strategy supports at a profile.

    row_best is the set of row-player pure best responses to y (argmax of Ry),
    col_best the column-player pure best responses to x (argmax of C'x).
    """

    row_best: np.ndarray
    col_best: np.ndarray
    x_supp: np.ndarray
    y_supp: np.ndarray


@dataclass(frozen=True)
class Game:
    """An m x n bimatrix game with both payoff matrices in [0,1].

    Immutable after construction; matrices are stored dense and read-only.
    """

    R: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        R = np.array(self.R, dtype=float)
        C = np.array(self.C, dtype=float)
        if R.ndim != 2 or R.size == 0:
            raise GameError("R must be a nonempty matrix")
        if R.shape != C.shape:
            raise GameError(f"shape mismatch: R is {R.shape}, C is {C.shape}")
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(C))):
            raise GameError("payoff matrices must be finite")
        for name, M in (("R", R), ("C", C)):
            if M.min() < -ENTRY_TOL or M.max() > 1 + ENTRY_TOL:
                raise GameError(
                    f"{name} entries outside [0,1]: min={M.min()}, max={M.max()}"
                )
        R.flags.writeable = False
        C.flags.writeable = False
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "C", C)

    @property
    def m(self) -> int:
        return self.R.shape[0]

    @property
    def n(self) -> int:
        return self.R.shape[1]

    def check_profile(self, p: Profile) -> Profile:
        if p.x.shape != (self.m,) or p.y.shape != (self.n,):
            raise GameError(
                f"profile shape ({p.x.shape[0]}, {p.y.shape[0]}) does not match "
                f"game shape ({self.m}, {self.n})"
            )
        return p

    def uniform_profile(self) -> Profile:
        return Profile(uniform(self.m), uniform(self.n))

    def pure_profile(self, i: int, j: int) -> Profile:
        return Profile(pure(self.m, i), pure(self.n, j))

    def to_json(self, canonical: dict | None = None) -> str:
        doc = {"m": self.m, "n": self.n, "R": self.R.tolist(), "C": self.C.tolist()}
        if canonical is not None:
            doc["canonical"] = {k: np.asarray(v).tolist() for k, v in canonical.items()}
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str, normalize: bool = False) -> "Game":
        doc = json.loads(text)
        R = np.array(doc["R"], dtype=float)
        C = np.array(doc["C"], dtype=float)
        if "m" in doc and (doc["m"], doc["n"]) != R.shape:
            raise GameError("declared dimensions do not match matrix shape")
        if normalize:
            return normalize_game(R, C)
        return cls(R, C)


def _affine_to_unit(M: np.ndarray) -> np.ndarray:
    lo, hi = M.min(), M.max()
    if hi - lo <= 0:
        return np.zeros_like(M)
    return (M - lo) / (hi - lo)


def normalize_game(Rraw, Craw) -> Game:
    """Shift and scale each payoff matrix independently onto [0,1].

    A constant matrix maps to all zeros.  The affine map preserves each
    player's best-response structure, so the normalized game has the same
    (approximate) equilibria up to a rescaling of epsilon.
    """
    R = np.array(Rraw, dtype=float)
    C = np.array(Craw, dtype=float)
    if R.ndim != 2 or R.size == 0 or R.shape != C.shape:
        raise GameError("payoff matrices must be nonempty and of equal shape")
    if not (np.all(np.isfinite(R)) and np.all(np.isfinite(C))):
        raise GameError("payoff matrices must be finite")
    return Game(_affine_to_unit(R), _affine_to_unit(C))


def regrets(game: Game, p: Profile) -> Regrets:
    """Best-response gaps fR = max(Ry) - x'Ry and fC = max(C'x) - x'Cy."""
    game.check_profile(p)
    x, y = p
    Ry = game.R @ y
    Cx = game.C.T @ x
    fR = float(Ry.max() - x @ Ry)
    fC = float(Cx.max() - Cx @ y)
    return Regrets(fR, fC, max(fR, fC))


def supports(game: Game, p: Profile, tol: float = SUPPORT_TOL) -> Supports:
    """Best-response sets S_R(y), S_C(x) and the supports of x and y.

    An index is a best response when its payoff is within ``tol`` (absolute)
    of the maximum; an index is in the support when its weight exceeds ``tol``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    game.check_profile(p)
    x, y = p
    Ry = game.R @ y
    Cx = game.C.T @ x
    return Supports(
        row_best=np.nonzero(Ry >= Ry.max() - tol)[0],
        col_best=np.nonzero(Cx >= Cx.max() - tol)[0],
        x_supp=np.nonzero(x > tol)[0],
        y_supp=np.nonzero(y > tol)[0],
    )


def is_eps_ne(game: Game, p: Profile, eps: float) -> bool:
    """True when neither player can gain more than eps by deviating."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return regrets(game, p).f <= eps
