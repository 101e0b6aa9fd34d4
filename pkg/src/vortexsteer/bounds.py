"""Loss-tolerant steering bounds from local-hidden-state cheating strategies.

A cheating Bob holds a classical description of a pure qubit state sent to
Alice (a Bloch vector) plus a deterministic per-setting instruction: answer
+1, answer -1, or decline.  The achievable conditional correlation, maximized
over probabilistic mixtures of such strategies subject to a floor xi on the
expected announce fraction, is the bound C_n(xi) that honest quantum
correlations must beat.

For a fixed answer pattern a (on the answered subset T) the optimal Bloch
vector is the normalized resultant sum_{k in T} a_k u_k, with payoff equal to
the resultant's norm.  Maximizing the mixture ratio

    E[payoff] / E[#answered]    s.t.   E[#answered] / n >= xi

is a linear-fractional program over the finite strategy set; the standard
Charnes-Cooper normalization (scale weights so the denominator is 1) turns it
into a linear program solved here with scipy's HiGHS backend.  An optimal
basic solution mixes at most two strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import linprog

from .qmath import BlochVector
from .steering import MeasurementSet

SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class CheatStrategy:
    """One deterministic LHS strategy: answers[k] in {+1, -1, 0}, 0 = decline.

    Answers are in the negated-outcome bookkeeping of the steering module, so
    the payoff for setting k is answers[k] * (u_k . bloch).
    """

    bloch: BlochVector
    answers: tuple

    def __post_init__(self):
        answers = tuple(int(a) for a in self.answers)
        if any(a not in (-1, 0, 1) for a in answers):
            raise ValueError("answers must be +1, -1 or 0 (null)")
        if all(a == 0 for a in answers):
            raise ValueError("strategy must answer at least one setting")
        object.__setattr__(self, "answers", answers)
        self.bloch.require_unit()

    @property
    def answered(self) -> int:
        return sum(1 for a in self.answers if a != 0)


@dataclass(frozen=True)
class BoundCurve:
    """C_n(xi) on a grid, with the optimizing strategy mixtures attached."""

    n: int
    xi_grid: tuple
    c_values: tuple
    witnesses: tuple


def strategy_payoff(strategy: CheatStrategy, mset: MeasurementSet) -> tuple[float, int]:
    """(sum of answered payoffs, number of answered settings)."""
    if len(strategy.answers) != mset.n:
        raise ValueError("strategy length does not match measurement set")
    b = strategy.bloch.as_array()
    payoff = sum(a * float(u.as_array() @ b)
                 for a, u in zip(strategy.answers, mset.directions))
    return payoff, strategy.answered


def enumerate_strategies(mset: MeasurementSet):
    """All 3^n - 1 answer patterns, each with its optimal Bloch vector.

    Patterns are generated in a fixed lexicographic order (null < +1 < -1
    per setting) so downstream witness selection is reproducible.
    """
    dirs = mset.as_matrix()
    strategies = []
    payoffs = []
    answered = []
    for pattern in product((0, 1, -1), repeat=mset.n):
        if all(a == 0 for a in pattern):
            continue
        resultant = np.asarray(pattern, dtype=float) @ dirs
        norm = float(np.linalg.norm(resultant))
        if norm > 1e-15:
            bloch = BlochVector.unit(resultant)
        else:
            bloch = BlochVector(0.0, 0.0, 1.0)  # payoff 0, direction irrelevant
        strategies.append(CheatStrategy(bloch, pattern))
        payoffs.append(norm)
        answered.append(sum(1 for a in pattern if a != 0))
    return strategies, np.array(payoffs), np.array(answered, dtype=float)


def deterministic_bound(mset: MeasurementSet) -> float:
    """C_n at xi = 1: every setting answered, optimal sign pattern and state."""
    best = 0.0
    dirs = mset.as_matrix()
    for pattern in product((1, -1), repeat=mset.n):
        best = max(best, float(np.linalg.norm(np.asarray(pattern, float) @ dirs)))
    return best / mset.n


def loss_tolerant_bound(mset: MeasurementSet, xi: float,
                        per_setting: bool = False):
    """C_n(xi) and an optimizing mixture of at most two strategies.

    With per_setting=True the announce floor is imposed for every setting
    individually instead of on the average (strict reading).
    """
    if not 0.0 < xi <= 1.0:
        raise ValueError(f"xi must lie in (0, 1], got {xi}")
    n = mset.n
    strategies, payoffs, answered = enumerate_strategies(mset)
    m = len(strategies)

    # Charnes-Cooper variables q_j >= 0 with sum_j q_j A_j = 1:
    #   maximize sum q_j P_j,  subject to sum q_j <= 1 / (n xi)
    a_eq = [answered]
    b_eq = [1.0]
    a_ub = [np.ones(m)]
    b_ub = [1.0 / (n * xi)]
    if per_setting:
        indicator = np.array([[1.0 if s.answers[k] != 0 else 0.0
                               for s in strategies] for k in range(n)])
        # sum_j q_j 1{k in T_j} >= xi sum_j q_j  for each setting k
        for k in range(n):
            a_ub.append(xi * np.ones(m) - indicator[k])
            b_ub.append(0.0)
    res = linprog(-payoffs, A_ub=np.array(a_ub), b_ub=np.array(b_ub),
                  A_eq=np.array(a_eq), b_eq=np.array(b_eq),
                  bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"bound LP failed: {res.message}")
    q = res.x
    total = q.sum()
    support = np.nonzero(q > SUPPORT_TOL * max(1.0, total))[0]
    witness = tuple((float(q[j] / total), strategies[j]) for j in support)
    return float(-res.fun), witness


def bound_oracle(mset: MeasurementSet, xi: float,
                 sphere_resolution: float = 1e-2) -> float:
    """Independent brute-force lower bound on C_n(xi).

    Grid-searches the Bloch sphere for every answer pattern, then mixes every
    pair of strategies.  For a pair, the conditional correlation is a
    monotone fractional-linear function of the mixing weight, so only the
    endpoints of the feasible weight interval need evaluation.
    """
    if sphere_resolution > 1e-2 + 1e-15:
        raise ValueError("sphere resolution must be <= 1e-2")
    if not 0.0 < xi <= 1.0:
        raise ValueError(f"xi must lie in (0, 1], got {xi}")
    n = mset.n
    dirs = mset.as_matrix()

    grid = _fibonacci_sphere(int(np.ceil(4 * np.pi / sphere_resolution ** 2)))
    patterns = [np.asarray(p, float) for p in product((0, 1, -1), repeat=n)
                if any(p)]
    resultants = np.array(patterns) @ dirs                  # (m, 3)
    payoffs = np.max(grid @ resultants.T, axis=0)           # grid-limited P_j
    answered = np.array([np.count_nonzero(p) for p in patterns], dtype=float)

    floor = n * xi
    p_i = payoffs[:, None]
    p_j = payoffs[None, :]
    a_i = answered[:, None]
    a_j = answered[None, :]

    best = 0.0
    # candidate mixing weights: w = 0, w = 1, and the constraint boundary
    for w in (np.zeros_like(p_i + p_j), np.ones_like(p_i + p_j),
              _boundary_weight(a_i, a_j, floor)):
        mixed_a = w * a_i + (1 - w) * a_j
        feasible = (mixed_a >= floor - 1e-12) & (w >= 0) & (w <= 1)
        if not feasible.any():
            continue
        value = np.where(feasible, (w * p_i + (1 - w) * p_j)
                         / np.where(mixed_a > 0, mixed_a, 1.0), -np.inf)
        best = max(best, float(value.max()))
    return best


def _boundary_weight(a_i, a_j, floor):
    denom = a_i - a_j
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (floor - a_j) / denom
    return np.where(np.isfinite(w), w, -1.0)


def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count)
    z = 1 - (2 * i + 1) / count
    r = np.sqrt(np.maximum(0.0, 1 - z ** 2))
    phi = i * np.pi * (3 - np.sqrt(5))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def bound_curve(mset: MeasurementSet, xi_grid, per_setting: bool = False) -> BoundCurve:
    """Evaluate the loss-tolerant bound on a strictly increasing xi grid."""
    xi_grid = tuple(float(x) for x in xi_grid)
    if any(not 0.0 < x <= 1.0 for x in xi_grid):
        raise ValueError("grid values must lie in (0, 1]")
    if any(b <= a for a, b in zip(xi_grid, xi_grid[1:])):
        raise ValueError("xi grid must be strictly increasing")
    values = []
    witnesses = []
    for xi in xi_grid:
        c, w = loss_tolerant_bound(mset, xi, per_setting=per_setting)
        values.append(c)
        witnesses.append(w)
    for a, b in zip(values, values[1:]):
        if b > a + 1e-9:
            raise RuntimeError("bound curve is not non-increasing")
    return BoundCurve(n=mset.n, xi_grid=xi_grid, c_values=tuple(values),
                      witnesses=tuple(witnesses))
