"""Measurement sets, Bob's announce/decline model, and the steering parameter.

The steering parameter is the average over n settings of the Alice-Bob
correlation conditioned on Bob announcing an outcome.  Bookkeeping follows
the anticorrelated singlet: Bob's reported value B_k is the negated raw
analyzer outcome, so the ideal singlet gives S_n = +1 on every setting.

Count tables are numpy integer arrays of shape (n, 2, 3):
axis 1 indexes Alice's outcome (0 -> +1, 1 -> -1), axis 2 Bob's raw outcome
(0 -> +1, 1 -> -1, 2 -> null / declined).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import encoding
from .qmath import BlochVector, DensityMatrix

EQUALITY_TOL = 1e-12
_GOLDEN = (1 + np.sqrt(5)) / 2

ALICE_OUTCOMES = (+1, -1)
BOB_OUTCOMES = (+1, -1, None)


@dataclass(frozen=True)
class MeasurementSet:
    """n Bloch directions shared by Alice and an honest Bob."""

    directions: tuple

    def __post_init__(self):
        dirs = tuple(d.require_unit() for d in self.directions)
        if len(dirs) < 2:
            raise ValueError("need at least two measurement settings")
        mats = np.array([d.as_array() for d in dirs])
        gram = mats @ mats.T
        off = gram[~np.eye(len(dirs), dtype=bool)]
        if np.any(np.abs(off) > 1 - 1e-9):
            raise ValueError("measurement directions must be pairwise non-(anti)parallel")
        object.__setattr__(self, "directions", dirs)

    @property
    def n(self) -> int:
        return len(self.directions)

    def as_matrix(self) -> np.ndarray:
        return np.array([d.as_array() for d in self.directions])


def platonic_set(n: int) -> MeasurementSet:
    """Canonical direction sets: 2 orthogonal axes, Pauli axes, tetrahedron,
    or six icosahedron half-vertices.  z-axis member listed first where the
    solid has one."""
    if n == 2:
        vecs = [(0, 0, 1), (1, 0, 0)]
    elif n == 3:
        vecs = [(0, 0, 1), (1, 0, 0), (0, 1, 0)]
    elif n == 4:
        s = 1 / np.sqrt(3)
        vecs = [(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)]
    elif n == 6:
        raw = [
            (0, 1, _GOLDEN), (0, -1, _GOLDEN),
            (1, _GOLDEN, 0), (-1, _GOLDEN, 0),
            (_GOLDEN, 0, 1), (-_GOLDEN, 0, 1),
        ]
        norm = np.sqrt(1 + _GOLDEN ** 2)
        vecs = [tuple(c / norm for c in v) for v in raw]
    else:
        raise ValueError(f"unsupported number of settings n={n} (use 2, 3, 4 or 6)")
    return MeasurementSet(tuple(BlochVector(*v) for v in vecs))


@dataclass(frozen=True)
class SteeringEstimate:
    """S_n with its statistical error and the observed announce fraction."""

    s_value: float
    std_err: float
    announce_fraction: float
    per_setting_correlations: tuple

    def __post_init__(self):
        corr = tuple(float(c) for c in self.per_setting_correlations)
        if abs(self.s_value - float(np.mean(corr))) > EQUALITY_TOL:
            raise ValueError("s_value must equal the mean per-setting correlation")
        if np.any(np.abs(corr) > 1 + EQUALITY_TOL):
            raise ValueError("per-setting correlations must lie in [-1, 1]")
        if not 0.0 <= self.announce_fraction <= 1.0:
            raise ValueError("announce fraction must lie in [0, 1]")
        object.__setattr__(self, "per_setting_correlations", corr)


def _joint_probabilities(rho: DensityMatrix, mset: MeasurementSet,
                         encoding_kind: str, theta: float,
                         space: encoding.OamSpace) -> np.ndarray:
    """Lossless outcome table p[k, alice, bob] with bob in (+1, -1, null)."""
    n = mset.n
    if encoding_kind == "polarization":
        if rho.dim != 4:
            raise ValueError("polarization encoding expects a 4x4 two-qubit state")
        r = encoding.pol_rotation(theta)
        bob_dim = 2

        def bob_proj(u, outcome):
            return r @ encoding.pol_projector(u, outcome) @ r.conj().T

        bob_passed = np.eye(2)
    elif encoding_kind == "vortex":
        if rho.dim != 2 * space.dim:
            raise ValueError("vortex encoding expects Alice-pol x composite state")
        bob_dim = space.dim

        def bob_proj(u, outcome):
            return encoding.bob_analyzer(u, theta, outcome, space).entries

        bob_passed = encoding.bob_analyzer_passed(theta, space).entries
    else:
        raise ValueError(f"unknown encoding {encoding_kind!r}")

    probs = np.zeros((n, 2, 3))
    for k, u in enumerate(mset.directions):
        alice = [encoding.pol_projector(u, a) for a in ALICE_OUTCOMES]
        bob = [bob_proj(u, +1), bob_proj(u, -1)]
        bob_null = np.eye(bob_dim) - bob_passed
        for ia, pa in enumerate(alice):
            for ib, pb in enumerate(bob + [bob_null]):
                val = np.trace(rho.entries @ np.kron(pa, pb))
                probs[k, ia, ib] = max(0.0, float(val.real))
    return probs


def steering_parameter_exact(rho: DensityMatrix, mset: MeasurementSet,
                             encoding_kind: str = "vortex", theta: float = 0.0,
                             space: encoding.OamSpace = encoding.DEFAULT_SPACE) -> SteeringEstimate:
    """S_n computed directly from the state by Born-rule traces."""
    probs = _joint_probabilities(rho, mset, encoding_kind, theta, space)
    corr = np.zeros(mset.n)
    announced = np.zeros(mset.n)
    for k in range(mset.n):
        p = probs[k]
        announced[k] = p[:, :2].sum()
        if announced[k] <= 0:
            raise ValueError(f"setting {k} never produces an announced outcome")
        # B_k is the negated raw outcome: agreement = (alice, bob raw) opposite
        agree = p[0, 1] + p[1, 0]
        disagree = p[0, 0] + p[1, 1]
        corr[k] = (agree - disagree) / announced[k]
    corr = np.clip(corr, -1.0, 1.0)
    return SteeringEstimate(
        s_value=float(np.mean(corr)),
        std_err=0.0,
        announce_fraction=float(np.mean(announced)),
        per_setting_correlations=tuple(corr),
    )


def steering_parameter_counts(counts: np.ndarray) -> SteeringEstimate:
    """S_n from a tally table, with per-setting binomial error propagation.

    The quoted std_err is ONE standard deviation; scale by 2 for
    two-standard-deviation error bars.
    """
    counts = np.asarray(counts)
    if counts.ndim != 3 or counts.shape[1] != 2 or counts.shape[2] != 3:
        raise ValueError("counts must have shape (n, 2, 3)")
    n = counts.shape[0]
    corr = np.zeros(n)
    var = np.zeros(n)
    announced = counts[:, :, :2].sum(axis=(1, 2)).astype(float)
    if np.any(announced == 0):
        bad = int(np.argmin(announced))
        raise ValueError(f"setting {bad} has zero announced events")
    for k in range(n):
        agree = counts[k, 0, 1] + counts[k, 1, 0]
        disagree = counts[k, 0, 0] + counts[k, 1, 1]
        corr[k] = (agree - disagree) / announced[k]
        p_hat = agree / announced[k]
        var[k] = 4 * p_hat * (1 - p_hat) / announced[k]
    total = counts.sum()
    return SteeringEstimate(
        s_value=float(np.mean(corr)),
        std_err=float(np.sqrt(var.sum()) / n),
        announce_fraction=float(announced.sum() / total),
        per_setting_correlations=tuple(corr),
    )
