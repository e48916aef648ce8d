"""Random-walk predictions for halved 3x+1 orbits, and comparisons.

Treating each step as multiplying by 3/2 or 1/2 with equal chance
makes log x_k a random walk with drift log(3/4)/2 per step.  The
module stores the constants that walk implies (drift, expected step
count, an almost-sure ceiling, the shape of extremal excursions) and
measures how far an actual orbit strays from the predicted line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .trajectory import Outcome, Trajectory
from .util import log_nat

EXPECTED_SLOPE = 0.5 * math.log(3.0 / 4.0)
EXPECTED_STEPS_COEFF = 2.0 / math.log(4.0 / 3.0)
STOCHASTIC_BOUND_COEFF = 41.677647


@dataclass(frozen=True)
class ExtremalShape:
    """Predicted profile of record-setting excursions, in units of log n.

    A record orbit should climb for about rise_steps_coeff * log n
    steps at slope rise_slope, top out near peak_log_coeff * log n,
    then descend at fall_slope for fall_steps_coeff * log n steps,
    reaching 1 after about total_steps_coeff * log n steps in all.
    """

    rise_steps_coeff: float = 7.645
    rise_slope: float = 0.1308
    peak_log_coeff: float = 2.0
    fall_steps_coeff: float = 13.905
    fall_slope: float = -0.1453
    total_steps_coeff: float = 21.55


EXTREMAL_SHAPE = ExtremalShape()


def expected_slope() -> float:
    """Mean change of log x per step: (log 3/2 + log 1/2) / 2."""
    return EXPECTED_SLOPE


def expected_total_steps(n: int) -> float:
    """Steps a drift of EXPECTED_SLOPE needs to bring log n to 0."""
    if n < 2:
        raise ValueError("prediction needs n >= 2")
    return EXPECTED_STEPS_COEFF * log_nat(n)


def stochastic_upper_bound(n: int) -> float:
    """Step-count ceiling the random-walk model exceeds with chance o(1)."""
    if n < 2:
        raise ValueError("prediction needs n >= 2")
    return STOCHASTIC_BOUND_COEFF * log_nat(n)


def extremal_peak_log(n: int) -> float:
    """Predicted log of the largest iterate over record-setting starts."""
    if n < 2:
        raise ValueError("prediction needs n >= 2")
    return EXTREMAL_SHAPE.peak_log_coeff * log_nat(n)


@dataclass(frozen=True)
class Prediction:
    n: int
    log_n: float
    slope: float
    expected_steps: float
    upper_bound_steps: float
    extremal_steps: float
    extremal_peak_log: float


def predict(n: int) -> Prediction:
    """Bundle of model values for one start."""
    if n < 2:
        raise ValueError("prediction needs n >= 2")
    ln = log_nat(n)
    return Prediction(
        n=n,
        log_n=ln,
        slope=EXPECTED_SLOPE,
        expected_steps=EXPECTED_STEPS_COEFF * ln,
        upper_bound_steps=STOCHASTIC_BOUND_COEFF * ln,
        extremal_steps=EXTREMAL_SHAPE.total_steps_coeff * ln,
        extremal_peak_log=EXTREMAL_SHAPE.peak_log_coeff * ln,
    )


@dataclass(frozen=True)
class ModelComparison:
    """An actual orbit measured against the drift line log n + slope * k.

    small_start flags log n < 10, where one early step moves the orbit
    by a large fraction of its whole height and the asymptotic line
    says little; callers should read the residuals accordingly.
    """

    start: int
    steps: int
    expected_steps: float
    steps_ratio: float
    slope: float
    residuals: tuple[float, ...]
    max_abs_residual: float
    rms_residual: float
    within_upper_bound: bool
    small_start: bool


SMALL_START_LOG = 10.0


def compare(traj: Trajectory) -> ModelComparison:
    """Residuals of log x_k against the predicted line, plus step-count fit.

    The trajectory must have reached 1 with its values stored and must
    start at 2 or above, since the line is anchored at log n.
    """
    if traj.outcome is not Outcome.REACHED_ONE:
        raise ValueError("comparison needs an orbit that reached 1")
    if traj.values is None:
        raise ValueError("trajectory was recorded without values")
    if traj.start < 2:
        raise ValueError("comparison needs a start >= 2")
    ln = log_nat(traj.start)
    residuals = tuple(
        log_nat(x) - (ln + EXPECTED_SLOPE * k) for k, x in enumerate(traj.values)
    )
    max_abs = max(abs(r) for r in residuals)
    rms = math.sqrt(math.fsum(r * r for r in residuals) / len(residuals))
    expected = EXPECTED_STEPS_COEFF * ln
    return ModelComparison(
        start=traj.start,
        steps=traj.steps,
        expected_steps=expected,
        steps_ratio=traj.steps / expected,
        slope=EXPECTED_SLOPE,
        residuals=residuals,
        max_abs_residual=max_abs,
        rms_residual=rms,
        within_upper_bound=traj.steps <= STOCHASTIC_BOUND_COEFF * ln,
        small_start=ln < SMALL_START_LOG,
    )
