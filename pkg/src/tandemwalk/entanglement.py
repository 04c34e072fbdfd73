"""Entanglement measures over collapsed position states.

The walker-walker entanglement of a collapsed state sum_i c_i |i,i> is
its von Neumann entropy E = -sum |c_i|^2 log2 |c_i|^2 in bits.  The
normalized measure divides by log2 N, where N counts amplitudes above
the term threshold, so a value of 1 always means "maximal for the number
of terms present".  The averaged measure is the mean of the normalized
values over steps 2..n of a walk, evaluated as if an independent copy of
the walk were measured at each step.
"""

import numpy as np
from dataclasses import dataclass

from .core import (
    TERM_THRESHOLD,
    CoinOperator,
    CollapseResult,
    ShiftOperator,
    Spin,
    iter_steps,
    measure_spin,
)

__all__ = [
    "entropy",
    "term_count",
    "normalized_entanglement",
    "EntanglementRecord",
    "AveragedEntanglement",
    "record_from_collapse",
    "walk_entanglement_series",
    "averaged_entanglement",
]


def entropy(amps: np.ndarray, norm_atol: float = 1e-10) -> float:
    """Von Neumann entropy of normalized position amplitudes, in bits.

    Zero-probability entries contribute nothing (0 log 0 = 0).  Raises
    ValueError when the amplitudes are not normalized to within
    norm_atol, since the entropy of an unnormalized vector is
    meaningless.
    """
    weights = np.abs(np.asarray(amps)) ** 2
    total = float(weights.sum())
    if abs(total - 1.0) > norm_atol:
        raise ValueError(
            f"position amplitudes must be normalized: sum |c|^2 = {total!r}"
        )
    nonzero = weights[weights > 0.0]
    return float(-(nonzero * np.log2(nonzero)).sum() + 0.0)


def term_count(amps: np.ndarray, threshold: float = TERM_THRESHOLD) -> int:
    """Number of amplitudes with modulus above the term threshold."""
    return int(np.count_nonzero(np.abs(np.asarray(amps)) > threshold))


def normalized_entanglement(amps: np.ndarray, n_terms: int | None = None) -> float:
    """Entropy divided by its maximum log2 N for the retained terms.

    Returns 0 when fewer than two terms survive the threshold; a single
    position term carries no walker-walker entanglement by definition.
    """
    n = term_count(amps) if n_terms is None else n_terms
    if n <= 1:
        return 0.0
    # rounding can overshoot the exact maximum by a few ulp; the ratio is
    # capped at its mathematical bound
    return min(entropy(amps) / float(np.log2(n)), 1.0)


@dataclass(frozen=True)
class EntanglementRecord:
    """Entanglement of a hypothetical measurement after a given step."""

    step: int
    outcome: Spin
    probability: float
    term_count: int
    entropy: float
    normalized: float

    @property
    def zero_probability(self) -> bool:
        """True when the outcome cannot occur and the record is the
        zero-entanglement convention rather than a measured value."""
        return self.probability == 0.0


@dataclass(frozen=True)
class AveragedEntanglement:
    """Mean normalized entanglement over steps 2..n_steps of a walk."""

    n_steps: int
    outcome: Spin
    value: float


def record_from_collapse(result: CollapseResult, step: int) -> EntanglementRecord:
    """Build the entanglement record for one collapse result."""
    if result.probability == 0.0:
        return EntanglementRecord(
            step=step,
            outcome=result.outcome,
            probability=0.0,
            term_count=0,
            entropy=0.0,
            normalized=0.0,
        )
    e_bits = entropy(result.amps)
    value = (
        min(e_bits / float(np.log2(result.term_count)), 1.0)
        if result.term_count >= 2
        else 0.0
    )
    return EntanglementRecord(
        step=step,
        outcome=result.outcome,
        probability=result.probability,
        term_count=result.term_count,
        entropy=e_bits,
        normalized=value,
    )


def _series(coin, shift, n_steps, outcomes, threshold=TERM_THRESHOLD):
    """One evolution, hypothetical collapses at every step for each outcome."""
    records = {outcome: [] for outcome in outcomes}
    for state in iter_steps(coin, shift, n_steps):
        for outcome in outcomes:
            records[outcome].append(
                record_from_collapse(measure_spin(state, outcome, threshold), state.step)
            )
    return records


def walk_entanglement_series(
    coin: CoinOperator,
    shift: ShiftOperator,
    n_steps: int,
    outcome: Spin,
    threshold: float = TERM_THRESHOLD,
) -> list[EntanglementRecord]:
    """Per-step entanglement records for steps 1..n_steps.

    The walk itself is never collapsed: each record describes a
    measurement on an independent copy stopped at that step, which is
    what evolving a fresh replica per step would produce.
    """
    if n_steps < 2:
        raise ValueError(f"n_steps must be at least 2, got {n_steps}")
    return _series(coin, shift, n_steps, (outcome,), threshold)[outcome]


def averaged_entanglement(
    coin: CoinOperator,
    shift: ShiftOperator,
    n_steps: int,
    outcome: Spin,
    threshold: float = TERM_THRESHOLD,
) -> AveragedEntanglement:
    """Average the normalized entanglement over steps 2..n_steps.

    Step 1 is excluded: a single step always yields a one-term collapsed
    state and would only dilute the average.  Steps where the outcome has
    zero probability contribute 0.
    """
    records = walk_entanglement_series(coin, shift, n_steps, outcome, threshold)
    value = sum(r.normalized for r in records[1:]) / (n_steps - 1)
    return AveragedEntanglement(n_steps=n_steps, outcome=outcome, value=value)
