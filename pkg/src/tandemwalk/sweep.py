"""Parameter-space exploration: 1-D sweeps, five-parameter grid searches
and per-coin catalogs of maximal-entanglement events.

Single points run through the exact walk engine in `core`.  The grid
searches run a vectorized batch engine that evolves one chunk of
parameter tuples at a time, so memory stays bounded however large the
grid; chunks can additionally be distributed over worker processes.
Chunk boundaries depend only on the grid, never on the worker count, so
output order and content are identical for any parallelism.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

from .core import (
    BALANCED_ALPHA,
    TERM_THRESHOLD,
    CoinOperator,
    ShiftOperator,
    Spin,
    balanced_shift,
    hadamard_coin,
    kempe_coin,
    z_coin,
)
from .entanglement import _series

__all__ = [
    "MAXIMAL_ATOL",
    "CoinFamily",
    "SweepMode",
    "SweepSpec",
    "SearchMode",
    "MaxEntanglementHit",
    "family_coin",
    "grid_axis",
    "sweep_1d",
    "grid_search",
    "find_max_cases",
]

#: normalized entanglement counts as maximal above 1 - MAXIMAL_ATOL
MAXIMAL_ATOL = 1e-9

_TWO_PI = float(2.0 * np.pi)

#: closed parameter ranges; beta_arg is periodic and excludes its upper end
PARAM_RANGES = {
    "rho": (0.0, 1.0, True),
    "theta": (0.0, float(np.pi), True),
    "eta": (0.0, float(np.pi), True),
    "alpha": (0.0, 1.0, True),
    "beta_arg": (0.0, _TWO_PI, False),
}


class CoinFamily(Enum):
    HADAMARD = "hadamard"
    KEMPE = "kempe"
    Z = "z"
    GENERAL = "general"


class SweepMode(Enum):
    AVERAGED = "averaged"
    PER_STEP = "per-step"


class SearchMode(Enum):
    ISOLATED_MAX = "isolated"
    AVERAGED_HIGH = "averaged"


def family_coin(
    family: CoinFamily,
    rho: float | None = None,
    theta: float | None = None,
    eta: float | None = None,
) -> CoinOperator:
    """Coin for a named family, or a general coin from explicit parameters."""
    if family is CoinFamily.HADAMARD:
        return hadamard_coin()
    if family is CoinFamily.KEMPE:
        return kempe_coin()
    if family is CoinFamily.Z:
        return z_coin()
    if rho is None or theta is None or eta is None:
        raise ValueError("the general coin family needs rho, theta and eta")
    return CoinOperator(rho=rho, theta=theta, eta=eta)


def grid_axis(name: str, step: float) -> np.ndarray:
    """Grid over a parameter's full range.

    Closed ranges include both endpoints (the upper one is appended when
    the step does not land on it); the periodic beta_arg range excludes
    2 pi, which is the same point as 0.
    """
    try:
        lo, hi, closed = PARAM_RANGES[name]
    except KeyError:
        raise ValueError(f"unknown parameter {name!r}") from None
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    count = int(np.floor((hi - lo) / step + 1e-9))
    values = lo + step * np.arange(count + 1)
    if closed and values[-1] < hi - 1e-12:
        values = np.append(values, hi)
    if not closed and values[-1] >= hi - 1e-12:
        values = values[:-1]
    return values


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep of a single coin or shift parameter.

    fixed supplies the non-swept parameters (rho/theta/eta for the
    general coin, alpha/beta_arg for the shift; the special key beta_mod
    pins |beta| explicitly, e.g. to hold the shift at the exact balanced
    point while beta_arg sweeps).  include_balanced inserts the exact
    balanced alpha into an alpha sweep, where the averaged entanglement
    is discontinuous.
    """

    coin_family: CoinFamily
    swept: str
    start: float
    stop: float
    step: float
    n_steps: int
    fixed: dict = field(default_factory=dict)
    outcomes: tuple[Spin, ...] = (Spin.DOWN, Spin.UP)
    mode: SweepMode = SweepMode.AVERAGED
    include_balanced: bool = False

    def __post_init__(self):
        if self.swept not in PARAM_RANGES:
            raise ValueError(f"unknown swept parameter {self.swept!r}")
        coin_params = {"rho", "theta", "eta"}
        if self.coin_family is not CoinFamily.GENERAL and self.swept in coin_params:
            raise ValueError(
                f"cannot sweep {self.swept!r} with the fixed {self.coin_family.value} coin"
            )
        lo, hi, closed = PARAM_RANGES[self.swept]
        top_ok = self.stop <= hi if closed else self.stop < hi + 1e-12
        if not (lo <= self.start <= self.stop and top_ok):
            raise ValueError(
                f"swept range [{self.start}, {self.stop}] leaves the "
                f"{self.swept} domain [{lo}, {hi}{']' if closed else ')'}"
            )
        if self.step <= 0:
            raise ValueError(f"sweep step must be positive, got {self.step}")
        minimum = 2 if self.mode is SweepMode.AVERAGED else 1
        if self.n_steps < minimum:
            raise ValueError(f"n_steps must be at least {minimum}, got {self.n_steps}")
        known = set(PARAM_RANGES) | {"beta_mod"}
        for key, value in self.fixed.items():
            if key not in known:
                raise ValueError(f"unknown fixed parameter {key!r}")
            if key in PARAM_RANGES:
                lo, hi, closed = PARAM_RANGES[key]
                inside = lo <= value <= hi if closed else lo <= value < hi
                if not inside:
                    raise ValueError(f"fixed {key}={value} outside its domain")
        if self.include_balanced and self.swept != "alpha":
            raise ValueError("include_balanced only applies to alpha sweeps")

    def values(self) -> np.ndarray:
        """Swept grid values in deterministic ascending order."""
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9))
        values = self.start + self.step * np.arange(count + 1)
        values = values[values <= self.stop + 1e-12]
        _, hi, closed = PARAM_RANGES[self.swept]
        if closed and self.stop - values[-1] > 1e-12:
            values = np.append(values, self.stop)
        if not closed and values.size and values[-1] >= hi - 1e-12:
            values = values[:-1]
        if self.include_balanced and not np.any(values == BALANCED_ALPHA):
            values = np.sort(np.append(values, BALANCED_ALPHA))
        return values


def _point_operators(spec: SweepSpec, value: float):
    params = dict(spec.fixed)
    params[spec.swept] = value
    coin = family_coin(
        spec.coin_family,
        rho=params.get("rho"),
        theta=params.get("theta"),
        eta=params.get("eta"),
    )
    alpha = params.get("alpha", BALANCED_ALPHA)
    beta_mod = params.get("beta_mod")
    if spec.swept == "alpha" and value == BALANCED_ALPHA and spec.include_balanced:
        beta_mod = BALANCED_ALPHA
    shift = ShiftOperator(
        alpha=alpha, beta_arg=params.get("beta_arg", 0.0), beta_mod=beta_mod
    )
    return coin, shift


def sweep_1d(spec: SweepSpec) -> tuple[list[str], list[tuple]]:
    """Run a 1-D sweep and return (header, rows).

    Averaged mode emits one row (value, outcome, average) per grid point
    and outcome; per-step mode emits one row per step with probability,
    term count, entropy and normalized entanglement.  Row order follows
    the grid, then the spec's outcome order.
    """
    n = spec.n_steps
    if spec.mode is SweepMode.AVERAGED:
        header = [spec.swept, "outcome", f"avg_E_{n}"]
    else:
        header = [spec.swept, "outcome", "step", "P", "N", "E_bits", "normalized_E"]
    rows: list[tuple] = []
    for value in spec.values():
        coin, shift = _point_operators(spec, float(value))
        records = _series(coin, shift, n, spec.outcomes)
        for outcome in spec.outcomes:
            series = records[outcome]
            if spec.mode is SweepMode.AVERAGED:
                mean = sum(r.normalized for r in series[1:]) / (n - 1)
                rows.append((float(value), outcome.value, mean))
            else:
                for r in series:
                    rows.append(
                        (
                            float(value),
                            outcome.value,
                            r.step,
                            r.probability,
                            r.term_count,
                            r.entropy,
                            r.normalized,
                        )
                    )
    return header, rows


@dataclass(frozen=True)
class MaxEntanglementHit:
    """One parameter point whose walk reached the search criterion."""

    rho: float
    theta: float
    eta: float
    alpha: float
    beta_arg: float
    step: int
    outcome: Spin
    normalized: float
    probability: float
    term_count: int


# ---------------------------------------------------------------------------
# vectorized batch engine

_TINY = 5e-324  # smallest subnormal; log2 argument floor so 0 log 0 -> -0.0


def _batch_metrics(rho, theta, eta, alpha, beta_arg, n_steps, metrics_from=2):
    """Evolve a batch of walks, yielding per-step collapse metrics.

    Yields (step, {Spin: (P, N, E, calE)}) with one array entry per
    parameter tuple.  Phases use plain cos/sin: batch grids do not hit
    the degenerate quarter-turn points that the scalar engine treats
    exactly, and hits are revalidated through that engine anyway.
    """
    batch = rho.size
    stay = np.sqrt(rho)
    flip = np.sqrt(1.0 - rho)
    u00 = stay.astype(np.complex128)[:, None]
    u01 = (flip * np.exp(1j * (theta - eta)))[:, None]
    u10 = (-flip * np.exp(-1j * (theta + eta)))[:, None]
    u11 = (stay * np.exp(-2j * eta))[:, None]
    beta = (np.sqrt((1.0 - alpha) * (1.0 + alpha)) * np.exp(1j * beta_arg))[:, None]
    neg_bconj = -beta.conj()
    alpha_c = alpha.astype(np.complex128)[:, None]

    up = np.ones((batch, 1), dtype=np.complex128)
    down = np.zeros((batch, 1), dtype=np.complex128)
    for a in range(1, n_steps + 1):
        bu = u00 * up + u01 * down
        bd = u10 * up + u11 * down
        width = up.shape[1] + 2
        up = np.zeros((batch, width), dtype=np.complex128)
        down = np.zeros((batch, width), dtype=np.complex128)
        up[:, 2:] = alpha_c * bu + beta * bd
        down[:, :-2] = neg_bconj * bu + alpha_c * bd
        if a < metrics_from:
            continue
        metrics = {}
        for outcome, amps in ((Spin.UP, up), (Spin.DOWN, down)):
            p = amps.real * amps.real + amps.imag * amps.imag
            prob = p.sum(axis=1)
            keep = p > (TERM_THRESHOLD * TERM_THRESHOLD) * prob[:, None]
            n_terms = keep.sum(axis=1)
            # E = log2(P) - (sum p log2 p)/P for unnormalized weights p
            plog = (p * np.log2(np.maximum(p, _TINY))).sum(axis=1)
            safe = np.maximum(prob, _TINY)
            e_bits = np.where(prob > 0.0, np.log2(safe) - plog / safe, 0.0)
            cal = np.where(
                n_terms >= 2, e_bits / np.log2(np.maximum(n_terms, 2)), 0.0
            )
            cal = np.minimum(np.where(prob > 0.0, cal, 0.0), 1.0)
            metrics[outcome] = (prob, n_terms, e_bits, cal)
        yield a, metrics


def _auto_chunk(n_steps: int) -> int:
    # keep each (batch, 2 n + 1) complex array around 32 MB
    return max(4096, (1 << 21) // (2 * n_steps + 1))


_OUTCOME_ORDER = {Spin.UP: 0, Spin.DOWN: 1}


def _chunk_params(axes, sizes, start, stop):
    idx = np.arange(start, stop)
    subs = np.unravel_index(idx, sizes)
    return [axes[d][subs[d]] for d in range(len(axes))]


def _search_chunk(task):
    """Scan one chunk of grid indices; return hit rows sorted by tuple."""
    (start, stop, grid_step, n_steps, mode_value, p_threshold, avg_threshold, maximal_atol) = task
    axes = [grid_axis(name, grid_step) for name in PARAM_RANGES]
    sizes = [axis.size for axis in axes]
    params = _chunk_params(axes, sizes, start, stop)
    rows = []
    if mode_value == SearchMode.ISOLATED_MAX.value:
        for a, metrics in _batch_metrics(*params, n_steps=n_steps):
            for outcome, (prob, n_terms, _e, cal) in metrics.items():
                hit = (cal > 1.0 - maximal_atol) & (prob > p_threshold)
                for i in np.nonzero(hit)[0]:
                    rows.append(
                        (
                            int(i),
                            a,
                            _OUTCOME_ORDER[outcome],
                            outcome.value,
                            float(cal[i]),
                            float(prob[i]),
                            int(n_terms[i]),
                        )
                    )
    else:
        batch = params[0].size
        total = {s: np.zeros(batch) for s in (Spin.UP, Spin.DOWN)}
        min_p = {s: np.ones(batch) for s in (Spin.UP, Spin.DOWN)}
        last_n = {s: np.ones(batch, dtype=np.int64) for s in (Spin.UP, Spin.DOWN)}
        for a, metrics in _batch_metrics(*params, n_steps=n_steps):
            for outcome, (prob, n_terms, _e, cal) in metrics.items():
                total[outcome] += cal
                np.minimum(min_p[outcome], prob, out=min_p[outcome])
                last_n[outcome] = n_terms
        for outcome in (Spin.UP, Spin.DOWN):
            mean = total[outcome] / (n_steps - 1)
            hit = (mean > avg_threshold) & (min_p[outcome] > p_threshold)
            for i in np.nonzero(hit)[0]:
                rows.append(
                    (
                        int(i),
                        n_steps,
                        _OUTCOME_ORDER[outcome],
                        outcome.value,
                        float(mean[i]),
                        float(min_p[outcome][i]),
                        int(last_n[outcome][i]),
                    )
                )
    rows.sort()
    out = []
    for i, a, _order, outcome_value, cal, prob, n_terms in rows:
        point = [float(params[d][i]) for d in range(5)]
        out.append((*point, a, outcome_value, cal, prob, n_terms))
    return out


def grid_search(
    grid_step: float,
    n_steps: int,
    mode: SearchMode,
    p_threshold: float = 0.15,
    avg_threshold: float = 0.99,
    maximal_atol: float = MAXIMAL_ATOL,
    workers: int | None = None,
    chunk_size: int | None = None,
) -> Iterator[MaxEntanglementHit]:
    """Scan the full (rho, theta, eta, alpha, beta_arg) grid, streaming hits.

    ISOLATED_MAX reports every (point, step, outcome) whose single-step
    normalized entanglement is maximal with probability above
    p_threshold.  AVERAGED_HIGH reports points whose average over steps
    2..n_steps exceeds avg_threshold while every per-step probability
    stays above p_threshold; its hits carry the average in `normalized`
    and the worst per-step probability in `probability`.

    Hits stream in grid order (then step, then up before down).  The
    scan is chunked, so memory stays bounded for any grid size; pass
    workers > 1 to spread chunks over processes.
    """
    if not 0.0 < p_threshold < 1.0:
        raise ValueError(f"p_threshold must lie in (0, 1), got {p_threshold}")
    if n_steps < 2:
        raise ValueError(f"n_steps must be at least 2, got {n_steps}")
    sizes = [grid_axis(name, grid_step).size for name in PARAM_RANGES]
    total = int(np.prod(sizes))
    chunk = chunk_size or _auto_chunk(n_steps)
    tasks = [
        (start, min(start + chunk, total), grid_step, n_steps, mode.value,
         p_threshold, avg_threshold, maximal_atol)
        for start in range(0, total, chunk)
    ]

    def to_hits(rows):
        for rho, theta, eta, alpha, beta_arg, a, outcome_value, cal, prob, n_terms in rows:
            yield MaxEntanglementHit(
                rho=rho,
                theta=theta,
                eta=eta,
                alpha=alpha,
                beta_arg=beta_arg,
                step=a,
                outcome=Spin(outcome_value),
                normalized=cal,
                probability=prob,
                term_count=n_terms,
            )

    if workers and workers > 1:
        from multiprocessing import get_context

        with get_context("fork").Pool(processes=workers) as pool:
            for rows in pool.imap(_search_chunk, tasks):
                yield from to_hits(rows)
    else:
        for task in tasks:
            yield from to_hits(_search_chunk(task))


def find_max_cases(
    coin_family: CoinFamily,
    n_max: int,
    p_threshold: float,
    alpha_values: Iterable[float] | None = None,
    beta_arg_values: Iterable[float] | None = None,
    maximal_atol: float = MAXIMAL_ATOL,
) -> list[MaxEntanglementHit]:
    """Catalog maximal-entanglement events for one named coin.

    Walks every (alpha, beta_arg) point of the given grids (defaults:
    0.1-step grids, the exact balanced alpha, and the quarter-turn
    phases, which is where the degenerate walks live) for n_max steps
    and records every step whose normalized entanglement is maximal with
    probability above p_threshold.  Use `grid_search` to scan the
    general coin.
    """
    if coin_family is CoinFamily.GENERAL:
        raise ValueError("find_max_cases catalogs a named coin; use grid_search")
    coin = family_coin(coin_family)
    if alpha_values is None:
        alpha_values = np.append(grid_axis("alpha", 0.1), BALANCED_ALPHA)
        alpha_values = np.unique(alpha_values)
    if beta_arg_values is None:
        quarter = float(np.pi / 2)
        extra = [quarter, 2 * quarter, 3 * quarter]
        beta_arg_values = np.unique(np.append(grid_axis("beta_arg", 0.1), extra))
    hits = []
    for alpha in alpha_values:
        alpha = float(alpha)
        for beta_arg in beta_arg_values:
            beta_arg = float(beta_arg)
            if alpha == BALANCED_ALPHA:
                shift = balanced_shift(beta_arg)
            else:
                shift = ShiftOperator(alpha=alpha, beta_arg=beta_arg)
            records = _series(coin, shift, n_max, (Spin.UP, Spin.DOWN))
            for outcome in (Spin.UP, Spin.DOWN):
                for record in records[outcome]:
                    if (
                        record.normalized > 1.0 - maximal_atol
                        and record.probability > p_threshold
                    ):
                        hits.append(
                            MaxEntanglementHit(
                                rho=coin.rho,
                                theta=coin.theta,
                                eta=coin.eta,
                                alpha=alpha,
                                beta_arg=beta_arg,
                                step=record.step,
                                outcome=outcome,
                                normalized=record.normalized,
                                probability=record.probability,
                                term_count=record.term_count,
                            )
                        )
    hits.sort(
        key=lambda h: (h.alpha, h.beta_arg, h.step, _OUTCOME_ORDER[h.outcome])
    )
    return hits
