"""State representation and unitary evolution for a coined quantum walk
of two walkers that move together on the integer line.

The joint state is a superposition of terms |s> (x) |i,i> where s is a
spin-1/2 component (the coin) and i is a lattice site shared by both
walkers.  One step applies a 2x2 unitary coin to the spin factor and then
a spin-conditioned translation: the up-projected part moves by p sites
with mixing weights (alpha, beta), the down-projected part by q sites
with weights (-conj(beta), conj(alpha)).  Measuring the coin collapses
the position factor to a pure state whose amplitudes carry the
walker-walker entanglement.
"""

import numpy as np
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

__all__ = [
    "TERM_THRESHOLD",
    "UNITARITY_ATOL",
    "BALANCED_ALPHA",
    "Spin",
    "CoinOperator",
    "ShiftOperator",
    "WalkState",
    "CollapseResult",
    "phase_factor",
    "hadamard_coin",
    "kempe_coin",
    "z_coin",
    "balanced_shift",
    "initial_state",
    "step",
    "iter_steps",
    "evolve",
    "measure_spin",
    "orthonormality_residual",
    "verify_shift_unitarity",
]

#: modulus below which a collapsed amplitude does not count as a term
TERM_THRESHOLD = 1e-10

#: entrywise tolerance for unitarity checks
UNITARITY_ATOL = 1e-12

#: alpha = |beta| at the equal-weight point of the shift operator
BALANCED_ALPHA = float(np.sqrt(0.5))

_QUARTER_TURN = float(np.pi / 2)
_TWO_PI = float(2.0 * np.pi)

# exp(i k pi/2) for k = -8..8, keyed by the float value of the angle
_UNIT_PHASES = {
    k * _QUARTER_TURN: (1 + 0j, 1j, -1 + 0j, -1j)[k % 4] for k in range(-8, 9)
}


def phase_factor(angle: float) -> complex:
    """Return exp(i*angle), exact at multiples of pi/2.

    Exactness at quarter turns keeps walks that degenerate into a single
    product-state chain exactly degenerate: the dead spin branch receives
    amplitude 0.0 rather than O(1e-16) rounding leakage, which would
    otherwise masquerade as a spurious collapsed state.
    """
    unit = _UNIT_PHASES.get(float(angle))
    if unit is not None:
        return unit
    return complex(np.cos(angle), np.sin(angle))


class Spin(Enum):
    """Z-axis spin eigenstates of the coin."""

    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class CoinOperator:
    """U(2) coin acting on the spin factor each step.

    The realized matrix is

        [[ sqrt(rho),                sqrt(1-rho) e^{i(theta-eta)} ],
         [ -sqrt(1-rho) e^{-i(theta+eta)}, sqrt(rho) e^{-2i eta}  ]] * e^{i phi}

    with rho in [0, 1], theta and eta in [0, pi] and a global phase phi
    in [0, 2 pi) that plays no role in any entanglement measure.
    """

    rho: float
    theta: float
    eta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.eta <= np.pi:
            raise ValueError(f"eta must lie in [0, pi], got {self.eta}")
        if not 0.0 <= self.phi < _TWO_PI:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    def matrix(self) -> np.ndarray:
        """Realize the coin as a 2x2 complex128 array."""
        stay = np.sqrt(self.rho)
        flip = np.sqrt(1.0 - self.rho)
        m = np.array(
            [
                [stay, flip * phase_factor(self.theta - self.eta)],
                [
                    -flip * phase_factor(-(self.theta + self.eta)),
                    stay * phase_factor(-2.0 * self.eta),
                ],
            ],
            dtype=np.complex128,
        )
        if self.phi != 0.0:
            m = m * phase_factor(self.phi)
        return m

    def unitarity_residual(self) -> float:
        """Max entrywise deviation of U U+ from the identity."""
        u = self.matrix()
        return float(np.max(np.abs(u @ u.conj().T - np.eye(2))))


def hadamard_coin() -> CoinOperator:
    """Coin realizing (1/sqrt 2) [[1, 1], [1, -1]] exactly."""
    return CoinOperator(rho=0.5, theta=np.pi / 2, eta=np.pi / 2)


def kempe_coin() -> CoinOperator:
    """Coin realizing (1/sqrt 2) [[1, i], [i, 1]] exactly."""
    return CoinOperator(rho=0.5, theta=np.pi / 2, eta=0.0)


def z_coin() -> CoinOperator:
    """Coin realizing [[1, 0], [0, -1]] exactly.

    At rho = 1 the off-diagonal entries vanish, so theta is irrelevant
    and is pinned to 0.
    """
    return CoinOperator(rho=1.0, theta=0.0, eta=np.pi / 2)


@dataclass(frozen=True)
class ShiftOperator:
    """Spin-conditioned translation of the walker pair.

    The up output moves by p sites, the down output by q sites.  alpha is
    real in [0, 1] by convention (its phase can always be absorbed into a
    redefinition of the spin eigenstates) and beta is derived as
    sqrt(1 - alpha^2) e^{i beta_arg}, so (alpha, beta) and
    (-conj(beta), conj(alpha)) form an orthonormal pair by construction.

    beta_mod optionally pins |beta| directly.  It exists for the balanced
    point alpha = |beta| = 1/sqrt 2, which is not reachable through the
    sqrt derivation in binary floating point (sqrt(1 - alpha^2) lands one
    ulp away from alpha); see `balanced_shift`.
    """

    alpha: float
    beta_arg: float = 0.0
    p: int = 1
    q: int = -1
    beta_mod: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.p == self.q:
            raise ValueError(
                f"p and q must differ, got p = q = {self.p}; equal displacements "
                "move both walkers identically and the walk generates no entanglement"
            )
        if not 0.0 <= self.beta_arg < _TWO_PI:
            object.__setattr__(self, "beta_arg", float(np.mod(self.beta_arg, _TWO_PI)))
        if self.beta_mod is not None:
            err = abs(self.alpha * self.alpha + self.beta_mod * self.beta_mod - 1.0)
            if err > UNITARITY_ATOL:
                raise ValueError(
                    f"beta_mod breaks alpha^2 + |beta|^2 = 1 by {err:.3e}"
                )

    @property
    def beta(self) -> complex:
        """Complex beta coefficient."""
        if self.beta_mod is not None:
            mod = self.beta_mod
        else:
            mod = np.sqrt((1.0 - self.alpha) * (1.0 + self.alpha))
        return mod * phase_factor(self.beta_arg)


def balanced_shift(beta_arg: float = 0.0, p: int = 1, q: int = -1) -> ShiftOperator:
    """Shift at the balanced point alpha = |beta| = 1/sqrt 2.

    Both moduli are the same float, so walks that degenerate into a
    product-state chain at this point stay exactly degenerate.
    """
    return ShiftOperator(
        alpha=BALANCED_ALPHA, beta_arg=beta_arg, p=p, q=q, beta_mod=BALANCED_ALPHA
    )


def orthonormality_residual(alpha: complex, beta: complex) -> float:
    """Residual of the orthonormality conditions for a raw (alpha, beta) pair.

    Builds V1 = (alpha, beta) and V2 = (-conj(beta), conj(alpha)) and
    returns the largest deviation among |V1 . conj(V2)|, | |V1|^2 - 1 |
    and | |V2|^2 - 1 |.  Zero residual is exactly what makes the shift
    operator unitary.
    """
    v1 = np.array([alpha, beta], dtype=np.complex128)
    v2 = np.array([-np.conj(beta), np.conj(alpha)], dtype=np.complex128)
    cross = abs(np.vdot(v2, v1))
    n1 = abs(np.vdot(v1, v1).real - 1.0)
    n2 = abs(np.vdot(v2, v2).real - 1.0)
    return float(max(cross, n1, n2))


def verify_shift_unitarity(
    shift: ShiftOperator, atol: float = UNITARITY_ATOL
) -> tuple[bool, float]:
    """Check the unitarity of a shift operator.

    Returns (ok, residual) where residual is the worst orthonormality
    deviation of its coefficient vectors.
    """
    residual = orthonormality_residual(complex(shift.alpha), shift.beta)
    return residual < atol, residual


@dataclass(frozen=True)
class WalkState:
    """Joint coin (x) position state after some number of steps.

    Entry k of each amplitude array belongs to |s> (x) |i,i> with
    i = offset + k.  Sites emptied by the parity of the walk are stored
    as exact zeros.  Instances are immutable; the arrays are marked
    read-only so states can be shared freely between workers.
    """

    step: int
    offset: int
    amps_up: np.ndarray
    amps_down: np.ndarray

    def __post_init__(self):
        self.amps_up.flags.writeable = False
        self.amps_down.flags.writeable = False

    def sites(self) -> np.ndarray:
        """Position indices covered by the amplitude arrays."""
        return self.offset + np.arange(self.amps_up.size)

    def norm(self) -> float:
        """Euclidean norm of the joint state (1 for a valid state)."""
        total = np.sum(np.abs(self.amps_up) ** 2) + np.sum(np.abs(self.amps_down) ** 2)
        return float(np.sqrt(total))

    def amplitude(self, spin: Spin, site: int) -> complex:
        """Amplitude of |spin> (x) |site,site>, 0 outside the stored range."""
        k = site - self.offset
        if not 0 <= k < self.amps_up.size:
            return 0j
        amps = self.amps_up if spin is Spin.UP else self.amps_down
        return complex(amps[k])


def initial_state() -> WalkState:
    """The walk's starting state |up> (x) |0,0>.

    Any product initial state can be brought to this form by redefining
    the spin axes and the origin of the line, so nothing is lost by
    pinning it.
    """
    one = np.array([1.0 + 0.0j])
    zero = np.array([0.0 + 0.0j])
    return WalkState(step=0, offset=0, amps_up=one, amps_down=zero)


def step(state: WalkState, coin: CoinOperator, shift: ShiftOperator) -> WalkState:
    """Advance the walk by one coin + shift application."""
    u = coin.matrix()
    bu = u[0, 0] * state.amps_up + u[0, 1] * state.amps_down
    bd = u[1, 0] * state.amps_up + u[1, 1] * state.amps_down

    lo = min(shift.p, shift.q)
    width = state.amps_up.size
    new_width = width + (max(shift.p, shift.q) - lo)
    new_up = np.zeros(new_width, dtype=np.complex128)
    new_down = np.zeros(new_width, dtype=np.complex128)

    beta = shift.beta
    ku = shift.p - lo
    kd = shift.q - lo
    # alpha is real by convention, so conj(alpha) = alpha
    new_up[ku : ku + width] = shift.alpha * bu + beta * bd
    new_down[kd : kd + width] = -beta.conjugate() * bu + shift.alpha * bd
    return WalkState(
        step=state.step + 1,
        offset=state.offset + lo,
        amps_up=new_up,
        amps_down=new_down,
    )


def iter_steps(
    coin: CoinOperator, shift: ShiftOperator, n_steps: int
) -> Iterator[WalkState]:
    """Yield the walk state after each of steps 1..n_steps."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be non-negative, got {n_steps}")
    state = initial_state()
    for _ in range(n_steps):
        state = step(state, coin, shift)
        yield state


def evolve(coin: CoinOperator, shift: ShiftOperator, n_steps: int) -> WalkState:
    """Return the walk state after n_steps steps from the initial state."""
    state = initial_state()
    for state in iter_steps(coin, shift, n_steps):
        pass
    return state


@dataclass(frozen=True)
class CollapseResult:
    """Outcome of measuring the coin after some number of steps.

    amps holds the normalized position amplitudes of the post-measurement
    state (empty when the outcome has zero probability, which is a valid
    degenerate result rather than an error: downstream averages assign it
    zero entanglement).  term_count counts amplitudes with modulus above
    TERM_THRESHOLD.
    """

    outcome: Spin
    probability: float
    amps: np.ndarray
    offset: int
    term_count: int

    def __post_init__(self):
        self.amps.flags.writeable = False

    def sites(self) -> np.ndarray:
        return self.offset + np.arange(self.amps.size)


def measure_spin(
    state: WalkState, outcome: Spin, threshold: float = TERM_THRESHOLD
) -> CollapseResult:
    """Project the walk state onto a spin outcome and normalize.

    probability is the chance of obtaining the outcome; the returned
    amplitudes are those of the collapsed position state.  threshold is
    the modulus cutoff for counting terms.
    """
    amps = state.amps_up if outcome is Spin.UP else state.amps_down
    weights = amps.real * amps.real + amps.imag * amps.imag
    probability = float(weights.sum())
    if probability == 0.0:
        return CollapseResult(
            outcome=outcome,
            probability=0.0,
            amps=np.zeros(0, dtype=np.complex128),
            offset=state.offset,
            term_count=0,
        )
    collapsed = amps / np.sqrt(probability)
    n_terms = int(np.count_nonzero(np.abs(collapsed) > threshold))
    return CollapseResult(
        outcome=outcome,
        probability=probability,
        amps=collapsed,
        offset=state.offset,
        term_count=n_terms,
    )
