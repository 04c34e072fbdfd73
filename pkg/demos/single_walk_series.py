"""Per-step entanglement of single walks near the balanced point.

The closer alpha sits to 1/sqrt(2) (with real beta and the hadamard
coin), the longer the down-outcome entanglement stays pinned at the
maximum before drifting off; the price is that the down outcome itself
becomes ever less likely.
"""

from tandemwalk import ShiftOperator, Spin, hadamard_coin, walk_entanglement_series

N_STEPS = 400

for alpha in (0.7071067812, 0.71, 0.37):
    series = walk_entanglement_series(
        hadamard_coin(), ShiftOperator(alpha=alpha), N_STEPS, Spin.DOWN
    )
    pinned = sum(1 for r in series[1:] if r.normalized > 0.999)
    last = series[-1]
    print(f"alpha = {alpha}")
    print(f"  steps 2..{N_STEPS} with normalized entanglement > 0.999: {pinned} of {N_STEPS - 1}")
    print(f"  at step {last.step}: E/E_max = {last.normalized:.4f}, "
          f"N = {last.term_count}, P(down) = {last.probability:.3e}")
