"""Hunt for exactly maximal entanglement with a workable probability.

A coarse five-parameter scan confirms the pattern: maximal-entanglement
events with P > 0.15 crowd into steps 2..4, after which they die out,
and averaging over a long walk never stays near 1 with that kind of
probability. The richest catalogued events entangle four position terms
at step 4 with P = 1/4.
"""

from collections import Counter

from tandemwalk import CoinFamily, SearchMode, Spin, find_max_cases, grid_search

by_step = Counter()
by_outcome = Counter()
for hit in grid_search(grid_step=0.25, n_steps=8, mode=SearchMode.ISOLATED_MAX,
                       p_threshold=0.15):
    by_step[hit.step] += 1
    by_outcome[hit.outcome.value] += 1
print("isolated maxima on a 0.25 grid, 8 steps, P > 0.15:")
for step in sorted(by_step):
    print(f"  step {step}: {by_step[step]} hits")
print(f"  outcomes: {dict(by_outcome)}")

averaged = list(grid_search(grid_step=0.25, n_steps=40, mode=SearchMode.AVERAGED_HIGH,
                            p_threshold=0.15))
print(f"high averaged entanglement with per-step P > 0.15: {len(averaged)} hits")

print("\nz-coin catalog up to 6 steps (P > 0.15):")
for hit in find_max_cases(CoinFamily.Z, n_max=6, p_threshold=0.15):
    if hit.outcome is Spin.UP or hit.step == 4:
        print(f"  alpha={hit.alpha:.4f} arg(beta)={hit.beta_arg:.3f} step={hit.step} "
              f"{hit.outcome.value}: N={hit.term_count} P={hit.probability:.3f}")
