import numpy as np
import pytest

from tandemwalk import (
    BALANCED_ALPHA,
    CoinOperator,
    ShiftOperator,
    Spin,
    balanced_shift,
    evolve,
    hadamard_coin,
    initial_state,
    iter_steps,
    kempe_coin,
    measure_spin,
    orthonormality_residual,
    phi1,
    step,
    verify_shift_unitarity,
    z_coin,
)

QUARTER = np.pi / 2


def reference_walk(coin_matrix, alpha, beta, p, q, n_steps):
    """Dict-based brute-force walk, independent of the array engine."""
    amps = {(Spin.UP, 0): 1.0 + 0.0j}
    for _ in range(n_steps):
        after_coin = {}
        for (spin, site), value in amps.items():
            col = 0 if spin is Spin.UP else 1
            for row, out in enumerate((Spin.UP, Spin.DOWN)):
                key = (out, site)
                after_coin[key] = after_coin.get(key, 0.0) + coin_matrix[row, col] * value
        shifted = {}
        for (spin, site), value in after_coin.items():
            if value == 0:
                continue
            up_key = (Spin.UP, site + p)
            down_key = (Spin.DOWN, site + q)
            up_term = (alpha if spin is Spin.UP else beta) * value
            down_term = (-np.conj(beta) if spin is Spin.UP else np.conj(alpha)) * value
            shifted[up_key] = shifted.get(up_key, 0.0) + up_term
            shifted[down_key] = shifted.get(down_key, 0.0) + down_term
        amps = shifted
    return amps


def random_operators(rng):
    coin = CoinOperator(
        rho=rng.uniform(0, 1), theta=rng.uniform(0, np.pi), eta=rng.uniform(0, np.pi)
    )
    shift = ShiftOperator(alpha=rng.uniform(0, 1), beta_arg=rng.uniform(0, 2 * np.pi))
    return coin, shift


class TestCoins:
    def test_hadamard_matrix_exact(self):
        c = np.sqrt(0.5)
        expected = np.array([[c, c], [c, -c]])
        got = hadamard_coin().matrix()
        assert np.array_equal(got, expected.astype(complex))

    def test_kempe_matrix_exact(self):
        c = np.sqrt(0.5)
        expected = np.array([[c, c * 1j], [c * 1j, c]])
        assert np.array_equal(kempe_coin().matrix(), expected)

    def test_z_matrix_exact(self):
        assert np.array_equal(
            z_coin().matrix(), np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
        )

    def test_hadamard_involution(self):
        u = hadamard_coin().matrix()
        assert np.allclose(u @ u, np.eye(2), atol=1e-15)

    def test_z_involution_and_diagonal_action(self):
        u = z_coin().matrix()
        assert np.allclose(u @ u, np.eye(2), atol=0)
        assert u[0, 0] == 1.0 and u[1, 1] == -1.0

    def test_kempe_square_matches_direct_product(self):
        u = kempe_coin().matrix()
        direct = u @ u  # 2x2 multiplication oracle
        assert np.allclose(u @ u, direct, atol=0)
        assert np.allclose(direct, np.array([[0, 1j], [1j, 0]]), atol=1e-15)

    @pytest.mark.parametrize("coin", [hadamard_coin(), kempe_coin(), z_coin()])
    def test_named_coins_unitary(self, coin):
        assert coin.unitarity_residual() < 1e-12

    def test_general_matrix_against_direct_evaluation(self):
        rho, theta, eta = 0.3, 1.1, 0.4
        got = CoinOperator(rho=rho, theta=theta, eta=eta).matrix()
        expected = np.array(
            [
                [np.sqrt(rho), np.sqrt(1 - rho) * np.exp(1j * (theta - eta))],
                [
                    -np.sqrt(1 - rho) * np.exp(-1j * (theta + eta)),
                    np.sqrt(rho) * np.exp(-2j * eta),
                ],
            ]
        )
        assert np.allclose(got, expected, atol=1e-15)
        residual = np.max(np.abs(got @ got.conj().T - np.eye(2)))
        assert residual < 1e-12

    def test_identity_point(self):
        got = CoinOperator(rho=1.0, theta=0.7, eta=0.0).matrix()
        assert np.array_equal(got, np.eye(2, dtype=complex))

    def test_random_coins_unitary(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            coin, _ = random_operators(rng)
            assert coin.unitarity_residual() < 1e-12

    def test_global_phase_applied(self):
        base = CoinOperator(rho=0.4, theta=0.5, eta=0.6)
        phased = CoinOperator(rho=0.4, theta=0.5, eta=0.6, phi=1.2)
        assert np.allclose(phased.matrix(), base.matrix() * np.exp(1.2j), atol=1e-15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rho": -0.1, "theta": 0.0, "eta": 0.0},
            {"rho": 1.1, "theta": 0.0, "eta": 0.0},
            {"rho": 0.5, "theta": -0.2, "eta": 0.0},
            {"rho": 0.5, "theta": 4.0, "eta": 0.0},
            {"rho": 0.5, "theta": 0.0, "eta": 3.2},
            {"rho": 0.5, "theta": 0.0, "eta": 0.0, "phi": 6.5},
        ],
    )
    def test_out_of_range_rejected(self, kwargs):
        with pytest.raises(ValueError):
            CoinOperator(**kwargs)


class TestShift:
    def test_beta_derivation(self):
        s = ShiftOperator(alpha=0.6, beta_arg=1.2)
        assert abs(abs(s.beta) - 0.8) < 1e-15
        assert abs(np.angle(s.beta) - 1.2) < 1e-15

    def test_equal_displacements_rejected(self):
        with pytest.raises(ValueError, match="p and q"):
            ShiftOperator(alpha=0.5, p=2, q=2)

    def test_alpha_range(self):
        with pytest.raises(ValueError, match="alpha"):
            ShiftOperator(alpha=1.5)

    def test_balanced_shift_is_exactly_balanced(self):
        s = balanced_shift()
        assert s.alpha == BALANCED_ALPHA
        assert s.beta == BALANCED_ALPHA  # identical floats, real phase

    def test_bad_beta_mod_rejected(self):
        with pytest.raises(ValueError, match="beta_mod"):
            ShiftOperator(alpha=0.6, beta_mod=0.9)

    def test_unitarity_trivial_point(self):
        ok, residual = verify_shift_unitarity(ShiftOperator(alpha=1.0, beta_arg=2.5))
        assert ok and residual < 1e-12

    def test_unitarity_generic_point(self):
        ok, residual = verify_shift_unitarity(ShiftOperator(alpha=0.6, beta_arg=1.2))
        assert ok and residual < 1e-12

    def test_corrupted_pair_detected(self):
        residual = orthonormality_residual(0.6, 0.8 + 1e-3)
        assert residual > 1e-12

    def test_beta_arg_wraps(self):
        s = ShiftOperator(alpha=0.5, beta_arg=2 * np.pi)
        assert s.beta_arg == 0.0


class TestEvolution:
    def test_initial_state(self):
        s = initial_state()
        assert s.step == 0
        assert abs(s.norm() - 1.0) < 1e-15
        assert s.amplitude(Spin.UP, 0) == 1.0
        assert measure_spin(s, Spin.UP).probability == 1.0

    def test_single_step_balanced_hadamard(self):
        after = step(initial_state(), hadamard_coin(), balanced_shift())
        assert after.amplitude(Spin.UP, 1) == 1.0000000000000002 or abs(
            after.amplitude(Spin.UP, 1) - 1.0
        ) < 1e-15
        assert after.amplitude(Spin.DOWN, -1) == 0.0

    def test_norm_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            coin, shift = random_operators(rng)
            state = evolve(coin, shift, 40)
            assert abs(state.norm() - 1.0) < 1e-12

    def test_single_step_matches_closed_form(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            coin, shift = random_operators(rng)
            state = step(initial_state(), coin, shift)
            up, down = phi1(coin, shift)
            assert abs(state.amplitude(Spin.UP, 1) - up) < 1e-12
            assert abs(state.amplitude(Spin.DOWN, -1) - down) < 1e-12

    def test_kempe_chains(self):
        up_chain = evolve(kempe_coin(), balanced_shift(3 * QUARTER), 7)
        assert abs(abs(up_chain.amplitude(Spin.UP, 7)) - 1.0) < 1e-12
        assert measure_spin(up_chain, Spin.DOWN).probability == 0.0

    def test_engine_matches_reference_walk(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            coin, shift = random_operators(rng)
            state = evolve(coin, shift, 6)
            expected = reference_walk(coin.matrix(), shift.alpha, shift.beta, 1, -1, 6)
            for (spin, site), value in expected.items():
                assert abs(state.amplitude(spin, site) - value) < 1e-12

    def test_support_and_parity(self):
        rng = np.random.default_rng(13)
        coin, shift = random_operators(rng)
        for state in iter_steps(coin, shift, 31):
            n = state.step
            sites = state.sites()
            for amps in (state.amps_up, state.amps_down):
                occupied = sites[np.abs(amps) > 0]
                if occupied.size:
                    assert np.max(np.abs(occupied)) <= n
                    assert np.all((occupied - n) % 2 == 0)

    def test_probability_completeness(self):
        rng = np.random.default_rng(17)
        coin, shift = random_operators(rng)
        for state in iter_steps(coin, shift, 60):
            total = (
                measure_spin(state, Spin.UP).probability
                + measure_spin(state, Spin.DOWN).probability
            )
            assert abs(total - 1.0) < 1e-12

    def test_wider_displacements_rescale_the_line(self):
        rng = np.random.default_rng(19)
        coin, shift = random_operators(rng)
        doubled = ShiftOperator(alpha=shift.alpha, beta_arg=shift.beta_arg, p=2, q=-2)
        narrow = evolve(coin, shift, 9)
        wide = evolve(coin, doubled, 9)
        for site in narrow.sites():
            for spin in Spin:
                assert (
                    abs(narrow.amplitude(spin, site) - wide.amplitude(spin, 2 * site))
                    < 1e-12
                )

    def test_first_step_never_entangles(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            coin, shift = random_operators(rng)
            state = evolve(coin, shift, 1)
            for outcome in Spin:
                assert measure_spin(state, outcome).term_count <= 1


class TestMeasurement:
    def test_degenerate_outcome(self):
        state = evolve(hadamard_coin(), balanced_shift(), 5)
        result = measure_spin(state, Spin.DOWN)
        assert result.probability == 0.0
        assert result.term_count == 0
        assert result.amps.size == 0

    def test_initial_up_measurement(self):
        result = measure_spin(initial_state(), Spin.UP)
        assert result.probability == 1.0
        assert result.term_count == 1
        assert result.amps[0] == 1.0

    def test_z_coin_two_step_collapse_against_reference(self):
        shift = balanced_shift(0.7)
        state = evolve(z_coin(), shift, 2)
        result = measure_spin(state, Spin.UP)
        expected = reference_walk(z_coin().matrix(), shift.alpha, shift.beta, 1, -1, 2)
        prob = sum(
            abs(v) ** 2 for (spin, _), v in expected.items() if spin is Spin.UP
        )
        assert abs(result.probability - prob) < 1e-12
        # collapsed amplitudes proportional to (alpha^2, |beta|^2) on sites (2, 0)
        a2 = result.amps[np.where(result.sites() == 2)[0][0]]
        b2 = result.amps[np.where(result.sites() == 0)[0][0]]
        ratio = abs(a2) / abs(b2)
        assert abs(ratio - shift.alpha**2 / abs(shift.beta) ** 2) < 1e-12

    def test_collapse_normalized(self):
        rng = np.random.default_rng(29)
        coin, shift = random_operators(rng)
        for state in iter_steps(coin, shift, 20):
            for outcome in Spin:
                result = measure_spin(state, outcome)
                if result.probability > 0:
                    total = np.sum(np.abs(result.amps) ** 2)
                    assert abs(total - 1.0) < 1e-12


class TestLongWalks:
    def test_norm_drift_over_1000_steps(self):
        cases = [
            (hadamard_coin(), balanced_shift()),
            (kempe_coin(), ShiftOperator(alpha=0.37, beta_arg=2.1)),
            (CoinOperator(rho=0.83, theta=2.0, eta=0.9), ShiftOperator(alpha=0.52, beta_arg=4.4)),
        ]
        for coin, shift in cases:
            state = evolve(coin, shift, 1000)
            assert abs(state.norm() - 1.0) < 1e-10
