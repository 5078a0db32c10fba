"""Exact Hilbert-space oracle: builds, conjugation, evolution, error scaling."""

import numpy as np
import pytest

from spinrev import (
    Scheme,
    SchemeKind,
    Step,
    axis_cycle,
    build_hamiltonian,
    complete_weights,
    conjugation_consistency,
    dipole_type,
    error_scaling,
    evolve,
    kron_all,
    lift_rotations,
    octahedral_group,
    operator_norm,
    pi_rotation,
    run_cycle,
    scalar_type,
    synthesize_case1,
    tensor_coupling,
)

from helpers import random_coupling, random_rotation

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def seeded_dipole_3(seed=0):
    rng = np.random.default_rng(seed)
    W = np.zeros((3, 3))
    for k in range(3):
        for l in range(k + 1, 3):
            W[k, l] = W[l, k] = rng.uniform(-1.0, 1.0)
    return W, tensor_coupling(W, dipole_type())


class TestBuildHamiltonian:
    def test_single_zz_pair(self):
        J = np.zeros((6, 6))
        J[2, 5] = J[5, 2] = 1.0
        assert np.array_equal(build_hamiltonian(J), np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex))

    def test_two_spin_dipole_against_kron_oracle(self):
        J = tensor_coupling(complete_weights(2), dipole_type())
        expected = np.kron(SX, SX) + np.kron(SY, SY) - 2.0 * np.kron(SZ, SZ)
        assert np.abs(build_hamiltonian(J) - expected).max() <= 1e-14

    def test_linearity(self):
        rng = np.random.default_rng(71)
        J1, J2 = random_coupling(rng, 3), random_coupling(rng, 3)
        alpha, beta = rng.normal(size=2)
        lhs = build_hamiltonian(alpha * J1 + beta * J2)
        rhs = alpha * build_hamiltonian(J1) + beta * build_hamiltonian(J2)
        assert np.abs(lhs - rhs).max() <= 1e-12 * max(np.abs(lhs).max(), 1.0)

    def test_hermitian_and_traceless(self):
        rng = np.random.default_rng(72)
        H = build_hamiltonian(random_coupling(rng, 3))
        assert np.abs(H - H.conj().T).max() <= 1e-12
        assert abs(np.trace(H)) <= 1e-12

    def test_energy_scale_linearity(self):
        rng = np.random.default_rng(73)
        J = random_coupling(rng, 2)
        assert np.abs(build_hamiltonian(4.0 * J) - 4.0 * build_hamiltonian(J)).max() <= 1e-12

    def test_spin_cap(self):
        with pytest.raises(ValueError, match="cap"):
            build_hamiltonian(np.zeros((33, 33)))


class TestConjugationConsistency:
    def test_identity(self):
        J = tensor_coupling(complete_weights(2), dipole_type())
        assert conjugation_consistency(J, np.tile(np.eye(3), (2, 1, 1))) == 0.0

    def test_collective_axis_cycle_on_dipole(self):
        J = tensor_coupling(complete_weights(2), dipole_type())
        assert conjugation_consistency(J, np.tile(axis_cycle(), (2, 1, 1))) <= 1e-10

    def test_random_assemblies_on_random_couplings(self):
        rng = np.random.default_rng(74)
        group = octahedral_group()
        for _ in range(20):
            J = random_coupling(rng, 3)
            octa = group[rng.integers(0, 24, size=3)]
            assert conjugation_consistency(J, octa) <= 1e-9
            haar = np.stack([random_rotation(rng) for _ in range(3)])
            assert conjugation_consistency(J, haar) <= 1e-9

    def test_dimension_mismatch(self):
        J = tensor_coupling(complete_weights(3), scalar_type())
        with pytest.raises(ValueError, match="mismatch"):
            conjugation_consistency(J, np.tile(np.eye(3), (2, 1, 1)))


class TestEvolve:
    def test_zero_time(self):
        H = build_hamiltonian(tensor_coupling(complete_weights(2), dipole_type()))
        assert np.abs(evolve(H, 0.0) - np.eye(4)).max() <= 1e-14

    def test_diagonal_closed_form(self):
        H = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)  # sigma_z (x) sigma_z
        U = evolve(H, np.pi / 4)
        phases = np.exp(-1j * np.pi / 4 * np.array([1.0, -1.0, -1.0, 1.0]))
        assert np.abs(U - np.diag(phases)).max() <= 1e-14

    def test_group_law(self):
        rng = np.random.default_rng(75)
        H = build_hamiltonian(random_coupling(rng, 2))
        s, t = 0.37, 0.81
        assert np.abs(evolve(H, s) @ evolve(H, t) - evolve(H, s + t)).max() <= 1e-10

    def test_unitarity(self):
        rng = np.random.default_rng(76)
        H = build_hamiltonian(random_coupling(rng, 3))
        U = evolve(H, 0.9)
        assert np.abs(U.conj().T @ U - np.eye(8)).max() <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            evolve(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex), 1.0)


class TestRunCycle:
    def test_two_spin_cycle_is_unitary_and_reverses_evolution(self):
        # with two spins the three collective-axis terms commute, so the
        # cycle matches exp(+iH eps) at machine precision for every eps
        W = complete_weights(2)
        J = tensor_coupling(W, dipole_type())
        scheme = synthesize_case1(W, dipole_type())
        H = build_hamiltonian(J)
        for eps in (0.2, 0.1, 0.05):
            C = run_cycle(J, scheme, eps)
            assert np.abs(C.conj().T @ C - np.eye(4)).max() <= 1e-10
            assert operator_norm(C - evolve(H, -eps)) <= 1e-12

    def test_three_spin_cycle_error_vanishes_with_epsilon(self):
        W, J = seeded_dipole_3()
        scheme = synthesize_case1(W, dipole_type())
        H = build_hamiltonian(J)
        errors = [operator_norm(run_cycle(J, scheme, eps) - evolve(H, -eps)) for eps in (0.2, 0.1, 0.05)]
        assert errors[0] > errors[1] > errors[2]

    def test_zero_epsilon_is_identity(self):
        W = complete_weights(2)
        scheme = synthesize_case1(W, dipole_type())
        C = run_cycle(tensor_coupling(W, dipole_type()), scheme, 0.0)
        assert np.abs(C - np.eye(4)).max() <= 1e-12

    def test_zero_coupling_gives_identity(self):
        scheme = Scheme(SchemeKind.INVERSION, (Step(1.0, np.tile(np.eye(3), (2, 1, 1))),))
        C = run_cycle(np.zeros((6, 6)), scheme, 0.3)
        assert np.abs(C - np.eye(4)).max() <= 1e-12

    def test_unverified_scheme_is_rejected(self):
        J = tensor_coupling(complete_weights(2), scalar_type())
        scheme = Scheme(SchemeKind.INVERSION, (Step(1.0, np.tile(np.eye(3), (2, 1, 1))),))
        with pytest.raises(ValueError, match="does not invert"):
            run_cycle(J, scheme, 0.1)

    def test_matches_hand_built_product_in_step_order(self):
        # step 1 acts first in time, i.e. rightmost in the product
        W, J = seeded_dipole_3(seed=5)
        scheme = synthesize_case1(W, dipole_type())
        H = build_hamiltonian(J)
        eps = 0.3
        product = np.eye(8, dtype=complex)
        for step in scheme.steps:
            v = kron_all(lift_rotations(step.rotations))
            product = (v.conj().T @ evolve(H, step.t * eps) @ v) @ product
        assert np.abs(run_cycle(J, scheme, eps) - product).max() <= 1e-12
        # the reversed product differs for this non-commuting pair of steps
        reversed_product = np.eye(8, dtype=complex)
        for step in reversed(scheme.steps):
            v = kron_all(lift_rotations(step.rotations))
            reversed_product = (v.conj().T @ evolve(H, step.t * eps) @ v) @ reversed_product
        assert np.abs(product - reversed_product).max() > 1e-6

    def test_independent_of_lift_signs(self):
        W, J = seeded_dipole_3()
        scheme = synthesize_case1(W, dipole_type())
        eps = 0.1
        C1 = run_cycle(J, scheme, eps)
        H = build_hamiltonian(J)
        C2 = np.eye(8, dtype=complex)
        for i, step in enumerate(scheme.steps):
            lifts = lift_rotations(step.rotations)
            lifts[i % scheme.n] = -lifts[i % scheme.n]  # flip one lift per step
            v = kron_all(lifts)
            C2 = (v.conj().T @ evolve(H, step.t * eps) @ v) @ C2
        assert np.abs(C1 - C2).max() <= 1e-12


class TestErrorScaling:
    def test_quadratic_slope_for_seeded_dipole(self):
        W, J = seeded_dipole_3()
        scheme = synthesize_case1(W, dipole_type())
        scaling = error_scaling(J, scheme, [0.2, 0.1, 0.05, 0.025])
        assert not scaling.exact
        assert 1.8 <= scaling.slope <= 2.2

    def test_halving_epsilon_quarters_the_error(self):
        W, J = seeded_dipole_3()
        scheme = synthesize_case1(W, dipole_type())
        scaling = error_scaling(J, scheme, [0.2, 0.1, 0.05, 0.025])
        errors = dict(zip(scaling.epsilons, scaling.errors))
        ratio = errors[0.05] / errors[0.1]
        assert 0.2 <= ratio <= 0.3

    def test_error_over_eps_squared_stays_bounded(self):
        W, J = seeded_dipole_3(seed=3)
        scheme = synthesize_case1(W, dipole_type())
        eps = [0.16, 0.08, 0.04, 0.02, 0.01]
        scaling = error_scaling(J, scheme, eps)
        ratios = [err / e**2 for e, err in zip(scaling.epsilons, scaling.errors)]
        assert max(ratios) / min(ratios) <= 3.0

    def test_commuting_cycle_reports_exact(self):
        # zz coupling inverted by a half turn of one spin about x: the
        # single conjugated term commutes with itself, so there is no
        # averaging error at all
        J = tensor_coupling(complete_weights(2), np.diag([0.0, 0.0, 1.0]))
        rotations = np.tile(np.eye(3), (2, 1, 1))
        rotations[1] = pi_rotation("x")
        scheme = Scheme(SchemeKind.INVERSION, (Step(1.0, rotations),))
        scaling = error_scaling(J, scheme, [0.2, 0.1, 0.05])
        assert scaling.exact
        assert scaling.slope is None
        assert max(scaling.errors) < 1e-13

    def test_input_validation(self):
        W, J = seeded_dipole_3()
        scheme = synthesize_case1(W, dipole_type())
        with pytest.raises(ValueError, match="three"):
            error_scaling(J, scheme, [0.1, 0.05])
        with pytest.raises(ValueError, match="distinct"):
            error_scaling(J, scheme, [0.1, 0.1, 0.05])

    def test_serialization(self):
        W, J = seeded_dipole_3()
        scheme = synthesize_case1(W, dipole_type())
        data = error_scaling(J, scheme, [0.2, 0.1, 0.05, 0.025]).to_dict()
        assert set(data) == {"epsilons", "errors", "slope", "exact"}
        assert len(data["errors"]) == 4


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(77)
    for _ in range(10):
        M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        assert abs(operator_norm(M) - np.linalg.svd(M, compute_uv=False)[0]) <= 1e-10
