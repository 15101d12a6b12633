import json
import math

import numpy as np
import pytest

from bregmat.convexity import (
    entropy_class_probe,
    joint_convexity_trial,
    operator_concavity_trial,
    quadratic_form_convexity_trial,
    replay_witness,
    semidefinite_order,
)
from bregmat.calculus import superop_inverse, superoperator_of
from bregmat.functions import custom_family, entropy, quadratic, shifted_entropy, tsallis
from bregmat.linalg import hs_inner, random_hermitian, random_pd, random_pd_floored


def pd_inputs(seed, count, n=3):
    rng = np.random.default_rng(seed)
    return [random_pd_floored(n, rng, floor=0.05) for _ in range(count)]


class TestJointConvexityTrial:
    def test_degenerate_combination(self):
        x, y = pd_inputs(0, 2)
        assert abs(joint_convexity_trial(entropy(), x, y, x, y, 0.37)) <= 1e-12

    def test_entropy_holds_on_samples(self):
        for seed in range(50):
            x1, y1, x2, y2 = pd_inputs(seed, 4)
            assert joint_convexity_trial(entropy(), x1, y1, x2, y2, 0.5) >= -1e-9

    def test_quadratic_matches_frobenius_slack(self):
        x1, y1, x2, y2 = pd_inputs(1, 4)
        t = 0.3

        def sq(x, y):
            return 0.5 * float(np.trace((x - y) @ (x - y)).real)

        expected = (
            t * sq(x1, y1)
            + (1.0 - t) * sq(x2, y2)
            - sq(t * x1 + (1.0 - t) * x2, t * y1 + (1.0 - t) * y2)
        )
        got = joint_convexity_trial(quadratic(1.0), x1, y1, x2, y2, t)
        assert got == pytest.approx(expected, abs=1e-10)
        assert got >= -1e-12


class TestOperatorConcavityTrial:
    def test_equal_arguments(self):
        x, = pd_inputs(2, 1)
        assert abs(operator_concavity_trial(tsallis(1.5), x, x, 0.7)) <= 1e-10

    def test_affine_derivative_map_is_flat(self):
        x1, x2 = pd_inputs(3, 2)
        assert abs(operator_concavity_trial(quadratic(2.0), x1, x2, 0.4)) <= 1e-12

    def test_holds_for_held_family_on_samples(self):
        for seed in range(100):
            x1, x2 = pd_inputs(seed, 2)
            assert operator_concavity_trial(tsallis(1.5), x1, x2, 0.5) >= -1e-9


class TestQuadraticFormTrial:
    def test_zero_directions(self):
        a1, a2 = pd_inputs(4, 2)
        z = np.zeros((3, 3))
        assert quadratic_form_convexity_trial(entropy(), a1, z, a2, z, 0.5) == 0.0

    def test_quadratic_family_reduces_to_norm_convexity(self):
        rng = np.random.default_rng(5)
        a1, a2 = pd_inputs(5, 2)
        b1, b2 = random_hermitian(3, rng), random_hermitian(3, rng)
        t, gamma = 0.6, 1.4
        bm = t * b1 + (1.0 - t) * b2
        expected = gamma * (
            t * hs_inner(b1, b1) + (1.0 - t) * hs_inner(b2, b2) - hs_inner(bm, bm)
        )
        got = quadratic_form_convexity_trial(quadratic(gamma), a1, b1, a2, b2, t)
        assert got == pytest.approx(expected, abs=1e-10)
        assert got >= -1e-12

    def test_entropy_holds_on_samples(self):
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            a1, a2 = random_pd_floored(3, rng), random_pd_floored(3, rng)
            b1, b2 = random_hermitian(3, rng), random_hermitian(3, rng)
            t = float(rng.uniform())
            assert quadratic_form_convexity_trial(entropy(), a1, b1, a2, b2, t) >= -1e-9


class TestProbe:
    def test_held_family(self):
        reports = entropy_class_probe(tsallis(1.5), 3, 150, seed=42)
        for rep in reports.values():
            assert rep.verdict == "held"
            assert rep.min_slack >= -1e-9

    def test_search_finds_concavity_violation_for_q_three(self):
        reports = entropy_class_probe(tsallis(3.0), 3, 50, seed=7)
        rep = reports["operator-concavity"]
        assert rep.verdict == "violated"
        assert rep.min_slack < -1e-8
        assert rep.worst_witness["matrices"]

    def test_single_trial_report_reproduces_byte_identically(self):
        fam = shifted_entropy(0.5)
        a = entropy_class_probe(fam, 3, 1, seed=9)["joint-convexity"]
        b = entropy_class_probe(fam, 3, 1, seed=9)["joint-convexity"]
        assert json.dumps(a.as_dict(), sort_keys=True) == json.dumps(
            b.as_dict(), sort_keys=True
        )

    def test_witness_replays_to_reported_slack(self):
        fam = tsallis(1.3)
        for criterion, rep in entropy_class_probe(fam, 3, 40, seed=3).items():
            replayed = replay_witness(criterion, fam, rep.worst_witness)
            assert abs(replayed - rep.min_slack) <= 1e-12

    def test_concavity_held_implies_joint_convexity_held(self):
        # sampled consistency of the two equivalent membership criteria
        for fam in (entropy(), tsallis(1.5), shifted_entropy(1.0)):
            reports = entropy_class_probe(fam, 3, 60, seed=11)
            if reports["operator-concavity"].min_slack >= -1e-9:
                assert reports["joint-convexity"].min_slack >= -1e-9


class TestStructuredFamilies:
    def test_combination_of_flat_quadratic_and_entropic_parts_holds(self):
        # nonnegative mixtures of the quadratic and translated-entropy parts
        # stay jointly convex on samples
        lam = 0.7
        fam = custom_family(
            lambda x: 0.4 * x * np.log(x) + 0.3 * (x + lam) * np.log(x + lam) + 0.1 * x**2,
            lambda x: 0.4 * (np.log(x) + 1.0) + 0.3 * (np.log(x + lam) + 1.0) + 0.2 * x,
            lambda x: 0.4 / x + 0.3 / (x + lam) + 0.2,
            continuous_at_zero=True,
            f_at_zero=0.3 * lam * math.log(lam),
            fprime_at_zero=-math.inf,
            label="entropic-mixture",
        )
        for seed in range(200):
            rng = np.random.default_rng(seed)
            x1, y1, x2, y2 = (random_pd_floored(3, rng) for _ in range(4))
            t = float(rng.uniform())
            assert joint_convexity_trial(fam, x1, y1, x2, y2, t) >= -1e-9

    def test_inversion_reverses_semidefinite_order(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            s = superoperator_of(entropy(), random_pd(3, rng))
            w = rng.standard_normal((9, 9))
            t_mat = s.mat + 0.1 * (w @ w.T)
            t = type(s)(n=s.n, mat=(t_mat + t_mat.T) / 2.0)
            assert semidefinite_order(s.mat, t.mat, tol=1e-12)
            s_inv, t_inv = superop_inverse(s), superop_inverse(t)
            assert semidefinite_order(t_inv.mat, s_inv.mat, tol=1e-9)
