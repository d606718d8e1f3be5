import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyfp.contraction import (
    MultiMap,
    affine,
    custom_map,
    custom_zeta,
    linear,
    probe_pi_membership,
    verify_metric_condition,
    verify_multi_contraction,
    verify_single_contraction,
    zeta_apply,
)
from fuzzyfp.errors import ConfigurationError, DomainError, RangeError
from fuzzyfp.fuzzy_metric import euclidean, standard_from_metric
from fuzzyfp.hausdorff import hausdorff_eval
from oracles import classical_hausdorff, operator_norm_2x2

R1 = standard_from_metric(euclidean(1))
R2 = standard_from_metric(euclidean(2))


def test_zeta_apply_examples():
    assert zeta_apply(linear(0.5), 2.0) == 1.0
    assert zeta_apply(linear(0.5), 1e-9) == 5e-10
    assert zeta_apply(custom_zeta(lambda r: r * r), 3.0) == 9.0


def test_zeta_errors():
    with pytest.raises(RangeError):
        zeta_apply(custom_zeta(lambda r: -r), 1.0)
    with pytest.raises(RangeError):
        zeta_apply(custom_zeta(lambda r: 0.0), 1.0)
    with pytest.raises(DomainError):
        zeta_apply(linear(0.5), 0.0)
    with pytest.raises(ConfigurationError):
        linear(0.0)


@pytest.mark.parametrize("k", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1])
def test_linear_pi_membership_iff_k_below_one(k):
    v = probe_pi_membership(linear(k))
    assert v.member == (k < 1)
    if not v.member:
        assert v.witness is not None


def test_identity_scale_rejected():
    v = probe_pi_membership(linear(1.0))
    assert not v.member and not v.witness.diverged


def test_square_rejected_with_diverging_witness():
    v = probe_pi_membership(custom_zeta(lambda r: r * r), rho_samples=[0.5, 2.0])
    assert not v.member
    assert v.witness.rho == 2.0 and v.witness.diverged
    v = probe_pi_membership(custom_zeta(lambda r: r * r))
    assert not v.member and v.witness.rho > 1


def test_affine_map():
    f = affine([[0.5, 0.0], [0.0, 0.25]], [1.0, 1.0])
    assert f([2.0, 4.0]).tolist() == [2.0, 2.0]
    assert affine(0.5, [1.0])([4.0]).tolist() == [3.0]
    with pytest.raises(ConfigurationError):
        affine([[1.0, 0.0]], [0.0])


def test_multimap_dedups_coincident_branches():
    S = MultiMap((affine(1 / 3, [0.0]), affine(0.5, [1.0])))
    assert len(S([-6.0])) == 1
    assert len(S([0.0])) == 2
    assert S([0.0]).origins == (0, 1)


def test_single_halving_passes():
    rep = verify_single_contraction(R1, affine(0.5, [0.0]), linear(0.5), 500)
    assert rep.passed and rep.checked == 500 * 5


def test_single_doubling_fails_with_witness():
    rep = verify_single_contraction(R1, affine(2.0, [0.0]), linear(0.5), 500)
    assert not rep.passed
    c = rep.counterexample
    assert c.lhs < c.rhs
    assert c.lhs == R1.eval([2 * c.u[0]], [2 * c.v[0]], 0.5 * c.rho)


def test_single_2d_operator_norm_0_9():
    theta = 0.7
    M = [[0.9 * math.cos(theta), -0.9 * math.sin(theta)], [0.9 * math.sin(theta), 0.9 * math.cos(theta)]]
    assert operator_norm_2x2(M) == pytest.approx(0.9)
    f = affine(M, [0.3, -1.0])
    # Metric-form oracle: d(fu, fv) <= 0.9 d(u, v) on the same samples.
    rng = np.random.default_rng(0)
    for u, v in rng.uniform(-10, 10, size=(200, 2, 2)):
        assert math.dist(f(u), f(v)) <= 0.9 * math.dist(u, v) * (1 + 1e-12)
    assert verify_single_contraction(R2, f, linear(0.9), 1000).passed
    assert not verify_single_contraction(R2, f, linear(0.8), 1000).passed


def test_multi_single_branch_passes():
    S = MultiMap((affine(0.5, [0.0]),))
    assert verify_multi_contraction(R1, S, linear(0.5), 300).passed


def test_multi_two_affine_branches():
    S = MultiMap((affine(1 / 3, [0.0]), affine(0.5, [1.0])))
    rng = np.random.default_rng(1)
    for x, y in rng.uniform(-10, 10, size=(300, 2)):
        H = classical_hausdorff(S([x]).points.tolist(), S([y]).points.tolist())
        assert H <= 0.5 * abs(x - y) * (1 + 1e-12) + 1e-15
    assert verify_multi_contraction(R1, S, linear(0.6), 500).passed


def test_multi_expansion_fails():
    rep = verify_multi_contraction(R1, MultiMap((affine(2.0, [0.0]),)), linear(0.9), 100)
    assert not rep.passed and rep.counterexample is not None


@settings(max_examples=100, deadline=None)
@given(m=st.floats(-3, 3), b=st.floats(-5, 5), seed=st.integers(0, 100))
def test_singleton_collapse(m, b, seed):
    f = affine(m, [b])
    S = MultiMap((f,))
    rng = np.random.default_rng(seed)
    for u, v in rng.uniform(-10, 10, size=(5, 2, 1)):
        for rho in (0.1, 1.0, 10.0):
            single = R1.eval(f(u), f(v), 0.5 * rho)
            assert hausdorff_eval(R1, S(u), S(v), 0.5 * rho) == single
    a = verify_single_contraction(R1, f, linear(0.5), 50, seed=seed)
    c = verify_multi_contraction(R1, S, linear(0.5), 50, seed=seed)
    assert a.passed == c.passed and a.counterexample == c.counterexample


@settings(max_examples=80, deadline=None)
@given(m=st.floats(-2, 2), k=st.floats(0.05, 1.5), seed=st.integers(0, 1000))
def test_linear_scale_equivalence(m, k, seed):
    f = affine(m, [0.25])
    fuzzy = verify_single_contraction(R1, f, linear(k), 40, seed=seed)
    metric = verify_metric_condition(euclidean(1), f, linear(k), 40, seed=seed)
    margin = abs(abs(m) - k)
    if margin > 1e-9:
        assert fuzzy.passed == metric.passed == (abs(m) <= k)


def test_reports_reproducible():
    f = custom_map(lambda x: np.sin(3 * x), 1)
    a = verify_single_contraction(R1, f, linear(0.5), 200, seed=11)
    b = verify_single_contraction(R1, f, linear(0.5), 200, seed=11)
    assert not a.passed and a == b
    assert verify_single_contraction(R1, f, linear(0.5), 200, seed=12).counterexample != a.counterexample


def test_metric_condition_translation_rejected():
    rep = verify_metric_condition(euclidean(1), affine(1.0, [1.0]), linear(0.9), 100)
    assert not rep.passed
    c = rep.counterexample
    assert c.lhs == pytest.approx(c.rho * abs(c.u[0] - c.v[0]))
