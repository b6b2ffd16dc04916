import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqhyper.field import build_field, field_for_q
from fqhyper.hypergeom import (canonical_order, f21_greene, f21_scaled, f32_greene, f32_scaled, greene_nfn1,
                               phi_params, sweep)
from fqhyper.numtheory import prime_powers_between
from fqhyper.verify import HYPER_PROPS, hyper_properties

F7 = build_field(7, 1)
F5 = build_field(5, 1)


def test_greene_sum_pinned_values():
    assert abs(f21_greene(F7, 0)) < 1e-12
    assert f21_greene(F7, 1) == pytest.approx(1 / 7, abs=1e-12)
    assert f32_greene(F7, 4) == pytest.approx(9 / 49, abs=1e-6)


def test_greene_parameter_lengths():
    with pytest.raises(ValueError):
        greene_nfn1(F7, [3, 3], [0, 0], 2)
    with pytest.raises(ValueError):
        greene_nfn1(F7, [3], [], 2)


def test_f21_scaled_pinned():
    assert f21_scaled(F7, 3).scaled == 4
    assert f21_scaled(F7, 2).scaled == 0
    assert f21_scaled(F5, 2).scaled == 2
    assert f21_scaled(F7, 0).scaled == 0


def test_lambda_one_equals_character_sum():
    # q 2F1(1) = -phi(-1): +1 for q = 3 mod 4, -1 for q = 1 mod 4
    for q in (5, 7, 13, 19, 25, 49):
        F = field_for_q(q)
        expected = -int(F.phi[F.minus_one])
        assert f21_scaled(F, 1).scaled == expected
        assert round((q * f21_greene(F, 1)).real) == expected


def test_f32_scaled_pinned():
    assert f32_scaled(F7, 4).scaled == 9
    assert f32_scaled(F7, 0).scaled == 0
    mu = 2
    inv = F7.inv(mu)
    assert f32_scaled(F7, mu).scaled == F7.phi[F7.neg(mu)] * f32_scaled(F7, inv).scaled


def test_f32_at_one_is_rounded_greene_value():
    for q in (5, 7, 11, 13, 25):
        F = field_for_q(q)
        v = f32_scaled(F, 1)
        assert v.exact and v.residual < 1e-4
        assert v.scaled == round((q * q * f32_greene(F, 1)).real)


def test_sweep_by_element_small_fields():
    assert sweep(F7, "f21").by_element().tolist() == [0, 1, 0, 4, 0, -4, 0]
    assert sweep(F5, "f21").by_element().tolist() == [0, -1, 2, -2, 2]
    assert int(sweep(F7, "f21").scaled.sum()) == 1


def test_sweep_canonical_order():
    s = sweep(F7, "f21")
    assert s.lambdas.tolist() == [0, 1, 3, 2, 6, 4, 5]
    assert s.scaled.tolist() == [0, 1, 4, 0, 0, 0, -4]
    assert canonical_order(F7).tolist() == s.lambdas.tolist()
    assert [v.lam for v in s] == s.lambdas.tolist()


def test_sweep_methods_agree_on_extension_field():
    F = build_field(7, 3)
    for fam in ("f21", "f32"):
        a = sweep(F, fam)
        assert np.array_equal(a.scaled, sweep(F, fam, "direct").scaled)
        assert np.array_equal(a.scaled, sweep(F, fam, "greene").scaled)
        assert a.max_residual < 1e-4


def test_unknown_family():
    with pytest.raises(ValueError):
        sweep(F7, "f43")


@pytest.mark.parametrize("q", prime_powers_between(5, 200))
def test_trace_theorems_exhaustive(q):
    assert hyper_properties(q) == dict.fromkeys(HYPER_PROPS)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([11, 13, 23, 29, 121, 125, 343, 1009]), st.data())
def test_scaled_values_match_sweeps_and_bounds(q, data):
    F = field_for_q(q)
    lam = data.draw(st.integers(2, q - 1))
    v21 = f21_scaled(F, lam)
    assert v21.scaled == sweep(F, "f21").by_element()[lam]
    assert abs(v21.scaled) <= 2 * math.sqrt(q)
    v32 = f32_scaled(F, lam)
    assert v32.scaled == sweep(F, "f32").by_element()[lam]
    assert abs(v32.scaled) <= 3 * q
    assert v32.scaled == F.phi[F.neg(lam)] * f32_scaled(F, F.inv(lam)).scaled


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([7, 11, 19, 23, 43, 343]), st.data())
def test_f21_reflection_for_q_3_mod_4(q, data):
    F = field_for_q(q)
    lam = data.draw(st.integers(2, q - 1))
    assert f21_scaled(F, lam).scaled == -f21_scaled(F, F.sub(1, lam)).scaled


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([13, 17, 25, 31]), st.data())
def test_greene_single_value_matches_trace(q, data):
    F = field_for_q(q)
    lam = data.draw(st.integers(2, q - 1))
    raw = q * greene_nfn1(F, *phi_params(F, 2), lam)
    assert abs(raw - f21_scaled(F, lam).scaled) < 1e-4
