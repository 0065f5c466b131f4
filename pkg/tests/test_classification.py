"""Valuations, Zsigmondy primes, order formulas, conditions, theorem drivers."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import skewbrace as sb
from skewbrace.classification import (
    PrimePowerParam,
    g2_order,
    omega_eps_order,
    pomega_eps_order,
    psl_order,
    psp_order,
    psu_order,
    sl_order,
)
from skewbrace.errors import (
    CodingMismatch,
    NotSimpleAdditive,
    SizeLimit,
    UnknownFamily,
)


class TestVp:
    def test_examples(self):
        assert sb.vp(12, 2) == 2
        assert sb.vp(7, 3) == 0
        # 1451520 = 2^9 * 2835 with 2835 = 3^4*5*7 odd (recomputed by
        # repeated division; the valuation is 9)
        assert sb.vp(1451520, 2) == 9
        assert 1451520 == 2**9 * 2835 and 2835 % 2 == 1

    def test_multiplicative_over_random_pairs(self):
        rng = random.Random(20240811)
        for _ in range(10_000):
            a = rng.randrange(1, 10**9)
            b = rng.randrange(1, 10**9)
            p = rng.choice([2, 3, 5, 7, 11, 13])
            assert sb.vp(a * b, p) == sb.vp(a, p) + sb.vp(b, p)

    @settings(max_examples=100, deadline=None)
    @given(
        e=st.integers(min_value=0, max_value=20),
        rest=st.integers(min_value=1, max_value=10**6),
    )
    def test_definition(self, e, rest):
        while rest % 3 == 0:
            rest //= 3
        assert sb.vp(3**e * rest, 3) == e

    def test_rejects_nonprime(self):
        with pytest.raises(ValueError):
            sb.vp(10, 4)


class TestZsigmondy:
    def test_exception_cases(self):
        assert sb.zsigmondy(2, 6) is None
        assert sb.zsigmondy(3, 2) is None  # 3 + 1 = 2^2
        assert sb.zsigmondy(7, 2) is None  # 7 + 1 = 2^3
        assert sb.zsigmondy(31, 2) is None  # 31 + 1 = 2^5

    def test_examples(self):
        assert sb.zsigmondy(2, 4) == 5
        assert sb.zsigmondy(2, 10) == 11
        assert sb.zsigmondy(5, 2) == 3

    def test_definitional_sweep(self):
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]:
            for m in range(2, 13):
                ell = sb.zsigmondy(p, m)
                if ell is None:
                    power_of_two = bin(p + 1).count("1") == 1
                    exceptional = (p, m) == (2, 6) or (m == 2 and power_of_two)
                    assert exceptional, f"unexpected gap at p={p}, m={m}"
                else:
                    assert (p**m - 1) % ell == 0
                    for k in range(1, m):
                        assert (p**k - 1) % ell != 0

    def test_returns_least_primitive(self):
        # 2^11 - 1 = 23 * 89, both primitive; least must come back
        assert sb.zsigmondy(2, 11) == 23

    def test_descent_congruence(self):
        # p^ell = p (mod ell) implies p^(fn/ell) = p^(fn) (mod ell) when ell | f
        for p, f, n in [(2, 3, 3), (3, 5, 4), (2, 6, 5), (5, 3, 2), (7, 10, 2)]:
            for ell in [d for d in range(2, f + 1) if f % d == 0]:
                if all(ell % k for k in range(2, ell)):
                    assert pow(p, (f // ell) * n, ell) == pow(p, f * n, ell)


class TestOrderFormulas:
    def test_psl2_examples(self):
        assert sb.psl2_order(11) == 660
        assert sb.psl2_order(16) == 4080
        assert sb.psl2_order(5) == 60  # same order as A5

    def test_psl2_rejects_non_prime_power(self):
        with pytest.raises(ValueError):
            sb.psl2_order(12)

    def test_classical_orders(self):
        assert psl_order(3, 3) == 5616
        assert psl_order(3, 4) == 20160
        assert psl_order(5, 2) == 9999360
        assert psu_order(3, 3) == 6048
        assert psu_order(4, 8) == 34693789777920
        assert psp_order(2, 3) == 25920
        assert psp_order(3, 2) == 1451520
        assert sl_order(2, 64) == 262080
        assert g2_order(3) == 4245696
        assert omega_eps_order(4, 3, -1) == 10151968619520
        assert omega_eps_order(4, 2, +1) == 174182400
        assert pomega_eps_order(4, 3, +1) == 4952179814400

    def test_out_order_examples(self):
        assert sb.out_order("PSL2", PrimePowerParam.from_q(7)) == 2
        assert sb.out_order("PSLn", PrimePowerParam.from_q(4), n=3) == 12
        assert sb.out_order("PSUn", PrimePowerParam.from_q(8), n=3) == 18
        assert sb.out_order("PSp2m", PrimePowerParam.from_q(3), m=3) == 2
        assert sb.out_order("PSp4_even", PrimePowerParam.from_q(4)) == 4
        assert sb.out_order("Omega_odd", PrimePowerParam.from_q(3), m=3) == 2
        # q^m = 3^5 = 243 = 3 mod 4, so the non-congruent row applies: 2*(2,q-1)*f
        assert sb.out_order("POmega_plus", PrimePowerParam.from_q(3), m=5) == 4
        # q^m = 5^5 = 1 mod 4, so the 8f row applies
        assert sb.out_order("POmega_plus", PrimePowerParam.from_q(5), m=5) == 8
        assert sb.out_order("POmega_plus8", PrimePowerParam.from_q(3)) == 24

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            sb.out_order("E8", PrimePowerParam.from_q(2))
        with pytest.raises(UnknownFamily):
            sb.out_order("PSp2m", PrimePowerParam.from_q(2), m=2)  # (2, 2) excluded


class TestConditions:
    def test_trivial_brace_fails_condition_1(self, trivial_a5):
        rep = sb.check_conditions(trivial_a5)
        assert not rep["condition_1"]
        assert rep["verdict"] == "must_be_almost_trivial"
        assert rep["witness"]["h_order"] == 1

    def test_almost_trivial_fails_condition_1_by_inner_meet(self, almost_trivial_a5):
        rep = sb.check_conditions(almost_trivial_a5)
        assert not rep["condition_1"]
        assert rep["witness"]["h_meet_inn"] == 60

    def test_synthetic_psl2_7_witness_fails_condition_2(self):
        w = sb.FactorizationWitness("synthetic", 168, 7, 168, 1, 24, 2)
        w.validate()
        rep = sb.evaluate_conditions(w)
        assert rep["condition_1"] and rep["condition_3"] and rep["condition_4"]
        assert not rep["condition_2"]
        assert rep["verdict"] == "excluded"

    def test_witness_invariants(self):
        with pytest.raises(AssertionError):
            sb.FactorizationWitness("bad", 60, 6, 60, 2, 12, 2).validate()

    def test_requires_nonabelian_simple(self, groups):
        with pytest.raises(NotSimpleAdditive):
            sb.check_conditions(sb.make_brace(groups["C5"], groups["C5"]))
        with pytest.raises(NotSimpleAdditive):
            S3 = groups["S3"]
            sb.check_conditions(sb.make_brace(S3, S3))

    def test_quotient_identity_across_a5_corpus(self, a5_braces):
        for B in a5_braces[::25]:
            rep = sb.check_conditions(B)
            w = rep["witness"]
            assert w["h_order"] * w["k_meet_inn"] == w["k_order"] * w["h_meet_inn"]


class TestVerifyThm1:
    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_n1_exactly_one_trivial_class(self, p):
        rep = sb.verify_thm1(p, 1)
        assert rep["passed"]
        assert rep["brace_count"] == 1
        assert rep["left_simple_class_count"] == 1
        assert rep["left_simple_classes_trivial"]

    @pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
    def test_n2_no_left_simple(self, p, n):
        rep = sb.verify_thm1(p, n)
        assert rep["passed"] and rep["left_simple_count"] == 0

    def test_order_bound(self):
        with pytest.raises(SizeLimit):
            sb.verify_thm1(2, 4)

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            sb.verify_thm1(4, 1)


class TestCheckThm2b:
    def test_coding_mismatch(self, groups):
        C4 = groups["C4"]
        B = sb.make_brace(C4, C4)
        with pytest.raises(CodingMismatch):
            sb.check_thm2b(B, groups["C2"], 2)

    def test_trivial_brace_on_c2_squared(self, groups):
        E = sb.direct_power(groups["C2"], 2)
        B = sb.make_brace(E, E)
        rep = sb.check_thm2b(B, groups["C2"], 2)
        assert not rep["left_simple"]
        assert rep["projection_orbits"] == [[0], [1]]
        assert [i["order"] for i in rep["orbit_ideals"]] == [2, 2]
        assert rep["passed"]

    def test_requires_n_at_least_2(self, trivial_a5, a5):
        with pytest.raises(ValueError):
            sb.check_thm2b(trivial_a5, a5, 1)
