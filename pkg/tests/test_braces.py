"""Brace core: validation, translation maps, ideals, isomorphism."""

import numpy as np
import pytest

import skewbrace as sb
from skewbrace.braces import brace_fingerprint, scan_brace_relation, unique_row_keys
from skewbrace.errors import BraceRelationFails, SizeLimit


def brute_force_relation_violation(dot, circle):
    """Oracle: first (a,b,c) with a∘(b·c) != (a∘b)·a⁻¹·(a∘c), per raw loops."""
    n = dot.order
    d, c, inv = dot.table, circle.table, dot.inv
    for a in range(n):
        for b in range(n):
            for x in range(n):
                lhs = c[a, d[b, x]]
                rhs = d[d[c[a, b], inv[a]], c[a, x]]
                if lhs != rhs:
                    return (a, b, x)
    return None


class TestMakeBrace:
    def test_trivial_brace_valid(self, groups):
        B = sb.make_brace(groups["C4"], groups["C4"])
        assert sb.brace_class(B) == "trivial"

    def test_almost_trivial_s3(self, groups):
        S3 = groups["S3"]
        B = sb.make_brace(S3, sb.opposite_group(S3))
        assert sb.brace_class(B) == "almost_trivial"

    def test_v4_c4_brace(self, v4_c4_brace):
        assert v4_c4_brace.dot.order == 4
        assert sorted(v4_c4_brace.circle.element_orders.tolist()) == [1, 2, 4, 4]
        assert sb.brace_class(v4_c4_brace) == "neither"

    def test_order_mismatch(self, groups):
        with pytest.raises(ValueError):
            sb.make_brace(groups["C4"], groups["C5"])

    def test_relation_failure_reports_genuine_triple(self, groups):
        # the circle successor map 0->1->..->5 is not realizable over the S3
        # catalog table, so the cyclic table cannot pair with it
        S3, C6 = groups["S3"], groups["C6"]
        with pytest.raises(BraceRelationFails) as err:
            sb.make_brace(S3, C6)
        triple = err.value.triple
        assert triple == brute_force_relation_violation(S3, C6)

    def test_scan_matches_brute_force_on_valid_braces(self, groups, v4_c4_brace):
        for B in (sb.make_brace(groups["S3"], sb.opposite_group(groups["S3"])), v4_c4_brace):
            assert scan_brace_relation(B) is None
            assert brute_force_relation_violation(B.dot, B.circle) is None

    def test_scan_first_triple_is_lexicographic_minimum(self, groups):
        S3, C6 = groups["S3"], groups["C6"]
        B = sb.SkewBrace(S3, C6)
        assert scan_brace_relation(B) == brute_force_relation_violation(S3, C6)


class TestBraceMaps:
    def test_trivial_maps(self, trivial_a5):
        m = sb.brace_maps(trivial_a5)
        n = trivial_a5.order
        assert np.array_equal(m.lambda_table, np.broadcast_to(np.arange(n), (n, n)))
        assert np.array_equal(m.rho_table, m.conj_table)

    def test_almost_trivial_maps(self, almost_trivial_a5):
        m = sb.brace_maps(almost_trivial_a5)
        n = almost_trivial_a5.order
        assert np.array_equal(m.rho_table, np.broadcast_to(np.arange(n), (n, n)))
        # lambda_a = conj(a^{-1})
        inv = almost_trivial_a5.dot.inv
        assert np.array_equal(m.lambda_table, m.conj_table[inv])

    def test_v4_c4_lambda_image(self, v4_c4_brace):
        assert len(unique_row_keys(v4_c4_brace.lambda_table)) == 2

    def test_lambda_rho_are_homomorphisms(self, v4_c4_brace, groups):
        for B in (v4_c4_brace, sb.make_brace(groups["Q8"], groups["Q8"])):
            L, P = B.lambda_table, B.rho_table
            circ = B.circle.table
            for a in range(B.order):
                for b in range(B.order):
                    assert np.array_equal(L[circ[a, b]], L[a][L[b]])
                    assert np.array_equal(P[circ[a, b]], P[a][P[b]])

    def test_pointwise_identities(self, a5_braces):
        for B in a5_braces[:20]:
            m = sb.brace_maps(B)
            inv = B.dot.inv
            for a in range(0, B.order, 7):
                assert np.array_equal(m.rho_table[a], m.conj_table[a][m.lambda_table[a]])
                assert np.array_equal(
                    m.lambda_table[a], m.conj_table[inv[a]][m.rho_table[a]]
                )

    def test_lambda_rho_congruent_mod_inn(self, a5_braces):
        for B in a5_braces[:25]:
            inn = unique_row_keys(B.conj_table)
            for a in range(B.order):
                rho_inv = np.empty(B.order, dtype=np.int32)
                rho_inv[B.rho_table[a]] = np.arange(B.order, dtype=np.int32)
                assert B.lambda_table[a][rho_inv].tobytes() in inn


class TestImageSubgroups:
    def test_trivial_a5(self, trivial_a5):
        s = sb.image_subgroups(trivial_a5).sizes
        assert s == {"im_lambda": 1, "im_rho": 60, "inn_dot": 60, "gamma": 60}

    def test_almost_trivial_a5(self, almost_trivial_a5):
        s = sb.image_subgroups(almost_trivial_a5).sizes
        assert s == {"im_lambda": 60, "im_rho": 1, "inn_dot": 60, "gamma": 60}

    def test_v4_c4(self, v4_c4_brace):
        s = sb.image_subgroups(v4_c4_brace).sizes
        assert s["inn_dot"] == 1 and s["im_lambda"] == 2 and s["gamma"] == 2

    def test_trifactor_equalities_hold_across_a5_corpus(self, a5_braces):
        # image_subgroups raises internally if the three product sets differ
        for B in a5_braces[:40]:
            sb.image_subgroups(B)


class TestCanonicalIdeals:
    def test_trivial_a5(self, trivial_a5):
        ci = sb.canonical_ideals(trivial_a5)
        assert ci["j1"].elements == (0,) and ci["j2"].elements == (0,)

    def test_almost_trivial_a5(self, almost_trivial_a5):
        ci = sb.canonical_ideals(almost_trivial_a5)
        assert ci["j1"].order == 60 and ci["j2"].order == 60

    def test_trivial_c4(self, groups):
        ci = sb.canonical_ideals(sb.make_brace(groups["C4"], groups["C4"]))
        assert ci["j1"].order == 4 and ci["j2"].order == 4

    def test_ideal_certificates_across_corpus(self, a5_braces):
        for B in a5_braces[:40]:
            sb.canonical_ideals(B)  # certify_left_ideal raises on any failure


class TestLeftIdeals:
    def test_closure_of_empty(self, v4_c4_brace):
        assert sb.left_ideal_closure(v4_c4_brace, []).elements == (0,)

    def test_closure_in_trivial_s3_is_plain_subgroup(self, groups):
        S3 = groups["S3"]
        B = sb.make_brace(S3, S3)
        t = int(np.nonzero(S3.element_orders == 2)[0][0])
        assert sb.left_ideal_closure(B, [t]).elements == (0, t)

    def test_closure_in_almost_trivial_a5_is_everything(self, almost_trivial_a5):
        for a in (1, 13, 59):
            assert sb.left_ideal_closure(almost_trivial_a5, [a]).order == 60

    @pytest.mark.parametrize(
        "kind,count",
        [("trivial_c4", 3), ("almost_trivial_a5", 2), ("trivial_a5", 59)],
    )
    def test_left_ideal_counts(self, groups, trivial_a5, almost_trivial_a5, kind, count):
        braces = {
            "trivial_c4": sb.make_brace(groups["C4"], groups["C4"]),
            "almost_trivial_a5": almost_trivial_a5,
            "trivial_a5": trivial_a5,
        }
        assert len(sb.left_ideals(braces[kind])) == count

    def test_left_ideals_contains_bounds(self, v4_c4_brace):
        ideals = sb.left_ideals(v4_c4_brace)
        assert ideals[0].elements == (0,)
        assert ideals[-1].order == v4_c4_brace.order

    def test_lattice_bound(self, trivial_a5):
        with pytest.raises(SizeLimit):
            sb.left_ideals(trivial_a5, lattice_bound=10)


class TestLeftSimple:
    def test_trivial_c5(self, groups):
        assert sb.is_left_simple(sb.make_brace(groups["C5"], groups["C5"]))[0]

    def test_trivial_a5_has_witness(self, trivial_a5):
        simple, witness = sb.is_left_simple(trivial_a5)
        assert not simple
        assert witness is not None and 1 < witness.order < 60

    def test_almost_trivial_a5(self, almost_trivial_a5):
        assert sb.is_left_simple(almost_trivial_a5) == (True, None)

    def test_order_one_brace_not_left_simple(self):
        G = sb.build_group([[0]])
        assert sb.is_left_simple(sb.make_brace(G, G)) == (False, None)

    def test_agrees_with_ideal_count(self, groups, a5_braces):
        corpus = [
            sb.make_brace(groups["C4"], groups["C4"]),
            sb.make_brace(groups["C6"], groups["C6"]),
            sb.make_brace(groups["S3"], sb.opposite_group(groups["S3"])),
        ] + list(a5_braces[:10])
        for B in corpus:
            expected = len(sb.left_ideals(B)) == 2 and B.order > 1
            assert sb.is_left_simple(B)[0] == expected


class TestBraceClass:
    def test_trivial_c7(self, groups):
        assert sb.brace_class(sb.make_brace(groups["C7"], groups["C7"])) == "trivial"

    def test_abelian_opposite_reports_trivial(self, groups):
        C4 = groups["C4"]
        B = sb.make_brace(C4, sb.opposite_group(C4))
        assert sb.brace_class(B) == "trivial"

    def test_almost_trivial_s3(self, groups):
        S3 = groups["S3"]
        assert sb.brace_class(sb.make_brace(S3, sb.opposite_group(S3))) == "almost_trivial"

    def test_neither(self, v4_c4_brace):
        assert sb.brace_class(v4_c4_brace) == "neither"


class TestBracesIsomorphic:
    def test_self_isomorphic(self, v4_c4_brace):
        assert sb.braces_isomorphic(v4_c4_brace, v4_c4_brace)

    def test_trivial_vs_almost_trivial_a5(self, trivial_a5, almost_trivial_a5):
        assert not sb.braces_isomorphic(trivial_a5, almost_trivial_a5)

    def test_different_dot_groups(self, groups):
        B1 = sb.make_brace(groups["C4"], groups["C4"])
        B2 = sb.make_brace(groups["V4"], groups["V4"])
        assert not sb.braces_isomorphic(B1, B2)

    def test_relabelled_brace_is_isomorphic(self, v4_c4_brace):
        # push both tables through a permutation fixing 0
        sigma = np.array([0, 2, 3, 1], dtype=np.int32)
        inv = np.empty(4, dtype=np.int32)
        inv[sigma] = np.arange(4, dtype=np.int32)
        dot = sigma[v4_c4_brace.dot.table[np.ix_(inv, inv)]]
        circ = sigma[v4_c4_brace.circle.table[np.ix_(inv, inv)]]
        B2 = sb.make_brace(sb.build_group(dot), sb.build_group(circ))
        assert sb.braces_isomorphic(v4_c4_brace, B2)
        assert brace_fingerprint(v4_c4_brace) == brace_fingerprint(B2)

    def test_regular_c4_conjugates_are_isomorphic(self, groups):
        V4 = groups["V4"]
        braces = [
            sb.brace_from_regular(V4, N)
            for N in sb.regular_subgroups(V4)
        ]
        neithers = [b for b in braces if sb.brace_class(b) == "neither"]
        assert len(neithers) == 3
        assert sb.braces_isomorphic(neithers[0], neithers[1])
        assert sb.braces_isomorphic(neithers[0], neithers[2])

    def test_invariants_match_for_isomorphic_pairs(self, groups):
        V4 = groups["V4"]
        braces = [b for b in (sb.brace_from_regular(V4, N) for N in sb.regular_subgroups(V4))]
        neithers = [b for b in braces if sb.brace_class(b) == "neither"]
        fps = {brace_fingerprint(b) for b in neithers}
        assert len(fps) == 1
