"""Holomorph construction, regular-subgroup search, brute-force oracle."""

import numpy as np
import pytest

import skewbrace as sb
from skewbrace.errors import SearchTimeout, SizeLimit


class TestHolomorph:
    @pytest.mark.parametrize("name,order", [("C3", 6), ("V4", 24)])
    def test_orders(self, groups, name, order):
        assert sb.holomorph(groups[name]).order == order

    def test_a5_holomorph_order(self, a5):
        assert sb.holomorph(a5).order == 7200

    def test_composition_law(self, groups):
        hol = sb.holomorph(groups["S3"])
        rng = np.random.default_rng(3)
        for _ in range(50):
            i, j = rng.integers(0, hol.order, 2)
            k = hol.compose(int(i), int(j))
            assert np.array_equal(hol.perms[k], hol.perms[i][hol.perms[j]])

    def test_bound(self, a5_squared):
        with pytest.raises(SizeLimit):
            sb.holomorph(a5_squared, holomorph_bound=3000)


class TestRegularSubgroups:
    @pytest.mark.parametrize(
        "name,count", [("C2", 1), ("C3", 1), ("C4", 2), ("V4", 4), ("C5", 1)]
    )
    def test_counts(self, groups, name, count):
        assert len(sb.regular_subgroups(groups[name])) == count

    def test_v4_regulars_split_by_type(self, groups):
        V4 = groups["V4"]
        braces = [sb.brace_from_regular(V4, N) for N in sb.regular_subgroups(V4)]
        max_orders = sorted(int(b.circle.element_orders.max()) for b in braces)
        assert max_orders == [2, 4, 4, 4]  # one V4 copy, three C4 copies

    def test_every_subgroup_is_regular(self, groups):
        for name in ("C4", "V4", "S3"):
            for N in sb.regular_subgroups(groups[name]):
                assert N.is_regular()

    def test_a5_count_and_conjugation_closure(self, a5):
        hol = sb.holomorph(a5)
        regs = sb.regular_subgroups(a5, hol=hol)
        assert len(regs) == 302
        found = {N.elements for N in regs}
        # Hol-conjugation permutes regular subgroups; the found set must be closed
        arange = np.arange(60, dtype=np.int32)
        for g in (1, 57, 1200, 7100):
            p = hol.perms[g]
            q = np.empty_like(p)
            q[p] = arange
            gi = hol.index[q.tobytes()]
            for N in regs[:50]:
                conj = tuple(
                    sorted(hol.compose(g, hol.compose(i, gi)) for i in N.elements)
                )
                assert conj in found

    def test_workers_do_not_change_results(self, groups):
        G = sb.direct_power(groups["C2"], 3)
        seq = [N.elements for N in sb.regular_subgroups(G, workers=1)]
        par = [N.elements for N in sb.regular_subgroups(G, workers=2)]
        assert seq == par

    def test_node_budget_timeout(self, a5):
        with pytest.raises(SearchTimeout):
            sb.regular_subgroups(a5, node_budget=5)


class TestBraceFromRegular:
    def test_translation_copies_give_trivial_and_almost_trivial(self, groups):
        for name in ("C4", "S3", "V4"):
            G = groups[name]
            classes = {
                sb.brace_class(sb.brace_from_regular(G, N))
                for N in sb.regular_subgroups(G)
            }
            assert "trivial" in classes
            if not G.is_abelian:
                assert "almost_trivial" in classes

    def test_circle_is_isomorphic_to_the_regular_subgroup(self, groups):
        # the map a -> n_a must be an isomorphism (A,circle) -> N
        for name in ("V4", "S3"):
            G = groups[name]
            hol = sb.holomorph(G)
            for N in sb.regular_subgroups(G, hol=hol):
                B = sb.brace_from_regular(G, N)
                n_of = {int(hol.img0[i]): i for i in N.elements}
                for a in range(G.order):
                    for b in range(G.order):
                        composed = hol.compose(n_of[a], n_of[b])
                        assert n_of[B.circle.mul(a, b)] == composed

    def test_output_passes_validation(self, groups):
        for N in sb.regular_subgroups(groups["S3"]):
            B = sb.brace_from_regular(groups["S3"], N)
            assert sb.scan_brace_relation(B) is None


class TestEnumerateBraces:
    def test_counts_match_regular_subgroups(self, groups):
        for name in ("C4", "V4", "S3", "C6"):
            G = groups[name]
            assert len(sb.enumerate_braces(G)) == len(sb.regular_subgroups(G))

    def test_v4_iso_classes(self, groups):
        classes = sb.enumerate_braces(groups["V4"], up_to_iso=True)
        assert len(classes) == 2
        assert {sb.brace_class(b) for b in classes} == {"trivial", "neither"}

    def test_c5_single_trivial_class(self, groups):
        classes = sb.enumerate_braces(groups["C5"], up_to_iso=True)
        assert len(classes) == 1
        assert sb.brace_class(classes[0]) == "trivial"

    def test_deterministic_output(self, groups):
        a = [b.circle.table.tobytes() for b in sb.enumerate_braces(groups["S3"])]
        b = [b.circle.table.tobytes() for b in sb.enumerate_braces(groups["S3"])]
        assert a == b

    def test_order8_class_counts_match_census(self, groups):
        # published census: 47 skew brace classes of order 8 in total
        per_type = {}
        for name in ("C8", "C4xC2", "C2^3", "D4", "Q8"):
            per_type[name] = len(sb.enumerate_braces(groups[name], up_to_iso=True))
        assert sum(per_type.values()) == 47

    def test_order6_census(self, groups):
        assert len(sb.enumerate_braces(groups["C6"], up_to_iso=True)) == 2
        assert len(sb.enumerate_braces(groups["S3"], up_to_iso=True)) == 4


class TestBruteForceOracle:
    @pytest.mark.parametrize("name", ["C2", "C3", "C4", "V4", "C5"])
    def test_equals_holomorph_enumeration(self, groups, name):
        G = groups[name]
        brute = {b.circle.table.tobytes() for b in sb.brute_force_braces(G)}
        holo = {b.circle.table.tobytes() for b in sb.enumerate_braces(G)}
        assert brute == holo

    def test_c2_c3_single_brace(self, groups):
        assert len(sb.brute_force_braces(groups["C2"])) == 1
        assert len(sb.brute_force_braces(groups["C3"])) == 1

    def test_bound(self, groups):
        with pytest.raises(SizeLimit):
            sb.brute_force_braces(groups["C6"])
