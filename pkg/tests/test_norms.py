import pytest

from cubiclines.lattice import (
    H,
    InvariantFactors,
    RANK,
    Sublattice,
    vscale,
)
from cubiclines.lines27 import LINE_COUNT
from cubiclines.norms import (
    ResNormReport,
    fixed_sublattice,
    h1_coflasque,
    is_three_primary,
    norm_subgroup,
    permutation_fixed_module,
    quotient_report,
    res_norm_check,
    sample_nested_pairs,
    subgroup_fingerprint,
)
from cubiclines.weyl import (
    SplitMix64,
    Subgroup,
    TRIVIAL_SUBGROUP,
    cyclic_subgroups,
    line_stabilizers,
    perm_matrix,
)

REMARK_FIXED_ROWS = (
    (1, 0, 0, 0, 0, 0, 0),
    (0, 1, 1, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 1, 1),
)
REMARK_DELTA_ROWS = (
    (3, 0, 0, 0, 0, 0, 0),
    (0, 1, 1, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 1, 1),
)


def sampled_subgroups(n, seed=29):
    pool = cyclic_subgroups()
    rng = SplitMix64(seed)
    picks = [pool[rng.randrange(len(pool))] for _ in range(n)]
    picks.append(line_stabilizers()[rng.randrange(27)])
    return picks


class TestThreePrimary:
    def test_accepts_powers_of_three(self):
        assert is_three_primary(InvariantFactors((3, 9), 0))
        assert is_three_primary(InvariantFactors((), 0))

    def test_rejects_other_primes_and_free_parts(self):
        assert not is_three_primary(InvariantFactors((2,), 0))
        assert not is_three_primary(InvariantFactors((3, 15), 0))
        assert not is_three_primary(InvariantFactors((), 1))


class TestFixedSublattice:
    def test_trivial_group_fixes_everything(self):
        assert fixed_sublattice(TRIVIAL_SUBGROUP) == Sublattice.full(RANK)

    def test_full_group_fixes_anticanonical_ray(self, full):
        fixed = fixed_sublattice(full)
        assert fixed.rows == ((3, -1, -1, -1, -1, -1, -1),)
        from math import gcd

        assert gcd(*map(abs, fixed.rows[0])) == 1  # primitive generator

    def test_remark_rank_three(self, remark_group):
        assert fixed_sublattice(remark_group).rows == REMARK_FIXED_ROWS

    def test_full_group_trace_average(self, full):
        # Burnside count for the full group, too large for the built-in check
        total = sum(
            sum(perm_matrix(p)[i][i] for i in range(RANK)) for p in full.elements
        )
        assert total == full.order * fixed_sublattice(full).rank

    def test_small_group_trace_check_runs(self, remark_group):
        # order 3 <= threshold: constructor path already cross-checks
        assert fixed_sublattice(remark_group).rank == 3


class TestNormSubgroup:
    def test_trivial_group_norms_span_everything(self):
        # the 27 line classes generate the whole lattice
        assert norm_subgroup(TRIVIAL_SUBGROUP) == Sublattice.full(RANK)

    def test_full_group_single_orbit_sum(self, full):
        assert norm_subgroup(full).rows == ((27, -9, -9, -9, -9, -9, -9),)

    def test_remark_span(self, remark_group):
        assert norm_subgroup(remark_group).rows == REMARK_DELTA_ROWS

    def test_norm_span_inside_fixed(self):
        for sub in sampled_subgroups(25):
            assert fixed_sublattice(sub).contains_sublattice(norm_subgroup(sub))

    def test_norm_rank_equals_fixed_rank(self):
        for sub in sampled_subgroups(25, seed=31):
            assert norm_subgroup(sub).rank == fixed_sublattice(sub).rank


class TestQuotientReport:
    def test_trivial_group(self):
        rep = quotient_report(TRIVIAL_SUBGROUP)
        assert rep.quotient.is_trivial
        assert rep.fixed_line
        assert rep.all_ok

    def test_full_group_z9(self, full):
        rep = quotient_report(full)
        assert rep.quotient == InvariantFactors((9,), 0)
        assert not rep.fixed_line
        assert rep.all_ok

    def test_remark_group_z3_and_membership(self, remark_group):
        rep = quotient_report(remark_group)
        assert rep.quotient == InvariantFactors((3,), 0)
        assert not rep.fixed_line
        assert not rep.delta.contains(H)
        assert rep.delta.contains(vscale(3, H))
        assert rep.all_ok

    def test_report_json_field_order(self, remark_group):
        d = quotient_report(remark_group).to_dict()
        assert list(d) == ["signature", "rank_fixed", "quotient", "fixed_line", "h1", "pass"]
        assert list(d["pass"]) == ["finite", "three_primary", "line_implies_trivial"]

    def test_sampled_reports_pass(self):
        for sub in sampled_subgroups(40, seed=37):
            assert quotient_report(sub).all_ok


class TestH1:
    def test_fixed_module_is_spanned_by_orbit_indicators(self):
        # independent oracle: the fixed part of the permutation module has the
        # orbit indicator vectors as a basis
        for sub in sampled_subgroups(20, seed=41):
            indicators = []
            for orbit in sub.orbits:
                row = [0] * LINE_COUNT
                for i in orbit:
                    row[i] = 1
                indicators.append(tuple(row))
            assert permutation_fixed_module(sub) == Sublattice.span(indicators, LINE_COUNT)

    def test_matches_quotient_torsion(self, full, remark_group):
        for sub in [TRIVIAL_SUBGROUP, remark_group, full, *sampled_subgroups(20, seed=43)]:
            rep = quotient_report(sub)
            assert rep.h1 == rep.quotient

    def test_trivial_whenever_a_line_is_fixed(self):
        count = 0
        for sub in sampled_subgroups(40, seed=47):
            if sub.fixed_indices:
                count += 1
                assert h1_coflasque(sub).is_trivial
        assert count > 0

    def test_pinned_values(self, remark_group, full):
        assert h1_coflasque(TRIVIAL_SUBGROUP) == InvariantFactors((), 0)
        assert h1_coflasque(remark_group) == InvariantFactors((3,), 0)
        assert h1_coflasque(full) == InvariantFactors((9,), 0)


class TestResNorm:
    def test_equal_pair_is_identity(self, remark_group):
        rep = res_norm_check(remark_group, remark_group)
        assert rep.index == 1
        assert rep.all_ok

    def test_remark_over_trivial_multiplies_by_three(self, remark_group):
        rep = res_norm_check(remark_group, TRIVIAL_SUBGROUP)
        assert rep.index == 3
        assert rep.all_ok
        # the index annihilates the quotient: 3v lands in the norm span
        delta = norm_subgroup(remark_group)
        for v in fixed_sublattice(remark_group).rows:
            assert delta.contains(vscale(3, v))

    def test_rejects_non_subgroup(self, remark_group):
        other = line_stabilizers()[0]
        with pytest.raises(ValueError):
            res_norm_check(remark_group, other)

    def test_stabilizer_over_cyclic(self, full):
        stab = line_stabilizers()[5]
        g = stab.elements[100]
        from cubiclines.weyl import closure_set

        small = Subgroup((g,), elements=closure_set((g,)))
        rep = res_norm_check(stab, small)
        assert rep.index * small.order == stab.order
        assert rep.all_ok

    def test_sampled_pairs(self):
        for big, small in sample_nested_pairs(seed=53, count=30):
            rep = res_norm_check(big, small)
            assert isinstance(rep, ResNormReport)
            assert rep.all_ok, (big.order, small.order)


class TestFingerprint:
    def test_equal_groups_equal_fingerprints(self, remark_group):
        again = Subgroup(remark_group.generators)
        assert subgroup_fingerprint(remark_group) == subgroup_fingerprint(again)

    def test_distinct_conjugates_distinguished(self):
        stabs = line_stabilizers()
        assert subgroup_fingerprint(stabs[0]) != subgroup_fingerprint(stabs[1])
