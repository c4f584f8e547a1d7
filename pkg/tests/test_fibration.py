from itertools import combinations, product

import pytest

from cubiclines.fibration import (
    FiberMatchingError,
    all_fibration_reports,
    build_fibration,
    build_fibration_from,
    check_section_criterion,
    fiber_annihilation_check,
    section_class_exists,
    skew_fixed_line_exists,
)
from cubiclines.lattice import OMEGA, intersection_pairing, vadd, vneg, vsub
from cubiclines.lines27 import LINE_COUNT, corrupted_line_table
from cubiclines.norms import quotient_report
from cubiclines.weyl import (
    SplitMix64,
    TRIVIAL_SUBGROUP,
    cyclic_subgroups,
    generate_closure,
    line_stabilizers,
    perm_order,
)


class TestStructure:
    def test_base_line_e6(self, table):
        fib = build_fibration(5)
        assert fib.fiber_class == (3, -1, -1, -1, -1, -1, -2)
        named = [(table.names[a], table.names[b]) for a, b in fib.pairs]
        assert named == [(f"L{i}6", f"C{i}") for i in range(1, 6)]

    def test_every_line(self, table):
        for line in range(LINE_COUNT):
            fib = build_fibration(line)
            base = table.classes[line]
            assert fib.fiber_class == vsub(vneg(OMEGA), base)
            assert intersection_pairing(base, fib.fiber_class) == 2
            assert intersection_pairing(fib.fiber_class, fib.fiber_class) == 0
            assert len(fib.pairs) == 5
            for a, b in fib.pairs:
                assert table.incidence[a][b] == 1
                assert vadd(table.classes[a], table.classes[b]) == fib.fiber_class

    def test_one_per_pair_choices_are_skew(self, table):
        for line in range(LINE_COUNT):
            fib = build_fibration(line)
            for choice in product(*fib.pairs):
                for a, b in combinations(choice, 2):
                    assert table.incidence[a][b] == 0

    def test_matching_failure_aborts_loudly(self):
        with pytest.raises(FiberMatchingError):
            build_fibration_from(corrupted_line_table(), 0)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            build_fibration_from(None, 27)

    def test_reports_all_pass(self):
        for rec in all_fibration_reports():
            checks = rec["checks"]
            assert checks["pair_count"] == 5
            assert checks["pairs_meet"]
            assert checks["pair_sums_match_fiber"]
            assert checks["base_dot_fiber"] == 2
            assert checks["fiber_self_intersection"] == 0
            assert checks["one_per_pair_choices_skew"]


class TestSectionCriterion:
    def test_trivial_group_always_has_sections(self):
        for line in range(LINE_COUNT):
            fib = build_fibration(line)
            assert section_class_exists(TRIVIAL_SUBGROUP, fib)
            assert skew_fixed_line_exists(TRIVIAL_SUBGROUP, fib)

    def test_full_stabilizer_has_none(self):
        # regression, derived: the stabilizer of a line fixes no other line
        # and every fixed class pairs evenly with the fiber
        fib = build_fibration(5)
        stab = line_stabilizers()[5]
        check = check_section_criterion(stab, fib)
        assert not check.section_exists
        assert not check.skew_line_exists
        assert check.forward_ok and check.equivalence_ok

    def test_single_pair_swap_subgroup(self, table):
        # regression, derived: the involution exchanging exactly one fiber
        # pair (L16 <-> C1) fixes only lines meeting E6, hence no section
        fib = build_fibration(5)
        stab = line_stabilizers()[5]
        ix = table.index_of
        fixed_names = ("L36", "L46", "L56", "C3", "C4", "C5")
        swappers = [
            p
            for p in stab.elements
            if p[ix["L16"]] == ix["C1"]
            and p[ix["L26"]] == ix["C2"]
            and all(p[ix[n]] == ix[n] for n in fixed_names)
        ]
        assert len(swappers) == 1
        g = swappers[0]
        assert perm_order(g) == 2
        sub = generate_closure([g])
        check = check_section_criterion(sub, fib)
        assert not check.section_exists
        assert not check.skew_line_exists
        assert check.equivalence_ok

    def test_precondition_enforced(self, remark_group):
        fib = build_fibration(5)
        with pytest.raises(ValueError):
            section_class_exists(remark_group, fib)
        with pytest.raises(ValueError):
            skew_fixed_line_exists(remark_group, fib)

    def test_forward_direction_over_samples(self):
        pool = cyclic_subgroups()
        rng = SplitMix64(61)
        pairs = 0
        for _ in range(60):
            sub = pool[rng.randrange(len(pool))]
            for line in sub.fixed_indices:
                check = check_section_criterion(sub, build_fibration(line))
                assert check.forward_ok
                pairs += 1
        assert pairs > 50


class TestFiberAnnihilation:
    def test_trivial_group(self):
        assert fiber_annihilation_check(TRIVIAL_SUBGROUP, build_fibration(0))

    def test_stabilizers(self):
        for i in (0, 5, 20, 26):
            assert fiber_annihilation_check(line_stabilizers()[i], build_fibration(i))

    def test_samples_and_quotient_cross_check(self):
        pool = cyclic_subgroups()
        rng = SplitMix64(67)
        seen = 0
        for _ in range(40):
            sub = pool[rng.randrange(len(pool))]
            if not sub.fixed_indices:
                continue
            seen += 1
            rep = quotient_report(sub)
            assert rep.quotient.is_trivial
            for line in sub.fixed_indices:
                assert fiber_annihilation_check(sub, build_fibration(line))
        assert seen > 10

    def test_precondition_enforced(self, remark_group):
        with pytest.raises(ValueError):
            fiber_annihilation_check(remark_group, build_fibration(5))
