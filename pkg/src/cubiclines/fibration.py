"""Conic-fibration combinatorics attached to a fixed line.

The ten lines meeting a fixed line l split into five pairs of mutually
meeting lines; each pair sums to the fiber class F = -omega - l, with
l.F = 2 and F.F = 0.  A group fixing l admits a section class exactly
when some fixed class pairs to 1 with F; a fixed line skew to l always
provides one.  The quotient of the fixed lattice by the norm span is
generated by the image of F and killed by 5 (the five degenerate
fibers sum to 5F inside the norm span), which together with the
three-primary property forces it to be trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .lattice import (
    OMEGA,
    DivisorClass,
    intersection_pairing,
    solve_intersection_one,
    vadd,
    vneg,
    vscale,
    vsub,
)
from .lines27 import LINE_COUNT, build_line_table
from .norms import fixed_sublattice, norm_subgroup
from .weyl import Subgroup


class FiberMatchingError(AssertionError):
    """The ten incident lines failed to split into five meeting pairs."""


@dataclass(frozen=True)
class ConicFibration:
    base_line: int
    fiber_class: DivisorClass
    pairs: tuple  # five sorted index pairs; each pair meets and sums to the fiber


@lru_cache(maxsize=LINE_COUNT)
def build_fibration(line: int) -> ConicFibration:
    """Match the ten lines meeting `line` into the five degenerate fibers."""
    return build_fibration_from(build_line_table(), line)


def build_fibration_from(table, line: int) -> ConicFibration:
    if not 0 <= line < LINE_COUNT:
        raise IndexError(f"line index out of range: {line}")
    fiber = vsub(vneg(OMEGA), table.classes[line])
    incident = [j for j in range(LINE_COUNT) if table.incidence[line][j] == 1]
    if len(incident) != 10:
        raise FiberMatchingError(f"line {line} has {len(incident)} incident lines")
    pairs = []
    used = set()
    for a in incident:
        if a in used:
            continue
        partners = [
            b
            for b in incident
            if b != a
            and b not in used
            and table.incidence[a][b] == 1
            and vadd(table.classes[a], table.classes[b]) == fiber
        ]
        if len(partners) != 1:
            raise FiberMatchingError(
                f"line {table.names[a]} has {len(partners)} fiber partners"
            )
        used.update((a, partners[0]))
        pairs.append(tuple(sorted((a, partners[0]))))
    if sorted(used) != incident:
        raise FiberMatchingError("pair matching did not cover the incident lines")
    if intersection_pairing(table.classes[line], fiber) != 2:
        raise FiberMatchingError("base line does not meet the fiber twice")
    if intersection_pairing(fiber, fiber) != 0:
        raise FiberMatchingError("fiber class has nonzero self-intersection")
    return ConicFibration(line, fiber, tuple(sorted(pairs)))


def _require_fixes_line(group: Subgroup, line: int):
    if any(g[line] != line for g in group.generators):
        raise ValueError(f"group does not fix line index {line}")


def section_class_exists(group: Subgroup, fib: ConicFibration) -> bool:
    """True iff some class fixed by the group pairs to 1 with the fiber."""
    _require_fixes_line(group, fib.base_line)
    return solve_intersection_one(fixed_sublattice(group), fib.fiber_class)


def skew_fixed_line_exists(group: Subgroup, fib: ConicFibration) -> bool:
    """True iff the group fixes some line skew to the base line."""
    _require_fixes_line(group, fib.base_line)
    table = build_line_table()
    return any(
        table.incidence[fib.base_line][j] == 0
        for j in group.fixed_indices
        if j != fib.base_line
    )


@dataclass(frozen=True)
class SectionCheck:
    line: int
    section_exists: bool
    skew_line_exists: bool

    @property
    def forward_ok(self) -> bool:
        # a fixed skew line pairs to 1 with the fiber, so it is a section class
        return (not self.skew_line_exists) or self.section_exists

    @property
    def equivalence_ok(self) -> bool:
        return self.section_exists == self.skew_line_exists

    def to_dict(self) -> dict:
        return {
            "line": self.line,
            "section_exists": self.section_exists,
            "skew_fixed_line_exists": self.skew_line_exists,
            "forward_ok": self.forward_ok,
            "equivalence_ok": self.equivalence_ok,
        }


def check_section_criterion(group: Subgroup, fib: ConicFibration) -> SectionCheck:
    """The section criterion for a group fixing the base line: the forward
    implication must hold; the full equivalence is recorded."""
    return SectionCheck(
        line=fib.base_line,
        section_exists=section_class_exists(group, fib),
        skew_line_exists=skew_fixed_line_exists(group, fib),
    )


def fiber_annihilation_check(group: Subgroup, fib: ConicFibration) -> bool:
    """The mechanism forcing triviality for a fixed line: 5F and the base
    line lie in the norm span, and F generates the quotient."""
    _require_fixes_line(group, fib.base_line)
    table = build_line_table()
    delta = norm_subgroup(group)
    fixed = fixed_sublattice(group)
    five_f_in = delta.contains(vscale(5, fib.fiber_class))
    base_in = delta.contains(table.classes[fib.base_line])
    generates = delta.with_vectors(fib.fiber_class) == fixed
    return five_f_in and base_in and generates


def fibration_structure_report(line: int) -> dict:
    """Structural invariants for one line's fibration, as a JSON record."""
    table = build_line_table()
    fib = build_fibration(line)
    classes = table.classes
    base = classes[line]
    pair_sums_ok = all(
        vadd(classes[a], classes[b]) == fib.fiber_class for a, b in fib.pairs
    )
    pairs_meet_ok = all(table.incidence[a][b] == 1 for a, b in fib.pairs)
    # any one-per-pair choice must be pairwise skew
    choices_skew_ok = True
    for choice in product(*fib.pairs):
        for a, b in combinations(choice, 2):
            if table.incidence[a][b] != 0:
                choices_skew_ok = False
    return {
        "line": table.names[line],
        "index": line,
        "F": list(fib.fiber_class),
        "pairs": [[table.names[a], table.names[b]] for a, b in fib.pairs],
        "checks": {
            "pair_count": len(fib.pairs),
            "pairs_meet": pairs_meet_ok,
            "pair_sums_match_fiber": pair_sums_ok,
            "base_dot_fiber": intersection_pairing(base, fib.fiber_class),
            "fiber_self_intersection": intersection_pairing(
                fib.fiber_class, fib.fiber_class
            ),
            "one_per_pair_choices_skew": choices_skew_ok,
        },
    }


def all_fibration_reports() -> list:
    return [fibration_structure_report(i) for i in range(LINE_COUNT)]
