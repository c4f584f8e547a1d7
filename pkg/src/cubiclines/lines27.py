"""The 27 line classes on a cubic surface and their incidence structure.

In the blow-up basis the lines are the 6 exceptional classes E1..E6, the
15 classes Lij = H - Ei - Ej (i < j, lexicographic), and the 6 conic
classes Ci = 2H - sum of the other five E's.  Every line l satisfies
l.l = -1 and l.omega = -1, meets exactly 10 other lines (pairing 1) and
is skew to the remaining 16 (pairing 0).

The module also houses the exhaustive sixth-skew-line checker: five
pairwise skew lines admit a sixth line skew to all of them exactly when
the sum of the five minus the canonical class is not divisible by 2 in
the full lattice, and that sixth line is then unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .lattice import (
    EXCEPTIONAL,
    H,
    OMEGA,
    intersection_pairing,
    is_divisible_by,
    vsub,
    vsum,
)

LINE_COUNT = 27

SAME = "same"
MEETS = "meets"
SKEW = "skew"


class UniquenessError(AssertionError):
    """More than one sixth skew line was found; this would falsify uniqueness."""


@dataclass(frozen=True)
class LineTable:
    """The 27 line classes, their names, and the pairwise intersection numbers."""

    classes: tuple
    names: tuple
    incidence: tuple  # 27x27 pairing values: -1 on the diagonal, 0/1 off it

    @property
    def index_of(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    @property
    def class_index(self) -> dict:
        return {c: i for i, c in enumerate(self.classes)}

    @property
    def skew_masks(self) -> tuple:
        """Per line, the bitmask of lines it is skew to."""
        masks = []
        for i in range(LINE_COUNT):
            m = 0
            for j in range(LINE_COUNT):
                if i != j and self.incidence[i][j] == 0:
                    m |= 1 << j
            masks.append(m)
        return tuple(masks)

    @property
    def meet_masks(self) -> tuple:
        masks = []
        for i in range(LINE_COUNT):
            m = 0
            for j in range(LINE_COUNT):
                if i != j and self.incidence[i][j] == 1:
                    m |= 1 << j
            masks.append(m)
        return tuple(masks)


@lru_cache(maxsize=1)
def build_line_table() -> LineTable:
    classes = list(EXCEPTIONAL)
    names = [f"E{i}" for i in range(1, 7)]
    for i, j in itertools.combinations(range(1, 7), 2):
        classes.append(vsub(vsub(H, EXCEPTIONAL[i - 1]), EXCEPTIONAL[j - 1]))
        names.append(f"L{i}{j}")
    for i in range(1, 7):
        conic = [2] + [-1] * 6
        conic[i] = 0
        classes.append(tuple(conic))
        names.append(f"C{i}")
    incidence = tuple(
        tuple(intersection_pairing(a, b) for b in classes) for a in classes
    )
    return LineTable(tuple(classes), tuple(names), incidence)


def incidence(i: int, j: int, table: LineTable | None = None) -> str:
    """Classify a pair of line indices as same, meets, or skew."""
    table = table or build_line_table()
    if not (0 <= i < LINE_COUNT and 0 <= j < LINE_COUNT):
        raise IndexError(f"line index out of range: ({i}, {j})")
    if i == j:
        return SAME
    return MEETS if table.incidence[i][j] == 1 else SKEW


def pairwise_skew(indices, table: LineTable | None = None) -> bool:
    table = table or build_line_table()
    return all(
        table.incidence[i][j] == 0 for i, j in itertools.combinations(indices, 2)
    )


def _sixth_candidates(five, table: LineTable) -> list:
    masks = table.skew_masks
    wanted = 0
    for i in five:
        wanted |= 1 << i
    cand = (1 << LINE_COUNT) - 1
    for i in five:
        cand &= masks[i]
    cand &= ~wanted
    out = []
    while cand:
        b = cand & -cand
        out.append(b.bit_length() - 1)
        cand ^= b
    return out


def sixth_skew_line(five, table: LineTable | None = None) -> int | None:
    """The unique line skew to all five pairwise skew input lines, or None.

    Raises ValueError if the input is not five distinct pairwise skew
    lines, and UniquenessError if more than one candidate shows up.
    """
    table = table or build_line_table()
    five = tuple(five)
    if len(set(five)) != 5:
        raise ValueError("expected 5 distinct line indices")
    for i in five:
        if not 0 <= i < LINE_COUNT:
            raise IndexError(f"line index out of range: {i}")
    if not pairwise_skew(five, table):
        raise ValueError("input lines are not pairwise skew")
    cands = _sixth_candidates(five, table)
    if len(cands) > 1:
        raise UniquenessError(f"multiple sixth lines for {five}: {cands}")
    return cands[0] if cands else None


def skew_cliques(size: int, table: LineTable | None = None) -> list:
    """All size-subsets of pairwise skew lines, by backtracking over bitmasks."""
    table = table or build_line_table()
    masks = table.skew_masks
    out = []

    def extend(chosen, cand):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        m = cand
        while m:
            b = m & -m
            i = b.bit_length() - 1
            m ^= b
            # remaining candidates keep only indices above i, pruning duplicates
            extend(chosen + [i], m & masks[i])

    extend([], (1 << LINE_COUNT) - 1)
    return out


@dataclass(frozen=True)
class SixthLineReport:
    tuples_checked: int
    with_sixth: int
    without_sixth: int
    equivalence_failures: int
    uniqueness_failures: int

    @property
    def failures(self) -> int:
        return self.equivalence_failures + self.uniqueness_failures

    def to_dict(self) -> dict:
        return {
            "tuples_checked": self.tuples_checked,
            "with_sixth": self.with_sixth,
            "without_sixth": self.without_sixth,
            "equivalence_failures": self.equivalence_failures,
            "uniqueness_failures": self.uniqueness_failures,
        }


def verify_sixth_line_equivalence(table: LineTable | None = None) -> SixthLineReport:
    """Exhaustive check over all pairwise skew 5-tuples.

    For each tuple: a sixth skew line exists iff sum(lines) - omega is
    not 2-divisible, and at most one candidate may exist.  Failures are
    tallied, never raised, so a corrupted table can be probed.
    """
    table = table or build_line_table()
    with_sixth = without_sixth = equiv_fail = uniq_fail = 0
    cliques = skew_cliques(5, table)
    for five in cliques:
        cands = _sixth_candidates(five, table)
        total = vsub(vsum(table.classes[i] for i in five), OMEGA)
        indivisible = not is_divisible_by(total, 2)
        if cands:
            with_sixth += 1
        else:
            without_sixth += 1
        if bool(cands) != indivisible:
            equiv_fail += 1
        if len(cands) > 1:
            uniq_fail += 1
    return SixthLineReport(
        tuples_checked=len(cliques),
        with_sixth=with_sixth,
        without_sixth=without_sixth,
        equivalence_failures=equiv_fail,
        uniqueness_failures=uniq_fail,
    )


def corrupted_line_table() -> LineTable:
    """A deliberately broken table (E1/E2 marked as meeting) for harness self-tests."""
    table = build_line_table()
    incidence = [list(row) for row in table.incidence]
    incidence[0][1] = incidence[1][0] = 1
    return LineTable(table.classes, table.names, tuple(tuple(r) for r in incidence))


def line_table_json(table: LineTable | None = None) -> list:
    """The table as JSON records: index, name, coefficients, met line indices."""
    table = table or build_line_table()
    records = []
    for i in range(LINE_COUNT):
        meets = [j for j in range(LINE_COUNT) if table.incidence[i][j] == 1]
        records.append(
            {
                "index": i,
                "name": table.names[i],
                "coeffs": list(table.classes[i]),
                "meets": meets,
            }
        )
    return records
