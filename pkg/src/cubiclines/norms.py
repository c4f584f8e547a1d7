"""Fixed lattices, norm spans, quotient invariants, and the H^1 cokernel.

For a subgroup G acting on the 27 lines, the fixed sublattice is the
saturated kernel of the stacked maps (M_g - I), the norm span is the
integer span of the G-orbit sums of line classes, and the quotient of
the first by the second is the object of study.  A norm from any
subgroup of a line's stabilizer is an integer multiple of that line's
orbit sum, so orbit sums already generate every norm class and the
span is the correct one.

H^1 of the kernel of the permutation module on lines surjecting onto
the lattice is computed as the cokernel of (Z^27)^G -> fixed lattice,
where the fixed part of the permutation module is itself an integer
kernel computation, independent of the orbit enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import (
    RANK,
    InvariantFactors,
    Sublattice,
    apply_matrix,
    left_kernel,
    quotient_invariants,
    vscale,
    vsub,
    vsum,
)
from .lines27 import LINE_COUNT, build_line_table
from .weyl import Subgroup, closure_set, compose, perm_matrix

# Burnside rank cross-check runs when the subgroup is small enough to
# enumerate cheaply; it needs the trace of every element's matrix.
TRACE_CHECK_MAX_ORDER = 2048


def is_three_primary(factors: InvariantFactors) -> bool:
    """True iff every torsion factor is a power of 3 (and the group is finite)."""
    if factors.free_rank:
        return False
    for d in factors.torsion:
        while d % 3 == 0:
            d //= 3
        if d != 1:
            return False
    return True


def _stacked_fixed_kernel(rows_per_gen, n):
    """Left kernel of the horizontally stacked (A_g - I) blocks."""
    stacked = [[] for _ in range(n)]
    for mat in rows_per_gen:
        for i in range(n):
            row = list(mat[i])
            row[i] -= 1
            stacked[i].extend(row)
    return left_kernel(stacked)


def fixed_sublattice(group: Subgroup) -> Sublattice:
    """The saturated sublattice of classes fixed by every generator of the group.

    For small groups the rank is cross-checked against the average of
    the matrix traces over all elements, which must be an exact integer.
    """
    gens = group.generators
    if not gens:
        return Sublattice.full(RANK)
    mats = [perm_matrix(g) for g in gens]
    fixed = Sublattice(_stacked_fixed_kernel(mats, RANK), RANK)
    if group.order <= TRACE_CHECK_MAX_ORDER:
        total = sum(
            sum(perm_matrix(p)[i][i] for i in range(RANK)) for p in group.elements
        )
        avg, rem = divmod(total, group.order)
        if rem or avg != fixed.rank:
            raise AssertionError(
                f"fixed rank {fixed.rank} disagrees with trace average {total}/{group.order}"
            )
    return fixed


def norm_subgroup(group: Subgroup) -> Sublattice:
    """The span of the orbit sums of the 27 line classes under the group."""
    classes = build_line_table().classes
    sums = [vsum(classes[i] for i in orbit) for orbit in group.orbits]
    return Sublattice.span(sums)


def permutation_fixed_module(group: Subgroup) -> Sublattice:
    """The fixed part of the rank-27 permutation module, as an integer kernel."""
    gens = group.generators
    if not gens:
        return Sublattice.full(LINE_COUNT)
    mats = []
    for g in gens:
        mats.append([[1 if j == g[i] else 0 for j in range(LINE_COUNT)] for i in range(LINE_COUNT)])
    return Sublattice(_stacked_fixed_kernel(mats, LINE_COUNT), LINE_COUNT)


def h1_coflasque(group: Subgroup, fixed: Sublattice | None = None) -> InvariantFactors:
    """H^1 of the coflasque kernel, as coker((Z^27)^G -> fixed lattice).

    The fixed permutation module is pushed through the line-class map;
    its image lands inside the fixed lattice and the cokernel invariants
    are returned.  This must agree with the quotient by the norm span.
    """
    classes = build_line_table().classes
    module = permutation_fixed_module(group)
    image = Sublattice.span(
        [
            vsum(vscale(row[i], classes[i]) for i in range(LINE_COUNT) if row[i])
            for row in module.rows
        ]
    )
    if fixed is None:
        fixed = fixed_sublattice(group)
    return quotient_invariants(fixed, image)


@dataclass(frozen=True)
class NormReport:
    """Per-subgroup verification record, JSON-stable via to_dict()."""

    order: int
    orbit_sizes: tuple
    rank_fixed: int
    quotient: InvariantFactors
    fixed_line: bool
    h1: InvariantFactors
    fixed: Sublattice
    delta: Sublattice

    @property
    def finite_ok(self) -> bool:
        return self.quotient.free_rank == 0

    @property
    def three_primary_ok(self) -> bool:
        return is_three_primary(self.quotient)

    @property
    def line_implies_trivial_ok(self) -> bool:
        return (not self.fixed_line) or self.quotient.is_trivial

    @property
    def h1_consistent(self) -> bool:
        return self.h1 == self.quotient

    @property
    def all_ok(self) -> bool:
        return (
            self.finite_ok
            and self.three_primary_ok
            and self.line_implies_trivial_ok
            and self.h1_consistent
        )

    def to_dict(self) -> dict:
        return {
            "signature": {"order": self.order, "orbit_sizes": list(self.orbit_sizes)},
            "rank_fixed": self.rank_fixed,
            "quotient": self.quotient.to_dict(),
            "fixed_line": self.fixed_line,
            "h1": self.h1.to_dict(),
            "pass": {
                "finite": self.finite_ok,
                "three_primary": self.three_primary_ok,
                "line_implies_trivial": self.line_implies_trivial_ok,
            },
        }


def quotient_report(group: Subgroup) -> NormReport:
    """Compute the full fixed-lattice / norm-span / quotient / H^1 record."""
    fixed = fixed_sublattice(group)
    delta = norm_subgroup(group)
    quotient = quotient_invariants(fixed, delta)
    h1 = h1_coflasque(group, fixed=fixed)
    orbit_sizes = group.orbit_sizes
    return NormReport(
        order=group.order,
        orbit_sizes=orbit_sizes,
        rank_fixed=fixed.rank,
        quotient=quotient,
        fixed_line=1 in orbit_sizes,
        h1=h1,
        fixed=fixed,
        delta=delta,
    )


def subgroup_fingerprint(group: Subgroup) -> tuple:
    """Dedup key for sweep families: signature plus the canonical fixed and
    norm-span forms.  Subgroups sharing it produce identical reports."""
    fixed = fixed_sublattice(group)
    delta = norm_subgroup(group)
    return (group.order, group.orbit_sizes, fixed.rows, delta.rows)


@dataclass(frozen=True)
class ResNormReport:
    order_g: int
    order_h: int
    index: int
    transversal_independent: bool
    norm_into_fixed: bool
    norm_maps_delta: bool
    composite_is_index: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.transversal_independent
            and self.norm_into_fixed
            and self.norm_maps_delta
            and self.composite_is_index
        )

    def to_dict(self) -> dict:
        return {
            "order_g": self.order_g,
            "order_h": self.order_h,
            "index": self.index,
            "pass": {
                "transversal_independent": self.transversal_independent,
                "norm_into_fixed": self.norm_into_fixed,
                "norm_maps_delta": self.norm_maps_delta,
                "composite_is_index": self.composite_is_index,
            },
        }


def res_norm_check(big: Subgroup, small: Subgroup) -> ResNormReport:
    """Restriction / norm functoriality between nested subgroups.

    Restriction is the inclusion of fixed classes; the norm sends an
    H-fixed class to its sum over a left transversal of G/H.  Checked:
    the norm is transversal independent, lands in the G-fixed lattice,
    maps the H-norm span into the G-norm span, and composed with
    restriction is multiplication by the index on the quotient.
    """
    gset = set(big.elements)
    if any(h not in gset for h in small.elements):
        raise ValueError("second subgroup is not contained in the first")
    index = big.order // small.order
    h_elements = small.elements
    seen = set()
    reps_lo = []
    reps_hi = []
    for g in big.elements:
        if g in seen:
            continue
        coset = sorted(compose(g, h) for h in h_elements)
        seen.update(coset)
        reps_lo.append(coset[0])
        reps_hi.append(coset[-1])
    if len(reps_lo) != index:
        raise AssertionError("coset count disagrees with the index")

    fixed_g = fixed_sublattice(big)
    fixed_h = fixed_sublattice(small)
    delta_g = norm_subgroup(big)
    delta_h = norm_subgroup(small)
    mats_lo = [perm_matrix(r) for r in reps_lo]
    mats_hi = [perm_matrix(r) for r in reps_hi]

    def norm_via(mats, v):
        return vsum(apply_matrix(v, m) for m in mats)

    transversal_ok = all(
        norm_via(mats_lo, v) == norm_via(mats_hi, v) for v in fixed_h.rows
    )
    into_ok = all(fixed_g.contains(norm_via(mats_lo, v)) for v in fixed_h.rows)
    delta_ok = all(delta_g.contains(norm_via(mats_lo, v)) for v in delta_h.rows)
    composite_ok = all(
        delta_g.contains(vsub(norm_via(mats_lo, v), vscale(index, v)))
        for v in fixed_g.rows
    )
    return ResNormReport(
        order_g=big.order,
        order_h=small.order,
        index=index,
        transversal_independent=transversal_ok,
        norm_into_fixed=into_ok,
        norm_maps_delta=delta_ok,
        composite_is_index=composite_ok,
    )


def sample_nested_pairs(seed: int, count: int, max_order: int = 4000) -> list:
    """Deterministic nested (G, H) pairs drawn from the base subgroup family.

    G ranges over cyclic subgroups and line stabilizers up to max_order
    (transversals are enumerated, so G stays modest); H is the trivial
    group, G itself, or the closure of one or two elements of G.
    """
    from .weyl import SplitMix64, TRIVIAL_SUBGROUP, cyclic_subgroups, line_stabilizers

    pool = [s for s in cyclic_subgroups() if s.order > 1]
    pool.extend(line_stabilizers())
    pool = [s for s in pool if s.order <= max_order]
    rng = SplitMix64(seed)
    pairs = []
    while len(pairs) < count:
        big = pool[rng.randrange(len(pool))]
        mode = rng.randrange(4)
        if mode == 0:
            small = TRIVIAL_SUBGROUP
        elif mode == 1:
            small = big
        else:
            k = 1 if mode == 2 else 2
            gens = tuple(big.elements[rng.randrange(big.order)] for _ in range(k))
            small = Subgroup(gens, elements=closure_set(gens))
        pairs.append((big, small))
    return pairs
