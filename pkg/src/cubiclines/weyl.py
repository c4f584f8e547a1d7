"""The symmetry group of the 27-line configuration, as permutations of line indices.

A permutation is stored as a length-27 bytes object p with p[i] the image
of line i; composition is a single bytes.translate call.  Generators are
built from explicit lattice isometries (the five adjacent swaps of the
exceptional classes plus one quadratic involution), so every element is
incidence preserving by construction, and that is re-checked bulk-wise.

The module supplies the subgroup families for the verification sweeps:
all cyclic subgroups (exhaustive over the element list, deduplicated),
the 27 line stabilizers, and seeded random subgroups drawn with a
SplitMix64 counter-based generator.
"""

from __future__ import annotations

import re
from functools import lru_cache

from . import lattice
from .lattice import RANK, apply_matrix, identity_matrix, matmul, transpose
from .lines27 import LINE_COUNT, LineTable, build_line_table

Perm = bytes

IDENTITY: Perm = bytes(range(LINE_COUNT))

_PAD = bytes(range(LINE_COUNT, 256))

# Diagonal of the intersection form, for isometry checks.
_FORM = [[1 if i == j == 0 else (-1 if i == j else 0) for j in range(RANK)] for i in range(RANK)]

# Line indices whose classes form a basis of the full lattice: E1..E6 and L56.
_BASIS_LINES = (0, 1, 2, 3, 4, 5, 20)


def compose(p: Perm, q: Perm) -> Perm:
    """p o q: apply q first, then p."""
    return q.translate(p + _PAD)


def inverse(p: Perm) -> Perm:
    inv = bytearray(LINE_COUNT)
    for i, img in enumerate(p):
        inv[img] = i
    return bytes(inv)


def perm_order(p: Perm) -> int:
    q = p
    n = 1
    table = p + _PAD
    while q != IDENTITY:
        q = q.translate(table)
        n += 1
    return n


def preserves_incidence(p: Perm, table: LineTable | None = None) -> bool:
    table = table or build_line_table()
    inc = table.incidence
    return all(
        inc[p[i]][p[j]] == inc[i][j]
        for i in range(LINE_COUNT)
        for j in range(i + 1, LINE_COUNT)
    )


def all_preserve_incidence(perms, table: LineTable | None = None) -> bool:
    """Bulk incidence check over many permutations (vectorized with numpy)."""
    import numpy as np

    table = table or build_line_table()
    inc = np.array(table.incidence, dtype=np.int8)
    perms = list(perms)
    chunk = 2048
    for k in range(0, len(perms), chunk):
        block = np.frombuffer(b"".join(perms[k : k + chunk]), dtype=np.uint8)
        block = block.reshape(-1, LINE_COUNT)
        imgs = inc[block[:, :, None], block[:, None, :]]
        if not (imgs == inc).all():
            return False
    return True


def perm_matrix(p: Perm, table: LineTable | None = None):
    """The 7x7 lattice isometry inducing p, as rows of basis images.

    Rows 1..6 are the images of E1..E6 (the classes of lines p[0..5]);
    the image of H is recovered from H = L56 + E5 + E6.
    """
    table = table or build_line_table()
    cls = table.classes
    rows = [None] * RANK
    for i in range(6):
        rows[i + 1] = cls[p[i]]
    l56 = cls[p[_BASIS_LINES[6]]]
    rows[0] = tuple(a + b + c for a, b, c in zip(l56, cls[p[4]], cls[p[5]]))
    return [list(r) for r in rows]


def induced_line_permutation(basis_images, table: LineTable | None = None) -> Perm:
    """The line permutation induced by a lattice map given on the basis H, E1..E6.

    The map must preserve the intersection form and fix the canonical
    class, and must send every line class to a line class; otherwise a
    ValueError is raised.
    """
    table = table or build_line_table()
    m = [list(map(int, row)) for row in basis_images]
    if len(m) != RANK or any(len(r) != RANK for r in m):
        raise ValueError(f"expected {RANK} basis image rows of length {RANK}")
    if matmul(matmul(m, _FORM), transpose(m)) != _FORM:
        raise ValueError("basis images do not preserve the intersection form")
    if apply_matrix(lattice.OMEGA, m) != lattice.OMEGA:
        raise ValueError("basis images do not fix the canonical class")
    lookup = table.class_index
    image = bytearray(LINE_COUNT)
    for i, c in enumerate(table.classes):
        img = apply_matrix(c, m)
        j = lookup.get(img)
        if j is None:
            raise ValueError(f"image of line {table.names[i]} is not a line class: {img}")
        image[i] = j
    p = bytes(image)
    if len(set(p)) != LINE_COUNT:
        raise ValueError("induced map on lines is not a bijection")
    return p


def validate_line_permutation(p: Perm, table: LineTable | None = None) -> Perm:
    """Check that a raw 27-permutation is induced by an isometry fixing omega."""
    table = table or build_line_table()
    if sorted(p) != list(range(LINE_COUNT)):
        raise ValueError("not a permutation of 0..26")
    m = perm_matrix(p, table)
    q = induced_line_permutation(m, table)
    if q != p:
        raise ValueError("permutation is not induced by a lattice isometry")
    return p


def standard_generators(table: LineTable | None = None) -> tuple:
    """Documented generators: adjacent swaps of E1..E6 plus the quadratic
    involution based at the first three points."""
    table = table or build_line_table()
    gens = []
    for i in range(1, 6):
        m = identity_matrix(RANK)
        m[i], m[i + 1] = m[i + 1], m[i]
        gens.append(induced_line_permutation(m, table))
    cremona = [
        [2, -1, -1, -1, 0, 0, 0],
        [1, 0, -1, -1, 0, 0, 0],
        [1, -1, 0, -1, 0, 0, 0],
        [1, -1, -1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ]
    gens.append(induced_line_permutation(cremona, table))
    return tuple(gens)


def closure_set(gens) -> set:
    """Breadth-first closure of a generator list under composition."""
    tables = [g + _PAD for g in set(gens)]
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        new = []
        for x in frontier:
            for t in tables:
                y = x.translate(t)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


class Subgroup:
    """A subgroup of the line symmetry group: generators plus its element set.

    Elements are materialized lazily (sorted canonically); the order can
    be known up front, from a stabilizer chain, without enumeration.
    """

    __slots__ = ("generators", "_elements", "_order", "_orbits")

    def __init__(self, generators, elements=None, order=None):
        self.generators = tuple(generators)
        self._elements = tuple(sorted(elements)) if elements is not None else None
        self._order = order if order is not None else (
            len(self._elements) if self._elements is not None else None
        )
        self._orbits = None

    @property
    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(sorted(closure_set(self.generators)))
            if self._order is not None and self._order != len(self._elements):
                raise AssertionError("stabilizer-chain order disagrees with closure")
            self._order = len(self._elements)
        return self._elements

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = group_order(self.generators)
        return self._order

    @property
    def orbits(self) -> tuple:
        if self._orbits is None:
            self._orbits = orbits_of(self.generators)
        return self._orbits

    @property
    def orbit_sizes(self) -> tuple:
        return tuple(sorted(len(o) for o in self.orbits))

    @property
    def signature(self) -> tuple:
        return (self.order, self.orbit_sizes)

    @property
    def fixed_indices(self) -> tuple:
        return tuple(
            i for i in range(LINE_COUNT) if all(g[i] == i for g in self.generators)
        )

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={len(self.generators)})"


TRIVIAL_SUBGROUP = Subgroup((), elements=(IDENTITY,))


def generate_closure(gens, table: LineTable | None = None) -> Subgroup:
    """Close a generator list under composition, validating each generator."""
    table = table or build_line_table()
    gens = tuple(gens)
    for g in gens:
        validate_line_permutation(g, table)
    if not gens:
        return Subgroup((), elements=(IDENTITY,))
    return Subgroup(gens, elements=closure_set(gens))


def orbits_of(gens) -> tuple:
    """Orbits of the generated group on line indices, in canonical sorted form."""
    seen = [False] * LINE_COUNT
    out = []
    for start in range(LINE_COUNT):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop()
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    queue.append(y)
        out.append(tuple(sorted(orbit)))
    return tuple(sorted(out))


class _Capped(Exception):
    pass


class _ChainLevel:
    """One level of a stabilizer chain: a base point, the generators placed
    here, the orbit transversal, and the deeper chain."""

    __slots__ = ("point", "own", "trans", "stab", "root", "cap")

    def __init__(self, root=None):
        self.point = None
        self.own = []
        self.trans = {}
        self.stab = None
        self.root = root if root is not None else self
        self.cap = None

    def generators(self):
        # the orbit at this level is under the generators of this level AND
        # every deeper one (deeper generators fix earlier base points but can
        # still move other points of this orbit)
        out = [] if self.stab is None else self.stab.generators()
        out.extend(self.own)
        return out

    def order(self) -> int:
        if self.point is None:
            return 1
        return len(self.trans) * self.stab.order()

    def sift(self, p: Perm) -> Perm:
        if self.point is None or p == IDENTITY:
            return p
        y = p[self.point]
        if y not in self.trans:
            return p
        return self.stab.sift(compose(inverse(self.trans[y]), p))

    def add(self, g: Perm):
        g = self.sift(g)
        if g != IDENTITY:
            self._insert(g)

    def _insert(self, g: Perm):
        if self.point is None:
            self.point = next(i for i in range(LINE_COUNT) if g[i] != i)
            self.stab = _ChainLevel(self.root)
        if g[self.point] == self.point:
            self.stab._insert(g)
        else:
            self.own.append(g)
        self._rebuild_orbit()
        root = self.root
        if root.cap is not None and root.order() > root.cap:
            raise _Capped
        self._close_schreier()

    def _rebuild_orbit(self):
        gens = self.generators()
        trans = {self.point: IDENTITY}
        queue = [self.point]
        while queue:
            x = queue.pop(0)
            u = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = u.translate(g + _PAD)
                    queue.append(y)
        self.trans = trans

    def _close_schreier(self):
        for g in self.generators():
            for x in sorted(self.trans):
                ux = self.trans[x]
                s = compose(inverse(self.trans[g[x]]), compose(g, ux))
                self.stab.add(s)


def group_order(gens, cap: int | None = None, cap_value: int | None = None) -> int:
    """Order of the generated group via a deterministic stabilizer chain
    (Schreier-Sims; Schreier generators are sifted and re-closed per level).

    cap/cap_value implement a Lagrange shortcut for subgroups of a known
    ambient group: any proper subgroup has at most half the ambient order,
    so once the chain order exceeds cap = ambient_order // 2 the group is
    the whole ambient group and cap_value is returned.
    """
    root = _ChainLevel()
    root.cap = cap
    try:
        for g in gens:
            root.add(g)
    except _Capped:
        return cap_value
    return root.order()


@lru_cache(maxsize=1)
def full_group() -> Subgroup:
    """Closure of the standard generators; the whole symmetry group."""
    gens = standard_generators()
    return Subgroup(gens, elements=closure_set(gens))


@lru_cache(maxsize=1)
def cyclic_subgroups() -> tuple:
    """All distinct cyclic subgroups, exhaustively over the full element list.

    Iteration is over the canonically sorted elements, so the first
    generator reaching each element set wins and the output order is
    reproducible.
    """
    out = []
    seen = set()
    for g in full_group().elements:
        powers = [IDENTITY]
        q = g
        table = g + _PAD
        while q != IDENTITY:
            powers.append(q)
            q = q.translate(table)
        key = frozenset(powers)
        if key in seen:
            continue
        seen.add(key)
        gens = () if g == IDENTITY else (g,)
        out.append(Subgroup(gens, elements=powers))
    return tuple(out)


def _small_generating_set(elements_sorted) -> tuple:
    target = len(elements_sorted)
    gens = []
    cur = {IDENTITY}
    for g in elements_sorted:
        if g not in cur:
            gens.append(g)
            cur = closure_set(gens)
            if len(cur) == target:
                break
    return tuple(gens)


@lru_cache(maxsize=1)
def line_stabilizers() -> tuple:
    """The stabilizer of each of the 27 lines inside the full group."""
    buckets = [[] for _ in range(LINE_COUNT)]
    for p in full_group().elements:
        for i in range(LINE_COUNT):
            if p[i] == i:
                buckets[i].append(p)
    out = []
    for i in range(LINE_COUNT):
        elems = buckets[i]  # already sorted: filtered from a sorted list
        out.append(Subgroup(_small_generating_set(elems), elements=elems))
    return tuple(out)


class SplitMix64:
    """Counter-based 64-bit generator (SplitMix64); reproducible across platforms."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        bound = self.MASK + 1 - (self.MASK + 1) % n
        while True:
            v = self.next64()
            if v < bound:
                return v % n


def random_generator_draws(seed: int, count: int, max_gens: int = 3) -> list:
    """The deterministic list of generator tuples used by seeded sampling."""
    rng = SplitMix64(seed)
    elems = full_group().elements
    draws = []
    for _ in range(count):
        k = 1 + rng.randrange(max_gens)
        draws.append(tuple(elems[rng.randrange(len(elems))] for _ in range(k)))
    return draws


@lru_cache(maxsize=1)
def _base_family() -> tuple:
    """Cyclic subgroups plus line stabilizers, fingerprint-deduplicated."""
    from .norms import subgroup_fingerprint  # deferred: norms builds on this module

    out = []
    seen = set()
    for sub in cyclic_subgroups() + line_stabilizers():
        fp = subgroup_fingerprint(sub)
        if fp not in seen:
            seen.add(fp)
            out.append((fp, sub))
    return tuple(out)


def sample_subgroups(seed: int, count: int, max_gens: int = 3) -> tuple:
    """Deterministic subgroup family for the sweeps.

    Always starts from all cyclic subgroups plus the 27 line stabilizers,
    then appends seeded random subgroups; everything is deduplicated by
    the (order, orbit sizes, fixed lattice, norm span) fingerprint, with
    the first occurrence kept.
    """
    from .norms import subgroup_fingerprint

    out = [sub for _, sub in _base_family()]
    seen = {fp for fp, _ in _base_family()}
    full_order = full_group().order
    for gens in random_generator_draws(seed, count, max_gens):
        order = group_order(gens, cap=full_order // 2, cap_value=full_order)
        sub = Subgroup(gens, order=order)
        if order == full_order:
            sub._elements = full_group().elements
        fp = subgroup_fingerprint(sub)
        if fp not in seen:
            seen.add(fp)
            out.append(sub)
    return tuple(out)


# ---------------------------------------------------------------------------
# Generator specifications: cycle notation over line names, or basis images.

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_SYMBOLS = ("H", "E1", "E2", "E3", "E4", "E5", "E6")


class SpecError(ValueError):
    """Generator specification syntax or validity error, with position info."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


def parse_generator(text: str, table: LineTable | None = None) -> Perm:
    """Parse one generator, either cycles over line names or basis assignments.

    Cycle form: "(E1 E2)(L13 L23)..." over the 27 line names; unnamed
    lines are fixed, and the result must be induced by a lattice isometry.
    Assignment form: "E1->E2; E2->E1" with targets integer combinations
    of H, E1..E6; unassigned basis symbols map to themselves.
    """
    table = table or build_line_table()
    stripped = text.lstrip()
    if not stripped:
        raise SpecError("empty generator specification", 0)
    if stripped.startswith("("):
        return _parse_cycles(text, table)
    return _parse_assignments(text, table)


def _parse_cycles(text: str, table: LineTable) -> Perm:
    index_of = table.index_of
    mapping = {}
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch != "(":
            raise SpecError(f"expected '(' but found {ch!r}", pos)
        close = text.find(")", pos)
        if close < 0:
            raise SpecError("unclosed cycle", pos)
        body = text[pos + 1 : close]
        names = []
        for m in _NAME_RE.finditer(body):
            names.append((m.group(), pos + 1 + m.start()))
        leftover = _NAME_RE.sub("", body).replace(",", "").strip()
        if leftover:
            raise SpecError(f"unexpected text {leftover!r} in cycle", pos + 1)
        cycle = []
        for name, at in names:
            idx = index_of.get(name)
            if idx is None:
                raise SpecError(f"unknown line name {name!r}", at)
            if idx in mapping or idx in cycle:
                raise SpecError(f"line {name!r} appears twice", at)
            cycle.append(idx)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            mapping[a] = b
        pos = close + 1
    image = bytearray(range(LINE_COUNT))
    for a, b in mapping.items():
        image[a] = b
    p = bytes(image)
    try:
        return validate_line_permutation(p, table)
    except ValueError as exc:
        raise SpecError(str(exc), 0) from exc


def _parse_assignments(text: str, table: LineTable) -> Perm:
    rows = {s: i for i, s in enumerate(_SYMBOLS)}
    images = identity_matrix(RANK)
    assigned = set()
    for part_start, part in _split_parts(text):
        arrow = part.find("->")
        if arrow < 0:
            raise SpecError("assignment is missing '->'", part_start)
        sym = part[:arrow].strip()
        if sym not in rows:
            raise SpecError(f"unknown basis symbol {sym!r}", part_start)
        if sym in assigned:
            raise SpecError(f"basis symbol {sym!r} assigned twice", part_start)
        assigned.add(sym)
        vec = _parse_combination(part[arrow + 2 :], part_start + arrow + 2)
        images[rows[sym]] = vec
    try:
        return induced_line_permutation(images, table)
    except ValueError as exc:
        raise SpecError(str(exc), 0) from exc


def _split_parts(text: str):
    start = 0
    for i in range(len(text) + 1):
        if i == len(text) or text[i] == ";":
            part = text[start:i]
            if part.strip():
                yield (start, part)
            start = i + 1


def _parse_combination(text: str, offset: int):
    vec = [0] * RANK
    pos = 0
    n = len(text)
    sign = 1
    expect_term = True
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "+-":
            if expect_term:
                if ch == "-":
                    sign = -sign
            else:
                sign = -1 if ch == "-" else 1
                expect_term = True
            pos += 1
            continue
        m = re.match(r"(\d*)\s*\*?\s*(H|E[1-6])", text[pos:])
        if not m or not expect_term:
            raise SpecError(f"cannot parse term starting at {text[pos:pos+8]!r}", offset + pos)
        coeff = int(m.group(1)) if m.group(1) else 1
        idx = 0 if m.group(2) == "H" else int(m.group(2)[1])
        vec[idx] += sign * coeff
        sign = 1
        expect_term = False
        pos += m.end()
    if expect_term:
        raise SpecError("dangling sign or empty combination", offset + pos)
    return vec


def format_cycles(p: Perm, table: LineTable | None = None) -> str:
    """Canonical cycle-notation string over line names; identity is '()'."""
    table = table or build_line_table()
    names = table.names
    seen = set()
    cycles = []
    for i in range(LINE_COUNT):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cycle = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cycle.append(j)
            seen.add(j)
            j = p[j]
        cycles.append(cycle)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(names[i] for i in c) + ")" for c in cycles)
