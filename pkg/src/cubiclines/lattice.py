"""Exact integer linear algebra over the rank-7 divisor-class lattice.

A divisor class is an integer 7-tuple (a; b1..b6) in the fixed basis
H, E1..E6, meaning a*H + b1*E1 + ... + b6*E6.  The intersection form is
diagonal on this basis: H.H = 1, Ei.Ei = -1, mixed terms 0, so its
signature is (1, 6).

All arithmetic is done with Python integers, which are exact at any
size, and sublattices are stored in a canonical row-echelon (Hermite)
form with positive pivots reduced above, so that two spans are equal
exactly when their stored rows are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

RANK = 7

# Divisor classes are plain tuples of 7 ints: immutable, hashable, cheap.
DivisorClass = tuple

H: DivisorClass = (1, 0, 0, 0, 0, 0, 0)
EXCEPTIONAL: tuple[DivisorClass, ...] = tuple(
    tuple(1 if k == i else 0 for k in range(RANK)) for i in range(1, RANK)
)
OMEGA: DivisorClass = (-3, 1, 1, 1, 1, 1, 1)


class ContainmentError(ValueError):
    """A claimed member vector is not in the ambient span."""


def divisor(*coeffs: int) -> DivisorClass:
    if len(coeffs) != RANK:
        raise ValueError(f"expected {RANK} coefficients, got {len(coeffs)}")
    return tuple(int(c) for c in coeffs)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(n, a):
    return tuple(n * x for x in a)


def vsum(vectors, ncols=RANK):
    total = [0] * ncols
    for v in vectors:
        for i, x in enumerate(v):
            total[i] += x
    return tuple(total)


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def apply_matrix(v, m):
    """Image of the row vector v under the map sending basis vector i to row i of m."""
    out = [0] * len(m[0])
    for coeff, row in zip(v, m):
        if coeff:
            for i, x in enumerate(row):
                out[i] += coeff * x
    return tuple(out)


def intersection_pairing(a: DivisorClass, b: DivisorClass) -> int:
    """Evaluate the diagonal form a0*b0 - a1*b1 - ... - a6*b6."""
    s = a[0] * b[0]
    for i in range(1, RANK):
        s -= a[i] * b[i]
    return s


def gram_matrix(vectors):
    return [[intersection_pairing(a, b) for b in vectors] for a in vectors]


def is_divisible_by(c: DivisorClass, n: int) -> bool:
    """True iff every coefficient of c is divisible by n; requires n >= 2."""
    if n < 2:
        raise ValueError("divisor must be >= 2")
    return all(x % n == 0 for x in c)


@dataclass(frozen=True)
class InvariantFactors:
    """Structure of a finitely generated abelian group: torsion chain d1 | d2 | ...
    (entries >= 2) plus the free rank."""

    torsion: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be >= 0")
        prev = None
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion entries must be >= 2")
            if prev is not None and d % prev:
                raise ValueError("torsion entries must form a divisor chain")
            prev = d

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def group_order(self):
        """Order of the group, or None when it is infinite."""
        return prod(self.torsion) if self.free_rank == 0 else None

    def to_dict(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank}


def smith_invariants(rows) -> InvariantFactors:
    """Invariant factors and free rank of the cokernel of an integer matrix.

    For an m-by-n matrix M the cokernel is Z^m / (column span of M); the
    torsion entries are the Smith diagonal values >= 2 and the free rank
    is m - rank(M).  The result is unchanged under multiplication of M by
    unimodular matrices on either side.
    """
    a = [list(map(int, r)) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if any(len(r) != ncols for r in a):
        raise ValueError("ragged matrix")
    diag = []
    t = 0
    while t < nrows and t < ncols:
        piv = None
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                x = row[j]
                if x and (piv is None or abs(x) < piv[0]):
                    piv = (abs(x), i, j)
        if piv is None:
            break
        _, pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        while True:
            for i in range(t + 1, nrows):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        a[i] = [u - q * v for u, v in zip(a[i], a[t])]
                    if a[i][t]:
                        # remainder is smaller than the pivot: promote it
                        a[t], a[i] = a[i], a[t]
            for j in range(t + 1, ncols):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
            if all(a[i][t] == 0 for i in range(t + 1, nrows)):
                break
        # the pivot must divide the trailing block for the divisor chain
        p = abs(a[t][t])
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if a[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [u + v for u, v in zip(a[t], a[offender])]
            continue
        diag.append(p)
        t += 1
    torsion = tuple(d for d in diag if d >= 2)
    return InvariantFactors(torsion=torsion, free_rank=nrows - len(diag))


def _hermite(mat, want_transform):
    """Row Hermite form; optionally carries the unimodular left transform."""
    a = [list(map(int, r)) for r in mat]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = identity_matrix(nrows) if want_transform else None
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][c]), i))
            if i0 != r:
                a[r], a[i0] = a[i0], a[r]
                if u:
                    u[r], u[i0] = u[i0], u[r]
            if len(nz) == 1:
                break
            p = a[r][c]
            for i in range(r + 1, nrows):
                x = a[i][c]
                if x:
                    q = x // p
                    if q:
                        a[i] = [y - q * z for y, z in zip(a[i], a[r])]
                        if u:
                            u[i] = [y - q * z for y, z in zip(u[i], u[r])]
        if r < nrows and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                if u:
                    u[r] = [-x for x in u[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [y - q * z for y, z in zip(a[i], a[r])]
                    if u:
                        u[i] = [y - q * z for y, z in zip(u[i], u[r])]
            r += 1
    return a, u, r


def hermite_rows(mat) -> tuple:
    """Canonical Hermite rows of the span of the given vectors (zero rows dropped)."""
    a, _, r = _hermite(mat, False)
    return tuple(tuple(row) for row in a[:r])


def left_kernel(mat) -> tuple:
    """Canonical basis of {v : v . mat = 0}, a saturated sublattice of Z^nrows."""
    a, u, r = _hermite(mat, True)
    return hermite_rows(u[r:])


@dataclass(frozen=True)
class Sublattice:
    """An integer span inside Z^ncols, stored in canonical Hermite form.

    Equality of Sublattice values is equality of spans.  Construct via
    span(); the raw constructor trusts its rows.
    """

    rows: tuple
    ncols: int = RANK

    @staticmethod
    def span(vectors, ncols: int = RANK) -> "Sublattice":
        vecs = [tuple(map(int, v)) for v in vectors]
        for v in vecs:
            if len(v) != ncols:
                raise ValueError(f"expected vectors of length {ncols}")
        return Sublattice(hermite_rows(vecs), ncols)

    @staticmethod
    def full(ncols: int = RANK) -> "Sublattice":
        return Sublattice(tuple(tuple(r) for r in identity_matrix(ncols)), ncols)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _pivots(self):
        return [next(i for i, x in enumerate(row) if x) for row in self.rows]

    def coords(self, v):
        """Integer coordinates of v in the stored basis, or None if v is outside."""
        v = list(v)
        out = []
        for row in self.rows:
            c = next(i for i, x in enumerate(row) if x)
            q, rem = divmod(v[c], row[c])
            if rem:
                return None
            out.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return None if any(v) else tuple(out)

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def contains_sublattice(self, other: "Sublattice") -> bool:
        return all(self.contains(v) for v in other.rows)

    def with_vectors(self, *vectors) -> "Sublattice":
        return Sublattice.span(list(self.rows) + [tuple(v) for v in vectors], self.ncols)

    def to_json(self):
        return [list(row) for row in self.rows]


def quotient_invariants(ambient: Sublattice, sub: Sublattice) -> InvariantFactors:
    """Structure of ambient/sub as a finitely generated abelian group.

    Every basis vector of sub must lie in the integer span of ambient;
    a violation raises ContainmentError.  sub need not be saturated.
    """
    rel = []
    for v in sub.rows:
        x = ambient.coords(v)
        if x is None:
            raise ContainmentError(f"vector {v} is not in the ambient span")
        rel.append(list(x))
    r = ambient.rank
    if not rel:
        return InvariantFactors((), r)
    return smith_invariants(transpose(rel))


def solve_intersection_one(lat: Sublattice, f: DivisorClass) -> bool:
    """True iff some class in lat pairs to exactly 1 with f.

    The pairing values on lat form the ideal generated by the pairings of
    the basis rows, so this reduces to a gcd test.
    """
    g = 0
    for b in lat.rows:
        g = gcd(g, intersection_pairing(b, f))
    return g == 1
