"""Exact integer lattice algebra for second cohomology of rational surfaces.

The objects here model H^2 of a 4-manifold as a unimodular lattice with its
intersection pairing and a distinguished canonical class.  The default basis
is the plane-with-k-blow-ups one: ``(L, E1, ..., Ek)`` with pairing
``diag(+1, -1, ..., -1)`` and canonical class ``-3L + sum(E_i)``.  General
unimodular lattices (notably the even rank-2 lattice of a sphere product) are
supported too, because blowing down a class like ``L-E1-E2`` lands outside the
default family.

Everything is exact: classes have ``Fraction`` coefficients, grams are
integer, and all searches are bounded coefficient-box enumerations with
deterministic tie-breaking, so identical inputs give identical bases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    DimensionError,
    InternalInvariantError,
    InvalidBlowDownError,
    SearchExhaustedError,
    UnsupportedMoveError,
)
from .formatting import fmt_combination, fmt_vector

#: Coefficient box used by every bounded enumeration.  |a| <= 3 is provably
#: complete for (-1)- and fiber-class searches on the default bases with at
#: most three blow-ups, which is the certified regime.
DEFAULT_SEARCH_BOX = 3

#: Largest blow-up count for which the exceptional-class enumeration is
#: certified complete (degree >= 6 del Pezzo range).
CERTIFIED_BLOWUP_LIMIT = 3


# ---------------------------------------------------------------------------
# exact linear algebra on tiny matrices (tuples of tuples, Fraction entries)
# ---------------------------------------------------------------------------


def _mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def _mat_mul(a, b) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _transpose(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def _identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _det(m) -> Fraction:
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


@lru_cache(maxsize=None)
def _inverse(m) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] for i in range(n)]
    inv = _identity(n)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise InternalInvariantError("singular matrix passed to _inverse")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        f = 1 / a[col][col]
        a[col] = [x * f for x in a[col]]
        inv[col] = [x * f for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return tuple(tuple(row) for row in inv)


def _kernel_of_functional(v: Sequence[int]) -> list[tuple[int, ...]]:
    """Basis of the integer kernel of a primitive linear functional.

    Returns r-1 integer vectors spanning ``{x : v.x = 0}`` as a direct
    summand, via a deterministic column-gcd sweep.
    """
    r = len(v)
    cols = [[int(i == j) for i in range(r)] for j in range(r)]
    w = [int(x) for x in v]
    for j in range(1, r):
        p, q = w[0], w[j]
        if q == 0:
            continue
        g, a, b = _xgcd(p, q)
        col0 = [a * cols[0][i] + b * cols[j][i] for i in range(r)]
        colj = [(-q // g) * cols[0][i] + (p // g) * cols[j][i] for i in range(r)]
        cols[0], cols[j] = col0, colj
        w[0], w[j] = g, 0
    if abs(w[0]) != 1:
        raise InternalInvariantError(f"functional {v} is not primitive")
    return [tuple(cols[j]) for j in range(1, r)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """gcd and Bezout coefficients, deterministic for all sign combinations."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    assert old_r == gcd(a, b)
    return old_r, old_s, old_t


@lru_cache(maxsize=None)
def gram_signature(gram: Sequence[Sequence[int]]) -> tuple[int, int]:
    """``(n_plus, n_minus)`` of a nondegenerate symmetric matrix, exactly.

    Computed by congruence diagonalisation over the rationals; no floating
    point is involved.  The argument must be a tuple of tuples (hashable).
    """
    n = len(gram)
    a = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    pos = neg = 0
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                for row in a:
                    row[i], row[j] = row[j], row[i]
                a[i], a[j] = a[j], a[i]
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    raise InternalInvariantError("degenerate gram in signature computation")
                for k in range(n):
                    a[i][k] += a[j][k]
                for k in range(n):
                    a[k][i] += a[k][j]
        p = a[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            f = a[r][i] / p
            if f:
                for c in range(n):
                    a[r][c] -= f * a[i][c]
                for c in range(n):
                    a[c][r] -= f * a[c][i]
    return pos, neg


# ---------------------------------------------------------------------------
# classes and lattices
# ---------------------------------------------------------------------------


def _as_fraction_tuple(coeffs: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in coeffs)


@dataclass(frozen=True)
class LatticeClass:
    """A cohomology class as a coefficient vector in some lattice basis."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", _as_fraction_tuple(coeffs))

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def integer_coeffs(self) -> tuple[int, ...]:
        if not self.is_integral:
            raise ValueError(f"class {self} is not integral")
        return tuple(c.numerator for c in self.coeffs)

    def __add__(self, other: "LatticeClass") -> "LatticeClass":
        self._check_rank(other)
        return LatticeClass(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "LatticeClass") -> "LatticeClass":
        self._check_rank(other)
        return LatticeClass(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "LatticeClass":
        return LatticeClass(-a for a in self.coeffs)

    def __rmul__(self, scalar) -> "LatticeClass":
        s = Fraction(scalar)
        return LatticeClass(s * a for a in self.coeffs)

    def _check_rank(self, other: "LatticeClass") -> None:
        if self.rank != other.rank:
            raise DimensionError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __repr__(self) -> str:
        return f"LatticeClass{fmt_vector(self.coeffs)}"


def cls(*coeffs) -> LatticeClass:
    """Shorthand constructor: ``cls(1, -1, -1)``."""
    return LatticeClass(coeffs)


@dataclass(frozen=True)
class IntersectionLattice:
    """A unimodular symmetric pairing with named basis and canonical class.

    ``labels`` name the basis for trace output; ``canonical`` is carried as
    data because the gram alone does not determine it off the default basis.
    """

    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    canonical: LatticeClass

    def __post_init__(self):
        r = len(self.gram)
        if any(len(row) != r for row in self.gram):
            raise DimensionError("gram matrix must be square")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(r) for j in range(r)):
            raise ValueError("gram matrix must be symmetric")
        if abs(_det(self.gram)) != 1:
            raise ValueError("gram matrix must be unimodular")
        if len(self.labels) != r or len(set(self.labels)) != r:
            raise ValueError("labels must be distinct and match the rank")
        if self.canonical.rank != r or not self.canonical.is_integral:
            raise ValueError("canonical class must be integral of matching rank")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def blowup_count(self) -> int:
        """Second Betti number minus one; equals k on a default basis."""
        return self.rank - 1

    def pair(self, x: LatticeClass, y: LatticeClass) -> Fraction:
        if x.rank != self.rank or y.rank != self.rank:
            raise DimensionError(
                f"class rank ({x.rank}, {y.rank}) does not match lattice rank {self.rank}"
            )
        total = Fraction(0)
        for i, xi in enumerate(x.coeffs):
            if xi:
                row = self.gram[i]
                total += xi * sum(row[j] * y.coeffs[j] for j in range(self.rank) if y.coeffs[j])
        return total

    def basis(self, i: int) -> LatticeClass:
        return LatticeClass(int(j == i) for j in range(self.rank))

    def cls(self, *coeffs) -> LatticeClass:
        if len(coeffs) != self.rank:
            raise DimensionError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        return LatticeClass(coeffs)

    def name_of(self, x: LatticeClass) -> str:
        return fmt_combination(x.coeffs, self.labels)

    @property
    def is_default(self) -> bool:
        """True on the plane-blow-up presentation ``(L, E1, ..., Ek)``."""
        r = self.rank
        if self.labels != ("L",) + tuple(f"E{i}" for i in range(1, r)):
            return False
        if self.gram != _default_gram(r - 1):
            return False
        return self.canonical == canonical_class(r - 1)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def signature(self) -> tuple[int, int]:
        return gram_signature(self.gram)

    @property
    def is_hyperbolic_plane(self) -> bool:
        """True on the standard even rank-2 lattice of a sphere product."""
        return (
            self.gram == ((0, 1), (1, 0))
            and self.canonical == LatticeClass((-2, -2))
        )

    def __repr__(self) -> str:
        return f"IntersectionLattice(labels={'/'.join(self.labels)})"


def _default_gram(k: int) -> tuple[tuple[int, ...], ...]:
    r = k + 1
    return tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(r)) for i in range(r)
    )


def default_lattice(k: int) -> IntersectionLattice:
    """The rank k+1 lattice of the plane blown up k times, default basis."""
    if k < 0:
        raise ValueError("blow-up count must be nonnegative")
    labels = ("L",) + tuple(f"E{i}" for i in range(1, k + 1))
    return IntersectionLattice(_default_gram(k), labels, canonical_class(k))


def hyperbolic_lattice() -> IntersectionLattice:
    """The even rank-2 lattice of a product of two spheres, ruling basis."""
    return IntersectionLattice(((0, 1), (1, 0)), ("A", "B"), LatticeClass((-2, -2)))


def canonical_class(k: int) -> LatticeClass:
    """``-3L + E1 + ... + Ek`` in the default basis."""
    if k < 0:
        raise ValueError("blow-up count must be nonnegative")
    return LatticeClass((-3,) + (1,) * k)


def general_lattice(
    gram: Sequence[Sequence[int]],
    canonical: Sequence[int] | None = None,
    labels: Sequence[str] | None = None,
) -> IntersectionLattice:
    """Wrap a declared gram matrix, guessing the canonical class if standard."""
    g = tuple(tuple(int(x) for x in row) for row in gram)
    r = len(g)
    if canonical is None:
        if g == ((0, 1), (1, 0)):
            canonical = (-2, -2)
        elif g == _default_gram(r - 1):
            canonical = canonical_class(r - 1).coeffs
        else:
            raise ValueError("canonical class required for a nonstandard gram matrix")
    if labels is None:
        labels = tuple(f"G{i}" for i in range(1, r + 1))
    return IntersectionLattice(g, tuple(labels), LatticeClass(canonical))


# ---------------------------------------------------------------------------
# enumerations
# ---------------------------------------------------------------------------
#
# Bounded searches run over integer coefficient tuples with plain integer
# dot products: the boxes are tiny but the searches sit inside fingerprint
# computations, so they are cached on the (gram, canonical) data.


def _int_dot(gram, x, y) -> int:
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = gram[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
    return total


def _int_key(lattice: IntersectionLattice) -> tuple:
    return lattice.gram, lattice.canonical.integer_coeffs()


@lru_cache(maxsize=None)
def _marked_box_search(gram, canonical, self_pair: int, k_pair: int, box: int):
    rank = len(gram)
    out = [
        tup
        for tup in itertools.product(range(-box, box + 1), repeat=rank)
        if _int_dot(gram, tup, tup) == self_pair
        and _int_dot(gram, tup, canonical) == k_pair
    ]
    return tuple(sorted(out))


def exceptional_classes(
    lattice: IntersectionLattice, box: int = DEFAULT_SEARCH_BOX
) -> tuple[LatticeClass, ...]:
    """All classes C with C.C = -1 and C.K = -1, sorted by coefficients.

    On default bases with at most ``CERTIFIED_BLOWUP_LIMIT`` blow-ups the
    closed-form list (basis classes and pairwise line differences) is
    returned; the bounded box search is the fallback elsewhere, and the two
    agree on the certified range (checked against each other in the tests).
    """
    if lattice.is_default and lattice.blowup_count <= CERTIFIED_BLOWUP_LIMIT:
        k = lattice.blowup_count
        out = [lattice.basis(i) for i in range(1, k + 1)]
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                out.append(lattice.basis(0) - lattice.basis(i) - lattice.basis(j))
        return tuple(sorted(out, key=lambda c: c.coeffs))
    gram, canonical = _int_key(lattice)
    return tuple(LatticeClass(t) for t in _marked_box_search(gram, canonical, -1, -1, box))


def enumeration_certified(lattice: IntersectionLattice) -> bool:
    """Whether the exceptional-class list is certified complete."""
    return lattice.is_default and lattice.blowup_count <= CERTIFIED_BLOWUP_LIMIT


def ruling_classes(
    lattice: IntersectionLattice, box: int = DEFAULT_SEARCH_BOX
) -> tuple[LatticeClass, ...]:
    """All classes C with C.C = 0 and C.K = -2 (sphere fibrations), sorted."""
    gram, canonical = _int_key(lattice)
    return tuple(LatticeClass(t) for t in _marked_box_search(gram, canonical, 0, -2, box))


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeIsometry:
    """An integer matrix acting on coefficient vectors, preserving the pairing."""

    matrix: tuple[tuple[int, ...], ...]
    preserves_canonical: bool

    @classmethod
    def for_lattice(
        cls_, lattice: IntersectionLattice, matrix: Sequence[Sequence[int]]
    ) -> "LatticeIsometry":
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        mt_g_m = _mat_mul(_transpose(m), _mat_mul(lattice.gram, m))
        if mt_g_m != tuple(tuple(Fraction(x) for x in row) for row in lattice.gram):
            raise ValueError("matrix does not preserve the intersection pairing")
        k = lattice.canonical
        preserves = LatticeClass(_mat_vec(m, k.coeffs)) == k
        return cls_(m, preserves)

    def apply(self, x: LatticeClass) -> LatticeClass:
        if x.rank != len(self.matrix):
            raise DimensionError("class rank does not match isometry rank")
        return LatticeClass(_mat_vec(self.matrix, x.coeffs))

    def compose(self, other: "LatticeIsometry") -> "LatticeIsometry":
        return LatticeIsometry(
            tuple(
                tuple(int(x) for x in row)
                for row in _mat_mul(self.matrix, other.matrix)
            ),
            self.preserves_canonical and other.preserves_canonical,
        )

    @property
    def is_identity(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == (i == j) for i in range(n) for j in range(n))


def cremona_standard(lattice: IntersectionLattice, i: int, j: int, m: int) -> LatticeIsometry:
    """The standard quadratic involution based at blow-up indices i < j < m.

    Sends ``L`` to ``2L - Ei - Ej - Em`` and each of the three chosen
    exceptional generators to the line through the other two; fixes the rest.
    """
    if not lattice.is_default:
        raise UnsupportedMoveError("Cremona moves are defined on the default basis")
    k = lattice.blowup_count
    if k < 3:
        raise UnsupportedMoveError("Cremona moves need at least three blow-ups")
    idx = (i, j, m)
    if len(set(idx)) != 3 or any(not 1 <= a <= k for a in idx):
        raise UnsupportedMoveError(f"indices {idx} are not distinct blow-up indices")
    r = lattice.rank
    images = {0: [2, *(0,) * k]}
    images[0] = [2 if c == 0 else 0 for c in range(r)]
    for a in idx:
        images[0][a] = -1
    for a in idx:
        img = [1 if c == 0 else 0 for c in range(r)]
        for b in idx:
            if b != a:
                img[b] = -1
        images[a] = img
    columns = []
    for c in range(r):
        columns.append(images.get(c, [int(row == c) for row in range(r)]))
    matrix = tuple(tuple(columns[c][row] for c in range(r)) for row in range(r))
    return LatticeIsometry.for_lattice(lattice, matrix)


# ---------------------------------------------------------------------------
# blow-up
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowUpMap:
    """Rank r -> r+1 stabilisation; the new generator is the exceptional class."""

    upstairs: IntersectionLattice
    downstairs: IntersectionLattice
    new_class: LatticeClass

    def include(self, x: LatticeClass) -> LatticeClass:
        if x.rank != self.downstairs.rank:
            raise DimensionError("class rank does not match the blown-up lattice")
        return LatticeClass(x.coeffs + (Fraction(0),))


def blow_up_lattice(lattice: IntersectionLattice) -> BlowUpMap:
    """Extend the gram by a -1 generator; works on any basis.

    The canonical class gains the new generator: ``K' = inc(K) + E_new``.
    """
    r = lattice.rank
    gram = tuple(
        tuple(lattice.gram[i][j] if i < r and j < r else (-1 if i == j else 0) for j in range(r + 1))
        for i in range(r + 1)
    )
    existing = sum(1 for lab in lattice.labels if lab.startswith("E") and lab[1:].isdigit())
    label = f"E{existing + 1}"
    canonical = LatticeClass(lattice.canonical.coeffs + (Fraction(1),))
    upstairs = IntersectionLattice(gram, lattice.labels + (label,), canonical)
    return BlowUpMap(upstairs, lattice, upstairs.basis(r))


# ---------------------------------------------------------------------------
# presentation searches
# ---------------------------------------------------------------------------


def _sum_tuples(ts, scale_first: int, first) -> tuple[int, ...]:
    acc = [scale_first * v for v in first]
    for t in ts:
        for i, v in enumerate(t):
            acc[i] += v
    return tuple(acc)


@lru_cache(maxsize=None)
def _default_presentation_search(gram, canonical, box: int, orthogonal_to=None):
    """Find ``(X0, F1, ..., F_m)`` spanning a default sublattice, exactly.

    X0 is the lexicographically least square-one tuple with ``X0.K = -3``
    (orthogonal to the optional contracted class); the exceptional members
    are chosen greedily in descending coefficient order among the mutually
    orthogonal candidates, subject to ``-3 X0 + sum(F) = K_target``.
    """
    r = len(gram)
    extra = () if orthogonal_to is None else (orthogonal_to,)
    size = r - 1 - len(extra)
    k_target = (
        canonical
        if orthogonal_to is None
        else tuple(k - c for k, c in zip(canonical, orthogonal_to))
    )

    def ok(tup, self_pair, k_pair) -> bool:
        return (
            _int_dot(gram, tup, tup) == self_pair
            and _int_dot(gram, tup, k_target) == k_pair
            and all(_int_dot(gram, tup, e) == 0 for e in extra)
        )

    box_tuples = list(itertools.product(range(-box, box + 1), repeat=r))
    for x0 in sorted(t for t in box_tuples if ok(t, 1, -3)):
        fs = sorted(
            (
                t
                for t in box_tuples
                if ok(t, -1, -1) and _int_dot(gram, t, x0) == 0
            ),
            reverse=True,
        )
        picked: list[tuple[int, ...]] = []

        def backtrack(start: int) -> bool:
            if len(picked) == size:
                return _sum_tuples(picked, -3, x0) == k_target
            for idx in range(start, len(fs)):
                f = fs[idx]
                if all(_int_dot(gram, f, p) == 0 for p in picked):
                    picked.append(f)
                    if backtrack(idx + 1):
                        return True
                    picked.pop()
            return False

        if backtrack(0):
            return (x0, *picked)
    return None


@lru_cache(maxsize=None)
def _ruling_presentation_search(gram, canonical, box: int, orthogonal_to=None):
    """Find ruling tuples (A, B): A.A = B.B = 0, A.B = 1, -2A - 2B = K_target."""
    r = len(gram)
    extra = () if orthogonal_to is None else (orthogonal_to,)
    if r - len(extra) != 2:
        return None
    k_target = (
        canonical
        if orthogonal_to is None
        else tuple(k - c for k, c in zip(canonical, orthogonal_to))
    )
    rulings = sorted(
        t
        for t in itertools.product(range(-box, box + 1), repeat=r)
        if _int_dot(gram, t, t) == 0
        and _int_dot(gram, t, k_target) == -2
        and all(_int_dot(gram, t, e) == 0 for e in extra)
    )
    for a in rulings:
        for b in rulings:
            if _int_dot(gram, a, b) == 1 and all(
                -2 * (av + bv) == kv for av, bv, kv in zip(a, b, k_target)
            ):
                return (a, b)
    return None


def _search_default_presentation(
    lattice: IntersectionLattice, box: int
) -> list[LatticeClass] | None:
    gram, canonical = _int_key(lattice)
    found = _default_presentation_search(gram, canonical, box)
    return None if found is None else [LatticeClass(t) for t in found]


def _search_hyperbolic_presentation(
    lattice: IntersectionLattice, box: int
) -> list[LatticeClass] | None:
    gram, canonical = _int_key(lattice)
    found = _ruling_presentation_search(gram, canonical, box)
    return None if found is None else [LatticeClass(t) for t in found]


@dataclass(frozen=True)
class BasisChange:
    """A change of basis between two presentations of one lattice."""

    source: IntersectionLattice
    target: IntersectionLattice
    #: columns: target basis vectors written in source coordinates
    matrix: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    inverse: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    def to_target(self, x: LatticeClass) -> LatticeClass:
        return LatticeClass(_mat_vec(self.inverse, x.coeffs))

    def to_source(self, x: LatticeClass) -> LatticeClass:
        return LatticeClass(_mat_vec(self.matrix, x.coeffs))


def _basis_change(
    lattice: IntersectionLattice,
    basis: Sequence[LatticeClass],
    labels: Sequence[str],
) -> BasisChange:
    r = lattice.rank
    matrix = tuple(tuple(basis[j].coeffs[i] for j in range(r)) for i in range(r))
    if abs(_det(matrix)) != 1:
        raise InternalInvariantError("proposed basis is not unimodular")
    inverse = _inverse(matrix)
    gram = tuple(
        tuple(int(lattice.pair(basis[i], basis[j])) for j in range(r)) for i in range(r)
    )
    canonical = LatticeClass(_mat_vec(inverse, lattice.canonical.coeffs))
    target = IntersectionLattice(gram, tuple(labels), canonical)
    return BasisChange(lattice, target, matrix, inverse)


def canonical_presentation(
    lattice: IntersectionLattice, box: int = DEFAULT_SEARCH_BOX
) -> BasisChange | None:
    """Re-coordinate a lattice onto the default or ruling presentation.

    Returns ``None`` when the lattice is already in a canonical presentation
    or no bounded search finds one; the walk engine then keeps the current
    coordinates (such intervals simply fall outside the certified tables).
    """
    if lattice.is_default or lattice.is_hyperbolic_plane:
        return None
    basis = _search_default_presentation(lattice, box)
    if basis is not None:
        labels = ("L",) + tuple(f"E{i}" for i in range(1, lattice.rank))
        return _basis_change(lattice, basis, labels)
    basis = _search_hyperbolic_presentation(lattice, box)
    if basis is not None:
        return _basis_change(lattice, basis, ("A", "B"))
    return None


# ---------------------------------------------------------------------------
# blow-down
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowDownMap:
    """Contraction of an exceptional class C, with exact transfer operators.

    ``pullback_basis`` writes the downstairs basis in upstairs coordinates;
    the pushforward is ``x -> x + (x.C) C`` re-expressed downstairs, which is
    well defined because that combination is orthogonal to C.
    """

    upstairs: IntersectionLattice
    blown_down: LatticeClass
    downstairs: IntersectionLattice
    pullback_basis: tuple[LatticeClass, ...]

    def pullback(self, x: LatticeClass) -> LatticeClass:
        if x.rank != self.downstairs.rank:
            raise DimensionError("class rank does not match the downstairs lattice")
        acc = LatticeClass((0,) * self.upstairs.rank)
        for coeff, basis_cls in zip(x.coeffs, self.pullback_basis):
            acc = acc + coeff * basis_cls
        return acc

    def pushforward(self, x: LatticeClass) -> LatticeClass:
        if x.rank != self.upstairs.rank:
            raise DimensionError("class rank does not match the upstairs lattice")
        c = self.blown_down
        flattened = x + self.upstairs.pair(x, c) * c
        gram_inv = _inverse(self.downstairs.gram)
        projections = [
            self.upstairs.pair(flattened, b) for b in self.pullback_basis
        ]
        coords = _mat_vec(gram_inv, projections)
        result = LatticeClass(coords)
        if self.pullback(result) != flattened:
            raise InternalInvariantError(
                "pushforward image does not lie in the contracted sublattice"
            )
        return result


def blow_down_data(
    lattice: IntersectionLattice,
    c: LatticeClass,
    box: int = DEFAULT_SEARCH_BOX,
) -> BlowDownMap:
    """Contract the exceptional class ``c`` and present the quotient lattice.

    The orthogonal complement of ``c`` is computed exactly; a default-basis
    presentation is searched for first (line class by bounded search, then the
    exceptional members in descending coefficient order).  When the complement
    is even, rank two, the ruling presentation is used instead: contracting a
    line-through-two-points class lands on a sphere product, which has no odd
    basis at all.  Only a complement that admits neither presentation keeps
    raw complement coordinates.
    """
    if not c.is_integral:
        raise InvalidBlowDownError(f"blow-down class {c} must be integral")
    if lattice.pair(c, c) != -1 or lattice.pair(c, lattice.canonical) != -1:
        raise InvalidBlowDownError(
            f"class {c} is not exceptional (self-pairing {lattice.pair(c, c)}, "
            f"canonical pairing {lattice.pair(c, lattice.canonical)})"
        )
    r = lattice.rank
    k_target = lattice.canonical - c  # pullback of the downstairs canonical class

    pullback_basis = _contracted_default_basis(lattice, c, box)
    if pullback_basis is not None:
        downstairs = default_lattice(r - 2)
        return BlowDownMap(lattice, c, downstairs, pullback_basis)
    pullback_basis = _contracted_ruling_basis(lattice, c, box)
    if pullback_basis is not None:
        return BlowDownMap(lattice, c, hyperbolic_lattice(), pullback_basis)

    # raw orthogonal-complement coordinates as a last resort
    functional = tuple(
        int(sum(lattice.gram[i][j] * c.coeffs[j] for j in range(r))) for i in range(r)
    )
    kernel = [LatticeClass(v) for v in _kernel_of_functional(functional)]
    comp_gram = tuple(
        tuple(int(lattice.pair(kernel[i], kernel[j])) for j in range(r - 1))
        for i in range(r - 1)
    )
    if len(comp_gram) <= 2 or (gram_signature(comp_gram)[0] == 1 and any(
        comp_gram[i][i] % 2 for i in range(len(comp_gram))
    )):
        raise SearchExhaustedError(
            "no canonical presentation of the contracted lattice found", box
        )
    comp_inv = _inverse(comp_gram)
    comp_k = LatticeClass(_mat_vec(comp_inv, [lattice.pair(k_target, b) for b in kernel]))
    comp = IntersectionLattice(comp_gram, tuple(f"G{i}" for i in range(1, r)), comp_k)
    return BlowDownMap(lattice, c, comp, tuple(kernel))


def _contracted_default_basis(
    lattice: IntersectionLattice, c: LatticeClass, box: int
) -> tuple[LatticeClass, ...] | None:
    """Default-basis pullbacks orthogonal to C, searched upstairs.

    The line class is the lexicographically least square-one solution; the
    exceptional members are picked greedily in descending coefficient order
    subject to mutual orthogonality and ``-3 X0 + sum(F) = K - C``.
    """
    gram, canonical = _int_key(lattice)
    found = _default_presentation_search(gram, canonical, box, c.integer_coeffs())
    return None if found is None else tuple(LatticeClass(t) for t in found)


def _contracted_ruling_basis(
    lattice: IntersectionLattice, c: LatticeClass, box: int
) -> tuple[LatticeClass, ...] | None:
    """Sphere-product ruling pullbacks orthogonal to C."""
    gram, canonical = _int_key(lattice)
    found = _ruling_presentation_search(gram, canonical, box, c.integer_coeffs())
    return None if found is None else tuple(LatticeClass(t) for t in found)
