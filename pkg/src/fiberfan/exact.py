"""Exact rational scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are tuples of row tuples.  Integer-valued results (kernel lattices,
primitive normals) are plain ``int`` tuples.  Nothing in here ever rounds.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
QVector = tuple  # tuple[Fraction, ...]
QMatrix = tuple  # tuple[QVector, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def q(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x, strict=False)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def qvec(xs: Iterable) -> QVector:
    return tuple(q(x) for x in xs)


def qmat(rows: Iterable[Iterable]) -> QMatrix:
    rows = tuple(qvec(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows have unequal length")
    return rows


def parse_rational(text: str, strict: bool = True) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``.

    In strict mode non-canonical spellings such as ``"2/4"``, ``"3/1"`` or a
    zero denominator are rejected; lenient mode normalizes them.
    """
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    value = Fraction(num, den)
    if strict and (value.numerator != num or value.denominator != den or den == 1):
        raise ValueError(f"non-canonical rational: {text!r}")
    return value


def format_rational(x) -> str:
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# vector helpers

def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def matvec(M: Sequence[Sequence], v: Sequence):
    return tuple(dot(row, v) for row in M)


def transpose(M: Sequence[Sequence], ncols: int | None = None):
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def integerize(row: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to an integer vector."""
    den = 1
    for x in row:
        den = math.lcm(den, Fraction(x).denominator)
    return tuple(int(Fraction(x) * den) for x in row)


def primitive(row: Sequence) -> tuple[int, ...]:
    """Positive rescaling to an integer vector with gcd 1 (zero stays zero)."""
    ints = integerize(row)
    g = math.gcd(*ints) if ints else 0
    if g in (0, 1):
        return ints
    return tuple(x // g for x in ints)


def sign_normalize(row: Sequence[int]) -> tuple[int, ...]:
    """Flip sign so that the first nonzero entry is positive."""
    for x in row:
        if x:
            return tuple(row) if x > 0 else tuple(-y for y in row)
    return tuple(row)


# ---------------------------------------------------------------------------
# fraction-free elimination

def bareiss_echelon(rows: Sequence[Sequence[int]], ncols: int):
    """Row echelon form of an integer matrix by Bareiss elimination.

    Returns ``(echelon_rows, pivot_columns)``; entries stay integral and are
    bounded by minors of the input.
    """
    A = [list(r) for r in rows]
    m = len(A)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            ai = A[i][c]
            row_i = A[i]
            row_r = A[r]
            for j in range(c, ncols):
                row_i[j] = (piv * row_i[j] - ai * row_r[j]) // prev
        pivots.append(c)
        prev = piv
        r += 1
    return [tuple(row) for row in A[:r]], pivots


def rank(M: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix."""
    if not M:
        return 0
    ncols = len(M[0])
    _, pivots = bareiss_echelon([integerize(r) for r in M], ncols)
    return len(pivots)


def solve_affine(A: Sequence[Sequence], b: Sequence):
    """One exact solution of ``A x = b``, or ``None`` when inconsistent.

    Free variables are set to zero, so for a fixed ``A`` the returned solution
    depends linearly on ``b``.
    """
    if len(A) != len(b):
        raise ValueError("A and b have incompatible shapes")
    if not A:
        raise ValueError("empty system has no column count")
    n = len(A[0])
    aug = [integerize(tuple(row) + (bi,)) for row, bi in zip(A, b)]
    ech, pivots = bareiss_echelon(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in reversed(list(zip(ech, pivots))):
        s = Fraction(row[n]) - sum(row[j] * x[j] for j in range(c + 1, n))
        x[c] = s / row[c]
    return tuple(x)


# ---------------------------------------------------------------------------
# integer lattices

def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form; zero rows are dropped.

    The result is the canonical basis of the integer row lattice: pivots are
    positive and entries above a pivot lie in ``[0, pivot)``.
    """
    A = [list(r) for r in rows]
    m = len(A)
    r = 0
    pivcols = []
    for c in range(ncols):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    f = A[i][c] // A[r][c]
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            f = A[i][c] // A[r][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivcols.append(c)
        r += 1
    return [tuple(row) for row in A[:r]]


def kernel_basis(M: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice ``ker(M) ∩ Z^d``.

    Rows are scaled to integers first (the kernel is unchanged), a unimodular
    transform reduces ``M^T``, and the resulting lattice basis is returned in
    Hermite normal form, so it is canonical and every vector is primitive.
    """
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    d = ncols
    if not M:
        return [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    At = [list(col) for col in zip(*[integerize(r) for r in M])]
    m = len(M)
    U = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    r = 0
    for c in range(m):
        if r >= d:
            break
        while True:
            nz = [i for i in range(r, d) if At[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(At[i][c]))
            At[r], At[p] = At[p], At[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, d):
                if At[i][c]:
                    f = At[i][c] // At[r][c]
                    At[i] = [a - f * b for a, b in zip(At[i], At[r])]
                    U[i] = [a - f * b for a, b in zip(U[i], U[r])]
                    if At[i][c]:
                        done = False
            if done:
                break
        if At[r][c] != 0:
            r += 1
    return hermite_normal_form(U[r:], d)


def row_space_basis(M: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the rational row space of ``M``."""
    if not M:
        return []
    ech, _ = bareiss_echelon([integerize(r) for r in M], ncols)
    return [primitive(r) for r in ech]


def project_onto_span(v: Sequence, basis: Sequence[Sequence]) -> QVector:
    """Orthogonal projection of ``v`` onto the span of ``basis`` (exact)."""
    v = qvec(v)
    if not basis:
        return tuple(Fraction(0) for _ in v)
    G = [[Fraction(dot(a, b)) for b in basis] for a in basis]
    rhs = [Fraction(dot(a, v)) for a in basis]
    coef = solve_affine(G, rhs)
    out = [Fraction(0)] * len(v)
    for c, b in zip(coef, basis):
        for i, bi in enumerate(b):
            out[i] += c * bi
    return tuple(out)


def affine_hull(points: Sequence[Sequence]):
    """Return ``(basepoint, directions)`` for the affine hull of ``points``.

    The basepoint is the first point; directions form a primitive integer
    basis of the span of the differences.
    """
    if not points:
        raise ValueError("affine hull of an empty point set")
    base = qvec(points[0])
    diffs = [vsub(qvec(p), base) for p in points[1:]]
    return base, row_space_basis(diffs, len(base))


def lattice_coordinates(x: Sequence, base: Sequence, basis: Sequence[Sequence[int]]) -> QVector:
    """Coordinates ``y`` with ``x = base + sum(y_i * basis_i)``."""
    if not basis:
        return ()
    y = solve_affine(transpose(basis), vsub(qvec(x), qvec(base)))
    if y is None:
        raise ValueError("point is not in the affine span")
    return y


def from_lattice_coordinates(y: Sequence, base: Sequence, basis: Sequence[Sequence[int]]) -> QVector:
    x = list(qvec(base))
    for yi, b in zip(y, basis):
        if yi:
            for j, bj in enumerate(b):
                x[j] += yi * bj
    return tuple(x)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineLattice:
    """Integer points ``x`` with ``m.x = residue (mod modulus)`` for every congruence.

    An empty congruence list is the full lattice ``Z^d``.  ``empty`` is set at
    construction when the congruences have no common integer solution.
    """

    ambient_dim: int
    congruences: tuple = ()
    empty: bool = field(init=False, default=False)

    def __post_init__(self):
        cong = []
        for m, mod, res in self.congruences:
            m = tuple(int(a) for a in m)
            mod, res = int(mod), int(res)
            if len(m) != self.ambient_dim:
                raise ValueError("congruence vector has wrong length")
            if mod < 1 or not 0 <= res < mod:
                raise ValueError("need modulus >= 1 and 0 <= residue < modulus")
            cong.append((m, mod, res))
        object.__setattr__(self, "congruences", tuple(cong))
        object.__setattr__(self, "empty", not self._solvable())

    def _solvable(self) -> bool:
        # residues reachable from integer points form the subgroup generated by the unit vectors
        if not self.congruences:
            return True
        mods = [mod for _, mod, _ in self.congruences]
        target = tuple(res for _, _, res in self.congruences)
        gens = [tuple(m[i] % mod for m, mod, _ in self.congruences) for i in range(self.ambient_dim)]
        seen = {tuple(0 for _ in mods)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = tuple((a + b) % mod for a, b, mod in zip(s, g, mods))
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        return target in seen

    def __contains__(self, x) -> bool:
        if len(x) != self.ambient_dim:
            return False
        xs = []
        for a in x:
            a = Fraction(a)
            if a.denominator != 1:
                return False
            xs.append(a.numerator)
        return all(dot(m, xs) % mod == res for m, mod, res in self.congruences)

    @classmethod
    def full(cls, d: int) -> "AffineLattice":
        return cls(d, ())
