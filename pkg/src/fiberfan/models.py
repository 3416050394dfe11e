"""Hypersimplices, Gelfand-Tsetlin polytopes of polygon spaces, type-A root data and
representation-theoretic counting oracles.

Coordinates on the polygon-space polytope are ``(r_1..r_n, d_2..d_{n-2})``:
side lengths followed by the diagonals from the first vertex.  ``d_1 = r_1``
and ``d_{n-1} = r_n`` are substituted, never stored.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import NonIntegralLinearizationError, NotReducedError
from .exact import AffineLattice
from .fiber import FiberPolytopeResult, Projection, fiber_polytope, quotient_polytope
from .polytope import HPolytope, Polytope, affine_image, lattice_points, dilate


def _unit(d, i, c=1):
    v = [0] * d
    v[i] = c
    return v


def hypersimplex(n: int, k: int = 2) -> Polytope:
    """``{r in [0,1]^n : sum r = k}``; the default ``k = 2`` is the moment polytope of Gr(2, n)."""
    if n < 3:
        raise ValueError("hypersimplex needs n >= 3")
    ineqs = []
    for i in range(n):
        ineqs.append((_unit(n, i), 1))
        ineqs.append((_unit(n, i, -1), 0))
    return Polytope(h=HPolytope(n, tuple(ineqs), (([1] * n, k),)))


def gt_coordinate_names(n: int) -> list[str]:
    return [f"r{i}" for i in range(1, n + 1)] + [f"d{i}" for i in range(2, n - 1)]


def _diag(n: int, i: int) -> list[int]:
    """Coefficient vector of the diagonal ``d_i`` (1 <= i <= n-1) in polygon coordinates."""
    d = 2 * n - 3
    if i == 1:
        return _unit(d, 0)
    if i == n - 1:
        return _unit(d, n - 1)
    return _unit(d, n + i - 2)


def gt_polytope(n: int) -> Polytope:
    """Polygon-space polytope: hypersimplex constraints on ``r`` plus, for ``1 <= i <= n-2``,
    ``d_i - d_{i+1} <= r_{i+1}``, ``d_i - d_{i+1} >= -r_{i+1}`` and ``d_i + d_{i+1} >= r_{i+1}``.
    """
    if n < 3:
        raise ValueError("gt_polytope needs n >= 3")
    dim = 2 * n - 3
    ineqs = []
    for i in range(n):
        ineqs.append((_unit(dim, i), 1))
        ineqs.append((_unit(dim, i, -1), 0))
    for i in range(1, n - 1):
        di, dj, r = _diag(n, i), _diag(n, i + 1), _unit(dim, i)
        ineqs.append(([a - b - c for a, b, c in zip(di, dj, r)], 0))
        ineqs.append(([-a + b - c for a, b, c in zip(di, dj, r)], 0))
        ineqs.append(([-a - b + c for a, b, c in zip(di, dj, r)], 0))
    eq = ([1] * n + [0] * (n - 3), 2)
    return Polytope(h=HPolytope(dim, tuple(ineqs), (eq,)))


def phi(n: int) -> Projection:
    """Forget the diagonals: ``R^{2n-3} -> R^n``."""
    if n < 3:
        raise ValueError("phi needs n >= 3")
    return Projection(tuple(tuple(int(i == j) for j in range(2 * n - 3)) for i in range(n)))


def parity_lattice(n: int, enabled: bool = True) -> AffineLattice:
    """Integer points with ``d_i = r_1 + ... + r_i (mod 2)`` for ``i = 2..n-2``.

    ``enabled=False`` returns the plain integer lattice (used as a negative control).
    """
    dim = 2 * n - 3
    if not enabled:
        return AffineLattice.full(dim)
    cong = []
    for i in range(2, n - 1):
        m = [0] * dim
        m[n + i - 2] = 1
        for j in range(i):
            m[j] = 1
        cong.append((tuple(m), 2, 0))
    return AffineLattice(dim, tuple(cong))


# ---------------------------------------------------------------------------
# type A root data

@dataclass(frozen=True)
class RootDataA:
    """Root data of GL_n: simple roots ``e_i - e_{i+1}``, Weyl group S_n acting on coordinates."""

    n: int
    simple_roots: tuple = field(init=False)

    def __post_init__(self):
        roots = tuple(tuple(int(j == i) - int(j == i + 1) for j in range(self.n)) for i in range(self.n - 1))
        object.__setattr__(self, "simple_roots", roots)

    @property
    def rank(self) -> int:
        return self.n - 1

    @property
    def longest_length(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def w0(self) -> tuple:
        """The order-reversing permutation, as an image tuple."""
        return tuple(range(self.n - 1, -1, -1))

    def act(self, perm, weight):
        """Permute coordinates: ``(w.x)_{w(i)} = x_i``."""
        out = [0] * self.n
        for i, x in enumerate(weight):
            out[perm[i]] = x
        return tuple(out)

    def dual_weight(self, weight):
        """``-w0 . weight``."""
        return tuple(-x for x in self.act(self.w0, weight))

    def word_permutation(self, word):
        """Product ``s_{i_1} ... s_{i_l}`` of simple transpositions (1-based), as an image tuple."""
        perm = list(range(self.n))
        for i in word:
            if not 1 <= i <= self.n - 1:
                raise NotReducedError(f"letter {i} is not a simple reflection of S_{self.n}")
            # right multiplication by s_i swaps the values at positions i-1, i
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return tuple(perm)

    def is_reduced_longest(self, word) -> bool:
        perm = self.word_permutation(word)
        inversions = sum(1 for a, b in itertools.combinations(range(self.n), 2) if perm[a] > perm[b])
        return inversions == len(word) == self.longest_length and perm == self.w0


def standard_reduced_word(n: int) -> tuple:
    """``(1)(2 1)(3 2 1)...(n-1 ... 1)``, a reduced word for the longest element of S_n."""
    return tuple(i for m in range(1, n) for i in range(m, 0, -1))


def weight_polytope(lam, n: int | None = None) -> Polytope:
    """Convex hull of the S_n-orbit of the dual weight ``-w0 . lam``."""
    lam = tuple(int(x) for x in lam)
    n = len(lam) if n is None else n
    if len(lam) != n:
        raise ValueError("weight has wrong length")
    star = RootDataA(n).dual_weight(lam)
    return Polytope.from_points(set(itertools.permutations(star)), n)


def pi_lambda(word, lam, n: int | None = None) -> Projection:
    """``t -> -lam + sum_j t_j alpha_{i_j}`` for a reduced word of the longest element."""
    lam = tuple(int(x) for x in lam)
    n = len(lam) if n is None else n
    rd = RootDataA(n)
    if not rd.is_reduced_longest(tuple(word)):
        raise NotReducedError(f"{tuple(word)} is not a reduced word for w0 in S_{n}")
    cols = [rd.simple_roots[i - 1] for i in word]
    matrix = tuple(tuple(c[r] for c in cols) for r in range(n))
    return Projection(matrix, tuple(-x for x in lam), source_dim=len(word))


def _check_dominant(lam):
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{lam} is not weakly decreasing")


def gt_pattern_coordinates(n: int) -> list[tuple[int, int]]:
    """``(row, position)`` of each free pattern entry, row ``n-1`` down to row 1."""
    return [(j, i) for j in range(n - 1, 0, -1) for i in range(j)]


def gt_pattern_polytope(lam) -> Polytope:
    """Interlacing patterns with top row ``lam``: ``x[j][i] >= x[j-1][i] >= x[j][i+1]``."""
    lam = tuple(int(x) for x in lam)
    _check_dominant(lam)
    n = len(lam)
    coords = gt_pattern_coordinates(n)
    index = {c: k for k, c in enumerate(coords)}
    dim = len(coords)

    def entry(j, i):
        # (coefficient vector, constant)
        if j == n:
            return [0] * dim, lam[i]
        return _unit(dim, index[(j, i)]), 0

    ineqs = []
    for j in range(n, 1, -1):
        for i in range(j - 1):
            lo, c_lo = entry(j - 1, i)
            up, c_up = entry(j, i)
            nx, c_nx = entry(j, i + 1)
            # lower <= upper  and  next <= lower
            ineqs.append(([a - b for a, b in zip(lo, up)], c_up - c_lo))
            ineqs.append(([b - a for a, b in zip(lo, nx)], c_lo - c_nx))
    return Polytope(h=HPolytope(dim, tuple(ineqs), ()))


def pattern_to_string_map(lam):
    """Affine unimodular map from pattern coordinates to coordinates indexed by
    :func:`standard_reduced_word`, with ``pi_lambda`` sending the image onto the
    weight polytope.  Returns ``(matrix, offset)``.

    Letter ``i`` of block ``m`` gets ``sum_{j<=i} x[m+1][j] - sum_{j<=i} x[m][j]``.
    """
    lam = tuple(int(x) for x in lam)
    n = len(lam)
    coords = gt_pattern_coordinates(n)
    index = {c: k for k, c in enumerate(coords)}
    dim = len(coords)
    rows, offset = [], []
    for m in range(1, n):
        for i in range(m, 0, -1):
            row = [0] * dim
            const = 0
            for j in range(i):
                if m + 1 == n:
                    const += lam[j]
                else:
                    row[index[(m + 1, j)]] += 1
                row[index[(m, j)]] -= 1
            rows.append(tuple(row))
            offset.append(const)
    return tuple(rows), tuple(offset)


def gt_string_polytope(lam) -> Polytope:
    """The pattern polytope moved into reduced-word coordinates (a stand-in for Q(lam))."""
    M, off = pattern_to_string_map(lam)
    return affine_image(gt_pattern_polytope(lam), M, off)


# ---------------------------------------------------------------------------
# oracles

def weyl_dim(partition, n: int) -> int:
    """Dimension of the GL_n module of highest weight ``partition``, by the hook-content formula."""
    parts = [int(p) for p in partition if p]
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError("partition must be weakly decreasing")
    if len(parts) > n:
        return 0
    conj = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    num, den = 1, 1
    for i, row in enumerate(parts):
        for j in range(row):
            num *= n + j - i
            den *= (row - j - 1) + (conj[j] - i - 1) + 1
    return num // den


KOSTKA_CELL_LIMIT = 40


def kostka(partition, content, n: int | None = None) -> int:
    """Semistandard tableaux of shape ``partition`` and content ``content``, by backtracking.

    Entries ``1, 2, ...`` are placed one value at a time as horizontal strips.
    """
    shape = tuple(int(p) for p in partition if p)
    content = tuple(int(c) for c in content)
    if n is not None and len(content) > n:
        raise ValueError("content longer than n")
    if any(c < 0 for c in content):
        return 0
    if sum(shape) != sum(content):
        raise ValueError("partition and content have different sizes")
    if sum(shape) > KOSTKA_CELL_LIMIT:
        raise ValueError(f"kostka backtracking is limited to {KOSTKA_CELL_LIMIT} cells")

    @lru_cache(maxsize=None)
    def count(inner, idx):
        if idx == len(content):
            return int(inner == shape)
        return sum(count(outer, idx + 1) for outer in _horizontal_strips(inner, shape, content[idx]))

    return count(tuple(0 for _ in shape), 0)


def _horizontal_strips(inner, outer_bound, size):
    """Shapes ``mu`` with ``inner ⊆ mu ⊆ outer_bound`` and ``mu / inner`` a horizontal strip of ``size``."""
    k = len(inner)

    def rec(i, left, acc):
        if i == k:
            if left == 0:
                yield tuple(acc)
            return
        hi = outer_bound[i]
        if i > 0:
            hi = min(hi, inner[i - 1])  # strip: new row i may not pass old row i-1
            hi = min(hi, acc[i - 1])
        for v in range(inner[i], min(hi, inner[i] + left) + 1):
            acc.append(v)
            yield from rec(i + 1, left - (v - inner[i]), acc)
            acc.pop()

    yield from rec(0, size, [])


@dataclass(frozen=True)
class HilbertData:
    n: int
    k: int
    total_count: int
    oracle_dim: int
    per_weight: dict
    oracle_kostka: dict
    parity: bool = True

    @property
    def matches(self) -> bool:
        return self.total_count == self.oracle_dim

    @property
    def weight_mismatches(self) -> dict:
        return {r: (c, self.oracle_kostka.get(r)) for r, c in self.per_weight.items()
                if c != self.oracle_kostka.get(r)}


def integral_weights(n: int, k: int):
    """Integer points of ``k`` times the second hypersimplex."""
    for r in itertools.product(range(k + 1), repeat=n):
        if sum(r) == 2 * k:
            yield r


def ehrhart_count(n: int, k: int, parity: bool = True, with_kostka: bool = True) -> HilbertData:
    """Lattice points of ``k`` times the polygon-space polytope against ``weyl_dim((k, k), n)``.

    Per-weight counts group the points by their side lengths ``r``; the oracle
    for each is the Kostka number ``K_{(k,k), r}``.
    """
    if n < 3 or k < 1:
        raise ValueError("need n >= 3 and k >= 1")
    pts = lattice_points(dilate(gt_polytope(n), k), parity_lattice(n, parity))
    per_weight = {r: 0 for r in integral_weights(n, k)}
    for p in pts:
        per_weight[tuple(p[:n])] = per_weight.get(tuple(p[:n]), 0) + 1
    oracle = {}
    if with_kostka:
        oracle = {r: kostka((k, k), r, n) for r in per_weight}
    return HilbertData(n, k, len(pts), weyl_dim((k, k), n), per_weight, oracle, parity)


def witness_points(n: int, k: int) -> list[tuple[int, ...]]:
    """Integer points of the dilated polytope that violate the parity congruences."""
    P = dilate(gt_polytope(n), k)
    L = parity_lattice(n)
    return [p for p in lattice_points(P) if p not in L]


def invariant_count(n: int, k: int, parity: bool = True) -> tuple[int, int]:
    """Lattice count of the fiber over the balanced weight ``(2k/n, ..., 2k/n)`` and its Kostka oracle."""
    if (2 * k) % n:
        raise NonIntegralLinearizationError(f"2k/n = {Fraction(2 * k, n)} is not an integer")
    w = 2 * k // n
    mu = tuple(Fraction(2, n) for _ in range(n))
    _, count = quotient_polytope(gt_polytope(n), phi(n), mu, k, parity_lattice(n, parity))
    return count, kostka((k, k), (w,) * n, n)


def nbar_fan(n: int, deadline=None) -> FiberPolytopeResult:
    """Fiber polytope of the diagonal-forgetting projection of the polygon-space polytope."""
    if n < 3:
        raise ValueError("nbar_fan needs n >= 3")
    return fiber_polytope(gt_polytope(n), phi(n), deadline)
