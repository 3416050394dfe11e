"""Double description method for pointed rational cones.

Everything runs on primitive integer vectors; zero sets are int bitmasks.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .exact import dot, integerize, kernel_basis, primitive, row_space_basis


def _prim(v):
    g = math.gcd(*v)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _inverse_columns(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Columns of the inverse of a square nonsingular integer matrix, made primitive."""
    n = len(rows)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [a / piv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    inv_cols = []
    for j in range(n):
        inv_cols.append(primitive([A[i][n + j] for i in range(n)]))
    return inv_cols


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{z : R z >= 0}`` for an integer matrix ``R`` of full column rank.

    Constraints are inserted in lexicographic order after a greedy choice of
    ``dim`` independent starting rows; adjacency uses the combinatorial test.
    Returns sorted primitive rays (empty when the cone is ``{0}``).
    """
    R = sorted({_prim(tuple(int(x) for x in r)) for r in rows if any(r)})
    if dim == 0:
        return []
    basis_idx = []
    chosen = []
    for i, r in enumerate(R):
        trial = chosen + [r]
        if len(row_space_basis(trial, dim)) == len(trial):
            chosen = trial
            basis_idx.append(i)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise ValueError("constraint matrix does not have full column rank")
    order = basis_idx + [i for i in range(len(R)) if i not in set(basis_idx)]
    R = [R[i] for i in order]

    rays = _inverse_columns(R[:dim])
    zeros = []
    for j, g in enumerate(rays):
        mask = 0
        for i in range(dim):
            if i != j:
                mask |= 1 << i
        zeros.append(mask)

    for k in range(dim, len(R)):
        a = R[k]
        bit = 1 << k
        vals = [dot(a, g) for g in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        if neg and pos:
            for p in pos:
                for nidx in neg:
                    common = zeros[p] & zeros[nidx]
                    if common.bit_count() < dim - 2:
                        continue
                    adjacent = True
                    for t in range(len(rays)):
                        if t != p and t != nidx and (zeros[t] & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vp, vn = vals[p], vals[nidx]
                    g = tuple(vp * x - vn * y for x, y in zip(rays[nidx], rays[p]))
                    new_rays.append(_prim(g))
                    new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
        if not rays:
            return []
    return sorted(set(rays))


def cone_generators(ineqs: Sequence[Sequence], eqs: Sequence[Sequence], dim: int):
    """Generators of ``{z : a.z >= 0 (a in ineqs), c.z = 0 (c in eqs)}``.

    Returns ``(rays, lineality)``: rays are primitive integer vectors lying in
    the orthogonal complement of the lineality space, and ``lineality`` is the
    Hermite-normal-form basis of the lineality lattice.
    """
    ineqs = [integerize(a) for a in ineqs]
    eqs = [integerize(c) for c in eqs]
    allrows = ineqs + eqs + [tuple(-x for x in c) for c in eqs]
    if not allrows:
        return [], kernel_basis([], dim)
    lineality = kernel_basis(allrows, dim)
    B = row_space_basis(allrows, dim)
    if not B:
        return [], lineality
    reduced = [tuple(dot(r, b) for b in B) for r in allrows]
    urays = extreme_rays(reduced, len(B))
    rays = []
    for u in urays:
        z = [0] * dim
        for ui, b in zip(u, B):
            for j, bj in enumerate(b):
                z[j] += ui * bj
        rays.append(_prim(tuple(z)))
    return sorted(set(rays)), lineality
