"""Internal-point bases, the basis change G = B^-1 * F, and recovery systems.

Three linearly independent internal points b1, b2, b3 give a generator
matrix G = B^-1 * F whose minimal recovery sets all have size >= 2, and
whose size-2 recovery sets partition the server set [n] for every object.
The partition for object i is read off the secant lines through b_i; the
same pairs are re-derived algebraically (solve e_i = alpha*g_a + beta*g_b)
and both derivations must agree exactly.

Server indices in recovery systems are 1-based, matching the serialized
formats; matrix columns are addressed 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .gf import FieldCtx
from .geom import (
    ProjPoint,
    all_points,
    det3,
    in_span,
    mat_inv3,
    mat_mul,
    projectivize,
    rank,
    solve_combination,
)
from .oval import OvalCode, PointKind, classify_point

RECOVERY_SET_CAP = 64
_MDS_VERIFY_CAP = 16


class NoBasisFound(RuntimeError):
    pass


class SingularBasis(ValueError):
    pass


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class InternalBasis:
    points: tuple[ProjPoint, ProjPoint, ProjPoint]
    B: tuple[tuple[int, ...], ...]       # columns are the chosen representatives
    B_inv: tuple[tuple[int, ...], ...]


@dataclass(eq=False)
class GeneratorMatrix:
    oval: OvalCode
    basis: InternalBasis
    G: tuple[tuple[int, ...], ...]  # 3 rows of n canonical integers

    @property
    def ctx(self) -> FieldCtx:
        return self.oval.ctx

    @property
    def n(self) -> int:
        return self.oval.n

    def column(self, j: int) -> tuple[int, int, int]:
        return (self.G[0][j], self.G[1][j], self.G[2][j])


@dataclass(frozen=True)
class RecoveryPair:
    servers: tuple[int, int]   # 1-based, ascending
    coeffs: tuple[int, int]    # e_i = coeffs[0]*g_a + coeffs[1]*g_b


@dataclass(eq=False)
class RecoverySystem:
    """Per-object size-2 recovery pairs with their reconstruction coefficients."""

    ctx: FieldCtx
    n: int
    pairs: tuple[tuple[RecoveryPair, ...], ...]  # indexed by object-1

    def pairs_for(self, obj: int) -> tuple[RecoveryPair, ...]:
        """Recovery pairs of object obj (1-based)."""
        return self.pairs[obj - 1]

    def partition_for(self, obj: int) -> list[frozenset[int]]:
        return [frozenset(p.servers) for p in self.pairs_for(obj)]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "field": self.ctx.descriptor(),
            "objects": [
                {
                    "object": i + 1,
                    "pairs": [
                        {"pair": list(p.servers), "coeffs": list(p.coeffs)}
                        for p in obj_pairs
                    ],
                }
                for i, obj_pairs in enumerate(self.pairs)
            ],
        }


def _basis_from_projective(code: OvalCode, pts) -> InternalBasis:
    pts = tuple(pts)
    if len(pts) != 3:
        raise ValueError("an internal basis needs exactly 3 points")
    ctx = code.ctx
    B_cols = [P.coords for P in pts]
    B = tuple(tuple(B_cols[j][i] for j in range(3)) for i in range(3))
    if det3(ctx, B) == 0:
        raise SingularBasis(f"points {pts} are not linearly independent")
    B_inv = mat_inv3(ctx, B)
    return InternalBasis(points=pts, B=B, B_inv=B_inv)


def basis_from_points(code: OvalCode, triples) -> InternalBasis:
    """Internal basis from three explicit points (coordinate triples or ProjPoints).

    Validates that every point classifies as internal and that the three are
    independent; the normalized representatives become the columns of B.
    """
    pts = []
    for t in triples:
        P = t if isinstance(t, ProjPoint) else projectivize(code.ctx, t)
        if classify_point(P, code) is not PointKind.INTERNAL:
            raise ValueError(f"{P!r} is not an internal point of the arc")
        pts.append(P)
    return _basis_from_projective(code, pts)


def find_internal_basis(code: OvalCode, strategy: str = "scan", seed: int | None = None) -> InternalBasis:
    """Three independent internal points, deterministically or by seeded sampling.

    "scan" walks all_points in lexicographic order and greedily keeps
    internal points that extend the span; "seeded" rejection-samples random
    points using the quadratic-residue test (odd q) or the off-arc test
    (even q), reproducibly for a given seed.
    """
    ctx = code.ctx
    kept: list[ProjPoint] = []

    def extends(P: ProjPoint) -> bool:
        vecs = [list(Q.coords) for Q in kept]
        return rank(ctx, vecs + [list(P.coords)]) == len(kept) + 1

    if strategy == "scan":
        for P in all_points(ctx):
            if classify_point(P, code) is PointKind.INTERNAL and extends(P):
                kept.append(P)
                if len(kept) == 3:
                    return _basis_from_projective(code, kept)
        raise NoBasisFound(f"no independent internal triple in PG(2,{ctx.q})")

    if strategy == "seeded":
        if seed is None:
            raise ValueError("the seeded strategy needs a seed")
        rng = random.Random(seed)
        from .oval import classify_point_conic

        def is_internal(P: ProjPoint) -> bool:
            if ctx.q % 2 == 0:
                return P not in code.points
            return classify_point_conic(P, code) is PointKind.INTERNAL

        attempts = 0
        while len(kept) < 3:
            attempts += 1
            if attempts > 100_000:
                raise NoBasisFound("seeded sampling did not converge")
            v = tuple(rng.randrange(ctx.q) for _ in range(3))
            if v == (0, 0, 0):
                continue
            P = projectivize(ctx, v)
            if is_internal(P) and extends(P):
                kept.append(P)
        return _basis_from_projective(code, kept)

    raise ValueError(f"unknown strategy {strategy!r}")


def build_generator(code: OvalCode, basis: InternalBasis) -> GeneratorMatrix:
    """G = B^-1 * F, with the MDS property re-verified for small fields."""
    ctx = code.ctx
    if det3(ctx, basis.B) == 0:
        raise SingularBasis("basis matrix is singular")
    G = mat_mul(ctx, basis.B_inv, code.F)
    gm = GeneratorMatrix(oval=code, basis=basis, G=G)
    if ctx.q <= _MDS_VERIFY_CAP:
        for i, j, k in combinations(range(gm.n), 3):
            if det3(ctx, (gm.column(i), gm.column(j), gm.column(k))) == 0:
                raise RuntimeError(f"columns {i},{j},{k} of G are dependent")
    return gm


def recovery_pairs(gm: GeneratorMatrix) -> RecoverySystem:
    """The size-2 recovery partitions of G, with reconstruction coefficients.

    Pairs are derived twice: geometrically (secants through the basis point)
    and algebraically (exact solve of e_i = alpha*g_a + beta*g_b); any
    disagreement is an error.  For every object the pairs are checked to be
    disjoint and to cover [n].
    """
    ctx = gm.ctx
    n = gm.n
    code = gm.oval
    per_object: list[tuple[RecoveryPair, ...]] = []
    for i in range(3):
        e_i = tuple(1 if r == i else 0 for r in range(3))
        b_point = gm.basis.points[i]

        geometric: set[tuple[int, int]] = set()
        for a in range(n):
            for b in range(a + 1, n):
                d = det3(ctx, (b_point.coords, code.points[a].coords, code.points[b].coords))
                if d == 0:
                    geometric.add((a, b))

        algebraic: dict[tuple[int, int], tuple[int, int]] = {}
        for a in range(n):
            for b in range(a + 1, n):
                sol = solve_combination(ctx, [gm.column(a), gm.column(b)], e_i)
                if sol is not None:
                    algebraic[(a, b)] = (sol[0], sol[1])

        if geometric != set(algebraic):
            raise RuntimeError(
                f"object {i + 1}: geometric pairs {sorted(geometric)} "
                f"!= algebraic pairs {sorted(algebraic)}"
            )

        covered: set[int] = set()
        for a, b in algebraic:
            if a in covered or b in covered:
                raise RuntimeError(f"object {i + 1}: size-2 sets are not disjoint")
            covered.update((a, b))
        if covered != set(range(n)):
            raise RuntimeError(f"object {i + 1}: size-2 sets do not cover [n]")

        per_object.append(tuple(
            RecoveryPair(servers=(a + 1, b + 1), coeffs=coeffs)
            for (a, b), coeffs in sorted(algebraic.items())
        ))
    return RecoverySystem(ctx=ctx, n=n, pairs=tuple(per_object))


def minimal_recovery_sets(matrix, obj: int, ctx: FieldCtx | None = None) -> list[frozenset[int]]:
    """All minimal recovery sets of object obj (1-based) for a 3 x n matrix.

    Brute force over subsets of size 1, 2 and 3 with a minimality filter;
    since k = 3, every minimal recovery set has at most 3 elements.  The
    matrix may be a GeneratorMatrix or a plain row tuple (then ctx is
    required).
    """
    if isinstance(matrix, GeneratorMatrix):
        rows = matrix.G
        ctx = matrix.ctx
    else:
        rows = matrix
        if ctx is None:
            raise ValueError("a field context is required for a plain matrix")
    n = len(rows[0])
    if n > RECOVERY_SET_CAP:
        raise CapExceeded(f"n = {n} exceeds the brute-force cap {RECOVERY_SET_CAP}")
    if rank(ctx, [list(r) for r in rows]) != 3:
        raise ValueError("matrix must have full rank 3")
    if not 1 <= obj <= 3:
        raise ValueError(f"object index must be in 1..3, got {obj}")

    col = lambda j: [rows[r][j] for r in range(3)]
    e = [1 if r == obj - 1 else 0 for r in range(3)]

    found: list[frozenset[int]] = []
    for size in (1, 2, 3):
        for subset in combinations(range(n), size):
            if in_span(ctx, e, [col(j) for j in subset]):
                cand = frozenset(j + 1 for j in subset)
                if not any(prev < cand for prev in found):
                    found.append(cand)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def systematic_form(matrix, ctx: FieldCtx | None = None) -> tuple[tuple[int, ...], ...]:
    """Row-reduce a full-rank 3 x n matrix so its first three columns are I.

    For an MDS matrix the first three columns are always invertible, so the
    result generates the same code with a systematic layout.
    """
    if isinstance(matrix, GeneratorMatrix):
        rows = matrix.G
        ctx = matrix.ctx
    elif isinstance(matrix, OvalCode):
        rows = matrix.F
        ctx = matrix.ctx
    else:
        rows = matrix
        if ctx is None:
            raise ValueError("a field context is required for a plain matrix")
    lead = tuple(tuple(rows[r][j] for j in range(3)) for r in range(3))
    t = mat_inv3(ctx, lead)
    return mat_mul(ctx, t, rows)
