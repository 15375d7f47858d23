"""The projective plane PG(2, q): points, lines, incidence and spans.

Points and lines are normalized homogeneous triples of canonical field
integers; the first nonzero coordinate is always 1, so equality of the
coordinate tuples coincides with projective equality.  Lines are kept in
the dual representation (coefficient triples of a*x + b*y + c*z = 0),
making incidence a single dot product.

Small exact linear algebra over the field (rank, span membership, 3x3
inverse) lives here too, since every caller of it is doing geometry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import FieldCtx, FieldMismatch


class ZeroVector(ValueError):
    pass


class CoincidentPoints(ValueError):
    pass


Triple = tuple[int, int, int]


def _normalize(ctx: FieldCtx, v) -> Triple:
    v = tuple(ctx.check(x) for x in v)
    if len(v) != 3:
        raise ValueError(f"expected a triple, got {len(v)} coordinates")
    for x in v:
        if x != 0:
            s = ctx.inv(x)
            return tuple(ctx.mul(s, y) for y in v)  # type: ignore[return-value]
    raise ZeroVector("the zero triple has no projective image")


@dataclass(frozen=True)
class ProjPoint:
    ctx: FieldCtx
    coords: Triple

    def __repr__(self) -> str:
        return "({}:{}:{})".format(*self.coords)


@dataclass(frozen=True)
class ProjLine:
    ctx: FieldCtx
    coeffs: Triple

    def __repr__(self) -> str:
        return "[{}:{}:{}]".format(*self.coeffs)


def projectivize(ctx: FieldCtx, v) -> ProjPoint:
    """Normalized projective point of a nonzero coordinate triple."""
    return ProjPoint(ctx, _normalize(ctx, v))


def line(ctx: FieldCtx, coeffs) -> ProjLine:
    """Normalized projective line from a nonzero coefficient triple."""
    return ProjLine(ctx, _normalize(ctx, coeffs))


def _same_field(a, b) -> FieldCtx:
    if a.ctx != b.ctx:
        raise FieldMismatch(f"mixed fields: {a.ctx!r} and {b.ctx!r}")
    return a.ctx


def line_through(P: ProjPoint, Q: ProjPoint) -> ProjLine:
    """The unique line incident to both points (formal cross product)."""
    ctx = _same_field(P, Q)
    if P.coords == Q.coords:
        raise CoincidentPoints(f"no unique line through {P!r} twice")
    (p1, p2, p3), (q1, q2, q3) = P.coords, Q.coords
    cross = (
        ctx.sub(ctx.mul(p2, q3), ctx.mul(p3, q2)),
        ctx.sub(ctx.mul(p3, q1), ctx.mul(p1, q3)),
        ctx.sub(ctx.mul(p1, q2), ctx.mul(p2, q1)),
    )
    return line(ctx, cross)


def incident(P: ProjPoint, L: ProjLine) -> bool:
    ctx = _same_field(P, L)
    acc = 0
    for x, a in zip(P.coords, L.coeffs):
        acc = ctx.add(acc, ctx.mul(x, a))
    return acc == 0


def all_points(ctx: FieldCtx) -> list[ProjPoint]:
    """All q^2+q+1 points, in ascending lexicographic order of coordinates."""
    pts = [ProjPoint(ctx, (0, 0, 1))]
    for c in range(ctx.q):
        pts.append(ProjPoint(ctx, (0, 1, c)))
    for b in range(ctx.q):
        for c in range(ctx.q):
            pts.append(ProjPoint(ctx, (1, b, c)))
    return pts


def all_lines(ctx: FieldCtx) -> list[ProjLine]:
    """All q^2+q+1 lines, in ascending lexicographic order of coefficients."""
    lines = [ProjLine(ctx, (0, 0, 1))]
    for c in range(ctx.q):
        lines.append(ProjLine(ctx, (0, 1, c)))
    for b in range(ctx.q):
        for c in range(ctx.q):
            lines.append(ProjLine(ctx, (1, b, c)))
    return lines


def det3(ctx: FieldCtx, rows) -> int:
    """Determinant of a 3x3 matrix given as three coordinate triples."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    mul, sub, add = ctx.mul, ctx.sub, ctx.add
    t1 = mul(a, sub(mul(e, i), mul(f, h)))
    t2 = mul(b, sub(mul(d, i), mul(f, g)))
    t3 = mul(c, sub(mul(d, h), mul(e, g)))
    return add(sub(t1, t2), t3)


def independent(P1: ProjPoint, P2: ProjPoint, P3: ProjPoint) -> bool:
    """True iff the three points span the whole plane."""
    _same_field(P1, P2)
    ctx = _same_field(P2, P3)
    return det3(ctx, (P1.coords, P2.coords, P3.coords)) != 0


def collinear(P1: ProjPoint, P2: ProjPoint, P3: ProjPoint) -> bool:
    return not independent(P1, P2, P3)


# -- exact linear algebra over the field --------------------------------------


def rank(ctx: FieldCtx, vectors) -> int:
    """Rank of the listed vectors (rows) via Gaussian elimination."""
    rows = [list(v) for v in vectors]
    r = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = ctx.inv(rows[r][col])
        rows[r] = [ctx.mul(s, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def in_span(ctx: FieldCtx, target, vectors) -> bool:
    """True iff target lies in the span of the listed vectors."""
    vecs = list(vectors)
    return rank(ctx, vecs) == rank(ctx, vecs + [list(target)])


def solve_combination(ctx: FieldCtx, vectors, target):
    """Coefficients c with sum(c_i * vectors_i) == target, or None.

    The vectors must be linearly independent, so a solution is unique when
    it exists.
    """
    vecs = [list(v) for v in vectors]
    k = len(vecs)
    if rank(ctx, vecs) != k:
        raise ValueError("solve_combination requires independent vectors")
    # eliminate on the transposed system [v1 ... vk | target]
    height = len(target)
    aug = [[vecs[j][i] for j in range(k)] + [target[i]] for i in range(height)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, height) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        s = ctx.inv(aug[r][col])
        aug[r] = [ctx.mul(s, x) for x in aug[r]]
        for i in range(height):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    # consistency: rows below the pivots must be all-zero
    for i in range(r, height):
        if aug[i][k] != 0:
            return None
    coeffs = [0] * k
    for row_i, col in enumerate(pivots):
        coeffs[col] = aug[row_i][k]
    return coeffs


def mat_mul(ctx: FieldCtx, A, B):
    """Exact matrix product over the field; A is r x s, B is s x t."""
    s = len(B)
    t = len(B[0])
    out = []
    for row in A:
        new = []
        for j in range(t):
            acc = 0
            for k in range(s):
                acc = ctx.add(acc, ctx.mul(row[k], B[k][j]))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_inv3(ctx: FieldCtx, M):
    """Inverse of a 3x3 matrix over the field; raises ValueError if singular."""
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(3)] for i in range(3)]
    for col in range(3):
        piv = next((i for i in range(col, 3) if aug[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        s = ctx.inv(aug[col][col])
        aug[col] = [ctx.mul(s, x) for x in aug[col]]
        for i in range(3):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(aug[i], aug[col])]
    return tuple(tuple(row[3:]) for row in aug)
