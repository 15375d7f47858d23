"""Maximal arcs in PG(2, q) and their Vandermonde generator matrices.

For odd q the arc is the conic y2^2 = y1*y3 (q+1 points); for even q the
conic is extended by its nucleus (0:1:0), through which all conic tangents
pass, giving the (q+2)-point hyperoval.  Columns of the stored matrix F
are exactly the normalized point coordinates, so column j and points[j]
always agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .gf import FieldCtx, FieldMismatch
from .geom import ProjPoint, ProjLine, all_lines, det3, incident, projectivize

# invariants (oval size, no 3 collinear, classification cross-checks) are
# re-verified exhaustively at construction up to this field size
VERIFY_CAP = 16


class FieldTooSmall(ValueError):
    pass


class EvenCharacteristic(ValueError):
    pass


class NonConicOval(ValueError):
    pass


class LineKind(enum.Enum):
    EXTERNAL = "external"
    TANGENT = "tangent"
    SECANT = "secant"


class PointKind(enum.Enum):
    INTERNAL = "internal"
    ON_OVAL = "on_oval"
    EXTERNAL = "external"


@dataclass(frozen=True)
class LineClass:
    kind: LineKind
    hits: tuple[int, ...]  # 0-based indices into OvalCode.points


@dataclass(eq=False)
class OvalCode:
    """A maximal arc together with the 3 x n matrix whose columns realize it.

    Immutable after construction apart from a lazily computed tangent-line
    cache; all classification queries are pure.
    """

    ctx: FieldCtx
    n: int
    F: tuple[tuple[int, ...], ...]  # 3 rows of n canonical integers
    points: tuple[ProjPoint, ...]
    nucleus: ProjPoint | None
    conic: bool = True
    _tangents: tuple[ProjLine, ...] | None = field(default=None, init=False, repr=False)

    def column(self, j: int) -> tuple[int, int, int]:
        return (self.F[0][j], self.F[1][j], self.F[2][j])

    def point_index(self, P: ProjPoint) -> int | None:
        for j, pt in enumerate(self.points):
            if pt == P:
                return j
        return None

    def tangent_lines(self) -> tuple[ProjLine, ...]:
        if self._tangents is None:
            self._tangents = tuple(
                L for L in all_lines(self.ctx)
                if sum(incident(P, L) for P in self.points) == 1
            )
        return self._tangents


def _check_field(obj, ctx: FieldCtx) -> None:
    if obj.ctx != ctx:
        raise FieldMismatch(f"mixed fields: {obj.ctx!r} and {ctx!r}")


def vandermonde_oval(ctx: FieldCtx) -> OvalCode:
    """Build the canonical maximal-arc matrix for GF(q), q >= 4.

    Columns are (1,0,0), (1, a^t, a^(2t)) for t = 1 .. q-1 with a the
    primitive element, and (0,0,1); for even q the nucleus column (0,1,0)
    is appended so the arc reaches its maximum size q+2.
    """
    q = ctx.q
    if q < 4:
        raise FieldTooSmall(f"need q >= 4, got q = {q}")
    a = ctx.primitive
    cols: list[tuple[int, int, int]] = [(1, 0, 0)]
    for t in range(1, q):
        at = ctx.pow(a, t)
        cols.append((1, at, ctx.mul(at, at)))
    cols.append((0, 0, 1))
    nucleus = None
    if q % 2 == 0:
        nucleus = ProjPoint(ctx, (0, 1, 0))
        cols.append((0, 1, 0))
    n = len(cols)
    expected = q + 2 if q % 2 == 0 else q + 1
    if n != expected:
        raise RuntimeError(f"arc size {n} != expected {expected}")
    F = tuple(tuple(c[r] for c in cols) for r in range(3))
    points = tuple(projectivize(ctx, c) for c in cols)
    code = OvalCode(ctx=ctx, n=n, F=F, points=points, nucleus=nucleus)
    if q <= VERIFY_CAP:
        _verify_arc(code)
    return code


def _verify_arc(code: OvalCode) -> None:
    # distinct points, and no three collinear (equivalently: every 3x3 minor
    # of F is nonsingular, the MDS property)
    pts = code.points
    if len(set(pts)) != code.n:
        raise RuntimeError("arc points are not distinct")
    for i in range(code.n):
        for j in range(i + 1, code.n):
            for k in range(j + 1, code.n):
                d = det3(code.ctx, (pts[i].coords, pts[j].coords, pts[k].coords))
                if d == 0:
                    raise RuntimeError(f"columns {i},{j},{k} are collinear")


def classify_line(L: ProjLine, code: OvalCode) -> LineClass:
    """External, tangent or secant according to the exact intersection count."""
    _check_field(L, code.ctx)
    hits = tuple(j for j, P in enumerate(code.points) if incident(P, L))
    if len(hits) > 2:
        raise RuntimeError(f"line {L!r} meets the arc {len(hits)} times")
    kind = (LineKind.EXTERNAL, LineKind.TANGENT, LineKind.SECANT)[len(hits)]
    return LineClass(kind=kind, hits=hits)


def classify_point(P: ProjPoint, code: OvalCode) -> PointKind:
    """Classify by counting incident tangent lines (the ground-truth route)."""
    _check_field(P, code.ctx)
    if P in code.points:
        return PointKind.ON_OVAL
    t = sum(incident(P, L) for L in code.tangent_lines())
    if t == 0:
        return PointKind.INTERNAL
    if t == 2:
        return PointKind.EXTERNAL
    raise RuntimeError(f"off-arc point {P!r} lies on {t} tangents")


def classify_point_conic(P: ProjPoint, code: OvalCode) -> PointKind:
    """Algebraic classification for odd q: internal iff x2^2 - x1*x3 is a non-square."""
    _check_field(P, code.ctx)
    ctx = code.ctx
    if ctx.q % 2 == 0:
        raise EvenCharacteristic("the quadratic-residue test needs odd q")
    if not code.conic:
        raise NonConicOval("arc was not built from the canonical conic")
    x1, x2, x3 = P.coords
    c = ctx.sub(ctx.mul(x2, x2), ctx.mul(x1, x3))
    if c == 0:
        return PointKind.ON_OVAL
    return PointKind.EXTERNAL if ctx.is_square(c) else PointKind.INTERNAL


def internal_points(code: OvalCode) -> list[ProjPoint]:
    from .geom import all_points

    return [P for P in all_points(code.ctx) if classify_point(P, code) is PointKind.INTERNAL]


def secant_pairs_through(code: OvalCode, P: ProjPoint) -> list[tuple[int, int]]:
    """0-based arc-index pairs {a, b} whose secant passes through P."""
    _check_field(P, code.ctx)
    ctx = code.ctx
    pts = code.points
    out = []
    for a in range(code.n):
        for b in range(a + 1, code.n):
            if det3(ctx, (P.coords, pts[a].coords, pts[b].coords)) == 0:
                out.append((a, b))
    return out
