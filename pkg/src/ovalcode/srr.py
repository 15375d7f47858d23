"""Service-rate regions over exact rationals.

Two independent routes to every region claim live here.  The explicit
descriptions (the standard simplex of edge n/2 for the oval system, the
as-printed closed form for systematic matrices) are plain predicates; the
ground truth is an exact LP feasibility oracle built directly from the
definition of a supported demand vector: nonnegative rates per recovery
set, per-object totals equal to the demand, per-server load at most 1.

The oracle never just answers yes/no.  A feasible verdict carries an
allocation witness and an infeasible verdict carries a Farkas certificate
(prices y >= 0 per server and z per object with z_i <= sum of y over every
recovery set of i, and z . lambda > sum(y)); both are re-verified by small
independent checkers before being returned, so a wrong answer cannot
survive.  Certificates and witnesses are also what make grid sweeps cheap:
a certificate refutes every later point with z . lambda > sum(y), and a
witness supports every componentwise-smaller point after exact rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd as _gcd

_MAX_LP_VARS = 100_000
_MAX_PIVOTS = 50_000
_PRICE_BATCH = 25


class OutsideRegion(ValueError):
    pass


class ZeroDemand(ValueError):
    pass


class ProblemTooLarge(ValueError):
    pass


class UndecidableAtResolution(RuntimeError):
    pass


Rate = tuple[Fraction, Fraction, Fraction]


def rate_vector(values) -> Rate:
    """Exact nonnegative demand triple."""
    vals = tuple(Fraction(v) for v in values)
    if len(vals) != 3:
        raise ValueError(f"expected 3 rates, got {len(vals)}")
    if any(v < 0 for v in vals):
        raise ValueError(f"rates must be nonnegative, got {vals}")
    return vals


@dataclass(frozen=True)
class ServiceSystem:
    """Per-object recovery sets (1-based server indices) over n servers."""

    n: int
    sets: tuple[tuple[frozenset[int], ...], ...]

    @classmethod
    def from_sets(cls, sets, n: int) -> "ServiceSystem":
        return cls(n=n, sets=tuple(tuple(s) for s in sets))

    @classmethod
    def from_generator(cls, gm) -> "ServiceSystem":
        from .construct import minimal_recovery_sets

        return cls.from_sets(
            [minimal_recovery_sets(gm, obj) for obj in (1, 2, 3)], gm.n
        )

    @classmethod
    def from_matrix(cls, rows, ctx) -> "ServiceSystem":
        from .construct import minimal_recovery_sets

        return cls.from_sets(
            [minimal_recovery_sets(rows, obj, ctx=ctx) for obj in (1, 2, 3)],
            len(rows[0]),
        )

    def total_sets(self) -> int:
        return sum(len(s) for s in self.sets)


@dataclass
class Allocation:
    """Nonnegative rate per (object, recovery set); only nonzero entries stored."""

    n: int
    entries: dict[tuple[int, frozenset[int]], Fraction] = field(default_factory=dict)

    def object_totals(self) -> Rate:
        totals = [Fraction(0)] * 3
        for (obj, _), v in self.entries.items():
            totals[obj - 1] += v
        return tuple(totals)

    def server_loads(self) -> list[Fraction]:
        loads = [Fraction(0)] * self.n
        for (_, servers), v in self.entries.items():
            for j in servers:
                loads[j - 1] += v
        return loads

    def to_json_obj(self) -> list[dict]:
        items = sorted(
            self.entries.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1]))
        )
        return [
            {
                "object": obj,
                "set": sorted(servers),
                "rate_num": v.numerator,
                "rate_den": v.denominator,
            }
            for (obj, servers), v in items
        ]


def verify_allocation(alloc: Allocation, lam, system: ServiceSystem | None = None) -> None:
    """Exact check of the three feasibility conditions; raises on violation.

    Deliberately knows nothing about how the allocation was produced.
    """
    lam = rate_vector(lam)
    for (obj, servers), v in alloc.entries.items():
        if v < 0:
            raise ValueError(f"negative rate {v} on ({obj}, {sorted(servers)})")
        if system is not None and servers not in system.sets[obj - 1]:
            raise ValueError(f"{sorted(servers)} is not a recovery set of object {obj}")
    totals = alloc.object_totals()
    if totals != lam:
        raise ValueError(f"per-object totals {totals} != demand {lam}")
    for j, load in enumerate(alloc.server_loads(), start=1):
        if load > 1:
            raise ValueError(f"server {j} overloaded: {load} > 1")


@dataclass(frozen=True)
class FarkasCertificate:
    """Infeasibility proof: z . lambda > sum(y) while every set is priced >= z."""

    y: tuple[Fraction, ...]  # one per server, >= 0
    z: tuple[Fraction, Fraction, Fraction]

    def refutes(self, lam: Rate) -> bool:
        return sum(zi * li for zi, li in zip(self.z, lam)) > sum(self.y)


def verify_certificate(cert: FarkasCertificate, system: ServiceSystem) -> None:
    """Check the lambda-independent part of a certificate against a system."""
    if len(cert.y) != system.n:
        raise ValueError("certificate has the wrong number of server prices")
    if any(yj < 0 for yj in cert.y):
        raise ValueError("server prices must be nonnegative")
    for obj in (1, 2, 3):
        for servers in system.sets[obj - 1]:
            price = sum(cert.y[j - 1] for j in servers)
            if cert.z[obj - 1] > price:
                raise ValueError(
                    f"set {sorted(servers)} of object {obj} is priced below z"
                )


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Allocation | None = None
    certificate: FarkasCertificate | None = None
    used_columns: tuple = ()  # columns active in the final restricted LP


# -- phase-1 simplex over exact rationals --------------------------------------


def _phase1(columns, lam: Rate, n: int):
    """Minimize total artificial slack of the allocation equalities.

    columns: list of (object 0-based, frozenset of 1-based servers).
    Returns (sigma, x_by_column, (y_eq, y_cap)) where sigma is the optimal
    infeasibility, x_by_column the structural solution when sigma == 0, and
    the duals are taken from the final tableau.

    The tableau is kept fraction-free: demands are cleared to integers and
    every pivot uses the two-term integer update with exact division by the
    previous pivot, so entries are integers sharing one positive scale d.
    Rationals only appear when solutions and duals are read out (and every
    caller re-verifies those against the original constraints).
    """
    C = len(columns)
    rows = 3 + n
    width = C + n + 3 + 1  # structural, slack, artificial, rhs
    denom = 1
    for v in lam:
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    lam_int = [int(v * denom) for v in lam]

    tab = [[0] * width for _ in range(rows)]
    for c, (obj, servers) in enumerate(columns):
        tab[obj][c] = 1
        for j in servers:
            tab[3 + j - 1][c] = 1
    for j in range(n):
        tab[3 + j][C + j] = 1
        tab[3 + j][-1] = denom
    for i in range(3):
        tab[i][C + n + i] = 1
        tab[i][-1] = lam_int[i]

    # reduced costs with basis = (artificials, slacks): structural columns
    # price to -1, everything else to 0
    obj_row = [0] * width
    for c in range(C):
        obj_row[c] = -1
    obj_row[-1] = -sum(lam_int)

    basis = [C + n + i for i in range(3)] + [C + j for j in range(n)]
    d = 1

    pivots = 0
    while True:
        enter = None
        for c in range(width - 1):
            if obj_row[c] < 0:
                enter = c  # Bland: smallest index
                break
        if enter is None:
            break
        leave = None
        best_num = best_den = None
        for r in range(rows):
            a = tab[r][enter]
            if a > 0:
                num = tab[r][-1]
                if leave is None or num * best_den < best_num * a or (
                    num * best_den == best_num * a and basis[r] < basis[leave]
                ):
                    best_num, best_den = num, a
                    leave = r
        if leave is None:
            raise RuntimeError("phase-1 objective unbounded; inconsistent tableau")
        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise RuntimeError("pivot limit exceeded")
        piv = tab[leave][enter]
        prow = tab[leave]
        for r in range(rows):
            if r == leave:
                continue
            row = tab[r]
            f = row[enter]
            if f:
                tab[r] = [(x * piv - f * y) // d for x, y in zip(row, prow)]
            elif piv != d:
                tab[r] = [x * piv // d for x in row]
        f = obj_row[enter]
        if f:
            obj_row = [(x * piv - f * y) // d for x, y in zip(obj_row, prow)]
        elif piv != d:
            obj_row = [x * piv // d for x in obj_row]
        d = piv
        basis[leave] = enter

    sigma = Fraction(-obj_row[-1], d)
    x = None
    if sigma == 0:
        x = [Fraction(0)] * C
        for r, b in enumerate(basis):
            if b < C:
                x[b] = Fraction(tab[r][-1], d * denom)
    y_eq = tuple(1 - Fraction(obj_row[C + n + i], d) for i in range(3))
    y_cap = tuple(-Fraction(obj_row[C + j], d) for j in range(n))
    return sigma, x, (y_eq, y_cap)


def lp_feasible(lam, system: ServiceSystem, start_columns=None) -> FeasibilityResult:
    """Exact feasibility of the allocation LP, with a verified witness or certificate.

    Presolve handles demands that an aggregate capacity argument already
    refutes; otherwise a phase-1 simplex runs with column generation,
    starting from each object's smallest recovery sets (plus any caller
    supplied warm columns) and pricing in the rest on demand.
    """
    lam = rate_vector(lam)
    n = system.n
    if system.total_sets() > _MAX_LP_VARS:
        raise ProblemTooLarge(f"{system.total_sets()} variables exceed {_MAX_LP_VARS}")

    if all(v == 0 for v in lam):
        return FeasibilityResult(True, witness=Allocation(n=n))

    # object with demand but nothing to serve it
    for i in range(3):
        if lam[i] > 0 and not system.sets[i]:
            z = tuple(Fraction(1) if k == i else Fraction(0) for k in range(3))
            cert = FarkasCertificate(y=(Fraction(0),) * n, z=z)
            verify_certificate(cert, system)
            return FeasibilityResult(False, certificate=cert)

    # aggregate bound: total server work is at least sum(min-set-size * lam)
    min_sizes = [
        min((len(s) for s in system.sets[i]), default=0) for i in range(3)
    ]
    if sum(Fraction(min_sizes[i]) * lam[i] for i in range(3)) > n:
        cert = FarkasCertificate(
            y=(Fraction(1),) * n,
            z=tuple(Fraction(min_sizes[i]) for i in range(3)),
        )
        verify_certificate(cert, system)
        return FeasibilityResult(False, certificate=cert)

    all_columns = [
        (i, servers) for i in range(3) for servers in system.sets[i]
    ]
    working = [
        (i, servers)
        for i, servers in all_columns
        if len(servers) == min_sizes[i]
    ]
    if start_columns:
        seen = set(working)
        for col in start_columns:
            if col not in seen:
                working.append(col)
                seen.add(col)
    excluded = [col for col in all_columns if col not in set(working)]

    for _ in range(10_000):
        sigma, x, (y_eq, y_cap) = _phase1(working, lam, n)
        if sigma == 0:
            witness = Allocation(n=n)
            for c, (i, servers) in enumerate(working):
                if x[c] != 0:
                    witness.entries[(i + 1, servers)] = x[c]
            verify_allocation(witness, lam, system)
            return FeasibilityResult(True, witness=witness, used_columns=tuple(working))
        priced = []
        for col in excluded:
            i, servers = col
            gain = y_eq[i] + sum(y_cap[j - 1] for j in servers)
            if gain > 0:
                priced.append((gain, col))
        if not priced:
            cert = FarkasCertificate(
                y=tuple(-v for v in y_cap), z=y_eq
            )
            verify_certificate(cert, system)
            if not cert.refutes(lam):
                raise RuntimeError("simplex produced a non-refuting certificate")
            return FeasibilityResult(False, certificate=cert, used_columns=tuple(working))
        priced.sort(key=lambda t: (-t[0], t[1][0], sorted(t[1][1])))
        batch = [col for _, col in priced[:_PRICE_BATCH]]
        working.extend(batch)
        batch_set = set(batch)
        excluded = [col for col in excluded if col not in batch_set]
    raise RuntimeError("column generation did not converge")


def _scaled_witness(witness: Allocation, from_lam: Rate, to_lam: Rate) -> Allocation:
    # per-object downscaling of a feasible allocation; loads only shrink
    factors = []
    for i in range(3):
        if to_lam[i] == 0:
            factors.append(Fraction(0))
        else:
            factors.append(to_lam[i] / from_lam[i])
    out = Allocation(n=witness.n)
    for (obj, servers), v in witness.entries.items():
        nv = v * factors[obj - 1]
        if nv != 0:
            out.entries[(obj, servers)] = nv
    return out


class FeasibilityOracle:
    """lp_feasible with reusable proofs, for membership queries and grid sweeps.

    Every answer is still backed by a point-specific exact proof: either a
    pooled Farkas certificate that refutes this very demand, or an
    allocation witness (possibly rescaled from a dominating cached one)
    re-verified at this very demand.
    """

    def __init__(self, system: ServiceSystem):
        self.system = system
        self._certificates: list[FarkasCertificate] = []
        self._feasible: list[tuple[Rate, Allocation]] = []
        self._warm_columns: tuple = ()
        self.lp_calls = 0

    def result(self, lam) -> FeasibilityResult:
        lam = rate_vector(lam)
        for cert in self._certificates:
            if cert.refutes(lam):
                return FeasibilityResult(False, certificate=cert)
        # most recent first: sweeps tend to be dominated by their last insert
        for cached_lam, cached_wit in reversed(self._feasible):
            if all(li <= ci for li, ci in zip(lam, cached_lam)):
                witness = _scaled_witness(cached_wit, cached_lam, lam)
                verify_allocation(witness, lam, self.system)
                return FeasibilityResult(True, witness=witness)
        res = lp_feasible(lam, self.system, start_columns=self._warm_columns)
        self.lp_calls += 1
        if len(res.used_columns) > len(self._warm_columns):
            self._warm_columns = res.used_columns
        if res.feasible:
            self._feasible = [
                (cl, cw)
                for cl, cw in self._feasible
                if not all(ci <= li for ci, li in zip(cl, lam))
            ]
            self._feasible.append((lam, res.witness))
        elif res.certificate not in self._certificates:
            self._certificates.append(res.certificate)
        return res

    def feasible(self, lam) -> bool:
        return self.result(lam).feasible


# -- explicit regions and allocations ------------------------------------------


@dataclass(frozen=True)
class CostReport:
    cost: Fraction
    allocation: Allocation


@dataclass(eq=False)
class RegionDescription:
    """A demand region: an explicit simplex / half-space list, or oracle-backed."""

    kind: str  # "simplex" | "halfspaces" | "oracle"
    edge: Fraction | None = None
    inequalities: tuple[tuple[tuple[Fraction, Fraction, Fraction], Fraction], ...] | None = None
    vertices: tuple[Rate, ...] | None = None
    system: ServiceSystem | None = None
    _oracle: FeasibilityOracle | None = field(default=None, repr=False)

    def oracle(self) -> FeasibilityOracle:
        if self.kind != "oracle":
            raise ValueError("not an oracle-backed region")
        if self._oracle is None:
            self._oracle = FeasibilityOracle(self.system)
        return self._oracle

    def contains(self, lam) -> bool:
        lam = rate_vector(lam)
        if self.kind == "simplex":
            return sum(lam) <= self.edge
        if self.kind == "halfspaces":
            return all(
                sum(c * l for c, l in zip(coeffs, lam)) <= rhs
                for coeffs, rhs in self.inequalities
            )
        return self.oracle().feasible(lam)

    def to_json_obj(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.edge is not None:
            out["edge"] = str(self.edge)
        if self.inequalities is not None:
            out["inequalities"] = [
                {"coeffs": [str(c) for c in coeffs], "rhs": str(rhs)}
                for coeffs, rhs in self.inequalities
            ]
        if self.vertices is not None:
            out["vertices"] = [[str(x) for x in v] for v in self.vertices]
        return out


def simplex_region(edge) -> RegionDescription:
    edge = Fraction(edge)
    zero = Fraction(0)
    verts = (
        (zero, zero, zero),
        (edge, zero, zero),
        (zero, edge, zero),
        (zero, zero, edge),
    )
    return RegionDescription(kind="simplex", edge=edge, vertices=verts)


def oval_region(n: int) -> RegionDescription:
    """The region served by a size-2-partition recovery system: edge n/2."""
    if n % 2:
        raise ValueError(f"arc length must be even, got {n}")
    return simplex_region(Fraction(n, 2))


def oracle_region(system: ServiceSystem) -> RegionDescription:
    return RegionDescription(kind="oracle", system=system)


def uniform_allocation(lam, rs) -> Allocation:
    """Spread each object's demand evenly over its n/2 recovery pairs."""
    lam = rate_vector(lam)
    n = rs.n
    if sum(lam) > Fraction(n, 2):
        raise OutsideRegion(f"sum {sum(lam)} exceeds the edge {Fraction(n, 2)}")
    alloc = Allocation(n=n)
    for obj in (1, 2, 3):
        share = 2 * lam[obj - 1] / n
        if share == 0:
            continue
        for p in rs.pairs_for(obj):
            alloc.entries[(obj, frozenset(p.servers))] = share
    return alloc


def normalized_cost(alloc: Allocation) -> CostReport:
    """Downloaded-servers-per-request: sum of rate * |set| over total demand."""
    total = sum(alloc.object_totals())
    if total == 0:
        raise ZeroDemand("cost is undefined for zero total demand")
    work = sum(v * len(servers) for (_, servers), v in alloc.entries.items())
    return CostReport(cost=work / total, allocation=alloc)


def systematic_region_eq4(lam, n: int, k: int = 3) -> bool:
    """The as-printed closed-form membership test for systematic MDS matrices.

    Evaluated verbatim over exact rationals: sum_i (lam_i + k*(1 - lam_i)) <= n.
    Kept as a labeled transcription only; it disagrees with the LP oracle
    (see eq4_divergence_report), so it is never used as ground truth.
    """
    if n < 2 * k:
        raise ValueError(f"need n >= 2k, got n={n}, k={k}")
    lam = rate_vector(lam)
    return sum(li + k * (1 - li) for li in lam) <= n


# -- grids, sweeps, comparisons ------------------------------------------------


def axis_values(extent, step) -> list[Fraction]:
    extent = Fraction(extent)
    step = Fraction(step)
    count = int(extent / step)
    vals = [i * step for i in range(count + 1)]
    if vals[-1] != extent:
        vals.append(extent)
    return vals


def grid_points(extent, step) -> list[Rate]:
    vals = axis_values(extent, step)
    return [pt for pt in product(vals, repeat=3)]


def grid_feasibility(oracle: FeasibilityOracle, extent, step) -> dict[Rate, bool]:
    """Oracle verdict for every grid point, ordered to maximize proof reuse."""
    vals = axis_values(extent, step)
    out: dict[Rate, bool] = {}
    for l1 in vals:
        for l2 in vals:
            for l3 in reversed(vals):
                pt = (l1, l2, l3)
                out[pt] = oracle.feasible(pt)
    return out


@dataclass
class ComparisonReport:
    a_in_b: bool
    b_in_a: bool
    a_in_b_conclusive: bool
    b_in_a_conclusive: bool
    witness_a_not_b: Rate | None
    witness_b_not_a: Rate | None
    resolution: Fraction
    extent: Fraction
    points_checked: int

    @property
    def verdict(self) -> str:
        if self.a_in_b and self.b_in_a:
            return "equal"
        if self.a_in_b:
            return "A < B"
        if self.b_in_a:
            return "A > B"
        return "incomparable"

    def to_json_obj(self) -> dict:
        def pt(v):
            return None if v is None else [str(x) for x in v]

        return {
            "a_in_b": self.a_in_b,
            "b_in_a": self.b_in_a,
            "a_in_b_conclusive": self.a_in_b_conclusive,
            "b_in_a_conclusive": self.b_in_a_conclusive,
            "witness_a_not_b": pt(self.witness_a_not_b),
            "witness_b_not_a": pt(self.witness_b_not_a),
            "resolution": str(self.resolution),
            "extent": str(self.extent),
            "points_checked": self.points_checked,
            "verdict": self.verdict,
        }


def region_compare(
    a: RegionDescription,
    b: RegionDescription,
    resolution=Fraction(1, 6),
    extent=None,
    require_conclusive: bool = False,
) -> ComparisonReport:
    """Decide mutual containment over vertices plus a rational grid.

    Vertex checks are conclusive for a described region inside a convex one
    (every region here is convex); oracle-backed sides are otherwise only
    certified at the grid resolution.  With require_conclusive, an
    inconclusive direction raises UndecidableAtResolution instead of being
    reported with its flag.
    """
    resolution = Fraction(resolution)
    if extent is None:
        edges = [r.edge for r in (a, b) if r.edge is not None]
        if not edges:
            raise ValueError("extent is required when neither region has an edge")
        extent = max(edges)
    extent = Fraction(extent)

    candidates: list[Rate] = []
    for r in (a, b):
        if r.vertices:
            candidates.extend(r.vertices)
    for l1 in axis_values(extent, resolution):
        for l2 in axis_values(extent, resolution):
            for l3 in reversed(axis_values(extent, resolution)):
                candidates.append((l1, l2, l3))

    witness_a_not_b = None
    witness_b_not_a = None
    for pt in candidates:
        in_a = a.contains(pt)
        in_b = b.contains(pt)
        if witness_a_not_b is None and in_a and not in_b:
            witness_a_not_b = pt
        if witness_b_not_a is None and in_b and not in_a:
            witness_b_not_a = pt
        if witness_a_not_b and witness_b_not_a:
            break

    def conclusive(inner: RegionDescription, refuted: bool) -> bool:
        if refuted:
            return True  # a witness is a proof
        return inner.vertices is not None  # convex hull of checked vertices

    report = ComparisonReport(
        a_in_b=witness_a_not_b is None,
        b_in_a=witness_b_not_a is None,
        a_in_b_conclusive=conclusive(a, witness_a_not_b is not None),
        b_in_a_conclusive=conclusive(b, witness_b_not_a is not None),
        witness_a_not_b=witness_a_not_b,
        witness_b_not_a=witness_b_not_a,
        resolution=resolution,
        extent=extent,
        points_checked=len(candidates),
    )
    if require_conclusive and not (report.a_in_b_conclusive and report.b_in_a_conclusive):
        raise UndecidableAtResolution(
            f"containment not settled at resolution {resolution}"
        )
    return report


def eq4_divergence_report(n: int, system: ServiceSystem, step=Fraction(1, 6), k: int = 3) -> dict:
    """Where the as-printed systematic formula and the LP oracle disagree.

    Both predicates are evaluated on the full grid of the given step over
    [0, n/2]^3; the report lists every disagreeing point in deterministic
    grid order.
    """
    step = Fraction(step)
    extent = Fraction(n, 2)
    oracle = FeasibilityOracle(system)
    verdicts = grid_feasibility(oracle, extent, step)
    disagreements = []
    agreements = 0
    for pt in grid_points(extent, step):
        eq4 = systematic_region_eq4(pt, n, k)
        orc = verdicts[pt]
        if eq4 != orc:
            disagreements.append(
                {"point": [str(x) for x in pt], "eq4": eq4, "oracle": orc}
            )
        else:
            agreements += 1
    return {
        "n": n,
        "k": k,
        "step": str(step),
        "extent": str(extent),
        "points": len(verdicts),
        "agreements": agreements,
        "disagreement_count": len(disagreements),
        "disagreements": disagreements,
    }
