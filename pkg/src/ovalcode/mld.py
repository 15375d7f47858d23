"""Encoding, one-step majority-logic decoding, bounds, and the PIR check.

Decoding recovers message symbols, not codeword symbols: each object i has
n/2 recovery pairs with pairwise disjoint supports, every pair casts one
vote alpha*y_a + beta*y_b, and the strict majority wins.  An error in one
position touches exactly one vote per object, so up to floor((n-2)/4)
errors always leave a strict majority of clean votes.  Ties are reported,
never broken.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product

from .construct import CapExceeded, GeneratorMatrix, RecoverySystem
from .geom import rank

_DUAL_DISTANCE_CAP = 16


class DimensionMismatch(ValueError):
    pass


class InvalidParameters(ValueError):
    pass


@dataclass(frozen=True)
class DecodeResult:
    message: tuple[int | None, int | None, int | None]
    ties: tuple[int, ...] = ()  # 1-based objects with no strict majority

    @property
    def ok(self) -> bool:
        return not self.ties


@dataclass(frozen=True)
class PirReport:
    is_pir: bool
    availability: int
    per_object: tuple[int, ...]


@dataclass
class SweepReport:
    q: int
    n: int
    t_max: int
    weight: int
    patterns_tested: int = 0
    failures: list[dict] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "t_max": self.t_max,
            "weight": self.weight,
            "patterns_tested": self.patterns_tested,
            "failures": self.failures,
        }


def encode(message, gm: GeneratorMatrix) -> tuple[int, ...]:
    """Codeword m^T * G as a length-n tuple of canonical integers."""
    ctx = gm.ctx
    msg = tuple(ctx.check(x) for x in message)
    if len(msg) != 3:
        raise DimensionMismatch(f"message must have 3 symbols, got {len(msg)}")
    out = []
    for j in range(gm.n):
        acc = 0
        for r in range(3):
            acc = ctx.add(acc, ctx.mul(msg[r], gm.G[r][j]))
        out.append(acc)
    return tuple(out)


def decode_1smld(word, rs: RecoverySystem) -> DecodeResult:
    """One-step majority-logic decode over the size-2 recovery partitions."""
    ctx = rs.ctx
    y = tuple(ctx.check(v) for v in word)
    if len(y) != rs.n:
        raise DimensionMismatch(f"word length {len(y)} != n = {rs.n}")
    mul = ctx.mul
    add = ctx.add
    decoded: list[int | None] = []
    ties: list[int] = []
    for obj in (1, 2, 3):
        votes = [
            add(mul(p.coeffs[0], y[p.servers[0] - 1]), mul(p.coeffs[1], y[p.servers[1] - 1]))
            for p in rs.pairs_for(obj)
        ]
        best = max(set(votes), key=votes.count)
        if votes.count(best) * 2 > len(votes):
            decoded.append(best)
        else:
            decoded.append(None)
            ties.append(obj)
    return DecodeResult(message=tuple(decoded), ties=tuple(ties))


def mld_bound(n: int, s: int, d_dual: int) -> int:
    """Correctable-error bound floor((n-s) / (2*(d_dual-s))) for disjoint size-s groups.

    With s = 1 this is the classical codeword-symbol bound
    floor((n-1) / (2*(d_dual-1))).
    """
    if not (1 <= s < d_dual <= n):
        raise InvalidParameters(f"need 1 <= s < d_dual <= n, got s={s}, d_dual={d_dual}, n={n}")
    return (n - s) // (2 * (d_dual - s))


def pir_check(rs: RecoverySystem) -> PirReport:
    """Count pairwise-disjoint recovery sets per object; n/2 everywhere means PIR."""
    per_object = []
    disjoint = True
    for obj in (1, 2, 3):
        seen: set[int] = set()
        count = 0
        for p in rs.pairs_for(obj):
            if seen & set(p.servers):
                disjoint = False
                continue
            seen.update(p.servers)
            count += 1
        per_object.append(count)
    availability = min(per_object)
    is_pir = disjoint and all(c == rs.n // 2 for c in per_object)
    return PirReport(is_pir=is_pir, availability=availability, per_object=tuple(per_object))


def dual_distance(gm: GeneratorMatrix) -> int:
    """Minimum dual distance = size of the smallest dependent column set.

    Checked by rank tests over column subsets of size 1, 2, 3; any 4 columns
    of a rank-3 matrix are dependent, so the answer is 4 when none of the
    smaller sizes is.
    """
    n = gm.n
    if n > _DUAL_DISTANCE_CAP:
        raise CapExceeded(f"n = {n} exceeds the dual-distance cap {_DUAL_DISTANCE_CAP}")
    ctx = gm.ctx
    cols = [list(gm.column(j)) for j in range(n)]
    for size in (1, 2, 3):
        for subset in combinations(range(n), size):
            if rank(ctx, [cols[j] for j in subset]) < size:
                return size
    if n < 4:
        raise InvalidParameters("dual distance undefined for n < 4 at rank 3")
    return 4


# -- exhaustive error-injection sweeps ----------------------------------------


def all_messages(ctx) -> list[tuple[int, int, int]]:
    return [m for m in product(range(ctx.q), repeat=3)]


def seeded_messages(ctx, count: int, seed: int) -> list[tuple[int, int, int]]:
    rng = random.Random(seed)
    return [tuple(rng.randrange(ctx.q) for _ in range(3)) for _ in range(count)]


def error_patterns(n: int, q: int, weight: int):
    """Every error pattern of exactly the given weight: positions x nonzero values."""
    for positions in combinations(range(n), weight):
        for values in product(range(1, q), repeat=weight):
            yield positions, values


def exhaustive_error_sweep(gm: GeneratorMatrix, rs: RecoverySystem, weight: int, messages) -> SweepReport:
    """Decode every message under every error pattern of weight <= the given one.

    A failure is any tie or wrong decoded symbol; the report lists each with
    the pattern that caused it.
    """
    ctx = gm.ctx
    report = SweepReport(q=ctx.q, n=gm.n, t_max=mld_bound(gm.n, 2, 4), weight=weight)
    add = ctx.add
    for message in messages:
        clean = encode(message, gm)
        for w in range(weight + 1):
            for positions, values in error_patterns(gm.n, ctx.q, w):
                y = list(clean)
                for pos, val in zip(positions, values):
                    y[pos] = add(y[pos], val)
                report.patterns_tested += 1
                result = decode_1smld(y, rs)
                if result.ties or result.message != message:
                    for obj in (1, 2, 3):
                        got = result.message[obj - 1]
                        if obj in result.ties or got != message[obj - 1]:
                            report.failures.append({
                                "error_positions": [p + 1 for p in positions],
                                "error_values": list(values),
                                "object": obj,
                                "got": "tie" if obj in result.ties else got,
                                "expected": message[obj - 1],
                            })
    return report


def find_counterexample(gm: GeneratorMatrix, rs: RecoverySystem, weight: int, messages):
    """First (message, pattern) of exactly this weight that defeats the decoder, or None."""
    ctx = gm.ctx
    add = ctx.add
    for message in messages:
        clean = encode(message, gm)
        for positions, values in error_patterns(gm.n, ctx.q, weight):
            y = list(clean)
            for pos, val in zip(positions, values):
                y[pos] = add(y[pos], val)
            result = decode_1smld(y, rs)
            if result.ties or result.message != message:
                return {
                    "message": list(message),
                    "error_positions": [p + 1 for p in positions],
                    "error_values": list(values),
                    "ties": list(result.ties),
                    "decoded": ["tie" if v is None else v for v in result.message],
                }
    return None
