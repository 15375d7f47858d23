"""Exact arithmetic in GF(p^m) for small prime powers.

Elements are canonical integers in [0, q): the integer with base-p digits
(c0, c1, ..., c_{m-1}) stands for the polynomial c0 + c1*x + ... reduced
modulo a fixed irreducible polynomial.  A FieldCtx fixes p, m, the modulus
and a primitive element; every operation takes and returns canonical
integers, so serialized values are plain ints.

The modulus is the monic irreducible polynomial of degree m with the
smallest integer encoding, and the primitive element is the smallest
generator of the multiplicative group.  Two contexts built with the same
(p, m) therefore agree everywhere, and constructions are reproducible
across runs and machines.
"""

from __future__ import annotations

import os


class NonPrimeCharacteristic(ValueError):
    pass


class SizeCapExceeded(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


DEFAULT_SIZE_CAP = 1 << 20

# exp/log tables are built up to this field size; beyond it multiplication
# falls back to polynomial arithmetic (correct, just slower)
_TABLE_CAP = 1 << 12

# dense add tables for extension fields are only worth it when tiny
_ADD_TABLE_CAP = 1 << 9


def size_cap() -> int:
    """Field-size cap; OVAL_SRR_CAP in the environment overrides the default."""
    raw = os.environ.get("OVAL_SRR_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    return int(raw)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """Immutable arithmetic context for GF(p^m).

    Operations validate that their arguments are canonical integers of this
    field and raise FieldMismatch otherwise.  The context is safe to share
    between threads: everything is computed at construction time.
    """

    __slots__ = (
        "p", "m", "q", "modulus", "primitive",
        "_exp", "_log", "_add_table", "_mul_table",
    )

    def __init__(self, p: int, m: int):
        if not isinstance(p, int) or not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p!r} is not prime")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"extension degree must be a positive integer, got {m!r}")
        q = p ** m
        if q > size_cap():
            raise SizeCapExceeded(f"q = {p}^{m} = {q} exceeds the cap {size_cap()}")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = self._find_modulus()
        self.primitive = self._find_primitive()
        self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _digits(self, a: int, width: int) -> list[int]:
        out = []
        for _ in range(width):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, digits) -> int:
        a = 0
        for d in reversed(digits):
            a = a * self.p + d
        return a

    def _poly_divmod(self, num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
        # den is monic; coefficients ascending
        p = self.p
        rem = list(num)
        dn = len(den) - 1
        quo = [0] * max(len(rem) - dn, 0)
        for i in range(len(rem) - dn - 1, -1, -1):
            c = rem[i + dn] % p
            if c:
                quo[i] = c
                for j, d in enumerate(den):
                    rem[i + j] = (rem[i + j] - c * d) % p
        while rem and rem[-1] == 0:
            rem.pop()
        return quo, rem

    def _is_irreducible(self, poly: list[int]) -> bool:
        # trial division by every monic polynomial of degree 1 .. deg/2
        deg = len(poly) - 1
        for d in range(1, deg // 2 + 1):
            for low in range(self.p ** d):
                div = self._digits(low, d) + [1]
                _, rem = self._poly_divmod(poly, div)
                if not rem:
                    return False
        return True

    def _find_modulus(self) -> tuple[int, ...]:
        if self.m == 1:
            return (0, 1)
        for low in range(self.p ** self.m):
            poly = self._digits(low, self.m) + [1]
            if self._is_irreducible(poly):
                return tuple(poly)
        raise RuntimeError(f"no irreducible polynomial of degree {self.m} over GF({self.p})")

    def _mul_poly(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        p = self.p
        da = self._digits(a, self.m)
        db = self._digits(b, self.m)
        conv = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        _, rem = self._poly_divmod(conv, list(self.modulus))
        return self._undigits(rem + [0] * (self.m - len(rem)))

    def _pow_poly(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_poly(r, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return r

    def _find_primitive(self) -> int:
        order = self.q - 1
        factors = prime_factors(order)
        for a in range(1, self.q):
            if all(self._pow_poly(a, order // f) != 1 for f in factors):
                return a
        raise RuntimeError("no primitive element found")  # unreachable for a field

    def _build_tables(self) -> None:
        self._exp = None
        self._log = None
        self._add_table = None
        self._mul_table = None
        if self.q <= _TABLE_CAP:
            exp = [1] * (self.q - 1)
            for i in range(1, self.q - 1):
                exp[i] = self._mul_poly(exp[i - 1], self.primitive)
            log = [0] * self.q
            for i, v in enumerate(exp):
                log[v] = i
            self._exp = exp
            self._log = log
        if self.m > 1 and self.q <= _ADD_TABLE_CAP:
            self._add_table = [
                [self._add_poly(a, b) for b in range(self.q)] for a in range(self.q)
            ]
        if self.q <= _ADD_TABLE_CAP:
            self._mul_table = [
                [self._mul_raw(a, b) for b in range(self.q)] for a in range(self.q)
            ]

    def _add_poly(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.m):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _mul_raw(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    # -- public operations ---------------------------------------------------

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise FieldMismatch(f"{a!r} is not a canonical element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_poly(a, b)

    def neg(self, a: int) -> int:
        self.check(a)
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.m):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in {self!r}")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._pow_poly(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        self.check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_poly(a, e)

    def is_square(self, a: int) -> bool:
        """Quadratic-residue test; every element of an even-order field is a square."""
        self.check(a)
        if self.p == 2:
            return True
        if a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def elements(self) -> range:
        return range(self.q)

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def modulus_int(self) -> int:
        """The modulus encoded as a single base-p integer (used in file headers)."""
        return self._undigits(list(self.modulus))

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


_CACHE: dict[tuple[int, int], FieldCtx] = {}


def field_new(p: int, m: int = 1) -> FieldCtx:
    """Construct (or reuse) the canonical GF(p^m) context."""
    key = (p, m)
    ctx = _CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(p, m)
        _CACHE[key] = ctx
    return ctx


def field_for_order(q: int) -> FieldCtx:
    """Context for GF(q), factoring q = p^m; rejects non-prime-powers."""
    if not isinstance(q, int) or q < 2:
        raise NonPrimeCharacteristic(f"{q!r} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p = fs[0]
    m = 0
    n = q
    while n > 1:
        n //= p
        m += 1
    if p ** m != q:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_new(p, m)
