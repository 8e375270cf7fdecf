"""Exact arithmetic in GF(p), GF(q) and the cubic extension GF(q^3).

Elements of GF(q^3), q = p^r, are polynomials over GF(p) reduced modulo a
primitive polynomial of degree 3r.  GF(q) sits inside as the fixed field of
x -> x^q, so no tower of extensions is needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

# Primitive polynomials, lowest degree coefficient first, monic, degree 3r.
# q = 3 is pinned to x^3 + 2x + 1 so the printed 13x13 incidence matrix
# reproduces exactly.
PRIMITIVE_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1, 0, 1),              # x^3 + x + 1
    (3, 1): (1, 2, 0, 1),              # x^3 + 2x + 1
    (5, 1): (2, 3, 0, 1),              # x^3 + 3x + 2
    (7, 1): (2, 3, 0, 1),              # x^3 + 3x + 2
    (11, 1): (4, 1, 0, 1),             # x^3 + x + 4
    (13, 1): (6, 1, 0, 1),             # x^3 + x + 6
    (2, 2): (1, 1, 0, 0, 0, 0, 1),     # x^6 + x + 1
    (2, 3): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),  # x^9 + x^4 + 1
    (3, 2): (2, 1, 0, 0, 0, 0, 1),     # x^6 + x + 2
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, r) with q = p**r, or raise FieldError."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            r = 0
            n = q
            while n % p == 0:
                n //= p
                r += 1
            if n != 1:
                raise FieldError(f"q={q} is not a prime power")
            return p, r
    raise FieldError(f"q={q} is not a prime power")  # pragma: no cover


@dataclass(frozen=True)
class GfElem:
    ctx: "FieldCtx" = field(repr=False, compare=False)
    coeffs: tuple[int, ...]

    def __add__(self, other: "GfElem") -> "GfElem":
        return self.ctx.add(self, other)

    def __sub__(self, other: "GfElem") -> "GfElem":
        return self.ctx.sub(self, other)

    def __neg__(self) -> "GfElem":
        return self.ctx.neg(self)

    def __mul__(self, other: "GfElem") -> "GfElem":
        return self.ctx.mul(self, other)

    def __pow__(self, e: int) -> "GfElem":
        return self.ctx.pow(self, e)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GfElem) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = [f"{c}x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return "GfElem(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class FieldCtx:
    """GF(q^3) built as GF(p)[x] / <modulus_poly>, with alpha = x."""

    p: int
    r: int
    modulus_poly: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.r

    @property
    def n(self) -> int:
        """Degree of GF(q^3) over GF(p)."""
        return 3 * self.r

    @property
    def order(self) -> int:
        return self.p ** self.n

    def elem(self, coeffs) -> GfElem:
        c = [int(v) % self.p for v in coeffs]
        if len(c) > self.n:
            return self._reduce(c)
        return GfElem(self, tuple(c + [0] * (self.n - len(c))))

    def from_int(self, v: int) -> GfElem:
        """Embed an element of the prime field."""
        return self.elem([v])

    @cached_property
    def zero(self) -> GfElem:
        return self.elem([])

    @cached_property
    def one(self) -> GfElem:
        return self.elem([1])

    @cached_property
    def alpha(self) -> GfElem:
        return self.elem([0, 1])

    def _reduce(self, c: list[int]) -> GfElem:
        p, n, f = self.p, self.n, self.modulus_poly
        c = [v % p for v in c]
        for d in range(len(c) - 1, n - 1, -1):
            lead = c[d]
            if lead:
                # f is monic: subtract lead * x^(d-n) * f
                for i in range(n + 1):
                    c[d - n + i] = (c[d - n + i] - lead * f[i]) % p
        c = c[:n] + [0] * max(0, n - len(c))
        return GfElem(self, tuple(c))

    def add(self, a: GfElem, b: GfElem) -> GfElem:
        return GfElem(self, tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: GfElem, b: GfElem) -> GfElem:
        return GfElem(self, tuple((x - y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: GfElem) -> GfElem:
        return GfElem(self, tuple((-x) % self.p for x in a.coeffs))

    def mul(self, a: GfElem, b: GfElem) -> GfElem:
        prod = [0] * (2 * self.n - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def pow(self, a: GfElem, e: int) -> GfElem:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: GfElem) -> GfElem:
        if not a:
            raise ZeroDivisionError("inverse of zero in GF(q^3)")
        return self.pow(a, self.order - 2)

    def frobenius(self, a: GfElem, times: int = 1) -> GfElem:
        """a -> a^(q^times)."""
        return self.pow(a, self.q ** times)

    def trace(self, g: GfElem) -> GfElem:
        """Relative trace GF(q^3) -> GF(q): g + g^q + g^(q^2)."""
        g1 = self.frobenius(g)
        g2 = self.frobenius(g1)
        return self.add(self.add(g, g1), g2)

    def in_subfield(self, a: GfElem) -> bool:
        return self.frobenius(a) == a

    def multiplicative_order(self, a: GfElem) -> int:
        if not a:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.order - 1
        for f in prime_factors(n):
            while n % f == 0 and self.pow(a, n // f) == self.one:
                n //= f
        return n

    def powers(self, count: int) -> list[GfElem]:
        """alpha^0 .. alpha^(count-1)."""
        out = [self.one]
        for _ in range(count - 1):
            out.append(self.mul(out[-1], self.alpha))
        return out


def field_new(p: int, r: int = 1) -> FieldCtx:
    """Field context for GF(q^3), q = p**r, using the tabulated primitive polynomial."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if r < 1:
        raise FieldError(f"extension degree r={r} must be positive")
    try:
        poly = PRIMITIVE_POLYS[(p, r)]
    except KeyError:
        raise FieldError(f"no primitive polynomial tabulated for p={p}, r={r}") from None
    return FieldCtx(p, r, poly)


def field_for_q(q: int) -> FieldCtx:
    p, r = prime_power(q)
    return field_new(p, r)


def supported_q() -> list[int]:
    return sorted(p ** r for p, r in PRIMITIVE_POLYS)
