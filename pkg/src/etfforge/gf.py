"""Exact arithmetic in GF(p^m).

A field is Z_p[x] modulo a fixed monic irreducible polynomial of degree
m.  Polynomials are coefficient tuples with the constant term first, so
the tuple (c0, c1, ..., c_{m-1}) encodes c0 + c1*x + ... as the integer
c0 + c1*p + c2*p^2 + ...  The modulus is chosen deterministically: monic
degree-m candidates are scanned in ascending encoding order and the
first irreducible one wins.  The designated multiplicative generator
``alpha`` is the element of least encoding whose order is p^m - 1.
Everything downstream (constructions, serialized matrices) relies on
these two choices being reproducible.

Field order is capped at 2^20; the constructions only ever need tiny
fields and the cap keeps accidental misuse from hanging.
"""

from __future__ import annotations

import functools

MAX_FIELD_ORDER = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
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


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic
    a = list(a)
    da, dm = len(a) - 1, len(mod) - 1
    for i in range(da, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _poly_trim(a[:dm])


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        shift = len(r) - len(b)
        c = (r[-1] * inv_lead) % p
        q[shift] = c
        for j in range(len(b)):
            r[shift + j] = (r[shift + j] - c * b[j]) % p
        r = _poly_trim(r)
    return _poly_trim(q), r


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for enc in range(p**d):
            div = _encode_to_coeffs(enc, p, d) + [1]
            _, rem = _poly_divmod(poly, div, p)
            if not rem:
                return False
    return True


def _encode_to_coeffs(enc: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(enc % p)
        enc //= p
    return out


def _coeffs_to_encode(coeffs, p: int) -> int:
    enc = 0
    for c in reversed(coeffs):
        enc = enc * p + c
    return enc


class FieldElement:
    """Residue polynomial in a fixed GF(p^m), stored constant-term first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "FiniteField", coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    @property
    def encoding(self) -> int:
        return _coeffs_to_encode(self.coeffs, self.field.p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise ValueError("elements belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        f = self.field
        prod = _poly_mul(list(self.coeffs), list(other.coeffs), f.p)
        red = _poly_mod(prod, list(f.modulus), f.p)
        red = red + [0] * (f.m - len(red))
        return FieldElement(f, tuple(red))

    def inverse(self) -> "FieldElement":
        """Extended Euclid in Z_p[x] against the field modulus."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        p = f.p
        # invariant: s_i * self == r_i (mod modulus)
        r0, r1 = list(f.modulus), _poly_trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        # modulus irreducible, so the gcd r0 is a nonzero constant
        c_inv = pow(r0[0], p - 2, p)
        inv = _poly_mod([(c * c_inv) % p for c in s0], list(f.modulus), p)
        inv = inv + [0] * (f.m - len(inv))
        return FieldElement(f, tuple(inv))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        return f"FieldElement({self.encoding} in {self.field})"


class FiniteField:
    """GF(p^m) with a deterministic modulus and generator."""

    def __init__(self, p: int, m: int):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if m < 1:
            raise ValueError(f"m = {m} must be positive")
        if p**m > MAX_FIELD_ORDER:
            raise ValueError(f"field order {p**m} exceeds cap {MAX_FIELD_ORDER}")
        self.p = p
        self.m = m
        self.order = p**m
        self.modulus = self._find_modulus()
        self.zero = FieldElement(self, (0,) * m)
        self.one = FieldElement(self, tuple([1] + [0] * (m - 1)))
        self._elements: list[FieldElement] | None = None
        self.alpha = self._find_alpha()

    def _find_modulus(self) -> tuple[int, ...]:
        # scan x^m, x^m + 1, x^m + 2, ... in encoding order of the low part
        for enc in range(self.order):
            cand = _encode_to_coeffs(enc, self.p, self.m) + [1]
            if _is_irreducible(cand, self.p):
                return tuple(cand)
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def _find_alpha(self) -> FieldElement:
        target = self.order - 1
        primes = _prime_factors(target)
        for x in self.elements():
            if x.is_zero():
                continue
            if all((x ** (target // ell)) != self.one for ell in primes):
                return x
        raise AssertionError("no primitive element found")  # unreachable

    def element(self, value) -> FieldElement:
        """Element from an integer encoding or a coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise ValueError(f"encoding {value} out of range for {self}")
            return FieldElement(self, tuple(_encode_to_coeffs(value, self.p, self.m)))
        coeffs = tuple(c % self.p for c in value)
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients")
        return FieldElement(self, coeffs)

    def elements(self) -> list[FieldElement]:
        """All elements in ascending encoding order."""
        if self._elements is None:
            self._elements = [self.element(e) for e in range(self.order)]
        return self._elements

    def power_ordered_elements(self) -> list[FieldElement]:
        """Zero first, then alpha^0, alpha^1, ..., alpha^(order-2)."""
        out = [self.zero]
        x = self.one
        for _ in range(self.order - 1):
            out.append(x)
            x = x * self.alpha
        return out

    def describe(self) -> str:
        return f"GF({self.p}^{self.m}) modulus={list(self.modulus)}"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


@functools.lru_cache(maxsize=None)
def field_create(p: int, m: int) -> FiniteField:
    return FiniteField(p, m)


def primitive_element(field: FiniteField) -> FieldElement:
    return field.alpha


def _check_quadratic(field: FiniteField, q: int) -> None:
    if q * q != field.order:
        raise ValueError(f"field order {field.order} is not q^2 for q = {q}")


def frobenius(x: FieldElement, q: int) -> FieldElement:
    """x -> x^q on GF(q^2); fixes exactly the GF(q) subfield."""
    _check_quadratic(x.field, q)
    return x**q


def field_norm(x: FieldElement, q: int) -> FieldElement:
    """Norm of GF(q^2) over GF(q): x -> x^(q+1), valued in the subfield."""
    _check_quadratic(x.field, q)
    return x ** (q + 1)


def beta(field: FiniteField, q: int) -> FieldElement:
    """alpha^(q-1), a generator of the norm-one subgroup of order q+1."""
    _check_quadratic(field, q)
    return field.alpha ** (q - 1)


def prime_power_split(n: int) -> tuple[int, int]:
    """n = p^m with p prime, by trial factorization; errors otherwise."""
    if n < 2:
        raise ValueError(f"{n} is not a prime power")
    p = 2
    while p * p <= n:
        if n % p == 0:
            m = 0
            k = n
            while k % p == 0:
                k //= p
                m += 1
            if k != 1:
                raise ValueError(f"{n} is not a prime power")
            return p, m
        p += 1
    return n, 1
