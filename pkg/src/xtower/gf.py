"""Exact arithmetic in prime fields F_p and their extensions F_{p^r}.

An element of F_{p^r} = F_p[x]/(m(x)) is the residue
c_0 + c_1*x + ... + c_{r-1}*x^{r-1} with coefficients in {0, ..., p-1}.
Internally every element is the integer code sum(c_i * p**i); coefficient
vectors are materialised only at the API boundary.  Field construction
goes through the cached factory :func:`GF`, so specs compare by identity
and arithmetic tables are shared.

Moduli default to Conway polynomials, computed on demand by the direct
search (x primitive, norm-compatible with the Conway polynomial of every
proper subfield, minimal in the alternating-sign coefficient order).
Beyond a size cutoff the modulus falls back to the smallest monic
irreducible polynomial in code order.  Either way the modulus, the
canonical generator and every root of unity derived from them are
deterministic across runs.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterator, Sequence

from .errors import (
    BadRoot,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InvalidSubfield,
    NoSuchRoot,
    XTowerError,
    ZeroArgument,
)

# Full q x q multiplication tables are built lazily for fields up to this
# order; larger fields use polynomial arithmetic per operation.
_TABLE_LIMIT = 256
# Conway search is exhaustive over candidate polynomials; past this order
# fall back to the smallest irreducible modulus.
_CONWAY_LIMIT = 1 << 16


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


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; adequate at desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# ---------------------------------------------------------------------------
# Polynomials over F_p as coefficient tuples, low degree first.


def _ptrim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _prem(a: Sequence[int], m: Sequence[int], p: int) -> tuple[int, ...]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) > dm:
        c = (a[-1] * inv_lead) % p
        if c:
            off = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[off + i] = (a[off + i] - c * mi) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    base = _prem(a, m, p)
    while e:
        if e & 1:
            result = _prem(_pmul(result, base, p), m, p)
        base = _prem(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _prem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple((c * inv) % p for c in a)
    return a


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p."""
    m = _ptrim(m)
    r = len(m) - 1
    if r < 1 or m[-1] != 1:
        return False
    x = (0, 1)
    for ell in factorize(r):
        h = _ppowmod(x, p ** (r // ell), m, p)
        h = _ptrim([(hi - xi) % p for hi, xi in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_pgcd(h, m, p)) != 1:
            return False
    h = _ppowmod(x, p**r, m, p)
    return _ptrim([(hi - xi) % p for hi, xi in itertools.zip_longest(h, x, fillvalue=0)]) == ()


def _x_has_full_order(m: tuple[int, ...], p: int, r: int) -> bool:
    n = p**r - 1
    if _ppowmod((0, 1), n, m, p) != (1,):
        return False
    for ell in factorize(n):
        if _ppowmod((0, 1), n // ell, m, p) == (1,):
            return False
    return True


@functools.lru_cache(maxsize=None)
def conway_polynomial(p: int, r: int) -> tuple[int, ...]:
    """Conway polynomial C_{p,r}, coefficients low degree first.

    Candidates f = x^r + f_{r-1} x^{r-1} + ... + f_0 are scanned in the
    standard order on the tuples a_i = (-1)^(r-i) f_i, largest index most
    significant.  The first candidate for which x is primitive and which is
    norm-compatible with C_{p,m} for every proper divisor m of r wins.
    Primitivity of x already forces irreducibility.
    """
    if p**r > _CONWAY_LIMIT:
        raise XTowerError(f"Conway search too large for p={p} r={r}")
    subs = []
    for m in _divisors(r):
        if m < r:
            subs.append((conway_polynomial(p, m), (p**r - 1) // (p**m - 1)))
    for a in itertools.product(range(p), repeat=r):
        # a = (a_{r-1}, ..., a_0); f_i = (-1)^(r-i) a_i mod p
        f = [0] * (r + 1)
        f[r] = 1
        for i in range(r):
            ai = a[r - 1 - i]
            f[i] = ai % p if (r - i) % 2 == 0 else (-ai) % p
        mod = tuple(f)
        if not _x_has_full_order(mod, p, r):
            continue
        ok = True
        for sub, exp in subs:
            y = _ppowmod((0, 1), exp, mod, p)
            acc: tuple[int, ...] = ()
            for coef in reversed(sub):
                acc = _prem(_pmul(acc, y, p), mod, p) if acc else ()
                if coef:
                    acc = _ptrim(
                        [
                            (u + v) % p
                            for u, v in itertools.zip_longest(acc, (coef,), fillvalue=0)
                        ]
                    )
            if acc != ():
                ok = False
                break
        if ok:
            return mod
    raise XTowerError(f"no Conway polynomial found for p={p} r={r}")  # unreachable


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Monic irreducible of degree r with the smallest code, fallback modulus."""
    for code in range(p**r):
        low = _digits(code, p, r)
        mod = low + (1,)
        if _is_irreducible(mod, p):
            return mod
    raise XTowerError(f"no irreducible polynomial of degree {r} over F_{p}")


def _digits(code: int, p: int, r: int) -> tuple[int, ...]:
    out = []
    for _ in range(r):
        out.append(code % p)
        code //= p
    return tuple(out)


# ---------------------------------------------------------------------------


class FieldSpec:
    """The field F_{p^r} = F_p[x]/(modulus); immutable and safely shareable.

    All arithmetic methods act on integer codes.  Use :meth:`element` or
    :meth:`from_code` for wrapped elements.
    """

    __slots__ = (
        "p",
        "r",
        "q",
        "modulus",
        "_mul_table",
        "_frob_rows",
        "_gen",
        "_inv_cache",
    )

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = modulus
        self._mul_table: list[list[int]] | None = None
        self._frob_rows: dict[int, tuple[tuple[int, ...], ...]] = {}
        self._gen: int | None = None
        self._inv_cache: dict[int, int] = {}

    def __repr__(self) -> str:
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}, {self.r})"

    def __reduce__(self):
        return (GF, (self.p, self.r, self.modulus))

    # -- codec ---------------------------------------------------------

    def encode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.r:
            raise ValueError("coefficient vector too long")
        code = 0
        for c in reversed([c % self.p for c in coeffs]):
            code = code * self.p + c
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        return _digits(code, self.p, self.r)

    # -- code arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.r == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        code, shift = 0, 1
        while a or b:
            code += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return code

    def neg(self, a: int) -> int:
        p = self.p
        if self.r == 1:
            return (-a) % p
        if p == 2:
            return a
        code, shift = 0, 1
        while a:
            code += ((p - a % p) % p) * shift
            a //= p
            shift *= p
        return code

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        table = self._mul_table
        if table is not None:
            return table[a][b]
        if self.q <= _TABLE_LIMIT:
            self._build_table()
            return self._mul_table[a][b]  # type: ignore[index]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _prem(_pmul(self.decode(a), self.decode(b), self.p), self.modulus, self.p)
        return self.encode(prod)

    def _build_table(self) -> None:
        q = self.q
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            row = table[a]
            for b in range(a, q):
                v = self._mul_poly(a, b)
                row[b] = v
                table[b][a] = v
        self._mul_table = table

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        v = self._inv_cache.get(a)
        if v is None:
            v = self.pow(a, self.q - 2)
            self._inv_cache[a] = v
        return v

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise DivisionByZero("zero to a negative power")
        e %= self.q - 1
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frob(self, a: int, k: int = 1) -> int:
        """Apply the Frobenius x -> x^(p^k), as a cached F_p-linear map."""
        k %= self.r
        if k == 0 or self.r == 1:
            return a
        rows = self._frob_rows.get(k)
        if rows is None:
            # row i = coefficient vector of (x^i)^(p^k) mod modulus
            built = []
            for i in range(self.r):
                img = _ppowmod((0, 1), i * self.p**k, self.modulus, self.p) if i else (1,)
                built.append(tuple(img) + (0,) * (self.r - len(img)))
            rows = tuple(built)
            self._frob_rows[k] = rows
        digits = self.decode(a)
        p = self.p
        out = [0] * self.r
        for i, d in enumerate(digits):
            if d:
                row = rows[i]
                for j in range(self.r):
                    out[j] = (out[j] + d * row[j]) % p
        return self.encode(out)

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ZeroArgument("order of zero")
        n = self.q - 1
        for ell, k in factorize(n).items():
            for _ in range(k):
                if self.pow(a, n // ell) == 1:
                    n //= ell
                else:
                    break
        return n

    def generator_code(self) -> int:
        """Smallest code generating the multiplicative group."""
        if self._gen is None:
            n = self.q - 1
            primes = list(factorize(n))
            for a in range(1, self.q):
                if all(self.pow(a, n // ell) != 1 for ell in primes):
                    self._gen = a
                    break
            else:  # pragma: no cover - a generator always exists
                raise XTowerError("no multiplicative generator found")
        return self._gen

    # -- wrapped elements -------------------------------------------------

    def from_code(self, code: int) -> "FieldElement":
        return FieldElement(self, code % self.q)

    def element(self, value) -> "FieldElement":
        """Coerce an integer (canonical embedding Z -> F_p), coefficient
        sequence, or FieldElement of this spec."""
        if isinstance(value, FieldElement):
            if value.spec is not self and (value.spec.p, value.spec.r, value.spec.modulus) != (
                self.p,
                self.r,
                self.modulus,
            ):
                raise FieldMismatch(f"{value!r} not in {self!r}")
            return FieldElement(self, value.code)
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        return FieldElement(self, self.encode(list(value)))

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def generator(self) -> "FieldElement":
        return FieldElement(self, self.generator_code())

    def identity_auto(self) -> "FieldAuto":
        return FieldAuto(self, 0)

    def elements(self) -> Iterator["FieldElement"]:
        for c in range(self.q):
            yield FieldElement(self, c)

    def to_json_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @staticmethod
    def from_json_dict(d: dict) -> "FieldSpec":
        return GF(d["p"], d["r"], tuple(d["modulus"]))


@functools.lru_cache(maxsize=None)
def GF(p: int, r: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """Cached field factory; equal parameters return the identical spec."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    if modulus is None:
        if p**r <= _CONWAY_LIMIT:
            modulus = conway_polynomial(p, r)
        else:
            modulus = smallest_irreducible(p, r)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree r")
        if r > 1 and not _is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
    return FieldSpec(p, r, modulus)


def same_spec(a: FieldSpec, b: FieldSpec) -> bool:
    return a is b or (a.p, a.r, a.modulus) == (b.p, b.r, b.modulus)


class FieldElement:
    """A residue in F_{p^r}; immutable, hashable, exact."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        self.spec = spec
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.decode(self.code)

    def is_zero(self) -> bool:
        return self.code == 0

    def constant_value(self) -> int:
        """The integer 0..p-1 for prime-subfield elements."""
        if self.code >= self.spec.p:
            raise ValueError(f"{self!r} is not in the prime subfield")
        return self.code

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and not same_spec(other.spec, self.spec):
                raise FieldMismatch(f"{self.spec!r} vs {other.spec!r}")
            return other.code
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub(self.code, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub(c, self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.div(self.code, c))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.div(c, self.code))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def mult_order(self) -> int:
        return self.spec.mult_order(self.code)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return same_spec(self.spec, other.spec) and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.spec.p and self.code < self.spec.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.r, self.code))

    def __repr__(self) -> str:
        if self.spec.r == 1:
            return f"F{self.spec.p}({self.code})"
        return f"F{self.spec.q}{list(self.coeffs)}"

    def to_json(self) -> list[int]:
        return list(self.coeffs)


class FieldAuto:
    """A power of the Frobenius automorphism x -> x^(p^power)."""

    __slots__ = ("spec", "power")

    def __init__(self, spec: FieldSpec, power: int):
        self.spec = spec
        self.power = power % spec.r

    def __call__(self, x: FieldElement) -> FieldElement:
        if not same_spec(x.spec, self.spec):
            raise FieldMismatch("element not in the automorphism's field")
        return FieldElement(self.spec, self.spec.frob(x.code, self.power))

    def apply_code(self, c: int) -> int:
        return self.spec.frob(c, self.power)

    def is_identity(self) -> bool:
        return self.power == 0

    def order(self) -> int:
        if self.power == 0:
            return 1
        r = self.spec.r
        from math import gcd

        return r // gcd(r, self.power)

    def compose(self, other: "FieldAuto") -> "FieldAuto":
        if not same_spec(other.spec, self.spec):
            raise FieldMismatch("automorphisms of different fields")
        return FieldAuto(self.spec, self.power + other.power)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldAuto)
            and same_spec(self.spec, other.spec)
            and self.power == other.power
        )

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.r, self.power))

    def __repr__(self) -> str:
        return f"Frob^{self.power} on {self.spec!r}"


def frobenius(spec: FieldSpec, power: int = 1) -> FieldAuto:
    return FieldAuto(spec, power)


def trace(x: FieldElement, sub_degree: int = 1) -> FieldElement:
    """Trace to the subfield of degree ``sub_degree`` over the prime field:
    sum of x^(q0^i) for q0 = p^sub_degree."""
    spec = x.spec
    if sub_degree < 1 or spec.r % sub_degree != 0:
        raise InvalidSubfield(f"degree {sub_degree} is not a subfield of {spec!r}")
    acc = x.code
    y = x.code
    for _ in range(spec.r // sub_degree - 1):
        y = spec.frob(y, sub_degree)
        acc = spec.add(acc, y)
    return FieldElement(spec, acc)


def trace_code(spec: FieldSpec, code: int, sub_degree: int = 1) -> int:
    acc = code
    y = code
    for _ in range(spec.r // sub_degree - 1):
        y = spec.frob(y, sub_degree)
        acc = spec.add(acc, y)
    return acc


def primitive_root_of_unity(spec: FieldSpec, m: int) -> FieldElement:
    """Element of exact order m: generator^((q-1)/m) for the canonical
    generator, the smallest code generating the multiplicative group."""
    if m < 1 or (spec.q - 1) % m != 0:
        raise NoSuchRoot(f"{m} does not divide {spec.q - 1}")
    if m == 1:
        return spec.one()
    g = spec.generator_code()
    return FieldElement(spec, spec.pow(g, (spec.q - 1) // m))


def quadratic_character(x: FieldElement) -> int:
    """+1 if x is a nonzero square, -1 otherwise (odd characteristic)."""
    if x.spec.p == 2:
        raise EvenCharacteristic("quadratic character needs odd characteristic")
    if x.code == 0:
        raise ZeroArgument("quadratic character of zero")
    return 1 if x.spec.pow(x.code, (x.spec.q - 1) // 2) == 1 else -1


def legendre(z: int, p: int) -> int:
    """Quadratic character of z mod p as an integer, z not divisible by p."""
    if p == 2:
        raise EvenCharacteristic("quadratic character needs odd p")
    if z % p == 0:
        raise ZeroArgument("quadratic character of zero")
    return 1 if pow(z % p, (p - 1) // 2, p) == 1 else -1


def embed_integer(n: int, spec: FieldSpec) -> FieldElement:
    """Image of the integer n under the canonical map Z -> F_{p^r}."""
    return FieldElement(spec, n % spec.p)


def gauss_sum(p: int, epsilon: FieldElement, z: int = 1) -> FieldElement:
    """theta(z) = sum over a in F_p of epsilon^(z*a^2), epsilon of exact
    order p in its field; satisfies theta(z) = chi(z) theta(1) and
    theta(1)^2 = chi(-1) p."""
    if p == 2:
        raise EvenCharacteristic("Gauss sums need odd p")
    if not is_prime(p):
        raise BadRoot(f"{p} is not prime")
    spec = epsilon.spec
    if epsilon.code == 0 or spec.pow(epsilon.code, p) != 1 or epsilon.code == 1:
        raise BadRoot(f"{epsilon!r} is not a primitive {p}-th root of unity")
    if z % p == 0:
        raise ZeroArgument("z must be nonzero mod p")
    acc = 0
    for a in range(p):
        acc = spec.add(acc, spec.pow(epsilon.code, (z * a * a) % p))
    return FieldElement(spec, acc)


def inverting_automorphism(spec: FieldSpec, epsilon: FieldElement) -> FieldAuto | None:
    """The automorphism sending epsilon to epsilon^-1, or None."""
    target = spec.inv(epsilon.code)
    for k in range(spec.r):
        if spec.frob(epsilon.code, k) == target:
            return FieldAuto(spec, k)
    return None


def skew_element(spec: FieldSpec, eta: FieldAuto) -> FieldElement:
    """Smallest-code t with t^eta = -t != 0 (basis of the eta-negated line)."""
    for c in range(1, spec.q):
        if eta.apply_code(c) == spec.neg(c):
            return FieldElement(spec, c)
    raise XTowerError("no eta-negated unit found")


# ---------------------------------------------------------------------------
# Restriction of scalars to a subfield.


def _solve_prime_system(rows: list[list[int]], rhs_dim: int, p: int) -> list[list[int]]:
    """Invert the square matrix given by ``rows`` over F_p (rows of length
    rhs_dim == len(rows)); returns the inverse as rows."""
    n = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    col = 0
    for i in range(n):
        piv = next((k for k in range(i, n) if aug[k][col] % p), None)
        while piv is None:
            col += 1
            piv = next((k for k in range(i, n) if aug[k][col] % p), None)
        aug[i], aug[piv] = aug[piv], aug[i]
        inv = pow(aug[i][col], p - 2, p)
        aug[i] = [(v * inv) % p for v in aug[i]]
        for k in range(n):
            if k != i and aug[k][col]:
                f = aug[k][col]
                aug[k] = [(v - f * w) % p for v, w in zip(aug[k], aug[i])]
        col += 1
    return [row[n:] for row in aug]


class ScalarRestriction:
    """Views F_{p^r} as a vector space over its degree-s subfield.

    The big field is spanned over the subfield image by 1, x, ..., x^(m-1)
    with m = r/s; the subfield embeds via the smallest-code root of its
    modulus.  ``coords`` writes an element in that basis, ``mult_block``
    is the m x m multiplication matrix of an element (entries in the
    subfield, row-vector convention: coords(y*a) = coords(y) @ mult_block(a)).
    """

    def __init__(self, spec: FieldSpec, sub_degree: int):
        if sub_degree < 1 or spec.r % sub_degree != 0:
            raise InvalidSubfield(f"degree {sub_degree} does not divide {spec.r}")
        self.spec = spec
        self.sub = GF(spec.p, sub_degree)
        self.s = sub_degree
        self.m = spec.r // sub_degree
        self.root = self._find_root()
        p, r = spec.p, spec.r
        cols = []
        x = spec.encode([0, 1]) if spec.r > 1 else 1
        for i in range(self.m):
            xi = spec.pow(x, i) if i else 1
            wt = 1
            for t in range(self.s):
                cols.append(list(spec.decode(spec.mul(xi, wt))))
                wt = spec.mul(wt, self.root)
        # cols[i*s + t] = F_p-vector of x^i * root^t; solve by inverting
        self._inv = _solve_prime_system(cols, r, p)
        self._block_cache: dict[int, tuple[tuple[int, ...], ...]] = {}

    def _find_root(self) -> int:
        """Smallest code in the big field that is a root of the subfield modulus."""
        if self.s == 1:
            return 1
        spec = self.spec
        mod = self.sub.modulus
        for c in range(spec.q):
            acc = 0
            for coef in reversed(mod):
                acc = spec.add(spec.mul(acc, c), coef % spec.p)
            if acc == 0:
                return c
        raise XTowerError("subfield modulus has no root (impossible)")

    def embed_code(self, c: int) -> int:
        """Subfield code -> big-field code via the chosen root."""
        spec = self.spec
        acc = 0
        for coef in reversed(self.sub.decode(c)):
            acc = spec.add(spec.mul(acc, self.root), coef)
        return acc

    def coords(self, code: int) -> tuple[int, ...]:
        """Element of the big field -> m subfield codes."""
        p = self.spec.p
        digits = self.spec.decode(code)
        sol = [0] * self.spec.r
        for j, d in enumerate(digits):
            if d:
                row = self._inv[j]
                for k in range(self.spec.r):
                    sol[k] = (sol[k] + d * row[k]) % p
        out = []
        for i in range(self.m):
            chunk = sol[i * self.s : (i + 1) * self.s]
            out.append(self.sub.encode(chunk))
        return tuple(out)

    def mult_block(self, code: int) -> tuple[tuple[int, ...], ...]:
        rows = self._block_cache.get(code)
        if rows is None:
            spec = self.spec
            x = spec.encode([0, 1]) if spec.r > 1 else 1
            built = []
            for i in range(self.m):
                xi = spec.pow(x, i) if i else 1
                built.append(self.coords(spec.mul(xi, code)))
            rows = tuple(built)
            self._block_cache[code] = rows
        return rows
