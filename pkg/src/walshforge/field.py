"""Exact arithmetic in GF(2^n) for 1 <= n <= 20.

Elements are plain Python ints in [0, 2^n): the binary digits of an int are
the little-endian polynomial-basis coordinates of the element, so 0 and 1
are the additive and multiplicative identities and 2 is the class of x
(written alpha below).  Addition is XOR.  A :class:`FiniteField` instance
carries the modulus and the multiplication machinery; it is immutable after
construction and safe to share between threads.

Multiplication uses log/antilog tables for n <= 16 and carry-less
shift-reduce above that.  The canonical modulus for each degree is the
classic lowest-weight primitive polynomial, so element encodings are
reproducible across runs and machines; any user-supplied modulus is checked
for irreducibility and primitivity at construction time.

A thin :class:`FieldElement` wrapper with operator overloading is provided
for formula-heavy call sites; all bulk computations work on raw ints and
numpy tables.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NonDivisorSubfield,
    NonPrimitiveModulus,
    NotCoprime,
    OddDegree,
    OmegaInSubfield,
    ReducibleModulus,
    UnsupportedDegree,
    ZeroInput,
)

# Lowest-weight primitive polynomial per degree, bit i = coefficient of x^i.
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    1: 0b11,                    # x + 1
    2: 0b111,                   # x^2 + x + 1
    3: 0b1011,                  # x^3 + x + 1
    4: 0b10011,                 # x^4 + x + 1
    5: 0b100101,                # x^5 + x^2 + 1
    6: 0b1000011,               # x^6 + x + 1
    7: 0b10000011,              # x^7 + x + 1
    8: 0b100011101,             # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,            # x^9 + x^4 + 1
    10: 0b10000001001,          # x^10 + x^3 + 1
    11: 0b100000000101,         # x^11 + x^2 + 1
    12: 0b1000001010011,        # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,       # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,      # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,     # x^15 + x + 1
    16: 0b10001000000001011,    # x^16 + x^12 + x^3 + x + 1
    17: 0b100000000000001001,   # x^17 + x^3 + 1
    18: 0b1000000000010000001,  # x^18 + x^7 + 1
    19: 0b10000000000000100111,  # x^19 + x^5 + x^2 + x + 1
    20: 0b100000000000000001001,  # x^20 + x^3 + 1
}

MAX_DEGREE = 20
_TABLE_DEGREE_CUTOFF = 16  # log/antilog tables at or below, shift-reduce above


def modular_inverse(a: int, modulus: int) -> int:
    """Inverse of ``a`` modulo ``modulus`` in [1, modulus)."""
    try:
        return pow(a, -1, modulus)
    except ValueError as exc:
        raise NotCoprime(f"{a} has no inverse modulo {modulus}") from exc


def _factorize(n: int) -> list[int]:
    """Distinct prime factors by trial division (inputs stay near 2^20)."""
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    return primes


# --- polynomial arithmetic over GF(2), polynomials packed into ints -----

def _gf2_polymod(a: int, mod: int) -> int:
    ml = mod.bit_length()
    while a.bit_length() >= ml:
        a ^= mod << (a.bit_length() - ml)
    return a


def _gf2_polymulmod(a: int, b: int, mod: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a = _gf2_polymod(a << 1, mod)
    return _gf2_polymod(r, mod)


def _gf2_polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_polymod(a, b)
    return a


def _is_irreducible(poly: int, n: int) -> bool:
    """Degree-n poly over GF(2): x^(2^n) == x mod poly and, for every prime
    divisor q of n, gcd(x^(2^(n/q)) - x, poly) == 1."""
    if poly.bit_length() != n + 1:
        return False
    x = _gf2_polymod(0b10, poly)
    t = x
    powers = {}
    for j in range(1, n + 1):
        t = _gf2_polymulmod(t, t, poly)
        powers[j] = t
    if powers[n] != x:
        return False
    for q in _factorize(n):
        if _gf2_polygcd(powers[n // q] ^ x, poly) != 1:
            return False
    return True


class FiniteField:
    """The field GF(2^n) with a fixed primitive modulus.

    Parameters
    ----------
    n : int
        Extension degree, 1 <= n <= 20.
    modulus : int, optional
        (n+1)-bit pattern of an irreducible polynomial with x primitive.
        Defaults to the canonical entry of ``PRIMITIVE_POLYNOMIALS``.
    """

    def __init__(self, n: int, modulus: int | None = None):
        if not isinstance(n, int) or not 1 <= n <= MAX_DEGREE:
            raise UnsupportedDegree(f"extension degree must be in 1..{MAX_DEGREE}, got {n!r}")
        if modulus is None:
            modulus = PRIMITIVE_POLYNOMIALS[n]
        self.n = n
        self.order = 1 << n
        self.mult_order = self.order - 1
        self.modulus = int(modulus)
        if not _is_irreducible(self.modulus, n):
            raise ReducibleModulus(
                f"0x{self.modulus:x} is not an irreducible degree-{n} polynomial over GF(2)")
        self.alpha = 2 if n > 1 else 1  # the class of x
        self._order_primes = _factorize(self.mult_order) if self.mult_order > 1 else []
        if self._raw_order(self.alpha) != self.mult_order:
            raise NonPrimitiveModulus(
                f"x has order {self._raw_order(self.alpha)} != {self.mult_order} "
                f"modulo 0x{self.modulus:x}")
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if n <= _TABLE_DEGREE_CUTOFF:
            self._build_tables()
        self._np_cache: dict = {}

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.n, self.modulus) == (other.n, other.modulus)

    def __hash__(self):
        return hash((self.n, self.modulus))

    def __repr__(self):
        return f"FiniteField(n={self.n}, modulus=0x{self.modulus:x})"

    # -- construction helpers ----------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        p = 0
        while b:
            if b & 1:
                p ^= a
            b >>= 1
            a <<= 1
            if a & self.order:
                a ^= self.modulus
        return p

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return r

    def _raw_order(self, a: int) -> int:
        order = self.mult_order
        for p in self._order_primes:
            while order % p == 0 and self._pow_raw(a, order // p) == 1:
                order //= p
        return order

    def _build_tables(self):
        exp = [0] * (2 * max(self.mult_order, 1))
        log = [0] * self.order
        v = 1
        for i in range(self.mult_order):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, self.alpha)
        for i in range(self.mult_order, len(exp)):
            exp[i] = exp[i - self.mult_order]
        self._exp, self._log = exp, log

    # -- scalar arithmetic ---------------------------------------------------

    def check_element(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldMismatch(f"{a} is not an element of GF(2^{self.n})")
        return a

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        if self._exp is not None:
            return self._exp[self.mult_order - self._log[a]]
        return self._pow_raw(a, self.mult_order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a^e with e any integer.

        Exponents are reduced modulo 2^n - 1 for nonzero bases, matching
        evaluation of the monomial x^e over the whole field; 0^0 = 1 and
        0^e = 0 for e > 0.  Negative exponents of zero raise.
        """
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        if self.mult_order == 1:
            return 1
        e %= self.mult_order
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % self.mult_order]
        return self._pow_raw(a, e)

    def frob(self, a: int, j: int = 1) -> int:
        """Frobenius power a^(2^j)."""
        return self.pow(a, 1 << (j % self.n)) if a else 0

    def conj(self, a: int, m: int | None = None) -> int:
        """Conjugate over the index-2 subfield: a^(2^m) with n = 2m."""
        if m is None:
            if self.n % 2:
                raise OddDegree(f"conjugation needs n = 2m, got n = {self.n}")
            m = self.n // 2
        if 2 * m != self.n:
            raise OddDegree(f"conjugation needs n = 2m, got n = {self.n}, m = {m}")
        return self.frob(a, m)

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroInput("zero has no multiplicative order")
        order = self.mult_order
        for p in self._order_primes:
            while order % p == 0 and self.pow(a, order // p) == 1:
                order //= p
        return order

    def elements(self) -> range:
        return range(self.order)

    def nonzero_elements(self) -> range:
        return range(1, self.order)

    # -- traces and subfields -------------------------------------------------

    def trace(self, a: int, m: int = 1) -> int:
        """Trace from GF(2^n) onto GF(2^m): a + a^(2^m) + ... ; needs m | n."""
        if m <= 0 or self.n % m:
            raise NonDivisorSubfield(f"{m} does not divide n = {self.n}")
        acc = a
        t = a
        for _ in range(self.n // m - 1):
            t = self.frob(t, m)
            acc ^= t
        return acc

    def trace_bit(self, a: int) -> int:
        """Absolute trace Tr_n(a) in {0, 1}."""
        return self.trace(a, 1)

    def subfield_trace_bit(self, a: int, m: int) -> int:
        """Absolute trace of GF(2^m) applied to a subfield element.

        ``a`` must lie in the GF(2^m) subfield; the result is the m-term sum
        a + a^2 + ... + a^(2^(m-1)), which is how the absolute character of
        the subfield is evaluated inside the big field.
        """
        if m <= 0 or self.n % m:
            raise NonDivisorSubfield(f"{m} does not divide n = {self.n}")
        if not self.in_subfield(a, m):
            raise FieldMismatch(f"element {a} is not in the GF(2^{m}) subfield")
        acc = a
        t = a
        for _ in range(m - 1):
            t = self.sqr(t)
            acc ^= t
        if acc not in (0, 1):
            raise AssertionError("subfield trace escaped GF(2)")
        return acc

    def in_subfield(self, a: int, d: int) -> bool:
        """True iff a lies in the GF(2^d) subfield (a^(2^d) == a)."""
        if d <= 0 or self.n % d:
            raise NonDivisorSubfield(f"{d} does not divide n = {self.n}")
        return self.frob(a, d) == a

    def subfield_embed(self, d: int) -> int:
        """Generator alpha^((2^n-1)/(2^d-1)) of the GF(2^d) subgroup."""
        if d <= 0 or self.n % d:
            raise NonDivisorSubfield(f"{d} does not divide n = {self.n}")
        return self.pow(self.alpha, self.mult_order // ((1 << d) - 1))

    def subfield_elements(self, d: int) -> list[int]:
        """All 2^d elements of the GF(2^d) subfield, zero first."""
        g = self.subfield_embed(d)
        out = [0, 1]
        v = g
        while v != 1:
            out.append(v)
            v = self.mul(v, g)
        if len(out) != (1 << d):
            raise AssertionError("subfield enumeration came out short")
        return out

    # -- unit circle -------------------------------------------------------

    def unit_circle(self, m: int) -> "UnitCircle":
        """The (2^m+1)-element subgroup {z : z^(2^m+1) = 1}, n = 2m.

        Elements are listed as consecutive powers of alpha^(2^m-1).
        """
        if 2 * m != self.n:
            raise OddDegree(f"unit circle needs n = 2m, got n = {self.n}, m = {m}")
        g = self.pow(self.alpha, (1 << m) - 1)
        elems = [1]
        v = g
        while v != 1:
            elems.append(v)
            v = self.mul(v, g)
        if len(elems) != (1 << m) + 1:
            raise AssertionError("unit circle has wrong cardinality")
        return UnitCircle(field=self, m=m, bits=tuple(elems))

    def polar_decompose(self, x: int, m: int) -> tuple[int, int]:
        """Unique (y, z) with x = y*z, y in GF(2^m)*, z on the unit circle."""
        if 2 * m != self.n:
            raise OddDegree(f"polar decomposition needs n = 2m, got n = {self.n}, m = {m}")
        if x == 0:
            raise ZeroInput("polar decomposition is defined on nonzero elements")
        norm = self.mul(x, self.frob(x, m))      # x^(2^m+1) = y^2
        y = self.frob(norm, self.n - 1)          # square root
        z = self.div(x, y)
        return y, z

    def mobius_param(self, t: int, omega: int) -> int:
        """(t + omega) / (t + conj(omega)); sweeps the unit circle minus 1."""
        if self.n % 2:
            raise OddDegree(f"needs n = 2m, got n = {self.n}")
        m = self.n // 2
        if self.in_subfield(omega, m):
            raise OmegaInSubfield("omega must lie outside GF(2^m)")
        return self.div(t ^ omega, t ^ self.frob(omega, m))

    # -- numpy bulk tables ----------------------------------------------------

    def _np(self, key, builder):
        tab = self._np_cache.get(key)
        if tab is None:
            tab = builder()
            tab.setflags(write=False)
            self._np_cache[key] = tab
        return tab

    @property
    def exp_np(self) -> np.ndarray:
        if self._exp is None:
            raise UnsupportedDegree(f"no log tables above n = {_TABLE_DEGREE_CUTOFF}")
        return self._np("exp", lambda: np.array(self._exp, dtype=np.int64))

    @property
    def log_np(self) -> np.ndarray:
        if self._log is None:
            raise UnsupportedDegree(f"no log tables above n = {_TABLE_DEGREE_CUTOFF}")
        return self._np("log", lambda: np.array(self._log, dtype=np.int64))

    def mono_table(self, coeff: int, e: int) -> np.ndarray:
        """Table t with t[x] = coeff * x^e for every field element x."""
        self.check_element(coeff)
        q, M = self.order, self.mult_order
        t = np.zeros(q, dtype=np.int64)
        if coeff == 0:
            return t
        if e == 0:
            t[:] = coeff
            return t
        if self._exp is None:
            for x in range(1, q):
                t[x] = self.mul(coeff, self.pow(x, e))
            return t
        em = e % M
        xs = np.arange(1, q)
        if em == 0:
            t[1:] = coeff
        else:
            t[1:] = self.exp_np[(self.log_np[xs] * em + self._log[coeff]) % M]
        return t

    def poly_table(self, monomials) -> np.ndarray:
        """Pointwise table of sum(coeff * x^e) over (coeff, e) pairs."""
        t = np.zeros(self.order, dtype=np.int64)
        for coeff, e in monomials:
            t ^= self.mono_table(coeff, e)
        return t

    def poly_on_points(self, points: np.ndarray, monomials) -> np.ndarray:
        """Like :meth:`poly_table` but on an arbitrary array of points."""
        points = np.asarray(points, dtype=np.int64)
        out = np.zeros(points.shape, dtype=np.int64)
        if self._exp is None:
            for idx, x in enumerate(points.tolist()):
                acc = 0
                for coeff, e in monomials:
                    acc ^= self.mul(coeff, self.pow(x, e))
                out[idx] = acc
            return out
        M = self.mult_order
        nz = points != 0
        logs = self.log_np[points[nz]]
        for coeff, e in monomials:
            if coeff == 0:
                continue
            if e == 0:
                out ^= coeff
                continue
            em = e % M
            term = np.zeros(points.shape, dtype=np.int64)
            if em == 0:
                term[nz] = coeff
            else:
                term[nz] = self.exp_np[(logs * em + self._log[coeff]) % M]
            out ^= term
        return out

    def dlog(self, a: int) -> int:
        """Discrete log base alpha of a nonzero element."""
        if a == 0:
            raise ZeroInput("zero has no discrete logarithm")
        if self._log is not None:
            return self._log[a]
        v = 1
        for j in range(self.mult_order):
            if v == a:
                return j
            v = self.mul(v, self.alpha)
        raise AssertionError("element not reached by the generator")

    def scale_table(self, a: int) -> np.ndarray:
        """Table t with t[x] = a*x."""
        return self.mono_table(a, 1)

    @property
    def trace_bits(self) -> np.ndarray:
        """uint8 table of the absolute trace of every element."""
        def build():
            if self._exp is None:
                return np.array([self.trace_bit(x) for x in range(self.order)], dtype=np.uint8)
            xs = np.arange(self.order, dtype=np.int64)
            acc = xs.copy()
            t = xs.copy()
            logs = self.log_np
            for _ in range(self.n - 1):
                nz = t != 0
                t[nz] = self.exp_np[(2 * logs[t[nz]]) % self.mult_order]
                acc ^= t
            if not np.all((acc == 0) | (acc == 1)):
                raise AssertionError("trace table escaped GF(2)")
            return acc.astype(np.uint8)
        return self._np("trace_bits", build)

    @property
    def dual_index_table(self) -> np.ndarray:
        """Bit-index relabeling d with Tr(g*x) = parity(d[g] & x) for all x.

        d[g] packs the absolute traces of g times the polynomial basis; it is
        a GF(2)-linear bijection of the index range, which lets the field
        Walsh transform be computed with the plain dyadic fast transform.
        """
        def build():
            d = np.zeros(self.order, dtype=np.int64)
            tr = self.trace_bits
            for i in range(self.n):
                d |= tr[self.scale_table(1 << i)].astype(np.int64) << i
            if np.unique(d).size != self.order:
                raise AssertionError("trace form is degenerate")
            return d
        return self._np("dual", build)


@functools.lru_cache(maxsize=None)
def field_new(n: int, modulus: int | None = None) -> FiniteField:
    """Shared, validated field context (cached per (n, modulus))."""
    return FiniteField(n, modulus)


def parse_field_text(text: str) -> FiniteField:
    """Parse the ``n=<int> modulus=0x<hex>`` field description."""
    n = None
    modulus = None
    for tok in text.split():
        key, _, val = tok.partition("=")
        if not val:
            raise UnsupportedDegree(f"malformed field token {tok!r}")
        if key == "n":
            n = int(val)
        elif key == "modulus":
            modulus = int(val, 16)
        else:
            raise UnsupportedDegree(f"unknown field key {key!r}")
    if n is None:
        raise UnsupportedDegree("field text needs n=<int>")
    return field_new(n, modulus)


def field_text(field: FiniteField) -> str:
    return f"n={field.n} modulus=0x{field.modulus:x}"


@dataclass(frozen=True)
class UnitCircle:
    """Cyclic subgroup of order 2^m + 1 inside GF(2^2m)."""

    field: FiniteField
    m: int
    bits: tuple[int, ...]

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __contains__(self, x: int) -> bool:
        return x in set(self.bits)


@dataclass(frozen=True)
class FieldElement:
    """One element bound to its field, with operator sugar.

    Arithmetic between elements of different fields raises
    :class:`FieldMismatch`.  Raw ints on the right-hand side are accepted
    and interpreted in this element's field.
    """

    field: FiniteField
    bits: int

    def __post_init__(self):
        self.field.check_element(self.bits)

    def _peer(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.bits
        if isinstance(other, int):
            return self.field.check_element(other)
        return NotImplemented

    def __add__(self, other):
        b = self._peer(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.bits ^ b)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        b = self._peer(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.bits, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._peer(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.bits, b))

    def __rtruediv__(self, other):
        b = self._peer(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(b, self.bits))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.bits, e))

    def __bool__(self):
        return self.bits != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.bits))

    def conj(self, m: int | None = None) -> "FieldElement":
        return FieldElement(self.field, self.field.conj(self.bits, m))

    def frob(self, j: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frob(self.bits, j))

    def trace(self, m: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.trace(self.bits, m))

    def in_subfield(self, d: int) -> bool:
        return self.field.in_subfield(self.bits, d)

    def __repr__(self):
        return f"GF(2^{self.field.n}):0x{self.bits:x}"
