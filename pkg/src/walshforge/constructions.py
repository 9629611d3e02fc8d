"""Permutation families over GF(2^n) and the balanced functions they induce.

Each family is a frozen spec object carrying its field and coefficients.
``validate`` checks every side condition the family's source result states
and reports the violated clause on failure; evaluation refuses unvalidated
specs unless explicitly asked not to (the escape hatch exists for negative
tests).  ``parameterize`` turns a spec into the balanced Boolean function
whose support is the image of x -> P(x^2 + x).

Specs are immutable value objects; evaluation and parameterization are pure
and cached per spec.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from math import gcd

import numpy as np

from .boolfun import BooleanFunction
from .errors import (
    Eps1Zero,
    FieldMismatch,
    GcdConditionViolated,
    InvalidSpec,
    NotTwoToOne,
)
from .field import FieldElement, FiniteField, field_new, modular_inverse

DEFAULT_SEED = 12345


def _coeff_bits(field: FiniteField, v) -> int:
    if isinstance(v, FieldElement):
        if v.field != field:
            raise FieldMismatch(f"coefficient from {v.field!r} used in {field!r}")
        return v.bits
    return field.check_element(int(v))


def _merge_monomials(pairs, mult_order: int) -> tuple[tuple[int, int], ...]:
    """XOR-merge coefficients of exponents that coincide as functions.

    Exponents are reduced mod 2^n - 1 but a reduced value of 0 for a
    positive exponent means x^(2^n-1) (one on the units, zero at zero),
    which must stay distinct from the constant monomial x^0.
    """
    agg: dict[int, int] = {}
    for coeff, e in pairs:
        if e < 0:
            raise InvalidSpec("negative exponent in construction polynomial")
        key = e % mult_order if mult_order > 1 else e
        if key == 0 and e != 0:
            key = mult_order
        agg[key] = agg.get(key, 0) ^ coeff
    return tuple(sorted(((c, e) for e, c in agg.items() if c), key=lambda p: p[1]))


@dataclass(frozen=True)
class Validity:
    """Outcome of spec validation, naming the violated clause on failure."""

    ok: bool
    clause: str | None = None
    details: tuple[tuple[str, object], ...] = ()

    def detail(self, key, default=None):
        for k, v in self.details:
            if k == key:
                return v
        return default


def build_niho_exponent(m: int, variant: str, k: int | None = None) -> int:
    """Exponent s = e*(2^m - 1) + 1 with e a unit-circle fraction mod 2^m+1.

    one-fifth: e = 1/5 (m odd); plus(k): e = 2^k/(2^k+1) with
    gcd(2^k+1, 2^m+1) = 1; minus(k): e = 2^k/(2^k-1) with
    gcd(2^k-1, 2^m+1) = 1, 1 <= k < m.
    """
    cmod = (1 << m) + 1
    if variant == "one-fifth":
        if m % 2 == 0:
            raise GcdConditionViolated("one-fifth exponent needs m odd")
        e = modular_inverse(5, cmod)
    elif variant in ("plus", "minus"):
        if k is None or not 1 <= k < m:
            raise GcdConditionViolated(f"variant {variant} needs 1 <= k < m")
        base = (1 << k) + 1 if variant == "plus" else (1 << k) - 1
        if gcd(base, cmod) != 1:
            raise GcdConditionViolated(
                f"gcd(2^{k}{'+' if variant == 'plus' else '-'}1, 2^{m}+1) != 1")
        e = ((1 << k) * modular_inverse(base, cmod)) % cmod
    else:
        raise GcdConditionViolated(f"unknown trinomial variant {variant!r}")
    return e * ((1 << m) - 1) + 1


class ConstructionSpec:
    """Common surface of the four permutation families."""

    family = "?"
    field: FiniteField

    @property
    def n(self) -> int:
        return self.field.n

    def monomials(self) -> tuple[tuple[int, int], ...]:
        raise NotImplementedError

    def _validate(self) -> Validity:
        raise NotImplementedError

    def validate(self) -> Validity:
        return _validate_cached(self)

    def params(self) -> dict:
        raise NotImplementedError

    def text(self) -> str:
        parts = [f"family={self.family}"]
        for key, val in self.params().items():
            if val is None or key == "family":
                continue
            parts.append(f"{key}={val}")
        return " ".join(parts)


@dataclass(frozen=True)
class NihoTrinomial(ConstructionSpec):
    """P(x) = c*x + Tr over the half field of x^s, s a niho-type exponent."""

    field: FiniteField
    m: int
    variant: str
    c: int
    k: int | None = None

    family = "niho-trinomial"

    @classmethod
    def build(cls, m: int, variant: str = "one-fifth", k: int | None = None,
              c=None, field: FiniteField | None = None) -> "NihoTrinomial":
        field = field or field_new(2 * m)
        if c is None:
            c = field.subfield_embed(2)
        return cls(field=field, m=m, variant=variant, c=_coeff_bits(field, c), k=k)

    @property
    def s(self) -> int:
        return build_niho_exponent(self.m, self.variant, self.k)

    def monomials(self):
        s = self.s
        M = self.field.mult_order
        return _merge_monomials([(self.c, 1), (1, s), (1, (s << self.m) % M)], M)

    def _validate(self) -> Validity:
        m = self.m
        if self.field.n != 2 * m:
            return Validity(False, f"field degree {self.field.n} != 2m = {2 * m}")
        try:
            self.s
        except GcdConditionViolated as exc:
            return Validity(False, str(exc))
        if self.variant == "one-fifth":
            if m % 2 == 0:
                return Validity(False, "one-fifth family needs m odd")
            if not (self.field.in_subfield(self.c, 2) and self.c not in (0, 1)):
                return Validity(False, "c must lie in GF(4) \\ GF(2)")
        else:
            if self.field.in_subfield(self.c, m):
                return Validity(False, "c must lie outside GF(2^m)")
            # Being a permutation is a stated hypothesis for the plus/minus
            # variants, not a consequence of the gcd conditions; confirm it.
            if not table_is_permutation(self.field.poly_table(self.monomials())):
                return Validity(False, "P is not a permutation for this c")
        return Validity(True, details=(("s", self.s),))

    def params(self):
        return {"family": self.family, "m": self.m, "variant": self.variant,
                "k": self.k, "c": f"0x{self.c:x}"}


@dataclass(frozen=True)
class Quadrinomial(ConstructionSpec):
    """P(x) = x^(3*2^m) + a*x^(2*2^m+1) + b*x^(2^m+2) + c*x^3, n = 2m."""

    field: FiniteField
    m: int
    a: int
    b: int
    c: int

    family = "quadrinomial"

    @classmethod
    def build(cls, m: int, a, b, c, field: FiniteField | None = None) -> "Quadrinomial":
        field = field or field_new(2 * m)
        return cls(field=field, m=m, a=_coeff_bits(field, a),
                   b=_coeff_bits(field, b), c=_coeff_bits(field, c))

    def monomials(self):
        m = self.m
        M = self.field.mult_order
        return _merge_monomials(
            [(1, 3 << m), (self.a, (2 << m) + 1), (self.b, (1 << m) + 2), (self.c, 3)], M)

    def conditions(self) -> tuple[int, ...]:
        """Which of the three permutation conditions the coefficients meet."""
        F = self.field
        m = self.m
        a, b, c = self.a, self.b, self.c
        abar = F.conj(a, m)
        matched = []
        omega = F.subfield_embed(2)
        if c == 1:
            for w in (omega, F.sqr(omega)):
                wbar = F.conj(w, m)
                if b == F.mul(w, a ^ 1) ^ 1 and F.mul(wbar, abar) ^ a ^ w != 0:
                    matched.append(1)
                    break
            if b == a ^ 1 and a ^ abar ^ 1 != 0:
                matched.append(2)
        if all(F.in_subfield(v, m) for v in (a, b, c)):
            B = 1 ^ a ^ b ^ c
            if B != 0:
                A = F.mul(a, b) ^ c
                C = F.sqr(a) ^ F.sqr(b) ^ F.mul(a, c) ^ b
                tr = F.subfield_trace_bit(F.div(A, F.sqr(B)), m)
                if (C == 0 and tr == 1) or (C == F.sqr(B) and tr == 0):
                    matched.append(3)
        return tuple(matched)

    def condition_omega(self) -> int | None:
        """The omega certifying condition (1), if that is how b was formed."""
        F = self.field
        omega = F.subfield_embed(2)
        for w in (omega, F.sqr(omega)):
            if self.b == F.mul(w, self.a ^ 1) ^ 1 \
                    and F.mul(F.conj(w, self.m), F.conj(self.a, self.m)) ^ self.a ^ w != 0:
                return w
        return None

    def _validate(self) -> Validity:
        if self.field.n != 2 * self.m:
            return Validity(False, f"field degree {self.field.n} != 2m = {2 * self.m}")
        if self.m % 2 == 0:
            return Validity(False, "quadrinomial family needs m odd")
        matched = self.conditions()
        if not matched:
            return Validity(False, "coefficients satisfy none of conditions (1)-(3)")
        return Validity(True, details=(("conditions", matched),))

    def params(self):
        return {"family": self.family, "m": self.m,
                "a": f"0x{self.a:x}", "b": f"0x{self.b:x}", "c": f"0x{self.c:x}"}


@dataclass(frozen=True)
class DOProduct(ConstructionSpec):
    """P(x) = x*L(x) for one of three linearized shapes of L."""

    field: FiniteField
    m: int
    shape: int
    a: int | None = None

    family = "do"

    @classmethod
    def build(cls, n: int, m: int, shape: int, a=None,
              field: FiniteField | None = None) -> "DOProduct":
        field = field or field_new(n)
        if a is None and shape in (2, 3):
            a = field.alpha
        return cls(field=field, m=m, shape=shape,
                   a=None if a is None else _coeff_bits(field, a))

    def monomials(self):
        m = self.m
        n = self.n
        M = self.field.mult_order
        if self.shape == 1:
            pairs = [(1, (1 << m) + 1)]
        elif self.shape == 2:
            pairs = [(1, (1 << m) + 1), (self.a, (1 << (n - m)) + 1)]
        elif self.shape == 3:
            pairs = [(1, (1 << (2 * m)) + 1),
                     (self.field.pow(self.a, (1 << m) + 1), (1 << m) + 1),
                     (self.a, 2)]
        else:
            raise InvalidSpec(f"unknown DO shape {self.shape}")
        return _merge_monomials(pairs, M)

    def _validate(self) -> Validity:
        n, m = self.n, self.m
        if m < 1:
            return Validity(False, "m must be positive")
        if self.shape == 1:
            if (n // gcd(n, m)) % 2 == 0:
                return Validity(False, f"n/gcd(n,m) = {n // gcd(n, m)} must be odd")
        elif self.shape == 2:
            if (n // gcd(n, m)) % 2 == 0:
                return Validity(False, f"n/gcd(n,m) = {n // gcd(n, m)} must be odd")
            if self.a is None:
                return Validity(False, "shape 2 needs coefficient a")
            d = gcd(n, m)
            if self.field.pow(self.a, self.field.mult_order // ((1 << d) - 1)) == 1:
                return Validity(False, "a^((2^n-1)/(2^gcd(n,m)-1)) must differ from 1")
        elif self.shape == 3:
            if n != 3 * m:
                return Validity(False, f"shape 3 needs n = 3m, got n = {n}, m = {m}")
            if self.a is None:
                return Validity(False, "shape 3 needs coefficient a")
            if self.field.pow(self.a, self.field.mult_order // ((1 << m) - 1)) == 1:
                return Validity(False, "a^((2^n-1)/(2^m-1)) must differ from 1")
        else:
            return Validity(False, f"unknown DO shape {self.shape}")
        return Validity(True)

    def params(self):
        return {"family": self.family, "n": self.n, "m": self.m, "shape": self.shape,
                "a": None if self.a is None else f"0x{self.a:x}"}


@dataclass(frozen=True)
class TraceLinear(ConstructionSpec):
    """P(x) = c*x + Tr from GF(2^km) onto GF(2^m) of x^s, quadratic s."""

    field: FiniteField
    m: int
    k: int
    shape: str
    c: int
    i: int | None = None

    family = "trace-linear"

    @classmethod
    def build(cls, m: int, k: int, shape: str, i: int | None = None, c=None,
              field: FiniteField | None = None) -> "TraceLinear":
        field = field or field_new(k * m)
        if i is None and shape in ("gold", "double"):
            i = 1
        if c is None:
            if shape == "gold":
                c = field.subfield_embed(2 * m)
            else:
                c = field.subfield_embed(m)
        return cls(field=field, m=m, k=k, shape=shape, i=i, c=_coeff_bits(field, c))

    @property
    def s(self) -> int:
        m = self.m
        if self.shape == "gold":
            return (1 << self.i) * ((1 << m) + 1)
        if self.shape == "halved":
            return (1 << (2 * m - 1)) + (1 << (m - 1))
        if self.shape == "double":
            return 2 * ((1 << (self.i * m)) + 1)
        raise InvalidSpec(f"unknown trace-linear shape {self.shape!r}")

    def monomials(self):
        M = self.field.mult_order
        s = self.s
        pairs = [(self.c, 1)]
        pairs.extend((1, (s << (j * self.m)) % M or M) for j in range(self.k))
        return _merge_monomials(pairs, M)

    def _validate(self) -> Validity:
        m, k = self.m, self.k
        F = self.field
        if F.n != k * m:
            return Validity(False, f"field degree {F.n} != km = {k * m}")
        if self.shape == "gold":
            if self.i is None or self.i < 1:
                return Validity(False, "gold shape needs i >= 1")
            if k % 4 != 2:
                return Validity(False, f"k = {k} must be congruent to 2 mod 4")
            if not (F.in_subfield(self.c, 2 * m) and not F.in_subfield(self.c, m)):
                return Validity(False, "c must lie in GF(2^2m) \\ GF(2^m)")
        elif self.shape == "halved":
            if k % 2 == 0:
                return Validity(False, f"k = {k} must be odd")
            if m < 2:
                return Validity(False, "halved shape needs m >= 2 for c outside GF(2)")
            if not (F.in_subfield(self.c, m) and self.c not in (0, 1)):
                return Validity(False, "c must lie in GF(2^m) \\ GF(2)")
        elif self.shape == "double":
            if self.i is None or self.i < 1:
                return Validity(False, "double shape needs i >= 1")
            if k % 2 == 0:
                return Validity(False, f"k = {k} must be odd")
            if m % 2 or m % 3 == 0:
                return Validity(False, "double shape needs m even and not divisible by 3")
            if self.c == 0 or not F.in_subfield(self.c, m):
                return Validity(False, "c must lie in GF(2^m)*")
            if F.pow(self.c, ((1 << m) - 1) // 3) == 1:
                return Validity(False, "c^((2^m-1)/3) must differ from 1")
        else:
            return Validity(False, f"unknown trace-linear shape {self.shape!r}")
        return Validity(True, details=(("s", self.s),))

    def params(self):
        return {"family": self.family, "m": self.m, "k": self.k, "shape": self.shape,
                "i": self.i, "c": f"0x{self.c:x}"}


# -- cached pure pipeline -----------------------------------------------------


@functools.lru_cache(maxsize=None)
def _validate_cached(spec: ConstructionSpec) -> Validity:
    return spec._validate()


def require_valid(spec: ConstructionSpec) -> Validity:
    v = spec.validate()
    if not v.ok:
        raise InvalidSpec(f"{spec.family}: {v.clause}")
    return v


def evaluate(spec: ConstructionSpec, x, unchecked: bool = False) -> int:
    """P(x) for a single point."""
    if not unchecked:
        require_valid(spec)
    F = spec.field
    xb = _coeff_bits(F, x)
    acc = 0
    for coeff, e in spec.monomials():
        acc ^= F.mul(coeff, F.pow(xb, e))
    return acc


@functools.lru_cache(maxsize=None)
def _table_cached(spec: ConstructionSpec) -> np.ndarray:
    t = spec.field.poly_table(spec.monomials())
    t.setflags(write=False)
    return t


def evaluate_table(spec: ConstructionSpec, unchecked: bool = False) -> np.ndarray:
    """Pointwise table of P over the whole field."""
    if not unchecked:
        require_valid(spec)
    return _table_cached(spec)


def table_is_permutation(table: np.ndarray) -> bool:
    return np.unique(table).size == table.size


def verify_permutation(spec: ConstructionSpec, unchecked: bool = False) -> bool:
    """True iff P hits every field element exactly once."""
    return table_is_permutation(evaluate_table(spec, unchecked=unchecked))


class TwoToOneMap:
    """Verified handle for x -> P(x^2 + x)."""

    def __init__(self, field: FiniteField, table: np.ndarray, label: str = ""):
        counts = np.bincount(table, minlength=field.order)
        bad = np.nonzero((counts != 0) & (counts != 2))[0]
        if bad.size:
            raise NotTwoToOne(
                f"{label or 'map'}: image point {int(bad[0])} has "
                f"{int(counts[bad[0]])} preimages")
        table = table.copy()
        table.setflags(write=False)
        self.field = field
        self.table = table
        self.image = np.nonzero(counts)[0]
        self.preimage_histogram = {0: int(np.sum(counts == 0)), 2: int(np.sum(counts == 2))}

    def __call__(self, x) -> int:
        return int(self.table[_coeff_bits(self.field, x)])


def two_to_one_compose(spec: ConstructionSpec, unchecked: bool = False) -> TwoToOneMap:
    """Compose the spec's permutation with x^2 + x and verify 2-to-1-ness."""
    F = spec.field
    ptab = evaluate_table(spec, unchecked=unchecked)
    squares = F.poly_table([(1, 2)]) ^ np.arange(F.order, dtype=np.int64)
    return TwoToOneMap(F, ptab[squares], label=spec.text())


@functools.lru_cache(maxsize=None)
def parameterize(spec: ConstructionSpec) -> BooleanFunction:
    """Balanced Boolean function supported on the image of P(x^2 + x)."""
    mapping = two_to_one_compose(spec)
    table = np.zeros(spec.field.order, dtype=np.uint8)
    table[mapping.image] = 1
    f = BooleanFunction(spec.field, table)
    if f.value(0) != 1 or 2 * f.weight() != spec.field.order:
        raise NotTwoToOne("parameterized function is not the balanced indicator expected")
    return f


# -- epsilon parameters of the quadrinomial analysis -----------------------


@dataclass(frozen=True)
class EpsilonVector:
    """The four epsilon coefficients at gamma, plus their shifted variants.

    ``eps`` follows the literal defining sums; ``veps`` is computed
    independently from u = conj(gamma) + gamma*c and v = gamma*b +
    conj(gamma)*conj(a), so the linear relations between the two tuples act
    as a cross-check of the algebra.
    """

    field: FiniteField
    m: int
    omega: int
    eps: tuple[int, int, int, int]
    veps: tuple[int, int, int, int]

    def trace_quantity(self) -> int | None:
        """Tr over GF(2^m) of (e2^2+e1*e3)^3 / ((e1*e4+e2*e3)^2 * e1^2).

        Defined for eps1 != 0; returns None when the denominator vanishes
        (the source constraint is silent there).
        """
        F = self.field
        e1, e2, e3, e4 = self.eps
        if e1 == 0:
            raise Eps1Zero("trace quantity needs eps1 != 0")
        num = F.pow(F.sqr(e2) ^ F.mul(e1, e3), 3)
        den = F.mul(F.sqr(F.mul(e1, e4) ^ F.mul(e2, e3)), F.sqr(e1))
        if den == 0:
            return None
        return F.subfield_trace_bit(F.div(num, den), self.m)


def epsilon_params(field: FiniteField, gamma, a, b, c, omega=None) -> EpsilonVector:
    """Epsilon coefficients of the quadrinomial spectral analysis at gamma."""
    if field.n % 2:
        raise FieldMismatch("epsilon parameters need n = 2m")
    m = field.n // 2
    g = _coeff_bits(field, gamma)
    a = _coeff_bits(field, a)
    b = _coeff_bits(field, b)
    c = _coeff_bits(field, c)
    w = field.subfield_embed(2) if omega is None else _coeff_bits(field, omega)
    cj = lambda x: field.conj(x, m)
    mul = field.mul
    gbar = cj(g)
    ga, gb, gc = mul(g, a), mul(g, b), mul(g, c)
    gabar, gbbar, gcbar = mul(gbar, cj(a)), mul(gbar, cj(b)), mul(gbar, cj(c))
    wbar = cj(w)
    eps1 = g ^ gbar ^ gc ^ gcbar ^ ga ^ gb ^ gabar ^ gbbar
    eps2 = mul(w, gbar ^ gc) ^ mul(wbar, g ^ gcbar) ^ mul(w, ga ^ gbbar) ^ mul(wbar, gabar ^ gb)
    eps3 = mul(wbar, gbar ^ gc) ^ mul(w, g ^ gcbar) ^ mul(wbar, gabar ^ gb) ^ mul(w, ga ^ gbbar)
    eps4 = gbar ^ gc ^ g ^ gcbar ^ mul(w, gabar ^ gb) ^ mul(wbar, ga ^ gbbar)
    u = gbar ^ gc
    v = gb ^ gabar
    ubar, vbar = cj(u), cj(v)
    w2 = field.sqr(w)
    veps1 = u ^ ubar ^ v ^ vbar
    veps2 = mul(ubar ^ v, w) ^ mul(u ^ vbar, w2)
    veps3 = mul(u ^ v, w) ^ mul(ubar ^ vbar, w2)
    veps4 = u ^ ubar ^ mul(v, w2) ^ mul(vbar, w)
    return EpsilonVector(field=field, m=m, omega=w,
                         eps=(eps1, eps2, eps3, eps4),
                         veps=(veps1, veps2, veps3, veps4))


# -- deterministic coefficient sampling -------------------------------------


def sample_quadrinomial(m: int, condition: int, count: int = 5,
                        seed: int = DEFAULT_SEED,
                        field: FiniteField | None = None) -> list[Quadrinomial]:
    """Seeded sample of coefficient triples meeting the given condition."""
    field = field or field_new(2 * m)
    rng = random.Random(seed)
    found: list[Quadrinomial] = []
    seen = set()
    omega = field.subfield_embed(2)
    subfield = field.subfield_elements(m)
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 200000:
            raise InvalidSpec(f"could not sample condition-({condition}) "
                              f"coefficients for m={m}")
        if condition == 1:
            a = rng.randrange(field.order)
            b = field.mul(omega, a ^ 1) ^ 1
            c = 1
        elif condition == 2:
            a = rng.randrange(field.order)
            b = a ^ 1
            c = 1
        elif condition == 3:
            a, b, c = (rng.choice(subfield) for _ in range(3))
        else:
            raise InvalidSpec(f"unknown quadrinomial condition {condition}")
        if (a, b, c) in seen:
            continue
        seen.add((a, b, c))
        spec = Quadrinomial(field=field, m=m, a=a, b=b, c=c)
        if condition in spec.conditions() and spec.validate().ok:
            found.append(spec)
    return found


def sample_do(n: int, m: int, shape: int, count: int = 5,
              seed: int = DEFAULT_SEED, field: FiniteField | None = None) -> list[DOProduct]:
    field = field or field_new(n)
    if shape == 1:
        return [DOProduct(field=field, m=m, shape=1)]
    rng = random.Random(seed)
    found: list[DOProduct] = []
    seen = set()
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 200000:
            raise InvalidSpec(f"could not sample shape-{shape} DO coefficients")
        a = rng.randrange(1, field.order)
        if a in seen:
            continue
        seen.add(a)
        spec = DOProduct(field=field, m=m, shape=shape, a=a)
        if spec.validate().ok:
            found.append(spec)
    return found


def valid_trace_linear_cs(m: int, k: int, shape: str, i: int | None = None,
                          field: FiniteField | None = None) -> list[int]:
    """Every coefficient c the shape admits, in deterministic order."""
    field = field or field_new(k * m)
    out = []
    if shape == "gold":
        sub = field.subfield_elements(2 * m)
        out = [c for c in sub if not field.in_subfield(c, m)]
    elif shape == "halved":
        out = [c for c in field.subfield_elements(m) if c not in (0, 1)]
    elif shape == "double":
        third = ((1 << m) - 1) // 3
        out = [c for c in field.subfield_elements(m)
               if c != 0 and field.pow(c, third) != 1]
    else:
        raise InvalidSpec(f"unknown trace-linear shape {shape!r}")
    return sorted(out)


def find_fourbe_cs(m: int, k: int, variant: str, count: int = 1,
                   field: FiniteField | None = None) -> list[int]:
    """Coefficients c outside GF(2^m) that make the plus/minus trinomial a
    permutation, in deterministic alpha-power order."""
    field = field or field_new(2 * m)
    out = []
    for j in range(1, field.mult_order):
        c = field.pow(field.alpha, j)
        if field.in_subfield(c, m):
            continue
        spec = NihoTrinomial(field=field, m=m, variant=variant, k=k, c=c)
        if spec.validate().ok:
            out.append(c)
            if len(out) >= count:
                break
    return out


# -- spec text / JSON round-trip -----------------------------------------------


_FAMILIES = {
    "niho-trinomial": NihoTrinomial,
    "quadrinomial": Quadrinomial,
    "do": DOProduct,
    "trace-linear": TraceLinear,
}


def parse_coefficient(field: FiniteField, text: str) -> int:
    """Coefficient syntax: 0x<hex>, subfield:<d>, alpha, alpha^<j>, or int."""
    text = text.strip()
    if text.startswith("0x") or text.startswith("0X"):
        return field.check_element(int(text, 16))
    if text.startswith("subfield:"):
        return field.subfield_embed(int(text.split(":", 1)[1]))
    if text == "alpha":
        return field.alpha
    if text.startswith("alpha^"):
        return field.pow(field.alpha, int(text[6:]))
    if text.isdigit():
        return field.check_element(int(text))
    raise InvalidSpec(f"cannot parse coefficient {text!r}")


def parse_spec(text: str, field: FiniteField | None = None) -> ConstructionSpec:
    """Parse the key=value spec string used by the command line."""
    kv: dict[str, str] = {}
    for tok in text.split():
        key, sep, val = tok.partition("=")
        if not sep or not val:
            raise InvalidSpec(f"malformed token {tok!r}; expected key=value")
        if key in kv:
            raise InvalidSpec(f"duplicate key {key!r}")
        kv[key] = val
    family = kv.pop("family", None)
    if family is None:
        raise InvalidSpec("spec is missing the family key")
    if family not in _FAMILIES:
        raise InvalidSpec(f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}")

    def need_int(key):
        if key not in kv:
            raise InvalidSpec(f"family {family} needs key {key!r}")
        try:
            return int(kv.pop(key))
        except ValueError as exc:
            raise InvalidSpec(f"key {key!r} must be an integer") from exc

    def opt_int(key):
        return int(kv.pop(key)) if key in kv else None

    try:
        if family == "niho-trinomial":
            m = need_int("m")
            variant = kv.pop("variant", "one-fifth")
            k = opt_int("k")
            f = field or field_new(2 * m)
            c = parse_coefficient(f, kv.pop("c")) if "c" in kv else None
            spec = NihoTrinomial.build(m=m, variant=variant, k=k, c=c, field=f)
        elif family == "quadrinomial":
            m = need_int("m")
            f = field or field_new(2 * m)
            coeffs = {}
            for key in ("a", "b", "c"):
                if key not in kv:
                    raise InvalidSpec(f"family quadrinomial needs key {key!r}")
                coeffs[key] = parse_coefficient(f, kv.pop(key))
            spec = Quadrinomial.build(m=m, field=f, **coeffs)
        elif family == "do":
            n = need_int("n")
            m = need_int("m")
            shape = need_int("shape")
            f = field or field_new(n)
            a = parse_coefficient(f, kv.pop("a")) if "a" in kv else None
            spec = DOProduct.build(n=n, m=m, shape=shape, a=a, field=f)
        else:  # trace-linear
            m = need_int("m")
            k = need_int("k")
            if "shape" not in kv:
                raise InvalidSpec("family trace-linear needs key 'shape'")
            shape = kv.pop("shape")
            i = opt_int("i")
            f = field or field_new(k * m)
            c = parse_coefficient(f, kv.pop("c")) if "c" in kv else None
            spec = TraceLinear.build(m=m, k=k, shape=shape, i=i, c=c, field=f)
    except GcdConditionViolated as exc:
        raise InvalidSpec(str(exc)) from exc
    if kv:
        raise InvalidSpec(f"unknown key {sorted(kv)[0]!r} for family {family}")
    return spec


def spec_from_json(obj: dict, field: FiniteField | None = None) -> ConstructionSpec:
    parts = []
    for key, val in obj.items():
        if val is None:
            continue
        parts.append(f"{key}={val}")
    return parse_spec(" ".join(parts), field=field)
