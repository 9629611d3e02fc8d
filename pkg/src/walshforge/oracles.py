"""Independent exponential-sum oracles and the theorem verification harness.

The direct Weil sum is the trusted ground truth here: it sums the canonical
character straight from the definition and stays deliberately unoptimized.
Every closed-form or structural evaluator in this module (cubic sums,
unit-circle Walsh reductions, quadratic kernel evaluations, root-count
formulas) is required by the test suite to match it on its whole tested
range.

``verify_theorem`` rebuilds a construction from scratch for each case,
re-verifies the permutation and 2-to-1 properties even though validation
already vouched for them, measures the spectrum, and compares it against
the promise that the case's id and parameters determine up front.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .boolfun import BooleanFunction, WalshSpectrum, classify
from .constructions import (
    ConstructionSpec,
    DOProduct,
    NihoTrinomial,
    Quadrinomial,
    TraceLinear,
    evaluate_table,
    parameterize,
    two_to_one_compose,
    verify_permutation,
)
from .errors import (
    EvenDegree,
    GcdViolation,
    HypothesisViolated,
    NotQuadratic,
    NotTwoToOne,
    OddAmbientDegree,
    PatternMismatch,
    PromiseFailed,
    ZeroB,
    ZeroInput,
    ZeroPoint,
)
from .field import FiniteField, field_new


# -- the ground-truth oracle ---------------------------------------------------


def weil_sum(func, field: FiniteField) -> int:
    """Sum of (-1)^Tr(F(x)) over the whole field, straight from the definition.

    ``func`` may be a callable on ints or a precomputed value table.
    """
    if callable(func):
        table = np.fromiter((func(x) for x in range(field.order)),
                            dtype=np.int64, count=field.order)
    else:
        table = np.asarray(func, dtype=np.int64)
        if table.shape != (field.order,):
            raise ZeroInput("value table must cover the whole field")
    bits = field.trace_bits[table].astype(np.int64)
    return int(field.order - 2 * bits.sum())


def weil_sum_of_poly(field: FiniteField, monomials) -> int:
    return weil_sum(field.poly_table(monomials), field)


def relation_check(spec: ConstructionSpec, a: int) -> bool:
    """Spectrum of the parameterized function at a vs -S(a*P(x) + x)."""
    if a == 0:
        raise ZeroPoint("the spectrum/Weil-sum relation is stated for a != 0")
    f = parameterize(spec)
    lhs = f.walsh_at(a)
    field = spec.field
    table = field.scale_table(a)[evaluate_table(spec)] \
        ^ np.arange(field.order, dtype=np.int64)
    rhs = -weil_sum(table, field)
    return lhs == rhs


# -- cubic character sums ----------------------------------------------------


@functools.lru_cache(maxsize=None)
def _quartic_preimage(field: FiniteField) -> dict:
    """One solution of x^4 + x = v for every attainable v."""
    out: dict[int, int] = {}
    for x in range(field.order):
        out.setdefault(field.pow(x, 4) ^ x, x)
    return out


def legendre_two(n: int) -> int:
    """Legendre symbol (2|n) for odd n, via the n mod 8 criterion."""
    return -1 if (n * n - 1) // 8 % 2 else 1


def cubic_sum(a: int, field: FiniteField) -> int:
    """Closed form of the Weil sum of x^3 + a*x over GF(2^n), n odd."""
    if field.n % 2 == 0:
        raise EvenDegree("the closed form needs n odd")
    field.check_element(a)
    theta = _quartic_preimage(field).get(field.sqr(a ^ 1))
    if theta is None:
        return 0
    chi = -1 if field.trace_bit(field.pow(theta, 3) ^ theta) else 1
    return legendre_two(field.n) * chi * (1 << ((field.n + 1) // 2))


# -- root counting on the unit circle and in the field --------------------------


def circle_root_count(field: FiniteField, m: int, k: int, coeffs) -> int:
    """Distinct roots in the unit circle of c3*z^(2^k+1) + c2*z^(2^k) + c1*z + c0.

    The coefficient tuple must match one of the two projective shapes
    (conjugate constant terms with middle coefficients equal and in the
    half field, or unit leading/constant with conjugate middle pair).
    """
    if 2 * m != field.n:
        raise PatternMismatch(f"needs n = 2m, got n = {field.n}, m = {m}")
    if not 1 <= k < m:
        raise PatternMismatch(f"exponent index k = {k} must satisfy 1 <= k < m")
    c3, c2, c1, c0 = (field.check_element(c) for c in coeffs)
    conj = lambda x: field.conj(x, m)
    shape_a = c2 == c1 and field.in_subfield(c2, m) and c0 == conj(c3)
    shape_b = c3 == 1 and c0 == 1 and c1 == conj(c2)
    if not (shape_a or shape_b):
        raise PatternMismatch("coefficients fit neither projective shape")
    e = (1 << k) + 1
    count = 0
    for z in field.unit_circle(m):
        v = field.mul(c3, field.pow(z, e)) ^ field.mul(c2, field.pow(z, 1 << k)) \
            ^ field.mul(c1, z) ^ c0
        if v == 0:
            count += 1
    return count


def poly_formal_derivative(coeffs: list[int]) -> list[int]:
    """Formal derivative over characteristic 2: odd-degree terms survive."""
    return [coeffs[i] if i % 2 else 0 for i in range(1, len(coeffs))]


def _poly_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_gcd_over_field(field: FiniteField, p, q) -> list[int]:
    """Monic gcd of two dense coefficient lists over the field."""
    a = _poly_trim(list(p))
    b = _poly_trim(list(q))
    while b:
        inv_lead = field.inv(b[-1])
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            shift = len(a) - 1 - db
            factor = field.mul(a[-1], inv_lead)
            for j, bc in enumerate(b):
                a[shift + j] ^= field.mul(factor, bc)
            _poly_trim(a)
            if not a:
                break
        a, b = b, a
    if a:
        inv_lead = field.inv(a[-1])
        a = [field.mul(c, inv_lead) for c in a]
    return a


def has_repeated_root(field: FiniteField, coeffs) -> bool:
    g = poly_gcd_over_field(field, list(coeffs), poly_formal_derivative(list(coeffs)))
    return len(g) - 1 >= 1


def gold_binomial_root_count(field: FiniteField, m: int, a: int) -> int:
    """Nonzero roots of a^(2^m) x^(2^2m) + a x, by the gcd classification."""
    if a == 0:
        raise ZeroInput("the count is stated for a != 0")
    n = field.n
    d = gcd(m, n)
    if (n // d) % 2:
        return (1 << d) - 1
    if field.dlog(a) % ((1 << d) + 1) == 0:
        return (1 << (2 * d)) - 1
    return 0


def brute_gold_binomial_root_count(field: FiniteField, m: int, a: int) -> int:
    table = field.poly_table([(field.frob(a, m), 1 << (2 * m)), (a, 1)])
    return int(np.sum(table[1:] == 0))


# -- linearized kernels ---------------------------------------------------------


@dataclass(frozen=True)
class KernelResult:
    """Null space of a GF(2)-linear map on the polynomial basis."""

    basis: tuple[int, ...]
    pivot_positions: tuple[int, ...]  # coordinates NOT free; their unit
    # vectors span a complement of the kernel

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _apply_linearized(field: FiniteField, terms, y: int) -> int:
    acc = 0
    for coeff, fr in terms:
        acc ^= field.mul(coeff, field.frob(y, fr))
    return acc


def linearized_kernel(field: FiniteField, terms) -> KernelResult:
    """Kernel of L(y) = sum coeff * y^(2^j) by GF(2) pivot elimination.

    Rows of the constraint system are packed into ints; each incoming row
    is reduced against the pivot at its leading bit until it either finds a
    fresh pivot position or dies.  Every returned basis vector is
    re-checked against the defining equation.
    """
    n = field.n
    cols = [_apply_linearized(field, terms, 1 << j) for j in range(n)]
    pivots: dict[int, int] = {}
    for i in range(n):
        v = 0
        for j in range(n):
            v |= ((cols[j] >> i) & 1) << j
        while v:
            top = v.bit_length() - 1
            w = pivots.get(top)
            if w is None:
                pivots[top] = v
                break
            v ^= w
    pivot_positions = tuple(sorted(pivots))
    basis = []
    in_pivots = set(pivot_positions)
    echelon = sorted(pivots.items())
    for free in range(n):
        if free in in_pivots:
            continue
        vec = 1 << free
        # ascending pivot order: every non-leading bit of a pivot row sits
        # below its pivot, so earlier assignments are already final
        for p, row in echelon:
            if (row & vec).bit_count() % 2:
                vec ^= 1 << p
        basis.append(vec)
    for y in basis:
        if _apply_linearized(field, terms, y):
            raise AssertionError("kernel basis vector fails the defining equation")
    return KernelResult(basis=tuple(basis), pivot_positions=pivot_positions)


def count_linearized_roots(field: FiniteField, terms) -> int:
    return 1 << linearized_kernel(field, terms).dimension


def linear_root_bound_check(field: FiniteField, coeffs, k: int) -> bool:
    """Roots of sum c_t y^(2^(t*k)) number at most 2^d (degree 2^(dk))."""
    if gcd(k, field.n) != 1:
        raise GcdViolation(f"needs gcd(k, n) = 1, got k = {k}, n = {field.n}")
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ZeroInput("zero polynomial")
    d = len(coeffs) - 1
    terms = [(c, (t * k) % field.n) for t, c in enumerate(coeffs) if c]
    return count_linearized_roots(field, terms) <= (1 << d)


# -- unit-circle Walsh reduction --------------------------------------------------


def _eval_h(field: FiniteField, h_terms, u: int) -> int:
    acc = 0
    for coeff, e in h_terms:
        acc ^= field.mul(coeff, field.pow(u, e))
    return acc


def niho_walsh(field: FiniteField, m: int, h_terms, r: int, a: int, b: int) -> int:
    """Walsh transform of G(x) = x^r h(x^(2^m-1)) at (a, b) via the circle.

    r = 1 reduces to a root count on the unit circle; general r evaluates
    the double sum over circle times half field.  Both equal the direct
    Weil sum of b*G + a*x.
    """
    if field.n != 2 * m:
        raise OddAmbientDegree(f"needs n = 2m, got n = {field.n}, m = {m}")
    circle = field.unit_circle(m)
    if r == 1:
        count = 0
        for z in circle:
            harg = field.sqr(field.conj(z, m))
            t = field.mul(b, field.mul(z, _eval_h(field, h_terms, harg))) ^ field.mul(a, z)
            if t ^ field.conj(t, m) == 0:
                count += 1
        return (1 << m) * (count - 1)
    sub = field.subfield_elements(m)
    total = 0
    for z in circle:
        c1 = field.trace(field.mul(b, field.mul(field.pow(z, r),
                                                _eval_h(field, h_terms, field.sqr(field.conj(z, m))))), m)
        c2 = field.trace(field.mul(a, z), m)
        for y in sub:
            v = field.mul(c1, field.pow(y, r)) ^ field.mul(c2, y)
            total += -1 if field.subfield_trace_bit(v, m) else 1
    return total - (1 << m)


# -- quadratic forms ---------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticForm:
    """phi(x) = Tr(sum a_i x^(2^i+1) + linear*x) in canonical shape.

    ``quad`` maps i in 1..n/2 to a_i after folding all exponents into that
    range and dropping half-field terms at i = n/2 whose trace contribution
    vanishes identically.
    """

    field: FiniteField
    quad: tuple[tuple[int, int], ...]  # (i, coeff), 1 <= i <= n//2
    linear: int = 0

    @classmethod
    def from_monomials(cls, field: FiniteField, monomials, linear: int = 0) -> "QuadraticForm":
        """Build from (coeff, exponent) pairs with exponents of weight <= 2."""
        n = field.n
        quad: dict[int, int] = {}
        lin = field.check_element(linear)
        for coeff, e in monomials:
            coeff = field.check_element(coeff)
            if coeff == 0:
                continue
            if e <= 0:
                raise NotQuadratic("exponents must be positive")
            e %= field.mult_order
            if e == 0:
                raise NotQuadratic("exponent reduces to a constant term")
            w = e.bit_count()
            if w == 1:
                j = e.bit_length() - 1
                lin ^= field.frob(coeff, (n - j) % n)
            elif w == 2:
                j = (e & -e).bit_length() - 1
                i = e.bit_length() - 1
                t = i - j
                c = field.frob(coeff, (n - j) % n)
                if t > n - t:
                    c = field.frob(c, n - t)
                    t = n - t
                quad[t] = quad.get(t, 0) ^ c
            else:
                raise NotQuadratic(f"exponent {e} has binary weight {w} > 2")
        if 2 * (n // 2) == n:
            half = quad.get(n // 2)
            if half is not None and field.in_subfield(half, n // 2):
                del quad[n // 2]  # Tr of a half-field multiple of the norm is 0
        quad = {i: c for i, c in quad.items() if c}
        return cls(field=field, quad=tuple(sorted(quad.items())), linear=lin)

    def is_quadratic(self) -> bool:
        return bool(self.quad)

    def value_bit(self, x: int) -> int:
        F = self.field
        acc = F.mul(self.linear, x)
        for i, c in self.quad:
            acc ^= F.mul(c, F.pow(x, (1 << i) + 1))
        return F.trace_bit(acc)

    def value_bits(self, points: np.ndarray) -> np.ndarray:
        monos = [(c, (1 << i) + 1) for i, c in self.quad]
        if self.linear:
            monos.append((self.linear, 1))
        vals = self.field.poly_on_points(points, monos)
        return self.field.trace_bits[vals]

    def kernel(self) -> KernelResult:
        """Radical of the associated bilinear form.

        B(x, y) = Tr(x * L(y)) with L(y) = sum a_i y^(2^i) + (a_i y)^(2^(n-i)),
        so the radical is the kernel of that linearized map.
        """
        n = self.field.n
        terms = []
        for i, c in self.quad:
            terms.append((c, i % n))
            terms.append((self.field.frob(c, (n - i) % n), (n - i) % n))
        if not terms:
            raise NotQuadratic("no quadratic part")
        return linearized_kernel(self.field, terms)


@dataclass(frozen=True)
class QuadWalshResult:
    value: int
    kernel_dimension: int
    vanishes: bool


def quadratic_walsh(field: FiniteField, q_monomials, a: int, b: int) -> QuadWalshResult:
    """Walsh transform of a quadratic Q at (a, b) through its kernel.

    Returns 0 when the form does not vanish on the kernel of its bilinear
    form, otherwise +-2^((n+d)/2) with the sign read off a single coset
    transversal (the magnitude is recomputed and asserted, not assumed).
    """
    if b == 0:
        raise ZeroB("the kernel evaluation needs b != 0")
    phi = QuadraticForm.from_monomials(
        field, [(field.mul(b, c), e) for c, e in q_monomials], linear=a)
    if not phi.is_quadratic():
        raise NotQuadratic("b*Q + a*x has no quadratic part")
    ker = phi.kernel()
    d = ker.dimension
    # phi restricted to the kernel is linear, so vanishing on a basis is enough
    vanishes = all(phi.value_bit(v) == 0 for v in ker.basis)
    if not vanishes:
        return QuadWalshResult(0, d, False)
    # the pivot coordinates span a complement of the kernel: one coset each
    transversal = np.zeros(1, dtype=np.int64)
    for p in ker.pivot_positions:
        transversal = np.concatenate([transversal, transversal ^ (1 << p)])
    if transversal.size != 1 << (field.n - d):
        raise AssertionError("transversal enumeration out of step with kernel rank")
    bits = phi.value_bits(transversal).astype(np.int64)
    value = (1 << d) * int(transversal.size - 2 * bits.sum())
    if (field.n + d) % 2 or abs(value) != 1 << ((field.n + d) // 2):
        raise AssertionError("coset sum has the wrong magnitude for a quadratic form")
    return QuadWalshResult(value, d, True)


# -- theorem harness -----------------------------------------------------------------


CASE_IDS = ("four-valued-dist", "plateaued-quadrinomial", "do-ex1", "do-ex2",
            "pl2", "pl3", "pl4", "prop-fourbe")


@dataclass(frozen=True)
class TheoremCase:
    """One fully-specified instance of a spectral claim to verify."""

    case_id: str
    m: int | None = None
    k: int | None = None
    i: int | None = None
    n: int | None = None
    shape: int | None = None
    variant: str | None = None
    condition: int | None = None
    a: int | None = None
    b: int | None = None
    c: int | None = None

    def params(self) -> dict:
        out = {}
        for key in ("m", "k", "i", "n", "shape", "variant", "condition"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        for key in ("a", "b", "c"):
            v = getattr(self, key)
            if v is not None:
                out[key] = f"0x{v:x}"
        return out


@dataclass(frozen=True)
class Promise:
    """Everything the claim pins down about the spectrum, fixed up front."""

    allowed_values: tuple[int, ...]
    plateau_r: int | None = None
    histogram: tuple[tuple[int, int], ...] | None = None
    require_classification: bool = False

    def to_dict(self) -> dict:
        out = {"allowed_values": sorted(self.allowed_values)}
        if self.plateau_r is not None:
            out["plateau_r"] = self.plateau_r
        if self.histogram is not None:
            out["histogram"] = [list(p) for p in self.histogram]
        return out


def four_valued_histogram(m: int) -> dict[int, int]:
    """The promised value -> count map of the one-fifth trinomial family."""
    n = 2 * m
    return {
        0: (2**n - 2**m + 4) // 2,
        2**m: (2**n - 2**m - 2) // 3,
        -(2**m): 2**m - 2,
        -(2**(m + 1)): (2**n - 2**m + 4) // 6,
    }


def _need(case: TheoremCase, *keys):
    for key in keys:
        if getattr(case, key) is None:
            raise HypothesisViolated(f"{case.case_id} needs parameter {key!r}")


def build_case_spec(case: TheoremCase) -> ConstructionSpec:
    cid = case.case_id
    if cid == "four-valued-dist":
        _need(case, "m")
        return NihoTrinomial.build(case.m, "one-fifth", c=case.c)
    if cid == "prop-fourbe":
        _need(case, "m", "k", "variant", "c")
        return NihoTrinomial.build(case.m, case.variant, k=case.k, c=case.c)
    if cid == "plateaued-quadrinomial":
        _need(case, "m", "a", "b", "c")
        return Quadrinomial.build(case.m, case.a, case.b, case.c)
    if cid == "do-ex1":
        _need(case, "n", "m", "shape")
        if case.shape not in (1, 2):
            raise HypothesisViolated("do-ex1 covers shapes 1 and 2")
        return DOProduct.build(case.n, case.m, case.shape, a=case.a)
    if cid == "do-ex2":
        _need(case, "m")
        return DOProduct.build(3 * case.m, case.m, 3, a=case.a)
    if cid == "pl2":
        _need(case, "m", "k")
        return TraceLinear.build(case.m, case.k, "gold", i=case.i, c=case.c)
    if cid == "pl3":
        _need(case, "m", "k")
        return TraceLinear.build(case.m, case.k, "halved", c=case.c)
    if cid == "pl4":
        _need(case, "m", "k")
        return TraceLinear.build(case.m, case.k, "double", i=case.i, c=case.c)
    raise HypothesisViolated(f"unknown case id {cid!r}; expected one of {CASE_IDS}")


def promise_for(case: TheoremCase, spec: ConstructionSpec) -> Promise:
    cid = case.case_id
    if cid == "four-valued-dist":
        m = case.m
        hist = four_valued_histogram(m)
        return Promise(allowed_values=tuple(hist), histogram=tuple(sorted(hist.items())))
    if cid == "prop-fourbe":
        m, k = case.m, case.k
        d = gcd(k, m)
        return Promise(allowed_values=(2**m, 0, -(2**m), -(2**(m + d))))
    if cid == "plateaued-quadrinomial":
        conds = spec.conditions()
        cond = case.condition
        if cond is None:
            if len(conds) != 1:
                raise HypothesisViolated(
                    f"coefficients match conditions {conds}; pass condition explicitly")
            cond = conds[0]
        elif cond not in conds:
            raise HypothesisViolated(f"coefficients do not satisfy condition ({cond})")
        m = case.m
        if cond == 1:
            h = 1 << ((3 * m + 1) // 2)
            return Promise(allowed_values=(0, h, -h), plateau_r=m + 1)
        h = 1 << (m + 1)
        return Promise(allowed_values=(0, h, -h), plateau_r=2, require_classification=True)
    if cid in ("do-ex1", "do-ex2", "pl2", "pl3", "pl4"):
        n = spec.n
        if cid == "do-ex1":
            r = gcd(case.n, case.m)
        elif cid == "do-ex2":
            r = case.m
        elif cid == "pl2":
            r = 2 * case.m
        elif cid == "pl3":
            r = case.m
        else:
            r = case.m * gcd(case.i if case.i is not None else 1, case.k)
        if (n + r) % 2:
            raise HypothesisViolated(f"promised order r = {r} has odd n + r")
        h = 1 << ((n + r) // 2)
        return Promise(allowed_values=(0, h, -h), plateau_r=r, require_classification=True)
    raise HypothesisViolated(f"unknown case id {cid!r}")


@dataclass(frozen=True)
class TheoremVerdict:
    case: TheoremCase
    promise: Promise
    measured_histogram: tuple[tuple[int, int], ...]
    ok: bool
    classification: str
    counterexample: dict | None = None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "case_id": self.case.case_id,
            "params": self.case.params(),
            "promise": self.promise.to_dict(),
            "measured_histogram": [list(p) for p in self.measured_histogram],
            "classification": self.classification,
            "pass": self.ok,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def require(self) -> "TheoremVerdict":
        if not self.ok:
            raise PromiseFailed(f"{self.case.case_id}: {self.counterexample}")
        return self


def verify_theorem(case: TheoremCase) -> TheoremVerdict:
    """Build, re-verify, measure, and compare against the promise."""
    try:
        spec = build_case_spec(case)
    except (ValueError,) as exc:
        if isinstance(exc, HypothesisViolated):
            raise
        raise HypothesisViolated(str(exc)) from exc
    validity = spec.validate()
    if not validity.ok:
        raise HypothesisViolated(f"{case.case_id}: {validity.clause}")
    promise = promise_for(case, spec)

    notes = []
    counterexample = None
    ok = True
    # defense in depth: the spectral checks mean nothing if the map is wrong
    if not verify_permutation(spec):
        ok = False
        counterexample = {"reason": "P is not a permutation"}
    spectrum: WalshSpectrum | None = None
    classification = ""
    if ok:
        try:
            two_to_one_compose(spec)
        except NotTwoToOne as exc:
            ok = False
            counterexample = {"reason": str(exc)}
    if ok:
        f = parameterize(spec)
        spectrum = f.walsh()
        classification = classify(spectrum).tag
        allowed = set(promise.allowed_values)
        stray = [v for v in spectrum.distinct_values() if v not in allowed]
        if stray:
            bad = stray[0]
            gamma = int(np.nonzero(spectrum.values == bad)[0][0])
            ok = False
            counterexample = {"gamma": gamma, "value": bad}
        if ok and promise.histogram is not None \
                and tuple(spectrum.histogram_items()) != promise.histogram:
            ok = False
            counterexample = {"measured": [list(p) for p in spectrum.histogram_items()],
                              "expected": [list(p) for p in promise.histogram]}
        if ok and promise.require_classification \
                and not classify(spectrum).is_plateaued(promise.plateau_r):
            ok = False
            counterexample = {"classification": classification,
                              "expected_r": promise.plateau_r}
        if spectrum is not None and promise.plateau_r is not None \
                and not promise.require_classification:
            # membership-only promises: record the sign split without asserting it
            h = dict(spectrum.histogram_items())
            top = max(promise.allowed_values)
            notes.append(f"split +{top}:{h.get(top, 0)} -{top}:{h.get(-top, 0)}")
    measured = tuple(spectrum.histogram_items()) if spectrum is not None else ()
    return TheoremVerdict(case=case, promise=promise, measured_histogram=measured,
                          ok=ok, classification=classification,
                          counterexample=counterexample, notes=tuple(notes))
