"""Boolean functions on GF(2^n) with exact spectral analysis.

A :class:`BooleanFunction` is a truth table of length 2^n indexed by the
field's element encoding.  All spectral values are exact signed integers
(|W| <= 2^n <= 2^20); no floating point is used anywhere.  Instances are
immutable after construction and all operations are pure, so everything
here can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegreeTooLarge, ElementOutOfRange
from .field import FieldElement, FiniteField, field_new

AI_DEGREE_CAP = 14  # practical bound for algebraic immunity


def _as_bits(field: FiniteField, x) -> int:
    if isinstance(x, FieldElement):
        if x.field != field:
            raise ElementOutOfRange(f"element of {x.field!r} used in {field!r}")
        return x.bits
    return int(x)


def fwht(signs: np.ndarray) -> np.ndarray:
    """In-order dyadic Walsh-Hadamard butterfly (unnormalized)."""
    a = np.asarray(signs, dtype=np.int64).copy()
    size = a.shape[0]
    h = 1
    while h < size:
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        right = a[:, h:].copy()
        a[:, :h] = left + right
        a[:, h:] = left - right
        a = a.reshape(size)
        h *= 2
    return a


def mobius_transform(table: np.ndarray, n: int) -> np.ndarray:
    """Binary Moebius transform (an involution) of a length-2^n bit table."""
    a = np.asarray(table, dtype=np.uint8).copy()
    for i in range(n):
        step = 1 << i
        a = a.reshape(-1, 2 * step)
        a[:, step:] ^= a[:, :step]
        a = a.reshape(1 << n)
    return a


class BooleanFunction:
    """Truth table of a function GF(2^n) -> GF(2)."""

    def __init__(self, field: FiniteField, table):
        table = np.asarray(table, dtype=np.uint8)
        if table.shape != (field.order,):
            raise ElementOutOfRange(
                f"truth table must have length 2^{field.n} = {field.order}, got {table.shape}")
        if not np.all(table <= 1):
            raise ElementOutOfRange("truth table entries must be 0/1")
        table = table.copy()
        table.setflags(write=False)
        self.field = field
        self.table = table
        self._walsh: WalshSpectrum | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_support(cls, field: FiniteField, support) -> "BooleanFunction":
        """f(x) = 1 exactly on the given set of elements."""
        table = np.zeros(field.order, dtype=np.uint8)
        for x in support:
            b = _as_bits(field, x)
            if not 0 <= b < field.order:
                raise ElementOutOfRange(f"{b} is not an element of GF(2^{field.n})")
            table[b] = 1
        return cls(field, table)

    @classmethod
    def from_trace_polynomial(cls, field: FiniteField, monomials, plus_one: bool = False):
        """f(x) = Tr(sum coeff * x^e) (+ 1), a common closed form."""
        vals = field.poly_table(monomials)
        table = field.trace_bits[vals].astype(np.uint8)
        if plus_one:
            table = table ^ 1
        return cls(field, table)

    @classmethod
    def from_univariate(cls, field: FiniteField, coeffs) -> "BooleanFunction":
        """Evaluate a univariate coefficient list (must land in {0,1})."""
        table = evaluate_univariate(field, coeffs)
        return cls(field, table)

    # -- basics ----------------------------------------------------------------

    def value(self, x) -> int:
        return int(self.table[_as_bits(self.field, x)])

    def weight(self) -> int:
        return int(self.table.sum())

    def support(self) -> np.ndarray:
        return np.nonzero(self.table)[0]

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.field, self.table ^ 1)

    def __eq__(self, other):
        return (isinstance(other, BooleanFunction) and self.field == other.field
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.field, self.table.tobytes()))

    def __repr__(self):
        return f"BooleanFunction(GF(2^{self.field.n}), weight={self.weight()})"

    # -- spectra ---------------------------------------------------------------

    def walsh(self) -> "WalshSpectrum":
        """Full Walsh spectrum via the fast transform plus index relabeling."""
        if self._walsh is None:
            signs = 1 - 2 * self.table.astype(np.int64)
            fw = fwht(signs)
            values = fw[self.field.dual_index_table]
            self._walsh = WalshSpectrum(values, f0=int(self.table[0]))
        return self._walsh

    def walsh_at(self, gamma) -> int:
        return int(self.walsh().values[_as_bits(self.field, gamma)])

    def is_balanced(self) -> bool:
        return self.walsh_at(0) == 0

    def nonlinearity(self) -> int:
        m = self.walsh().max_abs
        if m % 2:
            raise AssertionError("odd spectral value")
        return self.field.order // 2 - m // 2

    # -- algebraic normal form ----------------------------------------------

    def anf(self) -> "AnfPolynomial":
        return AnfPolynomial(mobius_transform(self.table, self.field.n), self.field.n)

    def degree(self) -> int:
        return self.anf().degree

    # -- algebraic immunity ------------------------------------------------------

    def algebraic_immunity(self) -> int:
        """Least degree of a nonzero annihilator of f or f+1.

        Ascends the degree, inserting monomial-on-support evaluation columns
        into an incrementally maintained eliminated basis; the first column
        that reduces to zero yields an annihilator of that degree.
        """
        n = self.field.n
        if n > AI_DEGREE_CAP:
            raise DegreeTooLarge(f"algebraic immunity bounded to n <= {AI_DEGREE_CAP}")
        a1 = _min_annihilator_degree(n, self.support())
        a0 = _min_annihilator_degree(n, np.nonzero(self.table ^ 1)[0])
        return min(a0, a1)

    # -- univariate form --------------------------------------------------------

    def univariate_representation(self) -> list[int]:
        """Coefficients a_0..a_(2^n-1) with f(x) = sum a_i x^i over the field.

        a_i for middle i comes from the inversion a_i = sum over the nonzero
        support of f(c) c^(-i); a_0 = f(0), and the top coefficient is the
        weight parity.  The result is verified by full re-evaluation.
        """
        field = self.field
        q, M = field.order, field.mult_order
        coeffs = [0] * q
        coeffs[0] = int(self.table[0])
        supp = self.support()
        supp = supp[supp != 0]
        if q > 2:
            if supp.size:
                logs = field.log_np[supp]
                exp = field.exp_np
                for i in range(1, q - 1):
                    coeffs[i] = int(np.bitwise_xor.reduce(exp[(logs * (M - i)) % M]))
            coeffs[q - 1] = self.weight() & 1
        else:
            coeffs[q - 1] = self.weight() & 1
        if not np.array_equal(evaluate_univariate(field, coeffs), self.table):
            raise AssertionError("univariate inversion failed to round-trip")
        return coeffs

    # -- file formats ----------------------------------------------------------

    def write_truth_table(self, path) -> None:
        """Two-line text format: ``n=<int>`` then 2^n characters of {0,1}."""
        with open(path, "w") as fh:
            fh.write(f"n={self.field.n}\n")
            fh.write("".join("1" if b else "0" for b in self.table.tolist()))
            fh.write("\n")


def read_truth_table(path, field: FiniteField | None = None) -> BooleanFunction:
    with open(path) as fh:
        header = fh.readline().strip()
        bits = fh.readline().strip()
    if not header.startswith("n="):
        raise ElementOutOfRange(f"bad truth table header {header!r}")
    n = int(header[2:])
    if field is None:
        field = field_new(n)
    elif field.n != n:
        raise ElementOutOfRange(f"file has n={n}, field has n={field.n}")
    if len(bits) != field.order or set(bits) - {"0", "1"}:
        raise ElementOutOfRange("truth table line must be 2^n characters of {0,1}")
    return BooleanFunction(field, np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0"))


def evaluate_univariate(field: FiniteField, coeffs) -> np.ndarray:
    """Pointwise table of sum a_i x^i over the field."""
    coeffs = list(coeffs)
    if len(coeffs) > field.order:
        raise ElementOutOfRange("too many coefficients")
    return field.poly_table((c, e) for e, c in enumerate(coeffs) if c)


def walsh_direct(f: BooleanFunction) -> np.ndarray:
    """O(2^(2n)) reference transform straight from the definition."""
    field = f.field
    q = field.order
    out = np.zeros(q, dtype=np.int64)
    tr = field.trace_bits
    ft = f.table
    for g in range(q):
        out[g] = np.sum(1 - 2 * (ft ^ tr[field.scale_table(g)]).astype(np.int64))
    return out


class WalshSpectrum:
    """All 2^n transform values plus the value -> count histogram.

    Constructing one asserts the three standard spectral constraints
    (count, signed first moment against f(0), and Parseval), so every
    spectrum that exists in a running program has already passed them.
    """

    def __init__(self, values: np.ndarray, f0: int):
        values = np.asarray(values, dtype=np.int64).copy()
        values.setflags(write=False)
        self.values = values
        self.f0 = int(f0)
        size = values.shape[0]
        n = size.bit_length() - 1
        if size != 1 << n:
            raise ElementOutOfRange("spectrum length must be a power of two")
        vals, counts = np.unique(values, return_counts=True)
        self.histogram = {int(v): int(c) for v, c in zip(vals.tolist(), counts.tolist())}
        if sum(self.histogram.values()) != size:
            raise AssertionError("histogram counts do not sum to 2^n")
        if int(values.sum()) != size * (-1) ** self.f0:
            raise AssertionError("signed spectral sum violates the first moment constraint")
        if int(np.sum(values * values)) != size * size:
            raise AssertionError("Parseval constraint violated")

    @property
    def max_abs(self) -> int:
        return int(np.max(np.abs(self.values)))

    def distinct_values(self) -> tuple[int, ...]:
        return tuple(sorted(self.histogram))

    def histogram_items(self) -> list[tuple[int, int]]:
        return sorted(self.histogram.items())

    def export_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("gamma,value\n")
            for g, v in enumerate(self.values.tolist()):
                fh.write(f"{g},{v}\n")

    def histogram_json(self) -> str:
        return json.dumps([[v, c] for v, c in self.histogram_items()])

    def __repr__(self):
        return f"WalshSpectrum({dict(self.histogram_items())})"


@dataclass(frozen=True)
class AnfPolynomial:
    """Multivariate algebraic normal form as a coefficient bit table."""

    coeffs: np.ndarray
    n: int

    @property
    def degree(self) -> int:
        idx = np.nonzero(self.coeffs)[0]
        if idx.size == 0:
            return 0
        return max(int(i).bit_count() for i in idx.tolist())

    def evaluate(self) -> np.ndarray:
        """Truth table back from the ANF (the transform is an involution)."""
        return mobius_transform(self.coeffs, self.n)

    def monomials(self) -> list[int]:
        return np.nonzero(self.coeffs)[0].tolist()


@dataclass(frozen=True)
class SpectrumClass:
    """Distinct-value classification of a spectrum.

    kind is one of ``bent``, ``plateaued`` (with the order r; r=1 and r=2
    also answer to near-bent / semi-bent), ``four-valued`` or ``other``.
    """

    kind: str
    r: int | None = None
    values: tuple[int, ...] = ()

    @property
    def tag(self) -> str:
        if self.kind == "plateaued":
            if self.r == 1:
                return "near-bent"
            if self.r == 2:
                return "semi-bent"
            return f"{self.r}-plateaued"
        if self.kind == "four-valued":
            return "four-valued"
        return self.kind

    def is_plateaued(self, r: int | None = None) -> bool:
        return self.kind == "plateaued" and (r is None or self.r == r)


def classify(spectrum: WalshSpectrum) -> SpectrumClass:
    """Classify by the set of distinct spectral values only.

    Plateaued demands all three of {0, +h, -h} to be present with h a power
    of two strictly above 2^(n/2); a two-valued affine spectrum is therefore
    ``other``, matching the three-valued reading of the plateaued class.
    """
    vals = spectrum.distinct_values()
    n = spectrum.values.shape[0].bit_length() - 1
    vset = set(vals)
    if n % 2 == 0:
        h = 1 << (n // 2)
        if vset == {h, -h}:
            return SpectrumClass("bent", values=vals)
    if len(vset) == 3 and 0 in vset:
        h = max(vset)
        if -h in vset and h > 0 and h & (h - 1) == 0:
            r = 2 * h.bit_length() - 2 - n
            if 1 <= r <= n and (n + r) % 2 == 0:
                return SpectrumClass("plateaued", r=r, values=vals)
    if len(vset) == 4:
        return SpectrumClass("four-valued", values=vals)
    return SpectrumClass("other", values=vals)


# -- algebraic immunity internals ------------------------------------------


def _monomial_indices(n: int, d: int) -> list[int]:
    """All degree-d monomial index masks in increasing numeric order."""
    return sorted(sum(1 << j for j in comb) for comb in combinations(range(n), d))


def _min_annihilator_degree(n: int, supp: np.ndarray) -> int:
    """Least d such that some nonzero combination of monomials of degree <= d
    vanishes on every point of ``supp`` (n+1 if none exists at all)."""
    supp = np.asarray(supp, dtype=np.int64)
    pivots: dict[int, int] = {}
    for d in range(n + 1):
        for mask in _monomial_indices(n, d):
            col = np.packbits((supp & mask) == mask)
            v = int.from_bytes(col.tobytes(), "big")
            while v:
                top = v.bit_length()
                w = pivots.get(top)
                if w is None:
                    pivots[top] = v
                    break
                v ^= w
            else:
                return d
    return n + 1
