import numpy as np
import pytest

from walshforge import (
    BooleanFunction,
    classify,
    evaluate_univariate,
    field_new,
    read_truth_table,
    walsh_direct,
)
from walshforge.boolfun import WalshSpectrum, mobius_transform
from walshforge.errors import DegreeTooLarge, ElementOutOfRange


def random_function(field, rng):
    return BooleanFunction(field, rng.integers(0, 2, size=field.order, dtype=np.uint8))


def test_from_support_edges():
    F = field_new(3)
    zero = BooleanFunction.from_support(F, [])
    assert zero.weight() == 0
    full = BooleanFunction.from_support(F, range(8))
    assert full.weight() == 8
    with pytest.raises(ElementOutOfRange):
        BooleanFunction.from_support(F, [8])
    with pytest.raises(ElementOutOfRange):
        BooleanFunction(F, np.zeros(7, dtype=np.uint8))


def test_support_of_squares_image_is_balanced():
    F = field_new(3)
    image = {F.sqr(x) ^ x for x in F.elements()}
    f = BooleanFunction.from_support(F, image)
    assert f.weight() == 4
    assert f.is_balanced()


def test_walsh_of_constant_zero():
    F = field_new(4)
    f = BooleanFunction(F, np.zeros(16, dtype=np.uint8))
    values = f.walsh().values
    assert values[0] == 16 and np.all(values[1:] == 0)
    assert not f.is_balanced()


def test_walsh_of_absolute_trace():
    F = field_new(5)
    f = BooleanFunction(F, F.trace_bits.copy())
    values = f.walsh().values
    assert values[1] == 32
    assert np.sum(values != 0) == 1
    assert f.is_balanced()
    assert f.nonlinearity() == 0  # affine


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fast_transform_equals_direct_definition_exhaustive(n):
    F = field_new(n)
    q = F.order
    # kernel matrix K[x, g] = (-1)^Tr(g x)
    K = np.empty((q, q), dtype=np.int64)
    for g in range(q):
        K[:, g] = 1 - 2 * F.trace_bits[F.scale_table(g)].astype(np.int64)
    tables = ((np.arange(1 << q)[:, None] >> np.arange(q)[None, :]) & 1).astype(np.int64)
    expected = (1 - 2 * tables) @ K
    for idx in range(1 << q):
        f = BooleanFunction(F, tables[idx].astype(np.uint8))
        assert np.array_equal(f.walsh().values, expected[idx])


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_fast_transform_equals_direct_definition_random(n):
    F = field_new(n)
    rng = np.random.default_rng(n)
    for _ in range(25):
        f = random_function(F, rng)
        assert np.array_equal(f.walsh().values, walsh_direct(f))


def test_spectrum_constraint_checks_reject_corrupt_data():
    with pytest.raises(AssertionError):
        WalshSpectrum(np.array([1, 0, 0, 0]), f0=0)


def test_anf_degree_examples():
    F = field_new(6)
    zero = BooleanFunction(F, np.zeros(64, dtype=np.uint8))
    assert zero.degree() == 0
    f = BooleanFunction.from_trace_polynomial(F, [(1, 3)])
    assert f.degree() == 2  # quadratic exponent, binary weight of 3 is 2
    g = BooleanFunction.from_trace_polynomial(F, [(1, 1)])
    assert g.degree() == 1


def test_anf_round_trip_random():
    rng = np.random.default_rng(7)
    for n in (2, 4, 6, 8, 10):
        F = field_new(n)
        for _ in range(10):
            f = random_function(F, rng)
            anf = f.anf()
            assert np.array_equal(anf.evaluate(), f.table)
            assert np.array_equal(
                mobius_transform(mobius_transform(f.table, n), n), f.table)


def test_univariate_indicator_of_zero():
    F = field_new(4)
    f = BooleanFunction.from_support(F, [0])
    coeffs = f.univariate_representation()
    assert coeffs[0] == 1 and coeffs[15] == 1
    assert all(c == 0 for c in coeffs[1:15])


def test_univariate_of_trace_sits_on_frobenius_orbit():
    F = field_new(4)
    f = BooleanFunction(F, F.trace_bits.copy())
    coeffs = f.univariate_representation()
    expected = {1 << j for j in range(4)}
    assert {i for i, c in enumerate(coeffs) if c} == expected
    assert all(coeffs[i] == 1 for i in expected)


def test_univariate_round_trip_and_conjugacy_random():
    F = field_new(6)
    rng = np.random.default_rng(11)
    for _ in range(100):
        f = random_function(F, rng)
        coeffs = f.univariate_representation()
        assert np.array_equal(evaluate_univariate(F, coeffs), f.table)
        assert coeffs[0] in (0, 1) and coeffs[63] in (0, 1)
        for i in range(1, 62):
            assert coeffs[(2 * i) % 63] == F.sqr(coeffs[i])


def exhaustive_min_annihilator_degree(field, table):
    """Independent oracle: enumerate every nonzero annihilator outright."""
    n = field.n
    free = np.nonzero(table == 0)[0]
    k = len(free)
    assert k <= 16, "oracle only meant for small kernels"
    if k == 0:
        return n + 1  # only the zero function annihilates
    masks = np.arange(1, 1 << k, dtype=np.int64)
    cand = np.zeros((len(masks), field.order), dtype=np.uint8)
    cand[:, free] = ((masks[:, None] >> np.arange(k)[None, :]) & 1).astype(np.uint8)
    # batch binary Moebius transform along axis 1
    a = cand
    for i in range(n):
        step = 1 << i
        a = a.reshape(len(masks), -1, 2 * step)
        a[:, :, step:] ^= a[:, :, :step]
        a = a.reshape(len(masks), field.order)
    weights = np.array([int(i).bit_count() for i in range(field.order)])
    degrees = (a * weights[None, :]).max(axis=1)
    return int(degrees.min())


def exhaustive_ai(f):
    return min(exhaustive_min_annihilator_degree(f.field, f.table),
               exhaustive_min_annihilator_degree(f.field, f.table ^ 1))


def test_algebraic_immunity_constants():
    F = field_new(4)
    zero = BooleanFunction(F, np.zeros(16, dtype=np.uint8))
    assert zero.algebraic_immunity() == 0
    assert zero.complement().algebraic_immunity() == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_algebraic_immunity_matches_exhaustive_search_small(n):
    F = field_new(n)
    rng = np.random.default_rng(n + 20)
    for _ in range(15):
        f = random_function(F, rng)
        assert f.algebraic_immunity() == exhaustive_ai(f)


def test_algebraic_immunity_matches_exhaustive_search_balanced_n5():
    F = field_new(5)
    rng = np.random.default_rng(55)
    for _ in range(8):
        table = np.array([1] * 16 + [0] * 16, dtype=np.uint8)
        rng.shuffle(table)
        f = BooleanFunction(F, table)
        assert f.algebraic_immunity() == exhaustive_ai(f)


def test_algebraic_immunity_upper_bound():
    rng = np.random.default_rng(9)
    for n in (3, 5, 7):
        F = field_new(n)
        for _ in range(5):
            f = random_function(F, rng)
            assert f.algebraic_immunity() <= (n + 1) // 2


def test_algebraic_immunity_bound_on_degree():
    with pytest.raises(DegreeTooLarge):
        BooleanFunction(field_new(15),
                        np.zeros(1 << 15, dtype=np.uint8)).algebraic_immunity()


def test_classify_semi_bent_and_four_valued():
    F = field_new(6)
    # direct spectra built from known functions
    values = np.zeros(64, dtype=np.int64)
    values[:6] = 16
    values[6:16] = -16
    sc = classify(WalshSpectrum(values, f0=1))
    assert sc.tag == "semi-bent" and sc.is_plateaued(2)

    h = {0: 30, 8: 18, -8: 6, -16: 10}
    values = np.concatenate([np.full(c, v, dtype=np.int64) for v, c in h.items()])
    sc = classify(WalshSpectrum(values, f0=1))
    assert sc.tag == "four-valued"
    assert set(sc.values) == set(h)


def test_classify_affine_is_other():
    F = field_new(5)
    f = BooleanFunction(F, F.trace_bits.copy())
    assert classify(f.walsh()).tag == "other"


def test_classify_bent():
    F = field_new(4)
    table = np.array([(i & 1) * ((i >> 1) & 1) ^ ((i >> 2) & 1) * ((i >> 3) & 1)
                      for i in range(16)], dtype=np.uint8)
    sc = classify(BooleanFunction(F, table).walsh())
    assert sc.tag == "bent"


def test_classify_near_bent():
    F = field_new(5)
    f = BooleanFunction.from_trace_polynomial(F, [(1, 3)])  # quadratic gold exponent
    sc = classify(f.walsh())
    assert sc.tag == "near-bent" and sc.is_plateaued(1)


def test_truth_table_file_round_trip(tmp_path):
    F = field_new(4)
    rng = np.random.default_rng(13)
    f = random_function(F, rng)
    path = tmp_path / "f.tt"
    f.write_truth_table(path)
    g = read_truth_table(path)
    assert g == f
    lines = path.read_text().splitlines()
    assert lines[0] == "n=4" and len(lines[1]) == 16


def test_spectrum_exports(tmp_path):
    F = field_new(3)
    f = BooleanFunction(F, F.trace_bits.copy())
    sp = f.walsh()
    csv_path = tmp_path / "s.csv"
    sp.export_csv(csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "gamma,value"
    assert len(lines) == 9
    assert lines[2] == "1,8"
    import json
    hist = json.loads(sp.histogram_json())
    assert hist == [[0, 7], [8, 1]]
