import numpy as np
import pytest

from walshforge import (
    BooleanFunction,
    DOProduct,
    NihoTrinomial,
    Quadrinomial,
    TraceLinear,
    build_niho_exponent,
    epsilon_params,
    evaluate,
    evaluate_table,
    field_new,
    parameterize,
    parse_spec,
    two_to_one_compose,
    verify_permutation,
)
from walshforge.constructions import (
    TwoToOneMap,
    find_fourbe_cs,
    sample_do,
    sample_quadrinomial,
    spec_from_json,
    table_is_permutation,
    valid_trace_linear_cs,
)
from walshforge.errors import (
    Eps1Zero,
    GcdConditionViolated,
    InvalidSpec,
    NotTwoToOne,
)


def spec_roster_small():
    """Validated specs across all four families with n <= 10."""
    F6 = field_new(6)
    roster = [
        NihoTrinomial.build(3),
        NihoTrinomial.build(3, c=F6.pow(F6.subfield_embed(2), 2)),
        NihoTrinomial.build(5),
        Quadrinomial.build(3, 1, 0, 1),
        sample_quadrinomial(3, 1, count=1)[0],
        sample_quadrinomial(3, 3, count=1)[0],
        DOProduct.build(6, 2, 1),
        DOProduct.build(6, 2, 2),
        DOProduct.build(6, 2, 3),
        DOProduct.build(7, 1, 1),
        DOProduct.build(9, 3, 1),
        DOProduct.build(9, 3, 2),
        DOProduct.build(9, 3, 3),
        TraceLinear.build(1, 6, "gold"),
        TraceLinear.build(2, 3, "halved"),
        TraceLinear.build(2, 3, "double", i=1),
    ]
    for spec in roster:
        assert spec.validate().ok, spec
    return roster


# -- exponent construction ----------------------------------------------------


def test_one_fifth_exponents():
    assert build_niho_exponent(3, "one-fifth") == 15
    assert build_niho_exponent(5, "one-fifth") == 621
    assert build_niho_exponent(7, "one-fifth") == 3303


def test_exponent_side_conditions():
    with pytest.raises(GcdConditionViolated):
        build_niho_exponent(4, "one-fifth")  # m even
    with pytest.raises(GcdConditionViolated):
        build_niho_exponent(3, "plus", k=1)  # gcd(3, 9) = 3
    with pytest.raises(GcdConditionViolated):
        build_niho_exponent(3, "minus", k=2)  # gcd(3, 9) = 3
    with pytest.raises(GcdConditionViolated):
        build_niho_exponent(3, "plus", k=3)  # k < m required
    with pytest.raises(GcdConditionViolated):
        build_niho_exponent(3, "cubed")


def test_exponent_values_check_out_modularly():
    # 2^k * inv(2^k + 1) * (2^m - 1) + 1, all mod arithmetic on the circle order
    s = build_niho_exponent(5, "plus", k=4)
    assert s == 993
    assert (993 - 1) // 31 == 32  # e = 32 on the mod-33 circle


# -- validation ------------------------------------------------------------------


def test_quadrinomial_condition_detection():
    spec = Quadrinomial.build(3, 1, 0, 1)
    assert spec.conditions() == (2,)
    assert spec.validate().ok
    assert spec.validate().detail("conditions") == (2,)


def test_quadrinomial_rejects_even_m():
    spec = Quadrinomial.build(2, 1, 0, 1)
    v = spec.validate()
    assert not v.ok and "odd" in v.clause


def test_quadrinomial_rejects_unmatched_coefficients():
    F = field_new(6)
    # b != a+1, b not of the omega shape, c = 1, coefficients outside subfield
    spec = Quadrinomial(field=F, m=3, a=F.alpha, b=F.pow(F.alpha, 13), c=1)
    v = spec.validate()
    assert not v.ok


def test_niho_validation():
    assert NihoTrinomial.build(3).validate().ok
    v = NihoTrinomial.build(4).validate()
    assert not v.ok and "odd" in v.clause
    # c inside the half field is rejected for the one-fifth family
    F = field_new(6)
    bad = NihoTrinomial(field=F, m=3, variant="one-fifth", c=F.subfield_embed(3))
    assert not bad.validate().ok


def test_do_validation():
    assert DOProduct.build(6, 2, 1).validate().ok
    v = DOProduct.build(6, 3, 1).validate()
    assert not v.ok and "odd" in v.clause
    v = DOProduct.build(6, 2, 2, a=1).validate()
    assert not v.ok  # 1^anything == 1
    v = DOProduct.build(8, 2, 3).validate()
    assert not v.ok and "3m" in v.clause
    assert DOProduct.build(9, 3, 3).validate().ok


def test_trace_linear_validation():
    assert TraceLinear.build(1, 6, "gold").validate().ok
    assert not TraceLinear.build(1, 4, "gold").validate().ok  # k = 0 mod 4
    assert not TraceLinear.build(1, 3, "halved").validate().ok  # m = 1
    assert TraceLinear.build(2, 3, "halved").validate().ok
    assert not TraceLinear.build(2, 2, "halved").validate().ok  # k even
    assert not TraceLinear.build(3, 3, "double", i=1).validate().ok  # m odd
    assert not TraceLinear.build(6, 3, "double", i=1).validate().ok  # 3 | m
    assert TraceLinear.build(2, 3, "double", i=1).validate().ok
    F = field_new(6)
    bad = TraceLinear(field=F, m=2, k=3, shape="double", i=1, c=1)
    assert not bad.validate().ok  # c^((2^m-1)/3) = 1


def test_fourbe_variants_validate_only_with_permuting_c():
    cs = find_fourbe_cs(5, 4, "plus", count=2)
    assert cs, "expected permuting coefficients for this variant"
    spec = NihoTrinomial.build(5, "plus", k=4, c=cs[0])
    assert spec.validate().ok
    # most coefficients do not give a permutation
    F = field_new(10)
    bad = NihoTrinomial(field=F, m=5, variant="plus", k=4, c=F.alpha)
    v = bad.validate()
    if not v.ok:
        assert "permutation" in v.clause


# -- evaluation -------------------------------------------------------------------


def test_evaluate_at_zero_is_zero():
    for spec in spec_roster_small():
        assert evaluate(spec, 0) == 0


def test_do_shape1_is_the_cube_on_three_bits():
    spec = DOProduct.build(3, 1, 1)
    F = spec.field
    for x in F.elements():
        assert evaluate(spec, x) == F.pow(x, 3)


def test_niho_trinomial_matches_expanded_form():
    spec = NihoTrinomial.build(3)
    F = spec.field
    c = spec.c
    for x in F.elements():
        expected = F.mul(c, x) ^ F.pow(x, 15) ^ F.pow(x, (15 * 8) % 63)
        assert evaluate(spec, x) == expected


def test_evaluate_refuses_invalid_spec():
    bad = NihoTrinomial.build(4)
    with pytest.raises(InvalidSpec):
        evaluate(bad, 1)
    # the unchecked escape hatch still works for negative testing
    assert isinstance(evaluate(bad, 1, unchecked=True), int)


def test_table_is_permutation_helper():
    F8 = field_new(3)
    assert table_is_permutation(F8.poly_table([(1, 2)]))  # Frobenius square
    F4 = field_new(2)
    assert not table_is_permutation(F4.poly_table([(1, 3)]))  # x^3 on GF(4)


def test_verify_permutation_roster():
    for spec in spec_roster_small():
        assert verify_permutation(spec)


def test_verify_permutation_negative():
    # x^3 over GF(4) as an (invalid) shape-1 product: x * x^2
    spec = DOProduct.build(2, 1, 1)
    assert not spec.validate().ok
    assert not verify_permutation(spec, unchecked=True)


# -- 2-to-1 composition ---------------------------------------------------------


def test_squares_map_is_two_to_one():
    F = field_new(3)
    table = F.poly_table([(1, 2)]) ^ np.arange(8, dtype=np.int64)
    mapping = TwoToOneMap(F, table)
    assert len(mapping.image) == 4
    assert mapping.preimage_histogram == {0: 4, 2: 4}


def test_two_to_one_rejects_permutation_table():
    F = field_new(3)
    with pytest.raises(NotTwoToOne):
        TwoToOneMap(F, np.arange(8, dtype=np.int64))


def test_compose_preimage_counts():
    mapping = two_to_one_compose(NihoTrinomial.build(3))
    assert mapping.preimage_histogram == {0: 32, 2: 32}
    assert len(mapping.image) == 32
    assert mapping(0) == 0


# -- parameterization ---------------------------------------------------------------


def test_parameterized_function_basics():
    for spec in spec_roster_small():
        f = parameterize(spec)
        assert f.is_balanced()
        assert f.value(0) == 1
        assert f.degree() <= spec.n - 1


def test_parameterize_is_cached():
    spec = NihoTrinomial.build(3)
    assert parameterize(spec) is parameterize(spec)


def test_table1_row6_both_coefficients():
    F = field_new(6)
    w = F.subfield_embed(2)
    expected = {0: 30, 8: 18, -8: 6, -16: 10}
    for c in (w, F.sqr(w)):
        f = parameterize(NihoTrinomial.build(3, c=c))
        assert f.walsh().histogram == expected
        assert f.nonlinearity() == 24
        assert f.degree() == 4


def test_closed_forms_of_the_small_parameterized_functions():
    # the n=6 and n=10 one-fifth functions equal Tr(R(x)) + 1 for explicit R
    F6 = field_new(6)
    w = F6.subfield_embed(2)
    for c in (w, F6.sqr(w)):
        f = parameterize(NihoTrinomial.build(3, c=c))
        g = BooleanFunction.from_trace_polynomial(
            F6, [(1, 15), (1, 11), (c, 1)], plus_one=True)
        assert f == g
    F10 = field_new(10)
    w10 = F10.subfield_embed(2)
    exps = [221, 219, 187, 171, 125, 109, 101, 95, 47, 35]
    for c in (w10, F10.sqr(w10)):
        f = parameterize(NihoTrinomial.build(5, c=c))
        g = BooleanFunction.from_trace_polynomial(
            F10, [(1, e) for e in exps] + [(c, 1)], plus_one=True)
        assert f == g


def test_quadrinomial_closed_form_row6():
    # (a,b,c) = (1,0,1), n = 6: the parameterized function is Tr(x^5) + 1
    f = parameterize(Quadrinomial.build(3, 1, 0, 1))
    g = BooleanFunction.from_trace_polynomial(field_new(6), [(1, 5)], plus_one=True)
    assert f == g


def test_quadrinomial_closed_form_row10():
    f = parameterize(Quadrinomial.build(5, 1, 0, 1))
    g = BooleanFunction.from_trace_polynomial(
        field_new(10), [(1, 73), (1, 13), (1, 11)], plus_one=True)
    assert f == g


def test_do_row1_closed_form():
    f = parameterize(DOProduct.build(6, 2, 1))
    g = BooleanFunction.from_trace_polynomial(field_new(6), [(1, 13)], plus_one=True)
    assert f == g


# -- epsilon parameters ---------------------------------------------------------


def test_epsilons_vanish_at_gamma_zero():
    F = field_new(6)
    spec = sample_quadrinomial(3, 2, count=1)[0]
    ev = epsilon_params(F, 0, spec.a, spec.b, spec.c)
    assert ev.eps == (0, 0, 0, 0)


def test_epsilon_condition1_collapse():
    F = field_new(6)
    for spec in sample_quadrinomial(3, 1, count=4):
        w = spec.condition_omega()
        assert w is not None
        for g in F.elements():
            ev = epsilon_params(F, g, spec.a, spec.b, spec.c, omega=w)
            assert ev.eps[0] == ev.eps[1] == ev.eps[2]
            assert F.sqr(ev.eps[1]) ^ F.mul(ev.eps[0], ev.eps[2]) == 0


def test_epsilon_shift_relations():
    # veps is computed independently from (u, v); the linear relations
    # between the two tuples must hold for arbitrary coefficients
    F = field_new(6)
    rng = np.random.default_rng(31)
    for _ in range(30):
        g, a, b, c = (int(rng.integers(0, 64)) for _ in range(4))
        ev = epsilon_params(F, g, a, b, c)
        e1, e2, e3, e4 = ev.eps
        v = F.mul(g, b) ^ F.mul(F.conj(g, 3), F.conj(a, 3))
        eps_extra = v ^ F.conj(v, 3)
        assert ev.veps == (e1, e2 ^ e1, e3 ^ e1, e4 ^ eps_extra)


def test_epsilon_trace_quantity_conditions_2_and_3():
    F = field_new(6)
    for cond in (2, 3):
        for spec in sample_quadrinomial(3, cond, count=4):
            for g in F.elements():
                ev = epsilon_params(F, g, spec.a, spec.b, spec.c)
                if ev.eps[0] == 0:
                    continue
                t = ev.trace_quantity()
                assert t in (0, None)


def test_epsilon_trace_quantity_needs_eps1():
    F = field_new(6)
    spec = sample_quadrinomial(3, 2, count=1)[0]
    ev = epsilon_params(F, 0, spec.a, spec.b, spec.c)
    with pytest.raises(Eps1Zero):
        ev.trace_quantity()


# -- sampling -----------------------------------------------------------------------


def test_sampling_determinism_and_validity():
    a = sample_quadrinomial(3, 1, count=5, seed=7)
    b = sample_quadrinomial(3, 1, count=5, seed=7)
    assert a == b
    c = sample_quadrinomial(3, 1, count=5, seed=8)
    assert a != c
    for spec in a:
        assert 1 in spec.conditions()
    for spec in sample_do(9, 3, 2, count=5, seed=3):
        assert spec.validate().ok


def test_valid_trace_linear_cs():
    cs = valid_trace_linear_cs(2, 3, "halved")
    F = field_new(6)
    assert cs == sorted([F.subfield_embed(2), F.sqr(F.subfield_embed(2))])
    assert valid_trace_linear_cs(2, 3, "double", i=1) == cs
    gold = valid_trace_linear_cs(2, 6, "gold")
    assert len(gold) == 12  # GF(16) minus GF(4)


# -- spec text and JSON ------------------------------------------------------------


def test_parse_spec_round_trips():
    for spec in spec_roster_small():
        again = parse_spec(spec.text())
        assert again == spec
        assert spec_from_json(spec.params()) == spec


def test_parse_spec_coefficient_syntaxes():
    s1 = parse_spec("family=niho-trinomial m=3 variant=one-fifth c=subfield:2")
    F = field_new(6)
    assert s1.c == F.subfield_embed(2)
    s2 = parse_spec("family=do n=6 m=2 shape=2 a=alpha")
    assert s2.a == F.alpha
    s3 = parse_spec("family=do n=6 m=2 shape=2 a=alpha^5")
    assert s3.a == F.pow(F.alpha, 5)
    s4 = parse_spec("family=quadrinomial m=3 a=0x1 b=0x0 c=1")
    assert (s4.a, s4.b, s4.c) == (1, 0, 1)


def test_parse_spec_diagnostics_name_the_bad_key():
    with pytest.raises(InvalidSpec, match="family"):
        parse_spec("m=3")
    with pytest.raises(InvalidSpec, match="wrong"):
        parse_spec("family=do n=6 m=2 shape=1 wrong=3")
    with pytest.raises(InvalidSpec, match="shape"):
        parse_spec("family=trace-linear m=2 k=3")
    with pytest.raises(InvalidSpec, match="duplicate"):
        parse_spec("family=do n=6 n=7 m=2 shape=1")
    with pytest.raises(InvalidSpec, match="malformed"):
        parse_spec("family=do n=6 m=2 shape")
    with pytest.raises(InvalidSpec, match="unknown family"):
        parse_spec("family=cubic m=3")
    with pytest.raises(InvalidSpec):
        parse_spec("family=quadrinomial m=3 a=0x1 b=0x0 c=zzz")
