"""walshforge: exact Walsh-spectrum analysis of balanced Boolean functions
built as supports of 2-to-1 compositions P(x^2 + x) of permutation
polynomials over GF(2^n)."""

__version__ = "0.1.0"

from .boolfun import (
    AnfPolynomial,
    BooleanFunction,
    SpectrumClass,
    WalshSpectrum,
    classify,
    evaluate_univariate,
    read_truth_table,
    walsh_direct,
)
from .constructions import (
    ConstructionSpec,
    DOProduct,
    EpsilonVector,
    NihoTrinomial,
    Quadrinomial,
    TraceLinear,
    TwoToOneMap,
    Validity,
    build_niho_exponent,
    epsilon_params,
    evaluate,
    evaluate_table,
    parameterize,
    parse_spec,
    two_to_one_compose,
    verify_permutation,
)
from .field import (
    PRIMITIVE_POLYNOMIALS,
    FieldElement,
    FiniteField,
    UnitCircle,
    field_new,
    modular_inverse,
    parse_field_text,
)
from .oracles import (
    Promise,
    QuadraticForm,
    TheoremCase,
    TheoremVerdict,
    circle_root_count,
    cubic_sum,
    four_valued_histogram,
    gold_binomial_root_count,
    linear_root_bound_check,
    linearized_kernel,
    niho_walsh,
    promise_for,
    quadratic_walsh,
    relation_check,
    verify_theorem,
    weil_sum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
