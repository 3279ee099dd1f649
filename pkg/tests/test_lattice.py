from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from oracles import nullspace_pairs_zero, sympy_rank
from cylcert.errors import BothSidesParametric, NoSolution, Underdetermined, UnknownCurve
from cylcert.lattice import (
    Curve,
    CurveConfig,
    DivisorExpr,
    Equal,
    Inconclusive,
    NotEqual,
    class_compare,
    express_in_span,
    gram_rank,
    pair,
    support_of,
)
from cylcert.params import AffineExpr, ParamDomain, eq, gt

K = DivisorExpr.canonical()


def C(name, k=1):
    return DivisorExpr.curve(name, k)


def two_curves():
    return CurveConfig.build([("E", -1), ("E1", -1)], [("E", "E1", 1)], 1, 9)


# ------------------------------------------------------------------ pair


def test_pair_fiber_square_is_zero():
    cfg = two_curves()
    f = C("E") + C("E1")
    assert pair(f, f, cfg) == AffineExpr(0)


def test_pair_k_k_is_degree():
    assert pair(K, K, load("lem-e7").cfg) == AffineExpr(1)


def test_pair_k_with_minus_two_curve():
    cfg = CurveConfig.build([("D", -2)], [], 1, 9)
    assert pair(K, C("D"), cfg) == AffineExpr(0)


def test_pair_unknown_curve():
    with pytest.raises(UnknownCurve):
        pair(C("X"), C("E"), two_curves())


def test_pair_both_parametric_rejected():
    a = DivisorExpr({"E": AffineExpr.symbol("a")})
    with pytest.raises(BothSidesParametric):
        pair(a, a, two_curves())


def test_pair_parametric_side_is_affine():
    a = DivisorExpr({"E": AffineExpr.symbol("a")})
    assert pair(a, C("E1"), two_curves()) == AffineExpr.symbol("a")


# ------------------------------------------------------------------ rank


def test_rank_empty():
    assert gram_rank(CurveConfig((), {}, 1, 9), include_k=False) == 0


def test_rank_one_curve_plus_k():
    cfg = CurveConfig.build([("E", -1)], [], 1, 9)
    assert gram_rank(cfg, include_k=True) == 2 == sympy_rank(cfg)


def test_rank_e7_configuration():
    cfg = load("lem-e7").cfg
    assert len(cfg.curves) == 10
    assert gram_rank(cfg) == 9 == sympy_rank(cfg)


def test_rank_matches_oracle_on_corpus(corpus):
    for c in corpus.values():
        assert gram_rank(c.cfg) == sympy_rank(c.cfg), c.id


# ------------------------------------------------------------------ compare


def test_compare_reflexive():
    cfg = load("lem-e7").cfg
    a = C("E") + C("D3", 2)
    assert isinstance(class_compare(a, a, cfg), Equal)


def test_compare_e6a1_equivalence():
    cfg = load("lem-e6a1").cfg
    lhs = C("Eh") + C("D1") + C("E1")
    rhs = C("E3", 2) + C("D7", 2) + C("D6", 2) + C("D5", 2) + C("D4") + C("D3")
    assert isinstance(class_compare(lhs, rhs, cfg), Equal)


def test_compare_different_k_degree():
    cfg = CurveConfig.build([("E", -1), ("D", -2)], [], 1, 9)
    res = class_compare(C("E"), C("D"), cfg)
    assert isinstance(res, NotEqual) and res.witness == "K"


def test_compare_inconclusive_when_rank_low():
    cfg = two_curves()
    res = class_compare(C("E"), C("E"), cfg)
    assert isinstance(res, Inconclusive) and res.rank == 3


# ------------------------------------------------------------------ span


def test_span_single_support_curve():
    cfg = load("lem-e7").cfg
    sol = express_in_span(C("E"), ["E", "E1"], cfg)
    assert sol.particular == C("E") and sol.kernel == ()


def test_span_k_not_in_one_minus_two_curve():
    cfg = load("lem-e7").cfg
    with pytest.raises(NoSolution):
        express_in_span(K, ["D1"], cfg)


def test_span_underdetermined():
    with pytest.raises(Underdetermined):
        express_in_span(C("E"), ["E"], two_curves())


def test_span_d7_eps_direction_is_kernel():
    cfg = load("lem-d7").cfg
    v = {"D4": 1, "D3": 1, "D2": 2, "D1": 2, "E1": 2, "D6": -1, "D7": -1, "E3": -1, "E2": -1}
    assert nullspace_pairs_zero(cfg, v)
    vec = DivisorExpr(v)
    for name in cfg.names:
        assert pair(vec, C(name), cfg).is_zero()
    assert pair(vec, K, cfg).is_zero()
    support = sorted(set(v) | {"D5"})
    sol = express_in_span(-K, support, cfg)
    assert len(sol.kernel) == 1
    assert sol.contains(sol.particular + vec)


# ------------------------------------------------------------------ support


def test_support_rules():
    eps, b = AffineExpr.symbol("eps"), AffineExpr.symbol("b")
    L = DivisorExpr({"A": eps * 2, "B": b - 1, "C": AffineExpr(0)})
    dom = ParamDomain([gt("eps"), eq("b", 1)])
    assert support_of(L, dom) == ("A",)
    assert set(support_of(L, ParamDomain([gt("eps")]))) == {"A", "B"}


# ------------------------------------------------------------------ properties

NAMES = ["A", "B", "C", "D", "E"]


@st.composite
def configs(draw):
    n = draw(st.integers(1, 5))
    names = NAMES[:n]
    curves = [(x, draw(st.integers(-4, 1))) for x in names]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            m = draw(st.integers(0, 2))
            if m:
                edges.append((names[i], names[j], m))
    return CurveConfig.build(curves, edges, draw(st.integers(-3, 9)), 9)


def classes(names):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.builds(
        lambda terms, k: DivisorExpr(terms, k),
        st.dictionaries(st.sampled_from(names), coeff, max_size=len(names)),
        coeff,
    )


@settings(max_examples=1000)
@given(st.data())
def test_pair_bilinear_symmetric(data):
    cfg = data.draw(configs())
    names = list(cfg.names)
    a, b, c = (data.draw(classes(names)) for _ in range(3))
    k = data.draw(st.fractions(min_value=-3, max_value=3, max_denominator=5))
    assert pair(a, b, cfg) == pair(b, a, cfg)
    assert pair(a + b, c, cfg) == pair(a, c, cfg) + pair(b, c, cfg)
    assert pair(a * k, c, cfg) == pair(a, c, cfg) * k


@settings(max_examples=200)
@given(configs())
def test_adjunction(cfg):
    for x in cfg.curves:
        assert pair(K, C(x.name), cfg) == AffineExpr(-x.self_int - 2)


@settings(max_examples=200)
@given(st.data())
def test_compare_translation_invariant(data):
    cfg = data.draw(configs())
    names = list(cfg.names)
    a, b, c = (data.draw(classes(names)) for _ in range(3))
    assert type(class_compare(a, b, cfg)) is type(class_compare(a + c, b + c, cfg))


@settings(max_examples=200)
@given(configs(), st.integers(-3, 0), st.lists(st.integers(0, 2), min_size=5, max_size=5))
def test_rank_monotone(cfg, self_int, meets):
    new = CurveConfig(
        cfg.curves + (Curve("Z", self_int),),
        {**cfg.inter, **{frozenset((x, "Z")): m for x, m in zip(cfg.names, meets) if m}},
        cfg.k_self,
        cfg.rho,
    )
    assert gram_rank(new) >= gram_rank(cfg)
    assert gram_rank(new) == sympy_rank(new)


@settings(max_examples=100)
@given(st.data())
def test_span_solutions_check(data):
    cfg = data.draw(st.sampled_from([load("lem-e7").cfg, load("lem-d7").cfg, load("lem-e6a1").cfg]))
    names = list(cfg.names)
    support = data.draw(st.lists(st.sampled_from(names), min_size=1, unique=True))
    target = data.draw(classes(names))
    try:
        sol = express_in_span(target, support, cfg)
    except NoSolution:
        return
    assert isinstance(class_compare(sol.particular, target, cfg), Equal)
    for v in sol.kernel:
        assert nullspace_pairs_zero(cfg, {n: c.constant for n, c in v.terms.items()})
        assert v.kappa.is_zero()
    assert all(Fraction(c.constant) == c.constant for c in sol.particular.terms.values())
