import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from cylcert.errors import NameCollision, NotMinusOne, NotThroughPoint, ScriptError
from cylcert.fibration import check_singular_fiber
from cylcert.lattice import Curve, CurveConfig
from cylcert.surgery import SurgeryStep, apply_script, blow_down, blow_up


def two_minus_two():
    return CurveConfig.build([("C", -2), ("D", -2)], [("C", "D", 1)], 1, 9)


def test_blow_up_two_curves():
    out = blow_up(two_minus_two(), ["C", "D"], "N")
    assert out.self_int("C") == out.self_int("D") == -3
    assert out.meet("C", "D") == 0
    assert out.meet("C", "N") == out.meet("D", "N") == 1
    assert out.self_int("N") == -1
    assert (out.k_self, out.rho) == (0, 10)


def test_blow_up_errors():
    cfg = CurveConfig.build([("C", -2), ("D", -2)], [], 1, 9)
    with pytest.raises(NotThroughPoint):
        blow_up(cfg, ["C", "D"], "N")
    with pytest.raises(NameCollision):
        blow_up(two_minus_two(), ["C", "D"], "C")


def test_counters_after_four():
    cfg = two_minus_two()
    cfg = blow_up(cfg, ["C", "D"], "N1")
    cfg = blow_up(cfg, ["C", "N1"], "N2")
    cfg = blow_up(cfg, ["C", "N2"], "N3")
    cfg = blow_up(cfg, ["N3", "N2"], "N4")
    assert (cfg.k_self, cfg.rho) == (-3, 13)


def test_blow_down_fiber_pair():
    cfg = CurveConfig.build([("E", -1), ("E1", -1)], [("E", "E1", 1)], 1, 9)
    out = blow_down(cfg, "E")
    assert out.self_int("E1") == 0 and (out.k_self, out.rho) == (2, 8)


def test_blow_down_formula():
    cfg = CurveConfig.build([("C", -2), ("D", -1), ("e", -1)], [("C", "e", 1), ("D", "e", 1)], 1, 9)
    out = blow_down(cfg, "e")
    assert (out.self_int("C"), out.self_int("D"), out.meet("C", "D")) == (-1, 0, 1)


def test_blow_down_needs_minus_one():
    with pytest.raises(NotMinusOne):
        blow_down(two_minus_two(), "C")


def test_empty_script_identity():
    cfg = load("lem-e7").cfg
    assert apply_script(cfg, []) == cfg


def test_script_error_index():
    cfg = two_minus_two()
    steps = [SurgeryStep(("C", "D"), "N"), SurgeryStep(("C", "D"), "M")]
    with pytest.raises(ScriptError) as err:
        apply_script(cfg, steps)
    assert err.value.index == 1


def test_a4a3_four_step_replay():
    cert = load("lem-a4a3")
    final = apply_script(cert.cfg, cert.script)
    assert (final.k_self, final.rho) == (-3, 13)
    ref = cert.fib.fiber_class(0)
    assert all(check_singular_fiber(f, ref, final) for f in cert.fib.fibers)
    big = max(cert.fib.fibers, key=len)
    assert sorted(big.values()) == [1, 1, 2, 2, 4, 6, 8]


def test_a4_three_lines_replay():
    cert = load("lem-a4-three-lines")
    final = apply_script(cert.cfg, cert.script)
    ref = cert.fib.fiber_class(0)
    assert all(check_singular_fiber(f, ref, final) for f in cert.fib.fibers)


def test_corpus_replays_keep_invariants(corpus):
    for cert in corpus.values():
        final = apply_script(cert.cfg, cert.script)
        assert final.rho + final.k_self == 10
        for c in final.curves:
            assert final.k_degree(c.name) == -c.self_int - 2


# ------------------------------------------------------------------ properties

NAMES = ["A", "B", "C", "D", "E", "F"]


@st.composite
def configs_with_point(draw):
    n = draw(st.integers(2, 6))
    names = NAMES[:n]
    curves = tuple(Curve(x, draw(st.integers(-5, 2))) for x in names)
    inter = {}
    for i in range(n):
        for j in range(i + 1, n):
            m = draw(st.integers(0, 3))
            if m:
                inter[frozenset((names[i], names[j]))] = m
    at = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
    for i, a in enumerate(at):
        for b in at[i + 1 :]:
            key = frozenset((a, b))
            inter[key] = max(inter.get(key, 0), 1)
    return CurveConfig(curves, inter, draw(st.integers(-3, 9)), draw(st.integers(1, 12))), at


@settings(max_examples=1000)
@given(configs_with_point())
def test_round_trip(data):
    cfg, at = data
    up = blow_up(cfg, at, "Z")
    assert up.rho + up.k_self == cfg.rho + cfg.k_self
    for a in cfg.names:
        for b in cfg.names:
            if a != b and not (a in at and b in at):
                assert up.meet(a, b) == cfg.meet(a, b)
    assert blow_down(up, "Z") == cfg
