import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsemi import core
from finsemi.errors import BudgetExceeded, ParseError, UnboundVariable
from finsemi.terms import (
    ZERO,
    Concat,
    Identity,
    Occurrence,
    Power,
    Var,
    concat,
    evaluate,
    expand_zero,
    find_failure,
    format_identity,
    format_term,
    load_identities,
    malcev_split,
    parse_identities,
    parse_identity,
    parse_term,
    profile,
    read_identities,
    res_left,
    res_right,
    satisfies,
    substitute,
    unroll,
)
from finsemi.zoo import build_C, build_T, build_Ufree, build_V, build_W

x, y, z = Var("x"), Var("y"), Var("z")


def test_parse_example_identity():
    eps = parse_identity("x y = y^(w+1) x^(w+1)")
    assert eps == Identity(Concat((x, y)), Concat((Power(y, 1), Power(x, 1))))
    assert parse_identity("x y ≈ y^(ω+1) * x^(ω+1)") == eps


def test_trivial_and_zero_forms():
    assert parse_identity("x = x").is_trivial
    eps = parse_identity("x y x = 0")
    assert eps.is_zero_form and eps.rhs is ZERO


def test_chained_identities():
    parts = parse_identities("x y x = x^2 = 0")
    assert [format_identity(e) for e in parts] == ["x y x = 0", "x x = 0"]
    parts = parse_identities("x^2 y = x y x = y x^2")
    assert [format_identity(e) for e in parts] == ["x x y = x y x", "x y x = y x x"]


def test_finite_exponent_sugar():
    assert parse_term("x^3") == concat(x, x, x)
    assert parse_term("(x y)^2") == concat(x, y, x, y)


@pytest.mark.parametrize("text, where", [("x ^", 3), ("(x y", 4), ("x = ", 4), ("x ! y", 2)])
def test_parse_errors_report_position(text, where):
    with pytest.raises(ParseError) as info:
        parse_identity(text)
    assert info.value.position == where


def test_concat_flattens():
    t = concat(concat(x, y), concat(z, x))
    assert t == Concat((x, y, z, x))
    assert concat(x) == x


def test_profile_examples():
    p = profile(parse_term("x y z"))
    assert p.content == {"x", "y", "z"} and p.length == 3
    assert (p.first, p.last) == ("x", "z")
    assert all(p.multiplicity(v) is Occurrence.ONE for v in "xyz")
    p = profile(parse_term("y^(w+1) x^(w+1)"))
    assert p.length == math.inf and (p.first, p.last) == ("y", "x")
    assert p.multiplicity("x") is Occurrence.MANY and p.multiplicity("y") is Occurrence.MANY
    p = profile(parse_term("(x y)^w x"))
    assert (p.first, p.last) == ("x", "x")
    assert p.multiplicity("x") is Occurrence.MANY and p.multiplicity("z") is Occurrence.ZERO


def test_evaluate_examples():
    C3 = build_C(3).table
    a = C3.index("a")
    assert evaluate(x, C3, {"x": a}) == a
    assert evaluate(parse_term("(x y)^(w+1)"), C3, {"x": a, "y": a}) == C3.index("a^3")
    T2 = build_T(2).table
    gens = [T2.index("a1"), T2.index("a2")]
    for values in itertools.product(gens, repeat=3):
        assert evaluate(parse_term("x1 x2 x3"), T2, dict(zip(["x1", "x2", "x3"], values))) == T2.zero
    with pytest.raises(UnboundVariable):
        evaluate(parse_term("x y"), C3, {"x": a})


def test_expand_zero():
    got = [format_identity(e) for e in expand_zero(parse_identity("x^2 = 0"))]
    assert got == ["u x x = x x", "x x u = x x"]
    got = [format_identity(e) for e in expand_zero(parse_identity("x = 0"))]
    assert got == ["u x = x", "x u = x"]
    parts = expand_zero(parse_identity("x1 x2 x3 = 0"))
    assert all(len(p.variables) == 4 for p in parts)


def test_satisfies_examples():
    W2 = build_W(2).table
    assert satisfies(W2, parse_identity("x1 x2 = x1 x2 y"))
    T3 = build_T(3).table
    r = satisfies(T3, parse_identity("x1 x2 x3 = x2 x1 x3"))
    assert not r
    assert {k: T3.labels[v] for k, v in r.witness.items()} == {"x1": "a1", "x2": "a2", "x3": "a3"}
    assert satisfies(T3, parse_identity("x = x"))


def test_zero_form_semantics():
    # S |= rho = 0 iff S has a zero and rho always evaluates to it
    for S in [build_T(2).table, build_Ufree(2).table, build_C(2).table, build_C(3).table,
              build_W(2).table, build_V(1, 2).table]:
        for text in ["x x = 0", "x y x = 0", "x y = 0", "x1 x2 x3 = 0"]:
            eps = parse_identity(text)
            names = eps.variables
            values = {evaluate(eps.lhs, S, dict(zip(names, vs)))
                      for vs in itertools.product(range(S.order), repeat=len(names))}
            expected = S.zero is not None and values == {S.zero}
            assert bool(satisfies(S, eps)) == expected, (S.name, text)


def test_find_failure_budget():
    T3 = build_T(3).table
    with pytest.raises(BudgetExceeded):
        find_failure(T3, parse_identity("x1 x2 x3 x4 = x4 x3 x2 x1"), max_assignments=1000)


def test_restrictions():
    assert format_identity(res_left(parse_identity("x y = y x"))) == "z x y = z y x"
    assert format_identity(res_right(parse_identity("x = x^(w+1)"))) == "x z = x^(w+1) z"
    twice = res_left(res_left(parse_identity("y1 y2 = y2 y1")), "x1")
    assert format_identity(twice) == "x1 z y1 y2 = x1 z y2 y1"
    with pytest.raises(ValueError):
        res_left(parse_identity("x = 0"))


def test_substitute():
    assert substitute(parse_term("x y"), "x", parse_term("x z")) == parse_term("x z y")
    assert format_term(substitute(parse_term("x^w"), "x", parse_term("y y"))) == "(y y)^w"
    rho1 = parse_term("y x")
    got = substitute(concat(x, rho1), "x", parse_term("x s"))
    assert got == parse_term("x s y x s")


def test_unroll_examples():
    assert format_term(unroll(parse_term("(x y)^(w+1)"), "left")) == "x y (x y)^w"
    assert unroll(parse_term("x^w"), "left") == parse_term("x^w")
    assert format_term(unroll(parse_term("x^(w+2)"), "right")) == "x^w x x"


def test_malcev_split():
    got = malcev_split(parse_identity("x y z = x y^(w+1) z"), 2)
    assert format_identity(got) == "x1 x2 y1 y2 z1 z2 = x1 x2 (y1 y2)^(w+1) z1 z2"
    got = malcev_split(parse_identity("x = x^2"), 3)
    assert format_identity(got) == "x1 x2 x3 = x1 x2 x3 x1 x2 x3"
    assert malcev_split(parse_identity("x y = y x"), 1).lhs == parse_term("x1 y1")


def test_identity_files(tmp_path):
    path = tmp_path / "ids.txt"
    path.write_text("# comment\nx y = y x\n\nx^2 = 0   # zero form\n")
    ids = load_identities(path)
    assert len(ids) == 3
    assert len(read_identities(path.read_text(), expand=False)) == 2


# ---------------------------------------------------------------------------
# properties

NAMES = ["x", "y", "z", "x1", "x2"]


def terms():
    leaf = st.sampled_from(NAMES).map(Var)
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=4).map(lambda ps: concat(*ps)),
            st.tuples(inner, st.integers(0, 3)).map(lambda bk: Power(*bk)),
        ),
        max_leaves=8,
    )


@given(terms())
def test_print_parse_round_trip(t):
    assert parse_term(format_term(t)) == t


SMALL = [build_C(3).table, build_T(2).table, build_W(2).table, build_V(1, 2).table,
         core.validate([[0, 0], [1, 1]]), core.from_function(range(3), lambda a, b: (a + b) % 3)]


@settings(max_examples=60)
@given(terms(), terms(), st.data())
def test_evaluate_is_a_homomorphism(u, v, data):
    S = data.draw(st.sampled_from(SMALL))
    env = {n: data.draw(st.integers(0, S.order - 1)) for n in NAMES}
    assert evaluate(concat(u, v), S, env) == S.mul(evaluate(u, S, env), evaluate(v, S, env))


@settings(max_examples=60)
@given(terms(), st.integers(0, 3), st.sampled_from(["left", "right"]), st.data())
def test_unroll_preserves_value(base, k, side, data):
    p = Power(base, k)
    S = data.draw(st.sampled_from(SMALL))
    env = {n: data.draw(st.integers(0, S.order - 1)) for n in NAMES}
    assert evaluate(unroll(p, side), S, env) == evaluate(p, S, env)
