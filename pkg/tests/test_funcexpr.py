import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chebapprox.funcexpr import (
    Bin,
    Call,
    EvalError,
    Neg,
    Num,
    ParseError,
    Var,
    eval_expr,
    num_vars,
    parse,
    to_text,
)


def ev(text, point):
    return eval_expr(parse(text), point)


def test_sextic_at_z1():
    text = "x^6+y^6+3*x^4*y^2+3*x^2*y^4+6*x*y^2-2*x^3"
    assert ev(text, (1.0, 0.0)) == pytest.approx(-1.0, abs=1e-14)


def test_kink_product_at_corner():
    assert ev("(x^2-1/2)*(1-abs(y))", (1.0, 1.0)) == pytest.approx(0.0, abs=1e-14)


def test_zigzag_peak():
    assert ev("min(abs(2*x), 2-abs(2*x))", (0.5, 123.0)) == pytest.approx(1.0, abs=1e-14)


def test_zigzag_target_at_origin():
    assert ev("(min(abs(2*x),2-abs(2*x))-1/2)*(1-y^2)", (0.0, 0.0)) == pytest.approx(-0.5)


def test_constant():
    assert ev("1", (5.0,)) == 1.0


def test_x_minus_x_is_zero():
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert ev("x-x", rng.normal(size=1)) == 0.0


def test_precedence():
    assert ev("2+3*4", ()) == 14.0
    assert ev("2*3^2", ()) == 18.0
    assert ev("-2^2", ()) == -4.0          # ^ binds tighter than unary minus
    assert ev("2^3^2", ()) == 512.0        # right associative
    assert ev("8/4/2", ()) == 1.0          # left associative
    assert ev("1-2-3", ()) == -4.0


def test_aliases_and_numbered_vars():
    assert ev("x1+2*x2+4*x3", (1.0, 1.0, 1.0)) == 7.0
    assert ev("x+2*y+4*z", (1.0, 1.0, 1.0)) == 7.0


def test_norm_is_euclidean():
    assert ev("norm(3, 4)", ()) == pytest.approx(5.0)
    assert ev("norm(x-1, y)", (1.0, 0.0)) == pytest.approx(0.0)


def test_sqrt():
    assert ev("sqrt(2)", ()) == pytest.approx(math.sqrt(2))
    with pytest.raises(EvalError):
        ev("sqrt(-1)", ())


def test_division_by_zero():
    with pytest.raises(EvalError):
        ev("1/(x-x)", (2.0,))


def test_fractional_exponent_rejected():
    with pytest.raises(EvalError):
        ev("2^(1/2)", ())


def test_point_dimension_checked():
    with pytest.raises(EvalError):
        ev("x2", (1.0,))
    assert num_vars(parse("x2*y")) == 2


def test_parse_errors_carry_offsets():
    with pytest.raises(ParseError) as err:
        parse("1 + frob(2)")
    assert err.value.offset == 4
    with pytest.raises(ParseError):
        parse("min(1)")            # arity
    with pytest.raises(ParseError):
        parse("(1 + 2")            # unbalanced
    with pytest.raises(ParseError):
        parse("1 + $")             # bad character
    with pytest.raises(ParseError):
        parse("2 3")               # trailing input


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse("2x")


# -- round-trip and fuzz properties -------------------------------------------

_exprs = st.recursive(
    st.one_of(
        st.floats(min_value=0.0, max_value=100.0, allow_nan=False).map(Num),
        st.integers(min_value=0, max_value=3).map(Var),
    ),
    lambda inner: st.one_of(
        inner.map(Neg),
        st.tuples(st.sampled_from("+-*/"), inner, inner).map(lambda t: Bin(*t)),
        st.tuples(inner, st.integers(min_value=0, max_value=4)).map(
            lambda t: Bin("^", t[0], Num(float(t[1])))),
        st.tuples(st.sampled_from(["min", "max"]), inner, inner).map(
            lambda t: Call(t[0], (t[1], t[2]))),
        st.tuples(inner).map(lambda t: Call("abs", t)),
    ),
    max_leaves=25,
)


@given(_exprs)
@settings(max_examples=200, deadline=None)
def test_print_parse_roundtrip(tree):
    assert parse(to_text(tree)) == tree


@given(_exprs, st.lists(st.floats(-10, 10), min_size=4, max_size=4))
@settings(max_examples=200, deadline=None)
def test_fuzz_eval_never_crashes(tree, point):
    try:
        val = eval_expr(tree, point)
    except EvalError:
        return
    assert isinstance(val, float)
