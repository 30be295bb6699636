import math
import random

import pytest

from disturbmon.errors import FormulaSyntaxError, MalformedInterval
from disturbmon.stl import parse, pretty
from disturbmon.stl.ast import (And, Atom, Const, Eventually, Globally,
                                Interval, Not, Or, Until)
from gen import random_formula


def test_parse_globally_with_interval():
    phi = parse("G[2,3](v_gt(SV, 5))")
    assert phi == Globally(Interval(2, 3), Atom("v_gt", ("SV", 5.0)))


def test_parse_untimed_until():
    phi = parse("laneKeep(SV,L) U danger(SV,POV)")
    assert phi == Until(Interval(0, math.inf),
                        Atom("laneKeep", ("SV", "L")),
                        Atom("danger", ("SV", "POV")))


def test_reversed_interval_rejected():
    with pytest.raises(MalformedInterval):
        parse("G[3,2] true")


def test_negative_interval_rejected():
    with pytest.raises(MalformedInterval):
        parse("F[-1,2] true")


def test_syntax_error_carries_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("G[2,3] @")
    assert info.value.position == 7


def test_trailing_input_rejected():
    with pytest.raises(FormulaSyntaxError):
        parse("true true")


def test_precedence_not_tighter_than_and():
    assert parse("!p() & q()") == And(Not(Atom("p")), Atom("q"))


def test_precedence_and_tighter_than_or():
    assert parse("p() | q() & r()") == Or(Atom("p"), And(Atom("q"), Atom("r")))


def test_precedence_until_loosest():
    phi = parse("p() & q() U r() | s()")
    assert isinstance(phi, Until)
    assert phi.left == And(Atom("p"), Atom("q"))
    assert phi.right == Or(Atom("r"), Atom("s"))


def test_until_right_associative():
    phi = parse("p() U q() U r()")
    assert isinstance(phi, Until)
    assert isinstance(phi.right, Until)
    assert phi.left == Atom("p")


def test_temporal_prefix_tighter_than_and():
    phi = parse("G p() & q()")
    assert phi == And(Globally(Interval(), Atom("p")), Atom("q"))


def test_comparison_sugar():
    assert parse("v(SV) > 5") == Atom("v_gt", ("SV", 5.0))
    assert parse("d(POV) <= 2.5") == Atom("d_le", ("POV", 2.5))


def test_comparison_restricted_to_channels():
    with pytest.raises(FormulaSyntaxError):
        parse("speed(SV) > 5")


def test_infinite_interval():
    phi = parse("F[1,inf] true")
    assert phi == Eventually(Interval(1, math.inf), Const(True))


def test_constants_and_parens():
    assert parse("(true)") == Const(True)
    assert parse("false") == Const(False)


def test_round_trip_on_random_formulas():
    rng = random.Random(17)
    for _ in range(300):
        phi = random_formula(rng, depth=4)
        assert parse(pretty(phi)) == phi


def test_round_trip_scenario_catalog():
    from disturbmon.scenarios import SpecSet, catalog

    for variant in SpecSet:
        for phi in catalog(variant).values():
            assert parse(pretty(phi)) == phi
