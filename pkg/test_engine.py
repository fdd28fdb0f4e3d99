"""Named semantics along both evaluation paths."""
import pytest

from src.dsl import parse_assignment, parse_attribution, parse_component
from src.engine import SEMANTICS, run_semantics, values_equal
from src.errors import ConfigError, EnumerationCapExceeded, ShapeMismatch, WidthCapExceeded
from src.models import AttributionDoc, EvalRequest

COST_TEXT = "D = 30\nF = 100\nS = 80\n"
PAIR_TEXT = "D = 0, 30\nF = 0, 100\nS = 0, 80\n"
PROB_TEXT = "D = 0.2\nF = 0.5\nS = 0.4\n"


def _both(doc, **request):
    request = EvalRequest(**request)
    return run_semantics(doc, request), run_semantics(doc, request, oracle=True)


def _agree(left, right):
    return values_equal(left.value, right.value, exact=left.exact and right.exact)


@pytest.mark.parametrize(
    "semantics, semiring, expected",
    [("bottom-up", "mincost", 110.0), ("propositional", "mincost", 100.0), ("stochastic", "mincost", 100.0)],
)
def test_cost_semantics(server_room, semantics, semiring, expected):
    text = PAIR_TEXT if semantics == "stochastic" else COST_TEXT
    left, right = _both(
        server_room, semantics=semantics, semiring=semiring, attribution=parse_attribution(text, server_room.labels)
    )
    assert (left.kind, left.value) == ("scalar", expected)
    assert _agree(left, right)
    assert left.to_text() == f"{expected:g}"
    assert left.to_json() == {"arity": [0, 1], "semantics": semantics, "value": int(expected)}


def test_duplicated_step_semantics(server_room_dup):
    attribution = parse_attribution(COST_TEXT, server_room_dup.labels)
    prop, _ = _both(server_room_dup, semantics="propositional", semiring="mincost", attribution=attribution)
    bottom_up, _ = _both(server_room_dup, semantics="bottom-up", semiring="mincost", attribution=attribution)
    assert prop.value == bottom_up.value == 110.0


def test_matrix_result_of_a_two_output_component(server_room_sub):
    left, right = _both(
        server_room_sub,
        semantics="propositional",
        semiring="mincost",
        attribution=parse_attribution(COST_TEXT, server_room_sub.labels),
    )
    assert left.kind == right.kind == "matrix"
    assert left.value == right.value == [[0.0], [80.0], [30.0], [100.0]]
    assert left.to_text() == "y\\x\t-\n00\t0\n01\t80\n10\t30\n11\t100"


def test_unreliability(server_room):
    left, right = _both(server_room, semantics="unreliability", attribution=parse_attribution(PROB_TEXT))
    assert not left.exact
    assert left.value == pytest.approx(0.54, abs=1e-12)
    assert _agree(left, right)
    assert left.to_text() == "0.54"


def test_boolean(server_room, data_dir):
    left, right = _both(server_room, semantics="boolean", assignment=parse_assignment("D = 1\nF = 0\nS = 1"))
    assert left.value == right.value == 1

    copy = parse_component((data_dir / "copy.at").read_text(encoding="utf-8"))
    left, right = _both(copy, semantics="boolean", assignment=AttributionDoc())
    assert left.kind == "table"
    assert left.value == right.value == [(0, 0), (1, 1)]
    assert left.to_text() == "0 -> 00\n1 -> 11"


def test_attack_sets(server_room):
    left, right = _both(server_room, semantics="minsuc")
    assert left.value == right.value
    assert left.to_text() == "{{F}, {D, S}}"
    left, right = _both(server_room, semantics="multiset")
    assert left.value == right.value
    assert left.to_text() == "{{F}: 1, {D, F}: 1, {D, S}: 1, {F, S}: 1}"


def test_every_semantics_has_a_handler(server_room):
    assert set(SEMANTICS) == {
        "bottom-up", "propositional", "stochastic", "unreliability", "boolean", "minsuc", "multiset"
    }


def test_missing_configuration(server_room):
    with pytest.raises(ConfigError):
        run_semantics(server_room, EvalRequest(semantics="propositional"))
    with pytest.raises(ConfigError):
        run_semantics(server_room, EvalRequest(semantics="bottom-up", semiring="mincost"))
    with pytest.raises(ConfigError):
        run_semantics(server_room, EvalRequest(semantics="boolean"))


def test_caps(server_room, data_dir):
    attribution = parse_attribution(COST_TEXT)
    with pytest.raises(WidthCapExceeded):
        run_semantics(
            server_room,
            EvalRequest(semantics="propositional", semiring="mincost", attribution=attribution, max_width=3),
        )
    with pytest.raises(EnumerationCapExceeded):
        run_semantics(
            server_room,
            EvalRequest(semantics="propositional", semiring="mincost", attribution=attribution, enum_cap=2),
            oracle=True,
        )
    copy = parse_component((data_dir / "copy.at").read_text(encoding="utf-8"))
    with pytest.raises(ShapeMismatch):
        run_semantics(copy, EvalRequest(semantics="bottom-up", semiring="mincost", attribution=AttributionDoc()))


def test_values_equal():
    assert values_equal((1.0, 2.0), [1.0, 2.0])
    assert not values_equal(0.3, 0.1 + 0.2)
    assert values_equal(0.3, 0.1 + 0.2, exact=False)
    assert not values_equal([[1.0]], [[1.0], [2.0]])
