"""Runs a named semantics on a component along the compositional or the oracle path."""
import logging
import math
from typing import Any, Callable, Dict, Tuple

from .channels import evaluate
from .errors import ConfigError, ShapeMismatch, WidthCapExceeded
from .functions import (
    FunctionsBackend,
    boolean_interpretation,
    bottom_up_interpretation,
    bottom_up_outputs,
    multiset_semantics,
    singleton_multisets,
)
from .matrices import (
    BasWeights,
    metric_value,
    minsuc_semantics,
    propositional_interpretation,
    require_attack_tree,
    require_unique_labels,
    stoch_interpretation,
    unreliability_interpretation,
    unreliability_weights,
    index_to_bits,
)
from .models import AttributionDoc, ComponentDoc, EvalRequest, EvalResult
from .oracle import (
    label_attacks,
    matrix_by_formula,
    minsuc,
    prop_metric_by_formula,
    structure_function,
    unreliability_by_enumeration,
)
from .semirings import AttackMultiset, Semiring, multiset_semiring, metric_semiring
from .term_graph import TermGraph

logger = logging.getLogger(__name__)

SEMANTICS = ("bottom-up", "propositional", "stochastic", "unreliability", "boolean", "minsuc", "multiset")

Outcome = Tuple[str, Any, bool]


def _semiring(request: EvalRequest) -> Semiring:
    if not request.semiring:
        raise ConfigError(f"{request.semantics} semantics needs a semiring (--semiring)")
    return metric_semiring(request.semiring)


def _attribution(request: EvalRequest) -> AttributionDoc:
    if request.attribution is None:
        raise ConfigError(f"{request.semantics} semantics needs an attribution file (--attr)")
    return request.attribution


def _outputs(values) -> Tuple[str, Any]:
    values = tuple(values)
    return ("scalar", values[0]) if len(values) == 1 else ("tuple", values)


def _matrix(graph: TermGraph, matrix) -> Tuple[str, Any]:
    if tuple(graph.arity) == (0, 1):
        return "scalar", metric_value(matrix)
    return "matrix", matrix.rows()


def _bottom_up(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    R = _semiring(request)
    if graph.n_inputs:
        raise ShapeMismatch(f"bottom-up semantics needs a component without inputs, got {graph}")
    alpha = _attribution(request).singles(graph.signature.labels)
    if oracle:
        values = bottom_up_outputs(graph, R, alpha)
    else:
        values = evaluate(graph, bottom_up_interpretation(R, alpha, graph.signature))(())
    return (*_outputs(values), R.exact)


def _propositional(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    R = _semiring(request)
    alpha = _attribution(request).singles(graph.signature.labels)
    if not oracle:
        interpretation = propositional_interpretation(R, alpha, graph.signature, request.max_width)
        return (*_matrix(graph, evaluate(graph, interpretation, max_width=request.max_width)), R.exact)
    if tuple(graph.arity) == (0, 1) and R.is_absorbing:
        return "scalar", prop_metric_by_formula(graph, R, alpha, request.enum_cap), R.exact
    weights = BasWeights({b: R.one for b in alpha}, alpha)
    return (*_matrix(graph, matrix_by_formula(graph, R, weights, request.enum_cap, request.max_width)), R.exact)


def _stochastic(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    R = _semiring(request)
    weights = BasWeights(*_attribution(request).pairs(graph.signature.labels))
    if oracle:
        weights.validate(R, graph.signature.labels)
        matrix = matrix_by_formula(graph, R, weights, request.enum_cap, request.max_width)
    else:
        interpretation = stoch_interpretation(R, weights, graph.signature, request.max_width)
        matrix = evaluate(graph, interpretation, max_width=request.max_width)
    return (*_matrix(graph, matrix), R.exact)


def _unreliability(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    p = _attribution(request).singles(graph.signature.labels)
    if not oracle:
        interpretation = unreliability_interpretation(p, graph.signature, request.max_width)
        return (*_matrix(graph, evaluate(graph, interpretation, max_width=request.max_width)), False)
    if tuple(graph.arity) == (0, 1):
        return "scalar", unreliability_by_enumeration(graph, p, request.enum_cap), False
    matrix = matrix_by_formula(
        graph, metric_semiring("unrel"), unreliability_weights(p), request.enum_cap, request.max_width
    )
    return (*_matrix(graph, matrix), False)


def _boolean(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    if request.assignment is None:
        raise ConfigError("boolean semantics needs a truth assignment file (--assign)")
    t = {b: int(v) for b, v in request.assignment.singles(graph.signature.labels).items()}
    if graph.n_inputs > request.max_width:
        raise WidthCapExceeded(
            f"a truth table over {graph.n_inputs} inputs exceeds the cap of {request.max_width} wires"
        )
    if oracle:
        attack = {node: t[graph.label[node]] for node in graph.bas_nodes}
        rows = [
            structure_function(graph, attack, index_to_bits(x, graph.n_inputs))
            for x in range(2 ** graph.n_inputs)
        ]
    else:
        interpretation = boolean_interpretation(t, graph.signature)
        channel = evaluate(graph, interpretation)
        rows = FunctionsBackend().tabulate(channel)
    if graph.n_inputs:
        return "table", rows, True
    return (*_outputs(rows[0]), True)


def _minsuc(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    if not oracle:
        return "set", minsuc_semantics(graph, request.max_width), True
    require_attack_tree(graph)
    require_unique_labels(graph)
    return "set", label_attacks(graph, minsuc(graph, request.enum_cap)), True


def _multiset(graph: TermGraph, request: EvalRequest, oracle: bool) -> Outcome:
    require_attack_tree(graph)
    if oracle:
        return "set", multiset_semantics(graph), True
    labels = graph.signature.labels
    interpretation = bottom_up_interpretation(
        multiset_semiring(labels), singleton_multisets(labels), graph.signature
    )
    return "set", evaluate(graph, interpretation)(())[0], True


HANDLERS: Dict[str, Callable[[TermGraph, EvalRequest, bool], Outcome]] = {
    "bottom-up": _bottom_up,
    "propositional": _propositional,
    "stochastic": _stochastic,
    "unreliability": _unreliability,
    "boolean": _boolean,
    "minsuc": _minsuc,
    "multiset": _multiset,
}


def run_semantics(doc: ComponentDoc, request: EvalRequest, oracle: bool = False) -> EvalResult:
    """Evaluate ``request.semantics`` on ``doc``; ``oracle`` selects the brute-force path."""
    path = "oracle" if oracle else "compositional"
    logger.info("running %s semantics on %s (%s)", request.semantics, doc.name, path)
    kind, value, exact = HANDLERS[request.semantics](doc.graph, request, oracle)
    return EvalResult(
        semantics=request.semantics,
        path=path,
        arity=tuple(doc.graph.arity),
        kind=kind,
        value=value,
        exact=exact,
    )


def values_equal(a: Any, b: Any, exact: bool = True, tolerance: float = 1e-9) -> bool:
    """Compare semantics values, numbers within ``tolerance`` unless ``exact``."""
    if isinstance(a, (AttackMultiset, frozenset)) or isinstance(b, (AttackMultiset, frozenset)):
        return a == b
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(values_equal(x, y, exact, tolerance) for x, y in zip(a, b))
    if exact:
        return a == b
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tolerance)
