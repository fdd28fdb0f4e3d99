"""Data models for documents, results, reports and the comparison state."""
from typing import Any, Dict, List, Literal, Optional, Tuple, TypedDict, Union

from pydantic import BaseModel, ConfigDict, Field

from .errors import MissingLabel, ValueParseError
from .semirings import format_value, to_json_value
from .term_graph import TermGraph

SemanticsName = Literal[
    "bottom-up", "propositional", "stochastic", "unreliability", "boolean", "minsuc", "multiset"
]
ValueKind = Literal["scalar", "tuple", "vector", "matrix", "table", "set"]


class ComponentDoc(BaseModel):
    """A parsed attack-tree component with the source names of its nodes."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    graph: TermGraph
    node_names: Dict[int, str]

    @property
    def labels(self) -> frozenset:
        return self.graph.signature.labels


class AttributionDoc(BaseModel):
    """Map label -> value, or label -> (v0, v1) weight pair."""

    model_config = ConfigDict(frozen=True)

    values: Dict[str, Union[float, Tuple[float, float]]] = Field(default_factory=dict)

    def singles(self, labels) -> Dict[str, float]:
        """Single values for every label in ``labels``."""
        out = {}
        for label in sorted(labels):
            if label not in self.values:
                raise MissingLabel(f"no value given for label {label!r}")
            value = self.values[label]
            if isinstance(value, tuple):
                raise ValueParseError(f"label {label!r} needs a single value, got a pair")
            out[label] = value
        return out

    def pairs(self, labels) -> Tuple[Dict[str, float], Dict[str, float]]:
        """``(alpha0, alpha1)`` for every label in ``labels``."""
        alpha0, alpha1 = {}, {}
        for label in sorted(labels):
            if label not in self.values:
                raise MissingLabel(f"no weight pair given for label {label!r}")
            value = self.values[label]
            if not isinstance(value, tuple):
                raise ValueParseError(f"label {label!r} needs a weight pair 'v0, v1'")
            alpha0[label], alpha1[label] = value
        return alpha0, alpha1


class EvalRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    semantics: SemanticsName
    semiring: Optional[str] = None
    attribution: Optional[AttributionDoc] = None
    assignment: Optional[AttributionDoc] = None
    max_width: int = 20
    enum_cap: int = 20
    tolerance: float = 1e-9


class EvalResult(BaseModel):
    """A semantics value. Matrices are stored as row lists in binary-integer order."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    semantics: str
    path: Literal["compositional", "oracle"]
    arity: Tuple[int, int]
    kind: ValueKind
    value: Any
    exact: bool = True

    def to_json(self) -> dict:
        return {
            "arity": list(self.arity),
            "semantics": self.semantics,
            "value": to_json_value(self.value),
        }

    def to_text(self) -> str:
        if self.kind == "matrix":
            n_inputs, n_outputs = self.arity
            header = "\t".join(["y\\x"] + [_bits(x, n_inputs) for x in range(2 ** n_inputs)])
            rows = [
                "\t".join([_bits(y, n_outputs)] + [format_value(v) for v in row])
                for y, row in enumerate(self.value)
            ]
            return "\n".join([header, *rows])
        if self.kind == "table":
            n_inputs = self.arity[0]
            return "\n".join(
                f"{_bits(x, n_inputs)} -> {''.join(str(b) for b in out)}"
                for x, out in enumerate(self.value)
            )
        return format_value(self.value)


def _bits(index: int, width: int) -> str:
    return format(index, f"0{width}b") if width else "-"


class Counterexample(BaseModel):
    axiom: str
    arities: List[List[int]]
    lhs: str
    rhs: str


class AxiomReport(BaseModel):
    """Outcome of sampled law checks: instances per law and counterexamples."""

    subject: str
    checks: Dict[str, int] = Field(default_factory=dict)
    counterexamples: List[Counterexample] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def failed(self) -> set:
        return {c.axiom for c in self.counterexamples}

    def record(self, axiom: str, ok: bool, arities, lhs: str, rhs: str) -> None:
        self.checks[axiom] = self.checks.get(axiom, 0) + 1
        if not ok:
            self.counterexamples.append(
                Counterexample(axiom=axiom, arities=[list(a) for a in arities], lhs=lhs, rhs=rhs)
            )

    def to_text(self) -> str:
        lines = [f"{self.subject}: {'pass' if self.passed else 'FAIL'}"]
        failed = self.failed()
        for axiom, count in sorted(self.checks.items()):
            lines.append(f"  {axiom}: {count} checked{', FAILED' if axiom in failed else ''}")
        for c in self.counterexamples[:5]:
            lines.append(f"  counterexample {c.axiom} at {c.arities}: {c.lhs} != {c.rhs}")
        return "\n".join(lines)


class CompareOutcome(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    path: str
    compositional: Optional[EvalResult] = None
    oracle: Optional[EvalResult] = None
    equal: bool = False
    error: Optional[str] = None
    exit_code: int = 0


class CompareState(TypedDict):
    """State for the comparison workflow."""

    path: str
    request: EvalRequest
    attribution_path: Optional[str]
    assignment_path: Optional[str]
    doc: Optional[ComponentDoc]
    compositional: Optional[EvalResult]
    oracle: Optional[EvalResult]
    equal: bool
    error: Optional[str]
    exit_code: int
