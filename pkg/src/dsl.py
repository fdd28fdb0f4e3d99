"""Text formats: components, attributions and truth assignments.

A component::

    # reach the server room
    component badge {
      bas D ; bas F ; bas S
      gate turnstile = OR(D, F)
      gate door = OR(F, S)
      gate root = AND(turnstile, door)
      outputs [root]
    }

Statements end at ``;`` or a newline; the ``component NAME { }`` wrapper is
optional. ``event`` is accepted for ``bas``. Node ids follow declaration order.
"""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from .errors import (
    DslSyntaxError,
    DuplicateNodeDecl,
    UnknownLabel,
    UnknownNodeRef,
    ValueParseError,
)
from .models import AttributionDoc, ComponentDoc
from .semirings import parse_ext_real
from .term_graph import GATE_PATTERN, RESERVED_NAMES, at_signature, gate_name, make_term_graph

TOKEN = re.compile(
    r"(?P<comment>\#[^\n]*)"
    r"|(?P<newline>\n)"
    r"|(?P<space>[ \t\r]+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[\[\](){},;:=])"
)
STATEMENTS = ("inputs", "bas", "event", "gate", "outputs")
ASSIGNMENT_LINE = re.compile(r"^\s*(?P<label>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<value>.*?)\s*$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN.match(text, pos)
        if not match:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "newline":
            tokens.append(Token("sep", "\n", line, pos - line_start + 1))
            line, line_start = line + 1, match.end()
        elif kind in ("name", "punct"):
            token_kind = "sep" if match.group() == ";" else kind
            tokens.append(Token(token_kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    """Recursive-descent parser for one component."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.current = 0
        self.ids: Dict[str, int] = {}
        self.inputs: Optional[List[int]] = None
        self.outputs: Optional[List[Token]] = None
        self.label: Dict[int, str] = {}
        self.children: Dict[int, List[Token]] = {}
        self.bas_labels = set()

    # --- token helpers ---

    def _peek(self) -> Token:
        return self.tokens[self.current]

    def _advance(self) -> Token:
        token = self.tokens[self.current]
        if token.kind != "eof":
            self.current += 1
        return token

    def _check(self, kind: str, text: Optional[str] = None) -> bool:
        token = self._peek()
        return token.kind == kind and (text is None or token.text == text)

    def _consume(self, kind: str, text: Optional[str] = None, message: str = "") -> Token:
        if self._check(kind, text):
            return self._advance()
        token = self._peek()
        found = token.text.strip() or token.kind
        raise DslSyntaxError(message or f"expected {text or kind}, found {found!r}", token.line, token.col)

    def _skip_separators(self) -> None:
        while self._check("sep"):
            self._advance()

    def _end_statement(self) -> None:
        if not (self._check("sep") or self._check("eof") or self._check("punct", "}")):
            token = self._peek()
            raise DslSyntaxError(f"expected end of statement, found {token.text!r}", token.line, token.col)

    # --- grammar ---

    def parse(self) -> ComponentDoc:
        self._skip_separators()
        name = "component"
        wrapped = self._check("name", "component")
        if wrapped:
            self._advance()
            name = self._consume("name", message="expected a component name").text
            self._skip_separators()
            self._consume("punct", "{")
        while True:
            self._skip_separators()
            if self._check("eof") or (wrapped and self._check("punct", "}")):
                break
            self._statement()
        if wrapped:
            self._consume("punct", "}", message="missing closing brace")
            self._skip_separators()
        self._consume("eof", message="unexpected text after the component")
        return self._build(name)

    def _statement(self) -> None:
        token = self._consume("name", message="expected a statement")
        if token.text not in STATEMENTS:
            raise DslSyntaxError(
                f"unknown statement {token.text!r}; expected one of {', '.join(STATEMENTS)}",
                token.line,
                token.col,
            )
        getattr(self, f"_{'bas' if token.text == 'event' else token.text}")(token)
        self._end_statement()

    def _declare(self, token: Token) -> int:
        if token.text in self.ids:
            raise DuplicateNodeDecl(f"node {token.text!r} is declared twice", token.line, token.col)
        self.ids[token.text] = len(self.ids)
        return self.ids[token.text]

    def _name_list(self) -> List[Token]:
        self._consume("punct", "[")
        names = []
        while not self._check("punct", "]"):
            names.append(self._consume("name", message="expected a node name"))
            if not self._check("punct", "]"):
                self._consume("punct", ",")
        self._consume("punct", "]")
        return names

    def _inputs(self, keyword: Token) -> None:
        if self.inputs is not None:
            raise DslSyntaxError("inputs are declared twice", keyword.line, keyword.col)
        self.inputs = [self._declare(t) for t in self._name_list()]

    def _outputs(self, keyword: Token) -> None:
        if self.outputs is not None:
            raise DslSyntaxError("outputs are declared twice", keyword.line, keyword.col)
        self.outputs = self._name_list()

    def _bas(self, keyword: Token) -> None:
        token = self._consume("name", message="expected a node name")
        label = token
        if self._check("punct", ":"):
            self._advance()
            label = self._consume("name", message="expected a label")
        if GATE_PATTERN.match(label.text) or label.text in RESERVED_NAMES:
            raise DslSyntaxError(f"{label.text!r} is reserved and cannot label a step", label.line, label.col)
        node = self._declare(token)
        self.label[node] = label.text
        self.bas_labels.add(label.text)

    def _gate(self, keyword: Token) -> None:
        token = self._consume("name", message="expected a node name")
        self._consume("punct", "=")
        op = self._consume("name", message="expected AND or OR")
        if op.text not in ("AND", "OR"):
            raise DslSyntaxError(f"expected AND or OR, found {op.text!r}", op.line, op.col)
        self._consume("punct", "(")
        kids = []
        while not self._check("punct", ")"):
            kids.append(self._consume("name", message="expected a child node"))
            if not self._check("punct", ")"):
                self._consume("punct", ",")
        self._consume("punct", ")")
        if not kids:
            raise DslSyntaxError(f"{op.text} needs at least one child", op.line, op.col)
        node = self._declare(token)
        self.label[node] = gate_name(op.text, len(kids))
        self.children[node] = kids

    def _resolve(self, token: Token) -> int:
        try:
            return self.ids[token.text]
        except KeyError:
            raise UnknownNodeRef(f"unknown node {token.text!r}", token.line, token.col) from None

    def _build(self, name: str) -> ComponentDoc:
        if self.outputs is None:
            token = self._peek()
            raise DslSyntaxError("the component declares no outputs", token.line, token.col)
        children = {node: [self._resolve(t) for t in kids] for node, kids in self.children.items()}
        outputs = [self._resolve(t) for t in self.outputs]
        graph = make_term_graph(
            nodes=range(len(self.ids)),
            inputs=self.inputs or [],
            outputs=outputs,
            label=self.label,
            children=children,
            signature=at_signature(self.bas_labels),
        )
        return ComponentDoc(name=name, graph=graph, node_names={i: n for n, i in self.ids.items()})


def parse_component(text: str) -> ComponentDoc:
    """Parse component text; term-graph violations surface as ``TermGraphError``."""
    return Parser(tokenize(text)).parse()


def print_component(doc: ComponentDoc) -> str:
    """Render ``doc`` in the component syntax."""
    graph, names = doc.graph, doc.node_names
    lines = [f"component {doc.name} {{"]
    if graph.inputs:
        lines.append(f"  inputs [{', '.join(names[n] for n in graph.inputs)}]")
    for node in graph.nodes:
        if node in graph.inputs:
            continue
        symbol = graph.symbol(node)
        if symbol.is_label:
            suffix = "" if names[node] == symbol.name else f" : {symbol.name}"
            lines.append(f"  bas {names[node]}{suffix}")
        else:
            kids = ", ".join(names[c] for c in graph.children[node])
            lines.append(f"  gate {names[node]} = {symbol.kind.value}({kids})")
    lines.append(f"  outputs [{', '.join(names[n] for n in graph.outputs)}]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _value_lines(text: str):
    """Yield ``(line_no, label, value_text, value_col)`` per non-blank line."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        match = ASSIGNMENT_LINE.match(line)
        if not match:
            raise DslSyntaxError("expected 'LABEL = VALUE'", line_no, len(line) - len(line.lstrip()) + 1)
        yield line_no, match.group("label"), match.group("value"), match.start("value") + 1


def _read_value(token: str, line_no: int, col: int) -> float:
    try:
        return parse_ext_real(token)
    except ValueParseError as e:
        raise ValueParseError(str(e), line_no, col) from None


def _collect(text: str, labels, parse_value) -> AttributionDoc:
    values = {}
    for line_no, label, value_text, col in _value_lines(text):
        if label in values:
            raise DslSyntaxError(f"label {label!r} is given twice", line_no, 1)
        if labels is not None and label not in labels:
            raise UnknownLabel(f"label {label!r} does not occur in the component", line_no, 1)
        values[label] = parse_value(value_text, line_no, col)
    return AttributionDoc(values=values)


def parse_attribution(text: str, labels=None) -> AttributionDoc:
    """Lines ``LABEL = VALUE`` or ``LABEL = V0, V1``; values are decimals or ``inf``."""

    def parse_value(value_text: str, line_no: int, col: int):
        parts = value_text.split(",")
        if len(parts) > 2 or not value_text:
            raise ValueParseError(f"expected a value or a pair, got {value_text!r}", line_no, col)
        values = tuple(_read_value(p, line_no, col) for p in parts)
        return values if len(values) == 2 else values[0]

    return _collect(text, labels, parse_value)


def parse_assignment(text: str, labels=None) -> AttributionDoc:
    """Lines ``LABEL = 0`` or ``LABEL = 1``."""

    def parse_value(value_text: str, line_no: int, col: int) -> float:
        if value_text not in ("0", "1"):
            raise ValueParseError(f"truth value must be 0 or 1, got {value_text!r}", line_no, col)
        return float(value_text)

    return _collect(text, labels, parse_value)


def read_source(path) -> str:
    """Read a component or value file as UTF-8; undecodable bytes are a syntax error."""
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        col = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
        raise DslSyntaxError(
            f"{path}: byte 0x{data[e.start]:02x} at offset {e.start} is not valid UTF-8", line, col
        ) from None
