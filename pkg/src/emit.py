"""Graphviz DOT rendering of components."""
from .models import ComponentDoc


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(doc: ComponentDoc) -> str:
    """Digraph drawn bottom-to-top: edges run from child to parent.

    Inputs are squares, outputs are points fed by the node they expose.
    """
    graph, names = doc.graph, doc.node_names
    lines = [f"digraph {_quote(doc.name)} {{", "\trankdir=BT;"]
    for node in graph.nodes:
        name = names.get(node, f"n{node}")
        if node in graph.inputs:
            lines.append(f"\tn{node} [label={_quote(name)}, shape=square];")
            continue
        symbol = graph.symbol(node)
        if symbol.is_label:
            text = name if name == symbol.name else f"{name}: {symbol.name}"
            lines.append(f"\tn{node} [label={_quote(text)}, shape=ellipse];")
        else:
            text = f"{name} ({symbol.kind.value})"
            lines.append(f"\tn{node} [label={_quote(text)}, shape=invhouse];")
    for pos in range(graph.n_outputs):
        lines.append(f'\tout{pos} [label="out{pos}", shape=point];')

    for parent in graph.nodes:
        kids = graph.children.get(parent, ())
        for pos, child in enumerate(kids, start=1):
            attrs = f" [label={_quote(str(pos))}]" if len(kids) > 1 else ""
            lines.append(f"\tn{child} -> n{parent}{attrs};")
    for pos, node in enumerate(graph.outputs):
        lines.append(f"\tn{node} -> out{pos} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
