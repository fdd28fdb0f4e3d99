"""Random term graphs and attack trees for property checks."""
import random
from typing import Optional, Sequence

from .term_graph import TermGraph, at_signature, gate_name, make_term_graph

DEFAULT_LABELS = ("a", "b", "c", "d", "e", "f", "g", "h")
MAX_GATE_ARITY = 3


def random_term_graph(
    rng: random.Random,
    n_inputs: int,
    n_outputs: int,
    labels: Sequence[str] = DEFAULT_LABELS[:3],
    max_nodes: int = 10,
    max_bas: Optional[int] = None,
) -> TermGraph:
    """A random ``n_inputs -> n_outputs`` term graph over AT(labels).

    Gates may take the same child twice and nodes may be left unused.
    """
    labels = list(labels)
    if max_bas is None:
        max_bas = max_nodes
    extra = rng.randint(0, max(0, max_nodes - n_inputs))
    if n_inputs == 0 and n_outputs and not extra:
        extra = 1

    nodes = list(range(n_inputs))
    label, children = {}, {}
    n_bas = 0
    for node in range(n_inputs, n_inputs + extra):
        can_bas = labels and n_bas < max_bas
        if nodes and (not can_bas or rng.random() < 0.6):
            k = rng.randint(1, min(MAX_GATE_ARITY, len(nodes) + 1))
            children[node] = [rng.choice(nodes) for _ in range(k)]
            label[node] = gate_name(rng.choice(("AND", "OR")), k)
        elif can_bas:
            label[node] = rng.choice(labels)
            n_bas += 1
        else:
            break
        nodes.append(node)

    outputs = [rng.choice(nodes) for _ in range(n_outputs)] if nodes else []
    if n_outputs and not nodes:
        raise ValueError("cannot pick outputs from an empty graph")
    return make_term_graph(
        nodes=nodes,
        inputs=range(n_inputs),
        outputs=outputs,
        label=label,
        children=children,
        signature=at_signature(labels),
    )


def random_attack_tree(
    rng: random.Random,
    labels: Sequence[str] = DEFAULT_LABELS,
    max_bas: int = 8,
    max_gates: int = 6,
    unique: bool = False,
) -> TermGraph:
    """A random ``0 -> 1`` attack tree; the root is the last node.

    With ``unique`` every BAS node gets its own label, which needs
    ``len(labels) >= max_bas``.
    """
    labels = list(labels)
    n_bas = rng.randint(1, max_bas)
    if unique:
        if n_bas > len(labels):
            raise ValueError(f"{n_bas} BAS nodes need as many distinct labels")
        bas_labels = rng.sample(labels, n_bas)
    else:
        bas_labels = [rng.choice(labels) for _ in range(n_bas)]

    label = dict(enumerate(bas_labels))
    children = {}
    nodes = list(range(n_bas))
    for node in range(n_bas, n_bas + rng.randint(0, max_gates)):
        k = rng.randint(1, min(MAX_GATE_ARITY, len(nodes)))
        children[node] = rng.sample(nodes, k)
        label[node] = gate_name(rng.choice(("AND", "OR")), k)
        nodes.append(node)

    return make_term_graph(
        nodes=nodes,
        inputs=[],
        outputs=[nodes[-1]],
        label=label,
        children=children,
        signature=at_signature(labels),
    )
