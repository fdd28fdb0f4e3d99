"""Shared fixtures and hypothesis strategies."""
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import pytest
from hypothesis import strategies as st

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.dsl import parse_component
from src.models import ComponentDoc
from src.sampling import DEFAULT_LABELS, random_attack_tree, random_term_graph

DATA_DIR = Path(__file__).parent / "data"

COSTS = {"D": 30.0, "F": 100.0, "S": 80.0}
PROBS = {"D": 0.2, "F": 0.5, "S": 0.4}
TEN_LABELS = tuple("abcdefghij")

SPLIT_TEXT = """
component server_room_split {
  bas D; bas F1; bas F2; bas S
  gate turnstile = OR(D, F1)
  gate door = OR(F2, S)
  gate root = AND(turnstile, door)
  outputs [root]
}
"""

# the decomposition that forges the badge once and copies it
SHORT_LAYERS = "F ; D ⊗ copy ⊗ S ; OR_2 ⊗ OR_2 ; AND_2"


def load_doc(name: str) -> ComponentDoc:
    return parse_component((DATA_DIR / name).read_text(encoding="utf-8"))


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def server_room() -> ComponentDoc:
    return load_doc("server_room.at")


@pytest.fixture
def server_room_sub() -> ComponentDoc:
    return load_doc("server_room_sub.at")


@pytest.fixture
def server_room_dup() -> ComponentDoc:
    return load_doc("server_room_dup.at")


@pytest.fixture
def server_room_split() -> ComponentDoc:
    return parse_component(SPLIT_TEXT)


@st.composite
def term_graphs(
    draw,
    n_inputs: Optional[int] = None,
    n_outputs: Optional[int] = None,
    max_inputs: int = 3,
    max_outputs: int = 3,
    max_nodes: int = 10,
    labels: Sequence[str] = ("a", "b", "c"),
    max_bas: Optional[int] = None,
):
    """Random term graphs; fixed arities when ``n_inputs``/``n_outputs`` are given."""
    rng = draw(st.randoms(use_true_random=False))
    i = n_inputs if n_inputs is not None else draw(st.integers(0, max_inputs))
    j = n_outputs if n_outputs is not None else draw(st.integers(0, max_outputs))
    return random_term_graph(rng, i, j, labels, max_nodes, max_bas)


@st.composite
def attack_trees(
    draw,
    max_bas: int = 8,
    max_gates: int = 6,
    labels: Sequence[str] = DEFAULT_LABELS,
    unique: bool = False,
):
    rng = draw(st.randoms(use_true_random=False))
    return random_attack_tree(rng, labels, max_bas, max_gates, unique)
