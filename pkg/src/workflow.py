"""LangGraph workflow comparing the compositional and brute-force paths."""
import asyncio
import logging
from typing import Literal, Optional

from langgraph.graph import END, StateGraph

from .dsl import parse_assignment, parse_attribution, parse_component, read_source
from .engine import run_semantics, values_equal
from .errors import AtmetError
from .models import CompareOutcome, CompareState, EvalRequest

logger = logging.getLogger(__name__)


class ComparisonWorkflow:
    """Four-stage pipeline: load, evaluate, oracle, verdict.

    Any stage that records an error ends the run early.
    """

    def __init__(self):
        self.workflow = self._create_workflow()

    @staticmethod
    def _fail(state: CompareState, error: Exception) -> CompareState:
        state["error"] = str(error)
        state["exit_code"] = getattr(error, "exit_code", 1)
        logger.info("%s: %s", state["path"], error)
        return state

    def _load_agent(self, state: CompareState) -> CompareState:
        """Stage 1: parse the component and its value files."""
        try:
            doc = parse_component(read_source(state["path"]))
            update = {}
            if state["attribution_path"]:
                text = read_source(state["attribution_path"])
                update["attribution"] = parse_attribution(text, doc.labels)
            if state["assignment_path"]:
                text = read_source(state["assignment_path"])
                update["assignment"] = parse_assignment(text, doc.labels)
        except (AtmetError, OSError) as e:
            return self._fail(state, e)
        state["doc"] = doc
        state["request"] = state["request"].model_copy(update=update)
        return state

    def _evaluate_agent(self, state: CompareState) -> CompareState:
        """Stage 2: functorial evaluation through a decomposition."""
        try:
            state["compositional"] = run_semantics(state["doc"], state["request"])
        except AtmetError as e:
            return self._fail(state, e)
        return state

    def _oracle_agent(self, state: CompareState) -> CompareState:
        """Stage 3: enumeration straight from the term graph."""
        try:
            state["oracle"] = run_semantics(state["doc"], state["request"], oracle=True)
        except AtmetError as e:
            return self._fail(state, e)
        return state

    def _verdict_agent(self, state: CompareState) -> CompareState:
        """Stage 4: equality, within tolerance for real-valued results."""
        left, right = state["compositional"], state["oracle"]
        state["equal"] = values_equal(
            left.value, right.value, exact=left.exact and right.exact, tolerance=state["request"].tolerance
        )
        state["exit_code"] = 0 if state["equal"] else 1
        return state

    @staticmethod
    def _route(state: CompareState) -> Literal["continue", "end"]:
        return "end" if state["error"] else "continue"

    def _create_workflow(self):
        workflow = StateGraph(CompareState)

        workflow.add_node("load_agent", self._load_agent)
        workflow.add_node("evaluate_agent", self._evaluate_agent)
        workflow.add_node("oracle_agent", self._oracle_agent)
        workflow.add_node("verdict_agent", self._verdict_agent)

        workflow.set_entry_point("load_agent")
        workflow.add_conditional_edges("load_agent", self._route, {"continue": "evaluate_agent", "end": END})
        workflow.add_conditional_edges("evaluate_agent", self._route, {"continue": "oracle_agent", "end": END})
        workflow.add_conditional_edges("oracle_agent", self._route, {"continue": "verdict_agent", "end": END})
        workflow.add_edge("verdict_agent", END)

        return workflow.compile()

    def compare(
        self,
        path: str,
        request: EvalRequest,
        attribution_path: Optional[str] = None,
        assignment_path: Optional[str] = None,
    ) -> CompareOutcome:
        """Run both paths on one component file."""
        initial_state: CompareState = {
            "path": str(path),
            "request": request,
            "attribution_path": attribution_path,
            "assignment_path": assignment_path,
            "doc": None,
            "compositional": None,
            "oracle": None,
            "equal": False,
            "error": None,
            "exit_code": 0,
        }
        result = self.workflow.invoke(initial_state)
        return CompareOutcome(
            path=result["path"],
            compositional=result["compositional"],
            oracle=result["oracle"],
            equal=result["equal"],
            error=result["error"],
            exit_code=result["exit_code"],
        )

    async def compare_async(self, path: str, request: EvalRequest, **files) -> CompareOutcome:
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(None, lambda: self.compare(path, request, **files))
