"""Async batch comparison of several component files."""
import asyncio
from typing import List, Optional

from .models import CompareOutcome, EvalRequest


class AsyncComparer:
    """Compare many components concurrently."""

    def __init__(self, workflow, max_concurrent: int = 4):
        self.workflow = workflow
        self.max_concurrent = max_concurrent

    async def compare_batch(
        self,
        paths: List[str],
        request: EvalRequest,
        attribution_path: Optional[str] = None,
        assignment_path: Optional[str] = None,
    ) -> List[CompareOutcome]:
        """Outcomes in the order of ``paths``; failures become error outcomes."""
        semaphore = asyncio.Semaphore(self.max_concurrent)

        async def compare_with_limit(path: str) -> CompareOutcome:
            async with semaphore:
                try:
                    return await self.workflow.compare_async(
                        path,
                        request,
                        attribution_path=attribution_path,
                        assignment_path=assignment_path,
                    )
                except (RuntimeError, ValueError) as e:
                    return CompareOutcome(path=path, error=str(e), exit_code=getattr(e, "exit_code", 1))

        results = await asyncio.gather(*(compare_with_limit(p) for p in paths), return_exceptions=True)
        return [
            r if not isinstance(r, Exception) else CompareOutcome(path=p, error=str(r), exit_code=1)
            for p, r in zip(paths, results)
        ]
