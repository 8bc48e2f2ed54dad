from __future__ import annotations

from typing import Any, Dict, Optional


class TaufactError(Exception):
    """Base class for every error raised by taufact."""


class RingSpecError(TaufactError, ValueError):
    """Malformed ring spec, n < 2, or q not a prime power."""


class ElementError(TaufactError, ValueError):
    """Element text that does not parse, is out of range, or is a unit where a non-unit is required."""


class TauRelationError(TaufactError, ValueError):
    """Relation data outside R#, or an unknown relation name."""


class SearchBoundError(TaufactError, ValueError):
    """A factorization length bound below 2."""


class FactorizationError(TaufactError, IndexError):
    """Refine/combine position out of range or mismatched sub-factorization."""


class SearchBudgetExceeded(TaufactError, RuntimeError):
    def __init__(self, nodes: int, budget: int, context: Optional[Dict[str, Any]] = None):
        self.nodes = nodes
        self.budget = budget
        self.context = context or {}
        super().__init__(
            f"factorization search visited {nodes} nodes (budget {budget}); "
            f"lower --max-len or raise TAUFACT_SEARCH_BUDGET"
        )


class TheoremMismatch(TaufactError, AssertionError):
    """
    A definitional computation disagreed with the matching theorem criterion.

    `report` is JSON-serializable and is what gets written as the bug report.
    """

    def __init__(self, theorem: str, report: Dict[str, Any]):
        self.theorem = theorem
        self.report = {"theorem": theorem, **report}
        super().__init__(f"{theorem}: definitional and criterion verdicts disagree: {report}")
