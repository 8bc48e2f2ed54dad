from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from utils import to_jsonable


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    VERIFIED_UP_TO = "verified_up_to"


# CLI exit codes
EXIT_YES = 0
EXIT_NO = 1
EXIT_PARSE = 2
EXIT_ELEMENT = 3
EXIT_BOUNDED = 4


@dataclass
class PropVerdict:
    """
    Outcome of one property evaluation.

    `bound` is the search length behind a verified_up_to verdict. `exact` is
    False when the answer leans on a bounded search; "no" verdicts backed by a
    genuine certificate are exact.
    """

    prop: str
    verdict: Verdict
    bound: Optional[int] = None
    exact: bool = True
    witness: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """True unless refuted (yes or verified_up_to)."""
        return self.verdict is not Verdict.NO

    @property
    def exit_code(self) -> int:
        if self.verdict is Verdict.YES:
            return EXIT_YES
        if self.verdict is Verdict.NO:
            return EXIT_NO
        return EXIT_BOUNDED

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "property": self.prop,
            "verdict": self.verdict.value,
            "exact": self.exact,
            "witness": to_jsonable(self.witness),
        }
        if self.verdict is Verdict.VERIFIED_UP_TO:
            record["verified_up_to"] = self.bound
        if self.details:
            record["details"] = to_jsonable(self.details)
        return record


def yes(prop: str, **details: Any) -> PropVerdict:
    return PropVerdict(prop, Verdict.YES, details=details)


def no(prop: str, witness: Dict[str, Any], exact: bool = True, **details: Any) -> PropVerdict:
    return PropVerdict(prop, Verdict.NO, exact=exact, witness=witness, details=details)


def bounded(prop: str, bound: int, **details: Any) -> PropVerdict:
    return PropVerdict(prop, Verdict.VERIFIED_UP_TO, bound=bound, exact=False, details=details)
