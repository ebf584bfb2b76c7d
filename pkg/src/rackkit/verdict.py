from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """A decided yes/no answer plus the evidence behind it.

    Truthiness follows ``holds``; ``witness`` is a counterexample when the
    property fails (and optional supporting data when it holds).
    """

    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds
