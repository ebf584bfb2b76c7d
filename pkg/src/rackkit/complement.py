"""Constructive complements in finite subrack lattices.

:func:`find_complement` descends from ``q2`` towards a complement of ``q1``
by repeatedly replacing the current subrack with a maximal subrack of it
that drops the least shared element. The join with ``q1`` never changes and
the overlap with ``q1`` shrinks at every step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .bitset import elements_of, is_subset, lowest, popcount
from .errors import RackInputError, TheoremViolation
from .lattice import SubrackLattice
from .racks import RackTable, closure, is_subrack, maximal_subracks, orbits


def verify_empty_core(r: RackTable, lattice: Optional[SubrackLattice] = None) -> bool:
    """The maximal subracks of a finite rack have empty intersection.

    Returns True; anything else raises :class:`TheoremViolation`.
    """
    if lattice is not None:
        maxes = [lattice.elems[i] for i in lattice.lower_covers[lattice.top]]
    else:
        maxes = maximal_subracks(r)
    core = r.full
    for m in maxes:
        core &= m
    if core:
        raise TheoremViolation(
            f"maximal subracks of {r.label!r} share the elements {r.describe(core)}"
        )
    return True


def maximal_subrack_avoiding(
    r: RackTable, q: int, x: int, lattice: Optional[SubrackLattice] = None
) -> int:
    """The least maximal subrack of ``q`` that does not contain ``x``.

    Uses the Hasse diagram of ``lattice`` when given, otherwise enumerates
    the subracks of ``q`` directly.
    """
    if not (q >> x) & 1:
        raise RackInputError(f"element {x} is not in {r.describe(q)}")
    if lattice is not None:
        maxes = sorted(lattice.elems[i] for i in lattice.lower_covers[lattice.index[q]])
    else:
        if not is_subrack(r, q):
            raise RackInputError(f"{r.describe(q)} is not a subrack")
        maxes = maximal_subracks(r, within=q)
    for m in maxes:
        if not (m >> x) & 1:
            return m
    raise TheoremViolation(f"every maximal subrack of {r.describe(q)} contains {r.name(x)}")


@dataclass(frozen=True)
class DescentStep:
    current: int
    removed: int
    replacement: int


@dataclass(frozen=True)
class DescentTrace:
    q1: int
    q2: int
    steps: tuple[DescentStep, ...]
    result: int

    def to_json_lines(self) -> str:
        lines = [
            json.dumps({
                "schema": 1, "step": k, "current": elements_of(s.current),
                "removed": s.removed, "replacement": elements_of(s.replacement),
            })
            for k, s in enumerate(self.steps)
        ]
        lines.append(json.dumps({
            "schema": 1, "q1": elements_of(self.q1), "q2": elements_of(self.q2),
            "result": elements_of(self.result), "steps": len(self.steps),
        }))
        return "\n".join(lines) + "\n"


def find_complement(
    r: RackTable, q1: int, q2: int, lattice: Optional[SubrackLattice] = None
) -> tuple[int, DescentTrace]:
    """A complement of ``q1`` inside ``q2`` relative to T = <<q1, q2>>.

    The result Q3 satisfies Q3 <= q2, Q3 & q1 = 0 and <<q1, Q3>> = T.
    Each step picks the least x in q1 & Q3 and moves to the least maximal
    subrack of Q3 avoiding x; both invariants are re-checked per step.
    """
    for s, name in ((q1, "q1"), (q2, "q2")):
        if not is_subrack(r, s):
            raise RackInputError(f"{name} = {r.describe(s)} is not a subrack")
    target = closure(r, q1 | q2)
    current = q2
    steps = []
    while current & q1:
        if len(steps) > popcount(q2):
            raise TheoremViolation("complement descent did not terminate")
        x = lowest(current & q1)
        nxt = maximal_subrack_avoiding(r, current, x, lattice)
        if popcount(nxt & q1) >= popcount(current & q1):
            raise TheoremViolation("overlap with q1 did not shrink")
        if closure(r, q1 | nxt) != target:
            raise TheoremViolation(f"join with q1 changed after removing {r.name(x)}")
        steps.append(DescentStep(current, x, nxt))
        current = nxt
    return current, DescentTrace(q1, q2, tuple(steps), current)


def orbit_complement(r: RackTable, q: int) -> int:
    """Union of the orbits missing ``q``. A complement of ``q`` whenever ``r`` is a G-rack."""
    out = 0
    for orbit in orbits(r).orbits:
        if not orbit & q:
            out |= orbit
    return out


def check_complement(r: RackTable, q1: int, q2: int, result: int) -> bool:
    """The exact contract of :func:`find_complement`, checked from scratch."""
    return (
        is_subrack(r, result)
        and is_subset(result, q2)
        and result & q1 == 0
        and closure(r, q1 | result) == closure(r, q1 | q2)
    )
