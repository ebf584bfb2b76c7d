"""The lattice of subracks: enumeration, meet/join, covers, intervals.

Elements are stored as bitmasks in ascending order, so index 0 is the empty
subrack and the last index is the whole rack.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bitset import is_subset, iter_bits, popcount, to_hex
from .errors import CapExceededError, EnumerationOverflow, TheoremViolation
from .racks import RackTable, closure, is_subrack, iter_closed_sets
from .verdict import Verdict

DEFAULT_ENUM_CAP = 2**20
TABLE_LIMIT = 4096  # largest lattice for which dense meet/join tables are built


@dataclass
class SubrackLattice:
    rack: RackTable
    elems: list[int]
    covers: list[tuple[int, int]]
    index: dict[int, int] = field(repr=False)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elems) - 1

    def __len__(self) -> int:
        return len(self.elems)

    @cached_property
    def upper_covers(self) -> list[list[int]]:
        up: list[list[int]] = [[] for _ in self.elems]
        for i, j in self.covers:
            up[i].append(j)
        return up

    @cached_property
    def lower_covers(self) -> list[list[int]]:
        down: list[list[int]] = [[] for _ in self.elems]
        for i, j in self.covers:
            down[j].append(i)
        return down

    def leq(self, i: int, j: int) -> bool:
        return is_subset(self.elems[i], self.elems[j])

    def meet(self, i: int, j: int) -> int:
        return self.index[self.elems[i] & self.elems[j]]

    def join(self, i: int, j: int) -> int:
        if "join_table" in self.__dict__:
            return int(self.join_table[i, j])
        return self.index[closure(self.rack, self.elems[i] | self.elems[j])]

    def join_many(self, idxs) -> int:
        m = 0
        for i in idxs:
            m |= self.elems[i]
        return self.index[closure(self.rack, m)]

    def below(self, j: int) -> list[int]:
        """Indices of elements contained in ``elems[j]``, ascending."""
        hi = self.elems[j]
        return [k for k in range(j + 1) if is_subset(self.elems[k], hi)]

    def above(self, i: int) -> list[int]:
        lo = self.elems[i]
        return [k for k in range(i, len(self.elems)) if is_subset(lo, self.elems[k])]

    @cached_property
    def masks(self) -> np.ndarray:
        return np.array(self.elems, dtype=np.uint64)

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        """``leq_matrix[i, j]`` iff element i is contained in element j."""
        m = self.masks
        return (m[:, None] & ~m[None, :]) == 0

    @cached_property
    def meet_table(self) -> np.ndarray:
        self._check_table_size()
        size = len(self.elems)
        out = np.empty((size, size), dtype=np.int32)
        index = self.index
        for i, a in enumerate(self.elems):
            out[i] = [index[a & b] for b in self.elems]
        return out

    @cached_property
    def join_table(self) -> np.ndarray:
        self._check_table_size()
        size = len(self.elems)
        out = np.empty((size, size), dtype=np.int32)
        cache: dict[int, int] = {}
        elems, index, rack = self.elems, self.index, self.rack
        for i in range(size):
            a = elems[i]
            out[i, i] = i
            for j in range(i + 1, size):
                u = a | elems[j]
                k = cache.get(u)
                if k is None:
                    k = index[u] if u in index else index[closure(rack, u)]
                    cache[u] = k
                out[i, j] = out[j, i] = k
        return out

    def _check_table_size(self) -> None:
        if len(self.elems) > TABLE_LIMIT:
            raise CapExceededError(
                f"lattice has {len(self.elems)} elements; dense meet/join tables are limited to {TABLE_LIMIT}"
            )

    def describe(self, i: int) -> str:
        return self.rack.describe(self.elems[i])

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "rack": self.rack.label,
            "elements": [to_hex(m) for m in self.elems],
            "covers": [list(c) for c in self.covers],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dot(self) -> str:
        """Hasse diagram in DOT, bottom at the lowest rank, one rank per cardinality."""
        lines = ["digraph subracks {", "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
        by_size: dict[int, list[int]] = {}
        for i, m in enumerate(self.elems):
            by_size.setdefault(popcount(m), []).append(i)
            label = self.describe(i).replace('"', '\\"')
            lines.append(f'  n{i} [label="{label}"];')
        for size in sorted(by_size):
            nodes = " ".join(f"n{i};" for i in by_size[size])
            lines.append(f"  {{ rank=same; {nodes} }}")
        for i, j in self.covers:
            lines.append(f"  n{i} -> n{j} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _upper_covers(r: RackTable, elems: list[int], index: dict[int, int]) -> list[tuple[int, int]]:
    # every upper cover of x is <<x, y>> for some y outside x; keep the minimal ones
    covers = []
    full = r.full
    for i, x in enumerate(elems):
        cands = sorted({closure(r, x | (1 << y)) for y in iter_bits(full & ~x)})
        for c in cands:
            if not any(d != c and is_subset(d, c) for d in cands):
                covers.append((i, index[c]))
    covers.sort()
    return covers


def enumerate_subracks(r: RackTable, cap: int = DEFAULT_ENUM_CAP) -> SubrackLattice:
    """All subracks of ``r`` by next-closure, with Hasse cover edges.

    Raises :class:`EnumerationOverflow` rather than returning a partial list.
    """
    elems = []
    for m in iter_closed_sets(r):
        elems.append(m)
        if len(elems) > cap:
            raise EnumerationOverflow(f"{r.label!r} has more than {cap} subracks (enumeration cap)")
    index = {m: i for i, m in enumerate(elems)}
    return SubrackLattice(r, elems, _upper_covers(r, elems, index), index)


def naive_subracks(r: RackTable) -> list[int]:
    """Filter all 2^n subsets with the direct closedness test. Oracle only."""
    if r.n > 20:
        raise CapExceededError("naive subset scan is limited to n <= 20")
    return [s for s in range(1 << r.n) if is_subrack(r, s)]


# --- atoms, intervals, atomicity, grading -----------------------------------


def atoms(L: SubrackLattice) -> list[int]:
    """Upper covers of the empty subrack; checked against the singleton closures."""
    found = sorted(L.upper_covers[L.bottom])
    expected = sorted({L.index[closure(L.rack, 1 << x)] for x in range(L.rack.n)})
    if found != expected:
        raise TheoremViolation(f"atoms of {L.rack.label!r} are not the singleton closures")
    return found


@dataclass(frozen=True)
class IntervalView:
    parent: SubrackLattice
    lo: int
    hi: int
    members: tuple[int, ...]

    def atoms(self) -> list[int]:
        return [j for j in self.parent.upper_covers[self.lo] if j in self._member_set]

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)


def interval(L: SubrackLattice, lo: int, hi: int) -> IntervalView:
    a, b = L.elems[lo], L.elems[hi]
    if not is_subset(a, b):
        raise ValueError(f"{L.describe(lo)} is not contained in {L.describe(hi)}")
    members = tuple(k for k in range(lo, hi + 1) if is_subset(a, L.elems[k]) and is_subset(L.elems[k], b))
    return IntervalView(L, lo, hi, members)


def whole(L: SubrackLattice) -> IntervalView:
    return IntervalView(L, L.bottom, L.top, tuple(range(len(L))))


def _as_view(L) -> IntervalView:
    return L if isinstance(L, IntervalView) else whole(L)


def is_atomic(L: SubrackLattice | IntervalView) -> Verdict:
    """Every member equals the join of the (interval) atoms below it.

    Witness: index of the first member that is not.
    """
    view = _as_view(L)
    P = view.parent
    ats = view.atoms()
    for m in view.members:
        below = [a for a in ats if is_subset(P.elems[a], P.elems[m])]
        joined = P.join_many([view.lo, *below])
        if joined != m:
            return Verdict(False, m)
    return Verdict(True)


def is_relatively_atomic(L: SubrackLattice) -> Verdict:
    """Every interval is atomic.

    The atoms of [lo, hi] below m are the covers of lo below m whatever hi is,
    so it is enough to test each pair lo <= m once. Witness: (lo, top, m),
    i.e. the interval [lo, top] fails at member m.
    """
    up = L.upper_covers
    for lo in range(len(L)):
        covers = up[lo]
        for m in L.above(lo):
            below = [c for c in covers if is_subset(L.elems[c], L.elems[m])]
            if L.join_many([lo, *below]) != m:
                return Verdict(False, (lo, L.top, m))
    return Verdict(True)


def is_graded(L: SubrackLattice) -> Verdict:
    """All maximal chains have equal length.

    Holds iff shortest and longest cover paths from the bottom agree at every
    element; the witness on failure is a (short, long) pair of maximal chains.
    """
    size = len(L)
    shortest = [0] * size
    longest = [0] * size
    for j in range(1, size):  # ascending masks are a linear extension
        preds = L.lower_covers[j]
        shortest[j] = 1 + min(shortest[i] for i in preds)
        longest[j] = 1 + max(longest[i] for i in preds)
    if all(s == l for s, l in zip(shortest, longest)):
        return Verdict(True, shortest)

    def chain(table, pick):
        path = [L.top]
        while path[-1] != L.bottom:
            j = path[-1]
            path.append(pick(L.lower_covers[j], key=lambda i: table[i]))
        return path[::-1]

    return Verdict(False, (chain(shortest, min), chain(longest, max)))


def check_quandle_isomorphism(L: SubrackLattice, Lq: SubrackLattice, atom_map) -> Verdict:
    """Check Q -> {atoms met by Q} is an order isomorphism onto the quandle lattice."""
    image = []
    for m in L.elems:
        t = 0
        for x in iter_bits(m):
            t |= 1 << atom_map[x]
        image.append(t)
    if sorted(image) != Lq.elems or len(set(image)) != len(image):
        return Verdict(False, "map is not a bijection onto the quandle's subracks")
    for i in range(len(L)):
        for j in range(len(L)):
            if is_subset(L.elems[i], L.elems[j]) != is_subset(image[i], image[j]):
                return Verdict(False, (i, j))
    return Verdict(True, image)
