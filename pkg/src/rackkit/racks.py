"""Finite racks as operation tables.

A rack on ``n`` elements is stored as an ``n x n`` table with
``table[a][b] = a |> b``.  Subsets of elements are int bitmasks (see
:mod:`rackkit.bitset`); every list of subsets returned from this package is
sorted by that integer value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Optional, Sequence

from .bitset import MAX_ELEMENTS, elements_of, full_mask, iter_bits, mask_of
from .errors import RackAxiomError, RackInputError, TheoremViolation
from .verdict import Verdict

Permutation = tuple[int, ...]

DEFAULT_GROUP_CAP = 1_000_000


@dataclass(frozen=True)
class AxiomReport:
    valid: bool
    reason: str = ""
    witness: tuple[int, ...] = ()

    @property
    def message(self) -> str:
        if self.valid:
            return "rack axioms hold"
        if self.reason == "row":
            return f"row {self.witness[0]} is not a permutation (left translation not bijective)"
        a, b, c = self.witness
        return f"self-distributivity fails at (a, b, c) = ({a}, {b}, {c})"


def _check_shape(table) -> int:
    try:
        rows = [list(row) for row in table]
    except TypeError as exc:
        raise RackInputError("table must be a list of rows") from exc
    n = len(rows)
    if n == 0:
        raise RackInputError("empty table; racks here have 1 <= n <= 64 elements")
    if n > MAX_ELEMENTS:
        raise RackInputError(f"n = {n} exceeds the supported maximum of {MAX_ELEMENTS}")
    for a, row in enumerate(rows):
        if len(row) != n:
            raise RackInputError(f"table is not square: row {a} has length {len(row)}, expected {n}")
        for b, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int):
                raise RackInputError(f"entry [{a}][{b}] = {v!r} is not an integer")
            if not 0 <= v < n:
                raise RackInputError(f"entry [{a}][{b}] = {v} is out of range 0..{n - 1}")
    return n


def verify_rack(table: Sequence[Sequence[int]]) -> AxiomReport:
    """Check both rack axioms on a raw table.

    Malformed input raises :class:`RackInputError`; an axiom failure is
    reported (not raised) with the first row, then the first lexicographic
    triple, that breaks it.
    """
    n = _check_shape(table)
    t = [list(row) for row in table]
    for a in range(n):
        if len(set(t[a])) != n:
            return AxiomReport(False, "row", (a,))
    for a, b, c in product(range(n), repeat=3):
        if t[a][t[b][c]] != t[t[a][b]][t[a][c]]:
            return AxiomReport(False, "self-distributivity", (a, b, c))
    return AxiomReport(True)


@dataclass(frozen=True)
class RackTable:
    """A validated finite rack.

    ``names`` are optional display labels for the elements.
    """

    n: int
    table: tuple[tuple[int, ...], ...]
    label: str = ""
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != len(self.table):
                raise RackInputError("names must have one entry per element")
        if self.n != len(self.table):
            raise RackInputError(f"n = {self.n} does not match table size {len(self.table)}")
        report = verify_rack(self.table)
        if not report.valid:
            raise RackAxiomError(report)

    @classmethod
    def from_rows(cls, rows, label: str = "", names=None) -> "RackTable":
        rows = [list(r) for r in rows]
        return cls(len(rows), rows, label, names)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def describe(self, mask: int) -> str:
        return "{" + ", ".join(self.name(x) for x in iter_bits(mask)) + "}"

    @cached_property
    def _inverse_rows(self) -> tuple[Permutation, ...]:
        inv = []
        for row in self.table:
            r = [0] * self.n
            for b, v in enumerate(row):
                r[v] = b
            inv.append(tuple(r))
        return tuple(inv)


def is_quandle(r: RackTable) -> bool:
    return all(r.table[a][a] == a for a in range(r.n))


def left_translation(r: RackTable, a: int) -> Permutation:
    return r.table[a]


def inverse_translation(r: RackTable, a: int) -> Permutation:
    return r._inverse_rows[a]


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p o q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def invert(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def closure(r: RackTable, s: int) -> int:
    """The subrack generated by ``s``.

    Closure under the operation alone is enough for finite sets: each left
    translation then maps the set injectively, hence bijectively, into itself.
    """
    t = r.table
    members = elements_of(s)
    seen = s
    i = 0
    while i < len(members):
        x = members[i]
        row_x = t[x]
        for j in range(i + 1):
            y = members[j]
            for z in (row_x[y], t[y][x]):
                if not (seen >> z) & 1:
                    seen |= 1 << z
                    members.append(z)
        i += 1
    return seen


def is_subrack(r: RackTable, s: int) -> bool:
    """Direct check that ``s`` is closed under the operation."""
    els = elements_of(s)
    t = r.table
    for a in els:
        row = t[a]
        for b in els:
            if not (s >> row[b]) & 1:
                return False
    return True


def iter_closed_sets(r: RackTable, within: Optional[int] = None) -> Iterator[int]:
    """All subracks contained in ``within`` (default: everything), ascending.

    Lectic next-closure: with bit ``n-1`` most significant the lectic order
    coincides with integer order on the masks, so each closed set is produced
    exactly once and already sorted.
    """
    if within is None:
        within = r.full
    positions = elements_of(within)
    current = closure(r, 0)
    yield current
    while True:
        a = current
        for i in positions:
            bit = 1 << i
            if a & bit:
                a &= ~bit
                continue
            b = closure(r, a | bit)
            if (b & ~a) >> (i + 1) == 0:
                current = b
                break
        else:
            return
        yield current


def maximal_subracks(r: RackTable, within: Optional[int] = None) -> list[int]:
    """Maximal proper subracks of ``within`` (itself a subrack; default all of ``r``)."""
    if within is None:
        within = r.full
    out = []
    for m in iter_closed_sets(r, within):
        if m == within:
            continue
        rest = within & ~m
        if all(closure(r, m | (1 << y)) == within for y in iter_bits(rest)):
            out.append(m)
    return out


def restrict(r: RackTable, q: int) -> tuple[RackTable, tuple[int, ...]]:
    """The rack induced on subrack ``q``, re-indexed 0..|q|-1, plus the map back to ``r``."""
    if not is_subrack(r, q) or q == 0:
        raise RackInputError(f"{r.describe(q)} is not a nonempty subrack")
    back = tuple(elements_of(q))
    pos = {x: i for i, x in enumerate(back)}
    rows = [[pos[r.table[a][b]] for b in back] for a in back]
    names = tuple(r.name(x) for x in back) if r.names else None
    return RackTable(len(back), rows, f"{r.label}|{r.describe(q)}", names), back


# --- inner group and orbits -------------------------------------------------


@dataclass(frozen=True)
class PermGroup:
    elements: tuple[Permutation, ...]
    generators: tuple[Permutation, ...]
    truncated: bool = False

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(compose(p, q) == compose(q, p) for p in gens for q in gens)


def inner_group(r: RackTable, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """The group generated by all left translations, by breadth-first closure.

    Stops and sets ``truncated`` once more than ``cap`` elements would be
    needed; callers that need the exact group must check it.
    """
    if cap < 1:
        raise RackInputError("cap must be positive")
    gens = tuple(sorted(set(r.table)))
    identity = tuple(range(r.n))
    seen = {identity}
    elements = [identity]
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = compose(g, p)
            if q not in seen:
                if len(elements) >= cap:
                    return PermGroup(tuple(elements), gens, truncated=True)
                seen.add(q)
                elements.append(q)
                queue.append(q)
    return PermGroup(tuple(elements), gens)


@dataclass(frozen=True)
class OrbitPartition:
    orbit_of: tuple[int, ...]
    orbits: tuple[int, ...]

    @property
    def c(self) -> int:
        return len(self.orbits)


def _partition_from_components(n: int, comps: list[int]) -> OrbitPartition:
    comps = sorted(comps)
    orbit_of = [0] * n
    for k, m in enumerate(comps):
        for x in iter_bits(m):
            orbit_of[x] = k
    return OrbitPartition(tuple(orbit_of), tuple(comps))


def orbits(r: RackTable) -> OrbitPartition:
    """Orbits of the inner group, as connected components of x -- f_a(x).

    No group is materialised. Each orbit is checked to be a subrack.
    """
    n = r.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        row = r.table[a]
        for x in range(n):
            ra, rb = find(x), find(row[x])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comps: dict[int, int] = {}
    for x in range(n):
        root = find(x)
        comps[root] = comps.get(root, 0) | (1 << x)
    part = _partition_from_components(n, list(comps.values()))
    for orbit in part.orbits:
        if closure(r, orbit) != orbit:
            raise TheoremViolation(f"orbit {r.describe(orbit)} of {r.label!r} is not a subrack")
    return part


def group_orbits(group: PermGroup, n: int) -> OrbitPartition:
    """Orbits computed from an explicit group; used to cross-check :func:`orbits`."""
    remaining = full_mask(n)
    comps = []
    while remaining:
        x = (remaining & -remaining).bit_length() - 1
        orbit = mask_of(p[x] for p in group.elements)
        comps.append(orbit)
        remaining &= ~orbit
    return _partition_from_components(n, comps)


# --- derived structures -----------------------------------------------------


def atoms_of_rack(r: RackTable) -> list[int]:
    """The distinct singleton closures, ascending. They partition the rack."""
    found = sorted({closure(r, 1 << x) for x in range(r.n)})
    covered = 0
    for a in found:
        if covered & a:
            raise TheoremViolation(f"singleton closures overlap in {r.label!r}")
        covered |= a
    return found


def corresponding_quandle(r: RackTable) -> tuple[RackTable, tuple[int, ...]]:
    """Quandle on the atoms <<x>>, with A*B the atom containing a |> b.

    Returns the quandle and the surjection element -> atom index. Atoms are
    indexed in ascending mask order and may have more than one element.
    """
    atoms = atoms_of_rack(r)
    atom_map = [0] * r.n
    for k, a in enumerate(atoms):
        for x in iter_bits(a):
            atom_map[x] = k
    m = len(atoms)
    rows = [[-1] * m for _ in range(m)]
    for a in range(r.n):
        for b in range(r.n):
            i, j, k = atom_map[a], atom_map[b], atom_map[r.table[a][b]]
            if rows[i][j] == -1:
                rows[i][j] = k
            elif rows[i][j] != k:
                raise TheoremViolation(
                    f"atom product not well defined in {r.label!r} at elements ({a}, {b})"
                )
    names = tuple(r.describe(a) for a in atoms)
    q = RackTable(m, rows, f"quandle({r.label})", names)
    if not is_quandle(q):
        raise TheoremViolation(f"corresponding quandle of {r.label!r} is not a quandle")
    return q, tuple(atom_map)


def g_rack_check(r: RackTable, limit: int = 10**6) -> Verdict:
    """Decide whether ``r`` is its only subrack meeting every orbit.

    Any such subrack contains the closure of a transversal (one element per
    orbit), so it suffices to close every transversal. The witness is the
    first proper closure found, in transversal order. Above ``limit``
    transversals the search falls back to scanning all subracks.
    """
    part = orbits(r)
    choices = [elements_of(o) for o in part.orbits]
    count = 1
    for c in choices:
        count *= len(c)
    if count <= limit:
        for pick in product(*choices):
            m = closure(r, mask_of(pick))
            if m != r.full:
                return Verdict(False, m)
        return Verdict(True)
    for m in iter_closed_sets(r):
        if m != r.full and all(m & o for o in part.orbits):
            return Verdict(False, m)
    return Verdict(True)


def is_g_rack(r: RackTable) -> bool:
    return g_rack_check(r).holds


def is_p_rack(r: RackTable) -> bool:
    """True iff all left translations commute, i.e. the inner group is abelian."""
    rows = sorted(set(r.table))
    return all(compose(p, q) == compose(q, p) for i, p in enumerate(rows) for q in rows[i + 1:])
