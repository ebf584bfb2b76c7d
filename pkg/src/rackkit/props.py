"""Lattice properties of subrack lattices, with witnesses.

The deciders below work on dense meet/join index tables (numpy) and return
:class:`Verdict` objects whose witnesses are lattice indices.
:func:`property_report` runs all of them and cross-checks the equivalences
that hold for every rack (Boolean, distributive, pseudocomplemented,
uniquely complemented) and for G-racks (Boolean, modular, relatively
complemented, orthocomplemented). A disagreement raises
:class:`TheoremViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .bitset import elements_of, is_subset
from .errors import OrthocomplementUndecided, TheoremViolation
from .lattice import (
    DEFAULT_ENUM_CAP,
    IntervalView,
    SubrackLattice,
    atoms,
    enumerate_subracks,
    interval,
    is_atomic,
    is_graded,
    is_relatively_atomic,
)
from .racks import RackTable, g_rack_check, is_p_rack, is_quandle
from .verdict import Verdict

DEFAULT_ORTHO_NODES = 10**7


def complements_of(L: SubrackLattice, i: int, lo: Optional[int] = None, hi: Optional[int] = None) -> list[int]:
    """Complements of ``i`` in the interval [lo, hi] (default: the whole lattice)."""
    lo = L.bottom if lo is None else lo
    hi = L.top if hi is None else hi
    M, J = L.meet_table, L.join_table
    members = np.array(interval(L, lo, hi).members)
    ok = (M[i, members] == lo) & (J[i, members] == hi)
    return [int(k) for k in members[ok]]


def _complement_matrix(L: SubrackLattice) -> np.ndarray:
    return (L.meet_table == L.bottom) & (L.join_table == L.top)


def is_complemented(L: SubrackLattice | IntervalView) -> Verdict:
    """Witness: first element without a complement. On success, one complement per element.

    For an interval [lo, hi] the complements are taken relative to lo and hi,
    using the parent's meet and join; indices are parent indices.
    """
    if isinstance(L, IntervalView):
        P = L.parent
        members = np.array(L.members)
        sub = np.ix_(members, members)
        C = (P.meet_table[sub] == L.lo) & (P.join_table[sub] == L.hi)
        has = C.any(axis=1)
        if not has.all():
            return Verdict(False, int(members[np.argmin(has)]))
        return Verdict(True, [int(members[k]) for k in C.argmax(axis=1)])
    C = _complement_matrix(L)
    has = C.any(axis=1)
    if not has.all():
        return Verdict(False, int(np.argmin(has)))
    return Verdict(True, [int(k) for k in C.argmax(axis=1)])


def is_uniquely_complemented(L: SubrackLattice) -> Verdict:
    """Witness: (element, its complements) for the first element without exactly one."""
    C = _complement_matrix(L)
    counts = C.sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    if len(bad):
        i = int(bad[0])
        return Verdict(False, (i, [int(k) for k in np.flatnonzero(C[i])]))
    return Verdict(True)


def is_relatively_complemented(L: SubrackLattice) -> Verdict:
    """Every interval [a, b] is complemented. Witness: (a, b, element without complement)."""
    M, J, leq = L.meet_table, L.join_table, L.leq_matrix
    for a in range(len(L)):
        ups = np.flatnonzero(leq[a])
        for b in ups:
            members = ups[leq[ups, b]]
            sub = (M[np.ix_(members, members)] == a) & (J[np.ix_(members, members)] == b)
            has = sub.any(axis=1)
            if not has.all():
                return Verdict(False, (a, int(b), int(members[np.argmin(has)])))
    return Verdict(True)


def is_modular(L: SubrackLattice) -> Verdict:
    """Modular law a ^ (c v b) = (a ^ c) v b for all b <= a.

    Scans triples (a, b, c) in lexicographic index order; the witness is the
    first violation.
    """
    M, J, leq = L.meet_table, L.join_table, L.leq_matrix
    for a in range(len(L)):
        bs = np.flatnonzero(leq[:, a])
        lhs = M[a][J[bs, :]]  # rows b, columns c: a ^ (c v b)
        rhs = J[M[a][None, :], bs[:, None]]  # (a ^ c) v b
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, c = bad[0]
            return Verdict(False, (a, int(bs[b]), int(c)))
    return Verdict(True)


def is_distributive(L: SubrackLattice) -> Verdict:
    """a ^ (b v c) = (a ^ b) v (a ^ c) for all triples; witness is the first violation."""
    M, J = L.meet_table, L.join_table
    for a in range(len(L)):
        ma = M[a]
        lhs = ma[J]
        rhs = J[ma[:, None], ma[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, c = bad[0]
            return Verdict(False, (a, int(b), int(c)))
    return Verdict(True)


def find_n5(L: SubrackLattice) -> Optional[tuple[int, int, int, int, int]]:
    """A pentagon sublattice (bottom, x, y, z, top) with x < y and z beside both, or None.

    x < y with equal meets and joins against z forces z to be incomparable
    to both, so the five elements form a copy of N5.
    """
    M, J, leq = L.meet_table, L.join_table, L.leq_matrix
    for x in range(len(L)):
        for y in np.flatnonzero(leq[x]):
            if y == x:
                continue
            hit = np.flatnonzero((M[x] == M[y]) & (J[x] == J[y]))
            if len(hit):
                z = int(hit[0])
                return (int(M[x, z]), x, int(y), z, int(J[x, z]))
    return None


def is_boolean(L: SubrackLattice) -> Verdict:
    """Isomorphic to the power set of its atoms.

    Checked structurally: the lattice is atomic and x -> {atoms below x} hits
    each of the 2^k atom sets exactly once. Independent of the distributive
    and complement checks.
    """
    ats = atoms(L)
    if len(L) != 2 ** len(ats):
        return Verdict(False, f"{len(L)} elements but {len(ats)} atoms")
    seen = set()
    for x in range(len(L)):
        below = frozenset(a for a in ats if is_subset(L.elems[a], L.elems[x]))
        if L.join_many(below) != x:
            return Verdict(False, f"element {x} is not the join of its atoms")
        seen.add(below)
    if len(seen) != len(L):
        return Verdict(False, "two elements lie above the same atoms")
    return Verdict(True)


def is_pseudocomplemented(L: SubrackLattice) -> Verdict:
    """Every x has a largest y with x ^ y = 0.

    On success the witness is the map x -> x*; otherwise (x, y1, y2) with
    y1, y2 maximal among elements disjoint from x.
    """
    M = L.meet_table
    leq = L.leq_matrix
    star = []
    for x in range(len(L)):
        disjoint = np.flatnonzero(M[x] == L.bottom)
        union = 0
        for k in disjoint:
            union |= L.elems[k]
        k = L.index.get(union)
        if k is None or k not in disjoint:
            sub = leq[np.ix_(disjoint, disjoint)]
            maximal = [int(disjoint[i]) for i in range(len(disjoint)) if sub[i].sum() == 1]
            return Verdict(False, (x, maximal[0], maximal[1]))
        star.append(k)
    return Verdict(True, star)


def is_orthocomplemented(L: SubrackLattice, node_cap: int = DEFAULT_ORTHO_NODES) -> Verdict:
    """Search for an involutive, order-reversing complementation.

    Such a map is a dual automorphism, so on an atomic lattice it is fixed by
    where the atoms go (they must go to coatoms): phi(x) = meet of phi(a) over
    atoms a <= x. The search assigns atoms to complementary coatoms, prunes
    pairs whose join is not complemented by the meet of their images, then
    checks each completed candidate. Exceeding ``node_cap`` search nodes
    raises :class:`OrthocomplementUndecided`.
    """
    if not is_atomic(L):
        raise TheoremViolation(f"subrack lattice of {L.rack.label!r} is not atomic")
    M, J = L.meet_table, L.join_table
    bot, top = L.bottom, L.top
    ats = atoms(L)
    coatoms = sorted(L.lower_covers[top])
    if len(L) == 1:
        return Verdict(True, [0])
    if len(ats) != len(coatoms):
        return Verdict(False, f"{len(ats)} atoms but {len(coatoms)} coatoms")
    below_atoms = [[a for a in ats if is_subset(L.elems[a], L.elems[x])] for x in range(len(L))]
    cands = {a: [m for m in coatoms if M[a, m] == bot and J[a, m] == top] for a in ats}
    leq = L.leq_matrix
    nodes = 0
    assign: dict[int, int] = {}
    used: set[int] = set()

    def complete() -> Optional[list[int]]:
        phi = []
        for x in range(len(L)):
            img = top
            for a in below_atoms[x]:
                img = M[img, assign[a]]
            phi.append(int(img))
        for x in range(len(L)):
            y = phi[x]
            if phi[y] != x or M[x, y] != bot or J[x, y] != top:
                return None
        P = np.array(phi)
        # x <= y must give phi(y) <= phi(x)
        if not np.all(~leq | leq[P[None, :], P[:, None]]):
            return None
        return phi

    def search(k: int) -> Optional[list[int]]:
        nonlocal nodes
        if k == len(ats):
            return complete()
        a = ats[k]
        for m in cands[a]:
            if m in used:
                continue
            nodes += 1
            if nodes > node_cap:
                raise OrthocomplementUndecided(
                    f"orthocomplementation search on {L.rack.label!r} exceeded {node_cap} nodes"
                )
            ok = True
            for b, mb in assign.items():
                if leq[a, mb] != leq[b, m]:
                    ok = False
                    break
                j, img = J[a, b], M[m, mb]
                if M[j, img] != bot or J[j, img] != top:
                    ok = False
                    break
            if not ok:
                continue
            assign[a] = m
            used.add(m)
            found = search(k + 1)
            if found is not None:
                return found
            del assign[a]
            used.discard(m)
        return None

    phi = search(0)
    if phi is None:
        return Verdict(False, "no orthocomplementation exists")
    return Verdict(True, phi)


# --- aggregate report ------------------------------------------------------

FLAGS = (
    "quandle",
    "g_rack",
    "p_rack",
    "complemented",
    "uniquely_complemented",
    "relatively_complemented",
    "pseudocomplemented",
    "orthocomplemented",
    "modular",
    "distributive",
    "boolean",
    "atomic",
    "relatively_atomic",
    "graded",
)


@dataclass
class PropertyReport:
    label: str
    n: int
    subrack_count: int
    flags: dict[str, Optional[bool]]
    witnesses: dict[str, Any] = field(default_factory=dict)
    pseudocomplement_map: Optional[list[int]] = None
    lattice: Optional[SubrackLattice] = field(default=None, repr=False, compare=False)

    def to_dict(self, with_witnesses: bool = False) -> dict:
        d: dict[str, Any] = {
            "schema": 1,
            "label": self.label,
            "n": self.n,
            "subrack_count": self.subrack_count,
            "flags": {k: self.flags[k] for k in FLAGS},
        }
        if with_witnesses:
            d["witnesses"] = {k: _jsonable(self.witnesses[k], self.lattice) for k in FLAGS if k in self.witnesses}
            if self.pseudocomplement_map is not None:
                d["pseudocomplement_map"] = [
                    [_elements(self.lattice, x), _elements(self.lattice, y)]
                    for x, y in enumerate(self.pseudocomplement_map)
                ]
        return d


def _elements(L: SubrackLattice, i: int) -> list[int]:
    return elements_of(L.elems[i])


def _jsonable(w, L: SubrackLattice):
    """Witnesses carry lattice indices; render them as element lists."""
    if isinstance(w, (bool, str)) or w is None:
        return w
    if isinstance(w, (int, np.integer)):
        return _elements(L, int(w))
    if isinstance(w, dict):
        return {k: _jsonable(v, L) for k, v in w.items()}
    return [_jsonable(v, L) for v in w]


def property_report(
    r: RackTable,
    lattice: Optional[SubrackLattice] = None,
    enum_cap: int = DEFAULT_ENUM_CAP,
    ortho_nodes: int = DEFAULT_ORTHO_NODES,
) -> PropertyReport:
    L = lattice if lattice is not None else enumerate_subracks(r, enum_cap)
    verdicts: dict[str, Verdict] = {}
    verdicts["quandle"] = Verdict(is_quandle(r))
    verdicts["g_rack"] = g_rack_check(r)
    verdicts["p_rack"] = Verdict(is_p_rack(r))
    verdicts["complemented"] = is_complemented(L)
    verdicts["uniquely_complemented"] = is_uniquely_complemented(L)
    verdicts["relatively_complemented"] = is_relatively_complemented(L)
    verdicts["pseudocomplemented"] = is_pseudocomplemented(L)
    verdicts["modular"] = is_modular(L)
    verdicts["distributive"] = is_distributive(L)
    verdicts["boolean"] = is_boolean(L)
    verdicts["atomic"] = is_atomic(L)
    verdicts["relatively_atomic"] = is_relatively_atomic(L)
    verdicts["graded"] = is_graded(L)
    flags: dict[str, Optional[bool]] = {k: v.holds for k, v in verdicts.items()}
    witnesses: dict[str, Any] = {k: v.witness for k, v in verdicts.items() if not v.holds}
    try:
        ortho = is_orthocomplemented(L, ortho_nodes)
        flags["orthocomplemented"] = ortho.holds
        witnesses["orthocomplemented"] = ortho.witness
    except OrthocomplementUndecided as exc:
        flags["orthocomplemented"] = None
        witnesses["orthocomplemented"] = f"undecided: {exc}"
    if flags["g_rack"] is False:
        witnesses["g_rack"] = {"subrack_meeting_all_orbits": L.index[verdicts["g_rack"].witness]}
    if flags["graded"]:
        witnesses["graded"] = {"rank": verdicts["graded"].witness}

    check_equivalences(r.label, flags)
    pmap = verdicts["pseudocomplemented"].witness if flags["pseudocomplemented"] else None
    return PropertyReport(r.label, r.n, len(L), flags, witnesses, pmap, L)


def check_equivalences(label: str, flags: dict[str, Optional[bool]]) -> None:
    """Raise :class:`TheoremViolation` if the flags contradict the equivalence theorems."""
    if flags["boolean"] != (flags["complemented"] and flags["distributive"]):
        raise TheoremViolation(f"{label}: Boolean flag disagrees with complemented and distributive")
    group = ["boolean", "distributive", "pseudocomplemented", "uniquely_complemented"]
    if len({flags[k] for k in group}) != 1:
        raise TheoremViolation(f"{label}: expected equal flags, got {[(k, flags[k]) for k in group]}")
    if flags["g_rack"]:
        group = ["boolean", "modular", "relatively_complemented"]
        if flags["orthocomplemented"] is not None:
            group.append("orthocomplemented")
        if len({flags[k] for k in group}) != 1:
            raise TheoremViolation(
                f"{label}: G-rack with unequal flags {[(k, flags[k]) for k in group]}"
            )


# --- complement reduction ---------------------------------------------------


def verify_reduction(L: SubrackLattice, cross_check: bool = True) -> Verdict:
    """Do complements always restrict to smaller subracks?

    For all Q <= R1 <= R2 and every complement Q' of Q in [0, R2], test that
    Q' ^ R1 is a complement of Q in [0, R1]. The witness is the first failing
    (Q, R1, R2, Q'). With ``cross_check`` the answer is compared to
    :func:`is_modular`, with which it must agree.
    """
    M, J, leq = L.meet_table, L.join_table, L.leq_matrix
    bot = L.bottom
    result = Verdict(True)
    for r2 in range(len(L)):
        down = np.flatnonzero(leq[:, r2])
        for q in down:
            comps = down[(M[q, down] == bot) & (J[q, down] == r2)]
            if not len(comps):
                continue
            r1s = down[leq[q, down]]
            # Q' ^ R1 is disjoint from Q already; only the join can fail
            restricted = M[np.ix_(comps, r1s)]
            ok = J[q, restricted] == r1s[None, :]
            if not ok.all():
                ci, ri = np.argwhere(~ok)[0]
                result = Verdict(False, (int(q), int(r1s[ri]), r2, int(comps[ci])))
                break
        if not result.holds:
            break
    if cross_check:
        modular = is_modular(L).holds
        if modular != result.holds:
            raise TheoremViolation(
                f"{L.rack.label}: complement reduction is {result.holds} but modularity is {modular}"
            )
    return result
