"""Order complexes, nerves and reduced integer homology.

Homology is computed exactly: boundary matrices are diagonalised over the
integers by sparse elimination (Python ints, so no overflow), which gives
ranks and torsion together.  Only homology is checked; homotopy type is not.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from .errors import CapExceededError, RackInputError, TheoremViolation
from .lattice import SubrackLattice, enumerate_subracks
from .racks import RackTable, g_rack_check, maximal_subracks, orbits

DEFAULT_FACE_CAP = 10**7

Face = tuple[int, ...]


def _sign(d: int) -> int:
    return -1 if d % 2 else 1


@dataclass
class SimplicialComplex:
    """A complex given by its facets; faces are derived (the empty face included).

    ``labels`` optionally names each vertex.
    """

    vertex_count: int
    facets: list[Face]
    labels: Optional[list[str]] = None
    face_cap: int = DEFAULT_FACE_CAP
    _faces: Optional[dict[int, list[Face]]] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    @cached_property
    def faces(self) -> dict[int, list[Face]]:
        """Faces keyed by dimension, each list sorted; dimension -1 holds the empty face."""
        if self._faces is not None:
            return self._faces
        seen: set[Face] = {()}
        for facet in self.facets:
            for k in range(1, len(facet) + 1):
                for sub in combinations(facet, k):
                    seen.add(sub)
                    if len(seen) > self.face_cap:
                        raise CapExceededError(f"complex has more than {self.face_cap} faces")
        out: dict[int, list[Face]] = defaultdict(list)
        for f in seen:
            out[len(f) - 1].append(f)
        return {d: sorted(fs) for d, fs in sorted(out.items())}

    def face_counts(self) -> dict[int, int]:
        return {d: len(fs) for d, fs in self.faces.items()}

    def euler_reduced(self) -> int:
        return sum(_sign(d) * k for d, k in self.face_counts().items())


def _maximal(sets: Sequence[Face]) -> list[Face]:
    fs = [frozenset(s) for s in sets]
    return sorted(tuple(sorted(s)) for s in set(fs) if not any(s < t for t in fs))


def order_complex(L: SubrackLattice, face_cap: int = DEFAULT_FACE_CAP) -> SimplicialComplex:
    """Chains of proper nonempty subracks.

    Vertex k is the k-th proper nonempty subrack in lattice order, i.e.
    lattice index k + 1. Faces are generated by extending chains upwards
    through the strict order; facets are the cover paths from atoms to
    coatoms.
    """
    if len(L) < 2:
        raise RackInputError("order complex needs a lattice with distinct bottom and top")
    inner = list(range(1, L.top))
    m = len(inner)
    leq = L.leq_matrix
    above = [[j - 1 for j in inner if j != i and leq[i, j]] for i in inner]

    faces: dict[int, list[Face]] = defaultdict(list)
    faces[-1].append(())
    total = 1
    stack: list[Face] = [(v,) for v in range(m)]
    while stack:
        chain = stack.pop()
        faces[len(chain) - 1].append(chain)
        total += 1
        if total > face_cap:
            raise CapExceededError(f"order complex has more than {face_cap} faces")
        stack.extend(chain + (w,) for w in above[chain[-1]])

    # maximal chains: cover paths between atoms and coatoms
    facets: list[Face] = []
    up = L.upper_covers
    path_stack = [(a - 1,) for a in up[L.bottom] if a != L.top]
    while path_stack:
        chain = path_stack.pop()
        nxt = [j - 1 for j in up[chain[-1] + 1] if j != L.top]
        if not nxt:
            facets.append(chain)
        path_stack.extend(chain + (w,) for w in nxt)

    labels = [L.describe(i) for i in inner]
    return SimplicialComplex(
        m, sorted(facets), labels, face_cap, {d: sorted(fs) for d, fs in sorted(faces.items())}
    )


def nerve_of_maximal_cover(r: RackTable, lattice: Optional[SubrackLattice] = None) -> SimplicialComplex:
    """Nerve of the cover by maximal subracks: J is a face iff the M_j share an element."""
    if lattice is not None:
        maxes = sorted(lattice.elems[i] for i in lattice.lower_covers[lattice.top])
    else:
        maxes = maximal_subracks(r)
    k = len(maxes)
    faces: list[Face] = [()]
    stack: list[tuple[Face, int]] = [((j,), maxes[j]) for j in range(k) if maxes[j]]
    while stack:
        face, common = stack.pop()
        faces.append(face)
        for j in range(face[-1] + 1, k):
            c = common & maxes[j]
            if c:
                stack.append((face + (j,), c))
    facets = _maximal([f for f in faces if f])
    labels = [r.describe(m) for m in maxes]
    return SimplicialComplex(k, facets, labels)


# --- homology ---------------------------------------------------------------


@dataclass(frozen=True)
class HomologyResult:
    """Reduced homology. ``betti[i + 1]`` is the rank in dimension i, for i = -1..dim."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    euler_reduced: int
    face_counts: tuple[int, ...]

    def betti_at(self, i: int) -> int:
        return self.betti[i + 1] if 0 <= i + 1 < len(self.betti) else 0

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    def signature(self) -> tuple[dict[int, int], dict[int, tuple[int, ...]]]:
        """Nonzero Betti numbers and torsion by dimension; comparable across lengths."""
        betti = {i - 1: b for i, b in enumerate(self.betti) if b}
        torsion = {i - 1: t for i, t in enumerate(self.torsion) if t}
        return betti, torsion

    def is_sphere(self, d: int) -> bool:
        """Homology consistent with the d-sphere (d = -1 is the empty complex)."""
        nonzero = {i - 1: b for i, b in enumerate(self.betti) if b}
        return self.torsion_free and nonzero == {d: 1}

    def rows(self) -> list[tuple[int, int, int, tuple[int, ...]]]:
        return [
            (i - 1, self.face_counts[i], self.betti[i], self.torsion[i])
            for i in range(len(self.betti))
        ]


def boundary_rows(faces: dict[int, list[Face]], k: int) -> list[dict[int, int]]:
    """Boundary of each k-face as {index of (k-1)-face: coefficient}.

    For k = 0 this is the augmentation onto the empty face.
    """
    lower = {f: i for i, f in enumerate(faces.get(k - 1, []))}
    out = []
    for f in faces.get(k, []):
        row = {}
        for i in range(len(f)):
            row[lower[f[:i] + f[i + 1:]]] = -1 if i % 2 else 1
        out.append(row)
    return out


def _check_dd_zero(upper: list[dict[int, int]], lower: list[dict[int, int]]) -> None:
    for row in upper:
        acc: dict[int, int] = defaultdict(int)
        for j, v in row.items():
            for i, w in lower[j].items():
                acc[i] += v * w
        if any(acc.values()):
            raise TheoremViolation("boundary of a boundary is not zero")


def diagonal_entries(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero diagonal of an integer diagonalisation, absolute values.

    Rows and columns are reduced by unimodular operations, always pivoting on
    the smallest available entry. The multiset need not satisfy the Smith
    divisibility chain; :func:`invariant_factors` normalises it.
    """
    R: dict[int, dict[int, int]] = {i: dict(r) for i, r in enumerate(rows) if r}
    C: dict[int, set[int]] = defaultdict(set)
    for i, r in R.items():
        for j in r:
            C[j].add(i)

    def axpy(dst: int, q: int, src: int) -> None:
        # row dst -= q * row src
        d = R[dst]
        for j, v in R[src].items():
            nv = d.get(j, 0) - q * v
            if nv:
                if j not in d:
                    C[j].add(dst)
                d[j] = nv
            else:
                d.pop(j, None)
                C[j].discard(dst)

    def drop_row(i: int) -> None:
        for j in R.pop(i):
            C[j].discard(i)

    out = []
    order = sorted(R, key=lambda i: len(R[i]))
    for start in order:
        if start not in R:
            continue
        if not R[start]:
            del R[start]
            continue
        r = start
        c = min(R[r], key=lambda j: (abs(R[r][j]), len(C[j])))
        while True:
            p = R[r][c]
            moved = False
            for r2 in sorted(C[c] - {r}):
                q = R[r2][c] // p
                axpy(r2, q, r)
                if R[r2].get(c):
                    r, moved = r2, True  # smaller remainder becomes the pivot
                    break
            if moved:
                continue
            # column c is now zero outside row r, so column ops touch row r only
            row = R[r]
            for c2 in sorted(j for j in row if j != c):
                v = row[c2] - (row[c2] // p) * p
                if v:
                    row[c2] = v
                    c, moved = c2, True
                    break
                del row[c2]
                C[c2].discard(r)
            if moved:
                continue
            out.append(abs(p))
            drop_row(r)
            C.pop(c, None)
            break
        # row `start` may have been swapped out of pivot duty; keep reducing it
        if start in R and R[start]:
            order.append(start)
    return out


def _prime_powers(d: int) -> list[int]:
    out, p = [], 2
    while p * p <= d:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        p += 1
    if d > 1:
        out.append(d)
    return out


def invariant_factors(diagonal: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors > 1 of the group sum of Z/d over ``diagonal``, ascending."""
    by_prime: dict[int, list[int]] = defaultdict(list)
    for d in diagonal:
        for q in _prime_powers(abs(d)):
            base = next(p for p in range(2, q + 1) if q % p == 0)
            by_prime[base].append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    factors = []
    for k in range(length):
        f = 1
        for qs in by_prime.values():
            if k < len(qs):
                f *= qs[k]
        factors.append(f)
    return tuple(sorted(factors))


def reduced_homology(K: SimplicialComplex) -> HomologyResult:
    faces = K.faces
    top = max(faces)
    counts = [len(faces.get(d, [])) for d in range(-1, top + 1)]
    ranks = [0] * (top + 3)  # ranks[k + 1] = rank of boundary from dim k to k - 1
    torsion_of = [()] * (top + 2)
    prev = None
    for k in range(0, top + 1):
        rows = boundary_rows(faces, k)
        if prev is not None:
            _check_dd_zero(rows, prev)
        diag = diagonal_entries(rows)
        ranks[k + 1] = len(diag)
        torsion_of[k] = invariant_factors([d for d in diag if d != 1])  # lands in H_{k-1}
        prev = rows
    betti = []
    torsion = []
    for k in range(-1, top + 1):
        betti.append(counts[k + 1] - ranks[k + 1] - ranks[k + 2])
        torsion.append(torsion_of[k + 1] if k + 1 <= top else ())
    euler = K.euler_reduced()
    if not any(torsion) and euler != sum(_sign(i - 1) * b for i, b in enumerate(betti)):
        raise TheoremViolation("Euler characteristic disagrees with the Betti numbers")
    return HomologyResult(tuple(betti), tuple(torsion), euler, tuple(counts))


# --- sphere check -----------------------------------------------------------


class SphereCheck(NamedTuple):
    ok: bool
    c: int
    homology: HomologyResult
    nerve: HomologyResult


def verify_sphere(r: RackTable, lattice: Optional[SubrackLattice] = None,
                  face_cap: int = DEFAULT_FACE_CAP) -> SphereCheck:
    """For a G-rack with c orbits: reduced homology of the order complex is that of S^(c-2).

    Also requires the nerve of the maximal-subrack cover to have the same
    homology. ``ok`` is False only if one of these fails, which would
    contradict the known results.
    """
    if not g_rack_check(r).holds:
        raise RackInputError(f"{r.label!r} is not a G-rack")
    c = orbits(r).c
    L = lattice if lattice is not None else enumerate_subracks(r)
    K = order_complex(L, face_cap)
    sign_ok = K.euler_reduced() == _sign(c - 2)
    H = reduced_homology(K)
    N = reduced_homology(nerve_of_maximal_cover(r, L))
    ok = sign_ok and H.is_sphere(c - 2) and N.signature() == H.signature()
    return SphereCheck(ok, c, H, N)


def verify_nerve_lemma(r: RackTable, lattice: Optional[SubrackLattice] = None) -> bool:
    """Nerve and order complex have equal homology (holds for every finite rack)."""
    L = lattice if lattice is not None else enumerate_subracks(r)
    H = reduced_homology(order_complex(L))
    N = reduced_homology(nerve_of_maximal_cover(r, L))
    return H.signature() == N.signature()
