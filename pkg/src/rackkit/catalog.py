"""Constructors for the rack families used throughout the package.

Builtin names (as accepted by :func:`resolve`)::

    trivial:N            trivial quandle, a |> b = b
    dihedral:N           a |> b = 2a - b mod N
    transpositions:N     transpositions of S_N under conjugation
    conj:G               group G under conjugation, identity included
    conj:G:noid          the same with the identity removed

where G is one of S3, S4, A4, D8, Q8, Zn:k or Zn:kxZn:m.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Optional, Sequence

from .bitset import MAX_ELEMENTS
from .errors import RackInputError
from .racks import Permutation, RackTable, compose, invert, verify_rack

SCHEMA = 1


@dataclass(frozen=True)
class GroupTable:
    n: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    id: int
    label: str = ""
    names: Optional[tuple[str, ...]] = None

    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a] for a in range(self.n) for b in range(a))


def group_from_table(mul, label: str = "", names=None) -> GroupTable:
    """Validate a multiplication table and derive identity and inverses."""
    mul = tuple(tuple(row) for row in mul)
    n = len(mul)
    if n == 0 or any(len(row) != n for row in mul):
        raise RackInputError("group table must be square and nonempty")
    if any(not 0 <= v < n for row in mul for v in row):
        raise RackInputError("group table entry out of range")
    ids = [e for e in range(n) if all(mul[e][x] == x == mul[x][e] for x in range(n))]
    if not ids:
        raise RackInputError(f"group {label!r} has no identity")
    e = ids[0]
    inv = []
    for a in range(n):
        bs = [b for b in range(n) if mul[a][b] == e]
        if len(bs) != 1 or mul[bs[0]][a] != e:
            raise RackInputError(f"element {a} of {label!r} has no two-sided inverse")
        inv.append(bs[0])
    for a, b, c in product(range(n), repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            raise RackInputError(f"group {label!r} is not associative at ({a}, {b}, {c})")
    return GroupTable(n, mul, tuple(inv), e, label, tuple(names) if names else None)


def _perm_group(elements: Sequence[Permutation], label: str) -> GroupTable:
    pos = {p: i for i, p in enumerate(elements)}
    mul = [[pos[compose(p, q)] for q in elements] for p in elements]
    return group_from_table(mul, label, [cycle_notation(p) for p in elements])


def cycle_notation(p: Permutation) -> str:
    """1-based cycle notation, ``id`` for the identity."""
    seen = set()
    cycles = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        cycles.append("(" + " ".join(str(v + 1) for v in cyc) + ")")
    return "".join(cycles) or "id"


def _sign(p: Permutation) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) % 2


def _cyclic(k: int) -> GroupTable:
    if k < 1:
        raise RackInputError("cyclic group order must be >= 1")
    mul = [[(a + b) % k for b in range(k)] for a in range(k)]
    return group_from_table(mul, f"Zn:{k}", [str(a) for a in range(k)])


def _direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    n, m = g.n, h.n
    mul = [
        [g.mul[a // m][b // m] * m + h.mul[a % m][b % m] for b in range(n * m)]
        for a in range(n * m)
    ]
    names = [f"({g.names[a // m]},{h.names[a % m]})" for a in range(n * m)]
    return group_from_table(mul, f"{g.label}x{h.label}", names)


def _dihedral_group_8() -> GroupTable:
    # element k = sigma^(k % 4) tau^(k // 4); tau sigma = sigma^3 tau
    def mul(x, y):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        return (a + (c if b == 0 else -c)) % 4 + 4 * ((b + d) % 2)

    names = ["1", "s", "s^2", "s^3", "t", "st", "s^2t", "s^3t"]
    return group_from_table([[mul(x, y) for y in range(8)] for x in range(8)], "D8", names)


def _quaternion_group() -> GroupTable:
    # element order 1, -1, i, -i, j, -j, k, -k; unit products e_a e_b = sign * e_c
    basis = "1ijk"
    table = {("1", x): (1, x) for x in basis}
    table.update({(x, "1"): (1, x) for x in basis})
    table.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(s, u) for u in basis for s in (1, -1)]
    pos = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        (s1, u1), (s2, u2) = elems[x], elems[y]
        s, u = table[(u1, u2)]
        return pos[(s1 * s2 * s, u)]

    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return group_from_table([[mul(x, y) for y in range(8)] for x in range(8)], "Q8", names)


def builtin_group(name: str) -> GroupTable:
    """Named groups: S3, S4, A4, D8, Q8, Zn:k, Zn:kxZn:m (also with the sign ×)."""
    key = name.replace("×", "x").strip()
    if key in ("S3", "S4"):
        elems = list(permutations(range(int(key[1]))))
        return _perm_group(elems, key)
    if key == "A4":
        return _perm_group([p for p in permutations(range(4)) if _sign(p) == 0], key)
    if key == "D8":
        return _dihedral_group_8()
    if key == "Q8":
        return _quaternion_group()
    if key.startswith("Zn:"):
        parts = key.split("x")
        try:
            orders = [int(part.split(":", 1)[1]) for part in parts]
        except (IndexError, ValueError) as exc:
            raise RackInputError(f"bad cyclic group name {name!r}") from exc
        g = _cyclic(orders[0])
        for k in orders[1:]:
            g = _direct_product(g, _cyclic(k))
        return g
    raise RackInputError(f"unknown group {name!r}; expected S3, S4, A4, D8, Q8, Zn:k or Zn:kxZn:m")


# --- rack families ----------------------------------------------------------


def _check_size(n: int, what: str) -> None:
    if n < 1:
        raise RackInputError(f"{what} needs at least one element")
    if n > MAX_ELEMENTS:
        raise RackInputError(f"{what} would have {n} elements; the maximum is {MAX_ELEMENTS}")


def trivial_quandle(n: int) -> RackTable:
    _check_size(n, "trivial quandle")
    return RackTable(n, [list(range(n)) for _ in range(n)], f"trivial:{n}")


def dihedral(n: int) -> RackTable:
    _check_size(n, "dihedral rack")
    return RackTable(n, [[(2 * a - b) % n for b in range(n)] for a in range(n)], f"dihedral:{n}")


def conjugation_rack(g: GroupTable, include_identity: bool = False) -> RackTable:
    """``a |> b = a b a^-1`` on the group, optionally without the identity."""
    keep = [x for x in range(g.n) if include_identity or x != g.id]
    _check_size(len(keep), "conjugation rack")
    pos = {x: i for i, x in enumerate(keep)}
    rows = [[pos[g.mul[g.mul[a][b]][g.inv[a]]] for b in keep] for a in keep]
    names = [g.names[x] for x in keep] if g.names else None
    suffix = "" if include_identity else ":noid"
    return RackTable(len(keep), rows, f"conj:{g.label}{suffix}", names)


def transposition_quandle(n: int) -> RackTable:
    """Transpositions (a b), a < b, in lexicographic order, under conjugation."""
    if n < 2:
        raise RackInputError("transposition quandle needs n >= 2")
    pairs = list(combinations(range(n), 2))
    _check_size(len(pairs), "transposition quandle")
    pos = {p: i for i, p in enumerate(pairs)}

    def swap(t, x):
        a, b = t
        return b if x == a else a if x == b else x

    rows = [[pos[tuple(sorted((swap(s, c), swap(s, d))))] for (c, d) in pairs] for s in pairs]
    names = [f"({a + 1} {b + 1})" for a, b in pairs]
    return RackTable(len(pairs), rows, f"transpositions:{n}", names)


@dataclass(frozen=True)
class PRackSpec:
    """Partition ``block_of`` plus one permutation per block."""

    n: int
    block_of: tuple[int, ...]
    perms: tuple[Permutation, ...]

    def blocks(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in self.perms]
        for x, i in enumerate(self.block_of):
            out[i].add(x)
        return out


def p_rack(spec: PRackSpec, label: str = "") -> RackTable:
    """``x |> y = f_i(y)`` for x in block i; the partition and commutation invariants are validated first."""
    n = spec.n
    _check_size(n, "P-rack")
    if len(spec.block_of) != n:
        raise RackInputError("block_of must assign a block to every element")
    k = len(spec.perms)
    if any(not 0 <= i < k for i in spec.block_of):
        raise RackInputError("block index out of range")
    blocks = spec.blocks()
    for i, b in enumerate(blocks):
        if not b:
            raise RackInputError(f"block {i} is empty")
    for i, f in enumerate(spec.perms):
        if sorted(f) != list(range(n)):
            raise RackInputError(f"f_{i} is not a permutation of 0..{n - 1}")
        for j, b in enumerate(blocks):
            if {f[x] for x in b} != b:
                raise RackInputError(f"f_{i} does not preserve block {j}")
    for i, j in combinations(range(k), 2):
        if compose(spec.perms[i], spec.perms[j]) != compose(spec.perms[j], spec.perms[i]):
            raise RackInputError(f"f_{i} and f_{j} do not commute")
    rows = [list(spec.perms[spec.block_of[a]]) for a in range(n)]
    return RackTable(n, rows, label or f"p-rack:{n}")


# --- serialization ----------------------------------------------------------


def rack_to_dict(r: RackTable) -> dict:
    d = {"schema": SCHEMA, "label": r.label, "n": r.n, "table": [list(row) for row in r.table]}
    if r.names:
        d["names"] = list(r.names)
    return d


def serialize_rack(r: RackTable) -> str:
    return json.dumps(rack_to_dict(r))


def parse_rack(text: str | dict) -> RackTable:
    """Parse the rack JSON format; the table must pass :func:`verify_rack`."""
    try:
        data = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise RackInputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "table" not in data:
        raise RackInputError('rack JSON must be an object with a "table" field')
    if data.get("schema", SCHEMA) != SCHEMA:
        raise RackInputError(f"unsupported schema {data.get('schema')!r}")
    table = data["table"]
    n = data.get("n", len(table) if isinstance(table, list) else None)
    if not isinstance(table, list) or n != len(table):
        raise RackInputError("field n does not match the table")
    return RackTable(n, table, data.get("label", ""), data.get("names"))


def parse_group(text: str | dict, label: str = "") -> GroupTable:
    data = json.loads(text) if isinstance(text, str) else text
    if not isinstance(data, dict) or "mul" not in data:
        raise RackInputError('group JSON must be an object with a "mul" field')
    if "n" in data and data["n"] != len(data["mul"]):
        raise RackInputError("field n does not match the table")
    return group_from_table(data["mul"], data.get("label", label), data.get("names"))


def resolve(name: str) -> RackTable:
    """Build a rack from a builtin name such as ``dihedral:8`` or ``conj:S3:noid``."""
    family, _, arg = name.strip().partition(":")
    try:
        if family == "trivial":
            return trivial_quandle(int(arg))
        if family == "dihedral":
            return dihedral(int(arg))
        if family == "transpositions":
            return transposition_quandle(int(arg))
    except ValueError as exc:
        if isinstance(exc, RackInputError):
            raise
        raise RackInputError(f"bad size in {name!r}") from exc
    if family == "conj" and arg:
        include = True
        if arg.endswith(":noid"):
            arg, include = arg[: -len(":noid")], False
        return conjugation_rack(builtin_group(arg), include_identity=include)
    raise RackInputError(
        f"unknown rack {name!r}; expected trivial:N, dihedral:N, transpositions:N, conj:G[:noid]"
    )


# --- random racks -----------------------------------------------------------


def random_p_rack_spec(n: int, rng: random.Random) -> PRackSpec:
    """A random P-rack: random partition, f_i built from powers of one cycle per block.

    Powers of disjoint cycles commute and keep every block in place, so the
    invariants hold by construction.
    """
    _check_size(n, "P-rack")
    k = rng.randint(1, n)
    block_of = [rng.randrange(k) for _ in range(n)]
    used = sorted(set(block_of))
    relabel = {b: i for i, b in enumerate(used)}
    block_of = [relabel[b] for b in block_of]
    k = len(used)
    cycles = []
    for i in range(k):
        members = [x for x in range(n) if block_of[x] == i]
        rng.shuffle(members)
        cycles.append(members)
    perms = []
    for _ in range(k):
        f = list(range(n))
        for members in cycles:
            e = rng.randrange(len(members))
            for idx, x in enumerate(members):
                f[x] = members[(idx + e) % len(members)]
        perms.append(tuple(f))
    return PRackSpec(n, tuple(block_of), tuple(perms))


def _search_rack_rows(
    n: int, rng: random.Random, node_budget: int, quandle: bool = False
) -> Optional[list[list[int]]]:
    """Randomised depth-first search for a rack table, row by row.

    Each row is drawn from a shuffled list of permutations and kept only if
    every self-distributivity instance it can already be checked on holds.
    With ``quandle`` row a only ranges over permutations fixing a.
    """
    all_perms = list(permutations(range(n)))
    rows: list[Optional[tuple[int, ...]]] = [None] * n
    nodes = 0

    def consistent(upto: int) -> bool:
        # only instances whose three rows (a, b, a|>b) are assigned and include row `upto`
        for a in range(upto + 1):
            ra = rows[a]
            for b in range(upto + 1):
                ab = ra[b]
                if ab > upto or upto not in (a, b, ab):
                    continue
                rb, rab = rows[b], rows[ab]
                if any(ra[rb[c]] != rab[ra[c]] for c in range(n)):
                    return False
        return True

    def extend(a: int) -> bool:
        nonlocal nodes
        if a == n:
            return True
        order = [p for p in all_perms if p[a] == a] if quandle else all_perms[:]
        rng.shuffle(order)
        for p in order:
            nodes += 1
            if nodes > node_budget:
                return False
            rows[a] = p
            if consistent(a) and extend(a + 1):
                return True
        rows[a] = None
        return False

    if extend(0):
        return [list(r) for r in rows]
    return None


def random_rack(
    n: int, rng: random.Random, node_budget: int = 20000, quandle: Optional[bool] = None
) -> RackTable:
    """A random rack on ``n`` elements (best effort; no uniformity claim).

    Rows are sampled as random permutations and rejected as soon as a
    self-distributivity instance fails; on a dead end the search restarts.
    Unconstrained search mostly finds racks with a single repeated row, so
    by default half the draws are restricted to quandles (``quandle=None``
    flips a coin). Element labels are shuffled afterwards so structure is
    not tied to indices.
    """
    _check_size(n, "random rack")
    if n > 7:
        raise RackInputError("random_rack supports n <= 7")
    if quandle is None:
        quandle = rng.random() < 0.5
    while True:
        rows = _search_rack_rows(n, rng, node_budget, quandle)
        if rows is None:
            continue
        sigma = list(range(n))
        rng.shuffle(sigma)
        inv = invert(tuple(sigma))
        # conjugate by a random relabelling: (s a) |> (s b) = s (a |> b)
        table = [[sigma[rows[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
        assert verify_rack(table).valid
        return RackTable(n, table, f"random:{n}")
