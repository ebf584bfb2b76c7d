"""The fixed test universe: catalog racks, seeded P-racks and seeded random racks.

Built once per session and shared by the acceptance module and the property
tests. Lattices are memoised by label so each is enumerated once.
"""

from __future__ import annotations

import random
from functools import lru_cache

from rackkit.catalog import p_rack, random_p_rack_spec, random_rack, resolve
from rackkit.lattice import SubrackLattice, enumerate_subracks
from rackkit.racks import RackTable

P_RACK_SEED = 20240
RANDOM_SEED = 7
P_RACK_COUNT = 20
RANDOM_COUNT = 500


def catalog_names() -> list[str]:
    names = [f"trivial:{n}" for n in range(1, 9)]
    names += [f"dihedral:{n}" for n in range(2, 13)]
    for g in ("S3", "S4", "A4", "D8", "Q8"):
        names += [f"conj:{g}", f"conj:{g}:noid"]
    names += [f"transpositions:{n}" for n in range(3, 6)]
    return names


@lru_cache(maxsize=None)
def catalog_racks() -> tuple[RackTable, ...]:
    return tuple(resolve(name) for name in catalog_names())


@lru_cache(maxsize=None)
def seeded_p_racks() -> tuple[RackTable, ...]:
    rng = random.Random(P_RACK_SEED)
    out = []
    for i in range(P_RACK_COUNT):
        n = rng.randint(2, 7)
        out.append(p_rack(random_p_rack_spec(n, rng), label=f"prack:{i}"))
    return tuple(out)


@lru_cache(maxsize=None)
def seeded_random_racks() -> tuple[RackTable, ...]:
    rng = random.Random(RANDOM_SEED)
    out = []
    for i in range(RANDOM_COUNT):
        r = random_rack(rng.randint(1, 6), rng)
        out.append(RackTable(r.n, r.table, f"random:{i}"))
    return tuple(out)


def full_universe() -> tuple[RackTable, ...]:
    return catalog_racks() + seeded_p_racks() + seeded_random_racks()


_lattices: dict[str, SubrackLattice] = {}


def lattice_of(r: RackTable) -> SubrackLattice:
    L = _lattices.get(r.label)
    if L is None or L.rack.table != r.table:
        L = _lattices[r.label] = enumerate_subracks(r)
    return L
