"""Acceptance suite: one test per criterion, each timed against its budget.

Every test records a pass/fail line (see ``acceptance_log``); the lines are
printed in the pytest terminal summary.
"""

from itertools import combinations

import pytest

from acceptance_log import criterion
from rackkit.bitset import elements_of, is_subset, mask_of, popcount
from rackkit.catalog import resolve
from rackkit.complement import find_complement, verify_empty_core
from rackkit.lattice import atoms, enumerate_subracks, interval, is_atomic, is_graded, naive_subracks
from rackkit.props import is_complemented, is_modular, property_report, verify_reduction
from rackkit.racks import g_rack_check, orbits
from rackkit.topology import verify_sphere
from universe import catalog_racks, full_universe, lattice_of, seeded_p_racks

pytestmark = pytest.mark.acceptance


def _names(r, mask):
    return {r.name(x) for x in elements_of(mask)}


def test_criterion_01_s3_without_identity():
    with criterion(1, "S3 minus identity: 9 subracks, 5 atoms, 2 coatoms, [(1 2), top] not complemented", 1.0) as t:
        r = resolve("conj:S3:noid")
        L = enumerate_subracks(r)
        t.check(len(L) == 9, f"{len(L)} subracks")
        ats = atoms(L)
        t.check(len(ats) == 5 and all(popcount(L.elems[a]) == 1 for a in ats), "atoms are not the 5 singletons")
        coatoms = L.lower_covers[L.top]
        transpositions = {"(1 2)", "(1 3)", "(2 3)"}
        three_cycles = {"(1 2 3)", "(1 3 2)"}
        got = sorted((_names(r, L.elems[c]) for c in coatoms), key=len)
        t.check(got == [three_cycles, transpositions], f"coatoms {got}")
        # every atom sits under exactly one coatom, and the ranks are 0,1,2,3
        for a in ats:
            t.check(len(L.upper_covers[a]) == 1 and L.upper_covers[a][0] in coatoms, f"atom {L.describe(a)}")
        t.check(_rank_profile(L) == [1, 5, 2, 1], f"rank profile {_rank_profile(L)}")
        lo = L.index[mask_of(x for x in range(r.n) if r.name(x) == "(1 2)")]
        view = interval(L, lo, L.top)
        t.check(len(view) == 3, f"interval has {len(view)} members")
        t.check(not is_complemented(view).holds, "interval [(1 2), top] is complemented")
        t.detail = f"subracks={len(L)}"


def _rank_profile(L):
    ranks = is_graded(L).witness
    out = [0] * (max(ranks) + 1)
    for k in ranks:
        out[k] += 1
    return out


def test_criterion_02_dihedral_8_interval():
    with criterion(2, "dihedral:8 interval above {0} is a 4-chain with single atom {0,4}", 1.0) as t:
        L = enumerate_subracks(resolve("dihedral:8"))
        view = interval(L, L.index[mask_of([0])], L.top)
        chain = [elements_of(L.elems[m]) for m in view.members]
        t.check(chain == [[0], [0, 4], [0, 2, 4, 6], list(range(8))], f"interval {chain}")
        t.check([elements_of(L.elems[a]) for a in view.atoms()] == [[0, 4]], "atoms of the interval")
        at = is_atomic(view)
        t.check(not at.holds and elements_of(L.elems[at.witness]) == [0, 2, 4, 6], f"atomic {at}")
        t.check(not is_complemented(view).holds, "interval is complemented")


def test_criterion_03_every_lattice_complemented():
    with criterion(3, "subrack lattice complemented on catalog, 20 P-racks, 500 random racks", 60.0) as t:
        universe = full_universe()
        bad = [r.label for r in universe if not is_complemented(lattice_of(r)).holds]
        t.check(not bad, f"not complemented: {bad[:5]}")
        t.detail = f"{len(universe)} racks, {len(bad)} violations"


def test_criterion_04_empty_core_and_descent():
    with criterion(4, "maximal subracks have empty core; descent complement contract on all pairs", 120.0) as t:
        pairs = 0
        for r in full_universe():
            L = lattice_of(r)
            t.check(verify_empty_core(r, L), f"{r.label}: nonempty core")
            if len(L) > 1024:
                continue
            for q1 in L.elems:
                for q2 in L.elems:
                    result, trace = find_complement(r, q1, q2, L)
                    pairs += 1
                    target = L.elems[L.join(L.index[q1], L.index[q2])]
                    ok = (
                        result & q1 == 0
                        and is_subset(result, q2)
                        and L.elems[L.join(L.index[q1], L.index[result])] == target
                        and trace.result == result
                    )
                    overlap = popcount(q2 & q1)
                    prev = q2
                    for step in trace.steps:
                        nxt = popcount(step.replacement & q1)
                        ok = ok and step.current == prev and nxt < overlap
                        ok = ok and is_subset(step.replacement, step.current) and step.replacement != step.current
                        overlap, prev = nxt, step.replacement
                    if not ok:
                        t.check(False, f"{r.label}: q1={elements_of(q1)} q2={elements_of(q2)}")
        t.detail = f"{pairs} pairs"


def test_criterion_05_reduction_matches_modularity():
    with criterion(5, "complement reduction agrees with modularity on lattices <= 512", 120.0) as t:
        checked = 0
        for r in catalog_racks() + seeded_p_racks():
            L = lattice_of(r)
            if len(L) > 512:
                continue
            checked += 1
            red = verify_reduction(L, cross_check=False).holds
            mod = is_modular(L).holds
            t.check(red == mod, f"{r.label}: reduction {red}, modular {mod}")
        t.detail = f"{checked} racks"


def test_criterion_06_flag_equivalences():
    with criterion(6, "Boolean-equivalent flags agree; on G-racks Boolean = modular = rel. compl. = ortho", 300.0) as t:
        g_racks = 0
        for r in full_universe():
            L = lattice_of(r)
            flags = property_report(r, L).flags
            group = {flags[k] for k in ("boolean", "distributive", "pseudocomplemented", "uniquely_complemented")}
            t.check(len(group) == 1, f"{r.label}: {flags}")
            if flags["orthocomplemented"] is None:
                t.check(len(L) > 200, f"{r.label}: orthocomplementation undecided at {len(L)} elements")
            if flags["g_rack"]:
                g_racks += 1
                keys = ["boolean", "modular", "relatively_complemented"]
                if flags["orthocomplemented"] is not None:
                    keys.append("orthocomplemented")
                t.check(len({flags[k] for k in keys}) == 1, f"{r.label}: {[(k, flags[k]) for k in keys]}")
        t.detail = f"{g_racks} G-racks"


def test_criterion_07_sphere_homology():
    with criterion(7, "G-rack order complex has the homology of S^(c-2), matching the nerve", 300.0) as t:
        expected_c = {f"trivial:{n}": n for n in range(2, 7)}
        expected_c.update({"conj:S3": 3, "conj:D8": 5, "conj:Q8": 5})
        racks = [resolve(name) for name in expected_c] + list(seeded_p_racks())
        for r in racks:
            check = verify_sphere(r, lattice_of(r))
            c = expected_c.get(r.label, orbits(r).c)
            t.check(check.c == c, f"{r.label}: c={check.c}, expected {c}")
            t.check(check.ok, f"{r.label}: verify_sphere failed")
            t.check(check.homology.signature() == ({c - 2: 1}, {}), f"{r.label}: {check.homology.signature()}")
        t.detail = f"{len(racks)} racks"


def _stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def test_criterion_08_transpositions_partition_lattice():
    with criterion(8, "transpositions:4 is the partition lattice (15, profile 1,6,7,1); transpositions:3 has 5", 5.0) as t:
        r = resolve("transpositions:4")
        L = enumerate_subracks(r)
        profile = [_stirling2(4, 4 - k) for k in range(4)]
        t.check(profile == [1, 6, 7, 1], f"oracle profile {profile}")
        t.check(len(L) == sum(profile) == 15, f"{len(L)} subracks")
        t.check(is_graded(L).holds and _rank_profile(L) == profile, f"rank profile {_rank_profile(L)}")
        # partition -> transpositions inside its blocks, compared as sets of masks
        index = {r.name(x): x for x in range(r.n)}
        from_partitions = set()
        for part in _set_partitions([1, 2, 3, 4]):
            from_partitions.add(mask_of(index[f"({a} {b})"] for block in part for a, b in combinations(sorted(block), 2)))
        t.check(from_partitions == set(L.elems), "subracks differ from the partition images")
        L3 = enumerate_subracks(resolve("transpositions:3"))
        t.check(len(L3) == 5, f"transpositions:3 has {len(L3)} subracks")


def test_criterion_09_graded_groups():
    with criterion(9, "graded for Z2xZ2, Z6, S3, D8, Q8 under conjugation; not for S4", 60.0) as t:
        for g in ("Zn:2xZn:2", "Zn:6", "S3", "D8", "Q8"):
            t.check(is_graded(enumerate_subracks(resolve(f"conj:{g}"))).holds, f"conj:{g} not graded")
        t.check(not is_graded(enumerate_subracks(resolve("conj:S4"))).holds, "conj:S4 graded")


def test_criterion_10_next_closure_matches_naive():
    with criterion(10, "next-closure enumeration equals naive subset filter for n <= 16", 120.0) as t:
        checked = 0
        for r in catalog_racks() + seeded_p_racks():
            if r.n > 16:
                continue
            checked += 1
            t.check(lattice_of(r).elems == naive_subracks(r), f"{r.label}: lists differ")
        t.detail = f"{checked} racks"


def test_g_rack_flags_on_sphere_inputs_are_g_racks():
    # guards criterion 7: the sphere statement only applies to G-racks
    for r in seeded_p_racks():
        assert g_rack_check(r).holds
