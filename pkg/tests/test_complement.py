import json

import pytest

from rackkit.bitset import is_subset, mask_of, popcount
from rackkit.catalog import dihedral, resolve, trivial_quandle
from rackkit.complement import (
    check_complement,
    find_complement,
    maximal_subrack_avoiding,
    orbit_complement,
    verify_empty_core,
)
from rackkit.errors import RackInputError
from rackkit.props import complements_of
from rackkit.racks import closure, is_g_rack, is_subrack, maximal_subracks, orbits
from universe import catalog_racks, lattice_of, seeded_p_racks, seeded_random_racks

RACKS = catalog_racks() + seeded_p_racks()


def _names(r, *names):
    lookup = {r.name(x): x for x in range(r.n)}
    return mask_of(lookup[s] for s in names)


@pytest.mark.parametrize("r", RACKS + seeded_random_racks(), ids=lambda r: r.label)
def test_empty_core(r):
    assert verify_empty_core(r) and verify_empty_core(r, lattice_of(r))


def test_empty_core_examples():
    assert maximal_subracks(trivial_quandle(1)) == [0]
    assert verify_empty_core(trivial_quandle(1))
    r = resolve("conj:S3:noid")
    maxes = maximal_subracks(r)
    assert maxes[0] & maxes[1] == 0 and len(maxes) == 2


def test_maximal_subrack_avoiding_examples():
    assert maximal_subrack_avoiding(trivial_quandle(3), 0b111, 0) == 0b110
    r = resolve("conj:S3:noid")
    x = [i for i in range(r.n) if r.name(i) == "(1 2)"][0]
    assert maximal_subrack_avoiding(r, r.full, x) == _names(r, "(1 2 3)", "(1 3 2)")
    d = dihedral(8)
    m = maximal_subrack_avoiding(d, d.full, 0)
    assert not m & 1 and m in maximal_subracks(d)


@pytest.mark.parametrize("r", RACKS[:40], ids=lambda r: r.label)
def test_maximal_subrack_avoiding_with_and_without_lattice(r):
    L = lattice_of(r)
    for q in L.elems[1:]:
        for x in range(r.n):
            if (q >> x) & 1:
                a = maximal_subrack_avoiding(r, q, x)
                assert a == maximal_subrack_avoiding(r, q, x, L)
                assert not (a >> x) & 1 and is_subrack(r, a)
                # maximal inside q: nothing strictly between a and q
                assert not any(a != m != q and is_subset(a, m) and is_subset(m, q) for m in L.elems)


def test_maximal_subrack_avoiding_rejects_missing_element():
    with pytest.raises(RackInputError):
        maximal_subrack_avoiding(trivial_quandle(3), 0b011, 2)


def test_find_complement_examples():
    r = resolve("conj:S3:noid")
    res, trace = find_complement(r, 0, r.full)
    assert res == r.full and trace.steps == ()
    q1 = _names(r, "(1 2)")
    res, trace = find_complement(r, q1, r.full)
    assert check_complement(r, q1, r.full, res)
    L = lattice_of(r)
    assert L.index[res] in complements_of(L, L.index[q1])
    t = trivial_quandle(5)
    res, _ = find_complement(t, 0b00101, t.full)
    assert res == 0b11010


def test_find_complement_rejects_non_subracks():
    r = resolve("conj:S3:noid")
    with pytest.raises(RackInputError):
        find_complement(r, _names(r, "(1 2)", "(1 3)"), r.full)


@pytest.mark.parametrize("r", RACKS + seeded_random_racks()[:200], ids=lambda r: r.label)
def test_complement_against_whole_rack_is_a_lattice_complement(r):
    L = lattice_of(r)
    for i, q in enumerate(L.elems):
        res, trace = find_complement(r, q, r.full, L)
        assert L.index[res] in complements_of(L, i)
        overlaps = [popcount(s.current & q) for s in trace.steps] + [popcount(res & q)]
        assert all(a > b for a, b in zip(overlaps, overlaps[1:]))


def test_trace_json_lines():
    r = resolve("conj:S3:noid")
    _, trace = find_complement(r, _names(r, "(1 2)"), r.full)
    lines = [json.loads(s) for s in trace.to_json_lines().splitlines()]
    assert all(d["schema"] == 1 for d in lines)
    assert len(lines) == len(trace.steps) + 1
    assert lines[-1]["result"] == [x for x in range(r.n) if (trace.result >> x) & 1]


@pytest.mark.parametrize("r", [r for r in RACKS if is_g_rack(r)], ids=lambda r: r.label)
def test_orbit_complement_on_g_racks(r):
    L = lattice_of(r)
    for q in L.elems:
        c = orbit_complement(r, q)
        # the orbits missed by q, plus q, generate the whole rack
        assert c & q == 0 and is_subrack(r, c)
        assert closure(r, q | c) == r.full
        assert c == r.full & ~_orbits_met(r, q)


def _orbits_met(r, q):
    out = 0
    for o in orbits(r).orbits:
        if o & q:
            out |= o
    return out
