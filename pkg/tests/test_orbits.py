import pytest

from polecascade.orbits import (load_orbit_table, orbit_catalog, orbit_dimension,
                                residual_orbit_count_oracle)
from polecascade.polespaces import (distinguished_centers,
                                    enumerate_standard_residual, is_residual,
                                    space_from_levi_center)
from polecascade.roots import build_root_datum

EXCEPTIONAL_COUNTS = {("G", 2): 5, ("F", 4): 16, ("E", 6): 21, ("E", 7): 45}


@pytest.mark.parametrize("t,r", sorted(EXCEPTIONAL_COUNTS))
def test_exceptional_orbit_counts(t, r):
    d = build_root_datum(t, r)
    assert len(enumerate_standard_residual(d)) == EXCEPTIONAL_COUNTS[(t, r)]


@pytest.mark.parametrize("t,r", [("A", 4), ("A", 5), ("B", 4), ("C", 4), ("D", 5)])
def test_partition_oracle_larger_ranks(t, r):
    d = build_root_datum(t, r)
    assert len(enumerate_standard_residual(d)) == residual_orbit_count_oracle(t, r)


def test_table_matches_catalog_and_residual_equality():
    """Every shipped table entry reappears in the enumeration and passes the
    pole/zero equality; counts agree per type."""
    table = load_orbit_table()
    for t, r in [("G", 2), ("F", 4), ("E", 6)]:
        d = build_root_datum(t, r)
        cat = orbit_catalog(d)
        entries = {k: v for k, v in table.items() if k[0] == t and k[1] == r}
        assert len(entries) == len(cat)
        diagrams = {row["diagram"]: row["name"] for row in cat}
        for (tt, rr, wd), name in entries.items():
            assert diagrams[wd] == name
        # residual equality for every table diagram, via the enumerated space
        spaces = {}
        import itertools

        for k in range(r + 1):
            for levi in itertools.combinations(range(r), k):
                for c in distinguished_centers(d, levi):
                    dom, _ = d.dominant_map(c)
                    sp = space_from_levi_center(d, levi, c)
                    spaces[tuple(int(2 * x) for x in dom)] = sp
        for (tt, rr, wd) in entries:
            sp = spaces[wd]
            assert is_residual(d, sp)
            assert len(sp.pole_set) == len(sp.singular_set) + sp.codim


def test_orbit_names_pinned_by_the_coordinates():
    d7 = build_root_datum("E", 7)
    names = {row["diagram"]: row["name"] for row in orbit_catalog(d7)}
    assert names[(2, 0, 0, 2, 0, 0, 2)] == "E7(a4)"
    d6 = build_root_datum("E", 6)
    names6 = {row["diagram"]: row["name"] for row in orbit_catalog(d6)}
    assert names6[(2, 0, 0, 2, 0, 2)] == "E6(a3)"


def test_orbit_dimensions_f4():
    d = build_root_datum("F", 4)
    dims = sorted(row["dim"] for row in orbit_catalog(d))
    assert dims == [0, 16, 22, 28, 30, 30, 34, 36, 36, 38, 40, 42, 42, 44, 46, 48]


def test_zero_and_principal_names():
    d = build_root_datum("G", 2)
    names = {row["name"] for row in orbit_catalog(d)}
    assert {"0", "G2", "G2(a1)", "A1", "A~1"} == names
