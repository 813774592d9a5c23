import itertools

import pytest

from finsemi import core
from finsemi.enumerate import (
    EnumerationSpec,
    Mode,
    canonical_code,
    canonical_form,
    count,
    decode,
    enumerate_codes,
    enumerate_semigroups,
    max_order,
    table_code,
)


def brute_classes(m, anti):
    """Independent oracle: all m^(m*m) tables, orbits under relabeling (and transpose)."""
    perms = list(itertools.permutations(range(m)))
    seen = set()
    classes = 0
    labeled = 0
    for flat in itertools.product(range(m), repeat=m * m):
        t = [flat[r * m:(r + 1) * m] for r in range(m)]
        if any(t[t[i][j]][k] != t[i][t[j][k]] for i, j, k in itertools.product(range(m), repeat=3)):
            continue
        labeled += 1
        if flat in seen:
            continue
        classes += 1
        variants = [t, [list(col) for col in zip(*t)]] if anti else [t]
        for u in variants:
            for p in perms:
                inv = [p.index(i) for i in range(m)]
                seen.add(tuple(p[u[inv[a]][inv[b]]] for a in range(m) for b in range(m)))
    return labeled, classes


@pytest.mark.parametrize("m", [1, 2, 3])
def test_counts_against_brute_force(m):
    labeled, iso = brute_classes(m, anti=False)
    _, anti = brute_classes(m, anti=True)
    assert count(m, Mode.RAW) == labeled
    assert count(m, Mode.ISO) == iso
    assert count(m, Mode.ISO_ANTI) == anti


def test_known_small_counts():
    assert [count(m, "raw") for m in (1, 2, 3, 4)] == [1, 8, 113, 3492]
    assert [count(m, "iso") for m in (1, 2, 3, 4)] == [1, 5, 24, 188]
    assert [count(m, "iso-anti") for m in (1, 2, 3, 4)] == [1, 4, 18, 126]


@pytest.mark.parametrize("m", [2, 3, 4])
def test_anti_pairing_accounts_for_difference(m):
    iso = enumerate_codes(m, Mode.ISO)
    anti = enumerate_codes(m, Mode.ISO_ANTI)
    self_dual = [c for c in iso if canonical_code(tuple(zip(*decode(c, m)))) == c]
    assert len(iso) == 2 * len(anti) - len(self_dual)
    assert set(anti) <= set(iso)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_outputs_are_fixpoints(m):
    for mode, anti in ((Mode.ISO, False), (Mode.ISO_ANTI, True)):
        for c in enumerate_codes(m, mode):
            assert canonical_code(decode(c, m), anti=anti) == c


def test_worker_invariance():
    for m in (2, 3, 4):
        assert enumerate_codes(m, Mode.ISO, workers=2) == enumerate_codes(m, Mode.ISO)


def test_representatives_are_pairwise_non_isomorphic():
    reps = list(enumerate_semigroups(EnumerationSpec(3, Mode.ISO)))
    for S, T in itertools.combinations(reps, 2):
        assert not core.is_isomorphic(S, T)
    reps = list(enumerate_semigroups(EnumerationSpec(3, Mode.ISO_ANTI)))
    for S, T in itertools.combinations(reps, 2):
        assert not core.is_isomorphic(S, T, anti=True)


def test_code_round_trip():
    t = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    assert decode(table_code(t), 3) == t
    Z3 = core.validate(t)
    assert canonical_form(Z3) == decode(canonical_code(t), 3)


def test_filters():
    comm = list(enumerate_semigroups(EnumerationSpec(3, satisfies=("x y = y x",))))
    assert len(comm) == 12
    assert all(S.table == tuple(zip(*S.table)) for S in comm)
    non_comm = list(enumerate_semigroups(EnumerationSpec(3, fails=("x y = y x",))))
    assert len(comm) + len(non_comm) == 24
    bands = list(enumerate_semigroups(EnumerationSpec(2, satisfies=["x = x x"])))
    assert len(bands) == 3      # semilattice, left zero, right zero


def test_cap(monkeypatch):
    monkeypatch.delenv("WORKBENCH_MAX_ORDER", raising=False)
    assert max_order() == 4
    with pytest.raises(ValueError):
        enumerate_codes(5)
    monkeypatch.setenv("WORKBENCH_MAX_ORDER", "9")
    assert max_order() == 5
    monkeypatch.setenv("WORKBENCH_MAX_ORDER", "3")
    with pytest.raises(ValueError):
        enumerate_codes(4)


def test_spec_validation():
    with pytest.raises(ValueError):
        EnumerationSpec(0)
    with pytest.raises(ValueError):
        EnumerationSpec(2, mode="bogus")
