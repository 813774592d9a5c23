"""Acceptance criteria, one test each.

Every test prints a single ``[criterion N] PASS|FAIL ...`` line with its
wall time and the pinned limit.  Run with ``pytest tests/test_acceptance.py -v``
or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import time

import pytest

from finsemi.classify import (
    ACR,
    acr_identity,
    classify,
    cyclic_subgroup,
    is_expansion,
    nontrivial_permutations,
    perm_identity,
)
from finsemi.core import completely_regular, idempotents, power_ideal, set_product
from finsemi.derive import check_trace, derive_search
from finsemi.enumerate import Mode, canonical_code, decode, enumerate_codes, representatives
from finsemi.oracle import implies_oracle
from finsemi.suites import DEDUCTION_CASES, NON_DEDUCTION, load_catalog
from finsemi.terms import parse_identities, parse_identity, satisfies, satisfies_all
from finsemi.zoo import build_T, build_Ufree, build_V, build_W, free_quotient, preset_identities

# runtime limits in seconds
LIMITS = {1: 1.0, 2: 120.0, 3: 60.0, 4: 60.0, 5: 60.0, 6: 300.0, 7: 300.0, 8: 120.0}

EXAMPLE = "x y = y^(w+1) x^(w+1)"


def report(n, ok, elapsed, detail):
    within = elapsed < LIMITS[n]
    status = "PASS" if ok and within else "FAIL"
    line = f"[criterion {n}] {status} {detail} ({elapsed:.2f} s, limit {LIMITS[n]:.0f} s)"
    if not within:
        line += " runtime limit exceeded"
    return status == "PASS", line


def run(n, fn, capsys=None):
    start = time.perf_counter()
    ok, detail = fn()
    passed, line = report(n, ok, time.perf_counter() - start, detail)
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return passed, line


def associative(table):
    m = len(table)
    return all(table[table[i][j]][k] == table[i][table[j][k]]
               for i, j, k in itertools.product(range(m), repeat=3))


# ---------------------------------------------------------------------------


def criterion1():
    models = []
    sizes = {}
    for k in (1, 2, 3, 4):
        models.append(build_T(k).table)
        sizes[f"T{k}"] = (models[-1].order, [2, 5, 16, 65][k - 1])
    for k in (1, 2, 3):
        models.append(build_Ufree(k).table)
        sizes[f"U{k}"] = (models[-1].order, 2 ** k)
        models.append(build_W(k).table)
        sizes[f"W{k}"] = (models[-1].order, [2, 6, 14][k - 1])
    for n in range(1, 5):
        for k in range(1, n + 1):
            models.append(build_V(k, n).table)
            sizes[f"V{k},{n}"] = (models[-1].order, 2 * n - k + 2)
    wrong = [name for name, (got, want) in sizes.items() if got != want]
    bad = [S.name for S in models if not associative(S.table)]
    return not wrong and not bad, (f"{len(sizes)} model sizes, {len(wrong)} wrong; "
                                   f"{len(models)} tables re-validated, {len(bad)} non-associative")


def criterion2():
    verdict = classify(EXAMPLE).verdict
    deltas = ["x y = (x y)^(w+1)", "x y = y x", "x y = x^(w+1) y", "x y = x y^(w+1)"]
    results = [implies_oracle(EXAMPLE, d, 4) for d in deltas]
    ok = verdict == ACR(2, 1, 2) and all(results)
    return ok, (f"classify gives {verdict} (n=2); "
                f"{sum(map(bool, results))}/4 consequences with no counterexample up to order 4")


def criterion3():
    catalog = load_catalog()
    failures = 0
    checks = 0
    for k in (2, 3):
        T, U = build_T(k).table, build_Ufree(k).table
        expansions = [e for e in catalog if len(e.variables) == k and is_expansion(e)]
        names = " ".join(f"x{i}" for i in range(1, k + 1))
        expansions.append(parse_identity(f"{names} = {names} x{k}"))
        for s in nontrivial_permutations(k):
            checks += 1
            failures += bool(satisfies(T, perm_identity(s)))
        for eps in expansions:
            checks += 2
            failures += bool(satisfies(T, eps)) + bool(satisfies(U, eps))
        checks += 3
        failures += not satisfies(U, parse_identity("x y = y x"))
        failures += not satisfies_all(T, preset_identities("T", expand=True))
        failures += not satisfies_all(T, preset_identities("N", k + 1, expand=True))
    return failures == 0, f"{checks} checks for k = 2, 3, {failures} failures"


def criterion4():
    mismatches = 0
    checks = 0
    for k in (1, 2, 3):
        W, V = build_W(k).table, build_V(k, 3).table
        for i in range(1, 4):
            for j in range(i, 4):
                eps = acr_identity(3, i, j)
                checks += 2
                mismatches += bool(satisfies(W, eps)) != (k <= j)
                mismatches += bool(satisfies(V, eps)) != (k > j)
    return checks == 36 and mismatches == 0, f"{checks} membership checks, {mismatches} mismatches"


def criterion5():
    T3 = build_T(3).table
    perms = nontrivial_permutations(3)
    mismatches = 0
    checks = 0
    for s in perms:
        Q = free_quotient(T3, [perm_identity(s)]).table
        for t in perms:
            checks += 1
            mismatches += bool(satisfies(Q, perm_identity(t))) != (t in cyclic_subgroup(s))
    return checks == 25 and mismatches == 0, f"{checks} lattice checks, {mismatches} mismatches"


def criterion6():
    reps = representatives(4, Mode.ISO)
    catalog = load_catalog()
    perms = [perm_identity(s) for n in (2, 3) for s in nontrivial_permutations(n)]
    medial = preset_identities("Medial")
    perm_preset = preset_identities("Perm")
    xyx = parse_identity("x y = y x y")
    violations = {"a": 0, "b": 0, "c": 0, "d": 0}
    for S in reps:
        every = range(S.order)
        I = completely_regular(S)
        if satisfies(S, xyx):
            SES = set_product(S, set_product(S, every, idempotents(S)), every)
            violations["a"] += not (power_ideal(S, 2) == SES == I)
        if any(satisfies(S, e) for e in catalog):
            violations["b"] += any(S.mul(a, b) not in I for a in I for b in I)
        some_perm = any(satisfies(S, e) for e in perms)
        if len(I) == S.order and some_perm:
            violations["c"] += not satisfies_all(S, medial)
        if some_perm:
            violations["d"] += not satisfies_all(S, perm_preset)
    total = sum(violations.values())
    return total == 0, (f"{len(reps)} representatives of order <= 4, violations "
                        + ", ".join(f"({k}) {v}" for k, v in violations.items()))


def criterion7():
    expected = {2: (5, 4), 3: (24, 18), 4: (188, 126)}
    problems = []
    for m, (n_iso, n_anti) in expected.items():
        iso = enumerate_codes(m, Mode.ISO)
        anti = enumerate_codes(m, Mode.ISO_ANTI)
        if (len(iso), len(anti)) != (n_iso, n_anti):
            problems.append(f"order {m} counts {len(iso)}/{len(anti)}")
        if any(canonical_code(decode(c, m)) != c for c in iso):
            problems.append(f"order {m} iso output not a fixpoint")
        if any(canonical_code(decode(c, m), anti=True) != c for c in anti):
            problems.append(f"order {m} iso-anti output not a fixpoint")
        self_dual = sum(canonical_code(tuple(zip(*decode(c, m)))) == c for c in iso)
        if len(iso) < len(anti) or len(iso) != 2 * len(anti) - self_dual:
            problems.append(f"order {m} anti-isomorphism pairing off")
        if (enumerate_codes(m, Mode.ISO, workers=2) != iso
                or enumerate_codes(m, Mode.ISO_ANTI, workers=2) != anti):
            problems.append(f"order {m} depends on worker count")
    return not problems, "counts 5/4, 24/18, 188/126; " + ("; ".join(problems) or
                                                          "fixpoints, pairing, workers consistent")


def criterion8():
    models = representatives(4, Mode.ISO)
    ok = 0
    for basis_text, goal in DEDUCTION_CASES:
        basis = [e for part in basis_text.split(";") for e in parse_identities(part)]
        r = derive_search(basis, goal)
        if r and check_trace(basis, goal, r.trace) and implies_oracle(basis, goal, 4, models):
            ok += 1
    basis_text, goal = NON_DEDUCTION
    never = not any(derive_search(parse_identities(basis_text), goal, max_length=L, max_steps=s)
                    for L, s in ((3, 6), (6, 10), (8, 12)))
    return ok == len(DEDUCTION_CASES) == 20 and never, (
        f"{ok}/{len(DEDUCTION_CASES)} derivations re-verified with no counterexample up to order 4; "
        f"x = x x {'never' if never else 'WRONGLY'} derived from x y = y x")


CRITERIA = {1: criterion1, 2: criterion2, 3: criterion3, 4: criterion4,
            5: criterion5, 6: criterion6, 7: criterion7, 8: criterion8}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    passed, line = run(n, CRITERIA[n], capsys)
    assert passed, line


if __name__ == "__main__":
    import sys
    results = [run(n, CRITERIA[n])[0] for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
