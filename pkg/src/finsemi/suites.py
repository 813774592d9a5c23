"""Verification suites over the model zoo and the small-order enumeration.

Each suite returns a :class:`SuiteReport` whose checks carry a claim, a
short ``source`` naming the statement being exercised, a status, and for
failed checks a replayable counterexample.  Statements quantified over "all
expansion identities" are checked over the shipped catalog only.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import core
from .classify import (
    ACR,
    Permutation,
    acr_identity,
    as_product_identity,
    classify,
    cyclic_subgroup,
    is_expansion,
    is_left_primitive,
    is_primitive,
    is_regular,
    is_right_primitive,
    nontrivial_permutations,
    perm_identity,
)
from .core import CayleyTable
from .derive import check_trace, derive_search
from .enumerate import Mode, canonical_code, decode, enumerate_codes, max_order, representatives
from .oracle import Counterexample, implies_oracle
from .terms import (
    evaluate,
    format_identity,
    parse_identities,
    parse_identity,
    read_identities,
    satisfies,
    satisfies_all,
)
from .zoo import build_C, build_T, build_Ufree, build_V, build_W, free_quotient, preset_identities


def load_catalog(path=None) -> list:
    """The built-in catalog, or identities read from ``path``."""
    if path is None:
        text = resources.files("finsemi").joinpath("data/catalog.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return read_identities(text, expand=False)


WORKED_EXAMPLE = "x y = y^(w+1) x^(w+1)"
WORKED_CONSEQUENCES = (
    "x y = (x y)^(w+1)",
    "x y = y x",
    "x y = x^(w+1) y",
    "x y = x y^(w+1)",
)

# (basis, goal) pairs with short equational derivations
DEDUCTION_CASES = (
    ("z x y = z y x", "z w x y = z w y x"),
    ("x y = y x", "x y z = z y x"),
    ("x y = y x", "x y z = y x z"),
    ("x y = y x", "x y z = x z y"),
    ("x y = y x", "x y z w = w z y x"),
    ("x = x x", "x y = x y x y"),
    ("x = x x", "x y x = x y x y x"),
    ("x y = y x; x = x x", "x y = x y y"),
    ("x y = y x; x = x x", "x y x = x y"),
    ("x y z = x z y", "x y z w = x w z y"),
    ("x y z = y x z", "x y z w = z y x w"),
    ("x y z = x z y", "x y z w = x z y w"),
    ("x y x = x", "x y x y x = x"),
    ("x y = x", "x y z = x"),
    ("x y = y", "x y z = z"),
    ("x y = x", "x y z = x z y"),
    ("x y z = x z", "x y z w = x w"),
    ("x x = x; x y x = x", "x y z x = x z y x"),
    ("x y z = z y x", "x y z w v = v w z y x"),
    ("x y = y x y", "x y = y x y x y"),
)

NON_DEDUCTION = ("x y = y x", "x = x x")


@dataclass
class Check:
    claim: str
    source: str
    passed: bool
    counterexample: Optional[dict] = None
    detail: str = ""

    def to_json(self) -> dict:
        doc = {"claim": self.claim, "source": self.source,
               "status": "pass" if self.passed else "fail"}
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    wall_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def add(self, claim, source, passed, counterexample=None, detail="") -> Check:
        check = Check(claim, source, bool(passed), counterexample, detail)
        self.checks.append(check)
        return check

    def to_json(self) -> dict:
        return {"suite": self.suite, "checks": [c.to_json() for c in self.checks],
                "passed": self.passed, "wall_ms": round(self.wall_ms, 3)}

    def summary(self) -> str:
        ok = sum(c.passed for c in self.checks)
        word = "PASS" if self.passed else "FAIL"
        return f"{word} {self.suite}: {ok}/{len(self.checks)} checks ({self.wall_ms / 1000:.2f} s)"


def _cx(S: CayleyTable, result) -> dict:
    return Counterexample(S, result.witness, result.identity).to_json()


def _model_only(S: CayleyTable, note: str) -> dict:
    return {"semigroup": core.to_json(S), "note": note}


def _expect(report, S, eps, should_hold, source, name=None):
    """Record ``S |= eps`` (or ``S |/= eps``) as a check."""
    result = satisfies(S, eps)
    label = name or S.name
    rel = "|=" if should_hold else "|/="
    claim = f"{label} {rel} {format_identity(eps)}"
    if should_hold:
        return report.add(claim, source, result, None if result else _cx(S, result))
    if result:
        return report.add(claim, source, False, _model_only(S, "identity holds"))
    witness = ", ".join(f"{k}->{S.labels[v]}" for k, v in result.witness.items())
    return report.add(claim, source, True, detail=f"witness {witness}")


def _timed(fn):
    def run(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_ms = (time.perf_counter() - start) * 1000
        return report
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _reps(order):
    return representatives(min(order, max_order()), Mode.ISO)


# ---------------------------------------------------------------------------


@_timed
def suite_theorem1(catalog=None, max_order_: int = 4) -> SuiteReport:
    """Classify every catalog identity and test the implied identity by brute force."""
    report = SuiteReport("theorem1")
    catalog = load_catalog() if catalog is None else list(catalog)
    models = _reps(max_order_)
    for eps in catalog:
        c = classify(eps)
        delta = c.implied_identity()
        if isinstance(c.verdict, Permutation):
            same = delta == as_product_identity(eps).identity()
            report.add(f"{format_identity(eps)} classified {c.verdict}; it is its own consequence",
                       "classification: permutation case", same)
            continue
        result = implies_oracle(eps, delta, max_order_, models)
        report.add(f"{format_identity(eps)} implies {format_identity(delta)} [{c.verdict}]: {result}",
                   "classification: every product identity implies a permutation or ACR identity",
                   result, None if result else result.to_json())

    example = parse_identity(WORKED_EXAMPLE)
    verdict = classify(example).verdict
    report.add(f"{WORKED_EXAMPLE} classified ACR(n=2, i=1, j=2)", "worked two-variable example",
               verdict == ACR(2, 1, 2), detail=str(verdict))
    for text in WORKED_CONSEQUENCES:
        result = implies_oracle(example, text, max_order_, models)
        report.add(f"{WORKED_EXAMPLE} implies {text}: {result}", "worked two-variable example",
                   result, None if result else result.to_json())
    return report


@_timed
def suite_obstructions(k: int, catalog=None, max_order_: int = 4) -> SuiteReport:
    """T_k and Omega_k(U) escape every permutation and expansion identity of arity k."""
    if k not in (2, 3):
        raise ValueError("suite_obstructions needs k in {2, 3}")
    report = SuiteReport(f"obstructions(k={k})")
    catalog = load_catalog() if catalog is None else list(catalog)
    T = build_T(k).table
    U = build_Ufree(k).table
    src_perm = "T_k satisfies no nontrivial k-ary permutation identity"
    src_exp = "T_k and Omega_k(U) satisfy no k-ary expansion identity"

    for sigma in nontrivial_permutations(k):
        _expect(report, T, perm_identity(sigma), False, src_perm)

    names = [f"x{i}" for i in range(1, k + 1)]
    canary = parse_identity(f"{' '.join(names)} = {' '.join(names)} x{k}")
    expansions = [e for e in catalog if e.variables and len(e.variables) == k
                  and _is_product(e) and is_expansion(e)]
    family = [acr_identity(k, i, j) for i in range(1, k + 1) for j in range(i, k + 1)]
    for eps in expansions + [canary] + family:
        _expect(report, T, eps, False, src_exp)
        _expect(report, U, eps, False, src_exp)

    _expect(report, U, parse_identity("x y = y x"), True, "Omega_k(U) is commutative")
    for eps in preset_identities("T", expand=True):
        _expect(report, T, eps, True, "T_k lies in the pseudovariety T")
    for eps in preset_identities("N", k + 1, expand=True):
        _expect(report, T, eps, True, "T_k is (k+1)-nilpotent")

    # distinct permutations give distinct products of the generators
    gens = {f"x{i}": T.index(f"a{i}") for i in range(1, k + 1)}
    images = {}
    for sigma in [tuple(range(1, k + 1))] + nontrivial_permutations(k):
        rhs = perm_identity(sigma, names).rhs
        images[sigma] = evaluate(rhs, T, gens)
    injective = len(set(images.values())) == len(images)
    report.add(f"sigma -> x_(1 sigma)..x_(k sigma) at the generators of T{k} is injective",
               "T_k separates permutations", injective)

    # nilpotent semigroups: a k-ary expansion identity holds iff x1..xk = 0 does
    nk = preset_identities("N", k, expand=True)
    nilpotent = [S for S in _reps(max_order_) if satisfies_all(S, preset_identities("N", S.order, expand=True))]
    for eps in expansions + [canary]:
        bad = next((S for S in nilpotent
                    if bool(satisfies(S, eps)) != bool(satisfies_all(S, nk))), None)
        report.add(f"nilpotent S of order <= {max_order_}: S |= {format_identity(eps)} "
                   f"iff S |= x1..x{k} = 0 ({len(nilpotent)} semigroups)",
                   "nilpotent case: expansion identity iff k-nilpotent", bad is None,
                   None if bad is None else _model_only(bad, "equivalence fails"))
    return report


def _is_product(eps) -> bool:
    try:
        as_product_identity(eps)
    except Exception:
        return False
    return True


@_timed
def suite_independence(n: int = 3) -> SuiteReport:
    """Membership matrix of W_k and V_{k,n}, the permutation lattice, and C_{n+1}."""
    report = SuiteReport(f"independence(n={n})")
    src = "W_k in ACR(i,j) iff V_(k,n) not in ACR(i,j) iff k <= j"
    for k in range(1, n + 1):
        W = build_W(k).table
        V = build_V(k, n).table
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                eps = acr_identity(n, i, j)
                _expect(report, W, eps, k <= j, src)
                _expect(report, V, eps, k > j, src)

    if n == 3:
        T = build_T(n).table
        perms = nontrivial_permutations(n)
        for sigma in perms:
            Q = free_quotient(T, [perm_identity(sigma)]).table
            group = cyclic_subgroup(sigma)
            for tau in perms:
                _expect(report, Q, perm_identity(tau), tau in group,
                        "P_sigma contained in P_tau iff <sigma> contains <tau>",
                        name=f"T{n}/P{sigma}")

    C = build_C(n + 1).table
    for sigma in nontrivial_permutations(n):
        _expect(report, C, perm_identity(sigma), True, "monogenic semigroups are commutative")
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            _expect(report, C, acr_identity(n, i, j), False,
                    "C_(n+1,1) lies in no ACR(i,j) of arity n")
    return report


@_timed
def suite_expansion(catalog=None, max_order_: int = 4) -> SuiteReport:
    """Ideal structure of semigroups satisfying a regular expansion identity."""
    report = SuiteReport("expansion")
    catalog = load_catalog() if catalog is None else list(catalog)
    reps = _reps(max_order_)
    for eps in catalog:
        if not (_is_product(eps) and is_expansion(eps) and is_regular(eps)):
            continue
        n = len(eps.variables)
        left, right, prim = is_left_primitive(eps), is_right_primitive(eps), is_primitive(eps)
        bad = None
        tested = 0
        for S in reps:
            if not satisfies(S, eps):
                continue
            tested += 1
            every = frozenset(range(S.order))
            E, I = core.idempotents(S), core.completely_regular(S)
            conds = []
            if left:
                conds += [core.set_product(S, every, E) == I, core.set_product(S, every, I) == I]
            if right:
                conds += [core.set_product(S, E, every) == I, core.set_product(S, I, every) == I]
            if prim:
                SES = core.set_product(S, core.set_product(S, every, E), every)
                conds += [core.power_ideal(S, n) == SES == I]
            if not all(conds):
                bad = S
                break
        kinds = "primitive" if prim else ("left-primitive" if left else
                                          ("right-primitive" if right else "not primitive"))
        report.add(f"{format_identity(eps)} ({kinds}): ideal equalities hold in all "
                   f"{tested} models of order <= {max_order_}",
                   "expansion identities: SE = SI = I, and S^n = SES = I when primitive",
                   bad is None, None if bad is None else _model_only(bad, "ideal equality fails"))
    return report


@_timed
def suite_permutative(catalog=None, max_order_: int = 4) -> SuiteReport:
    """Permutative consequences over all small semigroups, and T_2 in the three V(.) presets."""
    report = SuiteReport("permutative")
    catalog = load_catalog() if catalog is None else list(catalog)
    reps = _reps(max_order_)
    perms = [perm_identity(s) for n in (2, 3) for s in nontrivial_permutations(n)]
    perm_preset = preset_identities("Perm")
    medial = preset_identities("Medial")

    def sweep(claim, source, premise, conclusion):
        bad = None
        hits = 0
        for S in reps:
            if premise(S):
                hits += 1
                if not conclusion(S):
                    bad = S
                    break
        report.add(f"{claim} ({hits} models of order <= {max_order_})", source, bad is None,
                   None if bad is None else _model_only(bad, "implication fails"))

    satisfied_perm = {}

    def some_perm(S):
        key = id(S)
        if key not in satisfied_perm:
            satisfied_perm[key] = any(satisfies(S, e) for e in perms)
        return satisfied_perm[key]

    sweep("S |= some nontrivial permutation identity of arity <= 3 => S |= Perm",
          "permutation identities imply Perm", some_perm,
          lambda S: satisfies_all(S, perm_preset))
    for eps in catalog:
        sweep(f"S |= {format_identity(eps)} => I(S) is a subsemigroup",
              "I(S) is a subsemigroup under a nontrivial product identity",
              lambda S, e=eps: satisfies(S, e),
              lambda S: _closed(S, core.completely_regular(S)))
    sweep("I(S) = S and S |= some permutation identity => S is medial",
          "completely regular permutative semigroups are medial",
          lambda S: len(core.completely_regular(S)) == S.order and some_perm(S),
          lambda S: satisfies_all(S, medial))

    T2 = build_T(2).table
    for name in ("VN1", "VY", "VQ"):
        for eps in preset_identities(name, expand=True):
            _expect(report, T2, eps, True, f"T is contained in V({name[1:]})")
    return report


def _closed(S, subset) -> bool:
    return all(S.mul(a, b) in subset for a in subset for b in subset)


@_timed
def suite_enumeration(max_order_: Optional[int] = None, workers: int = 2) -> SuiteReport:
    """Counts per mode, canonical fixpoints, worker invariance, anti-isomorphism pairing."""
    report = SuiteReport("enumeration")
    top = max_order() if max_order_ is None else min(max_order_, max_order())
    src = "enumeration self-consistency"
    for m in range(1, top + 1):
        iso = enumerate_codes(m, Mode.ISO)
        anti = enumerate_codes(m, Mode.ISO_ANTI)
        report.add(f"order {m}: {len(iso)} classes up to isomorphism, "
                   f"{len(anti)} up to isomorphism and anti-isomorphism", src,
                   len(iso) >= len(anti))
        fix_iso = all(canonical_code(decode(c, m)) == c for c in iso)
        fix_anti = all(canonical_code(decode(c, m), anti=True) == c for c in anti)
        report.add(f"order {m}: both outputs are fixpoints of re-canonicalization", src,
                   fix_iso and fix_anti)
        self_dual = sum(1 for c in iso
                        if canonical_code(_transposed(decode(c, m))) == c)
        report.add(f"order {m}: {self_dual} self-dual classes; "
                   f"{len(iso)} = 2*{len(anti)} - {self_dual}", src,
                   len(iso) == 2 * len(anti) - self_dual)
        if m <= 4:
            same = (enumerate_codes(m, Mode.ISO, workers) == iso
                    and enumerate_codes(m, Mode.ISO_ANTI, workers) == anti)
            report.add(f"order {m}: identical output with {workers} workers", src, same)
    return report


def _transposed(table):
    return tuple(zip(*table))


@_timed
def suite_deduction(max_order_: int = 4) -> SuiteReport:
    """Every search-found derivation is re-checked and survives the brute-force oracle."""
    report = SuiteReport("deduction")
    models = _reps(max_order_)
    for basis_text, goal_text in DEDUCTION_CASES:
        basis = [e for part in basis_text.split(";") for e in parse_identities(part)]
        result = derive_search(basis, goal_text)
        ok = bool(result) and check_trace(basis, goal_text, result.trace)
        oracle = implies_oracle(basis, goal_text, max_order_, models) if ok else None
        report.add(f"{{{basis_text}}} derives {goal_text} in "
                   f"{len(result.trace) if result else '-'} steps; {oracle}",
                   "soundness of equational deduction", ok and bool(oracle),
                   None if oracle is None or oracle else oracle.to_json())
    basis_text, goal_text = NON_DEDUCTION
    result = derive_search(parse_identities(basis_text), goal_text)
    report.add(f"{{{basis_text}}} does not derive {goal_text}",
               "commutativity does not imply idempotency", not result)
    return report


SUITES = {
    "theorem1": lambda: [suite_theorem1()],
    "obstructions": lambda: [suite_obstructions(2), suite_obstructions(3)],
    "independence": lambda: [suite_independence(3)],
    "expansion": lambda: [suite_expansion()],
    "permutative": lambda: [suite_permutative()],
    "enumeration": lambda: [suite_enumeration()],
    "deduction": lambda: [suite_deduction()],
}


def run_suite(name: str) -> list:
    """Run a named suite (or ``all``) and return its reports."""
    if name == "all":
        return [r for key in SUITES for r in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name]()


def reports_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=1)


__all__ = [
    "Check", "DEDUCTION_CASES", "SUITES", "SuiteReport", "load_catalog",
    "reports_json", "run_suite", "suite_deduction", "suite_enumeration",
    "suite_expansion", "suite_independence", "suite_obstructions",
    "suite_permutative", "suite_theorem1",
]
