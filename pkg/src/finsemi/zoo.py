"""Concrete semigroups and named identity sets.

Element orders are fixed so that tables are reproducible:

* ``T_k``: injective words by length, then lexicographically; ``0`` last.
* ``Omega_k(U)``: nonempty subsets by size, then by binary value; ``0`` last.
* ``W_k``: words over ``{a, b}`` by length, then lexicographically.
* ``V_{k,n}``: ``a, .., a^n``, then ``b, ba, .., ba^(n-k)``, then ``0``.
* ``C_r``: ``a, .., a^r``.
* Rees matrix semigroups: triples ``(i, g, j)`` in lexicographic order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from . import core
from .classify import acr_identity, perm_identity
from .core import CayleyTable, congruence_closure, quotient, validate
from .errors import SizeGuard, UnknownPreset
from .terms import (
    expand_zero,
    instance_pairs,
    parse_identities,
    satisfies_all,
)


@dataclass(frozen=True)
class LabeledModel:
    table: CayleyTable
    params: dict = field(default_factory=dict)
    description: str = ""

    @property
    def name(self) -> str:
        return self.table.name


def _guard(name, value, low, high):
    if not low <= value <= high:
        raise SizeGuard(f"{name}={value} outside the supported range [{low}, {high}]")


def build_T(k: int) -> LabeledModel:
    """Nonempty injective words over ``a1..ak`` plus a zero.

    The product is concatenation when the result is still injective and
    ``0`` otherwise.
    """
    _guard("k", k, 1, 6)
    words = [w for n in range(1, k + 1) for w in itertools.permutations(range(1, k + 1), n)]
    index = {w: i for i, w in enumerate(words)}
    zero = len(words)

    def mul(u, v):
        w = u + v
        return index[w] if len(set(w)) == len(w) else zero

    raw = [[mul(u, v) for v in words] + [zero] for u in words]
    raw.append([zero] * (zero + 1))
    labels = ["".join(f"a{c}" for c in w) for w in words] + ["0"]
    table = validate(raw, labels, f"T{k}", zero=zero)
    return LabeledModel(table, {"k": k}, "injective words with zero")


def build_Ufree(k: int) -> LabeledModel:
    """Nonempty subsets of ``{1..k}`` plus a zero; product is disjoint union."""
    _guard("k", k, 1, 10)
    subsets = sorted(range(1, 1 << k), key=lambda b: (bin(b).count("1"), b))
    index = {b: i for i, b in enumerate(subsets)}
    zero = len(subsets)
    raw = [[index[a | b] if not a & b else zero for b in subsets] + [zero] for a in subsets]
    raw.append([zero] * (zero + 1))
    labels = ["{" + ",".join(str(i + 1) for i in range(k) if b >> i & 1) + "}" for b in subsets]
    table = validate(raw, labels + ["0"], f"U{k}", zero=zero)
    return LabeledModel(table, {"k": k}, "free commutative nilpotent with x^2 = 0")


def build_W(k: int) -> LabeledModel:
    """Words of length ``1..k`` over ``{a, b}``; product keeps the length-``k`` prefix."""
    _guard("k", k, 1, 6)
    words = ["".join(w) for n in range(1, k + 1) for w in itertools.product("ab", repeat=n)]
    index = {w: i for i, w in enumerate(words)}
    raw = [[index[(u + v)[:k]] for v in words] for u in words]
    table = validate(raw, words, f"W{k}")
    return LabeledModel(table, {"k": k}, "truncated words over {a, b}")


def build_V(k: int, n: int) -> LabeledModel:
    """``<a, b : a^n = a^(n+1), ab = b, b a^(n-k+1) = 0>``."""
    _guard("n", n, 1, 8)
    _guard("k", k, 1, n)
    top = n - k     # largest r with b a^r nonzero
    a = list(range(n))                      # a^(i+1)
    b = [n + r for r in range(top + 1)]     # b a^r
    zero = n + top + 1

    def mul(x, y):
        if x == zero or y == zero:
            return zero
        if x < n and y < n:
            return a[min(x + y + 2, n) - 1]
        if x < n:                   # a^i . b a^r = b a^r
            return y
        r = x - n
        if y < n:                   # b a^r . a^j
            s = r + y + 1
            return b[s] if s <= top else zero
        return zero                 # b a^r . b a^s = b b a^s = 0

    size = zero + 1
    raw = [[mul(x, y) for y in range(size)] for x in range(size)]
    labels = (["a" if i == 1 else f"a^{i}" for i in range(1, n + 1)]
              + ["b" if r == 0 else ("ba" if r == 1 else f"ba^{r}") for r in range(top + 1)]
              + ["0"])
    table = validate(raw, labels, f"V{k},{n}", zero=zero)
    return LabeledModel(table, {"k": k, "n": n}, "two-generated witness with zero")


def build_C(r: int) -> LabeledModel:
    """Monogenic ``<a : a^r = a^(r+1)>``."""
    _guard("r", r, 1, 64)
    raw = [[min(i + j + 2, r) - 1 for j in range(r)] for i in range(r)]
    labels = ["a" if i == 1 else f"a^{i}" for i in range(1, r + 1)]
    return LabeledModel(validate(raw, labels, f"C{r},1"), {"r": r}, "monogenic, index r, period 1")


def build_N1() -> LabeledModel:
    """``{1, n, 0}`` with ``n^2 = 0``."""
    raw = [[0, 1, 2], [1, 2, 2], [2, 2, 2]]
    table = validate(raw, ["1", "n", "0"], "N1", zero=2, identity=0)
    model = LabeledModel(table, {}, "null semigroup of order 2 with identity adjoined")
    assert satisfies_all(table, preset_identities("VN1", expand=True))
    return model


_PRIMES = (2, 3, 5, 7, 11, 13)


def build_rees(p: int, sandwich=((0, 0), (0, 1))) -> LabeledModel:
    """Rees matrix semigroup over ``Z/pZ`` with a 2x2 sandwich matrix.

    ``(i, g, j)(k, h, l) = (i, g + P[j][k] + h, l)``.
    """
    if p not in _PRIMES:
        raise SizeGuard(f"p={p} must be a prime <= 13")
    elems = [(i, g, j) for i in (1, 2) for g in range(p) for j in (1, 2)]

    def mul(x, y):
        i, g, j = x
        k, h, l = y
        return (i, (g + sandwich[j - 1][k - 1] + h) % p, l)

    labels = [f"({i},{g},{j})" for i, g, j in elems]
    table = core.from_function(elems, mul, labels, f"K{p}")
    return LabeledModel(table, {"p": p}, "Rees matrix semigroup over a cyclic group")


def adjoin_identity(S: CayleyTable) -> CayleyTable:
    return core.adjoin_identity(S)


# ---------------------------------------------------------------------------
# named identity sets

_FIXED = {
    "T": ["x y x = x^2 = 0"],
    "U": ["x y = y x", "x^2 = 0"],
    "Perm": ["x^w y1 y2 z^w = x^w y2 y1 z^w"],
    "Medial": ["x y1 y2 z = x y2 y1 z"],
    "LRB": ["x^2 = x", "x y x = x y"],
    "RRB": ["x^2 = x", "x y x = y x"],
    "VN1": ["x^3 = x^2", "x^2 y = x y x = y x^2"],
    "VY": ["x^3 = x^2", "x^2 y^2 = x y x = y^2 x^2"],
    # the third line is trivial as written; kept verbatim
    "VQ": ["x^3 = x^2", "x^2 y x^2 = x y x", "y1^2 x y2^2 = y1^2 x y2^2",
           "x y1 x y2 x = x y2 x y1 x"],
}

PRESET_NAMES = tuple(_FIXED) + ("N", "K", "ACR", "P")


def _x(n):
    return " ".join(f"x{i}" for i in range(1, n + 1))


def preset_identities(name: str, *params, expand: bool = False) -> list:
    """Identity sets by name.

    ``N(k)``: ``x1..xk = 0``; ``K(k)``: ``x1..xk = x1..xk y``;
    ``ACR(n, i, j)``; ``P(sigma)`` (or ``P(n, sigma)``).  Zero forms are
    expanded when ``expand`` is true.
    """
    if name in _FIXED:
        if params:
            raise UnknownPreset(f"{name} takes no parameters")
        out = [eps for line in _FIXED[name] for eps in parse_identities(line)]
    elif name == "N":
        (k,) = params
        out = parse_identities(f"{_x(k)} = 0")
    elif name == "K":
        (k,) = params
        out = parse_identities(f"{_x(k)} = {_x(k)} y")
    elif name == "ACR":
        n, i, j = params
        out = [acr_identity(n, i, j)]
    elif name == "P":
        sigma = params[-1]
        if len(params) == 2 and params[0] != len(sigma):
            raise ValueError("P(n, sigma): sigma must permute 1..n")
        out = [perm_identity(sigma)]
    else:
        raise UnknownPreset(name)
    if expand:
        out = [part for eps in out for part in (expand_zero(eps) if eps.is_zero_form else [eps])]
    return out


def parse_preset(text: str, expand: bool = False) -> list:
    """``"T"``, ``"N(3)"``, ``"ACR(3,1,2)"``, ``"P(2,1,3)"`` and similar."""
    m = re.fullmatch(r"\s*([A-Za-z0-9]+)\s*(?:\(([\d,\s]*)\))?\s*", text)
    if not m:
        raise UnknownPreset(text)
    name, args = m.group(1), m.group(2)
    nums = [int(a) for a in args.split(",")] if args and args.strip() else []
    if name == "P":
        return preset_identities("P", tuple(nums), expand=expand)
    return preset_identities(name, *nums, expand=expand)


# ---------------------------------------------------------------------------
# free quotients


def free_quotient(S: CayleyTable, identities) -> LabeledModel:
    """Largest quotient of ``S`` satisfying ``identities``.

    The congruence is generated by the value pairs of both sides over every
    assignment of elements of ``S``.
    """
    identities = list(identities)
    pairs = set()
    for eps in identities:
        pairs |= instance_pairs(S, eps)
    cong = congruence_closure(S, sorted(pairs))
    Q = quotient(S, cong)
    check = satisfies_all(Q, identities)
    if not check:
        raise AssertionError(f"quotient fails {check.identity}")
    Q = CayleyTable(Q.table, Q.labels, f"{S.name}/~" if S.name else "", Q.zero, Q.identity)
    return LabeledModel(Q, {"classes": cong.num_classes}, "free quotient")


# ---------------------------------------------------------------------------
# textual model names for the command line

_MODEL = re.compile(r"\s*([A-Za-z]+)\s*(?:\(?\s*([\d,\s]*?)\s*\)?)\s*$")


def build_model(text: str) -> LabeledModel:
    """Build from ``"T(3)"``, ``"T3"``, ``"V(1,2)"``, ``"N1"``, ``"rees(3)"``..."""
    m = _MODEL.match(text)
    if not m:
        raise ValueError(f"cannot parse model {text!r}")
    name, args = m.group(1), m.group(2)
    if name == "N" and args == "1":
        return build_N1()
    nums = [int(a) for a in re.split(r"[,\s]+", args) if a] if args else []
    builders = {
        "T": build_T, "U": build_Ufree, "W": build_W, "V": build_V,
        "C": build_C, "K": build_rees, "rees": build_rees,
    }
    if name not in builders:
        raise ValueError(f"unknown model {name!r}")
    return builders[name](*nums)


__all__ = [
    "LabeledModel", "PRESET_NAMES", "adjoin_identity", "build_C", "build_N1",
    "build_T", "build_Ufree", "build_V", "build_W", "build_model", "build_rees",
    "free_quotient", "parse_preset", "preset_identities",
]


