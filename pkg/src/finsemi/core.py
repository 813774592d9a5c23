"""Finite semigroups given by explicit multiplication tables.

Elements are the dense indices ``0 .. m-1``.  ``table[i][j]`` is the product
of element ``i`` (left factor, row) by element ``j`` (right factor, column).
Labels are for display only.

Element sets (idempotents, ideals, ...) are plain ``frozenset`` values of
indices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    AssociativityError,
    NotACongruence,
    NotAnIdeal,
    RangeError,
    SizeGuard,
)

MAX_PRODUCT_ORDER = 4096
_ASSOC_CHUNK = 1 << 22


@dataclass(frozen=True)
class CayleyTable:
    table: tuple
    labels: tuple
    name: str = ""
    zero: Optional[int] = None
    identity: Optional[int] = None

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def product(self, elements: Iterable[int]) -> int:
        it = iter(elements)
        acc = next(it)
        for e in it:
            acc = self.table[acc][e]
        return acc

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.table, dtype=np.int64).reshape(self.order, self.order)
        arr.flags.writeable = False
        return arr

    @cached_property
    def omega(self) -> np.ndarray:
        """``omega[s]`` is the idempotent power of ``s``."""
        arr = np.array([omega_power(self, s) for s in range(self.order)], dtype=np.int64)
        arr.flags.writeable = False
        return arr

    def elements(self) -> frozenset:
        return frozenset(range(self.order))

    def __repr__(self):
        name = f"{self.name!r}, " if self.name else ""
        return f"CayleyTable({name}order={self.order})"


@dataclass(frozen=True)
class Congruence:
    """A partition of ``0 .. m-1`` as a class-index array.

    Classes are numbered in order of their least element.
    """

    classes: tuple

    @classmethod
    def from_labels(cls, raw: Sequence[int]) -> "Congruence":
        renumber: dict = {}
        out = []
        for c in raw:
            if c not in renumber:
                renumber[c] = len(renumber)
            out.append(renumber[c])
        return cls(tuple(out))

    @property
    def num_classes(self) -> int:
        return max(self.classes, default=-1) + 1

    def blocks(self) -> list:
        out = [[] for _ in range(self.num_classes)]
        for e, c in enumerate(self.classes):
            out[c].append(e)
        return out

    def same(self, i: int, j: int) -> bool:
        return self.classes[i] == self.classes[j]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        # smaller index becomes the root, keeps partitions reproducible
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True


def _find_zero(table) -> Optional[int]:
    m = len(table)
    for z in range(m):
        if all(table[z][x] == z and table[x][z] == z for x in range(m)):
            return z
    return None


def _find_identity(table) -> Optional[int]:
    m = len(table)
    for e in range(m):
        if all(table[e][x] == x and table[x][e] == x for x in range(m)):
            return e
    return None


def associativity_witness(table) -> Optional[tuple]:
    """Return the lexicographically first triple violating associativity, or None."""
    t = np.asarray(table, dtype=np.int64)
    m = t.shape[0]
    rows = max(1, _ASSOC_CHUNK // max(1, m * m))
    for start in range(0, m, rows):
        block = t[start:start + rows]
        left = t[block]              # left[i, j, k] = (ij)k
        right = block[:, t]          # right[i, j, k] = i(jk)
        bad = np.argwhere(left != right)
        if len(bad):
            i, j, k = (int(v) for v in bad[0])
            return (start + i, j, k)
    return None


def validate(raw, labels=None, name: str = "", zero=None, identity=None) -> CayleyTable:
    """Check a raw ``m x m`` table and wrap it as a :class:`CayleyTable`.

    Zero and identity elements are detected automatically; declared ones are
    verified.
    """
    rows = [list(r) for r in raw]
    m = len(rows)
    if m == 0:
        raise RangeError("a semigroup must have at least one element")
    for i, row in enumerate(rows):
        if len(row) != m:
            raise RangeError(f"row {i} has length {len(row)}, expected {m}")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < m:
                raise RangeError(f"entry [{i}][{j}] = {v!r} not in range [0, {m})")
    table = tuple(tuple(int(v) for v in row) for row in rows)
    witness = associativity_witness(table)
    if witness is not None:
        raise AssociativityError(witness)

    found_zero = _find_zero(table)
    found_identity = _find_identity(table)
    if zero is not None and zero != found_zero:
        raise ValueError(f"declared zero {zero} is not absorbing")
    if identity is not None and identity != found_identity:
        raise ValueError(f"declared identity {identity} is not neutral")

    if labels is None:
        labels = [f"e{i}" for i in range(m)]
    labels = tuple(str(x) for x in labels)
    if len(labels) != m:
        raise RangeError(f"{len(labels)} labels for {m} elements")
    return CayleyTable(table, labels, name, found_zero, found_identity)


def from_function(elements: Sequence, op, labels=None, name="") -> CayleyTable:
    """Build a table from a list of element values and a binary operation on them."""
    index = {e: i for i, e in enumerate(elements)}
    raw = [[index[op(a, b)] for b in elements] for a in elements]
    return validate(raw, labels if labels is not None else [str(e) for e in elements], name)


# ---------------------------------------------------------------------------
# distinguished subsets and powers


def idempotents(S: CayleyTable) -> frozenset:
    return frozenset(e for e in range(S.order) if S.table[e][e] == e)


def omega_power(S: CayleyTable, s: int) -> int:
    """The unique idempotent among the positive powers of ``s``."""
    powers = [s]
    seen = {s: 1}
    while True:
        nxt = S.table[powers[-1]][s]
        if nxt in seen:
            break
        seen[nxt] = len(powers) + 1
        powers.append(nxt)
    index = seen[nxt]                       # s^(len+1) == s^index
    period = len(powers) + 1 - index
    exponent = -(-index // period) * period  # least multiple of period >= index
    return powers[exponent - 1]


def omega_plus(S: CayleyTable, s: int, k: int = 1) -> int:
    """``s^(omega + k)``, i.e. ``s^omega`` followed by ``k`` more factors ``s``."""
    if k < 0:
        raise ValueError("exponent offset must be >= 0")
    acc = omega_power(S, s)
    for _ in range(k):
        acc = S.table[acc][s]
    return acc


def completely_regular(S: CayleyTable) -> frozenset:
    return frozenset(s for s in range(S.order) if omega_plus(S, s, 1) == s)


def set_product(S: CayleyTable, A: Iterable[int], B: Iterable[int]) -> frozenset:
    B = tuple(B)
    return frozenset(S.table[a][b] for a in A for b in B)


def power_ideal(S: CayleyTable, n: int) -> frozenset:
    """All products of exactly ``n`` elements."""
    if n < 1:
        raise ValueError("n must be >= 1")
    everything = S.elements()
    acc = everything
    for _ in range(n - 1):
        acc = set_product(S, acc, everything)
    return acc


# ---------------------------------------------------------------------------
# constructions


def direct_product(S: CayleyTable, T: CayleyTable) -> CayleyTable:
    m, n = S.order, T.order
    if m * n > MAX_PRODUCT_ORDER:
        raise SizeGuard(f"direct product of order {m * n} exceeds {MAX_PRODUCT_ORDER}")
    pairs = list(itertools.product(range(m), range(n)))
    raw = [[S.table[a][c] * n + T.table[b][d] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"({S.labels[a]},{T.labels[b]})" for a, b in pairs]
    name = f"{S.name or 'S'}x{T.name or 'T'}"
    return validate(raw, labels, name)


def subsemigroup(S: CayleyTable, gens: Iterable[int]):
    """Close ``gens`` under multiplication.

    Returns ``(sub, embedding)`` where ``embedding[i]`` is the index in ``S`` of
    element ``i`` of ``sub``.  Elements keep their relative order from ``S``.
    """
    gens = set(gens)
    if not gens:
        raise ValueError("need at least one generator")
    closed = set(gens)
    frontier = list(gens)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                for p in (S.table[a][b], S.table[b][a]):
                    if p not in closed:
                        closed.add(p)
                        new.append(p)
        frontier = new
    embedding = tuple(sorted(closed))
    pos = {e: i for i, e in enumerate(embedding)}
    raw = [[pos[S.table[a][b]] for b in embedding] for a in embedding]
    sub = validate(raw, [S.labels[e] for e in embedding], S.name)
    return sub, embedding


def congruence_closure(S: CayleyTable, pairs: Iterable) -> Congruence:
    """Smallest congruence containing ``pairs``."""
    m = S.order
    t = S.table
    uf = _UnionFind(m)
    queue = sorted((min(a, b), max(a, b)) for a, b in pairs)
    while queue:
        nxt = []
        for a, b in queue:
            if uf.union(a, b):
                for s in range(m):
                    nxt.append((t[s][a], t[s][b]))
                    nxt.append((t[a][s], t[b][s]))
        queue = nxt
    return Congruence.from_labels([uf.find(i) for i in range(m)])


def is_congruence(S: CayleyTable, c: Congruence) -> bool:
    cls = c.classes
    if len(cls) != S.order:
        return False
    reps = {}
    for i, ci in enumerate(cls):
        for j, cj in enumerate(cls):
            target = cls[S.table[i][j]]
            if reps.setdefault((ci, cj), target) != target:
                return False
    return True


def quotient(S: CayleyTable, c: Congruence) -> CayleyTable:
    if len(c.classes) != S.order:
        raise NotACongruence("partition size does not match the semigroup")
    blocks = c.blocks()
    reps = [b[0] for b in blocks]
    cls = c.classes
    raw = []
    for i, a in enumerate(reps):
        row = []
        for j, b in enumerate(reps):
            target = cls[S.table[a][b]]
            for a2 in blocks[i]:
                for b2 in blocks[j]:
                    if cls[S.table[a2][b2]] != target:
                        raise NotACongruence(
                            f"{S.labels[a2]}*{S.labels[b2]} and {S.labels[a]}*{S.labels[b]} "
                            "fall in different classes")
            row.append(target)
        raw.append(row)
    labels = [S.labels[b[0]] if len(b) == 1 else f"[{S.labels[b[0]]}]" for b in blocks]
    return validate(raw, labels, S.name)


def is_ideal(S: CayleyTable, ideal: Iterable[int]) -> bool:
    ideal = frozenset(ideal)
    everything = S.elements()
    return (set_product(S, everything, ideal) <= ideal
            and set_product(S, ideal, everything) <= ideal)


def rees_quotient(S: CayleyTable, ideal: Iterable[int]) -> CayleyTable:
    """Collapse a two-sided ideal to a single zero (placed last)."""
    ideal = frozenset(ideal)
    if not ideal or not is_ideal(S, ideal):
        raise NotAnIdeal(f"{sorted(ideal)} is not a two-sided ideal")
    keep = [e for e in range(S.order) if e not in ideal]
    zero = len(keep)
    pos = {e: i for i, e in enumerate(keep)}
    raw = [[pos.get(S.table[a][b], zero) for b in keep] + [zero] for a in keep]
    raw.append([zero] * (zero + 1))
    labels = [S.labels[e] for e in keep] + ["0"]
    return validate(raw, labels, S.name)


def adjoin_identity(S: CayleyTable, label: str = "1") -> CayleyTable:
    """``S`` with one new neutral element appended."""
    m = S.order
    raw = [list(row) + [i] for i, row in enumerate(S.table)]
    raw.append(list(range(m + 1)))
    return validate(raw, list(S.labels) + [label], f"{S.name}^1" if S.name else "")


def transpose(S: CayleyTable) -> CayleyTable:
    """The opposite semigroup (``x * y := y x``)."""
    raw = [[S.table[j][i] for j in range(S.order)] for i in range(S.order)]
    return validate(raw, S.labels, S.name)


# ---------------------------------------------------------------------------
# isomorphism


def _invariants(S: CayleyTable) -> list:
    t = S.table
    m = S.order
    out = []
    for s in range(m):
        powers = {s}
        x = s
        while True:
            x = t[x][s]
            if x in powers:
                break
            powers.add(x)
        out.append((
            t[s][s] == s,
            len(powers),
            len({t[s][x] for x in range(m)}),
            len({t[x][s] for x in range(m)}),
            sum(1 for x in range(m) if t[x][x] == s),
        ))
    return out


def find_isomorphism(S: CayleyTable, T: CayleyTable, anti: bool = False):
    """Return a bijection ``phi`` (as a tuple) with ``phi(xy) = phi(x)phi(y)``.

    With ``anti=True`` look for ``phi(xy) = phi(y)phi(x)`` instead.  Exact
    backtracking; exponential in the worst case, meant for small orders.
    """
    if anti:
        T = transpose(T)
    m = S.order
    if m != T.order:
        return None
    s, t = S.table, T.table
    inv_s, inv_t = _invariants(S), _invariants(T)
    if sorted(inv_s) != sorted(inv_t):
        return None
    candidates = [[y for y in range(m) if inv_t[y] == inv_s[x]] for x in range(m)]
    order = sorted(range(m), key=lambda x: len(candidates[x]))
    phi = [-1] * m
    used = [False] * m

    def consistent(x):
        for a in range(m):
            if phi[a] < 0:
                continue
            for p, q in ((x, a), (a, x)):
                r = s[p][q]
                if phi[r] >= 0 and phi[r] != t[phi[p]][phi[q]]:
                    return False
        return True

    def search(depth):
        if depth == m:
            return True
        x = order[depth]
        for y in candidates[x]:
            if used[y]:
                continue
            phi[x] = y
            used[y] = True
            if consistent(x) and search(depth + 1):
                return True
            phi[x] = -1
            used[y] = False
        return False

    return tuple(phi) if search(0) else None


def is_isomorphic(S: CayleyTable, T: CayleyTable, anti: bool = False) -> bool:
    return find_isomorphism(S, T, anti) is not None


# ---------------------------------------------------------------------------
# JSON interchange


def to_json(S: CayleyTable) -> dict:
    doc = {
        "name": S.name,
        "order": S.order,
        "labels": list(S.labels),
        "table": [list(r) for r in S.table],
    }
    if S.zero is not None:
        doc["zero"] = S.zero
    if S.identity is not None:
        doc["identity"] = S.identity
    return doc


def from_json(doc: dict) -> CayleyTable:
    table = doc["table"]
    if "order" in doc and doc["order"] != len(table):
        raise RangeError(f"order {doc['order']} does not match {len(table)} rows")
    return validate(table, doc.get("labels"), doc.get("name", ""),
                    doc.get("zero"), doc.get("identity"))


def load(path) -> CayleyTable:
    return from_json(json.loads(Path(path).read_text()))


def dump(S: CayleyTable, path) -> None:
    Path(path).write_text(json.dumps(to_json(S), indent=1) + "\n")
