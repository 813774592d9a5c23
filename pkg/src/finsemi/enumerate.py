"""Exhaustive enumeration of small semigroups.

Labeled tables are produced by backtracking over the cells in row-major
order; every new cell is checked against the associativity triples it
completes.  A table represents its isomorphism class iff it is the
lexicographically least table among all of its relabelings (and, in
``iso-anti`` mode, those of its transpose).  Relabelings are compared as
base-``m`` integers, computed for all ``m!`` permutations at once with numpy.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .core import CayleyTable, validate
from .terms import as_identities, satisfies_all

HARD_MAX_ORDER = 5
DEFAULT_MAX_ORDER = 4


class Mode(str, Enum):
    ISO = "iso"
    ISO_ANTI = "iso-anti"
    RAW = "raw"


@dataclass(frozen=True)
class EnumerationSpec:
    order: int
    mode: Mode = Mode.ISO
    satisfies: tuple = ()
    fails: tuple = ()

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "satisfies", tuple(as_identities(self.satisfies)))
        object.__setattr__(self, "fails", tuple(as_identities(self.fails)))


def max_order() -> int:
    """The enumeration cap: ``WORKBENCH_MAX_ORDER`` if set, never above 5."""
    raw = os.environ.get("WORKBENCH_MAX_ORDER")
    cap = int(raw) if raw else DEFAULT_MAX_ORDER
    return max(1, min(cap, HARD_MAX_ORDER))


def _labeled(m: int, first: int):
    """Yield every associative table (flat tuple) with ``t[0][0] == first``."""
    n = m * m
    t = [-1] * n

    def ok(c, v):
        i, j = divmod(c, m)
        im, jm = i * m, j * m
        for z in range(m):                      # (i j) z = i (j z)
            left = t[v * m + z]
            jz = t[jm + z]
            if left >= 0 and jz >= 0:
                right = t[im + jz]
                if right >= 0 and right != left:
                    return False
        for x in range(m):                      # (x i) j = x (i j)
            xi = t[x * m + i]
            if xi >= 0:
                left = t[xi * m + j]
                right = t[x * m + v]
                if left >= 0 and right >= 0 and left != right:
                    return False
        for x in range(m):
            xm = x * m
            for y in range(m):
                xy = t[xm + y]
                if xy == i:                     # (x y) j with xy = i
                    yj = t[y * m + j]
                    if yj >= 0:
                        right = t[xm + yj]
                        if right >= 0 and right != v:
                            return False
                if xy == j:                     # i (x y) with xy = j
                    ix = t[im + x]
                    if ix >= 0:
                        left = t[ix * m + y]
                        if left >= 0 and left != v:
                            return False
        return True

    def search(c):
        if c == n:
            yield tuple(t)
            return
        for v in (range(m) if c else (first,)):
            t[c] = v
            if ok(c, v):
                yield from search(c + 1)
        t[c] = -1

    yield from search(0)


@lru_cache(maxsize=None)
def _perm_arrays(m: int):
    perms = np.array(list(itertools.permutations(range(m))), dtype=np.int64)
    inv = np.argsort(perms, axis=1)
    weights = np.array([m ** e for e in range(m * m - 1, -1, -1)], dtype=np.int64)
    return perms, inv, weights


def _codes(arr: np.ndarray) -> np.ndarray:
    """Codes of every relabeling: shape (N, m!); column 0 is the identity relabeling."""
    m = arr.shape[1]
    perms, inv, weights = _perm_arrays(m)
    P = len(perms)
    g = arr[:, perms[:, :, None], perms[:, None, :]]             # (N, P, m, m)
    rel = inv[np.arange(P)[None, :, None, None], g]
    return (rel.reshape(len(arr), P, m * m) * weights).sum(axis=-1)


def canonical_code(table, anti: bool = False) -> int:
    arr = np.asarray(table, dtype=np.int64)[None]
    best = _codes(arr).min()
    if anti:
        best = min(best, _codes(arr.transpose(0, 2, 1)).min())
    return int(best)


def table_code(table) -> int:
    m = len(table)
    code = 0
    for row in table:
        for v in row:
            code = code * m + v
    return code


def decode(code: int, m: int) -> tuple:
    flat = []
    for _ in range(m * m):
        code, v = divmod(code, m)
        flat.append(v)
    flat.reverse()
    return tuple(tuple(flat[r * m:(r + 1) * m]) for r in range(m))


def canonical_form(S: CayleyTable, anti: bool = False) -> tuple:
    return decode(canonical_code(S.table, anti), S.order)


@lru_cache(maxsize=16)
def _labeled_array(m: int, first: int) -> np.ndarray:
    flats = list(_labeled(m, first))
    arr = np.array(flats, dtype=np.int64).reshape(-1, m, m)
    arr.setflags(write=False)
    return arr


def _task(args):
    m, first, mode = args
    arr = _labeled_array(m, first)
    if not len(arr):
        return []
    out = []
    chunk = 2048
    for start in range(0, len(arr), chunk):
        block = arr[start:start + chunk]
        codes = _codes(block)
        own = codes[:, 0]
        if mode == Mode.RAW:
            keep = np.ones(len(block), dtype=bool)
        else:
            best = codes.min(axis=1)
            if mode == Mode.ISO_ANTI:
                best = np.minimum(best, _codes(block.transpose(0, 2, 1)).min(axis=1))
            keep = own == best
        out.extend(int(c) for c in own[keep])
    return out


def enumerate_codes(order: int, mode=Mode.ISO, workers: int = 1) -> list:
    """Sorted codes of the emitted tables (see :func:`decode`)."""
    mode = Mode(mode)
    if order > max_order():
        raise ValueError(f"order {order} exceeds the enumeration cap {max_order()} "
                         f"(set WORKBENCH_MAX_ORDER, at most {HARD_MAX_ORDER})")
    tasks = [(order, first, mode) for first in range(order)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_task, tasks))
    else:
        parts = [_task(t) for t in tasks]
    return sorted(c for part in parts for c in part)


def enumerate_semigroups(spec: EnumerationSpec, workers: int = 1):
    """Yield the tables selected by ``spec`` in increasing canonical order."""
    m = spec.order
    for idx, code in enumerate(enumerate_codes(m, spec.mode, workers)):
        S = validate(decode(code, m), name=f"S{m}.{idx}")
        if spec.satisfies and not satisfies_all(S, spec.satisfies):
            continue
        if any(satisfies_all(S, [eps]) for eps in spec.fails):
            continue
        yield S


def count(order: int, mode=Mode.ISO, workers: int = 1) -> int:
    return len(enumerate_codes(order, mode, workers))


@lru_cache(maxsize=None)
def representatives(max_order_: int = DEFAULT_MAX_ORDER, mode=Mode.ISO) -> tuple:
    """All representatives of orders ``1..max_order_``, smallest order first."""
    out = []
    for m in range(1, max_order_ + 1):
        out.extend(enumerate_semigroups(EnumerationSpec(m, mode)))
    return tuple(out)
