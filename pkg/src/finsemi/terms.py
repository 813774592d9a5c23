"""Omega-terms and identities between them.

Grammar of the text form::

    identity  := side ('=' side)*          '≈' is accepted for '='
    side      := term | '0'                '0' only as the last side
    term      := factor (['*'] factor)*
    factor    := atom ('^' exponent)*
    atom      := NAME | '(' term ')'
    exponent  := 'w' | INT | '(' 'w' ['+' INT] ')' | '(' INT ')'

``x^w`` is the idempotent power of ``x``, ``x^(w+k)`` is ``x^w`` times ``x^k``
and ``x^n`` for a positive integer ``n`` is shorthand for ``n`` juxtaposed
copies of ``x``.  ``ω`` may be written instead of ``w``.  A chain
``a = b = c`` denotes the identities ``a = b`` and ``b = c``; a chain ending
in ``0`` denotes ``t = 0`` for each term ``t`` in it.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .core import CayleyTable, omega_plus
from .errors import BudgetExceeded, ParseError, UnboundVariable

DEFAULT_MAX_ASSIGNMENTS = 10 ** 8
_CHUNK = 1 << 18


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Power:
    """``base^(w + k)``."""

    base: "Term"
    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("omega exponent offset must be >= 0")


Term = Union[Var, Concat, Power]


class _Zero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


def concat(*terms: Term) -> Term:
    """Concatenate terms, flattening nested concatenations."""
    parts = []
    for t in terms:
        if isinstance(t, Concat):
            parts.extend(t.parts)
        else:
            parts.append(t)
    if not parts:
        raise ValueError("terms are nonempty")
    if len(parts) == 1:
        return parts[0]
    return Concat(tuple(parts))


def word(*names: str) -> Term:
    return concat(*(Var(n) for n in names))


def factors(t: Term) -> tuple:
    return t.parts if isinstance(t, Concat) else (t,)


def variables_of(t: Term) -> list:
    """Variables in order of first occurrence."""
    seen = {}

    def walk(u):
        if isinstance(u, Var):
            seen.setdefault(u.name, None)
        elif isinstance(u, Concat):
            for p in u.parts:
                walk(p)
        else:
            walk(u.base)

    walk(t)
    return list(seen)


def is_finite(t: Term) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, Power):
        return False
    return all(is_finite(p) for p in t.parts)


def as_word(t: Term) -> tuple:
    """The variable names of a finite term, left to right."""
    if not is_finite(t):
        raise ValueError("term contains an omega power")
    return tuple(p.name for p in factors(t))


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: object  # Term or ZERO

    @property
    def is_zero_form(self) -> bool:
        return self.rhs is ZERO

    @property
    def variables(self) -> tuple:
        names = variables_of(self.lhs)
        if not self.is_zero_form:
            for n in variables_of(self.rhs):
                if n not in names:
                    names.append(n)
        return tuple(names)

    @property
    def is_finite(self) -> bool:
        return is_finite(self.lhs) and (self.is_zero_form or is_finite(self.rhs))

    @property
    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    def sides(self) -> tuple:
        return (self.lhs, self.rhs)

    def __str__(self):
        return format_identity(self)


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<op>[\^()*=+≈ω]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if value == "≈":
            value = "="
        if value == "ω":
            kind, value = "name", "w"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise ParseError(message, self.text, self.peek()[2])

    def expect(self, value):
        kind, v, _ = self.peek()
        if v != value or kind == "name":
            self.fail(f"expected {value!r}, found {v or 'end of input'!r}")
        return self.take()

    def starts_factor(self):
        kind, v, _ = self.peek()
        return kind == "name" or v == "("

    def sides(self):
        out = [self.side()]
        while self.peek()[1] == "=":
            if out[-1] is ZERO:
                self.fail("'0' may only appear as the last side")
            self.take()
            out.append(self.side())
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        if out[0] is ZERO:
            raise ParseError("'0' may only appear as the last side", self.text, 0)
        return out

    def side(self):
        kind, v, _ = self.peek()
        if kind == "int" and v == "0":
            self.take()
            return ZERO
        return self.term()

    def term(self):
        if not self.starts_factor():
            self.fail("expected a variable or '('")
        parts = [self.factor()]
        while True:
            if self.peek()[1] == "*":
                self.take()
                if not self.starts_factor():
                    self.fail("expected a factor after '*'")
            elif not self.starts_factor():
                break
            parts.append(self.factor())
        return concat(*parts)

    def factor(self):
        kind, v, _ = self.peek()
        if kind == "name":
            self.take()
            node = Var(v)
        elif v == "(":
            self.take()
            node = self.term()
            self.expect(")")
        else:
            self.fail("expected a variable or '('")
        while self.peek()[1] == "^":
            self.take()
            node = self.exponent(node)
        return node

    def exponent(self, base):
        kind, v, _ = self.peek()
        if kind == "name" and v == "w":
            self.take()
            return Power(base, 0)
        if kind == "int":
            return self._finite_power(base, int(self.take()[1]))
        if v == "(":
            self.take()
            kind, v, _ = self.peek()
            if kind == "int":
                n = int(self.take()[1])
                self.expect(")")
                return self._finite_power(base, n)
            if kind == "name" and v == "w":
                self.take()
                k = 0
                if self.peek()[1] == "+":
                    self.take()
                    if self.peek()[0] != "int":
                        self.fail("expected an integer after '+'")
                    k = int(self.take()[1])
                self.expect(")")
                return Power(base, k)
        self.fail("expected an exponent: w, (w+k) or a positive integer")

    def _finite_power(self, base, n):
        if n < 1:
            self.fail("finite exponents must be positive")
        return concat(*([base] * n))


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "end":
        p.fail(f"unexpected {p.peek()[1]!r}")
    return t


def parse_identities(text: str) -> list:
    """Parse a (possibly chained) identity line into a list of identities."""
    sides = _Parser(text).sides()
    if len(sides) < 2:
        raise ParseError("an identity needs '='", text, len(text))
    if sides[-1] is ZERO:
        return [Identity(t, ZERO) for t in sides[:-1]]
    return [Identity(a, b) for a, b in zip(sides, sides[1:])]


def parse_identity(text: str) -> Identity:
    found = parse_identities(text)
    if len(found) != 1:
        raise ParseError(f"expected a single identity, got {len(found)}", text, 0)
    return found[0]


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Concat):
        return " ".join(format_term(p) for p in t.parts)
    base = format_term(t.base)
    if isinstance(t.base, Concat):
        base = f"({base})"
    exp = "w" if t.k == 0 else f"(w+{t.k})"
    return f"{base}^{exp}"


def format_identity(eps: Identity) -> str:
    rhs = "0" if eps.is_zero_form else format_term(eps.rhs)
    return f"{format_term(eps.lhs)} = {rhs}"


def load_identities(path, expand: bool = True) -> list:
    """Read an identity-set file: one identity (or chain) per line, '#' comments."""
    return read_identities(Path(path).read_text(), expand)


def read_identities(text: str, expand: bool = True) -> list:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for eps in parse_identities(line):
            out.extend(expand_zero(eps) if expand and eps.is_zero_form else [eps])
    return out


# ---------------------------------------------------------------------------
# syntactic analysis


class Occurrence(Enum):
    ZERO = "zero"
    ONE = "one"
    MANY = "many"


@dataclass(frozen=True)
class TermProfile:
    content: frozenset
    length: Union[int, float]     # math.inf for terms with an omega power
    first: str
    last: str
    counts: Mapping

    def multiplicity(self, name: str) -> Occurrence:
        return self.counts.get(name, Occurrence.ZERO)


def profile(t: Term) -> TermProfile:
    counts: dict = {}

    def walk(u, repeated):
        if isinstance(u, Var):
            if repeated or u.name in counts:
                counts[u.name] = Occurrence.MANY
            else:
                counts[u.name] = Occurrence.ONE
        elif isinstance(u, Concat):
            for p in u.parts:
                walk(p, repeated)
        else:
            walk(u.base, True)

    walk(t, False)
    return TermProfile(
        content=frozenset(counts),
        length=term_length(t),
        first=_edge_var(t, 0),
        last=_edge_var(t, -1),
        counts=dict(counts),
    )


def term_length(t: Term):
    if isinstance(t, Var):
        return 1
    if isinstance(t, Power):
        return math.inf
    return sum(term_length(p) for p in t.parts)


def _edge_var(t: Term, side: int) -> str:
    while not isinstance(t, Var):
        t = t.base if isinstance(t, Power) else t.parts[side]
    return t.name


# ---------------------------------------------------------------------------
# transformations


def substitute_all(t: Term, mapping: Mapping) -> Term:
    """Simultaneously replace variables by terms."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Concat):
        return concat(*(substitute_all(p, mapping) for p in t.parts))
    return Power(substitute_all(t.base, mapping), t.k)


def substitute(t: Term, v: str, s: Term) -> Term:
    return substitute_all(t, {v: s})


def map_identity(eps: Identity, fn) -> Identity:
    return Identity(fn(eps.lhs), eps.rhs if eps.is_zero_form else fn(eps.rhs))


def fresh_name(used: Iterable[str], stem: str = "u") -> str:
    used = set(used)
    if stem not in used:
        return stem
    for i in itertools.count(1):
        if f"{stem}{i}" not in used:
            return f"{stem}{i}"


def expand_zero(eps: Identity, var: Optional[str] = None) -> tuple:
    """``t = 0`` abbreviates ``u t = t`` and ``t u = t`` for a fresh ``u``."""
    if not eps.is_zero_form:
        raise ValueError(f"{eps} is not a zero-form identity")
    u = Var(var or fresh_name(eps.variables, "u"))
    return (Identity(concat(u, eps.lhs), eps.lhs), Identity(concat(eps.lhs, u), eps.lhs))


def _restrict(eps, var, stem, left):
    if eps.is_zero_form:
        raise ValueError("expand zero-form identities before restricting them")
    name = var or fresh_name(eps.variables, stem)
    if name in eps.variables:
        raise ValueError(f"{name!r} already occurs in {eps}")
    v = Var(name)
    if left:
        return Identity(concat(v, eps.lhs), concat(v, eps.rhs))
    return Identity(concat(eps.lhs, v), concat(eps.rhs, v))


def res_left(eps: Identity, var: Optional[str] = None) -> Identity:
    """Prefix a fresh variable to both sides."""
    return _restrict(eps, var, "z", True)


def res_right(eps: Identity, var: Optional[str] = None) -> Identity:
    """Suffix a fresh variable to both sides."""
    return _restrict(eps, var, "z", False)


def unroll(p: Term, side: str = "left") -> Term:
    """Rewrite ``b^(w+k)`` as ``b^k b^w`` (left) or ``b^w b^k`` (right)."""
    if not isinstance(p, Power):
        raise TypeError("unroll expects a Power node")
    if p.k == 0:
        return p
    core = Power(p.base, 0)
    copies = [p.base] * p.k
    if side == "left":
        return concat(*copies, core)
    if side == "right":
        return concat(core, *copies)
    raise ValueError("side must be 'left' or 'right'")


def malcev_split(eps: Identity, k: int) -> Identity:
    """Replace every variable ``x`` by a product ``x1 x2 ... xk`` of new variables."""
    if k < 1:
        raise ValueError("k must be positive")
    names = eps.variables
    taken = set(names)
    mapping = {}
    for n in names:
        new = []
        for i in range(1, k + 1):
            cand = f"{n}{i}"
            if cand in taken:
                cand = fresh_name(taken, f"{n}_{i}")
            taken.add(cand)
            new.append(Var(cand))
        mapping[n] = concat(*new)
    return map_identity(eps, lambda t: substitute_all(t, mapping))


def canonical_names(eps: Identity, stem: str = "v") -> Identity:
    """Rename variables to ``v1, v2, ...`` in order of first occurrence."""
    mapping = {n: Var(f"{stem}{i}") for i, n in enumerate(eps.variables, 1)}
    return map_identity(eps, lambda t: substitute_all(t, mapping))


# ---------------------------------------------------------------------------
# evaluation and satisfaction


def evaluate(t: Term, S: CayleyTable, assignment: Mapping) -> int:
    """Value of ``t`` in ``S`` when each variable is sent to an element index."""
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Concat):
        vals = [evaluate(p, S, assignment) for p in t.parts]
        return S.product(vals)
    return omega_plus(S, evaluate(t.base, S, assignment), t.k)


def _evaluate_array(t: Term, S: CayleyTable, env: Mapping):
    """Vectorised evaluation: ``env`` maps variables to broadcastable index arrays."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    arr = S.array
    if isinstance(t, Concat):
        acc = _evaluate_array(t.parts[0], S, env)
        for p in t.parts[1:]:
            acc = arr[acc, _evaluate_array(p, S, env)]
        return acc
    base = _evaluate_array(t.base, S, env)
    acc = S.omega[base]
    for _ in range(t.k):
        acc = arr[acc, base]
    return acc


@dataclass(frozen=True)
class Satisfaction:
    holds: bool
    identity: Optional[Identity] = None    # the (expanded) identity that failed
    witness: Optional[dict] = None         # variable -> element index

    def __bool__(self):
        return self.holds

    def describe(self, S: CayleyTable) -> str:
        if self.holds:
            return "holds"
        parts = ", ".join(f"{k}->{S.labels[v]}" for k, v in self.witness.items())
        return f"fails {self.identity} at {parts}"


def find_failure(S: CayleyTable, eps: Identity,
                 max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> Optional[dict]:
    """Lexicographically first assignment where the two sides differ, or None."""
    if eps.is_zero_form:
        raise ValueError("expand zero-form identities first")
    names = eps.variables
    m, v = S.order, len(names)
    if m ** v > max_assignments:
        raise BudgetExceeded(f"{m}^{v} assignments exceed the budget of {max_assignments}")
    inner = 0
    while inner < v and m ** (inner + 1) <= _CHUNK:
        inner += 1
    outer = v - inner
    shape = (m,) * inner
    grids = {}
    for idx, name in enumerate(names[outer:]):
        s = [1] * inner
        s[idx] = m
        grids[name] = np.arange(m).reshape(s)
    for prefix in itertools.product(range(m), repeat=outer):
        env = dict(zip(names[:outer], prefix))
        env.update(grids)
        left = _evaluate_array(eps.lhs, S, env)
        right = _evaluate_array(eps.rhs, S, env)
        diff = np.broadcast_to(np.asarray(left != right), shape)
        if diff.any():
            hit = np.argwhere(diff)[0]
            values = list(prefix) + [int(h) for h in hit]
            return dict(zip(names, values))
    return None


def instance_pairs(S: CayleyTable, eps: Identity,
                   max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> set:
    """All pairs (lhs value, rhs value) over every assignment, with lhs != rhs."""
    if eps.is_zero_form:
        out = set()
        for part in expand_zero(eps):
            out |= instance_pairs(S, part, max_assignments)
        return out
    names = eps.variables
    m, v = S.order, len(names)
    if m ** v > max_assignments:
        raise BudgetExceeded(f"{m}^{v} assignments exceed the budget of {max_assignments}")
    shape = (m,) * v
    env = {}
    for idx, name in enumerate(names):
        s = [1] * v
        s[idx] = m
        env[name] = np.arange(m).reshape(s)
    left = np.broadcast_to(_evaluate_array(eps.lhs, S, env), shape).ravel()
    right = np.broadcast_to(_evaluate_array(eps.rhs, S, env), shape).ravel()
    differ = left != right
    pairs = np.unique(np.stack([left[differ], right[differ]], axis=1), axis=0)
    return {(int(a), int(b)) for a, b in pairs}


def satisfies(S: CayleyTable, eps: Identity,
              max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> Satisfaction:
    """Check ``S |= eps`` by exhausting all assignments."""
    for part in (expand_zero(eps) if eps.is_zero_form else (eps,)):
        w = find_failure(S, part, max_assignments)
        if w is not None:
            return Satisfaction(False, part, w)
    return Satisfaction(True)


def satisfies_all(S: CayleyTable, identities: Iterable[Identity]) -> Satisfaction:
    for eps in identities:
        result = satisfies(S, eps)
        if not result:
            return result
    return Satisfaction(True)


def as_identities(x) -> list:
    """Accept an Identity, identity text, or an iterable of either."""
    if isinstance(x, Identity):
        return [x]
    if isinstance(x, str):
        return parse_identities(x)
    out = []
    for item in x:
        out.extend(as_identities(item))
    return out
