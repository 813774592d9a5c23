"""Product identities ``x1 ... xn = rho`` and their classification.

Every nontrivial product identity implies either a permutation identity
``x1 ... xn = x_{1s} ... x_{ns}`` or an identity of the form
``x1 ... x_{i-1} (x_i ... x_j)^(w+1) x_{j+1} ... xn`` (called ACR below).
:func:`classify` produces one of them constructively: square a missing
variable to make the identity regular, read off the permutation if the right
side is a rearrangement, and otherwise strip left and right restrictions
until the core is primitive.

Permutations are tuples of 1-based images: ``sigma[p-1]`` is the index of
the variable at position ``p`` of the right side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import AlreadyRegular, NotAProductIdentity, TrivialIdentity
from .terms import (
    Identity,
    Power,
    Term,
    Var,
    as_word,
    concat,
    factors,
    format_identity,
    is_finite,
    parse_identity,
    profile,
    term_length,
    unroll,
    variables_of,
)


@dataclass(frozen=True)
class ProductIdentity:
    variables: tuple    # names of x1 .. xn, in order
    rhs: Term

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def lhs(self) -> Term:
        return concat(*(Var(v) for v in self.variables))

    def identity(self) -> Identity:
        return Identity(self.lhs, self.rhs)

    def __str__(self):
        return format_identity(self.identity())


def as_product_identity(eps) -> ProductIdentity:
    if isinstance(eps, str):
        eps = parse_identity(eps)
    if eps.is_zero_form:
        raise NotAProductIdentity(f"{eps} has 0 as right-hand side")
    if not is_finite(eps.lhs):
        raise NotAProductIdentity("left-hand side must be a plain word")
    names = as_word(eps.lhs)
    if len(set(names)) != len(names):
        raise NotAProductIdentity(f"left-hand side of {eps} repeats a variable")
    extra = set(variables_of(eps.rhs)) - set(names)
    if extra:
        raise NotAProductIdentity(f"right-hand side uses {sorted(extra)} not on the left")
    return ProductIdentity(names, eps.rhs)


def _coerce(eps) -> ProductIdentity:
    return eps if isinstance(eps, ProductIdentity) else as_product_identity(eps)


def is_trivial(eps) -> bool:
    eps = _coerce(eps)
    return eps.rhs == eps.lhs


def is_regular(eps) -> bool:
    eps = _coerce(eps)
    return profile(eps.rhs).content == set(eps.variables)


def is_expansion(eps) -> bool:
    eps = _coerce(eps)
    return term_length(eps.rhs) > eps.arity


def regularize(eps) -> ProductIdentity:
    """Replace a nonregular identity by ``x1..xn = x1..x_i x_i..xn``.

    ``x_i`` is the first variable missing from the right side; substituting
    ``x_i -> x_i^2`` into the original shows the result is implied by it.
    """
    eps = _coerce(eps)
    content = profile(eps.rhs).content
    missing = [i for i, v in enumerate(eps.variables) if v not in content]
    if not missing:
        raise AlreadyRegular(str(eps))
    i = missing[0]
    names = list(eps.variables)
    rhs = concat(*(Var(v) for v in names[:i + 1] + names[i:]))
    return ProductIdentity(eps.variables, rhs)


def unroll_sequence(eps, steps: int) -> list:
    """Words ``rho_0 = x1..xn``, ``rho_{i+1}`` = ``rho_i`` with its length-n
    prefix ``y1..yn`` replaced by ``rho(y1, .., yn)``."""
    eps = _coerce(eps)
    n = eps.arity
    if not is_finite(eps.rhs):
        raise ValueError("unroll_sequence needs a finite right-hand side")
    rho = as_word(eps.rhs)
    k = len(rho) - n
    if k <= 0:
        raise ValueError("unroll_sequence needs an expansion identity")
    regular = is_regular(eps)
    position = {v: p for p, v in enumerate(eps.variables)}
    current = tuple(eps.variables)
    out = [current]
    for i in range(1, steps + 1):
        prefix, rest = current[:n], current[n:]
        current = tuple(prefix[position[v]] for v in rho) + rest
        assert len(current) == n + i * k
        if regular:
            assert set(current) == set(eps.variables)
        out.append(current)
    return out


def _edge_factors(t: Term, side: str) -> tuple:
    """Factors of ``t`` after unrolling one leading/trailing ``b^(w+k)``, ``k >= 1``."""
    parts = list(factors(t))
    edge = 0 if side == "left" else -1
    if isinstance(parts[edge], Power) and parts[edge].k >= 1:
        unrolled = factors(unroll(parts[edge], side))
        parts = (list(unrolled) + parts[1:]) if side == "left" else (parts[:-1] + list(unrolled))
    return tuple(parts)


def _strip(eps: ProductIdentity, side: str) -> Optional[ProductIdentity]:
    """The identity ``eps`` restricts on ``side``, or None if it is primitive there."""
    if eps.arity < 2:
        return None
    parts = _edge_factors(eps.rhs, side)
    x = eps.variables[0] if side == "left" else eps.variables[-1]
    edge, rest = (parts[0], parts[1:]) if side == "left" else (parts[-1], parts[:-1])
    if edge != Var(x) or not rest:
        return None
    remainder = concat(*rest)
    if x in variables_of(remainder):
        return None
    names = eps.variables[1:] if side == "left" else eps.variables[:-1]
    return ProductIdentity(names, remainder)


def is_left_primitive(eps) -> bool:
    return _strip(_coerce(eps), "left") is None


def is_right_primitive(eps) -> bool:
    return _strip(_coerce(eps), "right") is None


def is_primitive(eps) -> bool:
    return is_left_primitive(eps) and is_right_primitive(eps)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class NonRegularSquare:
    index: int              # 1-based index of the squared variable

    def __str__(self):
        return f"NonRegularSquare({self.index})"


@dataclass(frozen=True)
class LeftStrip:
    def __str__(self):
        return "LeftStrip"


@dataclass(frozen=True)
class RightStrip:
    def __str__(self):
        return "RightStrip"


@dataclass(frozen=True)
class PrimitiveCore:
    core: ProductIdentity

    def __str__(self):
        return f"PrimitiveCore({self.core})"


@dataclass(frozen=True)
class Permutation:
    sigma: tuple

    def __str__(self):
        return f"Permutation({','.join(map(str, self.sigma))})"


@dataclass(frozen=True)
class ACR:
    n: int
    i: int
    j: int

    def __str__(self):
        return f"ACR({self.i},{self.j})"


@dataclass(frozen=True)
class Classification:
    source: ProductIdentity
    verdict: object             # Permutation or ACR
    trace: tuple

    def implied_identity(self) -> Identity:
        names = self.source.variables
        if isinstance(self.verdict, Permutation):
            return perm_identity(self.verdict.sigma, names)
        return acr_identity(self.verdict.n, self.verdict.i, self.verdict.j, names)

    def to_json(self) -> dict:
        doc = {"verdict": type(self.verdict).__name__}
        if isinstance(self.verdict, Permutation):
            doc["sigma"] = list(self.verdict.sigma)
        else:
            doc.update(n=self.verdict.n, i=self.verdict.i, j=self.verdict.j)
        doc["trace"] = [str(s) for s in self.trace]
        doc["implied_identity_text"] = format_identity(self.implied_identity())
        return doc

    def __str__(self):
        return f"{self.verdict}: {format_identity(self.implied_identity())}"


def classify(eps, right_first: bool = False) -> Classification:
    """Find a permutation or ACR identity implied by a nontrivial product identity.

    Left strips are exhausted before right strips unless ``right_first``.
    """
    source = _coerce(eps)
    if is_trivial(source):
        raise TrivialIdentity(str(source))
    current = source
    trace = []
    if not is_regular(current):
        fixed = regularize(current)
        missing = next(i for i, v in enumerate(current.variables)
                       if v not in profile(current.rhs).content)
        trace.append(NonRegularSquare(missing + 1))
        current = fixed
    n = current.arity
    if is_finite(current.rhs) and term_length(current.rhs) == n:
        position = {v: p for p, v in enumerate(current.variables, 1)}
        sigma = tuple(position[v] for v in as_word(current.rhs))
        return Classification(source, Permutation(sigma), tuple(trace))

    i, j = 1, n
    order = ("right", "left") if right_first else ("left", "right")
    changed = True
    while changed:
        changed = False
        for side in order:
            while True:
                smaller = _strip(current, side)
                if smaller is None:
                    break
                current = smaller
                changed = True
                if side == "left":
                    i += 1
                    trace.append(LeftStrip())
                else:
                    j -= 1
                    trace.append(RightStrip())
    trace.append(PrimitiveCore(current))
    return Classification(source, ACR(n, i, j), tuple(trace))


def replay(eps, trace: Sequence) -> ProductIdentity:
    """Apply the regularisation and strip steps of ``trace`` to ``eps``."""
    current = _coerce(eps)
    for step in trace:
        if isinstance(step, NonRegularSquare):
            current = regularize(current)
        elif isinstance(step, LeftStrip):
            current = _strip(current, "left")
        elif isinstance(step, RightStrip):
            current = _strip(current, "right")
        if current is None:
            raise ValueError(f"step {step} does not apply")
    return current


# ---------------------------------------------------------------------------
# the two target families


def default_names(n: int) -> tuple:
    if n == 1:
        return ("x",)
    if n == 2:
        return ("x", "y")
    return tuple(f"x{i}" for i in range(1, n + 1))


def acr_identity(n: int, i: int, j: int, names: Optional[Sequence[str]] = None) -> Identity:
    """``x1 .. x_{i-1} (x_i .. x_j)^(w+1) x_{j+1} .. xn``."""
    if not 1 <= i <= j <= n:
        raise IndexError(f"need 1 <= i <= j <= n, got n={n}, i={i}, j={j}")
    names = tuple(names) if names is not None else default_names(n)
    if len(names) != n:
        raise ValueError("wrong number of variable names")
    xs = [Var(v) for v in names]
    middle = Power(concat(*xs[i - 1:j]), 1)
    return Identity(concat(*xs), concat(*xs[:i - 1], middle, *xs[j:]))


def perm_identity(sigma: Sequence[int], names: Optional[Sequence[str]] = None) -> Identity:
    """``x1 .. xn = x_{1 sigma} .. x_{n sigma}`` with ``sigma`` as 1-based images."""
    sigma = tuple(sigma)
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise IndexError(f"{sigma} is not a permutation of 1..{n}")
    names = tuple(names) if names is not None else default_names(n)
    xs = [Var(v) for v in names]
    return Identity(concat(*xs), concat(*(xs[s - 1] for s in sigma)))


def nontrivial_permutations(n: int) -> list:
    from itertools import permutations
    identity = tuple(range(1, n + 1))
    return [p for p in permutations(identity) if p != identity]


def compose(s: Sequence[int], t: Sequence[int]) -> tuple:
    """``p -> t(s(p))`` (apply ``s`` first)."""
    return tuple(t[s[p] - 1] for p in range(len(s)))


def cyclic_subgroup(sigma: Sequence[int]) -> frozenset:
    identity = tuple(range(1, len(sigma) + 1))
    out = {identity}
    g = tuple(sigma)
    while g not in out:
        out.add(g)
        g = compose(g, sigma)
    return frozenset(out)


__all__ = [
    "ACR", "Classification", "LeftStrip", "NonRegularSquare", "Permutation",
    "PrimitiveCore", "ProductIdentity", "RightStrip", "acr_identity",
    "as_product_identity", "classify", "cyclic_subgroup", "default_names",
    "is_expansion", "is_left_primitive", "is_primitive", "is_regular",
    "is_right_primitive", "is_trivial", "nontrivial_permutations",
    "perm_identity", "regularize", "replay", "unroll_sequence",
]
