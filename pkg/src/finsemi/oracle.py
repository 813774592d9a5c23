"""Brute-force refutation of implications between identities.

``implies_oracle(E, delta, N)`` looks for a semigroup of order at most ``N``
that satisfies every identity of ``E`` but not ``delta``.  Finding none is
evidence, not a proof; reports say "no counterexample up to order N".
"""

from __future__ import annotations

from dataclasses import dataclass

from . import core
from .core import CayleyTable
from .enumerate import Mode, representatives
from .terms import (
    Identity,
    as_identities,
    evaluate,
    format_identity,
    parse_identity,
    satisfies,
    satisfies_all,
)


@dataclass(frozen=True)
class NoCounterexample:
    max_order: int
    checked: int

    def __bool__(self):
        return True     # the implication survived

    def __str__(self):
        return f"no counterexample up to order {self.max_order}"


@dataclass(frozen=True)
class Counterexample:
    semigroup: CayleyTable
    assignment: dict        # variable -> element index
    identity: Identity      # the (expanded) part of delta that fails

    def __bool__(self):
        return False

    def __str__(self):
        parts = ", ".join(f"{k}->{self.semigroup.labels[v]}" for k, v in self.assignment.items())
        return (f"counterexample of order {self.semigroup.order} ({self.semigroup.name}): "
                f"{format_identity(self.identity)} fails at {parts}")

    def to_json(self) -> dict:
        return {
            "semigroup": core.to_json(self.semigroup),
            "assignment": dict(self.assignment),
            "identity": format_identity(self.identity),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Counterexample":
        return cls(core.from_json(doc["semigroup"]), dict(doc["assignment"]),
                   parse_identity(doc["identity"]))


def replay_counterexample(cx) -> bool:
    """True iff the recorded assignment still separates the two sides."""
    if isinstance(cx, dict):
        cx = Counterexample.from_json(cx)
    S, eps = cx.semigroup, cx.identity
    return evaluate(eps.lhs, S, cx.assignment) != evaluate(eps.rhs, S, cx.assignment)


def implies_oracle(premises, delta, max_order: int = 4, models=None):
    """Search semigroups of order <= ``max_order`` for ``S |= premises``, ``S |/= delta``.

    The scan runs over isomorphism-class representatives in canonical order,
    so the reported counterexample is deterministic and of minimal order.
    """
    premises = as_identities(premises)
    (delta,) = as_identities(delta)
    if models is None:
        models = representatives(max_order, Mode.ISO)
    checked = 0
    for S in models:
        if S.order > max_order:
            continue
        checked += 1
        if not satisfies_all(S, premises):
            continue
        result = satisfies(S, delta)
        if not result:
            return Counterexample(S, result.witness, result.identity)
    return NoCounterexample(max_order, checked)
