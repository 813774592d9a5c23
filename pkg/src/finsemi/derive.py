"""Bounded search for equational derivations between finite identities.

A rewrite step replaces a factor of the current word that is a substitution
instance of one side of a basis identity by the matching instance of the
other side.  Those steps, closed under reflexivity, symmetry and
transitivity, generate exactly the deductive closure of the basis (replacement
supplies the context around the factor, substitution supplies the instance).
The search is a bidirectional breadth-first search over words of bounded
length, so a negative answer only means "not found within budget".
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .terms import Identity, as_identities, as_word


@dataclass(frozen=True)
class Step:
    before: tuple
    after: tuple
    rule: int               # index into the basis
    forward: bool           # True: lhs -> rhs of the rule, False: rhs -> lhs
    position: int           # start of the rewritten factor in ``before``
    substitution: tuple     # sorted (variable, word) pairs

    def __str__(self):
        arrow = "->" if self.forward else "<-"
        subst = ", ".join(f"{v}:={' '.join(w)}" for v, w in self.substitution)
        return (f"{' '.join(self.before)}  =>  {' '.join(self.after)}"
                f"   [rule {self.rule} {arrow} at {self.position}; {subst}]")


@dataclass(frozen=True)
class Derivable:
    goal: Identity
    trace: tuple

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotFoundWithinBudget:
    goal: Identity
    explored: int
    exhausted: bool = False   # True if every word within the length bound was visited

    def __bool__(self):
        return False


@dataclass
class _Rule:
    index: int
    forward: bool
    source: tuple
    target: tuple
    extra: tuple = field(default=())   # target variables not bound by the source


def _rules(basis):
    out = []
    for idx, eps in enumerate(basis):
        if eps.is_zero_form or not eps.is_finite:
            raise ValueError(f"derivations need finite identities, got {eps}")
        a, b = as_word(eps.lhs), as_word(eps.rhs)
        for forward, (src, dst) in ((True, (a, b)), (False, (b, a))):
            extra = tuple(dict.fromkeys(v for v in dst if v not in src))
            out.append(_Rule(idx, forward, src, dst, extra))
    return out


def _match(pattern, w, start, subst):
    """Yield (end, substitution) for matches of ``pattern`` at ``w[start:]``."""
    if not pattern:
        yield start, subst
        return
    v, rest = pattern[0], pattern[1:]
    if v in subst:
        bound = subst[v]
        if w[start:start + len(bound)] == bound:
            yield from _match(rest, w, start + len(bound), subst)
        return
    # every remaining pattern variable needs at least one letter
    room = len(w) - start - len(rest)
    for ln in range(1, room + 1):
        new = dict(subst)
        new[v] = w[start:start + ln]
        yield from _match(rest, w, start + ln, new)


def _words(alphabet, max_len):
    for ln in range(1, max_len + 1):
        yield from itertools.product(alphabet, repeat=ln)


def _instantiate(target, subst):
    out = []
    for v in target:
        out.extend(subst[v])
    return tuple(out)


def _neighbours(w, rules, alphabet, max_length):
    for rule in rules:
        for start in range(len(w)):
            for end, subst in _match(rule.source, w, start, {}):
                base_len = len(w) - (end - start) + sum(
                    len(subst[v]) for v in rule.target if v in subst)
                free = [rule.target.count(v) for v in rule.extra]
                budget = max_length - base_len
                if budget < sum(free):
                    continue
                for choice in itertools.product(*(list(_words(alphabet, budget)) for _ in rule.extra)):
                    if sum(len(c) * f for c, f in zip(choice, free)) > budget:
                        continue
                    full = dict(subst)
                    full.update(zip(rule.extra, choice))
                    new = w[:start] + _instantiate(rule.target, full) + w[end:]
                    yield new, Step(w, new, rule.index, rule.forward, start,
                                    tuple(sorted(full.items())))


def _reverse(step: Step) -> Step:
    return Step(step.after, step.before, step.rule, not step.forward,
                step.position, step.substitution)


def derive_search(basis, goal, max_length=None, max_steps: int = 8,
                  max_nodes: int = 200_000):
    """Search for a derivation of ``goal`` from ``basis``.

    ``max_length`` bounds every intermediate word (default: the longer goal
    side plus one); ``max_steps`` bounds the number of rewrite steps.
    """
    basis = as_identities(basis)
    (goal,) = as_identities(goal)
    if goal.is_zero_form or not goal.is_finite:
        raise ValueError("the goal must be a finite identity")
    start, finish = as_word(goal.lhs), as_word(goal.rhs)
    if max_length is None:
        max_length = max(len(start), len(finish)) + 1
    if start == finish:
        return Derivable(goal, ())
    if max(len(start), len(finish)) > max_length:
        return NotFoundWithinBudget(goal, 0)
    rules = _rules(basis)
    alphabet = tuple(goal.variables)

    # parents[side][word] = step that reached word (None at the root)
    parents = ({start: None}, {finish: None})
    frontiers = (deque([start]), deque([finish]))
    depth = [0, 0]
    explored = 0
    # once one side's component is exhausted the sides can no longer meet
    while frontiers[0] and frontiers[1]:
        if depth[0] + depth[1] >= max_steps:
            return NotFoundWithinBudget(goal, explored)
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        other = 1 - side
        level = frontiers[side]
        nxt = deque()
        for w in level:
            explored += 1
            if explored > max_nodes:
                return NotFoundWithinBudget(goal, explored)
            for new, step in _neighbours(w, rules, alphabet, max_length):
                if new in parents[side]:
                    continue
                parents[side][new] = step
                if new in parents[other]:
                    return Derivable(goal, _join(parents, new, side))
                nxt.append(new)
        frontiers = (nxt, frontiers[1]) if side == 0 else (frontiers[0], nxt)
        depth[side] += 1
    return NotFoundWithinBudget(goal, explored, exhausted=True)


def _chain(parent, w):
    steps = []
    while parent[w] is not None:
        step = parent[w]
        steps.append(step)
        w = step.before
    steps.reverse()
    return steps


def _join(parents, meet, side):
    from_start = _chain(parents[0], meet)
    from_finish = _chain(parents[1], meet)
    return tuple(from_start + [_reverse(s) for s in reversed(from_finish)])


def check_trace(basis, goal, trace) -> bool:
    """Independently re-validate every step of a derivation."""
    basis = as_identities(basis)
    (goal,) = as_identities(goal)
    current = as_word(goal.lhs)
    for step in trace:
        if step.before != current:
            return False
        eps = basis[step.rule]
        a, b = as_word(eps.lhs), as_word(eps.rhs)
        src, dst = (a, b) if step.forward else (b, a)
        subst = dict(step.substitution)
        if any(v not in subst or not subst[v] for v in set(src) | set(dst)):
            return False
        old = _instantiate(src, subst)
        if current[step.position:step.position + len(old)] != old:
            return False
        current = current[:step.position] + _instantiate(dst, subst) + current[step.position + len(old):]
        if current != step.after:
            return False
    return current == as_word(goal.rhs)
