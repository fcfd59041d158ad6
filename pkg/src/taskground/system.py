"""Finite robot transition systems and their complete execution traces.

A system couples nondeterministic dynamics ``trans[(x, u)] -> set of x'``
with a nondeterministic sensor ``obs[(x, u, x')] -> set of y`` defined on
exactly the possible transitions.  A complete trace interleaves states,
actions, and observations consistently with both maps; infinite traces are
represented as lassos (finite prefix plus a repeated cycle), which lose no
generality for the decision procedures because every nonemptiness witness of
an omega-regular construction is a lasso.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Iterable, Mapping, NamedTuple, Optional

from .buchi import BuchiAutomaton, LassoWord, ResourceLimitError


class Letter(NamedTuple):
    """One (state, action, observation) step of a complete trace."""

    x: str
    u: str
    y: str


@dataclass(frozen=True)
class CompleteLassoTrace:
    """Ultimately periodic trace ``prefix . cycle^omega`` of letters, 1-indexed.

    The type carries arbitrary letter sequences, consistent or not; use
    :func:`first_violation` / :func:`is_complete_trace` to decide whether a
    value really is a complete trace of a given system.
    """

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(Letter(*l) for l in self.prefix))
        object.__setattr__(self, "cycle", tuple(Letter(*l) for l in self.cycle))
        if not self.cycle:
            raise ValueError("trace cycle must be nonempty")

    @property
    def word(self) -> LassoWord:
        return LassoWord(self.prefix, self.cycle)

    def at(self, i: int) -> Letter:
        return self.word.at(i)

    @staticmethod
    def from_word(w: LassoWord) -> "CompleteLassoTrace":
        return CompleteLassoTrace(tuple(w.prefix), tuple(w.cycle))


@dataclass(frozen=True, eq=False)
class RobotTransitionSystem:
    """Finite world model: states, actions, observations, dynamics, sensor.

    Invariants (enforced by :func:`validate_system`): every ``(x, u)`` has a
    nonempty successor set, ``obs`` is defined with a nonempty value exactly
    on triples with ``x2 in trans[(x, u)]``, and ``init`` is nonempty.
    """

    states: frozenset
    actions: frozenset
    observations: frozenset
    init: frozenset
    trans: Mapping  # (x, u) -> frozenset of successor states
    obs: Mapping  # (x, u, x2) -> frozenset of observations

    @cached_property
    def alphabet(self) -> frozenset:
        """All (x, u, y) letters, consistent or not."""
        return frozenset(
            Letter(x, u, y) for x in self.states for u in self.actions for y in self.observations
        )


class SystemValidationError(ValueError):
    def __init__(self, violations: list):
        super().__init__("invalid system: " + "; ".join(violations))
        self.violations = violations


def _check_invariants(r: RobotTransitionSystem) -> list:
    problems = []
    if not r.init:
        problems.append("initial state set is empty")
    for x in sorted(r.init - r.states, key=str):
        problems.append(f"initial state {x!r} is not a state")
    for x in sorted(r.states, key=str):
        for u in sorted(r.actions, key=str):
            succ = r.trans.get((x, u))
            if succ is None:
                problems.append(f"transition image missing for ({x!r}, {u!r})")
                continue
            if not succ:
                problems.append(f"transition image empty for ({x!r}, {u!r})")
            for x2 in sorted(succ - r.states, key=str):
                problems.append(f"transition ({x!r}, {u!r}) -> {x2!r} leaves the state set")
            for x2 in sorted(succ & r.states, key=str):
                ys = r.obs.get((x, u, x2))
                if ys is None:
                    problems.append(f"observation set missing for ({x!r}, {u!r}, {x2!r})")
                elif not ys:
                    problems.append(f"observation set empty for ({x!r}, {u!r}, {x2!r})")
                elif not ys <= r.observations:
                    extra = sorted(ys - r.observations, key=str)
                    problems.append(f"observations {extra} on ({x!r}, {u!r}, {x2!r}) are not declared")
    for (x, u) in r.trans:
        if x not in r.states or u not in r.actions:
            problems.append(f"transition key ({x!r}, {u!r}) uses unknown symbols")
    for (x, u, x2) in r.obs:
        if x not in r.states or u not in r.actions or x2 not in r.states:
            problems.append(f"observation key ({x!r}, {u!r}, {x2!r}) uses unknown symbols")
        elif x2 not in r.trans.get((x, u), frozenset()):
            problems.append(f"observation on impossible transition ({x!r}, {u!r}, {x2!r})")
    return problems


def validate_system(candidate) -> RobotTransitionSystem:
    """Build a validated system from a description dict (or re-check one).

    Raises :class:`SystemValidationError` carrying every violation found;
    the caller gets all of them, not just the first.
    """
    if isinstance(candidate, RobotTransitionSystem):
        problems = _check_invariants(candidate)
        if problems:
            raise SystemValidationError(problems)
        return candidate
    problems = []
    for field_name in ("states", "actions", "observations", "init", "trans", "obs"):
        if field_name not in candidate:
            problems.append(f"missing field {field_name!r}")
    if problems:
        raise SystemValidationError(problems)
    for field_name in ("states", "actions", "observations", "init"):
        values = candidate[field_name]
        if len(set(values)) != len(list(values)):
            problems.append(f"duplicate identifiers in {field_name!r}")
    trans = {}
    for entry in candidate["trans"]:
        key = (entry["x"], entry["u"])
        if key in trans:
            problems.append(f"duplicate transition entry for {key!r}")
        trans[key] = frozenset(entry["succ"])
    obs = {}
    for entry in candidate["obs"]:
        key = (entry["x"], entry["u"], entry["x2"])
        if key in obs:
            problems.append(f"duplicate observation entry for {key!r}")
        obs[key] = frozenset(entry["ys"])
    r = RobotTransitionSystem(
        states=frozenset(candidate["states"]),
        actions=frozenset(candidate["actions"]),
        observations=frozenset(candidate["observations"]),
        init=frozenset(candidate["init"]),
        trans=trans,
        obs=obs,
    )
    problems.extend(_check_invariants(r))
    if problems:
        raise SystemValidationError(problems)
    return r


def system_to_json(r: RobotTransitionSystem) -> dict:
    return {
        "states": sorted(r.states, key=str),
        "actions": sorted(r.actions, key=str),
        "observations": sorted(r.observations, key=str),
        "init": sorted(r.init, key=str),
        "trans": [
            {"x": x, "u": u, "succ": sorted(r.trans[(x, u)], key=str)}
            for (x, u) in sorted(r.trans, key=lambda k: tuple(map(str, k)))
        ],
        "obs": [
            {"x": x, "u": u, "x2": x2, "ys": sorted(r.obs[(x, u, x2)], key=str)}
            for (x, u, x2) in sorted(r.obs, key=lambda k: tuple(map(str, k)))
        ],
    }


def trace_to_json(t: CompleteLassoTrace) -> dict:
    return {
        "prefix": [list(l) for l in t.prefix],
        "cycle": [list(l) for l in t.cycle],
    }


def trace_from_json(data: Mapping) -> CompleteLassoTrace:
    return CompleteLassoTrace(
        tuple(tuple(l) for l in data["prefix"]),
        tuple(tuple(l) for l in data["cycle"]),
    )


# ---------------------------------------------------------------------------
# Trace consistency


def first_violation(r: RobotTransitionSystem, t: CompleteLassoTrace) -> Optional[int]:
    """Earliest 1-indexed position at which ``t`` stops being a complete trace.

    Checks symbols, the initial-state condition, and the step conditions
    ``x_{i+1} in trans[(x_i, u_i)]`` and ``y_i in obs[(x_i, u_i, x_{i+1})]``
    over the prefix, one cycle unrolling, and the wrap-around step, which is
    sufficient by periodicity.  Returns None when the trace is complete.
    """
    n = len(t.prefix) + len(t.cycle)
    bad = []
    for i in range(1, n + 1):
        letter = t.at(i)
        if letter.x not in r.states or letter.u not in r.actions or letter.y not in r.observations:
            bad.append(i)
    if t.at(1).x not in r.init:
        bad.append(1)
    for i in range(1, n + 1):
        here = t.at(i)
        there = t.at(i + 1) if i < n else t.at(len(t.prefix) + 1)
        if (here.x, here.u) in r.trans and there.x in r.trans[(here.x, here.u)]:
            if here.y not in r.obs.get((here.x, here.u, there.x), frozenset()):
                bad.append(i)  # the observation at position i is impossible
        else:
            bad.append(min(i + 1, n))  # the state arrived at cannot be reached
    return min(bad) if bad else None


def is_complete_trace(r: RobotTransitionSystem, t: CompleteLassoTrace) -> bool:
    return first_violation(r, t) is None


def omega_safety_automaton(r: RobotTransitionSystem) -> BuchiAutomaton:
    """Deterministic all-accepting automaton (plus rejecting sink) for the
    complete-trace language of ``r``.

    States remember the previous letter so each arriving letter can be
    checked against both cross-letter constraints; the first letter only
    needs its state in the initial set.
    """
    init = ("start",)
    sink = ("sink",)
    letters = sorted(r.alphabet)
    trans = {}
    sink_dest = frozenset({sink})
    for letter in letters:
        trans[(init, letter)] = frozenset({letter}) if letter.x in r.init else sink_dest
        trans[(sink, letter)] = sink_dest
    for prev in letters:
        succ = r.trans.get((prev.x, prev.u), frozenset())
        for letter in letters:
            ok = letter.x in succ and prev.y in r.obs.get((prev.x, prev.u, letter.x), frozenset())
            trans[(prev, letter)] = frozenset({letter}) if ok else sink_dest
    states = frozenset(letters) | {init, sink}
    return BuchiAutomaton(
        alphabet=frozenset(letters),
        states=states,
        initial=frozenset({init}),
        accepting=states - {sink},
        trans=trans,
    )


# ---------------------------------------------------------------------------
# Belief-space companion system


def belief_system(r: RobotTransitionSystem, max_beliefs: int = 4096) -> RobotTransitionSystem:
    """System whose states are the reachable nonempty belief sets of ``r``.

    From belief ``A`` under action ``u``, each observation ``y`` yields the
    union over ``x in A`` of the ``y``-consistent successors; the nonempty
    results are the successor beliefs, and a belief's observation set is the
    set of observations producing it.  Information-state traces of ``r`` are
    state traces of the returned system (after its initial belief).
    """
    from .condense import istate_update

    root = frozenset(r.init)
    states = {root}
    trans = {}
    obs = {}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for u in r.actions:
            by_target: dict = {}
            for y in r.observations:
                target = istate_update(r, a, u, y)
                if target:
                    by_target.setdefault(target, set()).add(y)
            trans[(a, u)] = frozenset(by_target)
            for target, ys in by_target.items():
                obs[(a, u, target)] = frozenset(ys)
                if target not in states:
                    if len(states) >= max_beliefs:
                        raise ResourceLimitError("reachable belief states", max_beliefs)
                    states.add(target)
                    queue.append(target)
    return RobotTransitionSystem(
        states=frozenset(states),
        actions=r.actions,
        observations=r.observations,
        init=frozenset({root}),
        trans=trans,
        obs=obs,
    )


# ---------------------------------------------------------------------------
# Random generation (property-sweep plumbing)


def random_system(
    seed: int, max_states: int, max_actions: int, max_observations: int
) -> RobotTransitionSystem:
    """Seed-deterministic system satisfying every structural invariant."""
    if min(max_states, max_actions, max_observations) < 1:
        raise ValueError("all size bounds must be at least 1")
    rng = Random(seed)
    states = [f"s{i}" for i in range(rng.randint(1, max_states))]
    actions = [f"a{i}" for i in range(rng.randint(1, max_actions))]
    observations = [f"o{i}" for i in range(rng.randint(1, max_observations))]
    trans = {}
    obs = {}
    for x in states:
        for u in actions:
            succ = frozenset(x2 for x2 in states if rng.random() < 0.5) or frozenset({rng.choice(states)})
            trans[(x, u)] = succ
            for x2 in succ:
                ys = frozenset(y for y in observations if rng.random() < 0.6) or frozenset(
                    {rng.choice(observations)}
                )
                obs[(x, u, x2)] = ys
    init = frozenset(x for x in states if rng.random() < 0.5) or frozenset({rng.choice(states)})
    return RobotTransitionSystem(
        states=frozenset(states),
        actions=frozenset(actions),
        observations=frozenset(observations),
        init=init,
        trans=trans,
        obs=obs,
    )


class LassoClosureError(RuntimeError):
    """No cycle could be closed within the retry budget; retry with longer lengths."""


def random_complete_lasso(
    r: RobotTransitionSystem, seed: int, prefix_len: int, cycle_len: int, retries: int = 200
) -> CompleteLassoTrace:
    """Seed-deterministic complete trace with the requested lasso shape.

    Walks the dynamics forward, then closes the cycle by picking a final
    action that can return to the cycle's first state; each failed closure
    retries the whole walk with fresh seed-derived choices.
    """
    if cycle_len < 1:
        raise ValueError("cycle length must be at least 1")
    rng = Random(seed)
    actions = sorted(r.actions)
    for _ in range(retries):
        x = rng.choice(sorted(r.init))
        letters = []
        ok = True
        for step in range(prefix_len + cycle_len):
            closing = step == prefix_len + cycle_len - 1
            if closing:
                # wrap back to the state the cycle's first letter carries
                target = x if cycle_len == 1 else letters[prefix_len].x
                candidates = [u for u in actions if target in r.trans[(x, u)]]
                if not candidates:
                    ok = False
                    break
                u = rng.choice(candidates)
                x2 = target
            else:
                u = rng.choice(actions)
                x2 = rng.choice(sorted(r.trans[(x, u)]))
            y = rng.choice(sorted(r.obs[(x, u, x2)]))
            letters.append(Letter(x, u, y))
            x = x2
        if not ok:
            continue
        trace = CompleteLassoTrace(tuple(letters[:prefix_len]), tuple(letters[prefix_len:]))
        if is_complete_trace(r, trace):
            return trace
    raise LassoClosureError(
        f"could not close a ({prefix_len}, {cycle_len}) lasso in {retries} attempts"
    )
