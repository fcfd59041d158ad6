"""Nondeterministic Büchi automata over finite alphabets of opaque letters.

Letters are arbitrary hashable values: (state, action, observation) triples,
(action, observation) pairs, proposition sets, or pairs of letters for
two-track products.  Transition maps are stored sparsely; a missing
(state, letter) key means the empty successor set, so every automaton is
total as a function even when the stored table is not.

Everything here is pure: automata are never mutated after construction, and
every decision procedure that reports a negative answer also returns a lasso
certificate that can be re-checked with :func:`member`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .system import RobotTransitionSystem

Letter = Hashable
State = Hashable

_EMPTY: frozenset = frozenset()


class ResourceLimitError(RuntimeError):
    """A configurable size guard tripped before the operation finished."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what} exceeded the configured limit of {limit}")
        self.what = what
        self.limit = limit


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word ``prefix . cycle^omega``, 1-indexed."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def at(self, i: int) -> Letter:
        """Letter at position ``i >= 1`` of the infinite word."""
        if i < 1:
            raise IndexError("lasso positions start at 1")
        p = len(self.prefix)
        if i <= p:
            return self.prefix[i - 1]
        return self.cycle[(i - p - 1) % len(self.cycle)]

    def unroll(self, n: int) -> tuple:
        return tuple(self.at(i) for i in range(1, n + 1))

    def letters(self) -> frozenset:
        return frozenset(self.prefix) | frozenset(self.cycle)


def lasso_equal(a: LassoWord, b: LassoWord) -> bool:
    """Whether two lassos denote the same infinite word.

    Agreement on max prefix length plus one lcm-of-cycles window pins the
    whole word, since past the prefixes both words are periodic.
    """
    n = max(len(a.prefix), len(b.prefix)) + math.lcm(len(a.cycle), len(b.cycle))
    return a.unroll(n) == b.unroll(n)


@dataclass(frozen=True, eq=False)
class BuchiAutomaton:
    """Nondeterministic Büchi automaton.

    ``trans`` maps ``(state, letter)`` to a frozenset of successors; pairs
    absent from the mapping have no successors.  Acceptance: a run is
    accepting iff it visits ``accepting`` infinitely often.
    """

    alphabet: frozenset
    states: frozenset
    initial: frozenset
    accepting: frozenset
    trans: Mapping

    def __post_init__(self):
        if not self.initial:
            raise ValueError("automaton needs at least one initial state")
        if not self.initial <= self.states or not self.accepting <= self.states:
            raise ValueError("initial/accepting states must be drawn from states")

    def succ(self, q: State, a: Letter) -> frozenset:
        return self.trans.get((q, a), _EMPTY)

    @cached_property
    def outgoing(self) -> dict:
        """Per-state view of ``trans``: state -> {letter -> successors}."""
        out: dict = {q: {} for q in self.states}
        for (q, a), dests in self.trans.items():
            if dests:
                out[q][a] = dests
        return out


def universal_automaton(alphabet: Iterable[Letter]) -> BuchiAutomaton:
    """One accepting state looping on every letter: accepts all infinite words."""
    alphabet = frozenset(alphabet)
    q = "acc"
    return BuchiAutomaton(
        alphabet=alphabet,
        states=frozenset({q}),
        initial=frozenset({q}),
        accepting=frozenset({q}),
        trans={(q, a): frozenset({q}) for a in alphabet},
    )


def empty_automaton(alphabet: Iterable[Letter]) -> BuchiAutomaton:
    """One non-accepting state with no transitions: accepts nothing."""
    q = "dead"
    return BuchiAutomaton(
        alphabet=frozenset(alphabet),
        states=frozenset({q}),
        initial=frozenset({q}),
        accepting=frozenset(),
        trans={},
    )


def lasso_automaton(w: LassoWord, alphabet: Iterable[Letter]) -> BuchiAutomaton:
    """Deterministic automaton whose language is exactly ``{w}``."""
    alphabet = frozenset(alphabet)
    extra = w.letters() - alphabet
    if extra:
        raise ValueError(f"lasso letters {sorted(map(repr, extra))} outside alphabet")
    n = len(w.prefix) + len(w.cycle)
    p = len(w.prefix)
    trans = {}
    for j in range(n):
        trans[(j, w.at(j + 1))] = frozenset({j + 1 if j + 1 < n else p})
    return BuchiAutomaton(
        alphabet=alphabet,
        states=frozenset(range(n)),
        initial=frozenset({0}),
        accepting=frozenset(range(n)),
        trans=trans,
    )


# ---------------------------------------------------------------------------
# Emptiness, membership, and witnesses


def _tarjan_sccs(nodes: list, succs: Mapping) -> list:
    """Iterative Tarjan; returns SCCs as lists, in reverse topological order."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    sccs: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succs.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succs.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def accepting_lasso(a: BuchiAutomaton) -> Optional[LassoWord]:
    """A lasso in ``L(a)``, or None when the language is empty.

    Reachable accepting-cycle search: BFS from the initial states for the
    prefix, SCC decomposition for the cycle.
    """
    parent: dict = {q: None for q in a.initial}
    order = sorted(a.initial, key=repr)
    queue = deque(order)
    succs: dict = {}
    while queue:
        q = queue.popleft()
        nbrs = []
        for letter, dests in a.outgoing.get(q, {}).items():
            for d in dests:
                nbrs.append(d)
                if d not in parent:
                    parent[d] = (q, letter)
                    queue.append(d)
        succs[q] = nbrs
    reachable = list(parent)
    for comp in _tarjan_sccs(reachable, succs):
        comp_set = set(comp)
        has_edge = any(d in comp_set for q in comp for d in succs.get(q, ()))
        hit = next((q for q in comp if q in a.accepting), None)
        if hit is None or not has_edge:
            continue
        # cycle: shortest non-empty path hit -> hit inside the SCC
        back: dict = {}
        frontier = deque()
        for letter, dests in a.outgoing.get(hit, {}).items():
            for d in dests:
                if d in comp_set and d not in back:
                    back[d] = (hit, letter)
                    frontier.append(d)
        cycle_letters = None
        if hit in back:
            cycle_letters = [back[hit][1]]
        else:
            while frontier:
                q = back_q = frontier.popleft()
                if q == hit:
                    break
                for letter, dests in a.outgoing.get(q, {}).items():
                    for d in dests:
                        if d in comp_set and d not in back:
                            back[d] = (q, letter)
                            frontier.append(d)
            if hit in back:
                letters = []
                cur = hit
                while True:
                    prev, letter = back[cur]
                    letters.append(letter)
                    cur = prev
                    if cur == hit:
                        break
                cycle_letters = list(reversed(letters))
        if cycle_letters is None:
            continue
        prefix_letters = []
        cur = hit
        while parent[cur] is not None:
            prev, letter = parent[cur]
            prefix_letters.append(letter)
            cur = prev
        prefix_letters.reverse()
        return LassoWord(tuple(prefix_letters), tuple(cycle_letters))
    return None


def is_empty(a: BuchiAutomaton) -> bool:
    return accepting_lasso(a) is None


def member(a: BuchiAutomaton, w: LassoWord) -> bool:
    """Whether ``prefix . cycle^omega`` is in ``L(a)``."""
    extra = w.letters() - a.alphabet
    if extra:
        raise ValueError(f"word letters {sorted(map(repr, extra))} outside automaton alphabet")
    return not is_empty(intersect(a, lasso_automaton(w, a.alphabet)))


# ---------------------------------------------------------------------------
# Products


def intersect(a: BuchiAutomaton, b: BuchiAutomaton) -> BuchiAutomaton:
    """Language intersection; explores only reachable product states.

    When one side accepts in every state the usual two-phase counter is
    unnecessary, so the product stays a plain pair automaton.
    """
    if a.alphabet != b.alphabet:
        raise ValueError("intersection needs identical alphabets")
    a_trivial = a.accepting >= a.states
    b_trivial = b.accepting >= b.states
    flagged = not (a_trivial or b_trivial)
    trans: dict = {}
    accepting: set = set()
    if flagged:
        init = {(qa, qb, 1) for qa in a.initial for qb in b.initial}
    else:
        init = {(qa, qb) for qa in a.initial for qb in b.initial}
    states = set(init)
    queue = deque(init)
    # each (state, letter) pair is produced exactly once by the BFS, so the
    # successor sets can be frozen in one shot
    while queue:
        s = queue.popleft()
        if flagged:
            qa, qb, flag = s
            if flag == 2 and qb in b.accepting:
                accepting.add(s)
                nflag = 1
            elif flag == 1 and qa in a.accepting:
                nflag = 2
            else:
                nflag = flag
        else:
            qa, qb = s
            if (qa in a.accepting) if b_trivial else (qb in b.accepting):
                accepting.add(s)
        oa, ob = a.outgoing.get(qa, {}), b.outgoing.get(qb, {})
        small, other = (oa, ob) if len(oa) <= len(ob) else (ob, oa)
        for letter in small:
            if letter not in other:
                continue
            if flagged:
                bucket = frozenset((da, db, nflag) for da in oa[letter] for db in ob[letter])
            else:
                bucket = frozenset((da, db) for da in oa[letter] for db in ob[letter])
            trans[(s, letter)] = bucket
            for dest in bucket:
                if dest not in states:
                    states.add(dest)
                    queue.append(dest)
    return BuchiAutomaton(
        alphabet=a.alphabet,
        states=frozenset(states),
        initial=frozenset(init),
        accepting=frozenset(accepting),
        trans=trans,
    )


def trim(a: BuchiAutomaton) -> BuchiAutomaton:
    """Restrict to states that lie on some accepting run (language-preserving).

    Keeps states reachable from the initial set that can still reach a cycle
    through an accepting state.  If nothing survives, a canonical empty
    automaton over the same alphabet is returned.
    """
    reachable = set(a.initial)
    queue = deque(a.initial)
    succs: dict = {}
    preds: dict = {}
    while queue:
        q = queue.popleft()
        nbrs = set()
        for dests in a.outgoing.get(q, {}).values():
            nbrs |= dests
        succs[q] = nbrs
        for d in nbrs:
            preds.setdefault(d, set()).add(q)
            if d not in reachable:
                reachable.add(d)
                queue.append(d)
    live_roots = set()
    for comp in _tarjan_sccs(list(reachable), succs):
        comp_set = set(comp)
        if not comp_set & a.accepting:
            continue
        if any(d in comp_set for q in comp for d in succs.get(q, ())):
            live_roots |= comp_set
    keep = set(live_roots)
    queue = deque(live_roots)
    while queue:
        q = queue.popleft()
        for p in preds.get(q, ()):
            if p not in keep:
                keep.add(p)
                queue.append(p)
    keep &= reachable
    if not keep & a.initial:
        return empty_automaton(a.alphabet)
    trans = {
        (q, letter): kept
        for (q, letter), dests in a.trans.items()
        if q in keep
        for kept in [dests & keep]
        if kept
    }
    return BuchiAutomaton(
        alphabet=a.alphabet,
        states=frozenset(keep),
        initial=frozenset(a.initial & keep),
        accepting=frozenset(a.accepting & keep),
        trans=trans,
    )


# ---------------------------------------------------------------------------
# Complementation (rank-based, tight rankings)


def _tight_rankings(dom: tuple, acc_mask: tuple, caps: tuple):
    """All tight level rankings of ``dom`` with per-state caps.

    A ranking is tight when its maximum is odd and every odd value up to the
    maximum is used.  States under ``acc_mask`` only take even ranks.
    """
    k = len(dom)
    if k == 0:
        return
    results = []
    assignment = [0] * k

    def rec(i):
        if i == k:
            ranks = assignment
            top = max(ranks)
            if top % 2 == 0:
                return
            used = set(ranks)
            if all(o in used for o in range(1, top + 1, 2)):
                results.append(tuple(ranks))
            return
        cap = caps[i]
        if acc_mask[i]:
            values = range(0, cap + 1, 2)
        else:
            values = range(0, cap + 1)
        for v in values:
            assignment[i] = v
            rec(i + 1)

    rec(0)
    return results


def complement(a: BuchiAutomaton, max_states: int = 12, max_built: int = 200_000) -> BuchiAutomaton:
    """Automaton for ``alphabet^omega \\ L(a)``.

    Rank-based construction: a subset-tracking waiting phase that may jump,
    on any transition, to a phase of tight level rankings with non-increasing
    ranks and an even-rank obligation set that must empty infinitely often.
    ``max_states`` guards the (trimmed) input size since the construction is
    exponential; ``max_built`` caps the states actually constructed.
    """
    a = trim(a)
    idx = {q: i for i, q in enumerate(sorted(a.states, key=repr))}
    n = len(idx)
    if n > max_states:
        raise ResourceLimitError("complement input states", max_states)
    letters = sorted(a.alphabet, key=repr)
    acc = frozenset(idx[q] for q in a.accepting if q in idx)
    delta: dict = {}
    for (q, letter), dests in a.trans.items():
        delta[(idx[q], letter)] = frozenset(idx[d] for d in dests)
    max_rank = 2 * n - 1 if n else 1

    def succ_set(src: frozenset, letter) -> frozenset:
        out = set()
        for q in src:
            out |= delta.get((q, letter), _EMPTY)
        return frozenset(out)

    jump_cache: dict = {}

    def jump_rankings(dom: frozenset):
        if dom not in jump_cache:
            dom_t = tuple(sorted(dom))
            mask = tuple(q in acc for q in dom_t)
            caps = tuple(max_rank - 1 if m else max_rank for m in mask)
            jump_cache[dom] = [dict(zip(dom_t, r)) for r in _tight_rankings(dom_t, mask, caps) or []]
        return jump_cache[dom]

    def ranked_succs(g: dict, letter):
        dom2 = succ_set(frozenset(g), letter)
        if not dom2:
            return None, []
        dom_t = tuple(sorted(dom2))
        caps = []
        for q2 in dom_t:
            cap = min(g[q] for q in g if q2 in delta.get((q, letter), _EMPTY))
            if q2 in acc:
                cap -= cap % 2
            caps.append(cap)
        mask = tuple(q in acc for q in dom_t)
        options = _tight_rankings(dom_t, mask, tuple(caps)) or []
        return dom_t, [dict(zip(dom_t, r)) for r in options]

    def freeze(g: dict):
        return tuple(sorted(g.items()))

    empty_state = ("S", frozenset())
    init = ("S", frozenset(idx[q] for q in a.initial))
    states = {init}
    trans: dict = {}
    accepting = {empty_state} if init == empty_state else set()
    queue = deque([init])
    while queue:
        s = queue.popleft()
        if len(states) > max_built:
            raise ResourceLimitError("complement constructed states", max_built)
        kind = s[0]
        for letter in letters:
            dests = set()
            if kind == "S":
                src = s[1]
                if not src:
                    dests.add(empty_state)
                else:
                    nxt = succ_set(src, letter)
                    dests.add(("S", nxt))
                    for g in jump_rankings(nxt):
                        dests.add(("R", freeze(g), frozenset(q for q, r in g.items() if r % 2 == 0)))
            else:
                g = dict(s[1])
                obligations = s[2]
                dom_t, options = ranked_succs(g, letter)
                if dom_t is None:
                    dests.add(empty_state)
                else:
                    for g2 in options:
                        evens = frozenset(q for q, r in g2.items() if r % 2 == 0)
                        if obligations:
                            carried = succ_set(obligations, letter)
                            o2 = frozenset(q for q in carried if q in g2 and g2[q] % 2 == 0)
                        else:
                            o2 = evens
                        dests.add(("R", freeze(g2), o2))
            if dests:
                trans[(s, letter)] = frozenset(dests)
            for d in dests:
                if d not in states:
                    states.add(d)
                    if d == empty_state or (d[0] == "R" and not d[2]):
                        accepting.add(d)
                    queue.append(d)
    if init[0] == "R" and not init[2]:  # unreachable in practice; init is phase S
        accepting.add(init)
    return BuchiAutomaton(
        alphabet=a.alphabet,
        states=frozenset(states),
        initial=frozenset({init}),
        accepting=frozenset(accepting),
        trans=trans,
    )


def inclusion_counterexample(
    a: BuchiAutomaton, b: BuchiAutomaton, max_complement_states: int = 12
) -> Optional[LassoWord]:
    """A lasso in ``L(a) \\ L(b)``, or None when ``L(a) <= L(b)``."""
    if a.alphabet != b.alphabet:
        raise ValueError("inclusion check needs identical alphabets")
    return accepting_lasso(intersect(a, complement(b, max_states=max_complement_states)))


def includes(a: BuchiAutomaton, b: BuchiAutomaton, max_complement_states: int = 12) -> bool:
    """Whether ``L(b) <= L(a)``."""
    return inclusion_counterexample(b, a, max_complement_states) is None


def equivalent(a: BuchiAutomaton, b: BuchiAutomaton, max_complement_states: int = 12) -> bool:
    return includes(a, b, max_complement_states) and includes(b, a, max_complement_states)


# ---------------------------------------------------------------------------
# Transducer image / preimage

def inverse_image(a: BuchiAutomaton, d) -> BuchiAutomaton:
    """Automaton for ``{ w : d(w) in L(a) }`` over ``d``'s input alphabet.

    ``d`` is a deterministic letter-to-letter transducer (see
    :class:`taskground.condense.CondenserTransducer`) whose outputs must lie
    in ``a``'s alphabet.
    """
    missing = frozenset(d.output_alphabet) - a.alphabet
    if missing:
        raise ValueError(f"transducer outputs {sorted(map(repr, missing))} outside automaton alphabet")
    trans: dict = {}
    init = {(qa, d.initial) for qa in a.initial}
    states = set(init)
    queue = deque(init)
    while queue:
        qa, sd = queue.popleft()
        for letter in d.input_alphabet:
            sd2, out = d.step[(sd, letter)]
            dests = a.succ(qa, out)
            if not dests:
                continue
            bucket = frozenset((qa2, sd2) for qa2 in dests)
            trans[((qa, sd), letter)] = bucket
            for s in bucket:
                if s not in states:
                    states.add(s)
                    queue.append(s)
    return BuchiAutomaton(
        alphabet=frozenset(d.input_alphabet),
        states=frozenset(states),
        initial=frozenset(init),
        accepting=frozenset(s for s in states if s[0] in a.accepting),
        trans=trans,
    )


def image(a: BuchiAutomaton, d) -> BuchiAutomaton:
    """Automaton for ``{ d(w) : w in L(a) }`` over ``d``'s output alphabet.

    The input letter is projected away: the result guesses, for each output
    letter, which input letter produced it.
    """
    missing = frozenset(d.input_alphabet) - a.alphabet
    if missing:
        raise ValueError("automaton alphabet must cover the transducer input alphabet")
    trans: dict = {}
    init = {(qa, d.initial) for qa in a.initial}
    states = set(init)
    queue = deque(init)
    while queue:
        qa, sd = queue.popleft()
        for letter, dests in a.outgoing.get(qa, {}).items():
            sd2, out = d.step[(sd, letter)]
            bucket = frozenset((qa2, sd2) for qa2 in dests)
            key = ((qa, sd), out)
            merged = trans.get(key, _EMPTY) | bucket
            trans[key] = merged
            for s in bucket:
                if s not in states:
                    states.add(s)
                    queue.append(s)
    return BuchiAutomaton(
        alphabet=frozenset(d.output_alphabet),
        states=frozenset(states),
        initial=frozenset(init),
        accepting=frozenset(s for s in states if s[0] in a.accepting),
        trans=trans,
    )


# ---------------------------------------------------------------------------
# Product of a state-letter automaton with a robot transition system

_RTS_INIT = ("rts-product-init",)


def rts_product(a: BuchiAutomaton, r: "RobotTransitionSystem") -> BuchiAutomaton:
    """Action/observation-letter automaton tracking ``a`` along consistent runs.

    ``a`` reads system states as letters.  The product picks an initial state
    nondeterministically, advances ``a`` on it, and then, for each
    ``(action, observation)`` letter, guesses a successor state consistent
    with the transition and observation maps and advances ``a`` on that.  Its
    language is the action/observation projection of the complete traces
    whose state sequence lies in ``L(a)``.
    """
    if frozenset(a.alphabet) != frozenset(r.states):
        raise ValueError("automaton alphabet must be exactly the system state set")
    uy_letters = frozenset((u, y) for u in r.actions for y in r.observations)

    def consistent(x, u, y):
        return [x2 for x2 in r.trans[(x, u)] if y in r.obs[(x, u, x2)]]

    seeds = set()
    for x1 in r.init:
        for q0 in a.initial:
            for q1 in a.succ(q0, x1):
                seeds.add((q1, x1))
    trans: dict = {}
    states = {_RTS_INIT} | seeds
    queue = deque(seeds)
    reached: dict = {}
    for u, y in sorted(uy_letters):
        bucket = set()
        for q1, x1 in seeds:
            for x2 in consistent(x1, u, y):
                for q2 in a.succ(q1, x2):
                    bucket.add((q2, x2))
        if bucket:
            trans[(_RTS_INIT, (u, y))] = frozenset(bucket)
            for s in bucket:
                if s not in states:
                    states.add(s)
                    queue.append(s)
    while queue:
        s = queue.popleft()
        q, x = s
        for u, y in uy_letters:
            bucket = set()
            for x2 in consistent(x, u, y):
                for q2 in a.succ(q, x2):
                    bucket.add((q2, x2))
            if bucket:
                trans[(s, (u, y))] = frozenset(bucket)
                for t in bucket:
                    if t not in states:
                        states.add(t)
                        queue.append(t)
    return BuchiAutomaton(
        alphabet=uy_letters,
        states=frozenset(states),
        initial=frozenset({_RTS_INIT}),
        accepting=frozenset(s for s in states if s != _RTS_INIT and s[0] in a.accepting),
        trans=trans,
    )


# ---------------------------------------------------------------------------
# Counter-freeness


@dataclass(frozen=True)
class CounterWitness:
    """A word that cyclically permutes >= 2 states without fixing them.

    ``word`` maps ``states[i]`` into ``states[(i+1) % len(states)]`` while no
    ``word``-path returns ``states[0]`` to itself in one step.
    """

    word: tuple
    states: tuple


def find_counter(a: BuchiAutomaton, max_monoid: int = 100_000) -> Optional[CounterWitness]:
    """Search the transition monoid for a counter.

    Enumerates the monoid of Boolean transition matrices generated by the
    letter matrices; an element ``M`` witnesses a counter iff some state
    returns to itself under a power of ``M`` but not under ``M`` itself.
    """
    order = sorted(a.states, key=repr)
    idx = {q: i for i, q in enumerate(order)}
    n = len(order)
    letters = sorted(a.alphabet, key=repr)
    gens = []
    for letter in letters:
        m = np.zeros((n, n), dtype=np.uint8)
        for (q, la), dests in a.trans.items():
            if la == letter:
                for d in dests:
                    m[idx[q], idx[d]] = 1
        gens.append((letter, m))

    def check(m: np.ndarray, word: tuple) -> Optional[CounterWitness]:
        adj = [np.flatnonzero(m[i]) for i in range(n)]
        for q in range(n):
            if m[q, q]:
                continue
            # any return path has length >= 2 since the self-loop is absent
            back = {}
            frontier = deque()
            for d in adj[q]:
                if d not in back:
                    back[int(d)] = q
                    frontier.append(int(d))
            found = False
            while frontier:
                v = frontier.popleft()
                if v == q:
                    found = True
                    break
                for d in adj[v]:
                    if int(d) not in back:
                        back[int(d)] = v
                        frontier.append(int(d))
            if found:
                path = [q]
                cur = back[q]
                while cur != q:
                    path.append(cur)
                    cur = back[cur]
                path.reverse()  # q, p1, ..., p_{m-1} following M-steps
                return CounterWitness(word=word, states=tuple(order[i] for i in path))
        return None

    seen: dict = {}
    queue = deque()
    for letter, m in gens:
        key = m.tobytes()
        if key not in seen:
            seen[key] = (m, (letter,))
            queue.append(key)
    while queue:
        key = queue.popleft()
        m, word = seen[key]
        hit = check(m, word)
        if hit is not None:
            return hit
        for letter, g in gens:
            m2 = (m.astype(np.uint16) @ g) > 0
            m2 = m2.astype(np.uint8)
            k2 = m2.tobytes()
            if k2 not in seen:
                if len(seen) >= max_monoid:
                    raise ResourceLimitError("transition monoid elements", max_monoid)
                seen[k2] = (m2, word + (letter,))
                queue.append(k2)
    return None


def is_counter_free(a: BuchiAutomaton, max_monoid: int = 100_000) -> bool:
    return find_counter(a, max_monoid) is None


# ---------------------------------------------------------------------------
# Rendering and serialization


def canonical_label(v) -> str:
    """Deterministic printable form for states and letters (sets are sorted)."""
    if isinstance(v, frozenset) or isinstance(v, set):
        return "{" + ",".join(sorted(canonical_label(x) for x in v)) + "}"
    if isinstance(v, tuple):
        return "(" + ",".join(canonical_label(x) for x in v) + ")"
    return str(v)


def to_dot(a: BuchiAutomaton, name: str = "buchi") -> str:
    """GraphViz text with a stable state ordering (fit for golden files)."""
    order = sorted(a.states, key=canonical_label)
    ids = {q: f"q{i}" for i, q in enumerate(order)}
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in order:
        shape = "doublecircle" if q in a.accepting else "circle"
        label = canonical_label(q).replace('"', "'")
        lines.append(f'  {ids[q]} [shape={shape} label="{label}"];')
    for i, q in enumerate(sorted(a.initial, key=canonical_label)):
        lines.append(f"  init{i} [shape=point];")
        lines.append(f"  init{i} -> {ids[q]};")
    grouped: dict = {}
    for (q, letter), dests in a.trans.items():
        for d in dests:
            grouped.setdefault((q, d), []).append(canonical_label(letter))
    for (q, d) in sorted(grouped, key=lambda e: (canonical_label(e[0]), canonical_label(e[1]))):
        label = ", ".join(sorted(grouped[(q, d)])).replace('"', "'")
        lines.append(f'  {ids[q]} -> {ids[d]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _letter_to_json(letter):
    if isinstance(letter, tuple):
        return list(letter)
    return letter


def _letter_from_json(raw):
    if isinstance(raw, list):
        return tuple(raw)
    return raw


def automaton_to_json(a: BuchiAutomaton) -> dict:
    """JSON-friendly dict; letters must be strings or tuples of strings."""
    edges = []
    for (q, letter), dests in a.trans.items():
        for d in dests:
            edges.append({"from": canonical_label(q), "letter": _letter_to_json(letter), "to": canonical_label(d)})
    edges.sort(key=lambda e: (e["from"], str(e["letter"]), e["to"]))
    return {
        "alphabet": sorted((_letter_to_json(x) for x in a.alphabet), key=str),
        "states": sorted(canonical_label(q) for q in a.states),
        "initial": sorted(canonical_label(q) for q in a.initial),
        "accepting": sorted(canonical_label(q) for q in a.accepting),
        "trans": edges,
    }


def automaton_from_json(data: Mapping) -> BuchiAutomaton:
    states = frozenset(data["states"])
    trans: dict = {}
    for edge in data["trans"]:
        key = (edge["from"], _letter_from_json(edge["letter"]))
        trans[key] = trans.get(key, _EMPTY) | {edge["to"]}
    return BuchiAutomaton(
        alphabet=frozenset(_letter_from_json(x) for x in data["alphabet"]),
        states=states,
        initial=frozenset(data["initial"]),
        accepting=frozenset(data["accepting"]),
        trans=trans,
    )
