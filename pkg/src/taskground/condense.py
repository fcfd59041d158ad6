"""Condensers: limited views of complete traces, as functions and transducers.

Three views matter here: the state projection, the action/observation
projection, and the nondeterministic information-state (I-state) sequence
obtained by filtering transition successors against received observations.
Each also has a propositional grounding that turns a trace into a sequence of
proposition sets for LTL evaluation; groundings add the reserved marker
proposition ``@start`` at position 1 only.

Every view is realized twice: as a direct function on lasso traces and as a
deterministic letter-to-letter transducer with an explicit step table, which
is what the automata-theoretic decision procedures consume.  The two
realizations agree on all lassos (tested property).

I-states are plain frozensets of system states.  On complete traces they are
never empty; the transducers are nevertheless total over all letter
sequences, where the empty set can appear and persists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, TYPE_CHECKING

from .buchi import LassoWord, ResourceLimitError
from .ltl import START_PROP

if TYPE_CHECKING:
    from .system import CompleteLassoTrace, RobotTransitionSystem

IState = frozenset

CONDENSER_KINDS = ("state", "ao", "istate")

_ALIASES = {
    "state": "state",
    "ao": "ao",
    "action_observation": "ao",
    "istate": "istate",
}


def canonical_kind(kind: str) -> str:
    try:
        return _ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown condenser kind {kind!r}; expected one of {CONDENSER_KINDS}")


def f_consistent_successors(r: "RobotTransitionSystem", x, u, y) -> frozenset:
    """Successors of ``x`` under ``u`` that could have produced observation ``y``."""
    return frozenset(x2 for x2 in r.trans.get((x, u), frozenset()) if y in r.obs.get((x, u, x2), frozenset()))


def istate_update(r: "RobotTransitionSystem", prior: IState, u, y) -> IState:
    """One belief step: union of consistent successors over the prior set."""
    out = set()
    for x in prior:
        out |= f_consistent_successors(r, x, u, y)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Direct trace-level condensers


def condense_state(t: "CompleteLassoTrace") -> LassoWord:
    """Positionwise state projection; the lasso shape is preserved."""
    return LassoWord(tuple(l.x for l in t.prefix), tuple(l.x for l in t.cycle))


def condense_history(t: "CompleteLassoTrace") -> LassoWord:
    """Positionwise (action, observation) projection."""
    return LassoWord(tuple((l.u, l.y) for l in t.prefix), tuple((l.u, l.y) for l in t.cycle))


def condense_ndet(r: "RobotTransitionSystem", t: "CompleteLassoTrace") -> LassoWord:
    """I-state sequence of ``t``, rolled back into a lasso.

    Output position ``k`` is the belief after the first ``k`` letters,
    starting from the initial-state set; the initial belief itself is not
    emitted.  Because the update is finite-state, the output is ultimately
    periodic: the roll point is found by detecting a repeated
    (cycle-position, belief) pair.
    """
    return apply_to_lasso(condenser_transducer(r, "istate"), t.word)


def ground(r: "RobotTransitionSystem", t: "CompleteLassoTrace", grounding: str) -> LassoWord:
    """Proposition-set sequence of ``t`` under the chosen grounding.

    state: ``{x:<state>}`` per position; ao: ``{u:<action>, y:<obs>}``;
    istate: one proposition per plausible state.  ``@start`` is added at
    position 1 only.
    """
    return apply_to_lasso(condenser_transducer(r, grounding, grounded=True), t.word)


# ---------------------------------------------------------------------------
# Transducers


@dataclass(frozen=True, eq=False)
class CondenserTransducer:
    """Deterministic letter-to-letter machine with an explicit step table.

    ``step`` maps ``(state, input letter)`` to ``(next state, output)`` and
    is total on the input alphabet, so the machine is defined on every
    infinite input word, consistent or not.  Output at position ``i``
    depends only on the input prefix up to ``i``.
    """

    input_alphabet: frozenset
    output_alphabet: frozenset
    initial: object
    step: Mapping

    def same_table(self, other: "CondenserTransducer") -> bool:
        return (
            self.input_alphabet == other.input_alphabet
            and self.initial == other.initial
            and dict(self.step) == dict(other.step)
        )


def apply_to_lasso(d: CondenserTransducer, w: LassoWord) -> LassoWord:
    """Run ``d`` on ``w`` and roll the output back into a lasso.

    The output becomes periodic once a (position-in-cycle, machine-state)
    pair repeats; the outputs between the two occurrences form the cycle.
    """
    state = d.initial
    outputs = []
    for letter in w.prefix:
        state, out = d.step[(state, letter)]
        outputs.append(out)
    seen = {}
    k = len(w.cycle)
    pos = 0
    while True:
        key = (pos % k, state)
        if key in seen:
            start = seen[key]
            return LassoWord(tuple(outputs[:start]), tuple(outputs[start:]))
        seen[key] = len(outputs)
        state, out = d.step[(state, w.cycle[pos % k])]
        outputs.append(out)
        pos += 1


def _props(kind: str, *names) -> frozenset:
    return frozenset(f"{kind}:{n}" for n in names)


def condenser_transducer(
    r: "RobotTransitionSystem", kind: str, grounded: bool = False, max_beliefs: int = 4096
) -> CondenserTransducer:
    """Build the condenser of the given kind as an explicit transducer.

    ``state`` and ``ao`` are stateless projections; ``istate`` carries the
    current belief and emits the updated one.  With ``grounded=True`` outputs
    are proposition sets and a first-step flag injects ``@start`` at
    position 1.
    """
    kind = canonical_kind(kind)
    letters = sorted(r.alphabet)
    step: dict = {}
    if kind == "state":
        unit = "."
        for letter in letters:
            out = _props("x", letter.x) if grounded else letter.x
            step[(unit, letter)] = (unit, out)
        initial = unit
    elif kind == "ao":
        unit = "."
        for letter in letters:
            out = _props("u", letter.u) | _props("y", letter.y) if grounded else (letter.u, letter.y)
            step[(unit, letter)] = (unit, out)
        initial = unit
    else:
        root = frozenset(r.init)
        beliefs = {root, frozenset()}
        queue = [root]
        update_cache: dict = {}
        while queue:
            belief = queue.pop()
            for u in sorted(r.actions):
                for y in sorted(r.observations):
                    nxt = update_cache.get((belief, u, y))
                    if nxt is None:
                        nxt = istate_update(r, belief, u, y)
                        update_cache[(belief, u, y)] = nxt
                    if nxt not in beliefs:
                        if len(beliefs) >= max_beliefs:
                            raise ResourceLimitError("reachable belief states", max_beliefs)
                        beliefs.add(nxt)
                        queue.append(nxt)
        for belief in beliefs:
            for letter in letters:
                key = (belief, letter.u, letter.y)
                nxt = update_cache.get(key)
                if nxt is None:
                    nxt = istate_update(r, belief, letter.u, letter.y)
                    update_cache[key] = nxt
                out = frozenset(f"x:{x}" for x in nxt) if grounded else nxt
                step[(belief, letter)] = (nxt, out)
        initial = root
    d = CondenserTransducer(
        input_alphabet=frozenset(letters),
        output_alphabet=frozenset(out for (_, out) in step.values()),
        initial=initial,
        step=step,
    )
    if grounded:
        d = _with_start_flag(d)
    return d


def _with_start_flag(d: CondenserTransducer) -> CondenserTransducer:
    """Wrap a proposition-emitting transducer so position 1 gains ``@start``."""
    step: dict = {}
    for (state, letter), (nxt, out) in d.step.items():
        step[((state, True), letter)] = ((nxt, False), frozenset(out) | {START_PROP})
        step[((state, False), letter)] = ((nxt, False), frozenset(out))
    return CondenserTransducer(
        input_alphabet=d.input_alphabet,
        output_alphabet=frozenset(out for (_, out) in step.values()),
        initial=(d.initial, True),
        step=step,
    )


def restrict_outputs(d: CondenserTransducer, props) -> CondenserTransducer:
    """Intersect every output set with ``props`` (for formula-atom alphabets)."""
    props = frozenset(props)
    step = {key: (nxt, frozenset(out) & props) for key, (nxt, out) in d.step.items()}
    return CondenserTransducer(
        input_alphabet=d.input_alphabet,
        output_alphabet=frozenset(out for (_, out) in step.values()),
        initial=d.initial,
        step=step,
    )
