"""Deciding whether tasks stay well-posed under a condenser.

A task is a set of complete traces.  It is well-posed under a condenser when
the condenser's output determines membership: no two complete traces with
identical outputs may disagree about being in the task.  The check is a
two-track product over letter pairs: track one runs the task automaton,
track two its relative complement in the complete-trace language, both
through the condenser with per-step output equality.  The product is empty
iff the task is well-posed; otherwise its witness lasso splits into a
verified counterexample pair.

For formula-specified tasks the second track comes from the negated formula,
which avoids complementing a product automaton: complementation commutes
with the (deterministic, total) grounding transducer, so negation at the
formula level is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import ltl
from .buchi import (
    BuchiAutomaton,
    CounterWitness,
    LassoWord,
    ResourceLimitError,
    accepting_lasso,
    complement,
    find_counter,
    intersect,
    inverse_image,
    member,
    rts_product,
    trim,
)
from .condense import (
    CondenserTransducer,
    canonical_kind,
    condenser_transducer,
    restrict_outputs,
)
from .ltl import Formula
from .system import CompleteLassoTrace, RobotTransitionSystem, is_complete_trace, omega_safety_automaton

CONDENSER_KINDS = ("state", "ao", "istate")

_GROUNDING_ATOM_KINDS = {"state": {"x"}, "ao": {"u", "y"}, "istate": {"x"}}


@dataclass(frozen=True)
class Budgets:
    """Resource guards shared by the long-running constructions."""

    complement_states: int = 12
    belief_cap: int = 4096
    monoid_cap: int = 100_000
    translation_states: int = 2**16
    pair_states: int = 2_000_000


DEFAULT_BUDGETS = Budgets()


@dataclass(frozen=True)
class TaskSpec:
    """A task description: a grounded formula or a raw letter automaton.

    Formula specs denote the complete traces whose grounding satisfies the
    formula; raw automata are intersected with the complete-trace language on
    ingestion so the described set is always a set of complete traces.
    """

    formula: Optional[Formula] = None
    grounding: Optional[str] = None
    automaton: Optional[BuchiAutomaton] = None

    def __post_init__(self):
        if (self.formula is None) == (self.automaton is None):
            raise ValueError("give either a formula with grounding or a raw automaton")
        if self.formula is not None:
            if self.grounding is None:
                raise ValueError("formula specs need a grounding")
            object.__setattr__(self, "grounding", canonical_kind(self.grounding))


def validate_task_spec(r: RobotTransitionSystem, spec: TaskSpec) -> None:
    """Check atom sorts against the grounding and symbols against the system."""
    if spec.formula is None:
        if spec.automaton.alphabet != r.alphabet:
            raise ValueError("raw task automata must read (state, action, observation) letters")
        return
    allowed = _GROUNDING_ATOM_KINDS[spec.grounding]
    symbol_pool = {"x": r.states, "u": r.actions, "y": r.observations}
    for prop in sorted(ltl.atoms(spec.formula)):
        kind, name = prop.split(":", 1)
        if kind not in allowed:
            raise ValueError(
                f"atom {prop!r} is not valid under the {spec.grounding!r} grounding"
            )
        if name not in symbol_pool[kind]:
            raise ValueError(f"atom {prop!r} names an unknown system symbol")


@dataclass(frozen=True)
class PosabilityReport:
    """Three-bit verdict with a verified counterexample pair per false bit.

    ``bits[kind]`` is True, False, or None when a resource guard prevented a
    decision.  Every counterexample pair (w, wbar) has been re-checked:
    both are complete traces, membership splits, and the condenser outputs
    agree positionwise.
    """

    bits: dict
    counterexamples: dict
    notes: tuple = ()

    @property
    def profile(self) -> tuple:
        return tuple(self.bits[k] for k in CONDENSER_KINDS)

    def to_json(self) -> dict:
        from .system import trace_to_json

        out = {}
        for kind in CONDENSER_KINDS:
            out[kind] = self.bits[kind] if self.bits[kind] is not None else "undecided"
        out["counterexamples"] = {
            kind: {"w": trace_to_json(pair[0]), "wbar": trace_to_json(pair[1])}
            for kind, pair in self.counterexamples.items()
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# ---------------------------------------------------------------------------
# Task automata


@lru_cache(maxsize=32)
def _trimmed_safety(r: RobotTransitionSystem) -> BuchiAutomaton:
    # systems hash by identity; trimming preserves the language while
    # dropping the sink and every letter-state with no live continuation
    return trim(omega_safety_automaton(r))


@lru_cache(maxsize=64)
def _grounding_transducer(r: RobotTransitionSystem, grounding: str, belief_cap: int):
    return condenser_transducer(r, grounding, grounded=True, max_beliefs=belief_cap)


def _formula_track(
    r: RobotTransitionSystem, f: Formula, grounding: str, budgets: Budgets
) -> BuchiAutomaton:
    props = ltl.atoms(f)
    auto = ltl.to_buchi(f, props, max_states=budgets.translation_states)
    d = restrict_outputs(_grounding_transducer(r, grounding, budgets.belief_cap), props)
    return trim(intersect(inverse_image(auto, d), _trimmed_safety(r)))


def task_automaton(
    r: RobotTransitionSystem, spec: TaskSpec, budgets: Budgets = DEFAULT_BUDGETS
) -> BuchiAutomaton:
    """Letter automaton whose language is exactly the specified task."""
    validate_task_spec(r, spec)
    if spec.formula is not None:
        return _formula_track(r, spec.formula, spec.grounding, budgets)
    return trim(intersect(spec.automaton, _trimmed_safety(r)))


def _task_tracks(
    r: RobotTransitionSystem, spec: TaskSpec, budgets: Budgets
) -> tuple:
    """Automata for the task and for its complement within the complete traces."""
    validate_task_spec(r, spec)
    if spec.formula is not None:
        inside = _formula_track(r, spec.formula, spec.grounding, budgets)
        outside = _formula_track(r, ltl.Not(spec.formula), spec.grounding, budgets)
        return inside, outside
    inside = trim(intersect(spec.automaton, _trimmed_safety(r)))
    shaved = complement(spec.automaton, max_states=budgets.complement_states)
    outside = trim(intersect(shaved, _trimmed_safety(r)))
    return inside, outside


# ---------------------------------------------------------------------------
# The pairwise well-posedness product


def _pair_product(
    t_in: BuchiAutomaton,
    t_out: BuchiAutomaton,
    cond: CondenserTransducer,
    max_states: int,
) -> BuchiAutomaton:
    """Two-track product over letter pairs with per-step output equality.

    Track one follows ``t_in`` (the task), track two ``t_out`` (its relative
    complement); both feed the condenser transducer and only letter pairs
    with equal outputs survive.  Acceptance interleaves the two Büchi
    conditions with the usual alternation flag.
    """
    group_cache: dict = {}

    def grouped(track: int, automaton: BuchiAutomaton, s, c):
        key = (track, s, c)
        hit = group_cache.get(key)
        if hit is not None:
            return hit
        buckets: dict = {}
        for letter, dests in automaton.outgoing.get(s, {}).items():
            c2, out = cond.step[(c, letter)]
            entry = buckets.setdefault(out, [])
            for d in dests:
                entry.append((letter, d, c2))
        group_cache[key] = buckets
        return buckets

    init = [
        (q1, q2, cond.initial, cond.initial, 1)
        for q1 in t_in.initial
        for q2 in t_out.initial
    ]
    states = set(init)
    queue = deque(init)
    trans: dict = {}
    accepting = set()
    alphabet = set()
    while queue:
        s = queue.popleft()
        q1, q2, c1, c2, flag = s
        if flag == 2 and q2 in t_out.accepting:
            accepting.add(s)
            nflag = 1
        elif flag == 1 and q1 in t_in.accepting:
            nflag = 2
        else:
            nflag = flag
        b1 = grouped(1, t_in, q1, c1)
        b2 = grouped(2, t_out, q2, c2)
        small, other = (b1, b2) if len(b1) <= len(b2) else (b2, b1)
        for out in small:
            if out not in other:
                continue
            for (a1, d1, c1n) in b1[out]:
                for (a2, d2, c2n) in b2[out]:
                    dest = (d1, d2, c1n, c2n, nflag)
                    letter = (a1, a2)
                    alphabet.add(letter)
                    key = (s, letter)
                    prev = trans.get(key)
                    trans[key] = (prev | {dest}) if prev else frozenset({dest})
                    if dest not in states:
                        if len(states) >= max_states:
                            raise ResourceLimitError("pair product states", max_states)
                        states.add(dest)
                        queue.append(dest)
    if not alphabet:
        alphabet = {(None, None)}
    return BuchiAutomaton(
        alphabet=frozenset(alphabet),
        states=frozenset(states),
        initial=frozenset(init),
        accepting=frozenset(accepting),
        trans=trans,
    )


def _split_pair_witness(w: LassoWord) -> tuple:
    first = CompleteLassoTrace(
        tuple(a for a, _ in w.prefix), tuple(a for a, _ in w.cycle)
    )
    second = CompleteLassoTrace(
        tuple(b for _, b in w.prefix), tuple(b for _, b in w.cycle)
    )
    return first, second


class CounterexampleIntegrityError(RuntimeError):
    """A reported pair failed re-verification; this indicates a library bug."""


def _verify_pair(
    r: RobotTransitionSystem,
    task: BuchiAutomaton,
    kind: str,
    pair: tuple,
    budgets: Budgets,
) -> None:
    w, wbar = pair
    problems = []
    if not is_complete_trace(r, w):
        problems.append("witness w is not a complete trace")
    if not is_complete_trace(r, wbar):
        problems.append("witness wbar is not a complete trace")
    if not member(task, w.word):
        problems.append("witness w is not in the task")
    if member(task, wbar.word):
        problems.append("witness wbar is in the task")
    d = condenser_transducer(r, kind, max_beliefs=budgets.belief_cap)
    from .condense import apply_to_lasso
    from .buchi import lasso_equal

    if not lasso_equal(apply_to_lasso(d, w.word), apply_to_lasso(d, wbar.word)):
        problems.append("condenser outputs differ")
    if problems:
        raise CounterexampleIntegrityError("; ".join(problems))


@lru_cache(maxsize=64)
def _condenser(r: RobotTransitionSystem, kind: str, belief_cap: int) -> CondenserTransducer:
    return condenser_transducer(r, kind, max_beliefs=belief_cap)


def _counterexample_from_tracks(
    r: RobotTransitionSystem,
    t_in: BuchiAutomaton,
    t_out: BuchiAutomaton,
    kind: str,
    budgets: Budgets,
) -> Optional[tuple]:
    if not t_in.accepting or not t_out.accepting:
        return None  # one side is empty, so no membership split exists
    cond = _condenser(r, kind, budgets.belief_cap)
    product = _pair_product(t_in, t_out, cond, budgets.pair_states)
    witness = accepting_lasso(product)
    if witness is None:
        return None
    pair = _split_pair_witness(witness)
    _verify_pair(r, t_in, kind, pair, budgets)
    return pair


def posability_counterexample(
    r: RobotTransitionSystem,
    spec_or_task,
    kind: str,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Optional[tuple]:
    """A verified pair (w, wbar) breaking well-posedness, or None.

    ``spec_or_task`` is a :class:`TaskSpec` (preferred: negation happens at
    the formula level) or a raw letter automaton (its complement is built
    directly, subject to the complementation guard).
    """
    kind = canonical_kind(kind)
    if isinstance(spec_or_task, TaskSpec):
        spec = spec_or_task
    else:
        spec = TaskSpec(automaton=spec_or_task)
    t_in, t_out = _task_tracks(r, spec, budgets)
    return _counterexample_from_tracks(r, t_in, t_out, kind, budgets)


def is_well_posed(
    r: RobotTransitionSystem,
    spec_or_task,
    kind: str,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> bool:
    """Whether condenser outputs determine task membership on complete traces."""
    return posability_counterexample(r, spec_or_task, kind, budgets) is None


def posability_profile(
    r: RobotTransitionSystem,
    spec: TaskSpec,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> PosabilityReport:
    """Run the well-posedness check under all three condensers.

    The task tracks are built once and shared; a resource guard hit on one
    check leaves that bit undecided without aborting the others.
    """
    bits = {}
    pairs = {}
    notes = []
    try:
        t_in, t_out = _task_tracks(r, spec, budgets)
    except ResourceLimitError as exc:
        for kind in CONDENSER_KINDS:
            bits[kind] = None
            notes.append(f"{kind}: undecided ({exc})")
        return PosabilityReport(bits=bits, counterexamples={}, notes=tuple(notes))
    for kind in CONDENSER_KINDS:
        try:
            pair = _counterexample_from_tracks(r, t_in, t_out, kind, budgets)
        except ResourceLimitError as exc:
            bits[kind] = None
            notes.append(f"{kind}: undecided ({exc})")
            continue
        bits[kind] = pair is None
        if pair is not None:
            pairs[kind] = pair
    return PosabilityReport(bits=bits, counterexamples=pairs, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Existence of an action/observation-trace formula


@dataclass(frozen=True)
class NotPosable:
    """The task is not even action/observation-trace posable; no formula exists."""

    counterexample: tuple


@dataclass(frozen=True)
class Expressible:
    """A counter-free action/observation automaton for the task exists."""

    automaton: BuchiAutomaton


@dataclass(frozen=True)
class Inconclusive:
    """The constructed automaton has a counter.

    Structural counter-freeness is sufficient but not necessary for
    definability, so a counter never certifies inexpressibility.
    """

    automaton: BuchiAutomaton
    counter: CounterWitness


def _state_letter_automaton(
    r: RobotTransitionSystem, f: Formula, budgets: Budgets
) -> BuchiAutomaton:
    """Automaton reading state sequences, accepting those whose grounding satisfies ``f``."""
    props = ltl.atoms(f)
    auto = ltl.to_buchi(f, props, max_states=budgets.translation_states)
    # start needs no transducer support: the translation pins it to the
    # first transition structurally
    step = {(".", x): (".", frozenset({f"x:{x}"}) & props) for x in r.states}
    d = CondenserTransducer(
        input_alphabet=frozenset(r.states),
        output_alphabet=frozenset(out for (_, out) in step.values()),
        initial=".",
        step=step,
    )
    return inverse_image(auto, d)


def exists_ao_formula(
    r: RobotTransitionSystem,
    psi_x: Formula,
    budgets: Budgets = DEFAULT_BUDGETS,
):
    """Decide whether a state-grounded formula's task has an action/observation form.

    Pipeline: posability under the action/observation condenser is necessary;
    when it holds, the state-formula automaton is folded into the system
    dynamics and the result is tested for structural counter-freeness.
    Counter-free means an equivalent action/observation-trace formula exists;
    a counter leaves the question open.
    """
    spec = TaskSpec(formula=psi_x, grounding="state")
    validate_task_spec(r, spec)
    pair = posability_counterexample(r, spec, "ao", budgets)
    if pair is not None:
        return NotPosable(counterexample=pair)
    a_states = _state_letter_automaton(r, psi_x, budgets)
    product = trim(rts_product(a_states, r))
    counter = find_counter(product, max_monoid=budgets.monoid_cap)
    if counter is None:
        return Expressible(automaton=product)
    return Inconclusive(automaton=product, counter=counter)


# ---------------------------------------------------------------------------
# Consistency harness

IMPOSSIBLE_PROFILES = frozenset({(False, False, True), (True, False, True), (True, True, False)})


@dataclass(frozen=True)
class ClosureRecord:
    """Profile of one instance plus any violated posability laws."""

    report: PosabilityReport
    violations: tuple


def check_istate_closure(
    r: RobotTransitionSystem,
    spec: TaskSpec,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> ClosureRecord:
    """Compute a profile and flag impossible outcomes.

    Flags: the profile (state=1, ao=1, istate=0), which contradicts the law
    that a task posable in both richer views is information-state posable;
    any profile with istate=1 but ao=0, contradicting that information-state
    posability implies action/observation posability; and a formula spec not
    well-posed under its own grounding's condenser.
    """
    report = posability_profile(r, spec, budgets)
    bits = report.bits
    violations = []
    if bits["state"] is True and bits["ao"] is True and bits["istate"] is False:
        violations.append("state- and ao-posable task reported not istate-posable")
    if bits["istate"] is True and bits["ao"] is False:
        violations.append("istate-posable task reported not ao-posable")
    if spec.formula is not None and bits[spec.grounding] is False:
        violations.append(
            f"formula task reported not well-posed under its own {spec.grounding!r} grounding"
        )
    return ClosureRecord(report=report, violations=tuple(violations))


def falsification_sweep(
    n: int,
    seed: int = 0,
    max_states: int = 4,
    max_actions: int = 2,
    max_observations: int = 2,
    depth: int = 4,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> list:
    """Random systems x random grounded formulas; returns all law violations.

    Instances whose profile hits a resource guard are skipped (their bits are
    undecided, so no law can be judged).  An empty result over a large sweep
    is the expected outcome.
    """
    from random import Random

    from .system import random_system

    rng = Random(seed)
    violations = []
    for i in range(n):
        r = random_system(rng.randrange(2**31), max_states, max_actions, max_observations)
        grounding = rng.choice(CONDENSER_KINDS)
        pool = {
            "state": [("x", s) for s in sorted(r.states)],
            "istate": [("x", s) for s in sorted(r.states)],
            "ao": [("u", u) for u in sorted(r.actions)] + [("y", y) for y in sorted(r.observations)],
        }[grounding]
        f = ltl.random_formula(rng, pool, depth)
        spec = TaskSpec(formula=f, grounding=grounding)
        record = check_istate_closure(r, spec, budgets)
        for v in record.violations:
            violations.append((i, ltl.pretty(f), grounding, v))
    return violations
