"""Linear temporal logic over typed atomic propositions.

Atoms name system symbols with an explicit sort prefix (``x:`` states,
``u:`` actions, ``y:`` observations), so a formula's intended grounding is
visible in its text and can be checked.  Besides the usual operators there is
``start``, true exactly at the first position of a word.

Concrete syntax::

    phi ::= true | false | start | x:NAME | u:NAME | y:NAME
          | ! phi | X phi | F phi | G phi
          | phi U phi | phi W phi          (right associative)
          | phi & phi | phi '|' phi | phi -> phi | phi <-> phi

with precedence  (! X F G)  >  (U W)  >  &  >  |  >  ->  >  <->.

Satisfaction is decided exactly on ultimately periodic words, and formulas
translate to nondeterministic Büchi automata over an explicit powerset
alphabet; ``evaluate`` and automaton membership are interchangeable, which is
the module's master invariant and is enforced by the test suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from random import Random
from typing import Iterable, Optional

from .buchi import BuchiAutomaton, LassoWord, ResourceLimitError

PropLasso = LassoWord  # positions carry frozensets of proposition names

START_PROP = "@start"


class Formula:
    """Base class for AST nodes; instances are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Start(Formula):
    """Holds exactly at the first position of a word."""


@dataclass(frozen=True)
class Atom(Formula):
    kind: str  # "x" | "u" | "y"
    name: str

    @property
    def prop(self) -> str:
        return f"{self.kind}:{self.name}"


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    """Dual of Until; produced by ``nnf``, not by the parser."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Unless(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


TRUE = TrueF()
FALSE = FalseF()
START = Start()


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at column {position + 1})")
        self.position = position


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<atom>[xuy]:[A-Za-z0-9_.+\-]+)
      | (?P<lpar>\() | (?P<rpar>\))
      | (?P<iff><->) | (?P<imp>->)
      | (?P<and>&) | (?P<or>\|) | (?P<not>!)
      | (?P<word>[A-Za-z]+)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false", "start", "U", "W", "X", "F", "G"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            value = m.group()
            if m.lastgroup == "word" and value not in _KEYWORDS:
                raise FormulaSyntaxError(
                    f"unknown keyword {value!r} (atoms are written x:NAME, u:NAME, y:NAME)", pos
                )
            tokens.append((m.lastgroup, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse(text: str) -> Formula:
    """Parse concrete syntax; raises :class:`FormulaSyntaxError` with a column."""
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expect(kind_, what):
        tok = take()
        if tok[0] != kind_:
            raise FormulaSyntaxError(f"expected {what}, found {tok[1]!r}" if tok[1] else f"expected {what}", tok[2])
        return tok

    def parse_iff():
        left = parse_implies()
        if peek()[0] == "iff":
            take()
            return Iff(left, parse_iff())
        return left

    def parse_implies():
        left = parse_or()
        if peek()[0] == "imp":
            take()
            return Implies(left, parse_implies())
        return left

    def parse_or():
        left = parse_and()
        if peek()[0] == "or":
            take()
            return Or(left, parse_or())
        return left

    def parse_and():
        left = parse_until()
        if peek()[0] == "and":
            take()
            return And(left, parse_and())
        return left

    def parse_until():
        left = parse_unary()
        kind_, value, _ = peek()
        if kind_ == "word" and value in ("U", "W"):
            take()
            right = parse_until()
            return Until(left, right) if value == "U" else Unless(left, right)
        return left

    def parse_unary():
        kind_, value, pos = peek()
        if kind_ == "not":
            take()
            return Not(parse_unary())
        if kind_ == "word" and value in ("X", "F", "G"):
            take()
            ctor = {"X": Next, "F": Eventually, "G": Always}[value]
            return ctor(parse_unary())
        return parse_primary()

    def parse_primary():
        kind_, value, pos = take()
        if kind_ == "lpar":
            inner = parse_iff()
            expect("rpar", "')'")
            return inner
        if kind_ == "atom":
            sort, name = value.split(":", 1)
            if name == START_PROP:
                raise FormulaSyntaxError(f"{START_PROP!r} is reserved", pos)
            return Atom(sort, name)
        if kind_ == "word":
            if value == "true":
                return TRUE
            if value == "false":
                return FALSE
            if value == "start":
                return START
            raise FormulaSyntaxError(f"operator {value!r} needs a left operand", pos)
        raise FormulaSyntaxError("expected a formula", pos)

    result = parse_iff()
    tok = peek()
    if tok[0] != "end":
        raise FormulaSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
    return result


_LEVEL = {
    Iff: 0,
    Implies: 1,
    Or: 2,
    And: 3,
    Until: 4,
    Unless: 4,
    Not: 5,
    Next: 5,
    Eventually: 5,
    Always: 5,
}


def pretty(f: Formula) -> str:
    """Emit parseable concrete syntax.

    ``Release`` has no surface form and is emitted through the identity
    ``a R b == b W (b & a)``; round-tripping is exact for every AST the
    parser can produce.
    """

    def go(g: Formula, parent_level: int) -> str:
        if isinstance(g, TrueF):
            return "true"
        if isinstance(g, FalseF):
            return "false"
        if isinstance(g, Start):
            return "start"
        if isinstance(g, Atom):
            return g.prop
        if isinstance(g, Release):
            return go(Unless(g.right, And(g.right, g.left)), parent_level)
        level = _LEVEL[type(g)]
        if isinstance(g, Not):
            body = f"!{go(g.operand, level)}"
        elif isinstance(g, (Next, Eventually, Always)):
            op = {Next: "X", Eventually: "F", Always: "G"}[type(g)]
            body = f"{op} {go(g.operand, level)}"
        else:
            op = {Iff: "<->", Implies: "->", Or: "|", And: "&", Until: "U", Unless: "W"}[type(g)]
            body = f"{go(g.left, level + 1)} {op} {go(g.right, level)}"
        if level < parent_level:
            return f"({body})"
        return body

    return go(f, 0)


def atoms(f: Formula) -> frozenset:
    """Proposition names used by ``f`` (``start`` is an operator, not an atom)."""
    out = set()

    def walk(g):
        if isinstance(g, Atom):
            out.add(g.prop)
        elif isinstance(g, (Not, Next, Eventually, Always)):
            walk(g.operand)
        elif isinstance(g, (And, Or, Implies, Iff, Until, Release, Unless)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return frozenset(out)


def atom_kinds(f: Formula) -> frozenset:
    out = set()

    def walk(g):
        if isinstance(g, Atom):
            out.add(g.kind)
        elif isinstance(g, (Not, Next, Eventually, Always)):
            walk(g.operand)
        elif isinstance(g, (And, Or, Implies, Iff, Until, Release, Unless)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return frozenset(out)


def normalize(f: Formula) -> Formula:
    """Rewrite into the core fragment {true, start, atom, !, |, X, U}."""
    if isinstance(f, (TrueF, Start, Atom)):
        return f
    if isinstance(f, FalseF):
        return Not(TRUE)
    if isinstance(f, Not):
        return Not(normalize(f.operand))
    if isinstance(f, Or):
        return Or(normalize(f.left), normalize(f.right))
    if isinstance(f, And):
        return Not(Or(Not(normalize(f.left)), Not(normalize(f.right))))
    if isinstance(f, Implies):
        return Or(Not(normalize(f.left)), normalize(f.right))
    if isinstance(f, Iff):
        return normalize(And(Implies(f.left, f.right), Implies(f.right, f.left)))
    if isinstance(f, Next):
        return Next(normalize(f.operand))
    if isinstance(f, Until):
        return Until(normalize(f.left), normalize(f.right))
    if isinstance(f, Eventually):
        return Until(TRUE, normalize(f.operand))
    if isinstance(f, Always):
        return Not(Until(TRUE, Not(normalize(f.operand))))
    if isinstance(f, Unless):
        return Or(Until(normalize(f.left), normalize(f.right)), normalize(Always(f.left)))
    if isinstance(f, Release):
        return Not(Until(Not(normalize(f.left)), Not(normalize(f.right))))
    raise TypeError(f"unknown formula node {f!r}")


def nnf(f: Formula) -> Formula:
    """Negation normal form over {true, false, literals, &, |, X, U, R, G}."""

    def pos(g: Formula) -> Formula:
        if isinstance(g, (TrueF, FalseF, Start, Atom)):
            return g
        if isinstance(g, Not):
            return neg(g.operand)
        if isinstance(g, And):
            return And(pos(g.left), pos(g.right))
        if isinstance(g, Or):
            return Or(pos(g.left), pos(g.right))
        if isinstance(g, Implies):
            return Or(neg(g.left), pos(g.right))
        if isinstance(g, Iff):
            return Or(And(pos(g.left), pos(g.right)), And(neg(g.left), neg(g.right)))
        if isinstance(g, Next):
            return Next(pos(g.operand))
        if isinstance(g, Until):
            return Until(pos(g.left), pos(g.right))
        if isinstance(g, Release):
            return Release(pos(g.left), pos(g.right))
        if isinstance(g, Eventually):
            return Until(TRUE, pos(g.operand))
        if isinstance(g, Always):
            return Always(pos(g.operand))
        if isinstance(g, Unless):
            return Or(Until(pos(g.left), pos(g.right)), Always(pos(g.left)))
        raise TypeError(f"unknown formula node {g!r}")

    def neg(g: Formula) -> Formula:
        if isinstance(g, TrueF):
            return FALSE
        if isinstance(g, FalseF):
            return TRUE
        if isinstance(g, (Start, Atom)):
            return Not(g)
        if isinstance(g, Not):
            return pos(g.operand)
        if isinstance(g, And):
            return Or(neg(g.left), neg(g.right))
        if isinstance(g, Or):
            return And(neg(g.left), neg(g.right))
        if isinstance(g, Implies):
            return And(pos(g.left), neg(g.right))
        if isinstance(g, Iff):
            return Or(And(pos(g.left), neg(g.right)), And(neg(g.left), pos(g.right)))
        if isinstance(g, Next):
            return Next(neg(g.operand))
        if isinstance(g, Until):
            return Release(neg(g.left), neg(g.right))
        if isinstance(g, Release):
            return Until(neg(g.left), neg(g.right))
        if isinstance(g, Eventually):
            return Always(neg(g.operand))
        if isinstance(g, Always):
            return Until(TRUE, neg(g.operand))
        if isinstance(g, Unless):
            # !(a W b) == !(a U b) & F !a
            return And(Release(neg(g.left), neg(g.right)), Until(TRUE, neg(g.left)))
        raise TypeError(f"unknown formula node {g!r}")

    return pos(f)


# ---------------------------------------------------------------------------
# Exact evaluation on lasso words


def _fold_position(s: PropLasso, i: int) -> int:
    p, c = len(s.prefix), len(s.cycle)
    if i < 1:
        raise IndexError("positions start at 1")
    if i <= p + c:
        return i
    return p + (i - p - 1) % c + 1


def evaluate(s: PropLasso, f: Formula, i: int = 1) -> bool:
    """Decide ``<s, i> |= f`` exactly.

    Truth values are computed bottom-up for every position of the lasso
    skeleton; Until acquires its least fixpoint (and Release/Always their
    greatest) by iterating over the cycle until stable, so no unrolling
    heuristics are involved.
    """
    if not s.prefix:
        # keep position 1 out of the recurring part: Start is not periodic
        s = LassoWord(s.cycle, s.cycle)
    p, c = len(s.prefix), len(s.cycle)
    n = p + c
    letters = [s.at(j) for j in range(1, n + 1)]

    def succ(j: int) -> int:  # 0-based skeleton successor
        return j + 1 if j + 1 < n else p

    memo: dict = {}

    def table(g: Formula) -> tuple:
        if g in memo:
            return memo[g]
        if isinstance(g, TrueF):
            t = (True,) * n
        elif isinstance(g, FalseF):
            t = (False,) * n
        elif isinstance(g, Start):
            t = tuple(j == 0 for j in range(n))
        elif isinstance(g, Atom):
            t = tuple(g.prop in letters[j] for j in range(n))
        elif isinstance(g, Not):
            t = tuple(not v for v in table(g.operand))
        elif isinstance(g, And):
            ta, tb = table(g.left), table(g.right)
            t = tuple(x and y for x, y in zip(ta, tb))
        elif isinstance(g, Or):
            ta, tb = table(g.left), table(g.right)
            t = tuple(x or y for x, y in zip(ta, tb))
        elif isinstance(g, Implies):
            ta, tb = table(g.left), table(g.right)
            t = tuple((not x) or y for x, y in zip(ta, tb))
        elif isinstance(g, Iff):
            ta, tb = table(g.left), table(g.right)
            t = tuple(x == y for x, y in zip(ta, tb))
        elif isinstance(g, Next):
            to = table(g.operand)
            t = tuple(to[succ(j)] for j in range(n))
        elif isinstance(g, Eventually):
            t = _lfp(table(g.operand), (True,) * n, n, succ)
        elif isinstance(g, Always):
            t = _gfp(table(g.operand), (False,) * n, n, succ)
        elif isinstance(g, Until):
            t = _lfp(table(g.right), table(g.left), n, succ)
        elif isinstance(g, Release):
            t = _gfp(table(g.right), table(g.left), n, succ)
        elif isinstance(g, Unless):
            hold = table(g.left)
            t_until = _lfp(table(g.right), hold, n, succ)
            t_always = _gfp(hold, (False,) * n, n, succ)
            t = tuple(x or y for x, y in zip(t_until, t_always))
        else:
            raise TypeError(f"unknown formula node {g!r}")
        memo[g] = t
        return t

    return table(f)[_fold_position(s, i) - 1]


def _lfp(target: tuple, hold: tuple, n: int, succ) -> tuple:
    # least fixpoint of  t[j] = target[j] or (hold[j] and t[succ(j)])
    t = list(target)
    changed = True
    while changed:
        changed = False
        for j in range(n - 1, -1, -1):
            v = target[j] or (hold[j] and t[succ(j)])
            if v != t[j]:
                t[j] = v
                changed = True
    return tuple(t)


def _gfp(target: tuple, hold: tuple, n: int, succ) -> tuple:
    # greatest fixpoint of  t[j] = target[j] and (hold[j] or t[succ(j)])
    t = [True] * n
    changed = True
    while changed:
        changed = False
        for j in range(n - 1, -1, -1):
            v = target[j] and (hold[j] or t[succ(j)])
            if v != t[j]:
                t[j] = v
                changed = True
    return tuple(t)


# ---------------------------------------------------------------------------
# Translation to Büchi automata (tableau construction)


class _Node:
    __slots__ = ("incoming", "old", "nxt")

    def __init__(self, incoming, old, nxt):
        self.incoming = incoming
        self.old = old
        self.nxt = nxt


_INIT_ID = -1


def _is_literal(g: Formula) -> bool:
    return isinstance(g, (TrueF, FalseF, Start, Atom)) or (
        isinstance(g, Not) and isinstance(g.operand, (Start, Atom))
    )


def _negation(g: Formula) -> Formula:
    return g.operand if isinstance(g, Not) else Not(g)


def _tableau(f: Formula, max_states: int) -> tuple:
    """Expand ``f`` (in NNF) into tableau nodes; returns (nodes, untils)."""
    nodes: dict = {}  # (old, nxt) -> node id
    table: list = []

    class Draft:
        __slots__ = ("incoming", "new", "old", "nxt")

        def __init__(self, incoming, new, old, nxt):
            self.incoming = incoming
            self.new = new
            self.old = old
            self.nxt = nxt

    drafts = [Draft({_INIT_ID}, [f], set(), set())]
    while drafts:
        d = drafts.pop()
        if d.new:
            g = d.new.pop()
            if _is_literal(g):
                if isinstance(g, FalseF) or _negation(g) in d.old:
                    continue  # contradictory branch dies
                # TrueF is recorded too: acceptance checks look for an
                # Until's right operand inside the closure
                d.old.add(g)
                drafts.append(d)
            elif isinstance(g, And):
                for part in (g.left, g.right):
                    if part not in d.old and part not in d.new:
                        d.new.append(part)
                d.old.add(g)
                drafts.append(d)
            elif isinstance(g, Or):
                d2 = Draft(set(d.incoming), list(d.new), set(d.old), set(d.nxt))
                for draft, part in ((d, g.left), (d2, g.right)):
                    if part not in draft.old and part not in draft.new:
                        draft.new.append(part)
                    draft.old.add(g)
                drafts.append(d)
                drafts.append(d2)
            elif isinstance(g, Next):
                d.old.add(g)
                d.nxt.add(g.operand)
                drafts.append(d)
            elif isinstance(g, Until):
                # a U b  ==  b  or  (a and X(a U b))
                d2 = Draft(set(d.incoming), list(d.new), set(d.old), set(d.nxt))
                if g.left not in d.old and g.left not in d.new:
                    d.new.append(g.left)
                d.nxt.add(g)
                if g.right not in d2.old and g.right not in d2.new:
                    d2.new.append(g.right)
                d.old.add(g)
                d2.old.add(g)
                drafts.append(d)
                drafts.append(d2)
            elif isinstance(g, Release):
                # a R b  ==  (b and X(a R b))  or  (a and b)
                d2 = Draft(set(d.incoming), list(d.new), set(d.old), set(d.nxt))
                if g.right not in d.old and g.right not in d.new:
                    d.new.append(g.right)
                d.nxt.add(g)
                for part in (g.left, g.right):
                    if part not in d2.old and part not in d2.new:
                        d2.new.append(part)
                d.old.add(g)
                d2.old.add(g)
                drafts.append(d)
                drafts.append(d2)
            elif isinstance(g, Always):
                if g.operand not in d.old and g.operand not in d.new:
                    d.new.append(g.operand)
                d.nxt.add(g)
                d.old.add(g)
                drafts.append(d)
            else:
                raise TypeError(f"node {g!r} is not in negation normal form")
        else:
            key = (frozenset(d.old), frozenset(d.nxt))
            if key in nodes:
                table[nodes[key]].incoming |= d.incoming
                continue
            if len(table) >= max_states:
                raise ResourceLimitError("formula translation nodes", max_states)
            node_id = len(table)
            nodes[key] = node_id
            table.append(_Node(set(d.incoming), key[0], key[1]))
            drafts.append(Draft({node_id}, list(key[1]), set(), set()))

    untils = sorted(
        {g for node in table for g in node.old if isinstance(g, Until)},
        key=pretty,
    )
    return table, untils


def _powerset_alphabet(ap: frozenset) -> list:
    props = sorted(ap)
    letters = []
    for mask in range(1 << len(props)):
        letters.append(frozenset(p for i, p in enumerate(props) if mask >> i & 1))
    return letters


def to_buchi(f: Formula, ap: Iterable[str], max_states: int = 2**16) -> BuchiAutomaton:
    """Büchi automaton for ``{ w in (2^ap)^omega : <w, 1> |= f }``.

    ``start`` constrains positions rather than letters, so tableau nodes
    demanding it are only enterable at the first step and nodes demanding its
    negation never are.  The alphabet is the full powerset of ``ap``, which
    therefore must stay small; ``max_states`` guards both the alphabet and
    the tableau size.
    """
    ap = frozenset(ap)
    if START_PROP in ap:
        raise ValueError(f"{START_PROP!r} cannot be a user proposition")
    missing = atoms(f) - ap
    if missing:
        raise ValueError(f"formula atoms {sorted(missing)} missing from the proposition universe")
    if 2 ** len(ap) > max_states:
        raise ResourceLimitError("formula alphabet size", max_states)
    g = nnf(f)
    table, untils = _tableau(g, max_states)
    alphabet = _powerset_alphabet(ap)

    admissible: dict = {}
    start_mode: dict = {}
    for node_id, node in enumerate(table):
        pos = frozenset(a.prop for a in node.old if isinstance(a, Atom))
        neg = frozenset(a.operand.prop for a in node.old if isinstance(a, Not) and isinstance(a.operand, Atom))
        admissible[node_id] = [P for P in alphabet if pos <= P and not (neg & P)]
        if START in node.old:
            start_mode[node_id] = "first-only"
        elif Not(START) in node.old:
            start_mode[node_id] = "later-only"
        else:
            start_mode[node_id] = "any"

    k = len(untils)
    acc_sets = []
    for u in untils:
        acc_sets.append(frozenset(nid for nid, node in enumerate(table) if u not in node.old or u.right in node.old))

    def advance(level: int, q: int) -> int:
        if k and q in acc_sets[level - 1]:
            return level % k + 1
        return level

    init_state = ("init",)
    trans: dict = {}
    states = {init_state}
    queue = [init_state]
    succ_nodes: dict = {nid: [] for nid in range(len(table))}
    entry_nodes = []
    for nid, node in enumerate(table):
        for src in node.incoming:
            if src == _INIT_ID:
                entry_nodes.append(nid)
            else:
                succ_nodes[src].append(nid)

    while queue:
        s = queue.pop()
        if s == init_state:
            targets = [(nid, 1) for nid in entry_nodes if start_mode[nid] != "later-only"]
        else:
            nid, level = s
            nlevel = advance(level, nid)
            targets = [(nid2, nlevel) for nid2 in succ_nodes[nid] if start_mode[nid2] != "first-only"]
        for nid2, level2 in targets:
            dest = (nid2, level2)
            for P in admissible[nid2]:
                key = (s, P)
                prev = trans.get(key)
                trans[key] = (prev | {dest}) if prev else frozenset({dest})
            if dest not in states:
                states.add(dest)
                queue.append(dest)

    if k == 0:
        accepting = frozenset(states)
    else:
        accepting = frozenset(s for s in states if s != init_state and s[1] == k and s[0] in acc_sets[k - 1])
    return BuchiAutomaton(
        alphabet=frozenset(alphabet),
        states=frozenset(states),
        initial=frozenset({init_state}),
        accepting=accepting,
        trans=trans,
    )


# ---------------------------------------------------------------------------
# Random generation for property sweeps


def random_formula(rng: Random, pool: list, depth: int) -> Formula:
    """Seeded random AST over the given ``(kind, name)`` atom pool."""

    def leaf():
        roll = rng.random()
        if roll < 0.08:
            return TRUE
        if roll < 0.14:
            return FALSE
        if roll < 0.2:
            return START
        kind, name = rng.choice(pool)
        return Atom(kind, name)

    def go(d):
        if d <= 0 or rng.random() < 0.2:
            return leaf()
        ctor = rng.choice(
            (Not, Next, Eventually, Always, And, Or, Implies, Iff, Until, Unless)
        )
        if ctor in (Not, Next, Eventually, Always):
            return ctor(go(d - 1))
        return ctor(go(d - 1), go(d - 1))

    return go(depth)


def random_prop_lasso(rng: Random, ap: Iterable[str], prefix_len: int, cycle_len: int) -> PropLasso:
    props = sorted(ap)

    def letter():
        return frozenset(p for p in props if rng.random() < 0.45)

    return LassoWord(
        tuple(letter() for _ in range(prefix_len)),
        tuple(letter() for _ in range(max(1, cycle_len))),
    )
