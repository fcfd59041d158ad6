"""Built-in example systems with their bundled tasks.

Four small worlds exercise every verdict combination the decision procedures
can produce:

* ``corridor_sign``: ten cells, clamped left/right moves, a wall-distance
  sensor with a noisy sign.  Task: some negative reading appears.
* ``corridor_blind``: same corridor with the sensor removed (one dummy
  observation).  Task: reach cell 1.
* ``light_dark``: a 4x2 grid with orientations, deterministic rotate/forward
  actions, and a light sensor that may always report "indeterminate".  The
  two possible initial states are 180-degree rotations of each other, and the
  lit/dark rows swap under that rotation, so only a non-indeterminate reading
  can break the symmetry.  Task: such a reading appears.
* ``light_dark_goal_detector``: same grid, sensor replaced by a goal
  detector that fires exactly when the robot acts from a goal cell.  Task:
  revisit the goal cells forever.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ltl import parse
from .posability import TaskSpec
from .system import RobotTransitionSystem, validate_system

CATALOG_NAMES = ("corridor_sign", "corridor_blind", "light_dark", "light_dark_goal_detector")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    system: RobotTransitionSystem
    task: TaskSpec
    task_text: str
    task_grounding: str


def _corridor(length: int, blind: bool) -> RobotTransitionSystem:
    states = [str(i) for i in range(1, length + 1)]
    trans = {}
    obs = {}
    if blind:
        observations = ["none"]
    else:
        observations = [str(k) for k in range(-length, length + 1) if k != 0]
    for i in range(1, length + 1):
        x = str(i)
        for u, nxt in (("R", min(i + 1, length)), ("L", max(i - 1, 1))):
            x2 = str(nxt)
            trans[(x, u)] = frozenset({x2})
            obs[(x, u, x2)] = frozenset({"none"}) if blind else frozenset({x2, str(-nxt)})
    return validate_system(
        RobotTransitionSystem(
            states=frozenset(states),
            actions=frozenset({"R", "L"}),
            observations=frozenset(observations),
            init=frozenset(states),
            trans=trans,
            obs=obs,
        )
    )


_COLS, _ROWS = 4, 2
_DIRS = ("N", "E", "S", "W")
_LEFT = {"N": "W", "W": "S", "S": "E", "E": "N"}
_RIGHT = {v: k for k, v in _LEFT.items()}
_MOVE = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}


def _cell_name(col: int, row: int, d: str) -> str:
    return f"c{col}r{row}{d}"


def _grid_states():
    return [
        (col, row, d)
        for col in range(1, _COLS + 1)
        for row in range(1, _ROWS + 1)
        for d in _DIRS
    ]


def _grid_step(col: int, row: int, d: str, u: str):
    if u == "left":
        return col, row, _LEFT[d]
    if u == "right":
        return col, row, _RIGHT[d]
    dc, dr = _MOVE[d]
    nc, nr = col + dc, row + dr
    if not (1 <= nc <= _COLS and 1 <= nr <= _ROWS):
        return col, row, d  # blocked by the wall
    return nc, nr, d


_GOAL_CELLS = frozenset(_cell_name(_COLS, 1, d) for d in _DIRS)


def _light_dark(goal_detector: bool) -> RobotTransitionSystem:
    states = [_cell_name(*s) for s in _grid_states()]
    actions = ("left", "right", "fwd")
    trans = {}
    obs = {}
    for col, row, d in _grid_states():
        x = _cell_name(col, row, d)
        for u in actions:
            ncol, nrow, nd = _grid_step(col, row, d, u)
            x2 = _cell_name(ncol, nrow, nd)
            trans[(x, u)] = frozenset({x2})
            if goal_detector:
                obs[(x, u, x2)] = frozenset({"1"}) if x in _GOAL_CELLS else frozenset({"0"})
            else:
                lit = nrow == _ROWS  # top row is lit, bottom row is dark
                obs[(x, u, x2)] = frozenset({"light" if lit else "dark", "indet"})
    return validate_system(
        RobotTransitionSystem(
            states=frozenset(states),
            actions=frozenset(actions),
            observations=frozenset({"0", "1"}) if goal_detector else frozenset({"light", "dark", "indet"}),
            init=frozenset({_cell_name(1, 1, "E"), _cell_name(_COLS, _ROWS, "W")}),
            trans=trans,
            obs=obs,
        )
    )


def _reject_extras(name: str, params: dict) -> None:
    if params:
        raise ValueError(f"unsupported parameters for {name!r}: {sorted(params)}")


def catalog(name: str, params: dict | None = None) -> CatalogEntry:
    """Fetch a built-in system and its task by name.

    ``params`` may override ``length`` for the corridor systems.
    """
    params = dict(params or {})
    if name == "corridor_sign":
        length = int(params.pop("length", 10))
        _reject_extras(name, params)
        system = _corridor(length, blind=False)
        text = "F (" + " | ".join(f"y:-{k}" for k in range(1, length + 1)) + ")"
        return CatalogEntry(name, system, TaskSpec(formula=parse(text), grounding="ao"), text, "ao")
    if name == "corridor_blind":
        length = int(params.pop("length", 10))
        _reject_extras(name, params)
        system = _corridor(length, blind=True)
        text = "F x:1"
        return CatalogEntry(name, system, TaskSpec(formula=parse(text), grounding="state"), text, "state")
    if name == "light_dark":
        _reject_extras(name, params)
        system = _light_dark(goal_detector=False)
        text = "F (y:light | y:dark)"
        return CatalogEntry(name, system, TaskSpec(formula=parse(text), grounding="ao"), text, "ao")
    if name == "light_dark_goal_detector":
        _reject_extras(name, params)
        system = _light_dark(goal_detector=True)
        text = "G F (" + " | ".join(f"x:{g}" for g in sorted(_GOAL_CELLS)) + ")"
        return CatalogEntry(name, system, TaskSpec(formula=parse(text), grounding="state"), text, "state")
    raise ValueError(f"unknown catalog name {name!r}; expected one of {CATALOG_NAMES}")
