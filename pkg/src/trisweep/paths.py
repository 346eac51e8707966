"""Edge-paths on a triangulated surface and the rewriting moves between them.

An edge-path is a composable sequence of ordered vertex pairs; a pair
``(x, x)`` is a degenerate step and acts as the identity at ``x``.  Paths
compose by concatenation (degenerate steps collapse), invert by reversal,
and reduce to a normal form with no adjacent opposite pair and no removable
degenerate step.

A homotopy between two paths is a sequence of elementary moves: expanding
an edge across a triangle (or merging the two sides back), expanding a
degenerate loop to a triangle boundary (or collapsing it), inserting or
cancelling an opposite pair of edges, and inserting or dropping degenerate
steps.  ``validate_scheme`` replays such a sequence against a complex and
``search_homotopy`` looks for one by bounded breadth-first search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import PathError, SchemeError

Step = tuple[str, str]

MOVES = (
    "alpha_expand",
    "alpha_merge",
    "beta_expand",
    "beta_merge",
    "x1_insert",
    "x1_cancel",
    "deg_insert",
    "deg_drop",
)


@dataclass(frozen=True)
class EdgePath:
    """A nonempty composable sequence of ordered vertex pairs."""

    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        if not self.steps:
            raise PathError("empty edge-path is not allowed; use an identity path")
        for (x, y), (x2, _y2) in zip(self.steps, self.steps[1:]):
            if y != x2:
                raise PathError(f"steps ({x},{y}) and ({x2},{_y2}) are not composable")

    @classmethod
    def from_vertices(cls, *chain: str) -> "EdgePath":
        """Build a path from a chain of vertices; a single vertex gives the identity."""
        if not chain:
            raise PathError("at least one vertex is required")
        if len(chain) == 1:
            return cls.identity(chain[0])
        return cls(tuple(zip(chain, chain[1:])))

    @classmethod
    def identity(cls, vertex: str) -> "EdgePath":
        return cls(((vertex, vertex),))

    @property
    def source(self) -> str:
        return self.steps[0][0]

    @property
    def target(self) -> str:
        return self.steps[-1][1]

    @property
    def vertices(self) -> tuple[str, ...]:
        """The vertex chain v0..vn visited by the path."""
        return (self.steps[0][0],) + tuple(y for _x, y in self.steps)

    def is_loop(self) -> bool:
        return self.source == self.target

    def is_identity(self) -> bool:
        return len(self.steps) == 1 and self.steps[0][0] == self.steps[0][1]

    def compose(self, other: "EdgePath") -> "EdgePath":
        return compose_paths(self, other)

    def inverse(self) -> "EdgePath":
        return invert_path(self)

    def __mul__(self, other: "EdgePath") -> "EdgePath":
        return compose_paths(self, other)

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "(" + ",".join(f"{x}>{y}" for x, y in self.steps) + ")"


def _drop_removable_degenerates(steps: Sequence[Step], source: str) -> EdgePath:
    kept = tuple(s for s in steps if s[0] != s[1])
    if not kept:
        return EdgePath.identity(source)
    return EdgePath(kept)


def compose_paths(p: EdgePath, q: EdgePath) -> EdgePath:
    """Concatenate two paths; removable degenerate steps are dropped."""
    if p.target != q.source:
        raise PathError(
            f"endpoint mismatch: cannot compose path into {p.target} with path from {q.source}"
        )
    return _drop_removable_degenerates(p.steps + q.steps, p.source)


def invert_path(p: EdgePath) -> EdgePath:
    """Reverse the step order and each step."""
    return EdgePath(tuple((y, x) for x, y in reversed(p.steps)))


def reduce_x1(p: EdgePath) -> EdgePath:
    """Normal form: no adjacent opposite pair, no removable degenerate step.

    Free reduction is confluent, so the result does not depend on the
    cancellation order.  Endpoints are preserved; a path that cancels away
    completely becomes the identity at its source.
    """
    stack: list[Step] = []
    for step in p.steps:
        if step[0] == step[1]:
            continue
        if stack and stack[-1] == (step[1], step[0]):
            stack.pop()
        else:
            stack.append(step)
    if not stack:
        return EdgePath.identity(p.source)
    return EdgePath(tuple(stack))


def x1_homotopic(p: EdgePath, q: EdgePath) -> bool:
    """True iff the endpoints agree and the reduced forms coincide."""
    if p.source != q.source or p.target != q.target:
        return False
    return reduce_x1(p) == reduce_x1(q)


def insert_degenerate(p: EdgePath, k: int) -> EdgePath:
    """Insert the degenerate step at the k-th vertex of the chain (0 <= k <= len)."""
    if not 0 <= k <= len(p.steps):
        raise PathError(f"insert position {k} out of range for path of length {len(p.steps)}")
    v = p.vertices[k]
    return EdgePath(p.steps[:k] + ((v, v),) + p.steps[k:])


def drop_degenerate(p: EdgePath, idx: int) -> EdgePath:
    """Remove the degenerate step at ``idx``; the path must keep at least one step."""
    if not 0 <= idx < len(p.steps):
        raise PathError(f"drop position {idx} out of range")
    x, y = p.steps[idx]
    if x != y:
        raise PathError(f"step ({x},{y}) at position {idx} is not degenerate")
    if len(p.steps) < 2:
        raise PathError("cannot drop the only step of an identity path")
    return EdgePath(p.steps[:idx] + p.steps[idx + 1 :])


@dataclass(frozen=True)
class HomotopyStep:
    """One elementary move, applied at a step index of the current path.

    ``cell`` is a vertex tuple whose length encodes its meaning: three
    vertices ``(a, c, b)`` name the triangle cell with marked pair (a, b)
    and third vertex c; four vertices ``(c, a, b, c)`` name the loop cell
    based at c; two vertices give the edge pair used by ``x1_insert``.
    Bookkeeping moves carry no cell.
    """

    move: str
    position: int
    cell: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.move not in MOVES:
            raise SchemeError(f"unknown move {self.move!r}")
        if self.position < 0:
            raise SchemeError(f"negative position {self.position}")
        want = {"alpha_expand": 3, "alpha_merge": 3, "beta_expand": 4, "beta_merge": 4, "x1_insert": 2}
        if self.move in want:
            if self.cell is None or len(self.cell) != want[self.move]:
                raise SchemeError(f"move {self.move} needs a cell with {want[self.move]} vertices")
            if self.move in ("beta_expand", "beta_merge") and self.cell[0] != self.cell[-1]:
                raise SchemeError(f"loop cell {'.'.join(self.cell)} must start and end at the same vertex")
        elif self.cell is not None:
            raise SchemeError(f"move {self.move} takes no cell")


@dataclass(frozen=True)
class SweepScheme:
    """A start path together with a sequence of homotopy moves."""

    start_path: EdgePath
    steps: tuple[HomotopyStep, ...]


def _require_face(complex, a: str, b: str, c: str, what: str) -> None:
    if len({a, b, c}) != 3 or not complex.has_face(a, b, c):
        raise SchemeError(f"cell not supported: {what} needs triangle {{{a},{b},{c}}} in the complex")


def apply_move_path(path: EdgePath, step: HomotopyStep, complex) -> EdgePath:
    """Apply one move to a bare path, checking it against the complex."""
    steps = path.steps
    n = len(steps)
    i = step.position
    move = step.move

    if move == "alpha_expand":
        a, c, b = step.cell
        if i >= n:
            raise SchemeError(f"position {i} out of range")
        if steps[i] != (a, b):
            raise SchemeError(f"path mismatch: step {i} is {steps[i]}, cell expects ({a},{b})")
        _require_face(complex, a, b, c, f"{a}.{c}.{b}")
        return EdgePath(steps[:i] + ((a, c), (c, b)) + steps[i + 1 :])

    if move == "alpha_merge":
        a, c, b = step.cell
        if i >= n - 1:
            raise SchemeError(f"position {i} out of range for a two-step merge")
        if steps[i] != (a, c) or steps[i + 1] != (c, b):
            raise SchemeError(
                f"path mismatch: steps {i},{i + 1} are {steps[i]},{steps[i + 1]}, "
                f"cell expects ({a},{c}),({c},{b})"
            )
        _require_face(complex, a, b, c, f"{a}.{c}.{b}")
        return EdgePath(steps[:i] + ((a, b),) + steps[i + 2 :])

    if move == "beta_expand":
        c, a, b, _c2 = step.cell
        if i >= n:
            raise SchemeError(f"position {i} out of range")
        if steps[i] != (c, c):
            raise SchemeError(f"path mismatch: step {i} is {steps[i]}, expected degenerate ({c},{c})")
        _require_face(complex, c, a, b, f"{c}.{a}.{b}.{c}")
        return EdgePath(steps[:i] + ((c, a), (a, b), (b, c)) + steps[i + 1 :])

    if move == "beta_merge":
        c, a, b, _c2 = step.cell
        if i >= n - 2:
            raise SchemeError(f"position {i} out of range for a three-step merge")
        if steps[i : i + 3] != ((c, a), (a, b), (b, c)):
            raise SchemeError(
                f"path mismatch: steps {i}..{i + 2} do not trace the boundary ({c},{a}),({a},{b}),({b},{c})"
            )
        _require_face(complex, c, a, b, f"{c}.{a}.{b}.{c}")
        return EdgePath(steps[:i] + ((c, c),) + steps[i + 3 :])

    if move == "x1_insert":
        x, y = step.cell
        if i > n:
            raise SchemeError(f"insert position {i} out of range")
        if path.vertices[i] != x:
            raise SchemeError(f"pair ({x},{y}) does not start at vertex {path.vertices[i]} (position {i})")
        if x == y or not complex.has_edge(x, y):
            raise SchemeError(f"cell not supported: {{{x},{y}}} is not an edge of the complex")
        return EdgePath(steps[:i] + ((x, y), (y, x)) + steps[i:])

    if move == "x1_cancel":
        if i >= n - 1:
            raise SchemeError(f"position {i} out of range for a pair cancellation")
        (x, y), nxt = steps[i], steps[i + 1]
        if nxt != (y, x):
            raise SchemeError(f"steps {i},{i + 1} are {steps[i]},{nxt}, not an opposite pair")
        remaining = steps[:i] + steps[i + 2 :]
        if not remaining:
            return EdgePath.identity(path.source)
        return EdgePath(remaining)

    if move == "deg_insert":
        if i > n:
            raise SchemeError(f"insert position {i} out of range")
        return insert_degenerate(path, i)

    if move == "deg_drop":
        if i >= n:
            raise SchemeError(f"position {i} out of range")
        try:
            return drop_degenerate(path, i)
        except PathError as exc:
            raise SchemeError(str(exc)) from exc

    raise SchemeError(f"unknown move {move!r}")


def validate_scheme(scheme: SweepScheme, complex) -> list[EdgePath]:
    """Replay a scheme and return every intermediate path, start included.

    Raises ``SchemeError`` (with the step index) on an invalid move or if
    an intermediate path drifts away from the shared endpoints.
    """
    current = scheme.start_path
    out = [current]
    s0, t0 = current.source, current.target
    for idx, step in enumerate(scheme.steps):
        try:
            current = apply_move_path(current, step, complex)
        except SchemeError as exc:
            raise SchemeError(f"step {idx}: {exc}", step_index=idx) from exc
        if current.source != s0 or current.target != t0:
            raise SchemeError(f"step {idx}: endpoint drift to ({current.source},{current.target})", step_index=idx)
        out.append(current)
    return out


def _candidate_moves(path: EdgePath, complex) -> Iterator[HomotopyStep]:
    steps = path.steps
    chain = path.vertices
    n = len(steps)
    for i in range(n):
        x, y = steps[i]
        if x == y:
            if n >= 2:
                yield HomotopyStep("deg_drop", i)
            for face in complex.faces_containing(x):
                others = sorted(face - {x})
                for a, b in ((others[0], others[1]), (others[1], others[0])):
                    yield HomotopyStep("beta_expand", i, (x, a, b, x))
        else:
            for face in complex.faces_containing_edge(x, y):
                (apex,) = face - {x, y}
                yield HomotopyStep("alpha_expand", i, (x, apex, y))
    for i in range(n - 1):
        (x, y), (x2, y2) = steps[i], steps[i + 1]
        if (y2, x2) == (x, y) and x != y:
            yield HomotopyStep("x1_cancel", i)
        if x != y and y == x2 and x != y2 and complex.has_face(x, y, y2):
            yield HomotopyStep("alpha_merge", i, (x, y, y2))
    for i in range(n - 2):
        (c, a), (a2, b), (b2, c2) = steps[i], steps[i + 1], steps[i + 2]
        if a == a2 and b == b2 and c == c2 and len({c, a, b}) == 3 and complex.has_face(c, a, b):
            yield HomotopyStep("beta_merge", i, (c, a, b, c))
    for k in range(n + 1):
        yield HomotopyStep("deg_insert", k)
        v = chain[k]
        for w in complex.neighbors(v):
            yield HomotopyStep("x1_insert", k, (v, w))


def search_homotopy(p: EdgePath, q: EdgePath, complex, depth_bound: int) -> Optional[SweepScheme]:
    """Breadth-first search for a scheme from p to q with at most depth_bound moves.

    Returns None when no scheme exists within the bound; this is
    inconclusive for homotopy in general.
    """
    if p.source != q.source or p.target != q.target:
        raise PathError("endpoints of the two paths must agree")
    if p == q:
        return SweepScheme(p, ())
    parents: dict[EdgePath, tuple[EdgePath, HomotopyStep]] = {}
    seen = {p}
    frontier = [p]

    def rebuild(last: EdgePath) -> SweepScheme:
        moves: list[HomotopyStep] = []
        cur = last
        while cur != p:
            prev, step = parents[cur]
            moves.append(step)
            cur = prev
        return SweepScheme(p, tuple(reversed(moves)))

    for _depth in range(depth_bound):
        nxt: list[EdgePath] = []
        for cur in frontier:
            for step in _candidate_moves(cur, complex):
                new = apply_move_path(cur, step, complex)
                if new in seen:
                    continue
                seen.add(new)
                parents[new] = (cur, step)
                if new == q:
                    return rebuild(new)
                nxt.append(new)
        frontier = nxt
        if not frontier:
            break
    return None


# -- scheme file format -------------------------------------------------------

def _cell_from_text(text: str) -> tuple[str, ...]:
    if "." in text:
        parts = tuple(text.split("."))
    else:
        # dotless shorthand: each character is a single-letter vertex name
        parts = tuple(text)
    if any(not tok for tok in parts):
        raise SchemeError(f"bad cell name {text!r}")
    return parts


def cell_name(cell: tuple[str, ...]) -> str:
    return ".".join(cell)


def load_scheme(text: str) -> SweepScheme:
    """Parse the JSON scheme format into a SweepScheme."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeError(f"scheme parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise SchemeError("scheme file must hold a JSON object")
    unknown = set(obj) - {"start", "steps"}
    if unknown:
        raise SchemeError(f"unknown scheme keys: {sorted(unknown)}")
    if "start" not in obj or "steps" not in obj:
        raise SchemeError('scheme file needs "start" and "steps"')
    raw_start = obj["start"]
    if not isinstance(raw_start, list) or not all(
        isinstance(s, list) and len(s) == 2 and all(isinstance(v, str) for v in s) for s in raw_start
    ):
        raise SchemeError('"start" must be a list of [from, to] vertex pairs')
    try:
        start = EdgePath(tuple((s[0], s[1]) for s in raw_start))
    except PathError as exc:
        raise SchemeError(f"bad start path: {exc}") from exc
    moves: list[HomotopyStep] = []
    if not isinstance(obj["steps"], list):
        raise SchemeError('"steps" must be a list')
    for k, raw in enumerate(obj["steps"]):
        if not isinstance(raw, dict):
            raise SchemeError(f"step {k} must be an object")
        unknown = set(raw) - {"move", "cell", "position"}
        if unknown:
            raise SchemeError(f"step {k}: unknown keys {sorted(unknown)}")
        move = raw.get("move")
        position = raw.get("position")
        if not isinstance(move, str) or not isinstance(position, int):
            raise SchemeError(f'step {k}: needs string "move" and integer "position"')
        cell = None
        if "cell" in raw and raw["cell"] is not None:
            if not isinstance(raw["cell"], str):
                raise SchemeError(f'step {k}: "cell" must be a string')
            cell = _cell_from_text(raw["cell"])
        try:
            moves.append(HomotopyStep(move, position, cell))
        except SchemeError as exc:
            raise SchemeError(f"step {k}: {exc}") from exc
    return SweepScheme(start, tuple(moves))


def dump_scheme(scheme: SweepScheme) -> str:
    """Serialize a scheme back to its JSON file format."""
    steps = []
    for st in scheme.steps:
        entry: dict = {"move": st.move, "position": st.position}
        if st.cell is not None:
            entry["cell"] = cell_name(st.cell)
        steps.append(entry)
    obj = {"start": [[x, y] for x, y in scheme.start_path.steps], "steps": steps}
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
