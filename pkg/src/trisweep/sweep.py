"""Transport of sections across a swept surface, one triangle move at a time.

A section over an edge-path is a word of group elements, one letter per
step.  Each oriented triangle with a value phi rewrites these words:

* expanding an edge (a,b) across the triangle a.c.b sends the letter w to
  the pair (w, phi); merging the two sides back sends (u, v) to
  u * v * phi^-1, the exact inverse.
* expanding a degenerate loop (c,c) across the boundary cell c.a.b.c
  yields the letters (e, w, phi) over (ca, ab, bc); collapsing the
  boundary is again the exact inverse.

Running a whole scheme composes these moves.  Comparing the final word to
the initial one over the same path, letter by letter, gives the defect
word of the swept surface; the four-move square around two faces sharing
an edge measures the curvature of the cell values, and with a trivial
connective structure the admissible cell values are forced into the
center of the group.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional, Sequence

from .bundle import Connection1, GaugeTransform
from .complexes import SimplicialComplex
from .errors import BundleError, GroupError, SchemeError, SweepError
from .groups import (
    GroupDescriptor,
    GroupElement,
    descriptor_from_json,
    enumerate_elements,
    format_element,
    identity,
    inverse,
    is_finite,
    multiply,
    parse_element,
)
from .paths import EdgePath, HomotopyStep, SweepScheme, apply_move_path


@dataclass(frozen=True)
class Connection2:
    """Edge values plus one group element per named oriented triangle.

    Alpha keys are (source, apex, target) triples; the starred cell is
    never stored, its value is the inverse on demand.  Distinct markings
    of one face are independent entries unless a relation table
    identified them at load time.  Loop-cell (beta) values are derived
    from the matching alpha entry unless supplied explicitly.
    """

    base: Connection1
    alpha_values: tuple[tuple[tuple[str, str, str], GroupElement], ...]
    beta_values: tuple[tuple[tuple[str, str, str], GroupElement], ...] = ()

    @classmethod
    def build(
        cls,
        base: Connection1,
        alpha: Mapping[tuple[str, str, str], GroupElement],
        beta: Mapping[tuple[str, str, str], GroupElement] | None = None,
    ) -> "Connection2":
        K = base.complex
        for (a, c, b), g in alpha.items():
            if len({a, c, b}) != 3 or not K.has_face(a, c, b):
                raise SweepError(f"cell {a}.{c}.{b} is not supported by a triangle of the complex")
            if g.group != base.group:
                raise SweepError(f"backend mismatch at cell {a}.{c}.{b}")
        beta = dict(beta or {})
        for (c, a, b), g in beta.items():
            if len({c, a, b}) != 3 or not K.has_face(c, a, b):
                raise SweepError(f"cell {c}.{a}.{b}.{c} is not supported by a triangle of the complex")
            if g.group != base.group:
                raise SweepError(f"backend mismatch at cell {c}.{a}.{b}.{c}")
        return cls(base, tuple(sorted(alpha.items())), tuple(sorted(beta.items())))

    @classmethod
    def flat(cls, group: GroupDescriptor, complex: SimplicialComplex) -> "Connection2":
        """All edges and all triangle cells carry the identity."""
        e = identity(group)
        base = Connection1.constant(group, complex, e)
        alpha = {}
        for tri in complex.sorted_triangles:
            for apex in tri:
                u, w = sorted(set(tri) - {apex})
                alpha[(u, apex, w)] = e
                alpha[(w, apex, u)] = e
        return cls.build(base, alpha)

    @property
    def group(self) -> GroupDescriptor:
        return self.base.group

    @property
    def complex(self) -> SimplicialComplex:
        return self.base.complex

    @cached_property
    def _alpha(self) -> dict[tuple[str, str, str], GroupElement]:
        return dict(self.alpha_values)

    @cached_property
    def _beta(self) -> dict[tuple[str, str, str], GroupElement]:
        return dict(self.beta_values)

    def alpha_value(self, a: str, c: str, b: str) -> GroupElement:
        got = self._alpha.get((a, c, b))
        if got is None:
            raise SweepError(f"missing cell value for {a}.{c}.{b}")
        return got

    def beta_value(self, c: str, a: str, b: str) -> GroupElement:
        got = self._beta.get((c, a, b))
        if got is not None:
            return got
        got = self._alpha.get((a, b, c))
        if got is None:
            raise SweepError(f"missing cell value for {c}.{a}.{b}.{c} (and no {a}.{b}.{c} to derive it)")
        return got


@dataclass(frozen=True)
class Section:
    """A word of group elements over an edge-path, one letter per step."""

    path: EdgePath
    letters: tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        if len(self.letters) != len(self.path.steps):
            raise SweepError(
                f"section has {len(self.letters)} letters over {len(self.path.steps)} steps"
            )
        groups = {l.group for l in self.letters}
        if len(groups) > 1:
            raise SweepError("section letters must share one backend")

    def word(self) -> GroupElement:
        """The ordered product of all letters."""
        out = self.letters[0]
        for l in self.letters[1:]:
            out = multiply(out, l)
        return out


@dataclass(frozen=True)
class SweepTrace:
    """Every intermediate section produced while running a scheme."""

    scheme: SweepScheme
    sections: tuple[Section, ...]

    @property
    def final(self) -> Section:
        return self.sections[-1]


@dataclass(frozen=True)
class DefectReport:
    """Letterwise quotient of a final section against the initial one."""

    path: EdgePath
    defects: tuple[GroupElement, ...]
    gauge_used: GaugeTransform

    def is_flat(self) -> bool:
        return all(d.is_identity() for d in self.defects)


def interior_vertices(path: EdgePath) -> frozenset[str]:
    """Vertices visited strictly inside the path, endpoints excluded."""
    chain = path.vertices
    return frozenset(chain[1:-1]) - {chain[0], chain[-1]}


# -- elementary moves on sections -----------------------------------------

def alpha_expand(
    section: Section,
    cell: tuple[str, str, str],
    position: int,
    connection: Connection2,
    identity_first: bool = False,
) -> Section:
    """Replace the letter w over (a,b) by (w, phi) over (a,c),(c,b).

    With ``identity_first`` the letters are (e, w*phi) instead: the same
    section re-gauged at the new interior vertex, matching the convention
    that parks the identity on the first new edge.
    """
    a, c, b = cell
    step = HomotopyStep("alpha_expand", position, cell)
    new_path = _move_path(section.path, step, connection)
    phi = connection.alpha_value(a, c, b)
    w = section.letters[position]
    if identity_first:
        pair = (identity(connection.group), multiply(w, phi))
    else:
        pair = (w, phi)
    letters = section.letters[:position] + pair + section.letters[position + 1 :]
    return Section(new_path, letters)


def alpha_merge(
    section: Section, cell: tuple[str, str, str], position: int, connection: Connection2
) -> Section:
    """Replace the letters (u, v) over (a,c),(c,b) by u*v*phi^-1 over (a,b)."""
    a, c, b = cell
    step = HomotopyStep("alpha_merge", position, cell)
    new_path = _move_path(section.path, step, connection)
    phi = connection.alpha_value(a, c, b)
    u, v = section.letters[position], section.letters[position + 1]
    merged = multiply(multiply(u, v), inverse(phi))
    letters = section.letters[:position] + (merged,) + section.letters[position + 2 :]
    return Section(new_path, letters)


def beta_expand(
    section: Section, cell: tuple[str, str, str, str], connection: Connection2, position: int = 0
) -> Section:
    """Expand the letter w over (c,c) to (e, w, phi) over (c,a),(a,b),(b,c)."""
    c, a, b, _ = cell
    step = HomotopyStep("beta_expand", position, cell)
    new_path = _move_path(section.path, step, connection)
    phi = connection.beta_value(c, a, b)
    w = section.letters[position]
    triple = (identity(connection.group), w, phi)
    letters = section.letters[:position] + triple + section.letters[position + 1 :]
    return Section(new_path, letters)


def beta_merge(
    section: Section, cell: tuple[str, str, str, str], connection: Connection2, position: int = 0
) -> Section:
    """Collapse the boundary letters (l1, l2, l3) to l1*l2*l3*phi^-1 over (c,c)."""
    c, a, b, _ = cell
    step = HomotopyStep("beta_merge", position, cell)
    new_path = _move_path(section.path, step, connection)
    phi = connection.beta_value(c, a, b)
    l1, l2, l3 = section.letters[position : position + 3]
    merged = multiply(multiply(multiply(l1, l2), l3), inverse(phi))
    letters = section.letters[:position] + (merged,) + section.letters[position + 3 :]
    return Section(new_path, letters)


def _move_path(path: EdgePath, step: HomotopyStep, connection: Connection2) -> EdgePath:
    try:
        return apply_move_path(path, step, connection.complex)
    except SchemeError as exc:
        raise SweepError(str(exc)) from exc


def apply_move_section(section: Section, step: HomotopyStep, connection: Connection2) -> Section:
    """Apply one homotopy move to a section.

    Triangle moves use the cell values of the connection.  The
    bookkeeping moves keep the ordered product of the letters: inserted
    steps carry identity letters, and a dropped or cancelled stretch
    folds its letters into the following letter (into the preceding one
    at the end of the path).
    """
    move, i = step.move, step.position
    if move == "alpha_expand":
        return alpha_expand(section, step.cell, i, connection)
    if move == "alpha_merge":
        return alpha_merge(section, step.cell, i, connection)
    if move == "beta_expand":
        return beta_expand(section, step.cell, connection, i)
    if move == "beta_merge":
        return beta_merge(section, step.cell, connection, i)

    new_path = _move_path(section.path, step, connection)
    e = identity(section.letters[0].group if section.letters else connection.group)
    letters = section.letters
    if move == "x1_insert":
        new_letters = letters[:i] + (e, e) + letters[i:]
    elif move == "deg_insert":
        new_letters = letters[:i] + (e,) + letters[i:]
    elif move == "x1_cancel":
        folded = multiply(letters[i], letters[i + 1])
        rest = letters[:i] + letters[i + 2 :]
        new_letters = _fold_in(rest, i, folded, e)
    elif move == "deg_drop":
        folded = letters[i]
        rest = letters[:i] + letters[i + 1 :]
        new_letters = _fold_in(rest, i, folded, e)
    else:
        raise SweepError(f"unknown move {move!r}")
    return Section(new_path, new_letters)


def _fold_in(
    rest: tuple[GroupElement, ...], at: int, folded: GroupElement, e: GroupElement
) -> tuple[GroupElement, ...]:
    if not rest:
        return (folded,)
    if at < len(rest):
        return rest[:at] + (multiply(folded, rest[at]),) + rest[at + 1 :]
    return rest[:-1] + (multiply(rest[-1], folded),)


def run_scheme(start: Section, scheme: SweepScheme, connection: Connection2) -> SweepTrace:
    """Apply every move of the scheme in order and record each section."""
    if start.path != scheme.start_path:
        raise SweepError("section path does not match the scheme start path")
    sections = [start]
    current = start
    for idx, step in enumerate(scheme.steps):
        try:
            current = apply_move_section(current, step, connection)
        except SweepError as exc:
            raise SweepError(f"step {idx}: {exc}", step_index=idx) from exc
        sections.append(current)
    return SweepTrace(scheme, tuple(sections))


# -- gauge action on sections ----------------------------------------------

def twist_section(section: Section, gauge: GaugeTransform) -> Section:
    """Twist each letter over (p, q) into n_p^-1 * letter * n_q."""
    letters = tuple(
        multiply(multiply(inverse(gauge.get(p)), l), gauge.get(q))
        for (p, q), l in zip(section.path.steps, section.letters)
    )
    return Section(section.path, letters)


def sections_gauge_equivalent(
    s: Section, t: Section, movable: frozenset[str] | set[str]
) -> Optional[GaugeTransform]:
    """Find a gauge supported on ``movable`` with twist(s) == t, or None.

    The constraints chain along the path, so every assignment is forced
    by the value at the first vertex.  Finite backends enumerate that
    value when the first vertex is movable; the free backend starts from
    the identity, which is the canonical choice when the endpoints are
    pinned.
    """
    if s.path != t.path:
        raise SweepError("sections live over different paths")
    if not s.letters or not t.letters:
        raise SweepError("sections must carry letters")
    group = s.letters[0].group
    if t.letters[0].group != group:
        raise GroupError("backend mismatch between the two sections")
    chain = s.path.vertices
    e = identity(group)

    if chain[0] in movable and is_finite(group):
        candidates = enumerate_elements(group)
    else:
        candidates = [e]

    for first in candidates:
        assign: dict[str, GroupElement] = {}

        def lookup(v: str) -> GroupElement:
            return assign.get(v, e)

        ok = True
        if chain[0] in movable:
            assign[chain[0]] = first
        for (p, q), sl, tl in zip(s.path.steps, s.letters, t.letters):
            needed = multiply(multiply(inverse(sl), lookup(p)), tl)
            if q in movable:
                if q in assign:
                    if assign[q] != needed:
                        ok = False
                        break
                else:
                    assign[q] = needed
            else:
                if needed != e:
                    ok = False
                    break
        if not ok:
            continue
        gauge = GaugeTransform.build(group, assign)
        if twist_section(s, gauge) == t:
            return gauge
    return None


# -- two-holonomy and scheme comparison --------------------------------------

def two_holonomy(initial: Section, final: Section) -> DefectReport:
    """Letterwise defects of the final section against the initial one.

    Uses the canonical identity gauge on the interior vertices; the gauge
    is reported so alternative choices can be recomputed by re-twisting.
    """
    if initial.path != final.path:
        raise SweepError("sections live over different paths")
    group = initial.letters[0].group
    if final.letters[0].group != group:
        raise GroupError("backend mismatch between the two sections")
    gauge = GaugeTransform.build(group, {v: identity(group) for v in sorted(interior_vertices(initial.path))})
    gauged_final = twist_section(final, gauge)
    defects = tuple(multiply(inverse(a), b) for a, b in zip(initial.letters, gauged_final.letters))
    return DefectReport(initial.path, defects, gauge)


@dataclass(frozen=True)
class SchemeComparison:
    verdict: str  # "equal" | "gauge_equivalent" | "different"
    quotient: tuple[GroupElement, ...]
    gauge: Optional[GaugeTransform] = None


def compare_schemes(
    scheme1: SweepScheme, scheme2: SweepScheme, start: Section, connection: Connection2
) -> SchemeComparison:
    """Run both schemes from the same section and compare the final words.

    The quotient letters are final1^-1 * final2, letter by letter.  When
    the words differ, a gauge supported on the interior vertices of the
    final path is searched; success downgrades "different" to
    "gauge_equivalent".
    """
    if scheme1.start_path != scheme2.start_path:
        raise SweepError("schemes start on different paths")
    f1 = run_scheme(start, scheme1, connection).final
    f2 = run_scheme(start, scheme2, connection).final
    if f1.path != f2.path:
        raise SweepError("endpoint mismatch: schemes end on different paths")
    quotient = tuple(multiply(inverse(a), b) for a, b in zip(f1.letters, f2.letters))
    if f1 == f2:
        return SchemeComparison("equal", quotient)
    gauge = sections_gauge_equivalent(f1, f2, interior_vertices(f1.path))
    if gauge is not None:
        return SchemeComparison("gauge_equivalent", quotient, gauge)
    return SchemeComparison("different", quotient)


def curvature_square(
    a: str, b: str, c: str, d: str, start: Section, connection: Connection2
) -> DefectReport:
    """Sweep the four-move square over the faces {a,b,c} and {b,c,d}.

    The section starts and ends over (a,b),(b,d); the defect report
    measures how far the cell values are from flat.
    """
    expected = EdgePath(((a, b), (b, d)))
    if start.path != expected:
        raise SweepError(f"curvature square needs a section over {expected}")
    moves = (
        HomotopyStep("alpha_expand", 0, (a, c, b)),
        HomotopyStep("alpha_merge", 1, (c, b, d)),
        HomotopyStep("alpha_expand", 0, (a, b, c)),
        HomotopyStep("alpha_merge", 1, (b, c, d)),
    )
    trace = run_scheme(start, SweepScheme(expected, moves), connection)
    return two_holonomy(start, trace.final)


def center_obstruction_check(group: GroupDescriptor) -> list[GroupElement]:
    """Admissible cell values under a trivial connective structure.

    Brute force over all pairs: the elements whose commutator with every
    element is the identity.  Coincides with the center of the group.
    """
    if not is_finite(group):
        raise GroupError("infinite backend: obstruction check needs a finite group")
    elems = enumerate_elements(group)
    e = identity(group)
    out = []
    for phi in elems:
        if all(multiply(multiply(multiply(phi, u), inverse(phi)), inverse(u)) == e for u in elems):
            out.append(phi)
    return out


# -- connection file format ---------------------------------------------------

_CONNECTION_KEYS = {"group", "edges", "cells", "cell_relations"}


def _parse_edge_key(key: str) -> tuple[str, str]:
    if key.count(">") != 1:
        raise BundleError(f'bad edge key {key!r}: expected "a>b"')
    a, b = key.split(">")
    if not a or not b:
        raise BundleError(f"bad edge key {key!r}")
    return a, b


def _parse_cell_key(key: str) -> tuple[str, ...]:
    parts = tuple(key.split("."))
    if len(parts) == 3 and len(set(parts)) == 3:
        return parts
    if len(parts) == 4 and parts[0] == parts[-1] and len(set(parts)) == 3:
        return parts
    raise BundleError(f'bad cell key {key!r}: expected "a.c.b" or "c.a.b.c"')


def load_connection(
    text: str, complex: SimplicialComplex, group: GroupDescriptor | None = None
) -> Connection1 | Connection2:
    """Parse the JSON connection format against a complex.

    Returns a plain edge connection when the file has no "cells" block.
    ``group`` overrides the declared descriptor, e.g. to extend a free
    group with extra generators before parsing.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"connection parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise BundleError("connection file must hold a JSON object")
    unknown = set(obj) - _CONNECTION_KEYS
    if unknown:
        raise BundleError(f"unknown keys: {sorted(unknown)}")
    if "group" not in obj or "edges" not in obj:
        raise BundleError('connection file needs "group" and "edges"')
    declared = descriptor_from_json(obj["group"])
    if group is None:
        group = declared
    if not isinstance(obj["edges"], dict):
        raise BundleError('"edges" must be an object of "a>b" keys')
    edge_values = {
        _parse_edge_key(k): parse_element(v, group) for k, v in obj["edges"].items()
    }
    base = Connection1.build(group, complex, edge_values)
    if "cells" not in obj and "cell_relations" not in obj:
        return base

    cells = obj.get("cells", {})
    if not isinstance(cells, dict):
        raise BundleError('"cells" must be an object')
    alpha: dict[tuple[str, str, str], GroupElement] = {}
    beta: dict[tuple[str, str, str], GroupElement] = {}
    for key, val in cells.items():
        parts = _parse_cell_key(key)
        g = parse_element(val, group)
        if len(parts) == 3:
            alpha[parts] = g
        else:
            beta[parts[:3]] = g

    relations = obj.get("cell_relations", [])
    if not isinstance(relations, list):
        raise BundleError('"cell_relations" must be a list')
    for rel in relations:
        if not (isinstance(rel, list) and len(rel) == 3 and all(isinstance(x, str) for x in rel)):
            raise BundleError(f"bad cell relation {rel!r}: expected [name, name, kind]")
        left, right, kind = rel
        if kind not in ("equal", "inverse"):
            raise BundleError(f"unknown cell relation kind {kind!r}")
        lk, rk = _parse_cell_key(left), _parse_cell_key(right)
        if len(lk) != 3 or len(rk) != 3:
            raise BundleError("cell relations apply to triangle cells only")
        have_l, have_r = lk in alpha, rk in alpha
        if have_l and have_r:
            want = alpha[lk] if kind == "equal" else inverse(alpha[lk])
            if alpha[rk] != want:
                raise BundleError(f"cell relation {rel!r} violated by supplied values")
        elif have_l:
            alpha[rk] = alpha[lk] if kind == "equal" else inverse(alpha[lk])
        elif have_r:
            alpha[lk] = alpha[rk] if kind == "equal" else inverse(alpha[rk])
        else:
            raise BundleError(f"cell relation {rel!r} references values that are not present")

    for (c, a, b), g in beta.items():
        derived = alpha.get((a, b, c))
        if derived is None or derived != g:
            warnings.warn(
                f"independent loop-cell value for {c}.{a}.{b}.{c}; "
                "it will not be derived from a triangle cell",
                stacklevel=2,
            )
    return Connection2.build(base, alpha, beta)


def section_to_json(section: Section) -> dict:
    return {
        "path": [[x, y] for x, y in section.path.steps],
        "letters": [format_element(l) for l in section.letters],
    }


def trace_to_json(trace: SweepTrace) -> list[dict]:
    return [section_to_json(s) for s in trace.sections]


def defect_report_to_json(report: DefectReport) -> dict:
    return {
        "path": [[x, y] for x, y in report.path.steps],
        "defects": [format_element(d) for d in report.defects],
        "gauge": {v: format_element(g) for v, g in report.gauge_used.values},
    }


def parse_word_letters(texts: Sequence[str], group: GroupDescriptor) -> tuple[GroupElement, ...]:
    return tuple(parse_element(t, group) for t in texts)
