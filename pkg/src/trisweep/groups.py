"""Pluggable group backends with decidable normal forms.

Backends
--------
free        reduced words over named generators, ``{"free": ["x", "y"]}``
cyclic      residues modulo n, ``{"cyclic": 12}``
symmetric   permutations of {1..n} in one-line form, ``{"symmetric": 3}``
dihedral    symmetries of the regular n-gon, ``{"dihedral": 4}``
product     tuples over factor backends, ``{"product": [...]}``

Element grammar
---------------
free / dihedral   ``gen ('^' int)? ('*' gen ('^' int)?)*`` or ``e``
cyclic            a residue literal in ``[0, n)``
symmetric         cycle notation ``(1 2 3)(4 5)``, one-line ``[2,3,1]``, or ``e``
product           a JSON array with one entry per factor

Products of elements are written left to right throughout the package, so
``multiply(a, b)`` is "a then b" in every formula involving words.  For the
permutation backend the action order is fixed by the normal-form example
(1 2)*(2 3) = (1 2 3).
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

from .errors import GroupError

Matrix = tuple[tuple[Any, ...], ...]


@dataclass(frozen=True)
class GroupDescriptor:
    """Tagged description of one group backend."""

    kind: str
    generators: tuple[str, ...] = ()
    modulus: int = 0
    degree: int = 0
    factors: tuple["GroupDescriptor", ...] = ()


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def free_group(generators: Iterable[str]) -> GroupDescriptor:
    gens = tuple(generators)
    if len(set(gens)) != len(gens):
        raise GroupError("generator names must be distinct")
    for g in gens:
        if not _NAME_RE.fullmatch(g) or g == "e":
            raise GroupError(f"bad generator name {g!r}")
    return GroupDescriptor("free", generators=gens)


def cyclic_group(n: int) -> GroupDescriptor:
    if n < 1:
        raise GroupError("cyclic modulus must be >= 1")
    return GroupDescriptor("cyclic", modulus=n)


def symmetric_group(n: int) -> GroupDescriptor:
    if n < 1:
        raise GroupError("symmetric degree must be >= 1")
    return GroupDescriptor("symmetric", degree=n)


def dihedral_group(n: int) -> GroupDescriptor:
    if n < 1:
        raise GroupError("dihedral order parameter must be >= 1")
    return GroupDescriptor("dihedral", modulus=n)


def product_group(*factors: GroupDescriptor) -> GroupDescriptor:
    if not factors:
        raise GroupError("product needs at least one factor")
    return GroupDescriptor("product", factors=tuple(factors))


def descriptor_to_json(group: GroupDescriptor) -> dict:
    if group.kind == "free":
        return {"free": list(group.generators)}
    if group.kind == "cyclic":
        return {"cyclic": group.modulus}
    if group.kind == "symmetric":
        return {"symmetric": group.degree}
    if group.kind == "dihedral":
        return {"dihedral": group.modulus}
    if group.kind == "product":
        return {"product": [descriptor_to_json(f) for f in group.factors]}
    raise GroupError(f"unknown backend {group.kind!r}")


def descriptor_from_json(obj: Any) -> GroupDescriptor:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise GroupError("group descriptor must be a single-key object")
    (kind, arg), = obj.items()
    if kind == "free":
        if not isinstance(arg, list) or not all(isinstance(g, str) for g in arg):
            raise GroupError('"free" takes a list of generator names')
        return free_group(arg)
    if kind in ("cyclic", "symmetric", "dihedral"):
        if not isinstance(arg, int) or isinstance(arg, bool):
            raise GroupError(f'"{kind}" takes an integer parameter')
        return {"cyclic": cyclic_group, "symmetric": symmetric_group, "dihedral": dihedral_group}[kind](arg)
    if kind == "product":
        if not isinstance(arg, list):
            raise GroupError('"product" takes a list of descriptors')
        return product_group(*(descriptor_from_json(f) for f in arg))
    raise GroupError(f"unknown backend {kind!r}")


@dataclass(frozen=True)
class GroupElement:
    """An element in normal form; equality and hashing are structural."""

    group: GroupDescriptor
    payload: Any

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def is_identity(self) -> bool:
        return self == identity(self.group)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_element(self)


def _reduce_free(syllables: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    stack: list[tuple[str, int]] = []
    for g, k in syllables:
        if k == 0:
            continue
        if stack and stack[-1][0] == g:
            merged = stack[-1][1] + k
            stack.pop()
            if merged:
                stack.append((g, merged))
        else:
            stack.append((g, k))
    return tuple(stack)


def element(group: GroupDescriptor, payload: Any) -> GroupElement:
    """Normalizing constructor; validates the payload for the backend."""
    if group.kind == "free":
        raw = tuple((str(g), int(k)) for g, k in payload)
        for g, _k in raw:
            if g not in group.generators:
                raise GroupError(f"unknown generator {g!r}")
        return GroupElement(group, _reduce_free(raw))
    if group.kind == "cyclic":
        return GroupElement(group, int(payload) % group.modulus)
    if group.kind == "symmetric":
        images = tuple(int(v) for v in payload)
        if sorted(images) != list(range(1, group.degree + 1)):
            raise GroupError(f"{images!r} is not a permutation of 1..{group.degree}")
        return GroupElement(group, images)
    if group.kind == "dihedral":
        rot, flip = payload
        return GroupElement(group, (int(rot) % group.modulus, int(flip) % 2))
    if group.kind == "product":
        items = tuple(payload)
        if len(items) != len(group.factors):
            raise GroupError(f"product element needs {len(group.factors)} components")
        for item, factor in zip(items, group.factors):
            if not isinstance(item, GroupElement) or item.group != factor:
                raise GroupError("product component does not match its factor backend")
        return GroupElement(group, items)
    raise GroupError(f"unknown backend {group.kind!r}")


def identity(group: GroupDescriptor) -> GroupElement:
    if group.kind == "free":
        return GroupElement(group, ())
    if group.kind == "cyclic":
        return GroupElement(group, 0)
    if group.kind == "symmetric":
        return GroupElement(group, tuple(range(1, group.degree + 1)))
    if group.kind == "dihedral":
        return GroupElement(group, (0, 0))
    if group.kind == "product":
        return GroupElement(group, tuple(identity(f) for f in group.factors))
    raise GroupError(f"unknown backend {group.kind!r}")


def _check_same_backend(a: GroupElement, b: GroupElement) -> None:
    if a.group != b.group:
        raise GroupError("backend mismatch: elements live in different groups")


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same_backend(a, b)
    g = a.group
    if g.kind == "free":
        return GroupElement(g, _reduce_free(a.payload + b.payload))
    if g.kind == "cyclic":
        return GroupElement(g, (a.payload + b.payload) % g.modulus)
    if g.kind == "symmetric":
        return GroupElement(g, tuple(a.payload[b.payload[i] - 1] for i in range(g.degree)))
    if g.kind == "dihedral":
        i, fa = a.payload
        j, fb = b.payload
        rot = (i + (j if fa == 0 else -j)) % g.modulus
        return GroupElement(g, (rot, fa ^ fb))
    if g.kind == "product":
        return GroupElement(g, tuple(multiply(x, y) for x, y in zip(a.payload, b.payload)))
    raise GroupError(f"unknown backend {g.kind!r}")


def inverse(a: GroupElement) -> GroupElement:
    g = a.group
    if g.kind == "free":
        return GroupElement(g, tuple((gen, -k) for gen, k in reversed(a.payload)))
    if g.kind == "cyclic":
        return GroupElement(g, (-a.payload) % g.modulus)
    if g.kind == "symmetric":
        inv = [0] * g.degree
        for i, img in enumerate(a.payload):
            inv[img - 1] = i + 1
        return GroupElement(g, tuple(inv))
    if g.kind == "dihedral":
        i, f = a.payload
        return GroupElement(g, ((-i) % g.modulus if f == 0 else i, f))
    if g.kind == "product":
        return GroupElement(g, tuple(inverse(x) for x in a.payload))
    raise GroupError(f"unknown backend {g.kind!r}")


def conjugate(a: GroupElement, by: GroupElement) -> GroupElement:
    return multiply(multiply(inverse(by), a), by)


# -- parsing and formatting ----------------------------------------------

_SYLLABLE_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*")


def _parse_word(text: str) -> list[tuple[str, int]]:
    stripped = text.strip()
    if stripped == "e":
        return []
    out = []
    for chunk in stripped.split("*"):
        m = _SYLLABLE_RE.fullmatch(chunk)
        if not m:
            raise GroupError(f"syntax error in element {text!r} near {chunk!r}")
        out.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    return out


def _parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    images = list(range(1, degree + 1))
    seen: set[int] = set()
    body = text.strip()
    if body in ("e", "()"):
        return tuple(images)
    pos = 0
    cycle_re = re.compile(r"\(\s*((?:\d+[\s,]*)*)\)")
    while pos < len(body):
        m = cycle_re.match(body, pos)
        if not m:
            raise GroupError(f"syntax error in permutation {text!r}")
        points = [int(tok) for tok in re.split(r"[\s,]+", m.group(1).strip()) if tok]
        if any(p < 1 or p > degree for p in points):
            raise GroupError(f"point out of range 1..{degree} in {text!r}")
        if len(set(points)) != len(points) or seen & set(points):
            raise GroupError(f"repeated point in cycle notation {text!r}")
        seen.update(points)
        for p, q in zip(points, points[1:] + points[:1]):
            images[p - 1] = q
        pos = m.end()
        while pos < len(body) and body[pos].isspace():
            pos += 1
    return tuple(images)


def parse_element(text: str, group: GroupDescriptor) -> GroupElement:
    """Parse element text for the given backend; the result is in normal form."""
    if group.kind == "free":
        return element(group, _parse_word(text))
    if group.kind == "cyclic":
        body = text.strip()
        if body == "e":
            return identity(group)
        try:
            value = int(body)
        except ValueError as exc:
            raise GroupError(f"syntax error in residue {text!r}") from exc
        if not 0 <= value < group.modulus:
            raise GroupError(f"residue {value} out of range [0, {group.modulus})")
        return GroupElement(group, value)
    if group.kind == "symmetric":
        body = text.strip()
        if body.startswith("["):
            try:
                arr = json.loads(body)
            except json.JSONDecodeError as exc:
                raise GroupError(f"syntax error in one-line permutation {text!r}") from exc
            if not isinstance(arr, list) or not all(isinstance(v, int) for v in arr) or len(arr) != group.degree:
                raise GroupError(f"one-line form must list {group.degree} integers")
            return element(group, arr)
        return element(group, _parse_cycles(body, group.degree))
    if group.kind == "dihedral":
        out = identity(group)
        for gen, k in _parse_word(text):
            if gen == "r":
                step = GroupElement(group, (k % group.modulus, 0))
            elif gen == "s":
                step = GroupElement(group, (0, k % 2))
            else:
                raise GroupError(f"unknown generator {gen!r}: dihedral elements use r and s")
            out = multiply(out, step)
        return out
    if group.kind == "product":
        try:
            arr = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GroupError(f"syntax error in product element {text!r}") from exc
        if not isinstance(arr, list) or len(arr) != len(group.factors):
            raise GroupError(f"product element must be an array of {len(group.factors)} entries")
        parts = []
        for item, factor in zip(arr, group.factors):
            parts.append(parse_element(item if isinstance(item, str) else json.dumps(item), factor))
        return element(group, parts)
    raise GroupError(f"unknown backend {group.kind!r}")


def format_element(a: GroupElement) -> str:
    g = a.group
    if g.kind == "free":
        if not a.payload:
            return "e"
        return "*".join(gen if k == 1 else f"{gen}^{k}" for gen, k in a.payload)
    if g.kind == "cyclic":
        return str(a.payload)
    if g.kind == "symmetric":
        cycles = []
        seen: set[int] = set()
        for start in range(1, g.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = a.payload[start - 1]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = a.payload[nxt - 1]
            if len(cyc) > 1:
                cycles.append(cyc)
        if not cycles:
            return "e"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)
    if g.kind == "dihedral":
        rot, flip = a.payload
        rpart = "" if rot == 0 else ("r" if rot == 1 else f"r^{rot}")
        spart = "s" if flip else ""
        if rpart and spart:
            return f"{rpart}*{spart}"
        return rpart or spart or "e"
    if g.kind == "product":
        return json.dumps([format_element(x) for x in a.payload])
    raise GroupError(f"unknown backend {g.kind!r}")


# -- finite-group utilities ----------------------------------------------

def is_finite(group: GroupDescriptor) -> bool:
    if group.kind == "free":
        return not group.generators
    if group.kind == "product":
        return all(is_finite(f) for f in group.factors)
    return group.kind in ("cyclic", "symmetric", "dihedral")


def group_order(group: GroupDescriptor) -> Optional[int]:
    if not is_finite(group):
        return None
    if group.kind == "free":
        return 1
    if group.kind == "cyclic":
        return group.modulus
    if group.kind == "symmetric":
        return math.factorial(group.degree)
    if group.kind == "dihedral":
        return 2 * group.modulus
    return math.prod(group_order(f) for f in group.factors)


def enumerate_elements(group: GroupDescriptor) -> list[GroupElement]:
    """All elements of a finite backend, in a fixed deterministic order."""
    if group.kind == "free":
        if group.generators:
            raise GroupError("infinite backend: cannot enumerate a free group with generators")
        return [identity(group)]
    if group.kind == "cyclic":
        return [GroupElement(group, r) for r in range(group.modulus)]
    if group.kind == "symmetric":
        return [GroupElement(group, p) for p in itertools.permutations(range(1, group.degree + 1))]
    if group.kind == "dihedral":
        return [GroupElement(group, (r, f)) for f in (0, 1) for r in range(group.modulus)]
    if group.kind == "product":
        pools = [enumerate_elements(f) for f in group.factors]
        return [GroupElement(group, combo) for combo in itertools.product(*pools)]
    raise GroupError(f"unknown backend {group.kind!r}")


def center(group: GroupDescriptor) -> list[GroupElement]:
    """The elements commuting with everything, by exhaustive check."""
    if not is_finite(group):
        raise GroupError("infinite backend: center enumeration needs a finite group")
    elems = enumerate_elements(group)
    return [z for z in elems if all(multiply(z, u) == multiply(u, z) for u in elems)]


# -- linear representations ----------------------------------------------

def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(b) != len(a[0]):
        raise GroupError("matrix dimension mismatch")
    cols = range(len(b[0]))
    return tuple(tuple(sum(row[k] * b[k][j] for k in range(len(b))) for j in cols) for row in a)


def mat_trace(a: Matrix):
    return sum(a[i][i] for i in range(len(a)))


@dataclass(frozen=True)
class Representation:
    """A finite-dimensional linear action of one backend.

    ``exact`` is False only for the cyclic character, whose rotation
    matrices use machine floats.
    """

    kind: str
    group: GroupDescriptor
    power: int = 0
    table: tuple[tuple[str, Matrix], ...] = ()
    exact: bool = True
    _lookup: Mapping[str, Matrix] = field(default_factory=dict, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        if self.kind == "permutation":
            return self.group.degree
        if self.kind == "cyclic_character":
            return 2
        return len(self.table[0][1])


def permutation_representation(group: GroupDescriptor) -> Representation:
    if group.kind != "symmetric":
        raise GroupError("permutation representation needs the symmetric backend")
    return Representation("permutation", group)


def cyclic_character(group: GroupDescriptor, power: int = 1) -> Representation:
    if group.kind != "cyclic":
        raise GroupError("cyclic character needs the cyclic backend")
    return Representation("cyclic_character", group, power=power, exact=False)


def table_representation(group: GroupDescriptor, table: Mapping[str, Sequence[Sequence[Any]]]) -> Representation:
    """Explicit matrix table over a finite backend, validated on all pairs."""
    if not is_finite(group):
        raise GroupError("table representation needs a finite backend")
    elems = enumerate_elements(group)
    frozen: dict[str, Matrix] = {}
    for key, mat in table.items():
        frozen[key] = tuple(tuple(Fraction(v) for v in row) for row in mat)
    dims = {(len(m), len(m[0])) for m in frozen.values()}
    if len(dims) != 1 or len(set(next(iter(dims)))) != 1:
        raise GroupError("table matrices must share one square dimension")
    missing = [format_element(x) for x in elems if format_element(x) not in frozen]
    if missing:
        raise GroupError(f"table representation misses elements: {missing}")
    n = next(iter(dims))[0]
    if frozen[format_element(identity(group))] != mat_identity(n):
        raise GroupError("table must send the identity to the identity matrix")
    for x in elems:
        for y in elems:
            lhs = frozen[format_element(multiply(x, y))]
            rhs = mat_mul(frozen[format_element(x)], frozen[format_element(y)])
            if lhs != rhs:
                raise GroupError(
                    f"table is not a homomorphism at {format_element(x)}, {format_element(y)}"
                )
    items = tuple(sorted(frozen.items()))
    return Representation("table", group, table=items, _lookup=frozen)


def represent(rho: Representation, a: GroupElement) -> Matrix:
    """Evaluate the representation; the result is an immutable matrix."""
    if a.group != rho.group:
        raise GroupError("backend mismatch: element does not live in the represented group")
    if rho.kind == "permutation":
        # 1 in the column of each point and the row of its image, so that
        # matrix products follow the pinned multiplication order
        n = rho.group.degree
        return tuple(tuple(1 if a.payload[j] == i + 1 else 0 for j in range(n)) for i in range(n))
    if rho.kind == "cyclic_character":
        theta = 2.0 * math.pi * rho.power * a.payload / rho.group.modulus
        c, s = math.cos(theta), math.sin(theta)
        return ((c, -s), (s, c))
    if rho.kind == "table":
        lookup = rho._lookup or dict(rho.table)
        key = format_element(a)
        if key not in lookup:
            raise GroupError(f"element {key} missing from representation table")
        return lookup[key]
    raise GroupError(f"unknown representation kind {rho.kind!r}")
