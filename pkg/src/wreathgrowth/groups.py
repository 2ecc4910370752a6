"""Sources for the lamp group G: finite multiplication tables with computed
standard/conjugacy growth series, or directly supplied series prefixes for
infinite G."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .series import TruncatedSeries


class GroupTableError(ValueError):
    """Table validation failure, reporting the first broken axiom."""


@dataclass(frozen=True)
class FiniteGroupTable:
    """Finite group given by its multiplication table.

    table[x][y] is the index of x*y.  Derived data (inverses, word lengths
    over the generating set, conjugacy-class keys) is computed and checked at
    construction time through `finite_group_from_table`.
    """

    name: str
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    generators: tuple[int, ...]
    inverses: tuple[int, ...]
    lengths: tuple[int, ...]
    class_keys: tuple[int, ...]

    def multiply(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inverse(self, x: int) -> int:
        return self.inverses[x]

    def length(self, x: int) -> int:
        return self.lengths[x]

    def class_key(self, x: int) -> int:
        return self.class_keys[x]

    @property
    def diameter(self) -> int:
        return max(self.lengths)

    @property
    def class_count(self) -> int:
        return len(set(self.class_keys))

    def is_abelian(self) -> bool:
        return all(
            self.table[x][y] == self.table[y][x]
            for x in range(self.order)
            for y in range(self.order)
        )


def finite_group_from_table(
    name: str,
    table: list[list[int]],
    identity: int,
    generators: list[int],
) -> FiniteGroupTable:
    """Validate a multiplication table and derive lengths and class keys."""
    n = len(table)
    if n == 0:
        raise GroupTableError("empty table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise GroupTableError(f"row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise GroupTableError(f"entry ({i},{j}) = {v} out of range")
    if not 0 <= identity < n:
        raise GroupTableError(f"identity index {identity} out of range")
    for i in range(n):
        if table[identity][i] != i or table[i][identity] != i:
            raise GroupTableError(f"identity axiom fails at element {i}")
    inverses = [-1] * n
    for i in range(n):
        for j in range(n):
            if table[i][j] == identity and table[j][i] == identity:
                inverses[i] = j
                break
        if inverses[i] < 0:
            raise GroupTableError(f"no two-sided inverse for element {i}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise GroupTableError(f"associativity fails at ({i},{j},{k})")
    gens = sorted(set(generators))
    for g in gens:
        if not 0 <= g < n:
            raise GroupTableError(f"generator {g} out of range")
        if g == identity:
            raise GroupTableError(f"generator {g} is the identity")
    for g in gens:
        if inverses[g] not in gens:
            raise GroupTableError(f"generator set not symmetric: missing inverse of {g}")

    # word lengths by BFS over right multiplication
    lengths = [-1] * n
    lengths[identity] = 0
    frontier = [identity]
    dist = 0
    while frontier:
        dist += 1
        nxt = []
        for x in frontier:
            for g in gens:
                y = table[x][g]
                if lengths[y] < 0:
                    lengths[y] = dist
                    nxt.append(y)
        frontier = nxt
    reached = sum(1 for d in lengths if d >= 0)
    if reached != n:
        raise GroupTableError(f"generators do not generate: reached {reached} of {n}")

    # conjugacy classes: orbit closure under conjugation by generators
    class_keys = [-1] * n
    for x in range(n):
        if class_keys[x] >= 0:
            continue
        orbit = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g in gens:
                z = table[table[inverses[g]][y]][g]
                if z not in orbit:
                    orbit.add(z)
                    stack.append(z)
        key = min(orbit)
        for y in orbit:
            class_keys[y] = key

    return FiniteGroupTable(
        name=name,
        order=n,
        table=tuple(tuple(row) for row in table),
        identity=identity,
        generators=tuple(gens),
        inverses=tuple(inverses),
        lengths=tuple(lengths),
        class_keys=tuple(class_keys),
    )


def standard_series_of_group(table: FiniteGroupTable, degree: int) -> TruncatedSeries:
    """Sphere sizes of the finite group: coefficient m counts elements of
    word length exactly m."""
    counts = [0] * (degree + 1)
    for x in range(table.order):
        if table.lengths[x] <= degree:
            counts[table.lengths[x]] += 1
    return TruncatedSeries.from_coeffs(counts, degree)


def conjugacy_series_of_group(table: FiniteGroupTable, degree: int) -> TruncatedSeries:
    """Coefficient m counts conjugacy classes of minimal element length m."""
    min_length: dict[int, int] = {}
    for x in range(table.order):
        key = table.class_keys[x]
        length = table.lengths[x]
        if key not in min_length or length < min_length[key]:
            min_length[key] = length
    counts = [0] * (degree + 1)
    for length in min_length.values():
        if length <= degree:
            counts[length] += 1
    return TruncatedSeries.from_coeffs(counts, degree)


@dataclass(frozen=True)
class GroupSeriesInput:
    """Standard and conjugacy growth series of the lamp group, either derived
    from a finite table or supplied directly for infinite G."""

    sgs: TruncatedSeries
    cgs: TruncatedSeries
    source: str
    table: FiniteGroupTable | None = None

    def __post_init__(self):
        if self.sgs.degree != self.cgs.degree:
            raise ValueError("sgs and cgs must share a truncation degree")
        if self.sgs[0] != 1 or self.cgs[0] != 1:
            raise ValueError("growth series must start with constant term 1")
        for m in range(self.sgs.degree + 1):
            if self.cgs[m] > self.sgs[m]:
                raise ValueError(
                    f"conjugacy coefficient exceeds sphere size at degree {m}"
                )

    @property
    def degree(self) -> int:
        return self.sgs.degree

    @staticmethod
    def from_table(table: FiniteGroupTable, degree: int) -> "GroupSeriesInput":
        return GroupSeriesInput(
            sgs=standard_series_of_group(table, degree),
            cgs=conjugacy_series_of_group(table, degree),
            source=f"table:{table.name}",
            table=table,
        )


# -- presets -----------------------------------------------------------------


def _perm_compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[q[i]] for i in range(len(q)))


def _perm_group(name: str, gens: list[tuple[int, ...]]) -> FiniteGroupTable:
    n_points = len(gens[0])
    identity = tuple(range(n_points))
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _perm_compose(p, g)
                if q not in elements:
                    elements.add(q)
                    nxt.append(q)
        frontier = nxt
    ordered = sorted(elements)
    index = {p: i for i, p in enumerate(ordered)}
    table = [
        [index[_perm_compose(p, q)] for q in ordered] for p in ordered
    ]
    return finite_group_from_table(
        name, table, index[identity], [index[g] for g in gens]
    )


def _cyclic_group(name: str, n: int) -> FiniteGroupTable:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    gens = sorted({1 % n, (n - 1) % n} - {0})
    return finite_group_from_table(name, table, 0, gens)


def preset_table(name: str) -> FiniteGroupTable:
    if name == "trivial":
        return finite_group_from_table("trivial", [[0]], 0, [])
    if name == "C2":
        return _cyclic_group("C2", 2)
    if name == "C3":
        return _cyclic_group("C3", 3)
    if name == "S3":
        return _perm_group("S3", [(1, 0, 2), (1, 2, 0), (2, 0, 1)])
    if name == "D4":
        # square symmetries: quarter rotations both ways plus one reflection
        return _perm_group("D4", [(1, 2, 3, 0), (3, 0, 1, 2), (3, 2, 1, 0)])
    raise KeyError(f"unknown finite group preset {name!r}")


FINITE_PRESETS = ("trivial", "C2", "C3", "S3", "D4")
SERIES_PRESETS = ("Z",)


def preset_lamp(name: str, degree: int) -> GroupSeriesInput:
    """Lamp input by preset name at the requested truncation degree."""
    if name in FINITE_PRESETS:
        return GroupSeriesInput.from_table(preset_table(name), degree)
    if name == "Z":
        coeffs = [1] + [2] * degree
        series = TruncatedSeries.from_coeffs(coeffs, degree)
        return GroupSeriesInput(sgs=series, cgs=series, source="series:Z")
    raise KeyError(f"unknown lamp preset {name!r}")


def load_group_json(path: str | Path) -> FiniteGroupTable:
    """Read {"order": n, "table": [[...]], "identity": i, "generators": [...]}."""
    data = json.loads(Path(path).read_text())
    table = data["table"]
    if len(table) != data["order"]:
        raise GroupTableError(
            f"declared order {data['order']} but table has {len(table)} rows"
        )
    return finite_group_from_table(
        data.get("name", Path(path).stem),
        table,
        data["identity"],
        data["generators"],
    )
