"""Ground-truth engine: concrete elements of G wr L, exact word lengths via
tree walks, ball enumeration over the natural generating set, and conjugacy
classification through coset-projection invariants.

Elements are pairs (lamp map, cursor).  The lamp map is stored as a sorted
tuple of (vertex word, nonidentity G index) so structural equality is group
equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .groups import FiniteGroupTable
from .series import TruncatedSeries
from .treegroup import EMPTY, TreeGroupSpec, Word, canonical_tree_translate

DEFAULT_BUDGET = 10_000_000


class BudgetError(RuntimeError):
    """Ball enumeration exceeded the element budget."""


class WreathElement(NamedTuple):
    lamps: tuple[tuple[Word, int], ...]
    cursor: Word


@dataclass(frozen=True)
class OracleSpec:
    """A finite lamp group table together with the tree base group."""

    lamp: FiniteGroupTable
    tree: TreeGroupSpec


def identity_element() -> WreathElement:
    return WreathElement((), EMPTY)


def make_element(
    spec: OracleSpec, items: Iterable[tuple[Word, int]], cursor: Word
) -> WreathElement:
    """Normalize: drop identity lamp values, sort positions, reduce cursor."""
    lamps = {}
    for pos, g in items:
        pos = spec.tree.reduce(pos)
        if g != spec.lamp.identity:
            if pos in lamps:
                raise ValueError(f"duplicate lamp position {pos}")
            lamps[pos] = g
    return WreathElement(tuple(sorted(lamps.items())), spec.tree.reduce(cursor))


def multiply(spec: OracleSpec, p: WreathElement, q: WreathElement) -> WreathElement:
    """(eta, b)(theta, n) = (eta * theta^b, b n): the second lamp map is
    translated by the first cursor before pointwise multiplication."""
    tree, table = spec.tree, spec.lamp
    lamps = dict(p.lamps)
    for pos, g in q.lamps:
        moved = tree.mul(p.cursor, pos)
        cur = lamps.get(moved)
        combined = table.multiply(cur, g) if cur is not None else g
        if combined == table.identity:
            lamps.pop(moved, None)
        else:
            lamps[moved] = combined
    return WreathElement(tuple(sorted(lamps.items())), tree.mul(p.cursor, q.cursor))


def invert(spec: OracleSpec, p: WreathElement) -> WreathElement:
    tree, table = spec.tree, spec.lamp
    cursor_inv = tree.inv(p.cursor)
    items = sorted(
        (tree.mul(cursor_inv, pos), table.inverse(g)) for pos, g in p.lamps
    )
    return WreathElement(tuple(items), cursor_inv)


def conjugate(spec: OracleSpec, q: WreathElement, p: WreathElement) -> WreathElement:
    return multiply(spec, multiply(spec, q, p), invert(spec, q))


def generators(spec: OracleSpec) -> list[WreathElement]:
    """Cursor moves along every tree letter plus lamp generators at the
    origin."""
    gens = [WreathElement((), (x,)) for x in spec.tree.alphabet]
    gens.extend(WreathElement(((EMPTY, g),), EMPTY) for g in spec.lamp.generators)
    return gens


def element_length(spec: OracleSpec, p: WreathElement) -> int:
    """Minimal walk visiting the lamp support and ending at the cursor, plus
    the lamp word lengths."""
    walk = spec.tree.minimal_walk_length((pos for pos, _ in p.lamps), p.cursor)
    return walk + sum(spec.lamp.length(g) for _, g in p.lamps)


def _successors(spec: OracleSpec, elem: WreathElement) -> Iterable[WreathElement]:
    tree, table = spec.tree, spec.lamp
    cursor = elem.cursor
    for x in tree.alphabet:
        if cursor and cursor[-1] == tree.inverse_letter(x):
            yield WreathElement(elem.lamps, cursor[:-1])
        else:
            yield WreathElement(elem.lamps, cursor + (x,))
    for g in table.generators:
        lamps = dict(elem.lamps)
        cur = lamps.get(cursor)
        combined = table.multiply(cur, g) if cur is not None else g
        if combined == table.identity:
            lamps.pop(cursor, None)
        else:
            lamps[cursor] = combined
        yield WreathElement(tuple(sorted(lamps.items())), cursor)


def ball_enumerate(
    spec: OracleSpec, radius: int, budget: int = DEFAULT_BUDGET
) -> dict[WreathElement, int]:
    """All elements of length <= radius with exact lengths (BFS layers)."""
    dist: dict[WreathElement, int] = {identity_element(): 0}
    frontier = [identity_element()]
    for layer in range(1, radius + 1):
        nxt = []
        for elem in frontier:
            for succ in _successors(spec, elem):
                if succ not in dist:
                    dist[succ] = layer
                    nxt.append(succ)
                    if len(dist) > budget:
                        raise BudgetError(
                            f"ball at radius {radius} exceeds {budget} elements"
                        )
        frontier = nxt
    return dist


def sgs_prefix(
    spec: OracleSpec, radius: int, budget: int = DEFAULT_BUDGET
) -> TruncatedSeries:
    """Brute-force standard growth series prefix from BFS sphere sizes."""
    counts = [0] * (radius + 1)
    for _, d in ball_enumerate(spec, radius, budget).items():
        counts[d] += 1
    return TruncatedSeries.from_coeffs(counts, radius)


# -- conjugacy invariants -------------------------------------------------------

ConjugacyKey = tuple


def _coset_collapse(
    spec: OracleSpec, items: list[tuple[Word, int]], cursor: Word
) -> tuple[tuple[Word, int], ...]:
    """Collapse a lamp map onto one point per right coset of <cursor>.

    The translates core^n * FD of the fundamental domain
    FD = union_r core[:r] * T_r  (T_r = reduced words starting with neither
    the inverse of letter r-1 nor letter r of the cyclically reduced cursor,
    indices mod k) tile the tree, so every coset <cursor> t meets FD exactly
    once.  The collapsed value at that point is the coset product of the lamp
    values taken with the tile index descending, which is the conjugacy
    invariant for an infinite-order cursor.
    """
    tree, table = spec.tree, spec.lamp
    k = len(cursor)
    inv_prefixes = [tree.inv(cursor[:r]) for r in range(k)]
    forbid = [
        (tree.inverse_letter(cursor[r - 1]), cursor[r]) for r in range(k)
    ]  # r-1 wraps: forbid[0] uses the last letter
    cursor_inv = tree.inv(cursor)
    by_point: dict[Word, list[tuple[int, int]]] = {}
    for pos, g in items:
        bound = len(pos) // k + 2
        power = pos  # running core^(-n) * pos, starting at n = -bound
        for _ in range(bound):
            power = tree.mul(cursor, power)
        hits = []
        for n in range(-bound, bound + 1):
            for r in range(k):
                v = tree.mul(inv_prefixes[r], power)
                if not v or (v[0] != forbid[r][0] and v[0] != forbid[r][1]):
                    hits.append((n, power))
            power = tree.mul(cursor_inv, power)
        if len(hits) != 1:
            raise AssertionError(
                f"coset tiling failed for {pos} over cursor {cursor}: {len(hits)} slots"
            )
        n, point = hits[0]
        by_point.setdefault(point, []).append((n, g))
    collapsed = []
    for point, entries in by_point.items():
        entries.sort(reverse=True)  # product runs with tile index descending
        value = entries[0][1]
        for _, g in entries[1:]:
            value = table.multiply(value, g)
        if value != table.identity:
            collapsed.append((point, value))
    return tuple(sorted(collapsed))


def _infinite_cursor_key(
    spec: OracleSpec, items: list[tuple[Word, int]], core: Word
) -> ConjugacyKey:
    """Minimum over the cyclic rotations of the cursor of the collapsed coset
    map; rotation by p conjugates by the length-p cursor prefix.  Shifts along
    the cursor itself leave the collapsed map untouched, so the rotations
    exhaust the conjugator freedom."""
    tree = spec.tree
    k = len(core)
    best = None
    for p in range(k):
        rotated = core[p:] + core[:p]
        d_inv = tree.inv(core[:p])
        moved = [(tree.mul(d_inv, pos), g) for pos, g in items]
        candidate = (rotated, _coset_collapse(spec, moved, rotated))
        if best is None or candidate < best:
            best = candidate
    return ("A",) + best


def _torsion_cursor_key(
    spec: OracleSpec, items: list[tuple[Word, int]], letter: int
) -> ConjugacyKey:
    """Cursor reduced to a torsion generator b_j; the remaining conjugator
    freedom is left multiplication by <b_j>.  Per coset {t, b_j t} the
    invariant is the G-conjugacy class of the ordered product of the two lamp
    values, indexed by the transversal of words not beginning with b_j."""
    tree, table = spec.tree, spec.lamp
    j = letter - 2 * tree.num_free + 1
    best = None
    for d in (EMPTY, (letter,)):
        values: dict[Word, dict[Word, int]] = {}
        for pos, g in items:
            moved = tree.mul(d, pos)
            rep = moved[1:] if moved and moved[0] == letter else moved
            values.setdefault(rep, {})[moved] = g
        coset_classes = []
        for rep, slots in values.items():
            first = slots.get(rep, table.identity)
            second = slots.get((letter,) + rep, table.identity)
            product = table.multiply(first, second)
            if product != table.identity:
                coset_classes.append((rep, table.class_key(product)))
        candidate = tuple(sorted(coset_classes))
        if best is None or candidate < best:
            best = candidate
    return ("B", j, best)


def _trivial_cursor_key(
    spec: OracleSpec, items: list[tuple[Word, int]]
) -> ConjugacyKey:
    """Trivial cursor: the invariant is the map vertex -> G-class key up to
    left translation, canonicalized by the tree-translate canonical form of
    the lamp support's spanned subtree."""
    if not items:
        return ("E",)
    tree, table = spec.tree, spec.lamp
    span = tree.span([pos for pos, _ in items])
    _, translations = canonical_tree_translate(tree, span)
    best = min(
        tuple(sorted((tree.mul(d, pos), table.class_key(g)) for pos, g in items))
        for d in translations
    )
    return ("T", best)


def key_of(spec: OracleSpec, p: WreathElement) -> ConjugacyKey:
    """Complete conjugacy invariant: equal keys iff conjugate in G wr L."""
    tree = spec.tree
    core, conj = tree.cyclic_reduce(p.cursor)
    # cursor = conj^-1 * core * conj; conjugating by conj^-1 turns the cursor
    # into core and left-translates the lamp support by conj
    items = [(tree.mul(conj, pos), g) for pos, g in p.lamps]
    if not core:
        return _trivial_cursor_key(spec, items)
    if len(core) == 1 and tree.is_involution_letter(core[0]):
        return _torsion_cursor_key(spec, items, core[0])
    return _infinite_cursor_key(spec, items, core)


def conjugacy_census(
    spec: OracleSpec, radius: int, budget: int = DEFAULT_BUDGET
) -> dict[int, int]:
    """Number of conjugacy classes by minimal length, exact up to radius:
    every class of conjugacy length m <= radius has a representative inside
    the ball."""
    ball = ball_enumerate(spec, radius, budget)
    shortest: dict[ConjugacyKey, int] = {}
    for elem, dist in ball.items():
        key = key_of(spec, elem)
        old = shortest.get(key)
        if old is None or dist < old:
            shortest[key] = dist
    counts = {m: 0 for m in range(radius + 1)}
    for m in shortest.values():
        counts[m] += 1
    return counts


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _merge_census(
    spec: OracleSpec,
    elements: list[WreathElement],
    lengths: list[int],
    index: dict[WreathElement, int],
    conjugators: list[tuple[WreathElement, WreathElement]],
    radius: int,
) -> dict[int, int]:
    uf = _UnionFind(len(elements))
    for q, q_inv in conjugators:
        for i, elem in enumerate(elements):
            moved = multiply(spec, multiply(spec, q, elem), q_inv)
            j = index.get(moved)
            if j is not None and j != i:
                uf.union(i, j)
    shortest: dict[int, int] = {}
    for i, length in enumerate(lengths):
        root = uf.find(i)
        if root not in shortest or length < shortest[root]:
            shortest[root] = length
    counts = {m: 0 for m in range(radius + 1)}
    for m in shortest.values():
        counts[m] += 1
    return counts


def unionfind_census(
    spec: OracleSpec,
    radius: int,
    conj_bound: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[dict[int, int], bool]:
    """Second, invariant-free oracle: merge ball elements that are conjugate
    by some element of length <= conj_bound, then count merged classes by
    minimal length.

    Merging only inside the ball under-approximates conjugacy (it can only
    over-count classes), so the run is repeated with bound+2 and the counts
    are flagged stable when they agree.  Returns (counts at bound+2, stable).
    """
    ball = ball_enumerate(spec, max(radius, conj_bound + 2), budget)
    elements = [e for e, d in ball.items() if d <= radius]
    lengths = [ball[e] for e in elements]
    index = {e: i for i, e in enumerate(elements)}

    def run(bound: int) -> dict[int, int]:
        conjugators = [
            (e, invert(spec, e)) for e, d in ball.items() if d <= bound
        ]
        return _merge_census(spec, elements, lengths, index, conjugators, radius)

    first = run(conj_bound)
    second = run(conj_bound + 2)
    return second, first == second
