"""The base group L = <a_1..a_M, b_1..b_N | b_j^2> whose Cayley graph is the
(2M+N)-regular tree.

Words are tuples of small-int letters: a_i -> 2(i-1), a_i^-1 -> 2(i-1)+1,
b_j -> 2M+(j-1).  The natural int order on letters is the fixed alphabet
order a_1 < a_1^-1 < a_2 < ... < b_1 < ... used for every lexicographic
tie-break, so plain tuple comparison of words is canonical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .series import TruncatedSeries

Word = tuple[int, ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"([aAb])(\d+)")


class DegenerateTreeError(ValueError):
    """Operation needs tree degree 2M+N >= 2."""


class UnsupportedOrderError(ValueError):
    """The explicit left order is only defined for free L (N = 0)."""


@dataclass(frozen=True)
class TreeGroupSpec:
    """M infinite-order generators and N order-2 generators."""

    num_free: int
    num_involutions: int

    def __post_init__(self):
        if self.num_free < 0 or self.num_involutions < 0:
            raise ValueError("generator counts must be nonnegative")
        if self.num_free + self.num_involutions < 1:
            raise ValueError("need at least one generator")

    # -- letters -----------------------------------------------------------

    @property
    def tree_degree(self) -> int:
        return 2 * self.num_free + self.num_involutions

    @property
    def alphabet(self) -> range:
        return range(self.tree_degree)

    def is_involution_letter(self, letter: int) -> bool:
        return letter >= 2 * self.num_free

    def inverse_letter(self, letter: int) -> int:
        if letter >= 2 * self.num_free:
            return letter
        return letter ^ 1

    def letter_str(self, letter: int) -> str:
        m2 = 2 * self.num_free
        if letter >= m2:
            return f"b{letter - m2 + 1}"
        return ("a" if letter % 2 == 0 else "A") + str(letter // 2 + 1)

    # -- words -------------------------------------------------------------

    def reduce(self, letters: Iterable[int]) -> Word:
        """Freely reduce, cancelling x x^-1 and b_j b_j pairs."""
        stack: list[int] = []
        for letter in letters:
            if stack and stack[-1] == self.inverse_letter(letter):
                stack.pop()
            else:
                stack.append(letter)
        return tuple(stack)

    def mul(self, u: Word, v: Word) -> Word:
        stack = list(u)
        for letter in v:
            if stack and stack[-1] == self.inverse_letter(letter):
                stack.pop()
            else:
                stack.append(letter)
        return tuple(stack)

    def inv(self, u: Word) -> Word:
        return tuple(self.inverse_letter(x) for x in reversed(u))

    def word_str(self, u: Word) -> str:
        return "".join(self.letter_str(x) for x in u) if u else "e"

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if text in ("", "e"):
            return EMPTY
        letters = []
        pos = 0
        for match in _TOKEN.finditer(text):
            if match.start() != pos:
                raise ValueError(f"bad word syntax at {text[pos:]!r}")
            pos = match.end()
            kind, idx = match.group(1), int(match.group(2))
            if kind in "aA":
                if not 1 <= idx <= self.num_free:
                    raise ValueError(f"no generator a{idx}")
                letters.append(2 * (idx - 1) + (0 if kind == "a" else 1))
            else:
                if not 1 <= idx <= self.num_involutions:
                    raise ValueError(f"no generator b{idx}")
                letters.append(2 * self.num_free + idx - 1)
        if pos != len(text):
            raise ValueError(f"bad word syntax at {text[pos:]!r}")
        return self.reduce(letters)

    # -- conjugacy in L ----------------------------------------------------

    def cyclic_reduce(self, u: Word) -> tuple[Word, Word]:
        """Split u = w^-1 * core * w with core cyclically reduced.

        Returns (core, w); |u| = |core| + 2|w|.
        """
        lo, hi = 0, len(u)
        while hi - lo >= 2 and u[lo] == self.inverse_letter(u[hi - 1]):
            lo += 1
            hi -= 1
        prefix = u[:lo]
        return u[lo:hi], self.inv(prefix)

    def is_cyclically_reduced(self, u: Word) -> bool:
        return len(u) <= 1 or u[0] != self.inverse_letter(u[-1])

    def conjugacy_key(self, u: Word) -> Word:
        """Least cyclic rotation of the cyclic reduction; equal keys iff
        conjugate in L."""
        core, _ = self.cyclic_reduce(u)
        if len(core) <= 1:
            return core
        return min(core[p:] + core[:p] for p in range(len(core)))

    # -- counting cyclically reduced words ----------------------------------

    def cyclically_reduced_count(self, k: int) -> int:
        """Number of cyclically reduced words of length k >= 1."""
        if k < 1:
            raise ValueError("length must be >= 1")
        m, n = self.num_free, self.num_involutions
        if self.tree_degree < 2:
            raise DegenerateTreeError("counting needs 2M+N >= 2")
        return (2 * m + n - 1) ** k + (-1) ** k * (m + n - 1) + m

    def cyclically_reduced_series(self, degree: int) -> TruncatedSeries:
        """Growth series of the cyclically reduced words:
        1/(1-(2M+N-1)z) + ((2M+N)z^2-(N-1)z-1)/(1-z^2).

        Zero constant term; coefficient k >= 1 equals cyclically_reduced_count(k).
        """
        m, n = self.num_free, self.num_involutions
        d = self.tree_degree
        if d < 2:
            raise DegenerateTreeError("series needs 2M+N >= 2")
        first = TruncatedSeries.from_coeffs([1, -(d - 1)], degree).reciprocal()
        numer = TruncatedSeries.from_coeffs([-1, -(n - 1), d], degree)
        denom = TruncatedSeries.from_coeffs([1, 0, -1], degree).reciprocal()
        return first + numer * denom

    # -- the explicit left order on free L -----------------------------------

    def left_order_positive(self, w: Word) -> bool:
        """w > e in the left order on the free group: compare the counts of
        a_j a_i^-1 versus a_j^-1 a_i factors with j > i, tie-break on the final
        letter being positive."""
        if self.num_involutions != 0:
            raise UnsupportedOrderError("left order defined only for N = 0")
        if not w:
            return False
        descending = 0
        ascending = 0
        for s, t in zip(w, w[1:]):
            if s % 2 == 0 and t % 2 == 1 and s // 2 > t // 2:
                descending += 1
            elif s % 2 == 1 and t % 2 == 0 and s // 2 > t // 2:
                ascending += 1
        if descending != ascending:
            return descending > ascending
        return w[-1] % 2 == 0

    def left_order_less(self, u: Word, v: Word) -> bool:
        """u < v iff e < u^-1 v; left-invariant by construction."""
        if u == v:
            return False
        return self.left_order_positive(self.mul(self.inv(u), v))

    # -- geometry of the tree -------------------------------------------------

    def neighbors(self, v: Word) -> list[Word]:
        return [self.mul(v, (x,)) for x in self.alphabet]

    def span(self, vertices: Iterable[Word]) -> frozenset[Word]:
        """Vertex set of the smallest subtree containing all given vertices.

        On a tree this is the union of geodesics from any one base vertex, and
        the geodesic between u and v consists of u times the prefixes of
        u^-1 v.
        """
        verts = list(vertices)
        if not verts:
            return frozenset()
        base = verts[0]
        out = {base}
        for v in verts[1:]:
            rel = self.mul(self.inv(base), v)
            for i in range(1, len(rel) + 1):
                out.add(self.mul(base, rel[:i]))
        return frozenset(out)

    def minimal_walk_length(self, support: Iterable[Word], end: Word) -> int:
        """Length of a shortest walk from the origin visiting every support
        vertex and stopping at `end`: twice the spanning-subtree edge count
        minus the distance from the origin to `end`.

        The spanning subtree here contains the origin, so its vertex set is
        the prefix closure of the terminals.
        """
        verts = {EMPTY}
        for t in list(support) + [end]:
            for i in range(1, len(t) + 1):
                verts.add(t[:i])
        return 2 * (len(verts) - 1) - len(end)

    # -- ball / word enumeration ----------------------------------------------

    def ball(self, radius: int) -> list[Word]:
        """All reduced words of length <= radius, BFS order."""
        out = [EMPTY]
        frontier = [EMPTY]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for x in self.alphabet:
                    if w and w[-1] == self.inverse_letter(x):
                        continue
                    nxt.append(w + (x,))
            out.extend(nxt)
            frontier = nxt
        return out

    def words_of_length(self, k: int) -> Iterator[Word]:
        if k == 0:
            yield EMPTY
            return
        stack: list[Word] = [(x,) for x in self.alphabet]
        while stack:
            w = stack.pop()
            if len(w) == k:
                yield w
                continue
            for x in self.alphabet:
                if w[-1] != self.inverse_letter(x):
                    stack.append(w + (x,))


def word_sort_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


@dataclass(frozen=True)
class TreeOrbitRep:
    """Canonical representative of a translation orbit of finite spanned
    subtrees containing the origin."""

    vertices: tuple[Word, ...]
    leaf_count: int
    nonleaf_count: int
    symmetric: bool
    # reflection data when symmetric: L' = half  ⊔  s*half with s = hinge b_j hinge^-1
    half: tuple[Word, ...] | None = None
    hinge: Word | None = None
    torsion_index: int | None = None

    @property
    def edge_count(self) -> int:
        return len(self.vertices) - 1

    def to_dict(self, spec: TreeGroupSpec) -> dict:
        data = {
            "vertices": [spec.word_str(v) for v in self.vertices],
            "edges": self.edge_count,
            "leaves": self.leaf_count,
            "nonleaves": self.nonleaf_count,
            "symmetric": self.symmetric,
        }
        if self.symmetric:
            data["half"] = [spec.word_str(v) for v in self.half]
            data["hinge"] = spec.word_str(self.hinge)
            data["torsion_index"] = self.torsion_index
        return data


def _tree_leaf_split(
    spec: TreeGroupSpec, vertices: frozenset[Word]
) -> tuple[list[Word], list[Word]]:
    """Split the subtree's vertices into (leaves, nonleaves); valence 0 or 1
    counts as a leaf."""
    leaves, nonleaves = [], []
    for v in vertices:
        deg = sum(1 for u in spec.neighbors(v) if u in vertices)
        (leaves if deg <= 1 else nonleaves).append(v)
    return leaves, nonleaves


def _tree_center(
    spec: TreeGroupSpec, vertices: frozenset[Word]
) -> tuple[Word, ...]:
    """Center of the subtree by leaf peeling: one vertex or one edge."""
    remaining = set(vertices)
    adj = {
        v: [u for u in spec.neighbors(v) if u in remaining] for v in remaining
    }
    while len(remaining) > 2:
        peel = [v for v in remaining if len(adj[v]) <= 1]
        for v in peel:
            remaining.discard(v)
            for u in adj[v]:
                if u in remaining:
                    adj[u].remove(v)
        for v in peel:
            del adj[v]
    return tuple(sorted(remaining, key=word_sort_key))


def _reflection_of(
    spec: TreeGroupSpec, vertices: frozenset[Word]
) -> tuple[Word, int] | None:
    """Order-2 left translation fixing the subtree setwise, if one exists.

    Such a translation inverts the central edge, so only the center needs
    checking: a center edge labeled by a torsion letter b_j gives the single
    candidate s = u b_j u^-1.
    """
    center = _tree_center(spec, vertices)
    if len(center) != 2:
        return None
    u, v = center
    step = spec.mul(spec.inv(u), v)
    letter = step[0]
    if not spec.is_involution_letter(letter):
        return None
    s = spec.mul(spec.mul(u, (letter,)), spec.inv(u))
    if frozenset(spec.mul(s, w) for w in vertices) != vertices:
        return None
    return u, letter - 2 * spec.num_free + 1


def canonical_tree_translate(
    spec: TreeGroupSpec, vertices: frozenset[Word]
) -> tuple[tuple[Word, ...], tuple[Word, ...]]:
    """Canonical translate of a finite spanned subtree, plus every translation
    achieving it (one, or two when the tree has an order-2 stabilizer).

    For free L the canonical translate is the unique one containing the origin
    with every other vertex positive in the left order; by left invariance
    that translate is v_min^-1 * vertices for the left-order minimum v_min.
    With torsion present it is the length-lex least sorted vertex list over
    all translates containing the origin.
    """
    if spec.num_involutions == 0:
        v_min = None
        for v in vertices:
            if v_min is None or spec.left_order_less(v, v_min):
                v_min = v
        d = spec.inv(v_min)
        tree = tuple(
            sorted((spec.mul(d, w) for w in vertices), key=word_sort_key)
        )
        return tree, (d,)
    candidates: dict[tuple[Word, ...], list[Word]] = {}
    for v in vertices:
        d = spec.inv(v)
        translated = tuple(
            sorted((spec.mul(d, w) for w in vertices), key=word_sort_key)
        )
        candidates.setdefault(translated, []).append(d)
    best = min(candidates)
    return best, tuple(candidates[best])


def enumerate_spanned_subtrees(
    spec: TreeGroupSpec, max_edges: int
) -> list[frozenset[Word]]:
    """All spanned subtrees of the Cayley tree that contain the origin and
    have at most max_edges edges."""
    current = [frozenset([EMPTY])]
    out = list(current)
    for _ in range(max_edges):
        seen = set()
        nxt = []
        for tree in current:
            for v in tree:
                for u in spec.neighbors(v):
                    if u in tree:
                        continue
                    grown = tree | {u}
                    if grown not in seen:
                        seen.add(grown)
                        nxt.append(grown)
        out.extend(nxt)
        current = nxt
    return out


def tree_orbit_representatives(
    spec: TreeGroupSpec, max_edges: int
) -> list[TreeOrbitRep]:
    """One canonical representative per left-translation orbit of finite
    spanned subtrees containing the origin, with <= max_edges edges, tagged
    with leaf counts and the symmetry classification.

    Orbits are grown level by level from canonical representatives only:
    deleting a leaf of any (k+1)-edge subtree leaves a k-edge subtree, so
    every (k+1)-edge orbit contains some canonical k-edge representative plus
    one boundary vertex.  This avoids canonicalizing the full subtree census.
    """
    levels: list[set[tuple[Word, ...]]] = [{(EMPTY,)}]
    for _ in range(max_edges):
        grown: set[tuple[Word, ...]] = set()
        for rep in levels[-1]:
            vset = set(rep)
            for v in rep:
                for u in spec.neighbors(v):
                    if u not in vset:
                        canonical, _ = canonical_tree_translate(
                            spec, frozenset(vset | {u})
                        )
                        grown.add(canonical)
        levels.append(grown)
    out = []
    for level in levels:
        for canonical in level:
            vset = frozenset(canonical)
            leaves, nonleaves = _tree_leaf_split(spec, vset)
            reflection = _reflection_of(spec, vset) if spec.num_involutions else None
            if reflection is None:
                out.append(
                    TreeOrbitRep(canonical, len(leaves), len(nonleaves), False)
                )
            else:
                hinge, j = reflection
                other = spec.mul(hinge, (2 * spec.num_free + j - 1,))
                half = tuple(
                    sorted(
                        (w for w in canonical if _closer(spec, w, hinge, other)),
                        key=word_sort_key,
                    )
                )
                out.append(
                    TreeOrbitRep(
                        canonical, len(leaves), len(nonleaves), True, half, hinge, j
                    )
                )
    return sorted(
        out,
        key=lambda r: (r.edge_count, tuple(map(word_sort_key, r.vertices))),
    )


def _closer(spec: TreeGroupSpec, w: Word, u: Word, v: Word) -> bool:
    """True when w is strictly closer to u than to v in the tree metric."""
    return len(spec.mul(spec.inv(u), w)) < len(spec.mul(spec.inv(v), w))
