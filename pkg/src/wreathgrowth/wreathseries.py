"""Conjugacy growth series of G wr L for tree base groups L.

The three contributions are split by the order of the cursor (the L
coordinate): infinite order, torsion, and trivial.  Everything is computed in
exact truncated arithmetic from the lamp group's standard and conjugacy
series; the closed forms for the small base groups are transcribed separately
so the general machinery can be diffed against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction

from .groups import GroupSeriesInput, preset_lamp
from .series import (
    TruncatedSeries,
    find_unit_root,
    growth_rate_estimate,
    subtree_fixed_point,
)
from .treegroup import DegenerateTreeError, TreeGroupSpec, tree_orbit_representatives


@dataclass(frozen=True)
class WreathSpec:
    """Lamp series, tree base group, and working truncation degree."""

    lamp: GroupSeriesInput
    tree: TreeGroupSpec
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.lamp.degree != self.degree:
            raise ValueError(
                f"lamp series degree {self.lamp.degree} != spec degree {self.degree}"
            )


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("totient needs n >= 1")
    result = n
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _z_pow(degree: int, k: int) -> TruncatedSeries:
    return TruncatedSeries.monomial(degree, k)


def _power_cache(base: TruncatedSeries):
    cache = [TruncatedSeries.one(base.degree)]

    def power(k: int) -> TruncatedSeries:
        while len(cache) <= k:
            cache.append(cache[-1] * base)
        return cache[k]

    return power


def block_series(spec: WreathSpec) -> TruncatedSeries:
    """Growth series of one elementary block: a cursor step preceded by a
    lamp-setting excursion into the 2M+N-2 side directions,

        z * sgs(z) * F(z^2 sgs(z), z^2 (sgs(z)-1)) ^ (2M+N-2).
    """
    d = spec.tree.tree_degree
    if d < 2:
        raise DegenerateTreeError("block series needs tree degree >= 2")
    sigma = spec.lamp.sgs
    one = TruncatedSeries.one(spec.degree)
    z2 = _z_pow(spec.degree, 2)
    tree_part = subtree_fixed_point(d, z2 * sigma, z2 * (sigma - one))
    return _z_pow(spec.degree, 1) * sigma * tree_part ** (d - 2)


def _cyclically_reduced_count(tree: TreeGroupSpec, k: int) -> int:
    m, n = tree.num_free, tree.num_involutions
    return (2 * m + n - 1) ** k + (-1) ** k * (m + n - 1) + m


def block_tuple_series(spec: WreathSpec, k: int) -> TruncatedSeries:
    """Series of the k-block strings attached to the cyclically reduced
    cursor words of length k, before cyclic identification:
    count(k) * block^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return (block_series(spec) ** k).scale(_cyclically_reduced_count(spec.tree, k))


def cgs_infinite_cursor(spec: WreathSpec) -> TruncatedSeries:
    """Contribution of the conjugacy classes whose cursor has infinite order:

        sum_{r>=1} phi(r)/r sum_{s>=1} count(s)/s * block(z^r)^s,

    with count(s) the cyclically-reduced word count.  block(z^r)^s has
    valuation r*s, so the double sum over r*s <= degree is exhaustive for the
    truncation.
    """
    degree = spec.degree
    total = TruncatedSeries.zero(degree)
    if spec.tree.tree_degree < 2:
        return total  # L is finite, no infinite-order cursors
    block = block_series(spec)
    m, n = spec.tree.num_free, spec.tree.num_involutions
    q = 2 * m + n - 1
    for r in range(1, degree + 1):
        block_r = block.substitute_power(r)
        weight_r = Fraction(euler_phi(r), r)
        power = TruncatedSeries.one(degree)
        for s in range(1, degree // r + 1):
            power = power * block_r
            count = q**s + (-1) ** s * (m + n - 1) + m
            if count:
                total = total + power.scale(weight_r * Fraction(count, s))
    return total


def cgs_torsion_cursor(spec: WreathSpec) -> TruncatedSeries:
    """Contribution of the classes whose cursor is a torsion element:

        N * z * cgs(z) * F(z^2 cgs(z), z^2 (cgs(z)-1)) ^ (2M+N-1).

    The lamp entries here count only up to conjugacy in G, hence the
    conjugacy series of G in every slot.
    """
    n = spec.tree.num_involutions
    if n == 0:
        return TruncatedSeries.zero(spec.degree)
    c = spec.lamp.cgs
    one = TruncatedSeries.one(spec.degree)
    z2 = _z_pow(spec.degree, 2)
    tree_part = subtree_fixed_point(spec.tree.tree_degree, z2 * c, z2 * (c - one))
    return (
        _z_pow(spec.degree, 1) * c * tree_part ** (spec.tree.tree_degree - 1)
    ).scale(n)


def cgs_trivial_cursor(spec: WreathSpec) -> TruncatedSeries:
    """Contribution of the classes with trivial cursor, by Burnside over the
    translation orbits of finite spanned subtrees containing the origin.

    A subtree with E edges carries weight z^(2E) (the walk covers each edge
    twice), a nontrivial G-class on every leaf and any G-class on every
    non-leaf.  Orbits with a trivial stabilizer contribute the full labeling
    series; orbits with an order-2 stabilizer contribute half the labeling
    series plus half the reflection-fixed labelings, where the reflection
    pairs vertices without fixing any, so fixed labelings put equal classes on
    vertex pairs and the lamp series appear at z^2.  Subtrees with more than
    degree/2 edges start beyond the truncation, so the enumeration bound is
    exhaustive.
    """
    degree = spec.degree
    c = spec.lamp.cgs
    one = TruncatedSeries.one(degree)
    c2 = c.substitute_power(2)
    leaf_pow = _power_cache(c - one)
    nonleaf_pow = _power_cache(c)
    leaf2_pow = _power_cache(c2 - one)
    nonleaf2_pow = _power_cache(c2)
    half = Fraction(1, 2)
    total = TruncatedSeries.one(degree)  # the trivial conjugacy class
    for rep in tree_orbit_representatives(spec.tree, degree // 2):
        shift = _z_pow(degree, 2 * rep.edge_count)
        plain = shift * leaf_pow(rep.leaf_count) * nonleaf_pow(rep.nonleaf_count)
        if not rep.symmetric:
            total = total + plain
        else:
            fixed = (
                shift
                * leaf2_pow(rep.leaf_count // 2)
                * nonleaf2_pow(rep.nonleaf_count // 2)
            )
            total = total + (plain + fixed).scale(half)
    return total


def cgs_total(spec: WreathSpec) -> TruncatedSeries:
    """Full conjugacy growth series: infinite-order + torsion + trivial
    cursor contributions."""
    return cgs_infinite_cursor(spec) + cgs_torsion_cursor(spec) + cgs_trivial_cursor(spec)


# -- closed forms for the small base groups ------------------------------------


def cgs_closed_form_c2(lamp: GroupSeriesInput, degree: int) -> TruncatedSeries:
    """G wr C2:  cgs(z) + z*cgs(z) + z^2/2 * ((cgs(z)-1)^2 + cgs(z^2) - 1)."""
    c = lamp.cgs
    one = TruncatedSeries.one(degree)
    z = _z_pow(degree, 1)
    c2 = c.substitute_power(2)
    return c + z * c + (_z_pow(degree, 2) * ((c - one) ** 2 + c2 - one)).scale(
        Fraction(1, 2)
    )


def _log_like_sum(base: TruncatedSeries, weight: Fraction) -> TruncatedSeries:
    """weight * sum_{s>=1} base^s / s, truncated; base must have positive
    valuation so only s <= degree/valuation contribute."""
    degree = base.degree
    val = base.valuation()
    total = TruncatedSeries.zero(degree)
    if val > degree:
        return total
    power = TruncatedSeries.one(degree)
    for s in range(1, degree // val + 1):
        power = power * base
        total = total + power.scale(weight / s)
    return total


def cgs_closed_form_z(lamp: GroupSeriesInput, degree: int) -> TruncatedSeries:
    """G wr Z:  2 sum_r phi(r)/r sum_s z^(rs) sgs(z^r)^s / s
                + cgs(z) + z^2 (cgs(z)-1)^2 / (1 - z^2 cgs(z))."""
    sigma, c = lamp.sgs, lamp.cgs
    one = TruncatedSeries.one(degree)
    moving = TruncatedSeries.zero(degree)
    for r in range(1, degree + 1):
        base = _z_pow(degree, r) * sigma.substitute_power(r)
        moving = moving + _log_like_sum(base, Fraction(2 * euler_phi(r), r))
    z2 = _z_pow(degree, 2)
    stationary = c + z2 * (c - one) ** 2 * (one - z2 * c).reciprocal()
    return moving + stationary


def cgs_closed_form_lamplighter(degree: int) -> TruncatedSeries:
    """C2 wr Z:  2 sum_r phi(r)/r sum_s z^(rs) (1+z^r)^s / s
                 + 1 + z + z^4 / (1 - z^2 (1+z))."""
    one = TruncatedSeries.one(degree)
    moving = TruncatedSeries.zero(degree)
    for r in range(1, degree + 1):
        base = _z_pow(degree, r) * (one + _z_pow(degree, r))
        moving = moving + _log_like_sum(base, Fraction(2 * euler_phi(r), r))
    tail = one - _z_pow(degree, 2) * (one + _z_pow(degree, 1))
    return moving + one + _z_pow(degree, 1) + _z_pow(degree, 4) * tail.reciprocal()


def cgs_closed_form_c2c2(lamp: GroupSeriesInput, degree: int) -> TruncatedSeries:
    """G wr (C2*C2):  sum_r phi(r)/r sum_s z^(2rs) sgs(z^r)^(2s) / s
                      + 2 z cgs(z) (1-z^2)/(1-z^2 cgs(z))
                      + cgs(z) + z^2 (1+z^2 cgs(z)) (cgs(z)-1)^2 / (1-z^4 cgs(z)^2)
                      + z^2 (cgs(z^2)-1)/(1-z^4 cgs(z^2))."""
    sigma, c = lamp.sgs, lamp.cgs
    one = TruncatedSeries.one(degree)
    z1, z2, z4 = _z_pow(degree, 1), _z_pow(degree, 2), _z_pow(degree, 4)
    moving = TruncatedSeries.zero(degree)
    for r in range(1, degree // 2 + 1):
        base = (_z_pow(degree, r) * sigma.substitute_power(r)) ** 2
        moving = moving + _log_like_sum(base, Fraction(euler_phi(r), r))
    torsion = (z1 * c * (one - z2) * (one - z2 * c).reciprocal()).scale(2)
    c2 = c.substitute_power(2)
    stationary = (
        c
        + z2 * (one + z2 * c) * (c - one) ** 2 * (one - z4 * c**2).reciprocal()
        + z2 * (c2 - one) * (one - z4 * c2).reciprocal()
    )
    return moving + torsion + stationary


# -- radius of convergence and asymptotics -------------------------------------


@dataclass(frozen=True)
class RCReport:
    """Positive root of (2M+N-1)*block(t) = 1 next to growth-rate estimates
    read off the conjugacy and standard series prefixes."""

    unit_root: float
    cgs_estimate: float
    sgs_estimate: float | None


def rc_report(
    spec: WreathSpec,
    tol: float = 1e-12,
    cgs_window: int = 20,
    sgs_series: TruncatedSeries | None = None,
    sgs_window: int = 6,
) -> RCReport:
    d = spec.tree.tree_degree
    if d < 2:
        raise DegenerateTreeError("radius report needs tree degree >= 2")
    root = find_unit_root(block_series(spec).scale(d - 1), tol)
    cgs_estimate = growth_rate_estimate(cgs_total(spec), cgs_window)
    sgs_estimate = (
        growth_rate_estimate(sgs_series, sgs_window) if sgs_series is not None else None
    )
    return RCReport(root, cgs_estimate, sgs_estimate)


@dataclass(frozen=True)
class AsymptoticRow:
    m: int
    coefficient: int
    estimate: float
    ratio: float


def lamplighter_asymptotic_check(
    degree: int, m_lo: int, m_hi: int
) -> list[AsymptoticRow]:
    """Exact conjugacy coefficients of C2 wr Z against the estimate
    (2/m) * ((1+sqrt(5))/2)^m, with the ratio column."""
    if degree < m_hi:
        raise ValueError("degree must cover m_hi")
    spec = WreathSpec(preset_lamp("C2", degree), TreeGroupSpec(1, 0), degree)
    series = cgs_total(spec)
    getcontext().prec = 50
    golden = (1 + Decimal(5).sqrt()) / 2
    rows = []
    for m in range(m_lo, m_hi + 1):
        coeff = series[m]
        if coeff.denominator != 1:
            raise AssertionError(f"non-integer conjugacy coefficient at degree {m}")
        estimate = 2 * golden**m / m
        ratio = Decimal(coeff.numerator) / estimate
        rows.append(AsymptoticRow(m, coeff.numerator, float(estimate), float(ratio)))
    return rows
