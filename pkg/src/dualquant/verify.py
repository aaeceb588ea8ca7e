"""Independent oracles and the property-based verification suite.

`quantile_by_definition` re-derives quantiles straight from their set
definitions using only `dist_fn` over a provably sufficient candidate
grid, giving every closed-form result in the quantiles module a second,
unrelated route to be checked against.  `run_suite` drives seeded
random mixtures through the full battery: the one-sided quantile
properties (ids a-k), the negation mirror identity (S), agreement of
all definitional variants and distribution-function flavors (V), and
monotone-map equivariance across a stock library (E).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

from .distributions import (
    NEG_INF,
    POS_INF,
    Atom,
    DistFnFlavor,
    ExtendedReal,
    MixtureDistribution,
    Probability,
    UniformSegment,
    as_extended,
    as_level,
    breakpoints,
    describe,
    dist_fn,
    essential_bounds,
    is_continuous,
    is_strictly_monotone_on_hull,
    negate,
)
from .errors import MapDomainError, ContinuityMismatchError, UnsupportedPushforwardError
from .quantiles import (
    LevelLike,
    QuantileSide,
    left_quantile,
    quantile_at,
    right_quantile,
)
from .transforms import (
    Continuity,
    Direction,
    MapPiece,
    MonotoneMap,
    PiecewiseMonotoneMap,
    affine_map,
    equivariant_quantile,
    neglog10_map,
    negation_map,
    pow10_neg_map,
    pushforward,
)

__all__ = [
    "QuantileVariant",
    "CheckResult",
    "PropertyReport",
    "GeneratorConfig",
    "quantile_by_definition",
    "check_quantile_properties",
    "check_symmetry",
    "random_mixture",
    "run_suite",
    "stock_maps",
    "standard_levels",
    "suite_passed",
    "first_failure",
    "summarize",
    "report_to_dict",
    "reports_to_json",
    "off_by_one_left_quantile",
]

QuantileFn = Callable[[MixtureDistribution, Probability], ExtendedReal]


class QuantileVariant(Enum):
    """The six definitional forms: each quantile as an inf over either
    distribution-function flavor, and as a sup of the complement set."""

    LQ_CLOSED_INF = "lq_closed_inf"  # inf {x : P(X<=x) >= p}
    LQ_OPEN_INF = "lq_open_inf"      # inf {x : P(X<x)  >= p}
    LQ_CLOSED_SUP = "lq_closed_sup"  # sup {x : P(X<=x) <  p}
    RQ_CLOSED_INF = "rq_closed_inf"  # inf {x : P(X<=x) >  p}
    RQ_OPEN_INF = "rq_open_inf"      # inf {x : P(X<x)  >  p}
    RQ_CLOSED_SUP = "rq_closed_sup"  # sup {x : P(X<=x) <= p}


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    details: str


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of every check for one (distribution, level) pair."""

    distribution: str
    level: Probability
    results: tuple[CheckResult, ...]

    def __post_init__(self):
        ids = [r.check_id for r in self.results]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate check ids in report: {ids}")

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(r for r in self.results if not r.passed)


def _fmt(x: ExtendedReal) -> str:
    x = as_extended(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x)


# ---------------------------------------------------------------------------
# definitional oracle


@lru_cache(maxsize=4096)
def _candidate_table(d: MixtureDistribution):
    # fixed (level-independent) candidates with their exact F values:
    # one probe outside the hull on each side, every breakpoint, and
    # every midpoint between consecutive breakpoints
    bps = breakpoints(d)
    xs = [Fraction(bps[0]) - 1]
    for i, b in enumerate(bps):
        xs.append(Fraction(b))
        if i + 1 < len(bps):
            xs.append((Fraction(b) + Fraction(bps[i + 1])) / 2)
    xs.append(Fraction(bps[-1]) + 1)
    return tuple(
        (x, dist_fn(d, DistFnFlavor.LEFT_CLOSED, x), dist_fn(d, DistFnFlavor.LEFT_OPEN, x))
        for x in xs
    )


@lru_cache(maxsize=1 << 15)
def _candidates(d: MixtureDistribution, p: Probability):
    # add, per breakpoint interval that carries mass, the point where
    # the (affine) distribution function crosses level p
    cells = {x: (fc, fo) for x, fc, fo in _candidate_table(d)}
    bps = breakpoints(d)
    for i in range(len(bps) - 1):
        a, b = Fraction(bps[i]), Fraction(bps[i + 1])
        fca = cells[a][0]
        fob = cells[b][1]
        gain = fob - fca  # mass of the open interval (a, b)
        if gain > 0:
            t = a + (p - fca) * (b - a) / gain
            if a < t < b:
                cells[t] = (
                    dist_fn(d, DistFnFlavor.LEFT_CLOSED, t),
                    dist_fn(d, DistFnFlavor.LEFT_OPEN, t),
                )
    return tuple(sorted(cells.items()))


_VARIANT_RULES = {
    QuantileVariant.LQ_CLOSED_INF: ("inf", "closed", "ge"),
    QuantileVariant.LQ_OPEN_INF: ("inf", "open", "ge"),
    QuantileVariant.LQ_CLOSED_SUP: ("sup", "closed", "lt"),
    QuantileVariant.RQ_CLOSED_INF: ("inf", "closed", "gt"),
    QuantileVariant.RQ_OPEN_INF: ("inf", "open", "gt"),
    QuantileVariant.RQ_CLOSED_SUP: ("sup", "closed", "le"),
}


def quantile_by_definition(
    d: MixtureDistribution, p: LevelLike, variant: QuantileVariant
) -> ExtendedReal:
    """Evaluate a quantile directly from its set definition.

    Scans exact distribution-function values over a candidate grid
    (hull-exterior probes, breakpoints, midpoints, and the point where
    F crosses the level inside each mass-carrying interval).  For a
    piecewise-affine F the defining set's boundary must be one of these
    points or sit just past one across a flat stretch, so a single
    one-sided-limit refinement at the boundary settles the inf/sup
    exactly.  Shares nothing with the closed-form quantile walk.
    """
    p = as_level(p)
    if not isinstance(variant, QuantileVariant):
        raise TypeError(f"variant must be a QuantileVariant, got {variant!r}")
    mode, flavor, cmp_name = _VARIANT_RULES[variant]
    cands = _candidates(d, p)

    def pred(fc: Fraction, fo: Fraction) -> bool:
        v = fc if flavor == "closed" else fo
        if cmp_name == "ge":
            return v >= p
        if cmp_name == "gt":
            return v > p
        if cmp_name == "lt":
            return v < p
        return v <= p

    strict = cmp_name in ("gt", "lt")
    flags = [pred(fc, fo) for _, (fc, fo) in cands]
    if mode == "inf":
        if flags[0]:
            # true below the entire support, hence on every lower real
            return NEG_INF
        for i, ok in enumerate(flags):
            if not ok:
                continue
            prev_x, (prev_fc, _) = cands[i - 1]
            x, (_, fo_x) = cands[i]
            if strict:
                # set may open just past prev_x: F there tends to
                # P(X<=prev_x) and must exceed p, or touch p while the
                # gap to the next candidate still carries mass
                if prev_fc > p or (prev_fc == p and fo_x - prev_fc > 0):
                    return as_extended(prev_x)
            else:
                if prev_fc >= p:
                    return as_extended(prev_x)
            return as_extended(x)
        return POS_INF  # empty set
    # sup mode
    if flags[-1]:
        return POS_INF
    last = None
    for i in range(len(cands) - 1, -1, -1):
        if flags[i]:
            last = i
            break
    if last is None:
        return NEG_INF  # empty set
    x, (fc_x, _) = cands[last]
    nxt_x, (_, nxt_fo) = cands[last + 1]
    if strict:
        # the open stretch before nxt_x still qualifies when F stays
        # under p there, or only reaches p in the limit
        if nxt_fo < p or (nxt_fo == p and nxt_fo - fc_x > 0):
            return as_extended(nxt_x)
    else:
        if nxt_fo <= p:
            return as_extended(nxt_x)
    return as_extended(x)


# ---------------------------------------------------------------------------
# property batteries


def _result(check_id: str, passed: bool, details: str) -> CheckResult:
    return CheckResult(check_id, bool(passed), details)


def _interval_mass(d, lo, hi) -> Fraction:
    # P(lo < X < hi); infinite endpoints fall out of the flavor limits
    return dist_fn(d, DistFnFlavor.LEFT_OPEN, hi) - dist_fn(d, DistFnFlavor.LEFT_CLOSED, lo)


def _property_results(
    d: MixtureDistribution, p: Probability, lq_fn: QuantileFn, rq_fn: QuantileFn
) -> list[CheckResult]:
    out = []
    lq = lq_fn(d, p)
    rq = rq_fn(d, p)
    fc_lq = dist_fn(d, DistFnFlavor.LEFT_CLOSED, lq)
    fo_rq = dist_fn(d, DistFnFlavor.LEFT_OPEN, rq)

    out.append(_result("a", fc_lq >= p, f"F(lq)={_fmt(fc_lq)} >= p at lq={_fmt(lq)}"))
    out.append(_result("b", lq <= rq, f"lq={_fmt(lq)} <= rq={_fmt(rq)}"))

    if p == 1:
        out.append(_result("c", True, "vacuous: no level above 1"))
    else:
        higher = sorted({p + (1 - p) * Fraction(k, 4) for k in (1, 2, 3, 4)} | {p + (1 - p) / 97})
        bad = [p2 for p2 in higher if not rq <= lq_fn(d, p2)]
        out.append(
            _result(
                "c",
                not bad,
                f"rq={_fmt(rq)} <= lq at {len(higher)} higher levels"
                + (f"; FAILED at {_fmt(bad[0])}" if bad else ""),
            )
        )

    sup_form = quantile_by_definition(d, p, QuantileVariant.RQ_CLOSED_SUP)
    out.append(
        _result("d", rq == sup_form, f"rq={_fmt(rq)} == sup-form {_fmt(sup_form)}")
    )

    between = _interval_mass(d, lq, rq) if lq < rq else Fraction(0)
    out.append(_result("e", between == 0, f"P(lq < X < rq)={_fmt(between)}"))

    out.append(_result("f", fo_rq <= p, f"P(X<rq)={_fmt(fo_rq)} <= p at rq={_fmt(rq)}"))

    if p == 0 or p == 1:
        out.append(_result("g", True, "skipped at the endpoint levels (claim is for 0<p<1)"))
    elif lq < rq:
        gc_rq = dist_fn(d, DistFnFlavor.RIGHT_CLOSED, rq)
        ok = fc_lq == p and gc_rq == 1 - p
        out.append(
            _result(
                "g",
                ok,
                f"lq={_fmt(lq)} < rq={_fmt(rq)}: F(lq)={_fmt(fc_lq)} == p and "
                f"P(X>=rq)={_fmt(gc_rq)} == 1-p",
            )
        )
    else:
        out.append(_result("g", True, f"vacuous: lq == rq == {_fmt(lq)}"))

    lq1 = lq_fn(d, Fraction(1))
    rq0 = rq_fn(d, Fraction(0))
    finite = not (isinstance(lq1, float) and math.isinf(lq1)) and not (
        isinstance(rq0, float) and math.isinf(rq0)
    )
    closed_mass = (
        dist_fn(d, DistFnFlavor.LEFT_CLOSED, lq1) - dist_fn(d, DistFnFlavor.LEFT_OPEN, rq0)
        if finite
        else None
    )
    out.append(
        _result(
            "h",
            finite and closed_mass == 1,
            f"lq(1)={_fmt(lq1)}, rq(0)={_fmt(rq0)} finite and carry mass "
            f"{_fmt(closed_mass) if closed_mass is not None else '?'}",
        )
    )

    grid = sorted({Fraction(k, 10) for k in range(11)} | {p})
    lqs = [lq_fn(d, q) for q in grid]
    rqs = [rq_fn(d, q) for q in grid]
    mono = all(a <= b for a, b in zip(lqs, lqs[1:])) and all(
        a <= b for a, b in zip(rqs, rqs[1:])
    )
    out.append(_result("i", mono, f"both quantile functions non-decreasing over {len(grid)} levels"))

    bad_atoms = [
        a.location
        for a in d.atoms
        if lq_fn(d, dist_fn(d, DistFnFlavor.LEFT_CLOSED, a.location)) != a.location
    ]
    out.append(
        _result(
            "j",
            not bad_atoms,
            f"lq(F(x0)) == x0 at {len(d.atoms)} atoms"
            + (f"; FAILED at {bad_atoms[0]!r}" if bad_atoms else ""),
        )
    )

    lo_b, hi_b = essential_bounds(d)
    span = Fraction(hi_b) - Fraction(lo_b) + 1
    notes = []
    ok_k = True
    if isinstance(lq, float) and math.isinf(lq):
        notes.append("no reals below lq=-inf")
    else:
        probes = [Fraction(lq) - span * Fraction(j, 8) for j in range(1, 9)]
        ok_k &= all(dist_fn(d, DistFnFlavor.LEFT_CLOSED, x) < p for x in probes)
        notes.append("F < p at 8 probes below lq")
    if isinstance(rq, float) and math.isinf(rq):
        notes.append("no reals above rq=+inf")
    else:
        probes = [Fraction(rq) + span * Fraction(j, 8) for j in range(1, 9)]
        ok_k &= all(dist_fn(d, DistFnFlavor.LEFT_CLOSED, x) > p for x in probes)
        notes.append("F > p at 8 probes above rq")
    out.append(_result("k", ok_k, "; ".join(notes)))
    return out


def _symmetry_results(
    d: MixtureDistribution, p: Probability, lq_fn: QuantileFn, rq_fn: QuantileFn
) -> list[CheckResult]:
    nd = negate(d)
    lq = lq_fn(d, p)
    rq = rq_fn(d, p)
    lq_mirror = -quantile_by_definition(nd, 1 - p, QuantileVariant.RQ_CLOSED_INF)
    rq_mirror = -quantile_by_definition(nd, 1 - p, QuantileVariant.LQ_CLOSED_INF)
    ok = lq == lq_mirror and rq == rq_mirror
    return [
        _result(
            "S",
            ok,
            f"lq={_fmt(lq)} == -rq(-X,1-p)={_fmt(lq_mirror)}; "
            f"rq={_fmt(rq)} == -lq(-X,1-p)={_fmt(rq_mirror)}",
        )
    ]


def _variant_results(
    d: MixtureDistribution, p: Probability, lq_fn: QuantileFn, rq_fn: QuantileFn
) -> list[CheckResult]:
    lq = lq_fn(d, p)
    rq = rq_fn(d, p)
    lq_defs = {
        v: quantile_by_definition(d, p, v)
        for v in (
            QuantileVariant.LQ_CLOSED_INF,
            QuantileVariant.LQ_OPEN_INF,
            QuantileVariant.LQ_CLOSED_SUP,
        )
    }
    rq_defs = {
        v: quantile_by_definition(d, p, v)
        for v in (
            QuantileVariant.RQ_CLOSED_INF,
            QuantileVariant.RQ_OPEN_INF,
            QuantileVariant.RQ_CLOSED_SUP,
        )
    }
    ok_lq = all(v == lq for v in lq_defs.values())
    ok_rq = all(v == rq for v in rq_defs.values())

    # flavor independence of the shape predicates, against structure-free
    # oracles: a jump is a gap between P(X<=b) and P(X<b) at a breakpoint,
    # a monotonicity flat is a massless open interval between breakpoints
    bps = breakpoints(d)
    has_jump = any(
        dist_fn(d, DistFnFlavor.LEFT_CLOSED, b) != dist_fn(d, DistFnFlavor.LEFT_OPEN, b)
        for b in bps
    )
    cont_answers = {is_continuous(d, fl) for fl in DistFnFlavor}
    ok_cont = cont_answers == {not has_jump}
    has_gap = any(
        _interval_mass(d, a, b) == 0 for a, b in zip(bps, bps[1:])
    )
    mono_answers = {is_strictly_monotone_on_hull(d, fl) for fl in DistFnFlavor}
    ok_mono = mono_answers == {not has_gap}

    ok = ok_lq and ok_rq and ok_cont and ok_mono
    return [
        _result(
            "V",
            ok,
            f"3 lq variants == {_fmt(lq)}: {ok_lq}; 3 rq variants == {_fmt(rq)}: {ok_rq}; "
            f"continuity flavor-free and jump-checked: {ok_cont}; "
            f"strict-monotonicity flavor-free and gap-checked: {ok_mono}",
        )
    ]


def _is_inf(x: ExtendedReal) -> bool:
    return isinstance(x, float) and math.isinf(x)


def _equivariance_results(
    d: MixtureDistribution,
    p: Probability,
    maps: Sequence[tuple[str, MonotoneMap]],
) -> list[CheckResult]:
    checked = 0
    skipped = 0
    failures = []
    for name, m in maps:
        try:
            push = pushforward(d, m)
        except (UnsupportedPushforwardError, MapDomainError):
            skipped += 2
            continue
        for side in (QuantileSide.LEFT, QuantileSide.RIGHT):
            try:
                routed = equivariant_quantile(d, m, p, side)
            except ContinuityMismatchError:
                skipped += 1  # hypothesis not met; the identity is not claimed
                continue
            except MapDomainError:
                skipped += 1  # preimage quantile outside the map's domain closure
                continue
            if p == 0 and side is QuantileSide.LEFT and not _is_inf(routed):
                # map bounded below: lq of the image at 0 is -inf by
                # convention while the routed value is the finite range
                # edge; the identity quantifies over reals and does not
                # cover this corner
                skipped += 1
                continue
            if p == 1 and side is QuantileSide.RIGHT and not _is_inf(routed):
                skipped += 1
                continue
            direct = quantile_at(push, p, side)
            checked += 1
            if direct == routed:
                continue
            if (
                not _is_inf(direct)
                and not _is_inf(routed)
                and not any(direct == a.location for a in push.atoms)
                and abs(float(direct) - float(routed)) <= 1e-12
            ):
                continue  # segment-interior result: float rounding allowance
            failures.append(
                f"{name}/{side.value}: direct {_fmt(direct)} != routed {_fmt(routed)}"
            )
    ok = not failures
    detail = f"{checked} identities checked, {skipped} skipped over {len(maps)} maps"
    if failures:
        detail += "; " + "; ".join(failures[:3])
    return [_result("E", ok, detail)]


def check_quantile_properties(
    d: MixtureDistribution,
    p: LevelLike,
    *,
    lq_fn: Optional[QuantileFn] = None,
    rq_fn: Optional[QuantileFn] = None,
) -> PropertyReport:
    """Run the one-sided quantile property battery (ids a-k) at one level."""
    p = as_level(p)
    lq_fn = lq_fn or left_quantile
    rq_fn = rq_fn or right_quantile
    return PropertyReport(describe(d), p, tuple(_property_results(d, p, lq_fn, rq_fn)))


def check_symmetry(d: MixtureDistribution, p: LevelLike) -> PropertyReport:
    """Check the negation mirror identities at one level (id S).

    Both sides go through the definitional oracle on the negated
    distribution, so closed-form quantiles are confronted with an
    independent route on an independently constructed object.
    """
    p = as_level(p)
    return PropertyReport(
        describe(d), p, tuple(_symmetry_results(d, p, left_quantile, right_quantile))
    )


# ---------------------------------------------------------------------------
# stock map library


def _jump_pieces(slope: float, gap: float):
    return (
        MapPiece(NEG_INF, 0.0, slope, 0.0),
        MapPiece(0.0, POS_INF, slope, gap),
    )


@lru_cache(maxsize=1)
def stock_maps() -> tuple[tuple[str, MonotoneMap], ...]:
    """Named maps covering every direction x one-sided-continuity cell,
    both curved smooth kinds, flat interior stretches, and negation.

    Tail pieces are strictly monotone so the maps are unbounded on both
    ends (jump maps aside, see the bounded-range skip rule in the
    equivariance checker).
    """
    nd = Direction.NON_DECREASING
    ni = Direction.NON_INCREASING
    flat_nd = (
        MapPiece(NEG_INF, 0.0, 1.0, 0.0),
        MapPiece(0.0, 1.0, 0.0, 0.0),
        MapPiece(1.0, POS_INF, 1.0, -1.0),
    )
    flat_ni = (
        MapPiece(NEG_INF, 0.0, -1.0, 0.0),
        MapPiece(0.0, 1.0, 0.0, 0.0),
        MapPiece(1.0, POS_INF, -1.0, 1.0),
    )
    return (
        ("negation", negation_map()),
        ("affine_up", affine_map(2.0, 1.0)),
        ("affine_down", affine_map(-3.0, 0.5)),
        ("pow10neg", pow10_neg_map()),
        ("neglog10", neglog10_map()),
        ("nd_jump_left", PiecewiseMonotoneMap(_jump_pieces(1.0, 1.0), nd, (Continuity.LEFT,))),
        ("nd_jump_right", PiecewiseMonotoneMap(_jump_pieces(1.0, 1.0), nd, (Continuity.RIGHT,))),
        ("ni_jump_left", PiecewiseMonotoneMap(_jump_pieces(-1.0, -1.0), ni, (Continuity.LEFT,))),
        ("ni_jump_right", PiecewiseMonotoneMap(_jump_pieces(-1.0, -1.0), ni, (Continuity.RIGHT,))),
        ("nd_flat_mid", PiecewiseMonotoneMap(flat_nd, nd, (Continuity.LEFT, Continuity.LEFT))),
        ("ni_flat_mid", PiecewiseMonotoneMap(flat_ni, ni, (Continuity.RIGHT, Continuity.RIGHT))),
    )


# ---------------------------------------------------------------------------
# seeded random corpus


@dataclass(frozen=True)
class GeneratorConfig:
    """Shape parameters for the seeded mixture generator."""

    seed: int = 0
    max_atoms: int = 4
    max_segments: int = 3
    location_range: tuple[float, float] = (-4.0, 4.0)
    mass_granularity: int = 16

    def __post_init__(self):
        if self.max_atoms < 0 or self.max_segments < 0:
            raise ValueError("max_atoms and max_segments must be >= 0")
        if self.max_atoms + self.max_segments < 1:
            raise ValueError("the generator needs room for at least one component")
        lo, hi = self.location_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"bad location range {self.location_range!r}")
        if self.mass_granularity < 1:
            raise ValueError("mass_granularity must be >= 1")


_LATTICE_STEPS = 32


def _lattice(cfg: GeneratorConfig) -> list[float]:
    lo, hi = cfg.location_range
    return [lo + k * (hi - lo) / _LATTICE_STEPS for k in range(_LATTICE_STEPS + 1)]


def _rand_mass(rng: random.Random, cfg: GeneratorConfig) -> Fraction:
    return Fraction(rng.randint(1, cfg.mass_granularity), cfg.mass_granularity)


def _rand_segments(rng, cfg, lat, indices, count):
    # pair sorted distinct lattice indices into disjoint segments, then
    # fuse some junctions so touching segments occur with real frequency
    idxs = sorted(rng.sample(indices, 2 * count))
    pairs = [(idxs[2 * j], idxs[2 * j + 1]) for j in range(count)]
    for j in range(1, count):
        if rng.random() < 0.35:
            pairs[j] = (pairs[j - 1][1], pairs[j][1])
    return [UniformSegment(lat[a], lat[b], _rand_mass(rng, cfg)) for a, b in pairs]


def _rand_atoms(rng, cfg, lat, indices, count):
    return [Atom(lat[i], _rand_mass(rng, cfg)) for i in rng.sample(indices, count)]


def random_mixture(cfg: GeneratorConfig) -> MixtureDistribution:
    """Draw one random mixture, a pure function of the config.

    Locations sit on a fixed lattice over the location range so atoms
    land on segment endpoints and segments touch with positive
    probability.  Three edge shapes are forced with >= 5% frequency
    each: a single atom, an atom-free mixture, and a support with an
    interior gap.
    """
    rng = random.Random(cfg.seed)
    lat = _lattice(cfg)
    all_idx = list(range(len(lat)))
    can_atom = cfg.max_atoms >= 1
    can_seg = cfg.max_segments >= 1

    roll = rng.random()
    if roll < 0.05 and can_atom:
        mode = "single_atom"
    elif roll < 0.10 and can_seg:
        mode = "atom_free"
    elif roll < 0.15 and (cfg.max_atoms + cfg.max_segments >= 2 or can_seg):
        mode = "gapped"
    else:
        mode = "generic"

    if mode == "single_atom":
        return MixtureDistribution(atoms=(Atom(lat[rng.choice(all_idx)], Fraction(1)),))

    if mode == "atom_free":
        count = rng.randint(1, cfg.max_segments)
        return MixtureDistribution(segments=tuple(_rand_segments(rng, cfg, lat, all_idx, count)))

    if mode == "gapped":
        # one component on each side of an interior hole
        g1 = rng.randint(8, _LATTICE_STEPS // 2)
        g2 = g1 + rng.randint(2, 4)
        left_idx = list(range(0, g1 + 1))
        right_idx = list(range(g2, _LATTICE_STEPS + 1))
        atoms: list[Atom] = []
        segments: list[UniformSegment] = []
        budget_atoms = cfg.max_atoms
        budget_segs = cfg.max_segments
        for side_idx in (left_idx, right_idx):
            use_seg = budget_segs > 0 and (budget_atoms == 0 or rng.random() < 0.5)
            if use_seg:
                segments.extend(_rand_segments(rng, cfg, lat, side_idx, 1))
                budget_segs -= 1
            else:
                atoms.extend(_rand_atoms(rng, cfg, lat, side_idx, 1))
                budget_atoms -= 1
        return MixtureDistribution(atoms=tuple(atoms), segments=tuple(segments))

    n_atoms = rng.randint(0, cfg.max_atoms)
    n_segs = rng.randint(0, cfg.max_segments)
    if n_atoms == 0 and n_segs == 0:
        if can_atom:
            n_atoms = 1
        else:
            n_segs = 1
    segments = _rand_segments(rng, cfg, lat, all_idx, n_segs) if n_segs else []
    atoms = _rand_atoms(rng, cfg, lat, all_idx, n_atoms) if n_atoms else []
    return MixtureDistribution(atoms=tuple(atoms), segments=tuple(segments))


def standard_levels(seed: int = 42) -> tuple[Probability, ...]:
    """The level battery for verification runs: the 21-point grid k/20
    plus 50 seeded random rationals with mixed denominators."""
    grid = {Fraction(k, 20) for k in range(21)}
    rng = random.Random(f"levels-{seed}")
    extra: set[Fraction] = set()
    while len(extra) < 50:
        den = rng.choice((8, 16, 20, 32, 100, 1000))
        f = Fraction(rng.randint(0, den), den)
        if f not in grid:
            extra.add(f)
    return tuple(sorted(grid | extra))


def run_suite(
    cfg: GeneratorConfig,
    n_dists: int,
    levels: Sequence[LevelLike],
    *,
    maps: Optional[Sequence[tuple[str, MonotoneMap]]] = None,
    lq_fn: Optional[QuantileFn] = None,
    rq_fn: Optional[QuantileFn] = None,
) -> list[PropertyReport]:
    """Check every identity on ``n_dists`` seeded mixtures at every level.

    Returns one report per (distribution, level) pair holding the full
    battery: properties a-k, symmetry S, variant/flavor agreement V,
    and map equivariance E.  ``lq_fn``/``rq_fn`` let a caller swap in a
    deliberately broken implementation (see `off_by_one_left_quantile`)
    to confirm the harness actually bites.
    """
    if n_dists < 1:
        raise ValueError("n_dists must be >= 1")
    lq_fn = lq_fn or left_quantile
    rq_fn = rq_fn or right_quantile
    map_list = tuple(stock_maps() if maps is None else maps)
    levels = [as_level(p) for p in levels]
    reports = []
    for i in range(n_dists):
        d = random_mixture(replace(cfg, seed=cfg.seed + i))
        label = describe(d)
        for p in levels:
            results = (
                _property_results(d, p, lq_fn, rq_fn)
                + _symmetry_results(d, p, lq_fn, rq_fn)
                + _variant_results(d, p, lq_fn, rq_fn)
                + _equivariance_results(d, p, map_list)
            )
            reports.append(PropertyReport(label, p, tuple(results)))
    return reports


def suite_passed(reports: Sequence[PropertyReport]) -> bool:
    return all(r.passed for r in reports)


def first_failure(
    reports: Sequence[PropertyReport],
) -> Optional[tuple[PropertyReport, CheckResult]]:
    for r in reports:
        for c in r.results:
            if not c.passed:
                return r, c
    return None


def summarize(reports: Sequence[PropertyReport]) -> str:
    n_bad = sum(1 for r in reports if not r.passed)
    checks = sum(len(r.results) for r in reports)
    bad_checks = sum(len(r.failures()) for r in reports)
    return (
        f"{len(reports)} reports, {checks} checks: "
        f"{bad_checks} failed checks in {n_bad} reports"
    )


def report_to_dict(r: PropertyReport) -> dict:
    return {
        "distribution": r.distribution,
        "level": float(r.level),
        "level_exact": f"{r.level.numerator}/{r.level.denominator}",
        "passed": r.passed,
        "results": [
            {"id": c.check_id, "pass": c.passed, "details": c.details} for c in r.results
        ],
    }


def reports_to_json(reports: Sequence[PropertyReport]) -> dict:
    """JSON-able summary: totals plus the per-report breakdown."""
    return {
        "total_reports": len(reports),
        "failed_reports": sum(1 for r in reports if not r.passed),
        "all_passed": suite_passed(reports),
        "reports": [report_to_dict(r) for r in reports],
    }


def off_by_one_left_quantile(d: MixtureDistribution, p: LevelLike) -> ExtendedReal:
    """A deliberately broken left quantile for harness-sensitivity runs:
    every finite answer is bumped to the next support landmark above
    (one atom/endpoint too high), the classic off-by-one indexing slip."""
    x = left_quantile(d, p)
    if isinstance(x, float) and math.isinf(x):
        return x
    for b in breakpoints(d):
        if b > x:
            return b
    return x
