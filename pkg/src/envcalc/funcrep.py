"""Function representations: exact piecewise-linear convex, grids, max-affine.

Two scalar backends coexist.  ``PLConvex1D`` is fully exact (Fraction
breakpoints/values/slopes) and is the only representation on which
zero-tolerance theorem checks run.  ``GridFunction`` stores float values on a
finite point list and is +inf off the listed points by convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .extreal import (
    ExtReal,
    NEG_INF,
    POS_INF,
    MixedScalarError,
    as_extreal,
    ext_sup,
    format_scalar,
    parse_scalar,
)

GRID_TOL = 1e-9

Point = Union[int, float, Fraction, tuple]


def dot(p: Point, q: Point, dim: int):
    """Inner product; 1D points are bare scalars, 2D points are pairs."""
    if dim == 1:
        return p * q
    return sum(a * b for a, b in zip(p, q))


def point_sub(p: Point, q: Point, dim: int):
    if dim == 1:
        return p - q
    return tuple(a - b for a, b in zip(p, q))


def point_dist2(p: Point, q: Point, dim: int):
    d = point_sub(p, q, dim)
    return dot(d, d, dim)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise MixedScalarError(f"exact backend needs int/Fraction, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# intervals (domains, level sets, subgradient ranges)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval1D:
    """A possibly unbounded real interval; ``None`` bounds mean -inf / +inf."""

    lo: Fraction | None
    hi: Fraction | None
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo is not None and self.hi is not None:
            if self.lo > self.hi:
                raise ValueError("empty interval; use None instead")
            if self.lo == self.hi and (self.lo_open or self.hi_open):
                raise ValueError("degenerate open interval is empty")

    def contains(self, x) -> bool:
        if self.lo is not None:
            if x < self.lo or (self.lo_open and x == self.lo):
                return False
        if self.hi is not None:
            if x > self.hi or (self.hi_open and x == self.hi):
                return False
        return True

    def is_singleton(self) -> bool:
        return self.lo is not None and self.lo == self.hi


# ---------------------------------------------------------------------------
# exact piecewise-linear convex functions on the line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PLConvex1D:
    """Piecewise-linear convex function with exact rational data.

    ``left_recession``/``right_recession`` are the slopes of the affine
    extension beyond the breakpoint span; ``None`` marks a domain wall (the
    function is +inf strictly beyond the endpoint).  ``override_left`` /
    ``override_right`` optionally raise the value at a wall endpoint above the
    interpolated limit (finite Fraction or +inf), which is how non-lsc
    behaviour and open domain ends are modelled.
    """

    breakpoints: tuple
    values: tuple
    left_recession: Fraction | None = None
    right_recession: Fraction | None = None
    override_left: ExtReal | None = None
    override_right: ExtReal | None = None
    label: str | None = None

    def __post_init__(self):
        bps = tuple(_frac(b) for b in self.breakpoints)
        vals = tuple(_frac(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) == 0:
            raise ValueError("need at least one breakpoint")
        if len(bps) != len(vals):
            raise ValueError("breakpoints and values length mismatch")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        sl = self.left_recession
        sr = self.right_recession
        if sl is not None:
            object.__setattr__(self, "left_recession", _frac(sl))
        if sr is not None:
            object.__setattr__(self, "right_recession", _frac(sr))
        s = self.slopes()
        if any(a > b for a, b in zip(s, s[1:])):
            raise ValueError("interior slopes must be nondecreasing (convexity)")
        if self.left_recession is not None:
            first = s[0] if s else None
            if first is not None and self.left_recession > first:
                raise ValueError("left recession slope must not exceed first slope")
            if not s and self.right_recession is not None:
                if self.left_recession > self.right_recession:
                    raise ValueError("recession slopes out of order")
        if self.right_recession is not None and s and self.right_recession < s[-1]:
            raise ValueError("right recession slope must be at least the last slope")
        for side, ov in (("left", self.override_left), ("right", self.override_right)):
            if ov is None:
                continue
            ov = as_extreal(Fraction(ov) if isinstance(ov, int) else ov)
            if ov.is_neg_inf:
                raise ValueError("override cannot be -inf")
            if ov.is_finite:
                ov = ExtReal(_frac(ov.value))
            base = vals[0] if side == "left" else vals[-1]
            if ov.is_finite and ov.value < base:
                raise ValueError("override must not lie below the interpolated value")
            if ov.is_finite and ov.value == base:
                ov = None  # no-op override
            rec = self.left_recession if side == "left" else self.right_recession
            if ov is not None and rec is not None:
                raise ValueError(
                    "override requires a domain wall on that side "
                    "(raising an interior-domain value would break convexity)"
                )
            if ov is not None and len(bps) == 1:
                raise ValueError("override on a single-point domain is just a value")
            object.__setattr__(self, f"override_{side}", ov)

    # -- basic structure ------------------------------------------------
    def slopes(self) -> tuple:
        """Interior segment slopes, one per consecutive breakpoint pair."""
        b, v = self.breakpoints, self.values
        return tuple((v[i + 1] - v[i]) / (b[i + 1] - b[i]) for i in range(len(b) - 1))

    def closure(self) -> "PLConvex1D":
        """Same function with overrides dropped (the lsc hull)."""
        if self.override_left is None and self.override_right is None:
            return self
        return PLConvex1D(
            self.breakpoints,
            self.values,
            self.left_recession,
            self.right_recession,
            label=self.label,
        )

    def reflect(self) -> "PLConvex1D":
        """x -> f(-x); handy for reusing one-sided logic on the other side."""
        return PLConvex1D(
            tuple(-b for b in reversed(self.breakpoints)),
            tuple(reversed(self.values)),
            None if self.right_recession is None else -self.right_recession,
            None if self.left_recession is None else -self.left_recession,
            self.override_right,
            self.override_left,
            label=self.label,
        )

    def tilt(self, xstar: Fraction) -> "PLConvex1D":
        """f - <., xstar>: subtract a linear term; breakpoints unchanged."""
        xstar = _frac(xstar)
        ovl = self.override_left
        ovr = self.override_right
        if ovl is not None and ovl.is_finite:
            ovl = ExtReal(ovl.value - xstar * self.breakpoints[0])
        if ovr is not None and ovr.is_finite:
            ovr = ExtReal(ovr.value - xstar * self.breakpoints[-1])
        return PLConvex1D(
            self.breakpoints,
            tuple(v - xstar * b for v, b in zip(self.values, self.breakpoints)),
            None if self.left_recession is None else self.left_recession - xstar,
            None if self.right_recession is None else self.right_recession - xstar,
            ovl,
            ovr,
        )

    # -- evaluation -----------------------------------------------------
    def value_at(self, x) -> ExtReal:
        x = _frac(x)
        b, v = self.breakpoints, self.values
        if x < b[0]:
            if self.left_recession is None:
                return POS_INF
            return ExtReal(v[0] + self.left_recession * (x - b[0]))
        if x > b[-1]:
            if self.right_recession is None:
                return POS_INF
            return ExtReal(v[-1] + self.right_recession * (x - b[-1]))
        if x == b[0] and self.override_left is not None:
            return self.override_left
        if x == b[-1] and self.override_right is not None:
            return self.override_right
        # binary search for the segment
        lo, hi = 0, len(b) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if b[mid] <= x:
                lo = mid
            else:
                hi = mid
        if x == b[lo]:
            return ExtReal(v[lo])
        if x == b[hi]:
            return ExtReal(v[hi])
        t = (x - b[lo]) / (b[hi] - b[lo])
        return ExtReal(v[lo] + t * (v[hi] - v[lo]))

    def closure_value_at(self, x) -> ExtReal:
        return self.closure().value_at(x)


# ---------------------------------------------------------------------------
# grid functions
# ---------------------------------------------------------------------------


def _canon_point(p, dim: int):
    if dim == 1:
        if isinstance(p, (tuple, list)):
            if len(p) != 1:
                raise ValueError("1D point must be a scalar")
            p = p[0]
        return float(p) if not isinstance(p, (int, Fraction)) else p
    if not isinstance(p, (tuple, list)) or len(p) != dim:
        raise ValueError(f"{dim}D point must be a {dim}-tuple")
    return tuple(float(c) if not isinstance(c, (int, Fraction)) else c for c in p)


@dataclass(frozen=True)
class SampledSet:
    """A finite sample of a set; 1D points are scalars, 2D points pairs."""

    dim: int
    points: tuple
    label: str | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        pts = tuple(_canon_point(p, self.dim) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points in sampled set")
        object.__setattr__(self, "points", pts)

    def contains(self, p) -> bool:
        return _canon_point(p, self.dim) in set(self.points)


@dataclass(frozen=True)
class GridFunction:
    """Float-backed function values on listed points; +inf off the list."""

    dim: int
    points: tuple
    values: tuple
    label: str | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        pts = tuple(_canon_point(p, self.dim) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate grid points")
        vals = tuple(as_extreal(v) for v in self.values)
        if len(pts) != len(vals):
            raise ValueError("points and values length mismatch")
        for v in vals:
            if v.is_neg_inf:
                raise ValueError("-inf value makes the grid function improper")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_index", None)

    def _lookup(self):
        idx = object.__getattribute__(self, "_index")
        if idx is None:
            idx = {p: v for p, v in zip(self.points, self.values)}
            object.__setattr__(self, "_index", idx)
        return idx

    def value_at(self, p) -> ExtReal:
        return self._lookup().get(_canon_point(p, self.dim), POS_INF)

    def finite_items(self):
        return [(p, v.value) for p, v in zip(self.points, self.values) if v.is_finite]

    def is_proper(self) -> bool:
        return any(v.is_finite for v in self.values)


@dataclass(frozen=True)
class MaxAffine:
    """sup of affine pieces x -> <x - anchor, slope> + level; empty sup = -inf."""

    dim: int
    pieces: tuple  # of (anchor, slope, level)
    label: str | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        canon = []
        for a, s, lv in self.pieces:
            canon.append((_canon_point(a, self.dim), _canon_point(s, self.dim), lv))
        object.__setattr__(self, "pieces", tuple(canon))

    def value_at(self, x) -> ExtReal:
        x = _canon_point(x, self.dim)
        return ext_sup(
            dot(point_sub(x, a, self.dim), s, self.dim) + lv for a, s, lv in self.pieces
        )

    def is_proper(self) -> bool:
        # the empty sup is -inf everywhere
        return bool(self.pieces)


Func = Union[PLConvex1D, GridFunction, MaxAffine]


def evaluate(f: Func, x) -> ExtReal:
    """Uniform evaluation across representations."""
    return f.value_at(x)


def epigraph_samples(f: Func, xs: Sequence, offsets: Sequence = (0, 1, 2)) -> list:
    """Points (x, t) with f(x) <= t, one per offset above each finite value."""
    out = []
    for x in xs:
        v = evaluate(f, x)
        if v.is_finite:
            for o in offsets:
                out.append((x, v.value + o))
    return out


# ---------------------------------------------------------------------------
# structural predicates
# ---------------------------------------------------------------------------


def effective_domain(f: Func):
    """Interval (exact endpoints) for PLConvex1D, finite-point sample for grids."""
    if isinstance(f, PLConvex1D):
        lo = None if f.left_recession is not None else f.breakpoints[0]
        hi = None if f.right_recession is not None else f.breakpoints[-1]
        lo_open = lo is not None and f.override_left is not None and f.override_left.is_pos_inf
        hi_open = hi is not None and f.override_right is not None and f.override_right.is_pos_inf
        if lo is not None and lo == hi and (lo_open or hi_open):
            raise ValueError("empty domain")  # unreachable: overrides need m >= 2
        return Interval1D(lo, hi, lo_open, hi_open)
    if isinstance(f, GridFunction):
        return SampledSet(f.dim, tuple(p for p, _ in f.finite_items()))
    if isinstance(f, MaxAffine):
        if not f.pieces:
            raise ValueError("empty max-affine is improper (identically -inf)")
        if f.dim == 1:
            return Interval1D(None, None)
        return None  # all of the plane; no bounded descriptor needed
    raise TypeError(f"unsupported representation {type(f).__name__}")


def _pl_left_sublevel_bound(f: PLConvex1D, lam: Fraction):
    """Leftmost point of {cl f <= lam}; returns Fraction, None (-inf) or "empty"."""
    b, v = f.breakpoints, f.values
    sl = f.left_recession
    if sl is not None:
        if sl > 0:
            return None
        if sl == 0 and v[0] <= lam:
            return None
        if sl < 0 and v[0] <= lam:
            return b[0] + (lam - v[0]) / sl
    if v[0] <= lam:
        return b[0]
    # scan the span for the first crossing
    for i in range(len(b) - 1):
        if v[i + 1] <= lam:
            sigma = (v[i + 1] - v[i]) / (b[i + 1] - b[i])
            return b[i] + (lam - v[i]) / sigma
    sr = f.right_recession
    if sr is not None and sr < 0:
        return b[-1] + (lam - v[-1]) / sr
    return "empty"


def level_set(f: Func, lam):
    """{x : f(x) <= lam} for real lam.  PL -> interval or None; grid -> sample."""
    lam_e = as_extreal(lam)
    if not lam_e.is_finite:
        raise ValueError("level must be a real number, not +/-inf")
    if isinstance(f, GridFunction):
        lam_f = float(lam_e.value)
        pts = [p for p, val in f.finite_items() if val <= lam_f + 0.0]
        return SampledSet(f.dim, tuple(pts))
    if not isinstance(f, PLConvex1D):
        raise TypeError("level_set supports PLConvex1D and GridFunction")
    lam_q = _frac(lam_e.value)
    lo = _pl_left_sublevel_bound(f, lam_q)
    if lo == "empty":
        return None
    r = _pl_left_sublevel_bound(f.reflect(), lam_q)
    if r == "empty":
        return None
    hi = None if r is None else -r
    lo_open = hi_open = False
    if (
        f.override_left is not None
        and lo is not None
        and lo == f.breakpoints[0]
        and f.value_at(lo) > lam_q
    ):
        lo_open = True
    if (
        f.override_right is not None
        and hi is not None
        and hi == f.breakpoints[-1]
        and f.value_at(hi) > lam_q
    ):
        hi_open = True
    if lo is not None and hi is not None and lo == hi and (lo_open or hi_open):
        return None
    return Interval1D(lo, hi, lo_open, hi_open)


def lsc_defect(f: Func) -> list:
    """Endpoints where an override strictly exceeds the interpolated limit.

    Grid functions are lsc by construction (isolated points), so the answer
    there is always empty.
    """
    if isinstance(f, GridFunction) or isinstance(f, MaxAffine):
        return []
    if not isinstance(f, PLConvex1D):
        raise TypeError("lsc_defect supports the function representations")
    out = []
    if f.override_left is not None:
        out.append(f.breakpoints[0])
    if f.override_right is not None:
        out.append(f.breakpoints[-1])
    return out


def pl_canonical(f: PLConvex1D) -> PLConvex1D:
    """Equivalent representation with collinear breakpoints removed.

    Interior breakpoints between equal slopes are dropped; so is an end
    breakpoint whose recession matches the edge slope, unless an override
    keeps that point special.  A function affine on the whole line is
    re-anchored at zero.  Two functions are equal iff their canonical forms
    share breakpoints, values, recessions and overrides, which is what
    pl_equal compares.
    """
    if not isinstance(f, PLConvex1D):
        raise TypeError("pl_canonical takes a PLConvex1D")
    b, v = list(f.breakpoints), list(f.values)
    s = list(f.slopes())
    keep = [0]
    for i in range(1, len(b) - 1):
        if s[i - 1] != s[i]:
            keep.append(i)
    if len(b) > 1:
        keep.append(len(b) - 1)
    b = [b[i] for i in keep]
    v = [v[i] for i in keep]
    s = [(v[i + 1] - v[i]) / (b[i + 1] - b[i]) for i in range(len(b) - 1)]
    if (
        len(b) > 1
        and f.override_left is None
        and f.left_recession is not None
        and f.left_recession == s[0]
    ):
        del b[0], v[0], s[0]
    if (
        len(b) > 1
        and f.override_right is None
        and f.right_recession is not None
        and f.right_recession == s[-1]
    ):
        del b[-1], v[-1]
    if (
        len(b) == 1
        and f.left_recession is not None
        and f.left_recession == f.right_recession
        and b[0] != 0
    ):
        v[0] = v[0] - f.left_recession * b[0]
        b[0] = Fraction(0)
    if tuple(b) == f.breakpoints and tuple(v) == f.values:
        return f
    return PLConvex1D(
        tuple(b),
        tuple(v),
        f.left_recession,
        f.right_recession,
        f.override_left,
        f.override_right,
        label=f.label,
    )


def pl_equal(f: PLConvex1D, g: PLConvex1D) -> bool:
    """Exact equality of two piecewise-linear functions as functions."""
    cf, cg = pl_canonical(f), pl_canonical(g)
    return (
        cf.breakpoints == cg.breakpoints
        and cf.values == cg.values
        and cf.left_recession == cg.left_recession
        and cf.right_recession == cg.right_recession
        and cf.override_left == cg.override_left
        and cf.override_right == cg.override_right
    )


def _hull_1d_exact(items):
    """Lower convex hull of 1D (x, value) points, exact; returns vertex list."""
    pts = sorted((Fraction(x) if not isinstance(x, Fraction) else x, Fraction(v) if not isinstance(v, Fraction) else v) for x, v in items)
    merged = []
    for x, v in pts:
        if merged and merged[-1][0] == x:
            if v < merged[-1][1]:
                merged[-1] = (x, v)
        else:
            merged.append((x, v))
    hull = []
    for p in merged:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is on or above the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def is_convex_on_grid(f: GridFunction, tol: float = GRID_TOL) -> bool:
    """True iff finite values sit on their own lower convex hull and no listed
    +inf point punctures the hull of the finite points (domain-gap defect)."""
    if not isinstance(f, GridFunction):
        raise TypeError("is_convex_on_grid takes a GridFunction")
    items = f.finite_items()
    if len(items) <= 1:
        return True
    inf_pts = [p for p, v in zip(f.points, f.values) if v.is_pos_inf]
    if f.dim == 1:
        hull = _hull_1d_exact(items)
        hx = [float(x) for x, _ in hull]
        hy = [float(y) for _, y in hull]
        import bisect

        def hull_val(x):
            j = bisect.bisect_right(hx, x) - 1
            if j < 0 or x > hx[-1]:
                return None
            if j == len(hx) - 1:
                return hy[-1]
            t = (x - hx[j]) / (hx[j + 1] - hx[j])
            return hy[j] + t * (hy[j + 1] - hy[j])
        for x, v in items:
            hv = hull_val(float(x))
            if hv is not None and float(v) > hv + tol:
                return False
        lo, hi = min(x for x, _ in items), max(x for x, _ in items)
        for p in inf_pts:
            if lo < p < hi:
                return False
        return True
    # 2D: one small LP per point (can another-combination do strictly better?)
    import numpy as np
    from scipy.optimize import linprog

    pts = np.array([p for p, _ in items], dtype=float)
    vals = np.array([v for _, v in items], dtype=float)
    n = len(items)
    for i in range(n):
        mask = np.arange(n) != i
        A_eq = np.vstack([pts[mask].T, np.ones(mask.sum())])
        b_eq = np.array([pts[i][0], pts[i][1], 1.0])
        res = linprog(vals[mask], A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status == 0 and res.fun < vals[i] - tol:
            return False
    for p in inf_pts:
        A_eq = np.vstack([pts.T, np.ones(len(pts))])
        b_eq = np.array([p[0], p[1], 1.0])
        res = linprog(np.zeros(len(pts)), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# instance files (JSON) and CSV value tables
# ---------------------------------------------------------------------------


def _fmt_rec(r):
    return "stop" if r is None else format_scalar(ExtReal(r))


def _parse_rec(r):
    if r == "stop" or r is None:
        return None
    return parse_scalar(r, exact=True).finite()


def dump_instance(obj) -> dict:
    if isinstance(obj, PLConvex1D):
        d = {
            "kind": "plconvex1d",
            "breakpoints": [format_scalar(ExtReal(b)) for b in obj.breakpoints],
            "values": [format_scalar(ExtReal(v)) for v in obj.values],
            "left_recession": _fmt_rec(obj.left_recession),
            "right_recession": _fmt_rec(obj.right_recession),
        }
        if obj.override_left is not None:
            d["override_left"] = format_scalar(obj.override_left)
        if obj.override_right is not None:
            d["override_right"] = format_scalar(obj.override_right)
        if obj.label:
            d["label"] = obj.label
        return d
    if isinstance(obj, GridFunction):
        d = {
            "kind": "grid",
            "dim": obj.dim,
            "points": [list(p) if obj.dim == 2 else p for p in obj.points],
            "values": [float(v) if v.is_finite else "inf" for v in obj.values],
        }
        if obj.label:
            d["label"] = obj.label
        return d
    if isinstance(obj, SampledSet):
        d = {
            "kind": "indicator",
            "dim": obj.dim,
            "points": [list(p) if obj.dim == 2 else p for p in obj.points],
        }
        if obj.label:
            d["label"] = obj.label
        return d
    if isinstance(obj, Interval1D):
        d = {"kind": "interval"}
        if obj.lo is not None:
            d["lo"] = format_scalar(ExtReal(obj.lo))
        if obj.hi is not None:
            d["hi"] = format_scalar(ExtReal(obj.hi))
        if obj.lo_open:
            d["lo_open"] = True
        if obj.hi_open:
            d["hi_open"] = True
        return d
    if isinstance(obj, MaxAffine):
        d = {
            "kind": "maxaffine",
            "dim": obj.dim,
            "pieces": [
                {
                    "anchor": list(a) if obj.dim == 2 else a,
                    "slope": list(s) if obj.dim == 2 else s,
                    "level": lv,
                }
                for a, s, lv in obj.pieces
            ],
        }
        if obj.label:
            d["label"] = obj.label
        return d
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_instance(src):
    """Accepts a dict, a JSON string, or a path to a JSON file."""
    if isinstance(src, (str, bytes)):
        s = src.decode() if isinstance(src, bytes) else src
        if s.lstrip().startswith("{"):
            d = json.loads(s)
        else:
            with open(s, "r", encoding="utf-8") as fh:
                d = json.load(fh)
    elif isinstance(src, dict):
        d = src
    else:
        raise TypeError("load_instance takes a dict, JSON text, or a path")
    kind = d.get("kind")
    label = d.get("label")
    if kind == "plconvex1d":
        ovl = d.get("override_left")
        ovr = d.get("override_right")
        return PLConvex1D(
            tuple(parse_scalar(b, exact=True).finite() for b in d["breakpoints"]),
            tuple(parse_scalar(v, exact=True).finite() for v in d["values"]),
            _parse_rec(d.get("left_recession", "stop")),
            _parse_rec(d.get("right_recession", "stop")),
            None if ovl is None else parse_scalar(ovl, exact=True),
            None if ovr is None else parse_scalar(ovr, exact=True),
            label=label,
        )
    if kind == "grid":
        return GridFunction(
            d["dim"],
            tuple(tuple(p) if d["dim"] == 2 else p for p in d["points"]),
            tuple(parse_scalar(v, exact=False) for v in d["values"]),
            label=label,
        )
    if kind == "indicator":
        return SampledSet(
            d["dim"],
            tuple(tuple(p) if d["dim"] == 2 else p for p in d["points"]),
            label=label,
        )
    if kind == "interval":
        lo, hi = d.get("lo"), d.get("hi")
        return Interval1D(
            None if lo is None else parse_scalar(lo, exact=True).finite(),
            None if hi is None else parse_scalar(hi, exact=True).finite(),
            bool(d.get("lo_open", False)),
            bool(d.get("hi_open", False)),
        )
    if kind == "maxaffine":
        return MaxAffine(
            d["dim"],
            tuple(
                (
                    tuple(pc["anchor"]) if d["dim"] == 2 else pc["anchor"],
                    tuple(pc["slope"]) if d["dim"] == 2 else pc["slope"],
                    pc["level"],
                )
                for pc in d["pieces"]
            ),
            label=label,
        )
    raise ValueError(f"unknown instance kind {kind!r}")


def write_values_csv(path, points, values, dim: int) -> None:
    """(point coordinates..., value) rows in the given (row-major) order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        cols = ["x", "value"] if dim == 1 else ["x", "y", "value"]
        fh.write(",".join(cols) + "\n")
        for p, v in zip(points, values):
            coords = [p] if dim == 1 else list(p)
            cells = [format_scalar(as_extreal(c)) for c in coords]
            cells.append(format_scalar(as_extreal(v)))
            fh.write(",".join(cells) + "\n")
