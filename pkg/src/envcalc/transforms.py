"""Classical transforms: conjugates, closed convex hulls, inf-convolution.

Three conjugate routes with different cost/precision trade-offs:

* ``conjugate_exact``    rational, PLConvex1D -> PLConvex1D, zero error;
* ``conjugate_brute``    dense float sup over all finite grid points;
* ``conjugate_llt``      hull-then-march fast transform, 1D grids only.

All conjugates act on the closure of their argument: raised endpoint values
never change a supremum of affine minorants, so overrides are invisible here.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .extreal import ExtReal, NEG_INF, POS_INF, as_extreal, ext_add, ext_sup
from .funcrep import (
    GridFunction,
    Interval1D,
    MaxAffine,
    PLConvex1D,
    SampledSet,
    _frac,
    _hull_1d_exact,
    dot,
)


class ImproperError(ValueError):
    """A transform produced (or received) a function with no finite values,
    or one touching -inf."""


# ---------------------------------------------------------------------------
# exact route
# ---------------------------------------------------------------------------


def conjugate_exact(f: PLConvex1D) -> PLConvex1D:
    """Exact conjugate sup_x [x*y - f(x)] of a piecewise-linear convex f.

    Breakpoints and slopes trade places: interior slopes of f become the dual
    breakpoints, a domain wall becomes a recession direction with slope equal
    to the wall position, and a finite recession slope becomes a dual wall.
    """
    if not isinstance(f, PLConvex1D):
        raise TypeError("conjugate_exact takes a PLConvex1D")
    g = f.closure()
    b, v = g.breakpoints, g.values
    duals = set(g.slopes())
    if g.left_recession is not None:
        duals.add(g.left_recession)
    if g.right_recession is not None:
        duals.add(g.right_recession)
    if not duals:
        duals.add(Fraction(0))  # single-point domain: conjugate is affine
    ys = tuple(sorted(duals))
    vals = tuple(max(y * bi - vi for bi, vi in zip(b, v)) for y in ys)
    return PLConvex1D(
        ys,
        vals,
        left_recession=b[0] if g.left_recession is None else None,
        right_recession=b[-1] if g.right_recession is None else None,
    )


def biconjugate(f, dual_points=None):
    """Conjugate applied twice; on the exact backend this is the lsc hull."""
    if isinstance(f, PLConvex1D):
        return conjugate_exact(conjugate_exact(f))
    if isinstance(f, MaxAffine):
        return f
    if isinstance(f, GridFunction):
        return cl_conv(f, dual_points)
    raise TypeError(f"unsupported representation {type(f).__name__}")


def pl_add(f: PLConvex1D, g: PLConvex1D) -> PLConvex1D:
    """Exact pointwise sum; raises ImproperError when the domains miss."""
    flo = None if f.left_recession is not None else f.breakpoints[0]
    fhi = None if f.right_recession is not None else f.breakpoints[-1]
    glo = None if g.left_recession is not None else g.breakpoints[0]
    ghi = None if g.right_recession is not None else g.breakpoints[-1]
    lo = max(x for x in (flo, glo) if x is not None) if (flo is not None or glo is not None) else None
    hi = min(x for x in (fhi, ghi) if x is not None) if (fhi is not None or ghi is not None) else None
    if lo is not None and hi is not None and lo > hi:
        raise ImproperError("sum has empty domain (walls do not overlap)")
    if lo is not None and lo == hi:
        val = ext_add(f.value_at(lo), g.value_at(lo))
        if val.is_pos_inf:
            raise ImproperError("sum is +inf everywhere (endpoint exclusions meet)")
        return PLConvex1D((lo,), (val.finite(),))
    xs = set()
    for h in (f, g):
        for x in h.breakpoints:
            if (lo is None or x >= lo) and (hi is None or x <= hi):
                xs.add(x)
    if lo is not None:
        xs.add(lo)
    if hi is not None:
        xs.add(hi)
    xs = tuple(sorted(xs))
    vals = tuple(
        f.closure_value_at(x).finite() + g.closure_value_at(x).finite() for x in xs
    )
    lrec = (f.left_recession + g.left_recession) if lo is None else None
    rrec = (f.right_recession + g.right_recession) if hi is None else None
    ovl = ovr = None
    if lo is not None:
        actual = ext_add(f.value_at(lo), g.value_at(lo))
        if actual != vals[0]:
            ovl = actual
    if hi is not None:
        actual = ext_add(f.value_at(hi), g.value_at(hi))
        if actual != vals[-1]:
            ovr = actual
    return PLConvex1D(xs, vals, lrec, rrec, ovl, ovr)


def indicator(S) -> PLConvex1D | GridFunction:
    """Indicator function: 0 on the set, +inf off it."""
    if isinstance(S, SampledSet):
        return GridFunction(S.dim, S.points, tuple(0.0 for _ in S.points), label=S.label)
    if not isinstance(S, Interval1D):
        raise TypeError("indicator takes an Interval1D or a SampledSet")
    lo, hi = S.lo, S.hi
    if lo is not None and lo == hi:
        return PLConvex1D((lo,), (0,))
    bps = set()
    if lo is not None:
        bps.add(lo)
    if hi is not None:
        bps.add(hi)
    if not bps:
        bps.add(Fraction(0))
    # an open endpoint is modelled as a +inf override, which needs a second
    # breakpoint to lean on when the interval is unbounded the other way
    if len(bps) == 1 and (S.lo_open or S.hi_open):
        (only,) = bps
        bps.add(only + 1 if lo is not None else only - 1)
    bps = tuple(sorted(bps))
    return PLConvex1D(
        bps,
        tuple(0 for _ in bps),
        left_recession=None if lo is not None else Fraction(0),
        right_recession=None if hi is not None else Fraction(0),
        override_left=POS_INF if (lo is not None and S.lo_open) else None,
        override_right=POS_INF if (hi is not None and S.hi_open) else None,
    )


def pl_restrict(f: PLConvex1D, iv: Interval1D) -> PLConvex1D:
    """f + indicator(iv): the same function confined to an interval."""
    return pl_add(f, indicator(iv))


def inf_conv(f, g):
    """Infimal convolution inf_u [f(u) + g(x - u)].

    Exact PL route goes through the dual (conjugates add), so the result is
    the closed convolution.  Grid route enumerates finite pairs onto the sum
    grid; an empty infimum would mean +inf everywhere, which is improper.
    """
    if isinstance(f, PLConvex1D) and isinstance(g, PLConvex1D):
        return conjugate_exact(pl_add(conjugate_exact(f), conjugate_exact(g)))
    if isinstance(f, GridFunction) and isinstance(g, GridFunction):
        if f.dim != g.dim:
            raise ValueError("dimension mismatch")
        acc: dict = {}
        for u, fu in f.finite_items():
            for w, gw in g.finite_items():
                x = u + w if f.dim == 1 else (u[0] + w[0], u[1] + w[1])
                val = fu + gw
                if x not in acc or val < acc[x]:
                    acc[x] = val
        if not acc:
            raise ImproperError("inf-convolution of improper grid functions")
        pts = tuple(sorted(acc))
        return GridFunction(f.dim, pts, tuple(acc[p] for p in pts))
    raise TypeError("inf_conv takes two PLConvex1D or two matching GridFunctions")


def support_function(S, y) -> ExtReal:
    """sup of <x, y> over the set; empty sets give -inf by convention."""
    if isinstance(S, SampledSet):
        return ext_sup(dot(p, y, S.dim) for p in S.points)
    if isinstance(S, Interval1D):
        y = _frac(y) if not isinstance(y, float) else y
        if isinstance(y, float):
            raise TypeError("interval support function is exact; pass int/Fraction")
        if y > 0:
            return POS_INF if S.hi is None else ExtReal(S.hi * y)
        if y < 0:
            return POS_INF if S.lo is None else ExtReal(S.lo * y)
        return ExtReal(Fraction(0))
    raise TypeError("support_function takes an Interval1D or a SampledSet")


def maxaffine_to_pl(M: MaxAffine) -> PLConvex1D:
    """Exact 1D conversion of a finite line envelope to piecewise-linear form.

    The envelope of lines with slope s and intercept c is the conjugate of
    the point set {(s, -c)}, so one exact hull plus one exact conjugate does
    the whole job, including dropping lines that never attain the sup.
    """
    if not isinstance(M, MaxAffine) or M.dim != 1:
        raise TypeError("maxaffine_to_pl takes a 1D MaxAffine")
    if not M.pieces:
        raise ImproperError("empty max-affine is identically -inf")
    pts = []
    for a, s, lv in M.pieces:
        sq = Fraction(s) if not isinstance(s, Fraction) else s
        cq = Fraction(lv) - Fraction(a) * sq  # line is s*x + c
        pts.append((sq, -cq))
    hull = _hull_1d_exact(pts)
    xs = tuple(x for x, _ in hull)
    vs = tuple(v for _, v in hull)
    return conjugate_exact(PLConvex1D(xs, vs))


# ---------------------------------------------------------------------------
# grid routes
# ---------------------------------------------------------------------------

_CHUNK_CELLS = 1 << 22


def _finite_arrays(f: GridFunction):
    items = f.finite_items()
    if not items:
        raise ImproperError("conjugate of a function with no finite values")
    if f.dim == 1:
        x = np.array([p for p, _ in items], dtype=float)
    else:
        x = np.array([p for p, _ in items], dtype=float)
    v = np.array([val for _, val in items], dtype=float)
    return x, v


def conjugate_brute(f: GridFunction, dual_points) -> GridFunction:
    """Dense conjugate over the finite grid points, chunked to bound memory."""
    if not isinstance(f, GridFunction):
        raise TypeError("conjugate_brute takes a GridFunction")
    x, v = _finite_arrays(f)
    duals = tuple(dual_points)
    n = len(x)
    out = np.empty(len(duals), dtype=float)
    step = max(1, _CHUNK_CELLS // max(n, 1))
    for start in range(0, len(duals), step):
        block = duals[start : start + step]
        if f.dim == 1:
            y = np.array(block, dtype=float)
            scores = np.outer(y, x)
        else:
            y = np.array(block, dtype=float)
            scores = y @ x.T
        scores -= v
        out[start : start + len(block)] = scores.max(axis=1)
    return GridFunction(f.dim, duals, tuple(out.tolist()))


def _llt_hull(x: np.ndarray, v: np.ndarray):
    """Lower hull indices of sorted 1D samples; ties kept (never drop a line
    that float error could still make maximal)."""
    idx: list = []
    for i in range(len(x)):
        while len(idx) >= 2:
            j, k = idx[-2], idx[-1]
            lhs = (v[k] - v[j]) * (x[i] - x[j])
            rhs = (v[i] - v[j]) * (x[k] - x[j])
            if lhs > rhs:
                idx.pop()
            else:
                break
        idx.append(i)
    return np.array(idx, dtype=int)


def conjugate_llt(f: GridFunction, dual_points) -> GridFunction:
    """Fast 1D conjugate: hull once, then a binary-search march over slopes.

    Matches ``conjugate_brute`` to float accuracy at a fraction of the cost;
    dual points need not be sorted.
    """
    if not isinstance(f, GridFunction) or f.dim != 1:
        raise TypeError("conjugate_llt takes a 1D GridFunction")
    x, v = _finite_arrays(f)
    order = np.argsort(x, kind="stable")
    x, v = x[order], v[order]
    keep = _llt_hull(x, v)
    hx, hv = x[keep], v[keep]
    slopes = np.diff(hv) / np.diff(hx) if len(hx) > 1 else np.empty(0)
    y = np.asarray(tuple(dual_points), dtype=float)
    j = np.searchsorted(slopes, y, side="left")
    # refine over a 3-index window: guards against roundoff at slope ties
    cand = np.stack([np.clip(j + d, 0, len(hx) - 1) for d in (-1, 0, 1)])
    vals = y[None, :] * hx[cand] - hv[cand]
    out = vals.max(axis=0)
    return GridFunction(1, tuple(dual_points), tuple(out.tolist()))


def cl_conv(f, dual_points=None):
    """Closed convex hull.

    Exact 1D representations close in place; 1D grids get an exact rational
    lower hull with walls at the extreme sample points; 2D grids go through a
    double conjugate against ``dual_points`` and come back as a MaxAffine
    minorant carrier (exact on the sampled dual window, a lower bound off it).
    """
    if isinstance(f, PLConvex1D):
        return f.closure()
    if isinstance(f, MaxAffine):
        return f
    if not isinstance(f, GridFunction):
        raise TypeError(f"unsupported representation {type(f).__name__}")
    items = f.finite_items()
    if not items:
        raise ImproperError("hull of a function with no finite values")
    if f.dim == 1:
        hull = _hull_1d_exact(items)
        return PLConvex1D(
            tuple(x for x, _ in hull),
            tuple(v for _, v in hull),
        )
    if dual_points is None:
        raise ValueError("2D grid hull needs dual_points for the double conjugate")
    star = conjugate_brute(f, dual_points)
    pieces = tuple(
        ((0.0, 0.0), p, -val) for p, val in zip(star.points, (w.value for w in star.values))
    )
    return MaxAffine(2, pieces)
