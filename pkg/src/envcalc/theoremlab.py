"""Checkable statements, seeded instances, and worked galleries.

The registry binds short ids to executable checks.  Each check takes one
instance, evaluates both sides of its statement over a finite probe family,
and reports a verdict with the worst margin seen.  An instance whose shape
falls outside a statement's hypotheses reports ``not-applicable`` rather
than fail, so a failing row always marks a genuine violation on the data.

Checks on exact instances run in rational arithmetic with zero tolerance.
The grid-backed checks here also happen to be exact: a finite grid carries
finitely many candidate support lines, so the comparisons stay in
``Fraction`` even when the sample values arrived as floats.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction

from .extreal import (
    ExtReal,
    POS_INF,
    as_extreal,
    ext_add,
    ext_inf,
    ext_sub,
    format_scalar,
)
from .funcrep import (
    GridFunction,
    Interval1D,
    PLConvex1D,
    effective_domain,
    is_convex_on_grid,
    lsc_defect,
    pl_equal,
)
from .transforms import cl_conv, conjugate_exact, indicator, support_function
from .operators import (
    OperatorGraph,
    fitzpatrick,
    fitzpatrick_structured,
    grid_subdiff_test,
    is_maximal_relative,
    normal_cone,
    subdiff_exact,
    subdiff_graph,
    subdiff_structure,
    subdiff_test,
)
from .envelopes import (
    brondsted_search,
    circ_exact,
    cup_exact,
    cup_value,
    epi_cup_membership,
    epi_normal_graph,
    n_cup,
    portable_hull_interval,
    sharp_exact,
    sharp_value,
    smile_eps_value,
    smile_value,
    star_cup_exact,
    subdiff_domain,
    upper_envelope,
)

F = Fraction


# ---------------------------------------------------------------------------
# probe policies
# ---------------------------------------------------------------------------


def primal_probes(f: PLConvex1D) -> tuple:
    """Breakpoints, segment midpoints, and a step beyond each domain end."""
    pts = set(f.breakpoints)
    for a, b in zip(f.breakpoints, f.breakpoints[1:]):
        pts.add((a + b) / 2)
    lo, hi = f.breakpoints[0], f.breakpoints[-1]
    pts.add(lo - 1)
    pts.add(hi + 1)
    if f.left_recession is not None:
        pts.add(lo - 3)
    if f.right_recession is not None:
        pts.add(hi + 3)
    return tuple(sorted(pts))


def dual_probes(f: PLConvex1D) -> tuple:
    """Slopes, gaps between consecutive slopes, zero, and outer slopes."""
    sl = list(f.slopes())
    if f.left_recession is not None:
        sl.append(f.left_recession)
    if f.right_recession is not None:
        sl.append(f.right_recession)
    cand = set(sl)
    cand.add(F(0))
    distinct = sorted(set(sl))
    for a, b in zip(distinct, distinct[1:]):
        cand.add((a + b) / 2)
    spread = max((abs(s) for s in cand), default=F(0)) + 1
    cand.add(spread)
    cand.add(-spread)
    return tuple(sorted(cand))


def _interval_intersect(A: Interval1D | None, B: Interval1D | None):
    if A is None or B is None:
        return None
    lo, lo_open = A.lo, A.lo_open
    if B.lo is not None and (lo is None or B.lo > lo or (B.lo == lo and B.lo_open)):
        lo, lo_open = B.lo, B.lo_open
    hi, hi_open = A.hi, A.hi_open
    if B.hi is not None and (hi is None or B.hi < hi or (B.hi == hi and B.hi_open)):
        hi, hi_open = B.hi, B.hi_open
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (lo_open or hi_open)):
            return None
    return Interval1D(lo, hi, lo_open, hi_open)


def range_interval(f: PLConvex1D) -> Interval1D | None:
    """All slopes the subdifferential takes, as one interval (None if empty)."""
    st = subdiff_structure(f)
    vals = []
    lo_unb = hi_unb = False
    for _a, _v, lo, hi in st.points:
        if lo is None:
            lo_unb = True
        else:
            vals.append(lo)
        if hi is None:
            hi_unb = True
        else:
            vals.append(hi)
    for _xlo, _xhi, s, _rx, _rv in st.segments:
        vals.append(s)
    if not vals and not lo_unb and not hi_unb:
        return None
    return Interval1D(
        None if lo_unb else min(vals),
        None if hi_unb else max(vals),
    )


def _closed_hull(iv: Interval1D | None) -> Interval1D | None:
    """Topological closure: open flags dropped, finite ends kept."""
    if iv is None:
        return None
    return Interval1D(iv.lo, iv.hi)


def _some_slope(iv: Interval1D) -> Fraction:
    if iv.lo is not None and iv.hi is not None:
        return (iv.lo + iv.hi) / 2
    if iv.lo is not None:
        return iv.lo
    if iv.hi is not None:
        return iv.hi
    return F(0)


# ---------------------------------------------------------------------------
# check records
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class TheoremCheck:
    theorem_id: str
    instance: str
    verdict: str
    backend: str
    tolerance: object = 0
    margin: object = None
    witness: object = None

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL


def _min_margin(cur, new):
    new = as_extreal(new)
    if cur is None or new < as_extreal(cur):
        return new
    return cur


def _na(tid, desc, why, backend="exact"):
    return TheoremCheck(tid, desc, NOT_APPLICABLE, backend, witness=why)


def _done(tid, desc, ok, margin=None, witness=None, backend="exact", tol=0):
    return TheoremCheck(
        tid, desc, PASS if ok else FAIL, backend, tol,
        margin=margin, witness=None if ok else witness,
    )


_NEEDS_LSC = "needs a lower semicontinuous instance (raised endpoint values)"


# ---------------------------------------------------------------------------
# coupling bound and closure checks
# ---------------------------------------------------------------------------


def _grid_duals(hull: PLConvex1D) -> tuple:
    sl = sorted(set(hull.slopes()))
    cand = set(sl)
    for a, b in zip(sl, sl[1:]):
        cand.add((a + b) / 2)
    cand.add(F(0))
    spread = max((abs(s) for s in cand), default=F(0)) + 1
    cand.update((spread, -spread))
    return tuple(sorted(cand))


def _grid_items_exact(f: GridFunction):
    # float samples promote to the rationals they already are
    return [(F(p), F(v)) for p, v in f.finite_items()]


def _grid_graph_exact(f: GridFunction, duals) -> OperatorGraph:
    """Grid subdifferential pairs decided by exact rational comparisons."""
    items = _grid_items_exact(f)
    pairs = []
    for a, fa in items:
        for s in duals:
            if all(fy >= fa + s * (y - a) for y, fy in items):
                pairs.append((a, s))
    return OperatorGraph(1, tuple(pairs), label=f.label)


def _check_dfdom_ineq(tid, desc, inst):
    if isinstance(inst, GridFunction):
        if inst.dim != 1:
            return _na(tid, desc, "grid route is one-dimensional here", "grid")
        hull = cl_conv(inst)
        duals = _grid_duals(hull)
        G = _grid_graph_exact(inst, duals)
        hstar = conjugate_exact(hull)
        worst = None
        for p, _v in inst.finite_items():
            x = F(p)
            for s in duals:
                lhs = fitzpatrick(G, x, s)
                rhs = ext_add(hull.value_at(x), hstar.value_at(s))
                if lhs > rhs:
                    return _done(tid, desc, False, ext_sub(rhs, lhs), (p, s), "grid")
                worst = _min_margin(worst, ext_sub(rhs, lhs))
        return _done(tid, desc, True, worst, backend="grid")
    f = inst
    st = subdiff_structure(f)
    fc = f.closure()
    fstar = conjugate_exact(f)
    worst = None
    for x in primal_probes(f):
        for s in dual_probes(f):
            lhs = fitzpatrick_structured(st, x, s)
            rhs = ext_add(fc.value_at(x), fstar.value_at(s))
            if lhs > rhs:
                return _done(tid, desc, False, ext_sub(rhs, lhs), (x, s))
            worst = _min_margin(worst, ext_sub(rhs, lhs))
    return _done(tid, desc, True, worst)


def _check_dfdom_i(tid, desc, inst):
    if isinstance(inst, GridFunction):
        if inst.dim != 1:
            return _na(tid, desc, "grid route is one-dimensional here", "grid")
        hull = cl_conv(inst)
        G = _grid_graph_exact(inst, _grid_duals(hull))
        lookup = dict(_grid_items_exact(inst))
        for a, s in G.pairs:
            if not subdiff_test(hull, a, s):
                return _done(tid, desc, False, witness=(a, s), backend="grid")
            if hull.value_at(a) != as_extreal(lookup[a]):
                return _done(tid, desc, False, witness=a, backend="grid")
        return _done(tid, desc, True, backend="grid")
    f = inst
    fc = f.closure()
    G = subdiff_graph(f, probes=primal_probes(f))
    for a, b in G.pairs:
        if not subdiff_test(fc, a, b):
            return _done(tid, desc, False, witness=(a, b))
        if f.value_at(a) != fc.value_at(a):
            return _done(tid, desc, False, witness=a)
    D = subdiff_domain(f)
    for x in primal_probes(f):
        if D.contains(x) and subdiff_exact(f, x) != subdiff_exact(fc, x):
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True)


def _check_dfdom_e3(tid, desc, f):
    if not lsc_defect(f):
        return _na(tid, desc, "every domain point carries a subgradient; "
                              "no distinct majorant can agree there")
    ovl, ovr = f.override_left, f.override_right
    if ovl is not None and ovl.is_finite:
        ovl = ExtReal(ovl.value + 1)
    if ovr is not None and ovr.is_finite:
        ovr = ExtReal(ovr.value + 1)
    g = replace(f, override_left=ovl, override_right=ovr)
    stf, stg = subdiff_structure(f), subdiff_structure(g)
    ok = stf.points == stg.points and stf.segments == stg.segments
    wit = None
    if ok:
        for x in primal_probes(f):
            if subdiff_exact(f, x) != subdiff_exact(g, x):
                ok, wit = False, x
                break
    return _done(tid, desc, ok, witness=wit)


def _check_dfdom_iv(tid, desc, g):
    # finite shadow only: a grid sample is closed already, so the claim
    # reduces to "a maximal-relative sampled subdifferential forces grid
    # convexity" on the line
    if g.dim != 1:
        return _na(tid, desc, "the finite shadow of this item is one-dimensional")
    hull = cl_conv(g)
    cands = []
    for p, _v in g.finite_items():
        iv = subdiff_exact(hull, Fraction(p))
        if iv is None:
            continue
        for end in (iv.lo, iv.hi):
            if end is not None:
                cands.append((p, float(end)))
    cands = list(dict.fromkeys(cands))
    pairs = tuple((p, s) for p, s in cands if grid_subdiff_test(g, p, s))
    v = is_maximal_relative(OperatorGraph(1, pairs), cands, tol=1e-9)
    ok = (not v.is_maximal) or is_convex_on_grid(g)
    return _done(tid, desc, ok,
                 witness=None if ok else "maximal sample on a nonconvex grid")


_RADII = (F(1), F(1, 2), F(1, 4), F(1, 8), F(1, 16))


def _nearby_subdiff_point(D: Interval1D, x, r):
    if D.contains(x):
        return x
    # x is then a domain endpoint excluded from D by an override
    if D.lo is not None and x <= D.lo:
        width = None if D.hi is None else D.hi - D.lo
        step = r if width is None else min(r, width)
        return D.lo + step / 2
    if D.hi is not None and x >= D.hi:
        width = None if D.lo is None else D.hi - D.lo
        step = r if width is None else min(r, width)
        return D.hi - step / 2
    return None


def _check_ba_density(tid, desc, f):
    st = subdiff_structure(f)
    if not st.points and not st.segments:
        return _na(tid, desc, "empty subdifferential graph")
    D = subdiff_domain(f)
    dom = effective_domain(f)
    if _closed_hull(D) != _closed_hull(dom):
        return _done(tid, desc, False, witness="closures differ")
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        for r in _RADII:
            a = _nearby_subdiff_point(D, x, r)
            if a is None or not D.contains(a) or abs(x - a) > r:
                return _done(tid, desc, False, witness=(x, r))
    return _done(tid, desc, True, margin=0)


# ---------------------------------------------------------------------------
# upper-envelope checks
# ---------------------------------------------------------------------------


def _check_fcupdiez_i(tid, desc, f):
    st = subdiff_structure(f)
    hull = portable_hull_interval(effective_domain(f))
    D = subdiff_domain(f)
    worst = None
    for x in primal_probes(f):
        c = cup_value(f, x, st=st)
        sh = sharp_value(f, x, st=st, hull=hull)
        fx = f.value_at(x)
        if not (c <= sh and sh <= fx):
            return _done(tid, desc, False, witness=x)
        if D.contains(x) and not (c == fx and sh == fx):
            return _done(tid, desc, False, witness=x)
        worst = _min_margin(worst, ext_sub(fx, c))
    return _done(tid, desc, True, worst)


def _check_fcupdiez_iii(tid, desc, f):
    st = subdiff_structure(f)
    if not st.points and not st.segments:
        return _na(tid, desc, "empty subdifferential graph")
    G = subdiff_graph(f)
    env = upper_envelope(f, G)
    Gfull = epi_normal_graph(f, G)
    cupf = cup_exact(f)
    shf = sharp_exact(f)
    hull = portable_hull_interval(effective_domain(f))
    dom = effective_domain(f)
    for x in primal_probes(f):
        ev = env.value_at(x)
        base = ev.finite()
        for v in (base - 1, base, base + 1):
            got = epi_cup_membership(f, Gfull, (x, v))
            if got != (as_extreal(v) >= ev):
                return _done(tid, desc, False, witness=(x, v))
        # the restriction identity, read off the closed forms
        sv = shf.value_at(x)
        cv = cupf.value_at(x)
        if hull.contains(x):
            if sv != cv:
                return _done(tid, desc, False, witness=x)
        elif not sv.is_pos_inf:
            return _done(tid, desc, False, witness=x)
        if dom.contains(x) and ev != cup_value(f, x, st=st):
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True)


def _check_fcupdiez_iv(tid, desc, f):
    cupf = cup_exact(f)
    shf = sharp_exact(f)
    G = subdiff_graph(f, probes=primal_probes(f))
    for a, b in G.pairs:
        if not (subdiff_test(cupf, a, b) and subdiff_test(shf, a, b)):
            return _done(tid, desc, False, witness=(a, b))
    D = subdiff_domain(f)
    for x in sorted(set(primal_probes(f)) | set(cupf.breakpoints)):
        if not D.contains(x):
            continue
        iv = subdiff_exact(f, x)
        if subdiff_exact(cupf, x) != iv or subdiff_exact(shf, x) != iv:
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True)


def _check_fcupdiez_v(tid, desc, f):
    cupf = cup_exact(f)
    shf = sharp_exact(f)
    ok = (
        pl_equal(cup_exact(cupf), cupf)
        and pl_equal(sharp_exact(cupf), cupf)
        and pl_equal(sharp_exact(shf), shf)
    )
    return _done(tid, desc, ok, witness="idempotence broken")


def _operators_equal(f: PLConvex1D, g: PLConvex1D) -> bool:
    xs = sorted(set(primal_probes(f)) | set(primal_probes(g)))
    return all(subdiff_exact(f, x) == subdiff_exact(g, x) for x in xs)


def _check_fcupdiez_viii(tid, desc, f):
    for env in (cup_exact(f), sharp_exact(f)):
        same_ops = _operators_equal(f, env)
        same_dom = subdiff_domain(f) == subdiff_domain(env)
        if same_ops != same_dom:
            return _done(tid, desc, False,
                         witness=(env.label or "envelope", same_ops, same_dom))
    return _done(tid, desc, True)


def _check_fcupdiez_ix(tid, desc, f):
    st = subdiff_structure(f)
    if not st.points and not st.segments:
        return _na(tid, desc, "empty subdifferential graph")
    G = subdiff_graph(f)
    env = upper_envelope(f, G)
    for x in primal_probes(f):
        e = env.value_at(x)
        for n in (2, 3):
            if n_cup(f, G, n, x) != e:
                return _done(tid, desc, False, witness=(x, n))
    return _done(tid, desc, True, margin=0)


# ---------------------------------------------------------------------------
# double-conjugate hull checks
# ---------------------------------------------------------------------------


def _check_fcirc_i(tid, desc, f):
    cupf = cup_exact(f)
    circf = circ_exact(f)
    fc = f.closure()
    D = subdiff_domain(f)
    worst = None
    for x in sorted(set(primal_probes(f)) | set(circf.breakpoints)):
        a, b, c = cupf.value_at(x), fc.value_at(x), circf.value_at(x)
        if not (a <= b and b <= c):
            return _done(tid, desc, False, witness=x)
        if D.contains(x) and c != f.value_at(x):
            return _done(tid, desc, False, witness=x)
        worst = _min_margin(worst, ext_sub(c, a))
    return _done(tid, desc, True, worst)


def _check_fcirc_ii(tid, desc, f):
    circf = circ_exact(f)
    if not pl_equal(circ_exact(circf), circf):
        return _done(tid, desc, False, witness="hull of the hull moved")
    if not pl_equal(star_cup_exact(f), conjugate_exact(circf)):
        return _done(tid, desc, False, witness="dual envelope vs hull conjugate")
    wit = None
    if not lsc_defect(f):
        starcirc = circ_exact(conjugate_exact(f))
        if not pl_equal(starcirc, conjugate_exact(cup_exact(f))):
            return _done(tid, desc, False, witness="conjugate-side hull")
        if not pl_equal(conjugate_exact(starcirc), cup_exact(f)):
            return _done(tid, desc, False, witness="conjugate-side hull, back")
    else:
        # conjugation cannot see raised endpoint values, so the two
        # cross identities genuinely fail there; they are not checked
        wit = "cross identities skipped at raised endpoints"
    return TheoremCheck(tid, desc, PASS, "exact", 0, witness=wit)


def _check_fcirc_iii(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    circf = circ_exact(f)
    R = range_interval(f)
    for x in sorted(set(primal_probes(f)) | set(circf.breakpoints)):
        lhs = subdiff_exact(f, x)
        rhs = _interval_intersect(subdiff_exact(circf, x), R)
        if lhs != rhs:
            return _done(tid, desc, False, witness=x)
    for a, b in subdiff_graph(f).pairs:
        if not subdiff_test(circf, a, b):
            return _done(tid, desc, False, witness=(a, b))
    return _done(tid, desc, True)


def _check_fcirc_iv(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    circf = circ_exact(f)
    R = range_interval(f)
    D = subdiff_domain(f)
    for x in sorted(set(primal_probes(f)) | set(circf.breakpoints)):
        lhs = D.contains(x)
        rhs = _interval_intersect(subdiff_exact(circf, x), R) is not None
        if lhs != rhs:
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True)


def _check_fcirc_v(tid, desc, f):
    circf = circ_exact(f)
    same_ops = _operators_equal(f, circf)
    same_range = range_interval(f) == range_interval(circf)
    return _done(tid, desc, same_ops == same_range,
                 witness=(same_ops, same_range))


def _check_maxcup(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, "the subdifferential misses the raised "
                              "endpoint, so it is not maximal")
    ok = (
        pl_equal(cup_exact(f), f.closure())
        and pl_equal(star_cup_exact(f), conjugate_exact(f))
        and pl_equal(cup_exact(f), circ_exact(f))
    )
    return _done(tid, desc, ok, witness="envelope moved a maximal instance")


# ---------------------------------------------------------------------------
# level-constrained envelope checks
# ---------------------------------------------------------------------------


def _check_fsp_i(tid, desc, f):
    st = subdiff_structure(f)
    hull = portable_hull_interval(effective_domain(f))
    D = subdiff_domain(f)
    dom = effective_domain(f)
    for x in primal_probes(f):
        sm = smile_value(f, x, st=st)
        c = cup_value(f, x, st=st)
        sh = sharp_value(f, x, st=st, hull=hull)
        fx = f.value_at(x)
        if not (sm <= c and c <= sh and sh <= fx):
            return _done(tid, desc, False, witness=x)
        if D.contains(x) and sm != fx:
            return _done(tid, desc, False, witness=x)
        if not dom.contains(x) and sm != c:
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True)


def _probed_proper(vals) -> bool:
    return any(v.is_finite for v in vals) and not any(v.is_neg_inf for v in vals)


def _check_fsp_ii(tid, desc, f):
    st = subdiff_structure(f)
    vals = [smile_value(f, x, st=st) for x in primal_probes(f)]
    lhs = _probed_proper(vals)
    if st.points or st.segments:
        rhs = conjugate_exact(f).value_at(F(0)) == star_cup_exact(f).value_at(F(0))
    else:
        rhs = False
    return _done(tid, desc, lhs == rhs, witness=(lhs, rhs))


def _check_fsp_iii(tid, desc, f):
    st = subdiff_structure(f)
    worst = None
    for x in primal_probes(f):
        sm = smile_value(f, x, st=st)
        bound = ext_add(fitzpatrick_structured(st, x, F(0)), f.value_at(x))
        if sm > bound:
            return _done(tid, desc, False, ext_sub(bound, sm), x)
        worst = _min_margin(worst, ext_sub(bound, sm))
    return _done(tid, desc, True, worst)


def _check_spxstar(tid, desc, f):
    st = subdiff_structure(f)
    has_graph = bool(st.points or st.segments)
    rhs = has_graph and pl_equal(conjugate_exact(f), star_cup_exact(f))
    for s in dual_probes(f):
        g = f.tilt(s)
        stg = subdiff_structure(g)
        vals = [smile_value(g, x, st=stg) for x in primal_probes(g)]
        if _probed_proper(vals) != rhs:
            return _done(tid, desc, False, witness=s)
    return _done(tid, desc, True)


# ---------------------------------------------------------------------------
# maximality equivalence checks (statements about closed instances)
# ---------------------------------------------------------------------------


def _check_maxsdsp_ii(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    st = subdiff_structure(f)
    dom = effective_domain(f)
    worst = None
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        for s in dual_probes(f):
            phi = fitzpatrick_structured(st, x, s)
            if phi < x * s:
                return _done(tid, desc, False, ext_sub(phi, as_extreal(x * s)), (x, s))
            worst = _min_margin(worst, ext_sub(phi, as_extreal(x * s)))
    return _done(tid, desc, True, worst)


def _check_maxsdsp_iii(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    st = subdiff_structure(f)
    dom = effective_domain(f)
    for x in primal_probes(f):
        if dom.contains(x) and smile_value(f, x, st=st) != f.value_at(x):
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True, margin=0)


def _check_maxsdsp_iv(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    st = subdiff_structure(f)
    for x in primal_probes(f):
        if smile_value(f, x, st=st) != f.value_at(x):
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True, margin=0)


def _slope_bound(f: PLConvex1D) -> Fraction:
    cand = [F(1)]
    cand.extend(abs(s) for s in f.slopes())
    if f.left_recession is not None:
        cand.append(abs(f.left_recession))
    if f.right_recession is not None:
        cand.append(abs(f.right_recession))
    return max(cand)


def _net_points(f: PLConvex1D, x, r):
    """The point itself plus a same-piece neighbour, both within r."""
    out = [x]
    b = f.breakpoints
    left_ok = x > b[0] or f.left_recession is not None
    right_ok = x < b[-1] or f.right_recession is not None
    inner = [c for c in b if c < x]
    gap_l = x - max(inner) if inner else None
    inner = [c for c in b if c > x]
    gap_r = min(inner) - x if inner else None
    if left_ok:
        step = r if gap_l is None else min(r, gap_l)
        out.append(x - step / 2)
    elif right_ok:
        step = r if gap_r is None else min(r, gap_r)
        out.append(x + step / 2)
    return out


def _check_maxsdsp_v(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    dom = effective_domain(f)
    lam = _slope_bound(f)
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        fx = f.value_at(x)
        for r in _RADII:
            for a in _net_points(f, x, r):
                iv = subdiff_exact(f, a)
                if iv is None:
                    return _done(tid, desc, False, witness=(x, r))
                astar = _some_slope(iv)
                fa = f.value_at(a)
                if abs(x - a) > r:
                    return _done(tid, desc, False, witness=(x, r))
                if abs(fa.finite() - fx.finite()) > lam * r:
                    return _done(tid, desc, False, witness=(x, r, "value"))
                bracket = (x - a) * astar + fa.finite()
                if abs(bracket - fx.finite()) > 2 * lam * r:
                    return _done(tid, desc, False, witness=(x, r, "bracket"))
    return _done(tid, desc, True, margin=0)


def _check_maxsdsp_vi(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    dom = effective_domain(f)
    lam = _slope_bound(f)
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        for r in _RADII:
            for a in _net_points(f, x, r):
                iv = subdiff_exact(f, a)
                if iv is None or abs((x - a) * _some_slope(iv)) > lam * r:
                    return _done(tid, desc, False, witness=(x, r))
    return _done(tid, desc, True, margin=0)


def _check_maxsdsp_vii(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    dom = effective_domain(f)
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        iv = subdiff_exact(f, x)
        if iv is None:
            return _done(tid, desc, False, witness=x)
        xstar = _some_slope(iv)
        for eps in (F(1), F(1, 4), F(1, 100)):
            res = brondsted_search(f, x, xstar, eps)
            if not (res.found and res.renorm_ok(eps) and res.product_ok(eps)):
                return _done(tid, desc, False, witness=(x, eps))
    return _done(tid, desc, True, margin=0)


def _check_maxsdsp_closure(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    ok1 = _closed_hull(subdiff_domain(f)) == _closed_hull(effective_domain(f))
    R = range_interval(f)
    if R is None:
        return _na(tid, desc, "empty subdifferential graph")
    ok2 = _closed_hull(R) == _closed_hull(effective_domain(conjugate_exact(f)))
    return _done(tid, desc, ok1 and ok2,
                 witness=("domain side", ok1, "range side", ok2))


_EPS_LADDER = (F(1), F(1, 4), F(1, 100))


def _check_fspeps_ii(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    st = subdiff_structure(f)
    dom = effective_domain(f)
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        vals = [smile_eps_value(f, x, e, st=st) for e in _EPS_LADDER]
        # shrinking the budget can only shrink the admitted family
        for big, small in zip(vals, vals[1:]):
            if small > big:
                return _done(tid, desc, False, witness=x)
        if ext_inf(vals) != f.value_at(x):
            return _done(tid, desc, False, witness=x)
    return _done(tid, desc, True, margin=0)


def _check_fspeps_iii(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    st = subdiff_structure(f)
    dom = effective_domain(f)
    for x in primal_probes(f):
        if not dom.contains(x):
            continue
        for e in _EPS_LADDER:
            if smile_eps_value(f, x, e, st=st) != f.value_at(x):
                return _done(tid, desc, False, witness=(x, e))
    return _done(tid, desc, True, margin=0)


def _check_fspeps_iv(tid, desc, f):
    if lsc_defect(f):
        return _na(tid, desc, _NEEDS_LSC)
    st = subdiff_structure(f)
    for x in primal_probes(f):
        for e in _EPS_LADDER:
            if smile_eps_value(f, x, e, st=st) != f.value_at(x):
                return _done(tid, desc, False, witness=(x, e))
    return _done(tid, desc, True, margin=0)


# ---------------------------------------------------------------------------
# separated-variables coupling for normal cones
# ---------------------------------------------------------------------------


def _check_ncfitz(tid, desc, C):
    if C.lo_open or C.hi_open:
        return _na(tid, desc, "needs a closed set")
    f = indicator(C)
    st = subdiff_structure(f)
    probes = set()
    for end in (C.lo, C.hi):
        if end is not None:
            probes.update((end, end - 1, end + 1))
    if C.lo is not None and C.hi is not None:
        probes.add((C.lo + C.hi) / 2)
    if C.lo is None:
        probes.add((C.hi if C.hi is not None else F(0)) - 5)
    if C.hi is None:
        probes.add((C.lo if C.lo is not None else F(0)) + 5)
    duals = (F(-3), F(-1), F(-1, 2), F(0), F(1, 2), F(1), F(3))
    for x in sorted(probes):
        for s in duals:
            phi = fitzpatrick_structured(st, x, s)
            want = support_function(C, s) if C.contains(x) else POS_INF
            if phi != want:
                return _done(tid, desc, False, witness=(x, s))
    return _done(tid, desc, True, margin=0)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_PL = (PLConvex1D,)
_PL_OR_GRID = (PLConvex1D, GridFunction)

REGISTRY = {
    "dfdom.ineq": (_check_dfdom_ineq, _PL_OR_GRID),
    "dfdom.i": (_check_dfdom_i, _PL_OR_GRID),
    "dfdom.e3": (_check_dfdom_e3, _PL),
    "dfdom.iv": (_check_dfdom_iv, (GridFunction,)),
    "ba.density": (_check_ba_density, _PL),
    "fcupdiez.i": (_check_fcupdiez_i, _PL),
    "fcupdiez.iii": (_check_fcupdiez_iii, _PL),
    "fcupdiez.iv": (_check_fcupdiez_iv, _PL),
    "fcupdiez.v": (_check_fcupdiez_v, _PL),
    "fcupdiez.viii": (_check_fcupdiez_viii, _PL),
    "fcupdiez.ix": (_check_fcupdiez_ix, _PL),
    "fcirc.i": (_check_fcirc_i, _PL),
    "fcirc.ii": (_check_fcirc_ii, _PL),
    "fcirc.iii": (_check_fcirc_iii, _PL),
    "fcirc.iv": (_check_fcirc_iv, _PL),
    "fcirc.v": (_check_fcirc_v, _PL),
    "maxcup": (_check_maxcup, _PL),
    "fsp.i": (_check_fsp_i, _PL),
    "fsp.ii": (_check_fsp_ii, _PL),
    "fsp.iii": (_check_fsp_iii, _PL),
    "spxstar": (_check_spxstar, _PL),
    "maxsdsp.ii": (_check_maxsdsp_ii, _PL),
    "maxsdsp.iii": (_check_maxsdsp_iii, _PL),
    "maxsdsp.iv": (_check_maxsdsp_iv, _PL),
    "maxsdsp.v": (_check_maxsdsp_v, _PL),
    "maxsdsp.vi": (_check_maxsdsp_vi, _PL),
    "maxsdsp.vii": (_check_maxsdsp_vii, _PL),
    "maxsdsp.closure": (_check_maxsdsp_closure, _PL),
    "fspeps.ii": (_check_fspeps_ii, _PL),
    "fspeps.iii": (_check_fspeps_iii, _PL),
    "fspeps.iv": (_check_fspeps_iv, _PL),
    "ncfitz": (_check_ncfitz, (Interval1D,)),
}


def run_check(theorem_id: str, inst, desc: str | None = None) -> TheoremCheck:
    """Run one registered check; unknown ids raise KeyError."""
    if theorem_id not in REGISTRY:
        raise KeyError(f"unknown theorem id {theorem_id!r}")
    fn, kinds = REGISTRY[theorem_id]
    if desc is None:
        desc = getattr(inst, "label", None) or type(inst).__name__
    if not isinstance(inst, kinds):
        backend = "grid" if isinstance(inst, GridFunction) else "exact"
        return _na(theorem_id, desc,
                   f"{type(inst).__name__} is outside this statement's scope",
                   backend)
    return fn(theorem_id, desc, inst)


# ---------------------------------------------------------------------------
# seeded instances
# ---------------------------------------------------------------------------

FAMILIES = (
    "pl-convex",
    "pl-convex-with-override",
    "grid-nonconvex",
    "indicator-set",
    "operator-graph",
)


class InstanceGenerator:
    """Deterministic instance streams keyed by a seed.

    Exact families draw every coordinate from small rationals so that all
    downstream checks stay in ``Fraction``.  The grid family is float-valued
    on purpose: those instances exist to exercise the sampled backend.
    """

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)

    def _pl_parts(self, min_m=1, max_m=8):
        rng = self._rng
        m = rng.randint(min_m, max_m)
        x = F(rng.randint(-12, 6))
        xs = [x]
        for _ in range(m - 1):
            x += F(rng.randint(1, 9), rng.choice((1, 2, 4)))
            xs.append(x)
        s = F(rng.randint(-9, 5), rng.choice((1, 2, 3)))
        slopes = []
        for _ in range(m - 1):
            slopes.append(s)
            s += F(rng.randint(0, 7), rng.choice((1, 2, 3)))
        v = F(rng.randint(-9, 9))
        vals = [v]
        for i in range(m - 1):
            v += slopes[i] * (xs[i + 1] - xs[i])
            vals.append(v)
        return xs, vals, slopes

    def pl_convex(self) -> PLConvex1D:
        rng = self._rng
        xs, vals, slopes = self._pl_parts()
        if slopes:
            base_l, base_r = slopes[0], slopes[-1]
        else:
            base_l = base_r = F(rng.randint(-4, 4))
        left = None
        if rng.randint(0, 1):
            left = base_l - F(rng.randint(0, 6), 2)
        right = None
        if rng.randint(0, 1):
            right = base_r + F(rng.randint(0, 6), 2)
        return PLConvex1D(tuple(xs), tuple(vals), left, right)

    def pl_convex_with_override(self, tiny_defect: bool = False) -> PLConvex1D:
        rng = self._rng
        xs, vals, slopes = self._pl_parts(min_m=2)
        side = rng.choice(("left", "right", "both"))
        if tiny_defect:
            defect = F(rng.randint(1, 9), 10**6)
        else:
            defect = F(rng.randint(1, 8), rng.choice((1, 2, 4)))
        ovl = ovr = None
        left = right = None
        if side in ("left", "both"):
            ovl = vals[0] + defect
        elif rng.randint(0, 1):
            left = slopes[0] - F(rng.randint(0, 6), 2)
        if side in ("right", "both"):
            ovr = vals[-1] + defect
        elif rng.randint(0, 1):
            right = slopes[-1] + F(rng.randint(0, 6), 2)
        return PLConvex1D(tuple(xs), tuple(vals), left, right, ovl, ovr)

    def grid_nonconvex(self) -> GridFunction:
        rng = self._rng
        k = rng.randint(5, 12)
        xs = set()
        while len(xs) < k:
            xs.add(round(rng.uniform(-4.0, 4.0), 3))
        xs = sorted(xs)
        vals = [round(rng.uniform(-3.0, 3.0), 3) for _ in xs]
        f = GridFunction(1, tuple(xs), tuple(vals))
        if is_convex_on_grid(f):
            j = len(xs) // 2
            t = (xs[j] - xs[j - 1]) / (xs[j + 1] - xs[j - 1])
            chord = vals[j - 1] + t * (vals[j + 1] - vals[j - 1])
            vals[j] = chord + round(rng.uniform(0.5, 2.0), 3)
            f = GridFunction(1, tuple(xs), tuple(vals))
        return f

    def indicator_set(self) -> Interval1D:
        rng = self._rng
        lo = F(rng.randint(-6, 2), rng.choice((1, 2)))
        kind = rng.randint(0, 9)
        if kind == 0:
            return Interval1D(lo, lo)  # a single point
        if kind == 1:
            return Interval1D(lo, None)
        if kind == 2:
            return Interval1D(None, lo)
        hi = lo + F(rng.randint(1, 8), rng.choice((1, 2)))
        lo_open = rng.randint(0, 3) == 0
        hi_open = rng.randint(0, 3) == 0
        return Interval1D(lo, hi, lo_open, hi_open)

    def operator_graph(self) -> OperatorGraph:
        rng = self._rng
        k = rng.randint(2, 7)
        xs = sorted(rng.sample(range(-9, 10), k))
        ys = []
        y = F(rng.randint(-6, 2))
        for _ in range(k):
            ys.append(y)
            y += F(rng.randint(0, 5), rng.choice((1, 2)))
        if rng.randint(0, 3) == 0 and k >= 2 and ys[0] != ys[-1]:
            ys[0], ys[-1] = ys[-1], ys[0]  # breaks monotonicity
        pairs = tuple((F(a), b) for a, b in zip(xs, ys))
        return OperatorGraph(1, pairs)

    def generate(self, family: str, count: int, **kw) -> list:
        makers = {
            "pl-convex": self.pl_convex,
            "pl-convex-with-override": self.pl_convex_with_override,
            "grid-nonconvex": self.grid_nonconvex,
            "indicator-set": self.indicator_set,
            "operator-graph": self.operator_graph,
        }
        if family not in makers:
            raise ValueError(f"unknown family {family!r}")
        out = []
        for i in range(count):
            inst = makers[family](**kw)
            if hasattr(inst, "label") and not isinstance(inst, Interval1D):
                inst = replace(inst, label=f"{family}[{i}]")
            out.append(inst)
        return out


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    checks: tuple

    @property
    def n_pass(self) -> int:
        return sum(1 for c in self.checks if c.verdict == PASS)

    @property
    def n_fail(self) -> int:
        return sum(1 for c in self.checks if c.verdict == FAIL)

    @property
    def n_not_applicable(self) -> int:
        return sum(1 for c in self.checks if c.verdict == NOT_APPLICABLE)

    @property
    def all_ok(self) -> bool:
        return self.n_fail == 0

    def lines(self) -> list:
        out = []
        for c in self.checks:
            line = f"{c.theorem_id:<18} {c.instance:<30} {c.verdict}"
            if c.margin is not None:
                line += f"  margin={format_scalar(as_extreal(c.margin))}"
            if c.verdict == FAIL and c.witness is not None:
                line += f"  at {c.witness!r}"
            out.append(line)
        out.append(
            f"checks: {len(self.checks)}  pass: {self.n_pass}  "
            f"fail: {self.n_fail}  not-applicable: {self.n_not_applicable}"
        )
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("theorem_id,instance_id,verdict,margin,tolerance,backend\n")
            for c in self.checks:
                margin = (
                    "" if c.margin is None
                    else format_scalar(as_extreal(c.margin))
                )
                fh.write(
                    f"{c.theorem_id},{c.instance},{c.verdict},"
                    f"{margin},{format_scalar(as_extreal(c.tolerance))},{c.backend}\n"
                )


def run_suite(seed: int = 0, n_instances: int = 4, theorem_ids=None) -> SuiteReport:
    """Run the registry over seeded instances; deterministic for fixed args.

    Every id sees the instances its statement can accept: the exact families
    for function statements, grids for the sampled coupling bounds, interval
    sets for the normal-cone identity.  An empty id selection succeeds with
    zero checks.
    """
    if theorem_ids is None:
        ids = sorted(REGISTRY)
    else:
        ids = sorted(set(theorem_ids))
        for tid in ids:
            if tid not in REGISTRY:
                raise KeyError(f"unknown theorem id {tid!r}")
    gen = InstanceGenerator(seed)
    pl = [
        (f"pl-convex[{i}]", f)
        for i, f in enumerate(gen.generate("pl-convex", n_instances))
    ]
    pl += [
        (f"pl-convex-with-override[{i}]", f)
        for i, f in enumerate(gen.generate("pl-convex-with-override", n_instances))
    ]
    grids = [
        (f"grid-nonconvex[{i}]", f)
        for i, f in enumerate(gen.generate("grid-nonconvex", n_instances))
    ]
    sets = [
        (f"indicator-set[{i}]", s)
        for i, s in enumerate(gen.generate("indicator-set", n_instances))
    ]
    checks = []
    for tid in ids:
        _fn, kinds = REGISTRY[tid]
        pool = []
        if PLConvex1D in kinds:
            pool += pl
        if GridFunction in kinds:
            pool += grids
        if Interval1D in kinds:
            pool += sets
        for desc, inst in pool:
            checks.append(run_check(tid, inst, desc=desc))
    return SuiteReport(seed, tuple(checks))


# ---------------------------------------------------------------------------
# galleries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalleryResult:
    name: str
    summary: str
    checks: tuple
    objects: dict

    @property
    def all_ok(self) -> bool:
        return all(c.verdict == PASS for c in self.checks)


def _gallery_quadratic() -> GalleryResult:
    import numpy as np

    ts = [F(-2) + F(k, 100) for k in range(401)]
    G = OperatorGraph(1, tuple((t, t) for t in ts), label="identity-slope graph")
    t = np.array([float(u) for u in ts])
    xs = np.linspace(-2.0, 2.0, 41)
    s = xs[:, None] + xs[None, :]
    # sup over the graph of x*b + a*y - a*b with a = b = t
    phi = (s[:, :, None] * t[None, None, :] - t * t).max(axis=2)
    diff = np.abs(phi - s * s / 4)
    worst = float(diff.max())
    ok = worst <= 1e-9
    wit = None
    if not ok:
        i, j = divmod(int(diff.argmax()), 41)
        wit = (xs[i], xs[j])
    # exact spot checks on a coarse sub-lattice of the same window
    for i in range(9):
        x = F(-2) + F(i, 2)
        for j in range(9):
            y = F(-2) + F(j, 2)
            if fitzpatrick(G, x, y) != as_extreal((x + y) ** 2 / 4):
                ok, wit = False, (x, y)
    c1 = TheoremCheck(
        "gallery.quadratic.coupling-square", "halved square slopes",
        PASS if ok else FAIL, "grid", 1e-9, margin=worst, witness=wit,
    )

    def val(a, x):
        # tangent from anchor a of the halved square, evaluated at x
        return a * a / 2 + (x - a) * a

    x0, y0 = F(1), F(-1)
    cup1 = max(val(a, x0) for a, _ in G.pairs)
    star1 = max(y0 * a - a * a / 2 for a, _ in G.pairs)
    phi0 = fitzpatrick(G, x0, y0)
    gap = cup1 + star1 - phi0.finite()
    c2 = TheoremCheck(
        "gallery.quadratic.strict-coupling-gap", "halved square slopes",
        PASS if gap > 0 else FAIL, "exact", 0, margin=gap, witness=(x0, y0),
    )
    return GalleryResult(
        "quadratic",
        "dense graph of the identity slope map; the coupling hull is a "
        "perfect square and sits strictly under the envelope sum",
        (c1, c2),
        {"graph": G},
    )


def _gallery_open_interval() -> GalleryResult:
    C = Interval1D(F(0), F(1), True, True)
    f = indicator(C)
    f = replace(f, label="open-unit-interval indicator")
    st = subdiff_structure(f)
    probes = [F(-5) + F(k, 4) for k in range(41)]
    hull = portable_hull_interval(effective_domain(f))
    ok_cup = all(cup_value(f, x, st=st) == as_extreal(0) for x in probes)
    ok_sharp = all(
        sharp_value(f, x, st=st, hull=hull) == as_extreal(0) for x in probes
    )
    c1 = TheoremCheck("gallery.open-interval.cup", f.label,
                      PASS if ok_cup else FAIL, "exact", 0, margin=0)
    c2 = TheoremCheck("gallery.open-interval.sharp", f.label,
                      PASS if ok_sharp else FAIL, "exact", 0, margin=0)
    circf = circ_exact(f)
    closedC = Interval1D(F(0), F(1))
    want = indicator(closedC)
    ok_circ = pl_equal(circf, want) and all(
        circf.value_at(x) == want.value_at(x) for x in probes
    )
    c3 = TheoremCheck("gallery.open-interval.circ", f.label,
                      PASS if ok_circ else FAIL, "exact", 0, margin=0)
    ok_nc = True
    wit = None
    for x in probes:
        got = subdiff_exact(circf, x)
        if closedC.contains(x):
            if got != normal_cone(closedC, x):
                ok_nc, wit = False, x
        elif got is not None:
            ok_nc, wit = False, x
    Gc = subdiff_graph(circf, probes=probes)
    for a, b in Gc.pairs:
        iv = subdiff_exact(circf, a)
        if iv is None or not iv.contains(b):
            ok_nc, wit = False, (a, b)
    c4 = TheoremCheck("gallery.open-interval.normal-cone", f.label,
                      PASS if ok_nc else FAIL, "exact", 0, witness=wit)
    return GalleryResult(
        "open-interval",
        "indicator of the open unit interval: envelopes flatten to zero, "
        "the double-conjugate hull closes the set, and its subdifferential "
        "is the closed interval's normal cone",
        (c1, c2, c3, c4),
        {"instance": f, "circ": circf, "graph": Gc, "probes": tuple(probes)},
    )


def _halfcircle_instance() -> PLConvex1D:
    # chord discretization with rational points: x = -(1-t^2)/(1+t^2),
    # value -2t/(1+t^2), t = k/24 -- both coordinates stay rational
    left = []
    for k in range(25):
        t = F(k, 24)
        x = -(1 - t * t) / (1 + t * t)
        y = -2 * t / (1 + t * t)
        left.append((x, y))
    right = [(-x, y) for x, y in left[:-1]]
    pts = left + list(reversed(right))
    xs = tuple(p[0] for p in pts)
    vs = tuple(p[1] for p in pts)
    return PLConvex1D(xs, vs, None, None, F(1), F(1), label="raised half-disc arc")


def _gallery_half_circle() -> GalleryResult:
    g = _halfcircle_instance()
    defect = lsc_defect(g)
    c1 = TheoremCheck(
        "gallery.half-circle.lsc-defect", g.label,
        PASS if defect == [F(-1), F(1)] else FAIL, "exact", 0, witness=defect,
    )
    G = subdiff_graph(g)
    sweep = []
    for k in range(401):
        if k % 8 == 0:
            continue  # those 51 slots go to graph pairs below
        x = F(-3) + F(6) * F(k, 400)
        y = F(-10) + F(20) * F((11 * k) % 401, 400)
        sweep.append((x, y))
    inside = [p for p in G.pairs if abs(p[1]) <= 10]
    picks = [inside[(i * (len(inside) - 1)) // 50] for i in range(51)]
    cands = sweep + picks
    verdict = is_maximal_relative(G, cands)
    ok2 = verdict.is_maximal and verdict.related >= 51 and verdict.checked == 401
    c2 = TheoremCheck(
        "gallery.half-circle.maximal-relative", g.label,
        PASS if ok2 else FAIL, "exact", 0,
        witness=(verdict.witness, verdict.related, verdict.checked),
    )
    window = Interval1D(F(-10), F(10))
    gc = g.closure()
    ok3 = True
    wit = None
    for x in primal_probes(g):
        a = _interval_intersect(subdiff_exact(g, x), window)
        b = _interval_intersect(subdiff_exact(gc, x), window)
        if a != b:
            ok3, wit = False, x
            break
    c3 = TheoremCheck(
        "gallery.half-circle.closure-graph-window", g.label,
        PASS if ok3 else FAIL, "exact", 0, witness=wit,
    )
    return GalleryResult(
        "half-circle",
        "arc values with both endpoints raised to 1: not lsc, yet no pair "
        "of the probe window extends the subdifferential, and the graph "
        "agrees with the closure's inside the window (the closure's "
        "endpoint rays start at slope 24, outside it)",
        (c1, c2, c3),
        {"instance": g, "graph": G, "verdict": verdict,
         "candidates": tuple(cands)},
    )


def _gallery_two_patch() -> GalleryResult:
    xs = (0.0, 0.25, 0.5, 0.75, 1.0) + tuple(
        round(1.0 + 0.1 * k, 10) for k in range(1, 11)
    )
    vals = (0.0, math.inf, math.inf, math.inf, math.inf) + (0.0,) * 10
    g = GridFunction(1, xs, vals, label="point plus far patch")
    c1 = TheoremCheck(
        "gallery.two-patch.nonconvex", g.label,
        PASS if not is_convex_on_grid(g) else FAIL, "grid", 1e-9,
    )
    hull = cl_conv(g)
    want = PLConvex1D((F(0), F(2)), (F(0), F(0)))
    c2 = TheoremCheck(
        "gallery.two-patch.clconv", g.label,
        PASS if pl_equal(hull, want) else FAIL, "exact", 0,
    )
    missing = [0.25, 0.5, 0.75, 1.0]
    ok3 = subdiff_test(hull, F(1, 2), F(0)) and all(
        not grid_subdiff_test(g, x, 0.0) for x in missing
    )
    c3 = TheoremCheck(
        "gallery.two-patch.strict-inclusion", g.label,
        PASS if ok3 else FAIL, "exact", 0, witness=(0.5, 0.0),
    )
    # candidates stay over the hull's domain: beyond it the full normal
    # rays at 0 and 2 defeat every extension, but a finite sample cannot
    Gh = subdiff_graph(hull, probes=(F(1, 2),))
    cands = []
    for k in range(201):
        x = F(2) * F(k, 200)
        y = F(-6) + F(12) * F((7 * k) % 201, 200)
        cands.append((x, y))
    cands += [p for p in Gh.pairs if abs(p[1]) <= 6][:40]
    v = is_maximal_relative(Gh, cands)
    c4 = TheoremCheck(
        "gallery.two-patch.hull-maximal-relative", g.label,
        PASS if v.is_maximal else FAIL, "exact", 0, witness=v.witness,
    )
    return GalleryResult(
        "two-patch",
        "a lone point plus a separated flat patch: the hull closes the gap "
        "to a flat function on [0,2], whose subdifferential strictly "
        "contains the sampled one, witnessed at (0.5, 0)",
        (c1, c2, c3, c4),
        {"instance": g, "hull": hull, "witness": (0.5, 0.0), "graph": Gh},
    )


def _quadrant_pair():
    axis = [round(0.1 * i, 10) for i in range(21)]
    pts = tuple((x, y) for x in axis for y in axis)
    fvals = tuple(-math.sqrt(x * y) for x, y in pts)

    def raised(x, y, v):
        on_edge = (x == 0.0 or y == 0.0) and not (x == 0.0 and y == 0.0)
        return v + 1.0 if on_edge else v

    gvals = tuple(raised(x, y, v) for (x, y), v in zip(pts, fvals))
    f = GridFunction(2, pts, fvals, label="quadrant geometric-mean dip")
    g = GridFunction(2, pts, gvals, label="quadrant dip, edges raised")
    return f, g


def _gallery_quadrant() -> GalleryResult:
    f, g = _quadrant_pair()
    tol = 1e-9
    c1 = TheoremCheck(
        "gallery.quadrant.base-convex", f.label,
        PASS if is_convex_on_grid(f, tol) else FAIL, "grid", tol,
    )
    c2 = TheoremCheck(
        "gallery.quadrant.raised-nonconvex", g.label,
        PASS if not is_convex_on_grid(g, tol) else FAIL, "grid", tol,
    )
    duals = tuple(
        (round(-3.0 + 0.5 * i, 10), round(-3.0 + 0.5 * j, 10))
        for i in range(9)
        for j in range(9)
    )
    pairs = []
    ok = True
    wit = None
    for p in f.points:
        for s in duals:
            mf = grid_subdiff_test(f, p, s, tol=tol)
            mg = grid_subdiff_test(g, p, s, tol=tol)
            if mf != mg:
                ok, wit = False, (p, s)
                break
            if mf:
                pairs.append((p, s))
        if not ok:
            break
    c3 = TheoremCheck(
        "gallery.quadrant.graph-agreement", f.label,
        PASS if ok and len(pairs) >= 1 else FAIL, "grid", tol, witness=wit,
    )
    return GalleryResult(
        "quadrant",
        "negative geometric mean on a quadrant grid, edges raised off the "
        "origin: convexity is lost but the sampled subdifferential never "
        "notices, because no raised point carries a subgradient",
        (c1, c2, c3),
        {"f": f, "g": g,
         "graph": OperatorGraph(2, tuple(pairs), label=f.label),
         "duals": duals},
    )


GALLERY_NAMES = (
    "quadratic",
    "open-interval",
    "half-circle",
    "two-patch",
    "quadrant",
)

_GALLERY_BUILDERS = {
    "quadratic": _gallery_quadratic,
    "open-interval": _gallery_open_interval,
    "half-circle": _gallery_half_circle,
    "two-patch": _gallery_two_patch,
    "quadrant": _gallery_quadrant,
}


@functools.lru_cache(maxsize=None)
def gallery(name: str) -> GalleryResult:
    """Build a named worked example; results are cached per process."""
    if name not in _GALLERY_BUILDERS:
        raise KeyError(f"unknown gallery {name!r}")
    return _GALLERY_BUILDERS[name]()
