"""Envelopes rebuilt from subdifferential data.

Every construction here answers one question: how much of a convex function
can be recovered knowing only (part of) its subdifferential?  The basic
building block is the supremum of affine supports anchored on the graph,
optionally filtered by a value budget on the anchor:

* no budget          -> the plain upper envelope of the supports;
* budget f(x)        -> anchors may not exceed the value at the probe;
* budget f(x) + eps  -> the relaxed variant of the same.

The exact 1D backend evaluates these suprema over the full interval
structure of the subdifferential, so equalities can be asserted with zero
tolerance.  The pair-route variants work from a finite list of graph pairs
and therefore compute lower bounds of the same quantities; they exist so
that sampled (grid) instances get the same vocabulary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .extreal import ExtReal, NEG_INF, POS_INF, as_extreal
from .funcrep import (
    GridFunction,
    Interval1D,
    MaxAffine,
    PLConvex1D,
    SampledSet,
    dot,
    effective_domain,
    evaluate,
    point_sub,
    write_values_csv,
)
from .operators import (
    OperatorGraph,
    _exactify,
    eps_subdiff_test,
    grid_subdiff_test,
    subdiff_graph,
    subdiff_structure,
    subdiff_test,
)
from .transforms import conjugate_brute, conjugate_exact, pl_restrict


# ---------------------------------------------------------------------------
# exact engine
# ---------------------------------------------------------------------------


def _threshold_sup(st, x, theta=None, strict=False) -> ExtReal:
    """sup of affine supports whose anchor value passes the budget.

    theta=None admits every support.  A breakpoint with subgradient interval
    [lo, hi] contributes its value at the probe through the steeper interval
    end on the relevant side; an unbounded end means the sup diverges there.
    Along a segment every admitted anchor carries the segment's own line, so
    the budget only decides whether the open segment contains an admitted
    anchor at all (for a sloped segment: iff the budget exceeds the infimum
    of the values over the open piece, which need not be attained).
    """
    best = NEG_INF
    for a, v, lo, hi in st.points:
        if theta is not None:
            skip = (v >= theta) if strict else (v > theta)
            if skip:
                continue
        if x == a:
            cand = as_extreal(v)
        elif x > a:
            cand = POS_INF if hi is None else as_extreal(v + (x - a) * hi)
        else:
            cand = POS_INF if lo is None else as_extreal(v + (x - a) * lo)
        if cand > best:
            best = cand
            if best.is_pos_inf:
                return best
    for xlo, xhi, slope, rx, rv in st.segments:
        if theta is not None:
            if slope == 0:
                admit = (rv < theta) if strict else (rv <= theta)
            else:
                if xlo is None:
                    lo_end = NEG_INF if slope > 0 else POS_INF
                else:
                    lo_end = as_extreal(rv + (xlo - rx) * slope)
                if xhi is None:
                    hi_end = POS_INF if slope > 0 else NEG_INF
                else:
                    hi_end = as_extreal(rv + (xhi - rx) * slope)
                inf_open = lo_end if lo_end < hi_end else hi_end
                admit = as_extreal(theta) > inf_open
            if not admit:
                continue
        cand = as_extreal(rv + (x - rx) * slope)
        if cand > best:
            best = cand
    return best


def cup_value(f: PLConvex1D, x, st=None) -> ExtReal:
    """Exact upper envelope of all subdifferential supports at one probe."""
    if st is None:
        st = subdiff_structure(f)
    return _threshold_sup(st, _exactify(x))


def smile_value(f: PLConvex1D, x, st=None, strict=False) -> ExtReal:
    """Exact constrained envelope: only anchors with f(a) <= f(x) count.

    At probes with f(x) = +inf the constraint is dropped (documented branch)
    and the value coincides with the plain upper envelope.  strict=True
    switches the anchor comparison to <, a variant kept for control tests.
    """
    if st is None:
        st = subdiff_structure(f)
    x = _exactify(x)
    fx = f.value_at(x)
    if fx.is_pos_inf:
        return _threshold_sup(st, x)
    return _threshold_sup(st, x, theta=fx.finite(), strict=strict)


def smile_eps_value(f: PLConvex1D, x, eps, st=None) -> ExtReal:
    """Exact relaxed constrained envelope: anchors with f(a) <= f(x) + eps."""
    eps = _exactify(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if st is None:
        st = subdiff_structure(f)
    x = _exactify(x)
    fx = f.value_at(x)
    if fx.is_pos_inf:
        return _threshold_sup(st, x)
    return _threshold_sup(st, x, theta=fx.finite() + eps)


def subdiff_domain(f: PLConvex1D) -> Interval1D:
    """Points with a nonempty subdifferential; open at overridden endpoints."""
    b = f.breakpoints
    lo = None if f.left_recession is not None else b[0]
    hi = None if f.right_recession is not None else b[-1]
    return Interval1D(
        lo,
        hi,
        lo is not None and f.override_left is not None,
        hi is not None and f.override_right is not None,
    )


def portable_hull_interval(iv: Interval1D) -> Interval1D:
    """The set cut out by the outward normals of an interval.

    Interior points contribute the zero normal only, so every constraint
    comes from a closed finite endpoint; an open or infinite end constrains
    nothing and that side becomes unbounded.
    """
    lo = None if (iv.lo is None or iv.lo_open) else iv.lo
    hi = None if (iv.hi is None or iv.hi_open) else iv.hi
    return Interval1D(lo, hi)


def sharp_value(f: PLConvex1D, x, st=None, hull=None) -> ExtReal:
    """Upper envelope plus the indicator of the normal-hull of the domain."""
    x = _exactify(x)
    if hull is None:
        hull = portable_hull_interval(effective_domain(f))
    if not hull.contains(x):
        return POS_INF
    return cup_value(f, x, st=st)


def cup_exact(f: PLConvex1D) -> PLConvex1D:
    """The upper envelope as a function.

    Without overrides it is the closure.  A raised endpoint removes that
    breakpoint's supports; the steepest remaining support on that side is the
    adjacent segment's line, so the wall is replaced by a recession with the
    adjacent slope.
    """
    g = f.closure()
    if f.override_left is None and f.override_right is None:
        return g
    s = g.slopes()
    lrec = s[0] if f.override_left is not None else g.left_recession
    rrec = s[-1] if f.override_right is not None else g.right_recession
    return PLConvex1D(g.breakpoints, g.values, lrec, rrec, label=f.label)


def sharp_exact(f: PLConvex1D) -> PLConvex1D:
    return pl_restrict(cup_exact(f), portable_hull_interval(effective_domain(f)))


def star_cup_exact(f: PLConvex1D) -> PLConvex1D:
    """Conjugate of f restricted to the points carrying subgradients."""
    return conjugate_exact(pl_restrict(f, subdiff_domain(f)))


def circ_exact(f: PLConvex1D) -> PLConvex1D:
    """Double conjugate of the restriction: the closed convex function the
    subdifferential data reconstructs."""
    return conjugate_exact(star_cup_exact(f))


# ---------------------------------------------------------------------------
# pair routes
# ---------------------------------------------------------------------------


def _pair_membership_ok(f, a, b, tol) -> bool:
    if isinstance(f, PLConvex1D):
        return subdiff_test(f, a, b)
    if isinstance(f, GridFunction):
        return grid_subdiff_test(f, a, b, tol)
    raise TypeError("unsupported function representation")


def upper_envelope(f, G: OperatorGraph, tol=0) -> MaxAffine:
    """Max of the affine supports anchored at the graph pairs.

    Every pair must pass the subgradient membership test for f and anchor at
    a finite value; violations raise.  An empty graph yields the empty max,
    which is -inf everywhere (improper; see MaxAffine.is_proper).
    """
    pieces = []
    for a, b in G.pairs:
        fa = evaluate(f, a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        if not _pair_membership_ok(f, a, b, tol):
            raise ValueError(f"pair ({a!r}, {b!r}) fails the subgradient test")
        pieces.append((a, b, fa.finite()))
    return MaxAffine(G.dim, tuple(pieces), label=G.label)


def cup_dual_value(f, G: OperatorGraph, x) -> ExtReal:
    """Cross-check route for upper_envelope via conjugate values.

    For a graph pair the support line rewrites as <x, a*> - f*(a*), so the
    sup over the same dual points must reproduce the envelope exactly.
    """
    if isinstance(f, PLConvex1D):
        conj = conjugate_exact(f)

        def fstar(b):
            return conj.value_at(b).finite()

    elif isinstance(f, GridFunction):
        items = f.finite_items()

        def fstar(b):
            return max(dot(y, b, f.dim) - fy for y, fy in items)

    else:
        raise TypeError("unsupported function representation")
    best = NEG_INF
    for b in {b for _a, b in G.pairs}:
        cand = as_extreal(dot(x, b, G.dim) - fstar(b))
        if cand > best:
            best = cand
    return best


def star_cup(f, G: OperatorGraph, xstar) -> ExtReal:
    """sup over graph anchors a of <xstar, a> - f(a); -inf on the empty graph.

    At xstar = 0 this is minus the infimum of f over the anchor set.
    """
    best = NEG_INF
    for a in {a for a, _b in G.pairs}:
        fa = evaluate(f, a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        cand = as_extreal(dot(xstar, a, G.dim) - fa.finite())
        if cand > best:
            best = cand
    return best


def star_cup_dual(f, G: OperatorGraph, xstar) -> ExtReal:
    """Cross-check route for star_cup: <xstar - a*, a> + f*(a*) per pair."""
    if isinstance(f, PLConvex1D):
        conj = conjugate_exact(f)

        def fstar(b):
            return conj.value_at(b).finite()

    elif isinstance(f, GridFunction):
        items = f.finite_items()

        def fstar(b):
            return max(dot(y, b, f.dim) - fy for y, fy in items)

    else:
        raise TypeError("unsupported function representation")
    best = NEG_INF
    for a, b in G.pairs:
        cand = as_extreal(dot(point_sub(xstar, b, G.dim), a, G.dim) + fstar(b))
        if cand > best:
            best = cand
    return best


def circ(f, G: OperatorGraph, dual_points, probes) -> tuple:
    """Sampled double conjugation of f restricted to the graph anchors.

    Returns (probe, value) rows.  Finite dual grids undershoot, so this is a
    lower bound of the exact construction; equality statements live on the
    exact backend (circ_exact).
    """
    anchors = []
    vals = []
    for a in {a for a, _b in G.pairs}:
        fa = evaluate(f, a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        anchors.append(a)
        vals.append(float(fa.finite()))
    if not anchors:
        return tuple((x, NEG_INF) for x in probes)
    restricted = GridFunction(G.dim, tuple(anchors), tuple(vals))
    conj = conjugate_brute(restricted, tuple(dual_points))
    back = conjugate_brute(conj, tuple(probes))
    return tuple(zip(back.points, back.values))


def n_cup(f, G: OperatorGraph, n: int, x) -> ExtReal:
    """Envelope over chains of n graph pairs.

    A chain couples the probe to the first anchor, each anchor to the next,
    and pays the function value at the last anchor.  Maximizing anchor by
    anchor from the tail gives the value in n passes over the pair list;
    n_cup_enum does the same by literal enumeration for cross-checking.
    """
    if n not in (2, 3, 4):
        raise ValueError("n must be one of 2, 3, 4")
    ps = G.pairs
    if not ps:
        return NEG_INF
    level = []
    for a, _b in ps:
        fa = evaluate(f, a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        level.append(fa.finite())
    for _ in range(n - 1):
        level = [
            max(
                level[p] + dot(ps[p][1], point_sub(aq, ps[p][0], G.dim), G.dim)
                for p in range(len(ps))
            )
            for aq, _bq in ps
        ]
    return as_extreal(
        max(
            level[p] + dot(ps[p][1], point_sub(x, ps[p][0], G.dim), G.dim)
            for p in range(len(ps))
        )
    )


def n_cup_enum(f, G: OperatorGraph, n: int, x) -> ExtReal:
    """Literal chain enumeration; exponential, for small graphs and tests."""
    if n not in (2, 3, 4):
        raise ValueError("n must be one of 2, 3, 4")
    ps = G.pairs
    if not ps:
        return NEG_INF
    best = NEG_INF
    for chain in itertools.product(ps, repeat=n):
        prev = x
        total = 0
        for a, b in chain:
            total = total + dot(b, point_sub(prev, a, G.dim), G.dim)
            prev = a
        fa = evaluate(f, chain[-1][0])
        if not fa.is_finite:
            raise ValueError("anchor outside the domain")
        cand = as_extreal(total + fa.finite())
        if cand > best:
            best = cand
    return best


def smile(f, G: OperatorGraph, x) -> ExtReal:
    """Pair-route constrained envelope: anchors with f(a) <= f(x) only.

    The constraint is dropped when f(x) = +inf, matching smile_value.
    """
    fx = evaluate(f, x)
    best = NEG_INF
    for a, b in G.pairs:
        fa = evaluate(f, a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        if not fx.is_pos_inf and not fa <= fx:
            continue
        cand = as_extreal(fa.finite() + dot(b, point_sub(x, a, G.dim), G.dim))
        if cand > best:
            best = cand
    return best


def smile_eps(f, G: OperatorGraph, x, eps) -> ExtReal:
    """Pair-route relaxed constrained envelope: f(a) <= f(x) + eps."""
    eps = _exactify(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    fx = evaluate(f, x)
    best = NEG_INF
    for a, b in G.pairs:
        fa = evaluate(f, a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        if not fx.is_pos_inf and not fa.finite() <= fx.finite() + eps:
            continue
        cand = as_extreal(fa.finite() + dot(b, point_sub(x, a, G.dim), G.dim))
        if cand > best:
            best = cand
    return best


# ---------------------------------------------------------------------------
# portable hull (sampled route)
# ---------------------------------------------------------------------------


def portable_hull(C: SampledSet, N_samples: OperatorGraph, tol=0):
    """Membership predicate for the set cut out by sampled outward normals.

    Each sample (a, a*) must anchor on C and satisfy <c - a, a*> <= tol for
    every sampled point c, else it is rejected.  The predicate keeps x iff
    <x - a, a*> <= tol for all samples; with no samples everything passes.
    Also returns the sampled points that pass (all of them, by construction:
    the set always contains its own samples).
    """
    if C.dim != N_samples.dim:
        raise ValueError("dimension mismatch")
    cpts = set(C.points)
    for a, b in N_samples.pairs:
        if a not in cpts:
            raise ValueError(f"normal sample anchored off the set: {a!r}")
        for c in C.points:
            if dot(b, point_sub(c, a, C.dim), C.dim) > tol:
                raise ValueError(f"({a!r}, {b!r}) is not an outward normal")

    def member(x):
        return all(
            dot(b, point_sub(x, a, C.dim), C.dim) <= tol for a, b in N_samples.pairs
        )

    passed = tuple(p for p in C.points if member(p))
    return member, SampledSet(C.dim, passed, label=C.label)


def _domain_samples(f, G: OperatorGraph) -> SampledSet:
    pts = []
    if isinstance(f, PLConvex1D):
        dom = effective_domain(f)
        for b in f.breakpoints:
            if dom.contains(b):
                pts.append(b)
    elif isinstance(f, GridFunction):
        pts = [p for p, _v in f.finite_items()]
    else:
        raise TypeError("unsupported function representation")
    seen = set(pts)
    for a, _b in G.pairs:
        if a not in seen:
            seen.add(a)
            pts.append(a)
    return SampledSet(G.dim, tuple(pts))


def portable_envelope(f, G: OperatorGraph, N_dom_samples: OperatorGraph, probes) -> tuple:
    """Value table of the envelope confined to the sampled normal-hull of the
    domain: envelope value inside, +inf outside."""
    env = upper_envelope(f, G)
    member, _ = portable_hull(_domain_samples(f, G), N_dom_samples)
    return tuple(
        (x, env.value_at(x) if member(x) else POS_INF) for x in probes
    )


# ---------------------------------------------------------------------------
# epigraph route
# ---------------------------------------------------------------------------


def epi_normal_graph(f: PLConvex1D, G: OperatorGraph | None = None) -> OperatorGraph:
    """Outward normal samples of the epigraph.

    Each graph pair (a, a*) lifts to the normal (a*, -1) at (a, f(a)).  A
    closed domain wall additionally carries a horizontal normal, which is
    exactly the alpha = 0 case the membership test must ignore.
    """
    if G is None:
        G = subdiff_graph(f)
    pairs = []
    for a, b in G.pairs:
        fa = f.value_at(a)
        if not fa.is_finite:
            raise ValueError(f"anchor {a!r} has no finite value")
        pairs.append(((a, fa.finite()), (b, Fraction(-1))))
    if f.left_recession is None and f.override_left is None:
        pairs.append(
            ((f.breakpoints[0], f.values[0]), (Fraction(-1), Fraction(0)))
        )
    if f.right_recession is None and f.override_right is None:
        pairs.append(
            ((f.breakpoints[-1], f.values[-1]), (Fraction(1), Fraction(0)))
        )
    return OperatorGraph(2, tuple(pairs), label=f.label)


def epi_cup_membership(f: PLConvex1D, G_full: OperatorGraph, point) -> bool:
    """Does (x, v) satisfy every non-horizontal support inequality?

    Samples are validated first: anchors must sit on the graph of f, normals
    may not point upward, and each must support the epigraph at every
    breakpoint and along every recession direction.  Only samples with a
    nonzero vertical component then constrain the answer, and for matching
    pair sets the result equals v >= upper_envelope(f, G)(x).
    """
    if G_full.dim != 2:
        raise ValueError("epigraph samples live in dimension 2")
    x, v = point
    x = _exactify(x)
    v = _exactify(v)
    for (a, t), (astar, alpha) in G_full.pairs:
        fa = f.value_at(a)
        if not fa.is_finite or fa.finite() != t:
            raise ValueError(f"sample anchored off the graph: {(a, t)!r}")
        if alpha > 0:
            raise ValueError("epigraph normals cannot point upward")
        for y in f.breakpoints:
            fy = f.value_at(y)
            if fy.is_finite and (y - a) * astar + (fy.finite() - t) * alpha > 0:
                raise ValueError(f"sample {(a, t, astar, alpha)!r} fails support")
        if f.left_recession is not None and -astar - f.left_recession * alpha > 0:
            raise ValueError("sample fails the left recession direction")
        if f.right_recession is not None and astar + f.right_recession * alpha > 0:
            raise ValueError("sample fails the right recession direction")
    for (a, t), (astar, alpha) in G_full.pairs:
        if alpha == 0:
            continue
        if (x - a) * astar + (v - t) * alpha > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# approximate-subgradient pair search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BrondstedResult:
    """Outcome of the graph scan for a nearby exact pair.

    Distances are carried exactly; ``found`` certifies the renormalized
    bounds (primal gap scaled up by 1 + |x*|, dual gap scaled down by it,
    both at most sqrt(eps)) together with the coupling lower bound
    <x - a, a*> >= -(eps + sqrt(eps)).  Comparisons against sqrt(eps) are
    done on squares, so no roots are ever taken.
    """

    point: object
    dual: object
    found: bool
    primal_gap: Fraction
    dual_gap: Fraction
    scale: Fraction
    product: Fraction

    @property
    def pair(self):
        return (self.point, self.dual)

    def renorm_ok(self, eps) -> bool:
        eps = _exactify(eps)
        return (
            (self.primal_gap * self.scale) ** 2 <= eps
            and self.dual_gap**2 <= eps * self.scale**2
        )

    def product_ok(self, eps) -> bool:
        eps = _exactify(eps)
        t = -(self.product + eps)
        return t <= 0 or t * t <= eps


_NUDGE = Fraction(1, 2**40)


def brondsted_search(f: PLConvex1D, x, xstar, eps) -> BrondstedResult:
    """Scan the exact graph for a pair close to (x, x*) in the scaled norms.

    Candidates are the per-breakpoint dual clamps and the per-segment primal
    clamps; a clamp landing on an endpoint without subgradients steps a hair
    into the segment.  Dual clamps distinguish finite subgradient data from
    unbounded interval ends: finite-data candidates are preferred, and a
    dual point inside an unbounded end is used only when no finite-data
    candidate meets the bounds.  ``found=False`` reports the best failing
    candidate; for lsc convex input that outcome indicates a bug upstream.
    """
    x = _exactify(x)
    xstar = _exactify(xstar)
    eps = _exactify(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not f.value_at(x).is_finite:
        raise ValueError("x is outside the domain")
    if not eps_subdiff_test(f, x, xstar, eps):
        raise ValueError("xstar is not an eps-subgradient at x")
    st = subdiff_structure(f)
    scale = 1 + abs(xstar)

    finite_cands = []
    extended_cands = []
    for a, _v, lo, hi in st.points:
        in_lower_ray = lo is None and (hi is None or xstar < hi)
        in_upper_ray = hi is None and lo is not None and xstar > lo
        if in_lower_ray or in_upper_ray:
            extended_cands.append((a, xstar))
            fin_end = lo if lo is not None else hi
            if fin_end is not None:
                finite_cands.append((a, fin_end))
        else:
            z = xstar
            if lo is not None and z < lo:
                z = lo
            if hi is not None and z > hi:
                z = hi
            finite_cands.append((a, z))

    excluded = set()
    if f.override_left is not None:
        excluded.add(f.breakpoints[0])
    if f.override_right is not None:
        excluded.add(f.breakpoints[-1])
    for xlo, xhi, slope, _rx, _rv in st.segments:
        z = x
        if xlo is not None and z < xlo:
            z = xlo
        if xhi is not None and z > xhi:
            z = xhi
        if z in excluded:
            h = _NUDGE
            if xlo is not None and xhi is not None:
                half = (xhi - xlo) / 2
                if half < h:
                    h = half
            z = z + h if z == xlo else z - h
        finite_cands.append((z, slope))

    def gaps(c):
        a, b = c
        return abs(x - a), abs(xstar - b)

    def ok(c):
        a, b = c
        pg, dg = gaps(c)
        if (pg * scale) ** 2 > eps or dg**2 > eps * scale**2:
            return False
        t = -((x - a) * b + eps)
        return t <= 0 or t * t <= eps

    def key(c):
        pg, dg = gaps(c)
        return max((pg * scale) ** 2, (dg / scale) ** 2)

    chosen = None
    found = False
    for pool in (finite_cands, extended_cands):
        passing = [c for c in pool if ok(c)]
        if passing:
            chosen = min(passing, key=key)
            found = True
            break
    if chosen is None:
        all_cands = finite_cands + extended_cands
        if not all_cands:
            raise ValueError("the subdifferential graph is empty")
        chosen = min(all_cands, key=key)
    a, b = chosen
    return BrondstedResult(
        point=a,
        dual=b,
        found=found,
        primal_gap=abs(x - a),
        dual_gap=abs(xstar - b),
        scale=scale,
        product=(x - a) * b,
    )


# ---------------------------------------------------------------------------
# result container
# ---------------------------------------------------------------------------

_KINDS = ("cup", "sharp", "starcup", "circ", "ncup", "smile", "smileeps")


@dataclass(frozen=True)
class EnvelopeResult:
    """A computed envelope: which one, its carrier, where it came from.

    The carrier is a MaxAffine for the support-sup family and a value table
    (tuple of (probe, ExtReal) rows) for the rest.
    """

    kind: str
    carrier: object
    source: str
    parameters: dict

    def table(self, probes=None) -> tuple:
        if isinstance(self.carrier, MaxAffine):
            if probes is None:
                raise ValueError("a MaxAffine carrier needs probes to tabulate")
            return tuple((x, self.carrier.value_at(x)) for x in probes)
        return tuple(self.carrier)

    def write_csv(self, path, probes=None) -> None:
        rows = self.table(probes)
        dim = self.carrier.dim if isinstance(self.carrier, MaxAffine) else 1
        write_values_csv(path, [r[0] for r in rows], [r[1] for r in rows], dim)

    def write_pieces_csv(self, path) -> None:
        if not isinstance(self.carrier, MaxAffine):
            raise ValueError("only MaxAffine carriers have a piece list")
        from .extreal import format_scalar

        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            if self.carrier.dim == 1:
                fh.write("anchor,slope,level\n")
                for a, s, lv in self.carrier.pieces:
                    fh.write(
                        ",".join(
                            format_scalar(as_extreal(c)) for c in (a, s, lv)
                        )
                        + "\n"
                    )
            else:
                fh.write("anchor1,anchor2,slope1,slope2,level\n")
                for a, s, lv in self.carrier.pieces:
                    cells = (a[0], a[1], s[0], s[1], lv)
                    fh.write(
                        ",".join(format_scalar(as_extreal(c)) for c in cells) + "\n"
                    )


def envelope_result(
    f,
    kind: str,
    probes,
    G: OperatorGraph | None = None,
    n: int | None = None,
    eps=None,
    dual_points=None,
    backend: str = "exact",
) -> EnvelopeResult:
    """Uniform entry point used by the command line.

    The exact backend requires a PLConvex1D and evaluates the interval
    structure; the grid backend works from the (supplied or flattened) pair
    graph.  Kinds: cup, sharp, starcup, circ, ncup, smile, smileeps.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown envelope kind {kind!r}")
    source = getattr(f, "label", None) or type(f).__name__
    params = {"backend": backend}
    exact = backend == "exact"
    if exact and not isinstance(f, PLConvex1D):
        raise TypeError("the exact backend needs a PLConvex1D instance")
    if G is None and not exact:
        if not isinstance(f, PLConvex1D):
            raise TypeError("the grid backend needs a graph or a PLConvex1D")
        G = subdiff_graph(f, probes=probes)
    if exact:
        st = subdiff_structure(f)
        if kind == "cup":
            rows = tuple((p, cup_value(f, p, st=st)) for p in probes)
        elif kind == "sharp":
            hull = portable_hull_interval(effective_domain(f))
            rows = tuple((p, sharp_value(f, p, st=st, hull=hull)) for p in probes)
        elif kind == "starcup":
            g = star_cup_exact(f)
            rows = tuple((p, g.value_at(p)) for p in probes)
        elif kind == "circ":
            g = circ_exact(f)
            rows = tuple((p, g.value_at(p)) for p in probes)
        elif kind == "ncup":
            if n is None:
                raise ValueError("ncup needs n")
            Gx = subdiff_graph(f, probes=probes)
            rows = tuple((p, n_cup(f, Gx, n, _exactify(p))) for p in probes)
            params["n"] = n
        elif kind == "smile":
            rows = tuple((p, smile_value(f, p, st=st)) for p in probes)
        else:
            if eps is None:
                raise ValueError("smileeps needs eps")
            rows = tuple((p, smile_eps_value(f, p, eps, st=st)) for p in probes)
            params["eps"] = eps
    else:
        if kind == "cup":
            env = upper_envelope(f, G)
            return EnvelopeResult("cup", env, source, params)
        if kind == "sharp":
            # without supplied normal samples the sampled hull is everything
            rows = portable_envelope(f, G, OperatorGraph(G.dim, ()), probes)
        elif kind == "starcup":
            rows = tuple((p, star_cup(f, G, p)) for p in probes)
        elif kind == "circ":
            if dual_points is None:
                raise ValueError("circ needs a dual grid")
            rows = circ(f, G, dual_points, probes)
        elif kind == "ncup":
            if n is None:
                raise ValueError("ncup needs n")
            rows = tuple((p, n_cup(f, G, n, p)) for p in probes)
            params["n"] = n
        elif kind == "smile":
            rows = tuple((p, smile(f, G, p)) for p in probes)
        else:
            if eps is None:
                raise ValueError("smileeps needs eps")
            rows = tuple((p, smile_eps(f, G, p, eps)) for p in probes)
            params["eps"] = eps
    return EnvelopeResult(kind, rows, source, params)
