"""Operator graphs, subdifferentials, monotonicity, Fitzpatrick functions.

The exact backend carries two views of a subdifferential.  The flattened
``OperatorGraph`` is a finite pair list (what serialization, monotonicity and
pair-based suprema work on).  The attached ``SubdiffStructure1D`` keeps the
full continuum: a slope interval per breakpoint and a constant slope per open
segment, with ``None`` standing for an unbounded interval end at a domain
wall.  Envelope suprema need the structure; everything it asserts can be
cross-checked against the inequality-based membership test below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .extreal import ExtReal, NEG_INF, as_extreal, ext_sup
from .funcrep import GridFunction, Interval1D, PLConvex1D, _frac, dot, point_sub
from .transforms import conjugate_exact, indicator


@dataclass(frozen=True)
class SubdiffStructure1D:
    """Exact graph of the subdifferential of a piecewise-linear convex f.

    ``points`` holds (a, value, lo, hi): at breakpoint a (closure value
    attached) the subgradients form the interval [lo, hi], where None means
    the interval runs to -inf (left wall) or +inf (right wall).  ``segments``
    holds (xlo, xhi, slope, ref_x, ref_v): on the open interval (xlo, xhi)
    the subdifferential is the singleton {slope}, and the function restricted
    there is the line through (ref_x, ref_v); None interval ends mark
    recession rays.  Breakpoints with a raised (non-lsc) value have empty
    subdifferential and appear in neither list.
    """

    func: PLConvex1D
    points: tuple
    segments: tuple


def subdiff_structure(f: PLConvex1D) -> SubdiffStructure1D:
    if not isinstance(f, PLConvex1D):
        raise TypeError("subdiff_structure takes a PLConvex1D")
    b, v = f.breakpoints, f.values
    s = f.slopes()
    m = len(s)
    points = []
    for i in range(len(b)):
        if i == 0 and f.override_left is not None:
            continue
        if i == len(b) - 1 and f.override_right is not None:
            continue
        lo = s[i - 1] if i >= 1 else f.left_recession
        hi = s[i] if i < m else f.right_recession
        points.append((b[i], v[i], lo, hi))
    segments = [(b[i], b[i + 1], s[i], b[i], v[i]) for i in range(m)]
    if f.left_recession is not None:
        segments.insert(0, (None, b[0], f.left_recession, b[0], v[0]))
    if f.right_recession is not None:
        segments.append((b[-1], None, f.right_recession, b[-1], v[-1]))
    return SubdiffStructure1D(f, tuple(points), tuple(segments))


def subdiff_exact(f: PLConvex1D, x) -> Interval1D | None:
    """The subgradient interval at x, or None when it is empty."""
    x = _frac(x)
    b = f.breakpoints
    s = f.slopes()
    if x < b[0]:
        if f.left_recession is None:
            return None
        return Interval1D(f.left_recession, f.left_recession)
    if x > b[-1]:
        if f.right_recession is None:
            return None
        return Interval1D(f.right_recession, f.right_recession)
    if x == b[0] and f.override_left is not None:
        return None
    if x == b[-1] and f.override_right is not None:
        return None
    for i, bi in enumerate(b):
        if x == bi:
            lo = s[i - 1] if i >= 1 else f.left_recession
            hi = s[i] if i < len(s) else f.right_recession
            return Interval1D(lo, hi)
        if x < bi:
            return Interval1D(s[i - 1], s[i - 1])
    raise AssertionError("unreachable")


def subdiff_test(f: PLConvex1D, x, xstar) -> bool:
    """Inequality route: f(y) >= f(x) + xstar*(y-x) checked at every
    breakpoint plus both recession directions.  Independent of the interval
    arithmetic in subdiff_exact on purpose."""
    x = _frac(x)
    xstar = _frac(xstar)
    fx = f.value_at(x)
    if not fx.is_finite:
        return False
    fx = fx.finite()
    for y in f.breakpoints:
        fy = f.value_at(y)
        if fy.is_finite and fy.finite() < fx + xstar * (y - x):
            return False
    if f.left_recession is not None and xstar < f.left_recession:
        return False
    if f.right_recession is not None and xstar > f.right_recession:
        return False
    return True


def grid_subdiff_test(f: GridFunction, a, astar, tol=0) -> bool:
    """Sampled-backend membership: the affine minorant anchored at (a, f(a))
    stays below every finite sample, within tol."""
    fa = f.value_at(a)
    if not fa.is_finite:
        return False
    fa = fa.finite()
    for y, fy in f.finite_items():
        if fy < fa + dot(astar, point_sub(y, a, f.dim), f.dim) - tol:
            return False
    return True


def eps_subdiff_test(f: PLConvex1D, x, xstar, eps) -> bool:
    """Approximate subgradient membership via the conjugate gap:
    f(x) + f*(xstar) <= x*xstar + eps."""
    eps = _frac(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    x = _frac(x)
    xstar = _frac(xstar)
    fx = f.value_at(x)
    if not fx.is_finite:
        return False
    fstar = conjugate_exact(f).value_at(xstar)
    if fstar.is_pos_inf:
        return False
    return fx.finite() + fstar.finite() <= x * xstar + eps


def eps_subdiff_interval(f: PLConvex1D, x, eps) -> Interval1D | None:
    """The full set of eps-subgradients at x, as an exact interval.

    It is the eps-sublevel set of the tilted conjugate y -> f*(y) - x*y
    shifted by f(x), so the interval solver on that function does the work.
    """
    from .funcrep import level_set

    eps = _frac(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    x = _frac(x)
    fx = f.value_at(x)
    if not fx.is_finite:
        return None
    g = conjugate_exact(f).tilt(x)
    return level_set(g, eps - fx.finite())


def normal_cone(C: Interval1D, x) -> Interval1D:
    """Outward normals to an interval at a member point; errors off the set."""
    if not isinstance(C, Interval1D):
        raise TypeError("normal_cone takes an Interval1D")
    x = _frac(x)
    if not C.contains(x):
        raise ValueError(f"{x} is not in the set")
    nd = subdiff_exact(indicator(C), x)
    assert nd is not None  # contains(x) rules the empty cases out
    return nd


# ---------------------------------------------------------------------------
# operator graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorGraph:
    """Finite list of (point, dual point) pairs, optionally backed by the
    exact structure it was flattened from."""

    dim: int
    pairs: tuple
    label: str | None = None
    structure: SubdiffStructure1D | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        seen = set()
        canon = []
        for x, y in self.pairs:
            key = (x, y)
            if key not in seen:
                seen.add(key)
                canon.append(key)
        object.__setattr__(self, "pairs", tuple(canon))

    def restrict(self, keep) -> "OperatorGraph":
        """Sub-graph with the pairs selected by the predicate; the exact
        structure no longer describes it and is dropped."""
        return OperatorGraph(
            self.dim, tuple(p for p in self.pairs if keep(p)), label=self.label
        )


def subdiff_graph(
    f: PLConvex1D,
    probes=(),
    kink_reps: int = 3,
    ray_steps: int = 3,
) -> OperatorGraph:
    """Flatten the subdifferential to finite pairs.

    Per breakpoint: both finite interval endpoints, evenly spaced interior
    representatives, and outward unit steps where the interval is unbounded.
    Per segment: the midpoint (finite) or a unit step into each ray, plus a
    pair for every supplied probe that lands in a segment interior.
    """
    st = subdiff_structure(f)
    pairs = set()
    for a, _v, lo, hi in st.points:
        if lo is not None and hi is not None:
            pairs.add((a, lo))
            pairs.add((a, hi))
            if lo < hi:
                for k in range(1, kink_reps + 1):
                    pairs.add((a, lo + Fraction(k, kink_reps + 1) * (hi - lo)))
        elif lo is None and hi is None:
            for k in range(-ray_steps, ray_steps + 1):
                pairs.add((a, Fraction(k)))
        elif lo is None:
            for k in range(ray_steps + 1):
                pairs.add((a, hi - k))
        else:
            for k in range(ray_steps + 1):
                pairs.add((a, lo + k))
    for xlo, xhi, slope, _rx, _rv in st.segments:
        if xlo is not None and xhi is not None:
            pairs.add(((xlo + xhi) / 2, slope))
        elif xlo is None:
            pairs.add((xhi - 1, slope))
        else:
            pairs.add((xlo + 1, slope))
    for p in probes:
        p = _exactify(p)
        for xlo, xhi, slope, _rx, _rv in st.segments:
            if (xlo is None or p > xlo) and (xhi is None or p < xhi):
                pairs.add((p, slope))
    return OperatorGraph(1, tuple(sorted(pairs)), label=f.label, structure=st)


def _exactify(x):
    # floats are promoted to the exact rational they denote; no rounding.
    if isinstance(x, float):
        return Fraction(x)
    return _frac(x)


def structure_contains(st: SubdiffStructure1D, x, xstar) -> bool:
    """Exact membership of (x, xstar) in the full subdifferential graph."""
    iv = subdiff_exact(st.func, _exactify(x))
    return iv is not None and iv.contains(_exactify(xstar))


def is_monotone(G: OperatorGraph, tol=0) -> bool:
    """Every pair of pairs satisfies <x1-x2, y1-y2> >= -tol."""
    ps = G.pairs
    for i in range(len(ps)):
        x1, y1 = ps[i]
        for j in range(i + 1, len(ps)):
            x2, y2 = ps[j]
            if dot(point_sub(x1, x2, G.dim), point_sub(y1, y2, G.dim), G.dim) < -tol:
                return False
    return True


@dataclass(frozen=True)
class MaximalityVerdict:
    is_maximal: bool
    witness: tuple | None
    related: int
    checked: int


def is_maximal_relative(G: OperatorGraph, candidates, tol=0) -> MaximalityVerdict:
    """Probe maximality on a finite candidate window.

    A candidate monotonically related to every pair of G but lying outside
    the graph witnesses that G has a proper monotone extension.  Membership
    uses the exact structure when present, else the flattened pair list.
    """
    related = 0
    witness = None
    checked = 0
    for cand in candidates:
        checked += 1
        cx, cy = cand
        ok = all(
            dot(point_sub(cx, x, G.dim), point_sub(cy, y, G.dim), G.dim) >= -tol
            for x, y in G.pairs
        )
        if not ok:
            continue
        related += 1
        if G.structure is not None:
            member = structure_contains(G.structure, cx, cy)
        else:
            member = (cx, cy) in set(G.pairs)
        if not member and witness is None:
            witness = (cx, cy)
    return MaximalityVerdict(witness is None, witness, related, checked)


def fitzpatrick(G: OperatorGraph, x, xstar) -> ExtReal:
    """sup over graph pairs (a, b) of <x - a, b> + <a, xstar>; the empty
    graph gives -inf by the supremum convention."""
    return ext_sup(
        dot(point_sub(x, a, G.dim), b, G.dim) + dot(a, xstar, G.dim)
        for a, b in G.pairs
    )


def fitzpatrick_structured(st: SubdiffStructure1D, x, xstar) -> ExtReal:
    """Fitzpatrick value over the full 1D subdifferential, not a flattening.

    Per breakpoint the inner sup is linear in the subgradient, so it sits at
    an interval end (or diverges on an unbounded end).  Along a segment every
    anchor carries the same slope and the term is linear in the anchor, so
    again only the segment ends matter; open ends still yield the closure
    value because the sup need not be attained.
    """
    from .extreal import POS_INF

    x = _exactify(x)
    xstar = _exactify(xstar)
    best = NEG_INF
    for a, _v, lo, hi in st.points:
        coef = x - a
        if coef > 0:
            cand = POS_INF if hi is None else as_extreal(coef * hi + a * xstar)
        elif coef < 0:
            cand = POS_INF if lo is None else as_extreal(coef * lo + a * xstar)
        else:
            cand = as_extreal(a * xstar)
        if cand > best:
            best = cand
        if best.is_pos_inf:
            return best
    for xlo, xhi, slope, _rx, _rv in st.segments:
        coef = xstar - slope
        if coef > 0:
            cand = POS_INF if xhi is None else as_extreal(slope * x + coef * xhi)
        elif coef < 0:
            cand = POS_INF if xlo is None else as_extreal(slope * x + coef * xlo)
        else:
            cand = as_extreal(slope * x)
        if cand > best:
            best = cand
        if best.is_pos_inf:
            return best
    return best


def ni_check(G: OperatorGraph, probe_pairs) -> ExtReal:
    """Minimum over probes of the Fitzpatrick margin phi(x, x*) - <x, x*>.

    Nonnegative margins are the numerical face of the negative-infimum
    property; a genuinely negative margin certifies its failure on the
    sampled window.
    """
    best = None
    for x, xstar in probe_pairs:
        margin = fitzpatrick(G, x, xstar) - dot(x, xstar, G.dim)
        if best is None or margin < best:
            best = margin
    if best is None:
        raise ValueError("need at least one probe pair")
    return best


def ni_nonneg(G: OperatorGraph, probe_pairs) -> bool:
    """True iff the Fitzpatrick margin is >= 0 at every probe pair.

    The margin rewrites as sup over graph pairs of <x - a, b - xstar>, so a
    single pair with nonnegative product settles a probe; that short-circuit
    makes large probe batteries cheap.  Agrees with ni_check >= 0.
    """
    count = 0
    for x, xstar in probe_pairs:
        count += 1
        if not any(
            dot(point_sub(x, a, G.dim), point_sub(b, xstar, G.dim), G.dim) >= 0
            for a, b in G.pairs
        ):
            return False
    if count == 0:
        raise ValueError("need at least one probe pair")
    return True


def write_graph_csv(path, G: OperatorGraph) -> None:
    from .extreal import format_scalar

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if G.dim == 1:
            fh.write("x,xstar\n")
            for x, y in sorted(G.pairs):
                fh.write(f"{format_scalar(as_extreal(x))},{format_scalar(as_extreal(y))}\n")
        else:
            fh.write("x1,x2,xstar1,xstar2\n")
            for x, y in sorted(G.pairs):
                cells = [x[0], x[1], y[0], y[1]]
                fh.write(",".join(format_scalar(as_extreal(c)) for c in cells) + "\n")


def graph_dump(G: OperatorGraph) -> dict:
    """JSON-ready description of a finite pair graph.

    Scalars keep their spelling through format_scalar, so exact pairs
    round-trip exactly and float pairs round-trip via repr.
    """
    from .extreal import format_scalar

    def enc(p):
        if G.dim == 1:
            return format_scalar(as_extreal(p))
        return [format_scalar(as_extreal(c)) for c in p]

    out = {
        "kind": "opgraph",
        "dim": G.dim,
        "pairs": [[enc(x), enc(y)] for x, y in G.pairs],
    }
    if G.label is not None:
        out["label"] = G.label
    return out


def graph_load(src) -> OperatorGraph:
    from .extreal import parse_scalar

    if not isinstance(src, dict) or src.get("kind") != "opgraph":
        raise ValueError("not an operator-graph description")
    dim = int(src["dim"])

    def dec(e):
        if dim == 1:
            return parse_scalar(e).finite()
        return tuple(parse_scalar(c).finite() for c in e)

    pairs = tuple((dec(x), dec(y)) for x, y in src["pairs"])
    return OperatorGraph(dim, pairs, label=src.get("label"))
