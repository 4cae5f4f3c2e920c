from dataclasses import replace
from fractions import Fraction as F

import pytest

from envcalc.extreal import as_extreal
from envcalc.funcrep import GridFunction, Interval1D, PLConvex1D, lsc_defect, pl_equal
from envcalc.operators import grid_subdiff_test, subdiff_exact, subdiff_test
from envcalc.envelopes import circ_exact
from envcalc.theoremlab import (
    FAMILIES,
    GALLERY_NAMES,
    InstanceGenerator,
    REGISTRY,
    SuiteReport,
    gallery,
    run_check,
    run_suite,
)

from test_funcrep import ABS

EXPECTED_IDS = [
    "ba.density",
    "dfdom.e3",
    "dfdom.i",
    "dfdom.ineq",
    "dfdom.iv",
    "fcirc.i",
    "fcirc.ii",
    "fcirc.iii",
    "fcirc.iv",
    "fcirc.v",
    "fcupdiez.i",
    "fcupdiez.iii",
    "fcupdiez.iv",
    "fcupdiez.ix",
    "fcupdiez.v",
    "fcupdiez.viii",
    "fsp.i",
    "fsp.ii",
    "fsp.iii",
    "fspeps.ii",
    "fspeps.iii",
    "fspeps.iv",
    "maxcup",
    "maxsdsp.closure",
    "maxsdsp.ii",
    "maxsdsp.iii",
    "maxsdsp.iv",
    "maxsdsp.v",
    "maxsdsp.vi",
    "maxsdsp.vii",
    "ncfitz",
    "spxstar",
]


# ---------------------------------------------------------------------------
# registry and single checks
# ---------------------------------------------------------------------------


def test_registry_ids_are_stable():
    assert sorted(REGISTRY) == EXPECTED_IDS


def test_run_check_unknown_id():
    with pytest.raises(KeyError):
        run_check("nope.i", ABS)


def test_run_check_type_mismatch_is_not_applicable():
    c = run_check("ncfitz", ABS)
    assert c.verdict == "not-applicable"
    assert c.ok


def test_run_check_pass_on_matching_instance():
    c = run_check("maxcup", ABS)
    assert c.verdict == "pass"
    assert c.theorem_id == "maxcup"


def test_lsc_gated_checks_skip_raised_instances():
    f = PLConvex1D((F(0), F(1)), (F(0), F(1)), None, None, F(2), None)
    for tid in ("fcirc.iii", "fcirc.iv", "maxcup", "maxsdsp.ii"):
        assert run_check(tid, f).verdict == "not-applicable"


def test_raised_endpoint_breaks_domain_identity():
    # what the gate protects against: double conjugation restores the
    # endpoint's subgradients while the raised function has none there
    f = PLConvex1D((F(0), F(1)), (F(0), F(1)), None, None, F(2), None)
    assert subdiff_exact(f, F(0)) is None
    assert subdiff_exact(circ_exact(f), F(0)) is not None


# ---------------------------------------------------------------------------
# the grid shadow of the continuity item
# ---------------------------------------------------------------------------


def test_grid_shadow_passes_both_ways():
    convex = GridFunction(1, (0.0, 1.0, 2.0, 3.0), (0.0, 0.2, 1.0, 2.5))
    assert run_check("dfdom.iv", convex).verdict == "pass"
    bump = GridFunction(1, (0.0, 1.0, 2.0), (0.0, 3.0, 0.0))
    assert run_check("dfdom.iv", bump).verdict == "pass"


def test_grid_shadow_is_one_dimensional():
    g = GridFunction(2, ((0.0, 0.0), (1.0, 0.0)), (0.0, 1.0))
    assert run_check("dfdom.iv", g).verdict == "not-applicable"


# ---------------------------------------------------------------------------
# seeded suites
# ---------------------------------------------------------------------------


def test_suite_is_deterministic():
    a = run_suite(seed=5, n_instances=2)
    b = run_suite(seed=5, n_instances=2)
    assert a.text() == b.text()
    assert a.all_ok


def test_suite_counts_add_up():
    r = run_suite(seed=3, n_instances=2)
    assert r.n_pass + r.n_fail + r.n_not_applicable == len(r.checks)
    assert r.n_fail == 0


def test_suite_rejects_unknown_ids():
    with pytest.raises(KeyError):
        run_suite(seed=0, n_instances=1, theorem_ids=("maxcup", "bogus"))


def test_suite_empty_selection():
    r = run_suite(seed=0, n_instances=1, theorem_ids=())
    assert r.checks == ()
    assert r.all_ok


def test_suite_csv_shape(tmp_path):
    r = run_suite(seed=2, n_instances=1, theorem_ids=("maxcup", "ncfitz"))
    p = tmp_path / "report.csv"
    r.write_csv(p)
    raw = p.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "theorem_id,instance_id,verdict,margin,tolerance,backend"
    assert len(lines) == len(r.checks) + 1
    r.write_csv(tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == raw


def test_generator_families_and_determinism():
    assert FAMILIES == (
        "pl-convex",
        "pl-convex-with-override",
        "grid-nonconvex",
        "indicator-set",
        "operator-graph",
    )
    a = InstanceGenerator(7).generate("pl-convex", 3)
    b = InstanceGenerator(7).generate("pl-convex", 3)
    assert a == b
    with pytest.raises(ValueError):
        InstanceGenerator(0).generate("no-such-family", 1)


def test_generator_family_shapes():
    gen = InstanceGenerator(11)
    for f in gen.generate("pl-convex", 4):
        assert isinstance(f, PLConvex1D) and not lsc_defect(f)
    for f in gen.generate("pl-convex-with-override", 4, tiny_defect=True):
        pts = lsc_defect(f)
        assert pts
        for p in pts:
            gap = f.value_at(p).finite() - f.closure().value_at(p).finite()
            assert 0 < gap <= F(9, 10**6)
    for g in gen.generate("grid-nonconvex", 3):
        assert isinstance(g, GridFunction) and g.dim == 1
    for s in gen.generate("indicator-set", 3):
        assert isinstance(s, Interval1D)


# ---------------------------------------------------------------------------
# galleries
# ---------------------------------------------------------------------------


def test_gallery_names_and_unknown():
    assert GALLERY_NAMES == (
        "quadratic",
        "open-interval",
        "half-circle",
        "two-patch",
        "quadrant",
    )
    with pytest.raises(KeyError):
        gallery("nope")


@pytest.mark.parametrize("name", GALLERY_NAMES)
def test_every_gallery_reproduces_its_verdicts(name):
    g = gallery(name)
    assert g.checks
    for c in g.checks:
        assert c.verdict == "pass", c.theorem_id


def test_half_circle_objects():
    g = gallery("half-circle")
    f = g.objects["instance"]
    assert lsc_defect(f) == [F(-1), F(1)]
    v = g.objects["verdict"]
    assert v.is_maximal and v.checked == 401 and v.related >= 51


def test_two_patch_objects():
    g = gallery("two-patch")
    hull = g.objects["hull"]
    assert pl_equal(hull, PLConvex1D((F(0), F(2)), (F(0), F(0))))
    x, s = g.objects["witness"]
    assert (x, s) == (0.5, 0.0)
    assert subdiff_test(hull, F(1, 2), F(0))
    assert not grid_subdiff_test(g.objects["instance"], x, s)


def test_quadrant_objects():
    g = gallery("quadrant")
    assert g.objects["graph"].pairs
    assert g.objects["f"].dim == 2 and g.objects["g"].dim == 2


# ---------------------------------------------------------------------------
# seeded-bug detection: mutations flip gallery verdicts
# ---------------------------------------------------------------------------


def test_removing_the_raise_flips_the_defect_verdict():
    f = gallery("half-circle").objects["instance"]
    healed = replace(f, override_left=None, override_right=None)
    assert lsc_defect(f) and not lsc_defect(healed)


def test_filling_the_puncture_flips_strict_inclusion():
    g = gallery("two-patch")
    inst = g.objects["instance"]
    x, s = g.objects["witness"]
    filled = GridFunction(1, inst.points, tuple(0.0 for _ in inst.points))
    assert not grid_subdiff_test(inst, x, s)
    assert grid_subdiff_test(filled, x, s)


def test_dropping_the_coupling_term_breaks_the_bound():
    # the sup of <x,b> + <a,y> alone exceeds f(x) + f*(y); only the full
    # coupled form stays below it
    from envcalc.operators import fitzpatrick, subdiff_graph
    from envcalc.transforms import conjugate_exact

    G = subdiff_graph(ABS)
    x = y = F(1)
    bound = ABS.value_at(x).finite() + conjugate_exact(ABS).value_at(y).finite()
    assert fitzpatrick(G, x, y) <= bound
    dropped = max(x * b + a * y for a, b in G.pairs)
    assert dropped > bound
