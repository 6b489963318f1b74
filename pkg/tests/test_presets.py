from math import comb

import pytest

from pdedim.presets import (
    PRESET_NAMES,
    PresetParameterError,
    UnknownPreset,
    preset,
    standard_complex_structure,
    standard_symplectic_form,
)
from pdedim.qlinalg import ExactMatrix, rank
from pdedim.spencer import cohomology_dim

from conftest import preset_report

CASES = [
    ("free", {"n": 2, "m": 1}),
    ("free", {"n": 3, "m": 2}),
    ("heat", {}),
    ("laplace", {"n": 2}),
    ("laplace", {"n": 3}),
    ("two_generic_order2", {}),
    ("one_common_characteristic", {}),
    ("symplectic", {"n": 2}),
    ("complex_structure", {"n": 2}),
    ("riemannian", {"n": 2}),
    ("riemannian", {"n": 3}),
]


def nonzero_grid(report):
    grid = report.data["spencer"]["grid"]
    return {(i, j): v for i, row in enumerate(grid) for j, v in enumerate(row) if v}


@pytest.mark.parametrize("name,params", CASES)
def test_report_matches_expected_record(name, params):
    p = preset(name, params)
    rep = preset_report(name, params)
    exp = p.expected
    assert rep.ok, [c for c in rep.cross_checks if c["status"] == "fail"]
    if exp.p is not None:
        assert (rep.p, rep.sigma) == (exp.p, exp.sigma)
    verdicts = {o["order"]: o["involutive"] for o in rep.data["cartan"]["orders"]}
    spencer_verdicts = {o["order"]: o["spencer_involutive"] for o in rep.data["cartan"]["orders"]}
    for order, inv in exp.involutive.items():
        assert verdicts[order] is inv and spencer_verdicts[order] is inv
    if exp.spencer_nonzero is not None:
        assert nonzero_grid(rep) == dict(exp.spencer_nonzero)
    if exp.gci is not None:
        assert rep.data["gci"]["is_gci"] is exp.gci


def test_one_common_characteristic_caveat():
    p = preset("one_common_characteristic")
    assert "compatib" in p.expected.note
    rep = preset_report("one_common_characteristic")
    assert rep.p == 1 and rep.sigma == 1


@pytest.mark.parametrize("n", [2, 4])
def test_complex_structure_dimension_and_rank(n):
    rep = preset_report("complex_structure", {"n": n})
    assert (rep.p, rep.sigma) == (n // 2, n)


@pytest.mark.parametrize("n", [2, 4])
def test_symplectic_spencer_row(n):
    rep = preset_report("symplectic", {"n": n})
    assert nonzero_grid(rep) == {(0, i): comb(n, i + 1) for i in range(n)}
    assert rep.data["first_order_rank_sigma"] == 1


@pytest.mark.parametrize("n,curv", [(2, 1), (3, 6), (4, 20)])
def test_riemannian_curvature_dimension(n, curv):
    sys = preset("riemannian", {"n": n}).system
    assert cohomology_dim(sys, 1, 2) == curv == n * n * (n * n - 1) // 12
    assert sys.component(2).dim == 0


def test_standard_forms_are_nondegenerate():
    for n in (2, 4, 6):
        w = standard_symplectic_form(n)
        assert all(w[a][b] == -w[b][a] for a in range(n) for b in range(n))
        assert rank(ExactMatrix.from_rows(w)) == n
        J = standard_complex_structure(n)
        JJ = [[sum(J[a][c] * J[c][b] for c in range(n)) for b in range(n)] for a in range(n)]
        assert JJ == [[-int(a == b) for b in range(n)] for a in range(n)]


def test_unknown_preset():
    with pytest.raises(UnknownPreset, match="heat"):
        preset("wave")


@pytest.mark.parametrize("name,params", [
    ("symplectic", {"n": 3}),
    ("complex_structure", {"n": 0}),
    ("riemannian", {"n": 1}),
    ("laplace", {"n": 0}),
    ("heat", {"n": 2}),
    ("free", {"k": 1}),
])
def test_bad_parameters(name, params):
    with pytest.raises(PresetParameterError):
        preset(name, params)


def test_all_names_build_with_defaults():
    for name in PRESET_NAMES:
        p = preset(name)
        assert p.name == name and p.system.name == name
