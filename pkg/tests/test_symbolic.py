import random
import threading
from fractions import Fraction

import pytest

from pdedim.presets import preset
from pdedim.qlinalg import Subspace
from pdedim.symbolic import (
    EquationSymbol,
    InvalidSystem,
    ResourceLimitExceeded,
    SymbolicSystem,
    component,
    directional_delta,
    new_system,
    order_profile,
    prolong,
    prolong_by_intersection,
)

from oracles import prolong_oracle

HEAT_EQ = EquationSymbol(2, {((0, 2), 0): Fraction(-1)})

SMALL_PRESETS = [
    ("free", {"n": 2, "m": 2}),
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


def rows(sub):
    return sub.basis.tolist()


# --- construction ------------------------------------------------------------


def test_heat_system_is_valid():
    sys = new_system(2, 1, [HEAT_EQ])
    assert sys.max_order == 2 and sys.equation_orders == [2]


def test_empty_system_is_free():
    sys = new_system(2, 1, [])
    assert [sys.component(k).is_full() for k in range(5)] == [True] * 5


def test_zero_equation_rejected():
    with pytest.raises(InvalidSystem):
        EquationSymbol(2, {((2, 0), 0): Fraction(0)})
    with pytest.raises(InvalidSystem):
        EquationSymbol(1, {})


def test_order_zero_rejected():
    eq = EquationSymbol(0, {((0, 0), 0): Fraction(1)})
    with pytest.raises(InvalidSystem):
        new_system(2, 1, [eq])


def test_bad_dependent_index_rejected():
    with pytest.raises(InvalidSystem):
        new_system(2, 1, [EquationSymbol(1, {((1, 0), 1): Fraction(1)})])


def test_bad_exponent_length_rejected():
    with pytest.raises(InvalidSystem):
        new_system(3, 1, [EquationSymbol(1, {((1, 0), 0): Fraction(1)})])


def test_mixed_degree_terms_rejected_with_principal_symbol_message():
    with pytest.raises(InvalidSystem, match="principal symbol"):
        EquationSymbol(2, {((0, 2), 0): Fraction(-1), ((1, 0), 0): Fraction(1)})


def test_bad_counts_rejected():
    with pytest.raises(InvalidSystem):
        SymbolicSystem(0, 1)
    with pytest.raises(InvalidSystem):
        SymbolicSystem(1, 0)


def test_constraint_row_round_trip():
    eq = EquationSymbol(2, {((2, 0), 0): Fraction(1, 3), ((1, 1), 1): Fraction(-2)})
    back = EquationSymbol.from_constraint(2, eq.constraint_row(2, 2), 2, 2)
    assert back == eq


# --- directional derivatives -------------------------------------------------


def test_directional_delta_square():
    # x1^2 with v = e1 gives 2 x1
    assert directional_delta([1, 0, 0], [1, 0], 2, 1, 2) == [2, 0]


def test_directional_delta_product():
    # x1 x2 with v = e1 gives x2
    assert directional_delta([0, 1, 0], [1, 0], 2, 1, 2) == [0, 1]


def test_directional_delta_commute():
    rng = random.Random(3)
    for _ in range(10):
        p = [rng.randint(-3, 3) for _ in range(10)]
        v = [rng.randint(-3, 3) for _ in range(3)]
        w = [rng.randint(-3, 3) for _ in range(3)]
        vw = directional_delta(directional_delta(p, w, 3, 1, 3), v, 3, 1, 2)
        wv = directional_delta(directional_delta(p, v, 3, 1, 3), w, 3, 1, 2)
        assert vw == wv


def test_directional_delta_degree_zero():
    with pytest.raises(ValueError):
        directional_delta([1], [1, 0], 2, 1, 0)


# --- prolongation ------------------------------------------------------------


def test_prolong_full_and_zero():
    assert prolong(Subspace.full(3), 2, 1, 2).is_full()
    assert prolong(Subspace.zero(3), 2, 1, 2).dim == 0


def test_heat_components():
    sys = new_system(2, 1, [HEAT_EQ])
    # monomials (2,0),(1,1),(0,2): the relation removes x^2
    assert rows(sys.component(2)) == [[1, 0, 0], [0, 1, 0]]
    assert rows(sys.component(3)) == [[1, 0, 0, 0], [0, 1, 0, 0]]


def test_heat_prolongation_matches_oracle():
    g2 = new_system(2, 1, [HEAT_EQ]).component(2)
    assert rows(prolong(g2, 2, 1, 2)) == prolong_oracle(rows(g2), 2, 1, 2)


def test_laplace_component_three():
    assert preset("laplace", {"n": 2}).system.component(3).dim == 2


def test_symplectic_second_component():
    assert preset("symplectic", {"n": 2}).system.component(2).dim == 4


def test_component_function_matches_method():
    sys = new_system(2, 1, [HEAT_EQ])
    assert component(sys, 3) == sys.component(3)


@pytest.mark.parametrize("name,params", SMALL_PRESETS)
def test_prolongation_routes_agree(name, params):
    sys = preset(name, params).system
    for k in range(1, 5):
        g = sys.component(k)
        ann = prolong(g, sys.n, sys.m, k, method="annihilator")
        assert prolong(g, sys.n, sys.m, k, method="symmetry") == ann
        assert prolong_by_intersection(g, sys.n, sys.m, k) == ann
        if g.ambient_dim <= 40:
            assert rows(ann) == prolong_oracle(rows(g), sys.n, sys.m, k)


@pytest.mark.parametrize("name,params", SMALL_PRESETS)
def test_component_contained_in_prolongation(name, params):
    sys = preset(name, params).system
    for k in range(1, 6):
        assert sys.component(k).issubspace(sys.prolonged(k))


@pytest.mark.parametrize("name,params", SMALL_PRESETS)
def test_components_are_prolongations_above_top_order(name, params):
    sys = preset(name, params).system
    for k in range(sys.max_order + 1, 7):
        assert sys.component(k) == prolong(sys.component(k - 1), sys.n, sys.m, k - 1)


def test_mixed_orders_full_below_minimal_order():
    eqs = [EquationSymbol(2, {((2, 0), 0): Fraction(1)}), EquationSymbol(3, {((0, 3), 0): Fraction(1)})]
    sys = new_system(2, 1, eqs)
    assert sys.component(1).is_full()
    assert sys.component(2).dim == 2
    # prolongation of {xy, y^2} is {xy^2, y^3}; y^3 = 0 leaves one
    assert sys.component(3).dim == 1


def test_unknown_prolongation_method():
    with pytest.raises(ValueError):
        prolong(Subspace.span([[1, 0, 0]]), 2, 1, 2, method="magic")


# --- order profile -----------------------------------------------------------


def test_order_profile_heat():
    prof = order_profile(new_system(2, 1, [HEAT_EQ]), 4)
    assert prof.orders == ((2, 1),) and prof.codim == 1


def test_order_profile_free():
    prof = order_profile(new_system(3, 2, []), 4)
    assert prof.orders == () and prof.codim == 0


def test_order_profile_symplectic():
    prof = order_profile(preset("symplectic", {"n": 2}).system, 3)
    assert prof.orders == ((1, 1),) and prof.codim == 1


@pytest.mark.parametrize("r", [1, 2, 3])
def test_single_equation_has_codim_one(r):
    eq = EquationSymbol(r, {((r, 0, 0), 0): Fraction(1)})
    prof = order_profile(new_system(3, 1, [eq]), r + 2)
    assert prof.orders == ((r, 1),) and prof.codim == 1


# --- limits, caching, threads -----------------------------------------------


def test_resource_limit():
    # dim S^3 ⊗ N = 80, dim S^4 ⊗ N = 140
    sys = SymbolicSystem(4, 4, [], limit_basis=100)
    sys.component(3)
    with pytest.raises(ResourceLimitExceeded, match="limit-basis"):
        sys.component(4)


def test_concurrent_extension_matches_sequential():
    ref = preset("riemannian", {"n": 3}).system
    expected = [ref.component(k) for k in range(6)]
    shared = preset("riemannian", {"n": 3}).system
    results = {}

    def work(i):
        results[i] = [shared.component(k) for k in range(6)]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == expected for r in results.values())


def test_generated_by_starts_at_k():
    sys = preset("two_generic_order2").system
    aux = sys.generated_by(2)
    assert aux.component(1).is_full()
    assert aux.component(2) == sys.component(2)
    for k in range(3, 6):
        assert aux.component(k) == prolong(aux.component(k - 1), 2, 1, k - 1)
