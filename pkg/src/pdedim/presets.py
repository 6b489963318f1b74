"""Built-in symbol systems with their known invariants.

The geometric presets (symplectic, complex, Riemannian) are symbols of the
infinitesimal automorphism equations: g_1 ⊂ T* ⊗ T is given by linear
equations on the matrix entries A^j_a of an endomorphism, with the monomial
x_a carrying the input index a and the dependent index carrying j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Mapping

from .symbolic import EquationSymbol, SymbolicSystem


class UnknownPreset(KeyError):
    pass


class PresetParameterError(ValueError):
    pass


@dataclass(frozen=True)
class Expected:
    p: int | None = None
    sigma: int | None = None
    # verdicts keyed by order in ord(g)
    involutive: Mapping[int, bool] = field(default_factory=dict)
    spencer_nonzero: Mapping[tuple[int, int], int] | None = None
    gci: bool | None = None
    note: str = ""


@dataclass(frozen=True)
class Preset:
    name: str
    parameters: Mapping[str, int]
    system: SymbolicSystem
    expected: Expected


def _unit(n: int, a: int) -> tuple[int, ...]:
    return tuple(int(i == a) for i in range(n))


def _first_order(n: int, m: int, rows: list[dict[tuple[int, int], int]]) -> list[EquationSymbol]:
    """Equations Σ c·A^j_a = 0 given as {(a, j): c}; zero rows are skipped."""
    eqs = []
    for r in rows:
        coeffs = {(_unit(n, a), j): Fraction(c) for (a, j), c in r.items() if c}
        if coeffs:
            eqs.append(EquationSymbol(1, coeffs))
    return eqs


def standard_symplectic_form(n: int) -> list[list[int]]:
    w = [[0] * n for _ in range(n)]
    h = n // 2
    for i in range(h):
        w[i][h + i] = 1
        w[h + i][i] = -1
    return w


def standard_complex_structure(n: int) -> list[list[int]]:
    J = [[0] * n for _ in range(n)]
    h = n // 2
    for i in range(h):
        J[h + i][i] = 1
        J[i][h + i] = -1
    return J


def _require_even(name: str, n: int) -> None:
    if n < 2 or n % 2:
        raise PresetParameterError(f"{name} needs an even n >= 2, got {n}")


def free(n: int = 2, m: int = 1) -> Preset:
    return Preset("free", {"n": n, "m": m}, SymbolicSystem(n, m, [], name="free"),
                  Expected(p=n, sigma=m, spencer_nonzero={(0, 0): m}, note="no equations"))


def heat() -> Preset:
    # variables (t, x); symbol of u_t = u_xx in top order is ξ_x²
    eq = EquationSymbol(2, {((0, 2), 0): Fraction(-1)})
    return Preset("heat", {}, SymbolicSystem(2, 1, [eq], name="heat"),
                  Expected(p=1, sigma=2, involutive={2: True}, spencer_nonzero={(0, 0): 1, (1, 1): 1}, gci=True))


def laplace(n: int = 2) -> Preset:
    if n < 1:
        raise PresetParameterError("laplace needs n >= 1")
    eq = EquationSymbol(2, {(tuple(2 * int(i == a) for i in range(n)), 0): Fraction(1) for a in range(n)})
    p = n - 1
    return Preset("laplace", {"n": n}, SymbolicSystem(n, 1, [eq], name="laplace"),
                  Expected(p=p, sigma=2, involutive={2: True}, spencer_nonzero={(0, 0): 1, (1, 1): 1}, gci=True))


def two_generic_order2() -> Preset:
    eqs = [EquationSymbol(2, {((2, 0), 0): Fraction(1)}), EquationSymbol(2, {((0, 2), 0): Fraction(1)})]
    return Preset("two_generic_order2", {}, SymbolicSystem(2, 1, eqs, name="two_generic_order2"),
                  Expected(p=0, sigma=4, involutive={2: False},
                           spencer_nonzero={(0, 0): 1, (1, 1): 2, (2, 2): 1}, gci=True))


def one_common_characteristic() -> Preset:
    # ξ1² and ξ1ξ2 share the characteristic ξ1 = 0; compatibility is assumed, not checked
    eqs = [EquationSymbol(2, {((2, 0), 0): Fraction(1)}), EquationSymbol(2, {((1, 1), 0): Fraction(1)})]
    return Preset("one_common_characteristic", {}, SymbolicSystem(2, 1, eqs, name="one_common_characteristic"),
                  Expected(p=1, sigma=1, note="symbol-level only; the (p, sigma) claim presumes compatibility"))


def symplectic(n: int = 2) -> Preset:
    _require_even("symplectic", n)
    w = standard_symplectic_form(n)
    rows = []
    # (ωA)_{bc} = (ωA)_{cb}, where (ωA)_{bc} = Σ_j ω_{bj} A^j_c
    for b in range(n):
        for c in range(b + 1, n):
            r: dict[tuple[int, int], int] = {}
            for j in range(n):
                if w[b][j]:
                    r[(c, j)] = r.get((c, j), 0) + w[b][j]
                if w[c][j]:
                    r[(b, j)] = r.get((b, j), 0) - w[c][j]
            rows.append(r)
    row0 = {(0, i): comb(n, i + 1) for i in range(n)}
    return Preset("symplectic", {"n": n}, SymbolicSystem(n, n, _first_order(n, n, rows), name="symplectic"),
                  Expected(p=n, sigma=1, involutive={1: True}, spencer_nonzero=row0, gci=False))


def complex_structure(n: int = 2) -> Preset:
    _require_even("complex_structure", n)
    J = standard_complex_structure(n)
    rows = []
    # (JA − AJ)^b_c = Σ_j J_{bj} A^j_c − Σ_a A^b_a J_{ac}
    for b in range(n):
        for c in range(n):
            r: dict[tuple[int, int], int] = {}
            for j in range(n):
                if J[b][j]:
                    r[(c, j)] = r.get((c, j), 0) + J[b][j]
            for a in range(n):
                if J[a][c]:
                    r[(a, b)] = r.get((a, b), 0) - J[a][c]
            rows.append(r)
    return Preset("complex_structure", {"n": n},
                  SymbolicSystem(n, n, _first_order(n, n, rows), name="complex_structure"),
                  Expected(p=n // 2, sigma=n, involutive={1: True}, gci=(n == 2)))


def riemannian(n: int = 2) -> Preset:
    if n < 2:
        raise PresetParameterError("riemannian needs n >= 2")
    rows = []
    # A + A^T = 0 for the identity metric
    for b in range(n):
        for c in range(b, n):
            r = {(c, b): 1}
            r[(b, c)] = r.get((b, c), 0) + 1
            rows.append(r)
    curv = n * n * (n * n - 1) // 12
    nonzero = {(0, 0): n, (0, 1): n * (n + 1) // 2, (1, 2): curv}
    return Preset("riemannian", {"n": n}, SymbolicSystem(n, n, _first_order(n, n, rows), name="riemannian"),
                  Expected(p=0, sigma=n * (n + 1) // 2, involutive={1: False}, gci=(n == 2),
                           spencer_nonzero=nonzero if n == 2 else None))


_BUILDERS: dict[str, Callable[..., Preset]] = {
    "free": free,
    "heat": heat,
    "laplace": laplace,
    "two_generic_order2": two_generic_order2,
    "one_common_characteristic": one_common_characteristic,
    "symplectic": symplectic,
    "complex_structure": complex_structure,
    "riemannian": riemannian,
}

PRESET_NAMES = tuple(_BUILDERS)


def preset(name: str, parameters: Mapping[str, int] | None = None) -> Preset:
    """Build a preset by name; ``parameters`` are keyword arguments such as ``n``."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}") from None
    try:
        return builder(**dict(parameters or {}))
    except TypeError as exc:
        raise PresetParameterError(f"bad parameters for {name}: {exc}") from None
