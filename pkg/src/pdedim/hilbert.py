"""Hilbert function and polynomial of the symbolic module, two ways.

Polynomials in z are tuples of ``Fraction`` coefficients, lowest degree
first, with no trailing zeros (the zero polynomial is ``()``).

Route one fits f(k) = Σ_{i≤k} dim g_i on the computed window.  Route two
assembles Σ_{q,i} (−1)^i h^{q,i} binom(z − q − i + n, n) from the Spencer
table.  The functional dimension is the degree and the functional rank is
p! times the leading coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .gci import elementary_symmetric
from .spencer import SpencerTable
from .symbolic import SymbolicSystem

Polynomial = tuple[Fraction, ...]


class NoStabilization(ValueError):
    """No polynomial of degree ≤ n explains the tail of the values."""


class PolynomialMismatch(RuntimeError):
    """The fitted and resolution polynomials differ."""


class NonIntegerResult(ValueError):
    """A rank formula produced a value that is not a positive integer."""


# ---------------------------------------------------------------------------
# univariate polynomial helpers


def poly_trim(c: Sequence[Fraction]) -> Polynomial:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Polynomial:
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a: Sequence[Fraction], s) -> Polynomial:
    return poly_trim([x * s for x in a])


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Polynomial:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_eval(a: Sequence[Fraction], z) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * z + c
    return acc


def poly_degree(a: Sequence[Fraction]) -> int:
    """Degree; −1 for the zero polynomial."""
    return len(poly_trim(a)) - 1


def poly_str(a: Sequence[Fraction], var: str = "z") -> str:
    a = poly_trim(a)
    if not a:
        return "0"
    parts = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            mono = var if d == 1 else f"{var}^{d}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def binomial_poly(shift: int, k: int) -> Polynomial:
    """binom(z + shift, k) = (z+shift)(z+shift−1)···(z+shift−k+1) / k!."""
    acc: Polynomial = (Fraction(1),)
    for t in range(k):
        acc = poly_mul(acc, (Fraction(shift - t), Fraction(1)))
    return poly_scale(acc, Fraction(1, factorial(k)))


# ---------------------------------------------------------------------------


def hilbert_function(sys: SymbolicSystem, k: int) -> int:
    """f(k) = Σ_{i≤k} dim g_i."""
    return sum(sys.component(i).dim for i in range(k + 1))


def hilbert_values(sys: SymbolicSystem, k_max: int) -> list[int]:
    out, acc = [], 0
    for d in sys.dims(k_max):
        acc += d
        out.append(acc)
    return out


def interpolate(points: Sequence[tuple[int, int | Fraction]]) -> Polynomial:
    """Newton interpolation through (x, y) pairs with distinct integer x."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(xs)
    for lvl in range(1, n):
        for i in range(n - 1, lvl - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - lvl])
    acc: Polynomial = ()
    for i in range(n - 1, -1, -1):
        acc = poly_add(poly_mul(acc, (-xs[i], Fraction(1))), (coef[i],))
    return acc


def fit_polynomial(values: Sequence[int], n: int) -> tuple[Polynomial, int]:
    """Smallest s such that the interpolant on k = s..s+n matches every later value.

    At least one value past the interpolation nodes is required as a check.
    """
    L = len(values)
    if L < n + 3:
        raise NoStabilization(f"need at least {n + 3} values to fit a degree-{n} polynomial, got {L}; raise --max-degree")
    for s in range(0, L - n - 1):
        poly = interpolate([(k, values[k]) for k in range(s, s + n + 1)])
        if all(poly_eval(poly, k) == values[k] for k in range(s + n + 1, L)):
            return poly, s
    raise NoStabilization(
        f"the Hilbert function does not become polynomial within k <= {L - 1}; raise --max-degree"
    )


def polynomial_from_resolution(table: SpencerTable, n: int) -> Polynomial:
    """Σ_{q,i} (−1)^i h^{q,i} binom(z − q − i + n, n)."""
    table.require_complete()
    acc: Polynomial = ()
    for (q, i), h in table.items():
        if h:
            acc = poly_add(acc, poly_scale(binomial_poly(n - q - i, n), (-1) ** i * h))
    return acc


def s_coefficient(i: int, n: int) -> Fraction:
    """(n−i)!/n! · e_i(1, ..., n)."""
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    return Fraction(factorial(n - i), factorial(n)) * elementary_symmetric(i, list(range(1, n + 1)))


def b_coefficients(table: SpencerTable, n: int) -> list[Fraction]:
    """b_0..b_n with P(z) = Σ_k b_k z^{n−k}/(n−k)!, from the Spencer table."""
    table.require_complete()
    s = [s_coefficient(j, n) for j in range(n + 1)]
    nz = [((q + i), (-1) ** i * h) for (q, i), h in table.items() if h]
    out = []
    for k in range(n + 1):
        total = Fraction(0)
        for j in range(k + 1):
            inner = sum(Fraction(signed_h * c ** (k - j)) for c, signed_h in nz)
            total += (-1) ** (j + k) * s[j] * inner / factorial(k - j)
        out.append(total)
    return out


def polynomial_from_b(b: Sequence[Fraction], n: int) -> Polynomial:
    coeffs = [Fraction(0)] * (n + 1)
    for k, bk in enumerate(b):
        coeffs[n - k] += Fraction(bk) / factorial(n - k)
    return poly_trim(coeffs)


def b_from_polynomial(poly: Sequence[Fraction], n: int) -> list[Fraction]:
    poly = poly_trim(poly)
    if len(poly) > n + 1:
        raise ValueError(f"degree {len(poly) - 1} exceeds n={n}")
    return [(poly[n - k] if n - k < len(poly) else Fraction(0)) * factorial(n - k) for k in range(n + 1)]


def dimension_and_rank(poly: Sequence[Fraction]) -> tuple[int, int]:
    """(p, σ) = (deg P, p! · leading coefficient); (0, 0) for the zero polynomial."""
    poly = poly_trim(poly)
    if not poly:
        return 0, 0
    p = len(poly) - 1
    sigma = poly[-1] * factorial(p)
    if sigma.denominator != 1:
        raise NonIntegerResult(f"p!·lead = {sigma} is not an integer")
    return p, int(sigma)


def involutive_first_order_rank(h_row: Sequence[int], n: int, p: int) -> int:
    """σ = Σ_i (−1)^i h^{0,i} (−i)^{n−p}/(n−p)! for involutive first-order systems."""
    if not 0 <= p <= n:
        raise ValueError("need 0 <= p <= n")
    e = n - p
    total = sum(Fraction((-1) ** i * h * (-i) ** e, factorial(e)) for i, h in enumerate(h_row))
    if total.denominator != 1 or total <= 0:
        raise NonIntegerResult(
            f"rank formula gave {total}; the system is not an involutive first-order system with codim Char = {e}"
        )
    return int(total)


@dataclass(frozen=True)
class HilbertProfile:
    values: tuple[int, ...]
    polynomial: Polynomial
    stabilized_from: int
    p: int
    sigma: int
    b: tuple[Fraction, ...]
    resolution_polynomial: Polynomial | None = None


def hilbert_profile(sys: SymbolicSystem, k_max: int, table: SpencerTable | None = None) -> HilbertProfile:
    """Fit the Hilbert polynomial; if a complete table is given, demand agreement."""
    values = hilbert_values(sys, k_max)
    poly, s = fit_polynomial(values, sys.n)
    res = None
    if table is not None and table.complete:
        res = polynomial_from_resolution(table, sys.n)
        if res != poly:
            raise PolynomialMismatch(
                f"fitted Hilbert polynomial {poly_str(poly)} differs from the resolution polynomial {poly_str(res)}"
            )
    p, sigma = dimension_and_rank(poly)
    return HilbertProfile(tuple(values), poly, s, p, sigma, tuple(b_from_polynomial(poly, sys.n)), res)
