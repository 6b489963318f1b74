"""The ``pdedim/v1`` JSON system format.

    {
      "schema": "pdedim/v1",
      "name": "heat",
      "independent": 2,
      "dependent": 1,
      "equations": [
        {"order": 2, "terms": [{"exponents": [0, 2], "dependent": 0, "coeff": "-1"}]}
      ]
    }

Coefficients are exact rationals written as strings ("3", "-1/2").  Every
term of an equation must have degree equal to the declared order.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .qlinalg import format_scalar
from .symbolic import DEFAULT_LIMIT_BASIS, EquationSymbol, InvalidSystem, SymbolicSystem

SCHEMA = "pdedim/v1"

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
_TOP_KEYS = {"schema", "name", "independent", "dependent", "equations"}
_EQ_KEYS = {"order", "terms"}
_TERM_KEYS = {"exponents", "dependent", "coeff"}


class InputError(ValueError):
    """A system file violates the format; ``field`` locates the problem."""

    def __init__(self, field: str, message: str, source: str = ""):
        self.field = field
        self.message = message
        self.source = source
        where = f"{source}: " if source else ""
        at = f"{field}: " if field else ""
        super().__init__(f"{where}{at}{message}")


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _count(doc: dict, key: str, lo: int) -> int:
    v = doc.get(key)
    if not _is_int(v) or v < lo:
        raise InputError(key, f"expected an integer >= {lo}, got {json.dumps(v)}")
    return v


def _check_keys(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise InputError(where, f"expected an object, got {type(obj).__name__}")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise InputError(where, f"unknown field(s) {', '.join(extra)}")
    missing = sorted(required - set(obj))
    if missing:
        raise InputError(where, f"missing field(s) {', '.join(missing)}")


def parse_coeff(value: Any, where: str) -> Fraction:
    if _is_int(value):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise InputError(where, f"coefficient must be a string \"p\" or \"p/q\", got {json.dumps(value)}")
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise InputError(where, "zero denominator") from None


def system_from_dict(doc: Any, limit_basis: int = DEFAULT_LIMIT_BASIS) -> SymbolicSystem:
    _check_keys(doc, _TOP_KEYS, {"schema", "independent", "dependent", "equations"}, "")
    if doc["schema"] != SCHEMA:
        raise InputError("schema", f"expected {SCHEMA!r}, got {json.dumps(doc['schema'])}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InputError("name", "expected a string")
    n = _count(doc, "independent", 1)
    m = _count(doc, "dependent", 1)
    eqs_doc = doc["equations"]
    if not isinstance(eqs_doc, list):
        raise InputError("equations", "expected a list")
    eqs = []
    for e_i, e in enumerate(eqs_doc):
        at = f"equations[{e_i}]"
        _check_keys(e, _EQ_KEYS, _EQ_KEYS, at)
        order = e["order"]
        if not _is_int(order) or order < 1:
            raise InputError(f"{at}.order", f"expected an integer >= 1, got {json.dumps(order)}")
        terms = e["terms"]
        if not isinstance(terms, list) or not terms:
            raise InputError(f"{at}.terms", "expected a non-empty list")
        coeffs: dict = {}
        for t_i, t in enumerate(terms):
            tat = f"{at}.terms[{t_i}]"
            _check_keys(t, _TERM_KEYS, _TERM_KEYS, tat)
            ex = t["exponents"]
            if not isinstance(ex, list) or not all(_is_int(x) and x >= 0 for x in ex):
                raise InputError(f"{tat}.exponents", "expected a list of non-negative integers")
            if len(ex) != n:
                raise InputError(f"{tat}.exponents", f"has length {len(ex)}, expected independent = {n}")
            if sum(ex) != order:
                raise InputError(
                    f"{tat}.exponents",
                    f"degree {sum(ex)} differs from the equation order {order}; "
                    "supply the principal symbol per declared order (lower-order terms do not belong to it)",
                )
            dep = t["dependent"]
            if not _is_int(dep) or not 0 <= dep < m:
                raise InputError(f"{tat}.dependent", f"expected an integer in [0, {m}), got {json.dumps(dep)}")
            key = (tuple(ex), dep)
            if key in coeffs:
                raise InputError(tat, f"duplicate term for exponents {ex} and dependent {dep}")
            coeffs[key] = parse_coeff(t["coeff"], f"{tat}.coeff")
        try:
            eqs.append(EquationSymbol(order, coeffs))
        except InvalidSystem as exc:
            raise InputError(at, str(exc)) from None
    try:
        return SymbolicSystem(n, m, eqs, limit_basis=limit_basis, name=name)
    except InvalidSystem as exc:
        raise InputError("", str(exc)) from None


def loads(text: str, limit_basis: int = DEFAULT_LIMIT_BASIS, source: str = "") -> SymbolicSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}", source) from None
    try:
        return system_from_dict(doc, limit_basis)
    except InputError as exc:
        raise InputError(exc.field, exc.message, source) from None


def parse_system(path: str | Path, limit_basis: int = DEFAULT_LIMIT_BASIS) -> SymbolicSystem:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("", f"cannot read file: {exc.strerror}", str(p)) from None
    return loads(text, limit_basis, str(p))


def system_to_dict(sys: SymbolicSystem) -> dict:
    """Canonical form: equations by order, terms in graded-lex order then dependent index."""
    return {
        "schema": SCHEMA,
        "name": sys.name,
        "independent": sys.n,
        "dependent": sys.m,
        "equations": [
            {
                "order": e.order,
                "terms": [
                    {"exponents": list(alpha), "dependent": dep, "coeff": format_scalar(c)}
                    for alpha, dep, c in e.terms()
                ],
            }
            for e in sys.equations
        ],
    }


def dumps(sys: SymbolicSystem) -> str:
    return json.dumps(system_to_dict(sys), indent=2, sort_keys=True) + "\n"
