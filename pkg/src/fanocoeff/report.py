"""Symbolic expansion of ``ch_j(H_i)`` with exact coefficients.

``T^m``, ``ch_k(X)`` and ``c_1(L_i)`` are opaque tokens here; only the shape
of the formula and its rational coefficients are computed.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Union

from .coefficients import CoefficientEngine, Method, TripleIndex
from .numerics import parse, to_str

__all__ = ["ChernTerm", "chern_terms", "render_chern_expansion", "parse_latex", "terms_from_json"]


@dataclass(frozen=True)
class ChernTerm:
    """One summand ``coefficient * T^m(ch_k(X)) * c_1(L_i)^e``.

    The leading ``-i c_1^j / j!`` term has ``k = 0``, ``operator_order = 0``
    and ``ch_index = 0``.
    """

    k: int
    coefficient: Fraction
    operator_order: int
    ch_index: int
    c1_power: int

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0


def chern_terms(i: int, j: int, method: Union[str, Method] = Method.CLOSED_FORM,
                engine: CoefficientEngine | None = None) -> list[ChernTerm]:
    if i < 1 or j < 1:
        raise ValueError("need i >= 1 and j >= 1")
    engine = engine or CoefficientEngine()
    terms = [ChernTerm(0, Fraction(-i, math.factorial(j)), 0, 0, j)]
    for k in range(1, i + j + 1):
        b = engine.b(TripleIndex(i, j, k), method)
        if k < i:
            terms.append(ChernTerm(k, b, k, k, j))
        else:
            terms.append(ChernTerm(k, b, i, k, i + j - k))
    return terms


def _term_dict(t: ChernTerm) -> dict[str, object]:
    d = asdict(t)
    d["coefficient"] = to_str(t.coefficient)
    d["zero"] = t.is_zero
    return d


def _latex_coefficient(c: Fraction) -> str:
    sign = "-" if c < 0 else "+"
    c = abs(c)
    body = str(c.numerator) if c.denominator == 1 else rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
    return f"{sign} {body}"


def _latex(i: int, j: int, terms: list[ChernTerm]) -> str:
    lead, rest = terms[0], terms[1:]
    parts = [rf"\mathrm{{ch}}_{{{j}}}(H_{{{i}}}) ="]
    parts.append(rf"{_latex_coefficient(lead.coefficient)}\, c_1(L_{{{i}}})^{{{lead.c1_power}}}")
    for t in rest:
        parts.append(
            rf"{_latex_coefficient(t.coefficient)}\, T^{{{t.operator_order}}}"
            rf"(\mathrm{{ch}}_{{{t.ch_index}}}(X))\, c_1(L_{{{i}}})^{{{t.c1_power}}}"
        )
    return " ".join(parts)


def render_chern_expansion(i: int, j: int, fmt: str = "json",
                           method: Union[str, Method] = Method.CLOSED_FORM,
                           engine: CoefficientEngine | None = None) -> Union[dict, str]:
    """JSON-ready dict (``fmt="json"``) or a display-math string (``fmt="latex"``)."""
    terms = chern_terms(i, j, method, engine)
    if fmt == "json":
        return {
            "i": i,
            "j": j,
            "leading": {"coefficient": to_str(terms[0].coefficient)},
            "terms": [_term_dict(t) for t in terms[1:]],
        }
    if fmt == "latex":
        return _latex(i, j, terms)
    raise ValueError(f"unknown format {fmt!r}")


def terms_from_json(doc: Union[dict, str]) -> list[ChernTerm]:
    if isinstance(doc, str):
        doc = json.loads(doc)
    terms = [ChernTerm(0, parse(doc["leading"]["coefficient"]), 0, 0, doc["j"])]
    for t in doc["terms"]:
        terms.append(ChernTerm(t["k"], parse(t["coefficient"]), t["operator_order"],
                               t["ch_index"], t["c1_power"]))
    return terms


_COEF = r"([+-]) (?:\\frac\{(\d+)\}\{(\d+)\}|(\d+))"
_HEAD_RE = re.compile(r"^\\mathrm\{ch\}_\{(\d+)\}\(H_\{(\d+)\}\) =")
_LEAD_RE = re.compile(_COEF + r"\\, c_1\(L_\{\d+\}\)\^\{(\d+)\}(?= [+-] |$)")
_TERM_RE = re.compile(
    _COEF + r"\\, T\^\{(\d+)\}\(\\mathrm\{ch\}_\{(\d+)\}\(X\)\)\\, c_1\(L_\{\d+\}\)\^\{(\d+)\}"
)


def _coef(sign: str, num: str | None, den: str | None, whole: str | None) -> Fraction:
    value = Fraction(int(whole)) if whole is not None else Fraction(int(num), int(den))
    return -value if sign == "-" else value


def parse_latex(text: str) -> tuple[int, int, list[ChernTerm]]:
    """Read back the output of ``render_chern_expansion(..., fmt="latex")``."""
    head = _HEAD_RE.match(text)
    if head is None:
        raise ValueError("not a rendered Chern expansion")
    j, i = int(head.group(1)), int(head.group(2))
    body = text[head.end():].strip()
    lead = _LEAD_RE.match(body)
    if lead is None:
        raise ValueError("missing leading term")
    terms = [ChernTerm(0, _coef(*lead.groups()[:4]), 0, 0, int(lead.group(5)))]
    for m in _TERM_RE.finditer(body, lead.end()):
        ch_index = int(m.group(6))
        terms.append(ChernTerm(ch_index, _coef(*m.groups()[:4]), int(m.group(5)), ch_index,
                               int(m.group(7))))
    return i, j, terms
