"""Stored reference rows for small levels, as LaTeX, plus a small parser.

The rows are kept exactly as typeset (line breaks folded to spaces) so that
any disagreement with the derived relation is reported, never silently fixed.
"""

from __future__ import annotations

import re

from .divisors import LAMBDA, BasisContext, DivisorClass, Gen, alpha_residue, gamma, mu
from .errors import UsageError

PRINTED_ROWS: dict[tuple[int, int], str] = {
    (2, 2): r"4\lambda + 8 \mu^{1/2} = \gamma_0",
    (3, 3): r"6\lambda + 18 \mu^{1/3} = 2 \gamma_0 + 2 \sigma_2",
    (4, 4): r"4\lambda + 32 \mu^{1/4} = 3 \gamma_{0} - 2\gamma_{2}",
    (4, 2): r"4\lambda + 8 \mu^{1/2} = \gamma_{0} + 2 \gamma_{2}",
    (5, 5): r"2\lambda - 50 \mu^{1/5} = -4 \gamma_0 + 10 (\gamma_2 + \sigma_2 + \sigma_4) - 4 \sigma_3",
    (6, 6): r"12\lambda - 72 \mu^{1/6} = -5 \gamma_{0} + 9 \gamma_{2} + 8 (\gamma_{3} + \sigma_{2} + \sigma_{5})",
    (6, 2): r"4\lambda + 8 \mu^{1/2} = \gamma_{0} + 3\gamma_{2}",
    (6, 3): r"6\lambda + 18\mu^{1/3} = 2 \gamma_0 +4 \gamma_3 + 4(\sigma_2+\sigma_5)",
    (7, 7): r"26 \lambda -98 \mu^{1/7} = -6(\gamma_0+\sigma_4) + 28 (\gamma_2 + \sigma_3 + \sigma_5)"
            r" + 42(\gamma_3 + \sigma_2 + \sigma_6)",
    (8, 8): r"44 \lambda - 128 \mu^{1/8} = -7\gamma_0 + 20 \gamma_2 + 18 \gamma_4"
            r" + 64(\gamma_3+\sigma_2+\sigma_3+\sigma_6+\sigma_7)",
    (8, 4): r"4 \lambda-32\mu^{1/4} = 3 \gamma_0 + 6 \gamma_4 - 4 \gamma_2",
    (8, 2): r"4 \lambda -8\mu^{1/2} = \gamma_0 +4\gamma_2+2 \gamma_4",
}

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+)"
    r"|(?P<op>[+\-()])"
    r"|\\lambda"
    r"|\\mu\^\{1/(?P<mu>\d+)\}"
    r"|\\gamma_(?:\{(?P<g1>\d+)\}|(?P<g2>\d))"
    r"|\\sigma_(?:\{(?P<s1>\d+)\}|(?P<s2>\d))"
    r")"
)


def _tokens(text: str) -> list[tuple[str, object]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse {text[pos:]!r}")
        pos = m.end()
        if m["num"]:
            out.append(("num", int(m["num"])))
        elif m["op"]:
            out.append(("op", m["op"]))
        elif m["mu"]:
            out.append(("gen", mu(int(m["mu"]))))
        elif m["g1"] or m["g2"]:
            out.append(("gen", gamma(int(m["g1"] or m["g2"]))))
        elif m["s1"] or m["s2"]:
            out.append(("gen", alpha_residue(int(m["s1"] or m["s2"]))))
        else:
            out.append(("gen", LAMBDA))
    return out


def parse_side(text: str) -> dict[Gen, int]:
    """Parse a signed sum of ``[coeff] symbol`` and ``[coeff] ( ... )`` groups."""
    toks = _tokens(text)
    pos = 0

    def expr() -> dict[Gen, int]:
        nonlocal pos
        acc: dict[Gen, int] = {}
        sign = 1
        while pos < len(toks):
            kind, val = toks[pos]
            if kind == "op" and val in "+-":
                sign = 1 if val == "+" else -1
                pos += 1
                continue
            if kind == "op" and val == ")":
                break
            coeff = 1
            if kind == "num":
                coeff = val
                pos += 1
                kind, val = toks[pos]
            if kind == "gen":
                part = {val: 1}
                pos += 1
            elif val == "(":
                pos += 1
                part = expr()
                if toks[pos] != ("op", ")"):
                    raise UsageError(f"unbalanced parentheses in {text!r}")
                pos += 1
            else:
                raise UsageError(f"unexpected {val!r} in {text!r}")
            for g, c in part.items():
                acc[g] = acc.get(g, 0) + sign * coeff * c
            sign = 1
        return acc

    out = expr()
    if pos != len(toks):
        raise UsageError(f"trailing input in {text!r}")
    return out


def parse_row(ctx: BasisContext, text: str) -> DivisorClass:
    """``lhs = rhs`` as the class ``lhs - rhs``."""
    lhs, sep, rhs = text.partition("=")
    if not sep:
        raise UsageError(f"no '=' in {text!r}")
    return DivisorClass(ctx, parse_side(lhs)) - DivisorClass(ctx, parse_side(rhs))


def printed_row(r: int, s: int) -> tuple[str, DivisorClass] | None:
    text = PRINTED_ROWS.get((r, s))
    if text is None:
        return None
    return text, parse_row(BasisContext(r), text)
