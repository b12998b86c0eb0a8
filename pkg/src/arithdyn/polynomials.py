"""Sparse homogeneous polynomials in x0..xN with exact coefficients.

A polynomial is a ``dict`` mapping exponent tuples to nonzero coefficients.
Monomials of a fixed degree are ordered graded-lexicographically with
x0 > x1 > ... > xN, i.e. by decreasing exponent tuple.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Mapping, Sequence

from .errors import DegenerateInputError

Poly = dict  # dict[tuple[int, ...], int | Fraction]


@lru_cache(maxsize=None)
def monomials(N: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of degree ``d`` in ``N + 1`` variables, in the fixed order."""
    out = []
    for combo in combinations_with_replacement(range(N + 1), d):
        e = [0] * (N + 1)
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(N: int, d: int) -> dict[tuple[int, ...], int]:
    return {e: k for k, e in enumerate(monomials(N, d))}


def num_monomials(N: int, d: int) -> int:
    return comb(N + d, N)


def eval_monomials(N: int, d: int, x: Sequence[int]) -> list:
    """Values of every degree-d monomial at ``x``, in the fixed order."""
    # powers[c][e] = x_c ** e
    powers = []
    for c in x:
        row = [1]
        for _ in range(d):
            row.append(row[-1] * c)
        powers.append(row)
    vals = []
    for e in monomials(N, d):
        v = 1
        for c, k in enumerate(e):
            if k:
                v *= powers[c][k]
        vals.append(v)
    return vals


def poly_mul(f: Mapping, g: Mapping) -> Poly:
    out: Poly = {}
    for ef, cf in f.items():
        for eg, cg in g.items():
            e = tuple(a + b for a, b in zip(ef, eg))
            out[e] = out.get(e, 0) + cf * cg
    return {e: c for e, c in out.items() if c}


def poly_add(f: Mapping, g: Mapping, scale=1) -> Poly:
    out = dict(f)
    for e, c in g.items():
        out[e] = out.get(e, 0) + scale * c
    return {e: c for e, c in out.items() if c}


def poly_scale(f: Mapping, s) -> Poly:
    return {e: s * c for e, c in f.items() if s * c}


def poly_pow(f: Mapping, k: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: 1}
    for _ in range(k):
        out = poly_mul(out, f)
    return out


def poly_eval(f: Mapping, x: Sequence):
    total = 0
    for e, c in f.items():
        t = c
        for xi, k in zip(x, e):
            if k:
                t *= xi ** k
        total += t
    return total


def linear_form(row: Sequence[int]) -> Poly:
    n = len(row)
    return {tuple(1 if j == i else 0 for j in range(n)): a for i, a in enumerate(row) if a}


def compose_linear(f: Mapping, rows: Sequence[Sequence[int]]) -> Poly:
    """``f(M x)`` where row ``c`` of ``rows`` gives the linear form substituted for x_c."""
    nvars = len(rows)
    forms = [linear_form(r) for r in rows]
    cache: dict[tuple[int, int], Poly] = {}

    def power(c, k):
        key = (c, k)
        if key not in cache:
            cache[key] = poly_pow(forms[c], k, nvars)
        return cache[key]

    out: Poly = {}
    for e, coeff in f.items():
        term: Poly = {(0,) * nvars: coeff}
        for c, k in enumerate(e):
            if k:
                term = poly_mul(term, power(c, k))
        out = poly_add(out, term)
    return out


def coefficient_vector(f: Mapping, N: int, d: int) -> list:
    idx = monomial_index(N, d)
    vec = [0] * len(idx)
    for e, c in f.items():
        if e not in idx:
            raise DegenerateInputError(f"monomial {e} is not of degree {d} in {N + 1} variables")
        vec[idx[e]] = c
    return vec


def from_coefficients(vec: Sequence, N: int, d: int) -> Poly:
    return {e: c for e, c in zip(monomials(N, d), vec) if c}


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x_?\d+|[a-zA-Z])|(\*\*|\^|\*|/|\+|-))")
_ALIASES = {1: ("x", "y"), 2: ("x", "y", "z"), 3: ("x", "y", "z", "w")}


def _var_index(name: str, N: int) -> int:
    m = re.fullmatch(r"x_?(\d+)", name)
    if m:
        i = int(m.group(1))
        if i <= N:
            return i
    elif name in _ALIASES.get(N, ()):
        return _ALIASES[N].index(name)
    raise DegenerateInputError(f"unknown variable {name!r} for N = {N}")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DegenerateInputError(f"cannot parse polynomial near {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("var", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def parse_polynomial(text: str, N: int) -> Poly:
    """Parse text like ``"x0^2 - 3*x0*x1 + 1/2*x1^2"`` into a sparse polynomial.

    Coefficients may be integers or ``a/b`` rationals; juxtaposition
    (``3x0``) is accepted as multiplication.  Parentheses are not supported.
    """
    toks = _tokenize(text)
    if not toks:
        raise DegenerateInputError("empty polynomial")
    poly: Poly = {}
    i = 0
    sign = 1
    expecting_term = True
    while i < len(toks):
        kind, val = toks[i]
        if expecting_term:
            if kind == "op" and val in "+-":
                sign = sign * (-1 if val == "-" else 1)
                i += 1
                continue
            coeff = Fraction(sign)
            exps = [0] * (N + 1)
            seen_factor = False
            while i < len(toks):
                kind, val = toks[i]
                if kind == "num":
                    c = Fraction(int(val))
                    if i + 1 < len(toks) and toks[i + 1] == ("op", "/"):
                        if i + 2 >= len(toks) or toks[i + 2][0] != "num":
                            raise DegenerateInputError(f"bad rational coefficient in {text!r}")
                        den = int(toks[i + 2][1])
                        if den == 0:
                            raise DegenerateInputError("zero denominator")
                        c /= den
                        i += 2
                    coeff *= c
                    i += 1
                elif kind == "var":
                    v = _var_index(val, N)
                    k = 1
                    if i + 1 < len(toks) and toks[i + 1] == ("op", "^"):
                        if i + 2 >= len(toks) or toks[i + 2][0] != "num":
                            raise DegenerateInputError(f"bad exponent in {text!r}")
                        k = int(toks[i + 2][1])
                        i += 2
                    exps[v] += k
                    i += 1
                else:
                    raise DegenerateInputError(f"unexpected {val!r} in {text!r}")
                seen_factor = True
                if i < len(toks) and toks[i] == ("op", "*"):
                    i += 1
                    if i >= len(toks) or toks[i][0] == "op":
                        raise DegenerateInputError(f"dangling '*' in {text!r}")
                    continue
                if i < len(toks) and toks[i][0] in ("num", "var"):
                    continue
                break
            if not seen_factor:
                raise DegenerateInputError(f"missing term in {text!r}")
            e = tuple(exps)
            poly[e] = poly.get(e, 0) + coeff
            expecting_term = False
            sign = 1
        else:
            if kind == "op" and val in "+-":
                expecting_term = True
                continue
            raise DegenerateInputError(f"unexpected {val!r} in {text!r}")
    if expecting_term:
        raise DegenerateInputError(f"trailing operator in {text!r}")
    return {e: (int(c) if c.denominator == 1 else c) for e, c in poly.items() if c}


def format_polynomial(f: Mapping, N: int) -> str:
    """Render in the fixed monomial order, e.g. ``x0^2 + 7*x0*x1``; zero renders as ``0``."""
    if not f:
        return "0"
    parts = []
    for e in sorted(f, reverse=True):
        c = f[e]
        mono = "*".join(
            f"x{v}" if k == 1 else f"x{v}^{k}" for v, k in enumerate(e) if k
        )
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
