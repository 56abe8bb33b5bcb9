"""Exact sparse arithmetic for the coefficient ring of jet-space computations.

Three layers, all represented by plain dicts with Fraction coefficients so that
equality is dict equality and every operation is exact:

  Mono  = tuple[tuple[int, int], ...]     sorted ((var_index, exponent), ...) pairs,
                                          var_index >= 1 names the jet variable u_i,
                                          no zero exponents; () is the monomial 1.
  Poly  = dict[Mono, Fraction]            sparse polynomial in u_1, u_2, ...; {} is 0.
  Quasi = dict[int, Poly]                 maps an exponential index a to the polynomial
                                          multiplying e^{a*u}; {} is 0.

The weight of u_i is i; a polynomial is weight-homogeneous when all its monomials
share one weight.  Zero-coefficient terms and zero polynomial parts are never stored,
so canonical form is automatic and two values are equal iff their dicts are equal.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

Mono = tuple  # tuple[tuple[int, int], ...]
Poly = dict   # dict[Mono, Fraction]
Quasi = dict  # dict[int, Poly]

MONO_ONE: Mono = ()


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_from_pairs(pairs: Iterable[tuple[int, int]]) -> Mono:
    """Build a monomial from (index, exponent) pairs, dropping zero exponents."""
    acc: dict[int, int] = {}
    for idx, exp in pairs:
        if idx < 1:
            raise ValueError(f"jet variable index must be >= 1, got {idx}")
        if exp:
            acc[idx] = acc.get(idx, 0) + exp
    return tuple(sorted((i, e) for i, e in acc.items() if e))


def mono_var(i: int) -> Mono:
    if i < 1:
        raise ValueError(f"jet variable index must be >= 1, got {i}")
    return ((i, 1),)


@lru_cache(maxsize=1 << 17)
def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for idx, exp in b:
        acc[idx] = acc.get(idx, 0) + exp
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=1 << 16)
def mono_weight(m: Mono) -> int:
    return sum(i * e for i, e in m)


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def mono_max_index(m: Mono) -> int:
    return m[-1][0] if m else 0


def mono_diff(m: Mono, k: int) -> Optional[tuple[int, Mono]]:
    """d/du_k of the monomial: (old exponent, lowered monomial), or None."""
    for pos, (idx, exp) in enumerate(m):
        if idx == k:
            rest = m[:pos] + ((idx, exp - 1),) + m[pos + 1:] if exp > 1 else m[:pos] + m[pos + 1:]
            return exp, rest
    return None


def mono_key(m: Mono):
    """Deterministic sort key: (weight, lexicographic on the pair tuple)."""
    return (mono_weight(m), m)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def poly_zero() -> Poly:
    return {}


def poly_const(c) -> Poly:
    c = Fraction(c)
    return {MONO_ONE: c} if c else {}


def poly_var(i: int) -> Poly:
    return {mono_var(i): Fraction(1)}


def poly_add(a: Poly, b: Poly) -> Poly:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_sub(a: Poly, b: Poly) -> Poly:
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = -c
        else:
            s = s - c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def poly_scale(a: Poly, c) -> Poly:
    c = Fraction(c)
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            s = out.get(m)
            out[m] = ca * cb if s is None else s + ca * cb
    return {m: c for m, c in out.items() if c}


def poly_diff(a: Poly, k: int) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        d = mono_diff(m, k)
        if d is None:
            continue
        exp, rest = d
        s = out.get(rest)
        v = c * exp
        out[rest] = v if s is None else s + v
    return {m: c for m, c in out.items() if c}


def weight_of(a: Poly) -> Optional[int]:
    """Common weight of a homogeneous polynomial; None when mixed or zero.

    The zero polynomial is homogeneous of any weight, reported as None here and
    as "any" in text reports.
    """
    w: Optional[int] = None
    for m in a:
        mw = mono_weight(m)
        if w is None:
            w = mw
        elif w != mw:
            return None
    return w


def weight_report(a: Poly) -> str:
    if not a:
        return "any"
    w = weight_of(a)
    return str(w) if w is not None else "mixed"


def poly_max_index(a: Poly) -> int:
    return max((mono_max_index(m) for m in a), default=0)


def poly_substitute(a: Poly, images: dict[int, Poly]) -> Poly:
    """Substitute u_i -> images[i] (missing indices keep u_i)."""
    out: Poly = {}
    for m, c in a.items():
        term = poly_const(c)
        for idx, exp in m:
            base = images.get(idx, poly_var(idx))
            for _ in range(exp):
                term = poly_mul(term, base)
        out = poly_add(out, term)
    return out


# ---------------------------------------------------------------------------
# quasipolynomials  e^{a*u} * P(u_1, u_2, ...)
# ---------------------------------------------------------------------------

def qp_zero() -> Quasi:
    return {}


def qp_from_poly(p: Poly) -> Quasi:
    return {0: dict(p)} if p else {}


def qp_exp(alpha: int, coeff=1) -> Quasi:
    """coeff * e^{alpha*u}"""
    p = poly_const(coeff)
    return {alpha: p} if p else {}


def _qp_norm(q: Quasi) -> Quasi:
    return {a: p for a, p in q.items() if p}


def qp_add(a: Quasi, b: Quasi) -> Quasi:
    out = {k: dict(v) for k, v in a.items()}
    for al, p in b.items():
        out[al] = poly_add(out.get(al, {}), p)
    return _qp_norm(out)


def qp_sub(a: Quasi, b: Quasi) -> Quasi:
    out = {k: dict(v) for k, v in a.items()}
    for al, p in b.items():
        out[al] = poly_sub(out.get(al, {}), p)
    return _qp_norm(out)


def qp_neg(a: Quasi) -> Quasi:
    return {al: poly_neg(p) for al, p in a.items()}


def qp_scale(a: Quasi, c) -> Quasi:
    c = Fraction(c)
    if not c:
        return {}
    return {al: poly_scale(p, c) for al, p in a.items()}


def qp_mul(a: Quasi, b: Quasi) -> Quasi:
    out: Quasi = {}
    for aa, pa in a.items():
        for ab, pb in b.items():
            al = aa + ab
            prod = poly_mul(pa, pb)
            out[al] = poly_add(out.get(al, {}), prod) if al in out else prod
    return _qp_norm(out)


def qp_derive_u(a: Quasi) -> Quasi:
    """d/du: each e^{a*u} part is multiplied by a (parts carry no explicit u)."""
    return _qp_norm({al: poly_scale(p, al) for al, p in a.items()})


def qp_derive_uk(a: Quasi, k: int) -> Quasi:
    if k < 1:
        raise ValueError(f"jet variable index must be >= 1, got {k}")
    return _qp_norm({al: poly_diff(p, k) for al, p in a.items()})


def qp_max_index(a: Quasi) -> int:
    return max((poly_max_index(p) for p in a.values()), default=0)


def qp_is_zero(a: Quasi) -> bool:
    return not a


def qp_exponents(a: Quasi) -> list[int]:
    return sorted(a.keys(), reverse=True)


def qp_is_exponential_only(a: Quasi) -> bool:
    """True when every part is constant, i.e. a is a pure sum of c*e^{a*u}."""
    return all(set(p) <= {MONO_ONE} for p in a.values())


# ---------------------------------------------------------------------------
# canonical text form:  c * e^(a*u) * u1^e1*u2^e2...
# ---------------------------------------------------------------------------

def frac_text(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _exp_text(alpha: int) -> str:
    if alpha == 1:
        return "e^(u)"
    if alpha == -1:
        return "e^(-u)"
    return f"e^({alpha}*u)"


def mono_text(m: Mono) -> str:
    return "*".join(f"u{i}" if e == 1 else f"u{i}^{e}" for i, e in m)


def qp_to_text(a: Quasi) -> str:
    """Canonical serialization: terms by exponential index descending, then by
    (weight, lex) monomial order; reparsing yields an identical dict."""
    if not a:
        return "0"
    chunks: list[str] = []
    for alpha in sorted(a, reverse=True):
        p = a[alpha]
        for m in sorted(p, key=mono_key):
            c = p[m]
            parts = [frac_text(abs(c))]
            if alpha != 0:
                parts.append(_exp_text(alpha))
            if m:
                parts.append(mono_text(m))
            term = " * ".join(parts)
            if not chunks:
                chunks.append(term if c > 0 else "-" + term)
            else:
                chunks.append(("+ " if c > 0 else "- ") + term)
    return " ".join(chunks)


def poly_to_text(p: Poly) -> str:
    return qp_to_text(qp_from_poly(p))


_FRAC_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_EXP_RE = re.compile(r"^e\^?\(?\s*(-?\d*)\s*\*?\s*u\s*\)?$")
_VAR_RE = re.compile(r"^u(\d+)(?:\^(-?\d+))?$")


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, why: str):
        super().__init__(f"cannot parse {text!r} at position {pos}: {why}")
        self.pos = pos


def qp_parse(text: str) -> Quasi:
    """Parse the canonical text form (tolerates missing '*' around e^ factors
    and '^1' exponents).  Inverse of qp_to_text on its own output."""
    s = text.strip()
    if not s:
        raise ParseError(text, 0, "empty input")
    if s == "0":
        return {}
    out: Quasi = {}
    pos = 0
    sign = 1
    # split into signed terms at top level (no nesting beyond e^(...))
    term = ""
    terms: list[tuple[int, str, int]] = []  # (sign, body, start_pos)
    start = 0
    depth = 0
    for i, ch in enumerate(s + "+"):  # sentinel
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "(^*/eE" and term.strip():
            terms.append((sign, term, start))
            sign = 1 if ch == "+" else -1
            term = ""
            start = i + 1
            continue
        if ch in "+-" and depth == 0 and not term.strip():
            sign = sign if ch == "+" else -sign
            start = i + 1
            continue
        term += ch
    if depth != 0:
        raise ParseError(text, len(s), "unbalanced parentheses")
    for tsign, body, tpos in terms:
        coeff = Fraction(tsign)
        alpha = 0
        mono_pairs: list[tuple[int, int]] = []
        factors = [f.strip() for f in re.split(r"\*(?!\s*u\s*\))", body) if f.strip()]
        # the split above keeps "e^(2*u)" together by not splitting before "u)"
        if not factors:
            raise ParseError(text, tpos, "empty term")
        for f in factors:
            m = _FRAC_RE.match(f)
            if m:
                coeff *= Fraction(int(m.group(1)), int(m.group(2) or 1))
                continue
            m = _EXP_RE.match(f)
            if m:
                g = m.group(1)
                alpha += int(g) if g not in ("", "-") else (-1 if g == "-" else 1)
                continue
            m = _VAR_RE.match(f)
            if m:
                e = int(m.group(2) or 1)
                if e < 1:
                    raise ParseError(text, tpos, f"bad exponent in {f!r}")
                mono_pairs.append((int(m.group(1)), e))
                continue
            raise ParseError(text, tpos + body.find(f), f"unrecognized factor {f!r}")
        mono = mono_from_pairs(mono_pairs)
        part = out.setdefault(alpha, {})
        c = part.get(mono, Fraction(0)) + coeff
        if c:
            part[mono] = c
        elif mono in part:
            del part[mono]
    return _qp_norm(out)


def poly_parse(text: str) -> Poly:
    q = qp_parse(text)
    if set(q) - {0}:
        raise ValueError(f"expected a plain jet polynomial, got exponential parts {sorted(set(q) - {0})}")
    return q.get(0, {})
