"""Polynomials with exact rational coefficients in a few fixed directions.

A polynomial is a dict {exponent tuple: Fraction} over a fixed basis of
directions b_1..b_m; the variable y_j is the affine form (b_j, .) shifted
to vanish at the base point.  Directional derivatives and the apolarity
pairing <p, q> = d(p*)(q)(base) only need the Gram matrix of the basis and
the pairings (b_j, v) against external directions.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Sequence

Poly = dict[tuple[int, ...], Q]


def poly_zero() -> Poly:
    return {}


def poly_const(c, nvars: int) -> Poly:
    return {tuple([0] * nvars): Q(c)} if c else {}


def poly_linear(coeffs: Sequence[Q]) -> Poly:
    n = len(coeffs)
    out: Poly = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = 1
            out[tuple(e)] = Q(c)
    return out


def poly_add(a: Poly, b: Poly, scale=1) -> Poly:
    out = dict(a)
    s = Q(scale)
    for k, v in b.items():
        nv = out.get(k, Q(0)) + s * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def poly_mul(a: Poly, b: Poly, max_deg: int | None = None) -> Poly:
    out: Poly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if max_deg is not None and sum(k) > max_deg:
                continue
            nv = out.get(k, Q(0)) + va * vb
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def poly_scale(a: Poly, c) -> Poly:
    c = Q(c)
    return {k: c * v for k, v in a.items()} if c else {}


def poly_degree_part(a: Poly, deg: int) -> Poly:
    return {k: v for k, v in a.items() if sum(k) == deg}


def poly_deriv(a: Poly, coeffs: Sequence[Q]) -> Poly:
    """Directional derivative: sum_j coeffs[j] * d/dy_j."""
    out: Poly = {}
    for k, v in a.items():
        for j, c in enumerate(coeffs):
            if c and k[j]:
                k2 = list(k)
                k2[j] -= 1
                k2t = tuple(k2)
                nv = out.get(k2t, Q(0)) + v * c * k[j]
                if nv:
                    out[k2t] = nv
                else:
                    out.pop(k2t, None)
    return out


def poly_substitute_linear(a: Poly, images: Sequence[Poly]) -> Poly:
    """Substitute y_j -> images[j] (linear forms); used for group actions."""
    nvars = len(images)
    out = poly_zero()
    pow_cache: list[list[Poly]] = [[poly_const(1, nvars)] for _ in range(nvars)]
    maxe = [0] * nvars
    for k in a:
        for j, e in enumerate(k):
            maxe[j] = max(maxe[j], e)
    for j in range(nvars):
        for _ in range(maxe[j]):
            pow_cache[j].append(poly_mul(pow_cache[j][-1], images[j]))
    for k, v in a.items():
        term = poly_const(v, nvars)
        for j, e in enumerate(k):
            if e:
                term = poly_mul(term, pow_cache[j][e])
        out = poly_add(out, term)
    return out


def apply_derivative_monomial(q: Poly, mono: tuple[int, ...], gram) -> Poly:
    """Apply prod_j d_{b_j}^{mono_j} using the basis Gram matrix."""
    out = q
    for j, e in enumerate(mono):
        for _ in range(e):
            out = poly_deriv(out, gram[j])
            if not out:
                return out
    return out


def apolar_pairing(p: Poly, q: Poly, gram) -> Q:
    """<p, q> = d(p*)(q)(base); gram[j][i] = (b_j, b_i)."""
    total = Q(0)
    nvars = len(gram)
    zero = tuple([0] * nvars)
    for mono, c in p.items():
        res = apply_derivative_monomial(q, mono, gram)
        total += c * res.get(zero, Q(0))
    return total


def rref_polys(polys: list[Poly]) -> list[Poly]:
    """Row reduction of a list of polynomials; returns a basis of their span."""
    monos = sorted({m for p in polys for m in p})
    idx = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        if p:
            row = [Q(0)] * len(monos)
            for m, c in p.items():
                row[idx[m]] = c
            rows.append(row)
    basis = []
    pivots: dict[int, list[Q]] = {}
    for row in rows:
        for pc, prow in pivots.items():
            if row[pc]:
                f = row[pc]
                row = [a - f * b for a, b in zip(row, prow)]
        piv = next((i for i, v in enumerate(row) if v), None)
        if piv is None:
            continue
        inv = Q(1) / row[piv]
        row = [inv * v for v in row]
        pivots[piv] = row
    for pc in sorted(pivots):
        row = pivots[pc]
        basis.append({monos[i]: v for i, v in enumerate(row) if v})
    return basis
