"""Brute-force inner products: the provenance oracle for every closed form.

Inner products ``\\int f(x) conj(g(x)) dx`` are evaluated by one of two
routes:

* exact piecewise integration when both factors reduce to polynomial
  pieces times complex exponentials (all basis functions and every
  piecewise FunctionSpec fall in this class) -- the antiderivatives are
  closed forms, so the only error is double rounding;
* adaptive Gauss-Legendre of order 16 with dyadic bisection when the
  gaussian preset is involved, subdividing until the two-level estimate
  difference is below the quadrature tolerance.

Phases of the exponential atoms are reduced modulo one turn in exact
rational arithmetic before rounding, which keeps the exact route accurate
at machine precision even for large frequencies.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .bases import (
    BasisElement,
    BasisFamily,
    FunctionSpec,
    K_elem,
    L_elem,
    haar_dil_atom,
    split_haar_label,
    trans_support,
    dil_support,
)
from .core import (
    DilIndex,
    FCoordVec,
    GCoordVec,
    TransIndex,
    Window,
    cis_frac,
)


class QuadratureError(ValueError):
    """The requested integral cannot be evaluated under the given plan."""


@dataclass(frozen=True)
class QuadPlan:
    """How to integrate: exact piecewise closed forms or sampled GL16."""

    breakpoints: tuple[Fraction, ...] = ()
    rule: str = "auto"  # "auto" | "exact-piecewise" | "gauss-legendre(16)"
    max_subdivisions: int = 40


# -- atoms: p(x) * e^{2 pi i freq x} on [a, b) -------------------------------

@dataclass(frozen=True)
class _Atom:
    a: Fraction
    b: Fraction
    coeffs: tuple[complex, ...]
    freq: Fraction


def _atoms_of(obj) -> list[_Atom] | None:
    """Atom decomposition, or None when only pointwise evaluation exists."""
    if isinstance(obj, FunctionSpec):
        if obj.kind == "gaussian":
            return None
        return [_Atom(lo, hi, coeffs, Fraction(0)) for lo, hi, coeffs in obj.pieces]
    if isinstance(obj, BasisElement):
        fam, idx = obj.fam, obj.index
        if isinstance(idx, TransIndex):
            i, n = idx
            if fam.name == "exponential":
                lo, hi = trans_support(fam, idx)
                return [_Atom(lo, hi, (1.0 + 0j,), Fraction(i))]
            if i == 0:
                lo, hi = trans_support(fam, idx)
                return [_Atom(lo, hi, (1.0 + 0j,), Fraction(0))]
            p, q = split_haar_label(i)
            return _psi_atoms(p, q + (n << p))
        s, j, m = idx
        if fam.name == "exponential":
            lo, hi = dil_support(fam, idx)
            amp = math.sqrt(2.0 ** m)
            return [_Atom(lo, hi, (amp + 0j,), Fraction(j) * Fraction(2) ** m)]
        kind, a, b = haar_dil_atom(s, j, m)
        if kind == "phi":
            step = Fraction(2) ** (-a)
            amp = math.sqrt(2.0 ** a)
            return [_Atom(b * step, (b + 1) * step, (amp + 0j,), Fraction(0))]
        return _psi_atoms(a, b)
    raise TypeError(f"cannot integrate objects of type {type(obj).__name__}")


def _psi_atoms(a: int, b: int) -> list[_Atom]:
    step = Fraction(2) ** (-a)
    amp = math.sqrt(2.0 ** a)
    lo = b * step
    mid = lo + step / 2
    hi = (b + 1) * step
    return [_Atom(lo, mid, (amp + 0j,), Fraction(0)), _Atom(mid, hi, (-amp + 0j,), Fraction(0))]


def _support_of(obj) -> tuple[Fraction, Fraction] | None:
    if isinstance(obj, FunctionSpec):
        return obj.support()
    if isinstance(obj, BasisElement):
        return obj.support()
    raise TypeError(f"no support for {type(obj).__name__}")


def _poly_mul(p: tuple[complex, ...], q: tuple[complex, ...]) -> tuple[complex, ...]:
    out = [0j] * (len(p) + len(q) - 1)
    for i, ci in enumerate(p):
        if ci == 0:
            continue
        for k, ck in enumerate(q):
            out[i + k] += ci * ck
    return tuple(out)


def _int_monomial_exp(l: int, c: complex, h: float) -> complex:
    """integral_0^h u^l e^{c u} du, stable for small and large |c h|."""
    if c == 0:
        return h ** (l + 1) / (l + 1)
    if abs(c) * h < 0.5:
        # series: sum_t c^t h^{l+t+1} / (t! (l+t+1))
        acc = 0j
        term = 1.0 + 0j  # c^t / t!
        for t in range(0, 24):
            acc += term * h ** (l + t + 1) / (l + t + 1)
            term *= c / (t + 1)
            if abs(term) * h ** (l + t + 2) < 1e-20 * max(1.0, abs(acc)):
                break
        return acc
    e = np.exp(c * h)
    val = (e - 1.0) / c
    for deg in range(1, l + 1):
        val = (h ** deg) * e / c - (deg / c) * val
    return complex(val)


def _integrate_atom(coeffs: tuple[complex, ...], freq: Fraction, a: Fraction, b: Fraction) -> complex:
    """integral_a^b p(x) e^{2 pi i freq x} dx with exact phase reduction."""
    h = float(b - a)
    af = float(a)
    # shift to u = x - a
    shifted = [0j] * len(coeffs)
    for k, ck in enumerate(coeffs):
        if ck == 0:
            continue
        for l in range(k + 1):
            shifted[l] += ck * math.comb(k, l) * af ** (k - l)
    c = 2j * math.pi * float(freq)
    acc = 0j
    for l, cl in enumerate(shifted):
        if cl != 0:
            acc += cl * _int_monomial_exp(l, c, h)
    return cis_frac(freq * a) * acc


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gl16(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> complex:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = fn(mid + half * _GL_NODES)
    return half * complex(np.dot(_GL_WEIGHTS, vals))


def _adaptive(fn, a: float, b: float, tol: float, depth: int) -> complex:
    whole = _gl16(fn, a, b)
    mid = 0.5 * (a + b)
    left = _gl16(fn, a, mid)
    right = _gl16(fn, mid, b)
    if abs(whole - (left + right)) <= tol or depth <= 0:
        return left + right
    return _adaptive(fn, a, mid, tol / 2, depth - 1) + _adaptive(fn, mid, b, tol / 2, depth - 1)


def inner_product(f, g, plan: QuadPlan | None = None, quadrature_tol: float = 1e-10) -> complex:
    """integral f(x) conj(g(x)) dx for FunctionSpecs and basis elements."""
    plan = plan or QuadPlan()
    sup_f = _support_of(f)
    sup_g = _support_of(g)
    if sup_f is None or sup_g is None:
        return 0j
    lo = max(sup_f[0], sup_g[0])
    hi = min(sup_f[1], sup_g[1])
    if hi <= lo:
        return 0j

    fa = _atoms_of(f)
    ga = _atoms_of(g)
    if fa is not None and ga is not None and plan.rule in ("auto", "exact-piecewise"):
        acc_re = []
        acc_im = []
        for at_f in fa:
            for at_g in ga:
                a = max(at_f.a, at_g.a)
                b = min(at_f.b, at_g.b)
                if b <= a:
                    continue
                coeffs = _poly_mul(at_f.coeffs, tuple(c.conjugate() for c in at_g.coeffs))
                val = _integrate_atom(coeffs, at_f.freq - at_g.freq, a, b)
                acc_re.append(val.real)
                acc_im.append(val.imag)
        return complex(math.fsum(acc_re), math.fsum(acc_im))

    if plan.rule == "exact-piecewise":
        raise QuadratureError("exact-piecewise rule cannot integrate unbounded-support factors")

    # sampled route: GL16 with dyadic bisection on breakpoint-split intervals
    points = {Fraction(lo), Fraction(hi)}
    for obj, atoms in ((f, fa), (g, ga)):
        if atoms is not None:
            for at in atoms:
                points.update((at.a, at.b))
    points.update(plan.breakpoints)
    cuts = sorted(p for p in points if lo <= p <= hi)
    if cuts[0] != lo:
        cuts.insert(0, Fraction(lo))
    if cuts[-1] != hi:
        cuts.append(Fraction(hi))

    f_eval = (lambda xs: np.array([f.evaluate(x) for x in xs], dtype=complex))
    g_eval = (lambda xs: np.array([g.evaluate(x) for x in xs], dtype=complex))

    def integrand(xs: np.ndarray) -> np.ndarray:
        return f_eval(xs) * np.conjugate(g_eval(xs))

    total_len = float(hi - lo)
    acc = 0j
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        share = quadrature_tol * float(b - a) / total_len
        acc += _adaptive(integrand, float(a), float(b), share, plan.max_subdivisions)
    return acc


# -- coefficient grids --------------------------------------------------------

def _threads() -> int:
    raw = os.environ.get("SWL_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn, items: Iterable):
    items = list(items)
    n = _threads()
    if n <= 1 or len(items) < 4:
        return [fn(it) for it in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _overlaps(sup, lo: Fraction, hi: Fraction) -> bool:
    return sup is not None and sup[0] < hi and sup[1] > lo


def oracle_F_coords(f: FunctionSpec, fam: BasisFamily, w: Window,
                    plan: QuadPlan | None = None, quadrature_tol: float = 1e-10) -> FCoordVec:
    """All translation-model coefficients of ``f`` inside the window."""
    sup = _support_of(f)
    work = []
    for i in w.trans_labels:
        for n in range(w.trans_range[0], w.trans_range[1] + 1):
            elem = L_elem(fam, i, n)
            if _overlaps(sup, *elem.support()):
                work.append((TransIndex(i, n), elem))

    def one(pair):
        idx, elem = pair
        return idx, inner_product(f, elem, plan, quadrature_tol)

    return FCoordVec(_pmap(one, work))


def oracle_G_coords(f: FunctionSpec, fam: BasisFamily, w: Window,
                    plan: QuadPlan | None = None, quadrature_tol: float = 1e-10) -> GCoordVec:
    """All dilation-model coefficients of ``f`` inside the window."""
    sup = _support_of(f)
    work = []
    for s, j in w.dil_labels:
        for m in range(w.dil_range[0], w.dil_range[1] + 1):
            elem = K_elem(fam, s, j, m)
            if _overlaps(sup, *elem.support()):
                work.append((DilIndex(s, j, m), elem))

    def one(pair):
        idx, elem = pair
        return idx, inner_product(f, elem, plan, quadrature_tol)

    return GCoordVec(_pmap(one, work))


def norm_sq_of_spec(f: FunctionSpec, plan: QuadPlan | None = None,
                    quadrature_tol: float = 1e-12) -> float:
    """||f||^2 by direct integration (used for truncation-tail accounting)."""
    return inner_product(f, f, plan, quadrature_tol).real


def g_window_tail_bound(f: FunctionSpec, m_max: int,
                        quadrature_tol: float = 1e-12) -> float:
    """Bound on the dilation-coefficient mass beyond the scale cap.

    Coefficients at scales above ``m_max`` only see the part of ``f``
    inside (-2^{-m_max}, 2^{-m_max}), so their total mass is at most the
    squared norm of ``f`` restricted there.
    """
    half = Fraction(1, 1 << m_max) if m_max >= 0 else Fraction(1 << (-m_max))
    if f.kind == "gaussian":
        def integrand(xs: np.ndarray) -> np.ndarray:
            vals = np.array([f.evaluate(x) for x in xs], dtype=complex)
            return (vals * np.conjugate(vals)).real.astype(complex)

        return _adaptive(integrand, float(-half), float(half), quadrature_tol, 30).real
    pieces = []
    for lo, hi, coeffs in f.pieces:
        a, b = max(lo, -half), min(hi, half)
        if b > a:
            pieces.append((a, b, coeffs))
    if not pieces:
        return 0.0
    clipped = FunctionSpec.piecewise(pieces)
    return inner_product(clipped, clipped, None, quadrature_tol).real
