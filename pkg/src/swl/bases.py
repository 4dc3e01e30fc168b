"""Concrete basis families and symbolic test functions.

Two families are supported, both with dilation ratio 2 and translation
step 1:

* ``exponential`` -- labels run over all integers; the generators are the
  complex exponentials e^{2*pi*i*k*x} restricted to [0,1) on the
  translation side and to [1,2) / [-2,-1) on the dilation side.
* ``haar`` -- labels run over the non-negative integers with the composite
  label 2^p + q standing for the Haar wavelet at scale p and offset q
  (recovered by bit inspection); label 0 is the box function.

All intervals are half-open [a, b); pointwise values at breakpoints follow
the left-closed rule.  This is a measure-zero convention with no effect on
any integral, fixed once so evaluation is deterministic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import DilIndex, MINUS, PLUS, TransIndex


class InvalidLabelError(ValueError):
    """A basis label outside the family's declared index set."""


class UnboundedSupportError(ValueError):
    """An operation that needs compact support got a function without one."""


@dataclass(frozen=True)
class BasisFamily:
    """One of the two concrete basis families; r=2 and t=1 are fixed."""

    name: str
    r: int = 2
    t: int = 1

    def __post_init__(self):
        if self.name not in ("exponential", "haar"):
            raise ValueError(f"unknown basis family {self.name!r}")
        if self.r != 2 or self.t != 1:
            raise ValueError("only r=2, t=1 is supported")


EXPONENTIAL = BasisFamily("exponential")
HAAR = BasisFamily("haar")


def family(name: str) -> BasisFamily:
    if name == "exponential":
        return EXPONENTIAL
    if name == "haar":
        return HAAR
    raise ValueError(f"unknown basis family {name!r}")


def check_trans_label(fam: BasisFamily, i: int) -> int:
    i = int(i)
    if fam.name == "haar" and i < 0:
        raise InvalidLabelError(f"haar labels are non-negative, got i={i}")
    return i


def check_dil_label(fam: BasisFamily, s: int, j: int) -> tuple[int, int]:
    if s not in (PLUS, MINUS):
        raise InvalidLabelError(f"sign must be +1 or -1, got {s!r}")
    j = int(j)
    if fam.name == "haar" and j < 0:
        raise InvalidLabelError(f"haar labels are non-negative, got j={j}")
    return s, j


def split_haar_label(label: int) -> tuple[int, int]:
    """Decompose a positive Haar label 2^p + q into (p, q) with 0 <= q < 2^p."""
    if label <= 0:
        raise InvalidLabelError(f"wavelet labels are positive, got {label}")
    p = label.bit_length() - 1
    return p, label - (1 << p)


# -- pointwise Haar atoms -----------------------------------------------------

def _haar_psi(y: float) -> float:
    if 0.0 <= y < 0.5:
        return 1.0
    if 0.5 <= y < 1.0:
        return -1.0
    return 0.0


def _psi_scaled(a: int, b: int, x: float) -> float:
    # 2^{a/2} psi(2^a x - b)
    return math.sqrt(2.0 ** a) * _haar_psi((2.0 ** a) * x - b)


def haar_dil_atom(s: int, j: int, m: int) -> tuple[str, int, int]:
    """Map a Haar dilation-side index to a concrete ("psi"|"phi", scale, shift).

    The positive branch at scale 0 is the orthonormal Haar basis of
    L2[1,2): the box on [1,2) plus the wavelets supported there; the
    negative branch mirrors it on [-2,-1).  Dilating by 2^m shifts the
    wavelet scale by m.
    """
    if j == 0:
        return ("phi", m, 1 if s == PLUS else -2)
    p, q = split_haar_label(j)
    if s == PLUS:
        return ("psi", p + m, (1 << p) + q)
    return ("psi", p + m, -(1 << (p + 1)) + q)


def eval_L(fam: BasisFamily, idx: TransIndex, x: float) -> complex:
    """Pointwise value of the shifted translation-side basis function."""
    i, n = TransIndex(*idx)
    i = check_trans_label(fam, i)
    if fam.name == "exponential":
        if n <= x < n + 1:
            t = (i * (x - n)) % 1.0
            return complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
        return 0j
    # haar
    if i == 0:
        return complex(1.0 if n <= x < n + 1 else 0.0)
    p, q = split_haar_label(i)
    return complex(_psi_scaled(p, q + (n << p), x))


def eval_K(fam: BasisFamily, idx: DilIndex, x: float) -> complex:
    """Pointwise value of the dilated dilation-side basis function."""
    s, j, m = DilIndex(*idx)
    s, j = check_dil_label(fam, s, j)
    if fam.name == "exponential":
        lo, hi = dil_support(fam, DilIndex(s, j, m))
        if lo <= x < hi:
            t = (Fraction(j) * Fraction(2) ** m * Fraction(x)) % 1
            amp = math.sqrt(2.0 ** m)
            return amp * complex(math.cos(2 * math.pi * float(t)), math.sin(2 * math.pi * float(t)))
        return 0j
    kind, a, b = haar_dil_atom(s, j, m)
    if kind == "psi":
        return complex(_psi_scaled(a, b, x))
    # box 2^{a/2} chi_{[b*2^-a, (b+1)*2^-a)}
    amp = math.sqrt(2.0 ** a)
    lo = b * 2.0 ** (-a)
    hi = (b + 1) * 2.0 ** (-a)
    return complex(amp if lo <= x < hi else 0.0)


def trans_support(fam: BasisFamily, idx: TransIndex) -> tuple[Fraction, Fraction]:
    i, n = TransIndex(*idx)
    check_trans_label(fam, i)
    if fam.name == "exponential" or i == 0:
        return Fraction(n), Fraction(n + 1)
    p, q = split_haar_label(i)
    step = Fraction(1, 1 << p)
    return n + q * step, n + (q + 1) * step


def dil_support(fam: BasisFamily, idx: DilIndex) -> tuple[Fraction, Fraction]:
    s, j, m = DilIndex(*idx)
    check_dil_label(fam, s, j)
    scale = Fraction(2) ** (-m)
    if fam.name == "exponential" or j == 0:
        if s == PLUS:
            return scale, 2 * scale
        return -2 * scale, -scale
    kind, a, b = haar_dil_atom(s, j, m)
    step = Fraction(2) ** (-a)
    return b * step, (b + 1) * step


@dataclass(frozen=True)
class BasisElement:
    """A single basis function bound to its family, usable by the oracle."""

    fam: BasisFamily
    index: TransIndex | DilIndex

    def evaluate(self, x: float) -> complex:
        if isinstance(self.index, TransIndex):
            return eval_L(self.fam, self.index, x)
        return eval_K(self.fam, self.index, x)

    def support(self) -> tuple[Fraction, Fraction]:
        if isinstance(self.index, TransIndex):
            return trans_support(self.fam, self.index)
        return dil_support(self.fam, self.index)


def L_elem(fam: BasisFamily, i: int, n: int) -> BasisElement:
    return BasisElement(fam, TransIndex(check_trans_label(fam, i), int(n)))


def K_elem(fam: BasisFamily, s: int, j: int, m: int) -> BasisElement:
    s, j = check_dil_label(fam, s, j)
    return BasisElement(fam, DilIndex(s, j, int(m)))


# -- symbolic test functions --------------------------------------------------

Piece = tuple[Fraction, Fraction, tuple[complex, ...]]


@dataclass(frozen=True)
class FunctionSpec:
    """Symbolic square-integrable test function.

    Either a finite list of polynomial pieces on disjoint half-open
    intervals with dyadic-rational breakpoints, or the gaussian preset
    exp(-x^2 / (2 sigma^2)) (peak value 1).
    """

    kind: str  # "piecewise" | "gaussian"
    pieces: tuple[Piece, ...] = ()
    sigma: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.kind == "piecewise":
            prev_hi = None
            for lo, hi, coeffs in self.pieces:
                if not (_is_dyadic(lo) and _is_dyadic(hi)):
                    raise ValueError(f"breakpoints must be dyadic rationals, got [{lo}, {hi})")
                if hi <= lo:
                    raise ValueError(f"empty piece [{lo}, {hi})")
                if prev_hi is not None and lo < prev_hi:
                    raise ValueError("pieces must be disjoint and sorted")
                prev_hi = hi
        elif self.kind == "gaussian":
            if self.sigma <= 0:
                raise ValueError("gaussian sigma must be positive")
        else:
            raise ValueError(f"unknown FunctionSpec kind {self.kind!r}")

    # constructors
    @staticmethod
    def piecewise(pieces, label: str = "") -> "FunctionSpec":
        norm = tuple(
            (Fraction(lo), Fraction(hi), tuple(complex(c) for c in coeffs))
            for lo, hi, coeffs in sorted(pieces, key=lambda p: Fraction(p[0]))
        )
        return FunctionSpec("piecewise", norm, label=label)

    @staticmethod
    def haar_scaling() -> "FunctionSpec":
        return FunctionSpec.piecewise([(0, 1, (1,))], label="haar_scaling")

    @staticmethod
    def haar_wavelet() -> "FunctionSpec":
        return FunctionSpec.piecewise(
            [(0, Fraction(1, 2), (1,)), (Fraction(1, 2), 1, (-1,))], label="haar_wavelet"
        )

    @staticmethod
    def indicator(a, b) -> "FunctionSpec":
        return FunctionSpec.piecewise([(a, b, (1,))], label=f"indicator({a},{b})")

    @staticmethod
    def gaussian(sigma: float = 1.0) -> "FunctionSpec":
        return FunctionSpec("gaussian", sigma=float(sigma), label=f"gaussian({sigma})")

    @staticmethod
    def zero() -> "FunctionSpec":
        return FunctionSpec("piecewise", (), label="zero")

    # behaviour
    def evaluate(self, x: float) -> complex:
        if self.kind == "gaussian":
            return complex(math.exp(-(x * x) / (2.0 * self.sigma * self.sigma)))
        for lo, hi, coeffs in self.pieces:
            if lo <= x < hi:
                acc = 0j
                for c in reversed(coeffs):
                    acc = acc * x + c
                return acc
        return 0j

    def support(self) -> tuple[Fraction, Fraction] | None:
        """Support interval, or None for the empty (zero) function."""
        if self.kind == "gaussian":
            half = Fraction(10 * self.sigma).limit_denominator(1 << 20)
            return -half, half
        if not self.pieces:
            return None
        return self.pieces[0][0], self.pieces[-1][1]

    def is_compact(self) -> bool:
        return self.kind == "piecewise"


def eval_spec(spec: FunctionSpec, x: float) -> complex:
    return spec.evaluate(x)


def translate_spec(spec: FunctionSpec, q: int) -> FunctionSpec:
    """Exact T^q: x -> x - q on a piecewise-polynomial spec."""
    if not spec.is_compact():
        raise UnboundedSupportError("translate_spec needs a piecewise spec")
    out = []
    for lo, hi, coeffs in spec.pieces:
        out.append((lo + q, hi + q, _poly_shift(coeffs, -q)))
    return FunctionSpec.piecewise(out, label=f"T^{q}({spec.label})")


def dilate_spec(spec: FunctionSpec, p: int) -> FunctionSpec:
    """Exact D^p: f(x) -> 2^{p/2} f(2^p x) on a piecewise-polynomial spec."""
    if not spec.is_compact():
        raise UnboundedSupportError("dilate_spec needs a piecewise spec")
    amp = math.sqrt(2.0 ** p)
    factor = Fraction(2) ** p
    out = []
    for lo, hi, coeffs in spec.pieces:
        scaled = tuple(amp * c * (2.0 ** p) ** k for k, c in enumerate(coeffs))
        out.append((lo / factor, hi / factor, scaled))
    return FunctionSpec.piecewise(out, label=f"D^{p}({spec.label})")


def apply_DT(spec: FunctionSpec, p: int, q: int) -> FunctionSpec:
    """Exact D^p T^q on a piecewise spec."""
    return dilate_spec(translate_spec(spec, q), p)


def _poly_shift(coeffs: tuple[complex, ...], a) -> tuple[complex, ...]:
    # p(x + a) expanded in x
    a = complex(a)
    out = [0j] * len(coeffs)
    for k, c in enumerate(coeffs):
        for l in range(k + 1):
            out[l] += c * math.comb(k, l) * a ** (k - l)
    return tuple(out)


def _is_dyadic(x: Fraction) -> bool:
    d = Fraction(x).denominator
    return d & (d - 1) == 0


# -- mini-language ------------------------------------------------------------

_NUM = r"-?\d+(?:/\d+|\.\d+)?"
_PRESET_RE = re.compile(r"^(haar_wavelet|haar_scaling|zero)$")
_INDICATOR_RE = re.compile(rf"^indicator\(\s*({_NUM})\s*,\s*({_NUM})\s*\)$")
_GAUSSIAN_RE = re.compile(r"^gaussian\(\s*(\d+(?:\.\d+)?(?:/\d+)?)\s*\)$")
_PIECEWISE_RE = re.compile(r"^piecewise\[(.*)\]$", re.DOTALL)
_PIECE_RE = re.compile(rf"^\(\s*({_NUM})\s*,\s*({_NUM})\s*\)\s*:\s*(.+)$")


class SpecParseError(ValueError):
    """Malformed FunctionSpec text."""


def _parse_number(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecParseError(f"bad numeric literal {text!r}") from exc


def _parse_poly(text: str) -> tuple[complex, ...]:
    # c0 + c1*x + c2*x^2 ...; '**' also accepted for exponents
    text = text.replace("**", "^").replace(" ", "")
    if not text:
        raise SpecParseError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", text)
    coeffs: dict[int, complex] = {}
    for term in terms:
        m = re.match(rf"^([+-]?)((?:{_NUM}))?(?:\*?x(?:\^(\d+))?)?$", term)
        if not m or (m.group(2) is None and "x" not in term):
            raise SpecParseError(f"bad polynomial term {term!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = float(_parse_number(m.group(2))) if m.group(2) else 1.0
        power = int(m.group(3)) if m.group(3) else (1 if "x" in term else 0)
        coeffs[power] = coeffs.get(power, 0j) + sign * coeff
    top = max(coeffs)
    return tuple(coeffs.get(k, 0j) for k in range(top + 1))


def parse_function_spec(text: str) -> FunctionSpec:
    """Parse the FunctionSpec mini-language.

    Accepted forms: ``haar_wavelet``, ``haar_scaling``, ``zero``,
    ``indicator(a,b)``, ``gaussian(sigma)`` and
    ``piecewise[(a,b):c0+c1*x+...; ...]`` with dyadic-rational literals
    like ``3/8``.
    """
    text = text.strip()
    if _PRESET_RE.match(text):
        return {
            "haar_wavelet": FunctionSpec.haar_wavelet,
            "haar_scaling": FunctionSpec.haar_scaling,
            "zero": FunctionSpec.zero,
        }[text]()
    m = _INDICATOR_RE.match(text)
    if m:
        a, b = _parse_number(m.group(1)), _parse_number(m.group(2))
        if not (_is_dyadic(a) and _is_dyadic(b)):
            raise SpecParseError("indicator endpoints must be dyadic rationals")
        if b <= a:
            raise SpecParseError("indicator needs a < b")
        return FunctionSpec.indicator(a, b)
    m = _GAUSSIAN_RE.match(text)
    if m:
        return FunctionSpec.gaussian(float(_parse_number(m.group(1))))
    m = _PIECEWISE_RE.match(text)
    if m:
        pieces = []
        for chunk in m.group(1).split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            pm = _PIECE_RE.match(chunk)
            if not pm:
                raise SpecParseError(f"bad piece {chunk!r}")
            lo, hi = _parse_number(pm.group(1)), _parse_number(pm.group(2))
            if not (_is_dyadic(lo) and _is_dyadic(hi)):
                raise SpecParseError("piece breakpoints must be dyadic rationals")
            pieces.append((lo, hi, _parse_poly(pm.group(3))))
        if not pieces:
            raise SpecParseError("piecewise[] needs at least one piece")
        try:
            return FunctionSpec.piecewise(pieces, label=text)
        except ValueError as exc:
            raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"cannot parse function spec {text!r}")
