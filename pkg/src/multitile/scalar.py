"""Exact arithmetic over Q and over Q-linear spans of declared irrational generators.

Every coordinate in the system is a :class:`Scalar`: a rational part plus
rational coefficients over a finite set of generators.  Three tiers exist:

* pure rational (empty coefficient support) -- a full ordered field;
* a single real quadratic extension Q(sqrt m) -- a full ordered field
  (``field_mode``), with algebraic sign determination;
* a general Q-linear span of declared generators -- closed under +, -, and
  scaling by rationals only; signs are decided by certified interval
  refinement and never guessed.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from .errors import FieldClosureViolation, PrecisionUnreachable, SignIndeterminate

Rational = Fraction

_START_BITS = 32
_DEFAULT_CAP_BITS = 1024
_ENV_CAP = "MULTITILE_MAX_PRECISION_BITS"

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
_SMALL_PRIMES += [p for p in range(53, 10000) if all(p % q for q in range(2, int(p**0.5) + 1))]


def _precision_cap_bits() -> int:
    raw = os.environ.get(_ENV_CAP)
    if raw is None:
        return _DEFAULT_CAP_BITS
    try:
        bits = int(raw)
    except ValueError:
        return _DEFAULT_CAP_BITS
    return max(bits, _START_BITS)


def _square_split(n: int) -> tuple[int, int]:
    """Return (s, m) with n = s^2 * m and m free of small square factors."""
    s = 1
    r = math.isqrt(n)
    if r * r == n:
        return r, 1
    for p in _SMALL_PRIMES:
        p2 = p * p
        if p2 > n:
            break
        while n % p2 == 0:
            n //= p2
            s *= p
    return s, n


class Generator:
    """Base class for declared irrational generators.

    Generators are globally ordered (quadratic surds by radicand, then
    symbolic by name) so scalar equality is canonical within a run.
    """

    __slots__ = ()

    def sort_key(self):
        raise NotImplementedError

    def interval(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """A certified rational enclosure of the generator's value, width <= ``width``."""
        raise NotImplementedError

    def enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """Best certified enclosure available; aims for ``width`` but never raises."""
        return self.interval(width)


class QuadraticSurd(Generator):
    """sqrt(radicand) for a positive non-square integer radicand.

    Square factors detectable by small-prime trial division are stripped at
    construction (see :func:`scalar_sqrt`), so distinct instances are
    Q-linearly independent for all ordinary inputs.
    """

    __slots__ = ("radicand",)

    def __init__(self, radicand: int):
        radicand = int(radicand)
        if radicand <= 1:
            raise ValueError(f"radicand must be an integer >= 2, got {radicand}")
        if math.isqrt(radicand) ** 2 == radicand:
            raise ValueError(f"radicand {radicand} is a perfect square")
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, *a):
        raise AttributeError("QuadraticSurd is immutable")

    def __repr__(self):
        return f"QuadraticSurd({self.radicand})"

    def __eq__(self, other):
        return isinstance(other, QuadraticSurd) and self.radicand == other.radicand

    def __hash__(self):
        return hash(("sqrt", self.radicand))

    def sort_key(self):
        return (0, self.radicand, "")

    def key(self) -> str:
        return f"sqrt:{self.radicand}"

    def interval(self, width: Fraction) -> tuple[Fraction, Fraction]:
        # floor(2^k sqrt(m)) via integer square root; one-shot, no iteration.
        k = max(1, (1 - (width.numerator.bit_length() - width.denominator.bit_length())))
        while Fraction(1, 1 << k) > width:
            k += 8
        n = math.isqrt(self.radicand << (2 * k))
        lo = Fraction(n, 1 << k)
        return lo, lo + Fraction(1, 1 << k)


class SymbolicGenerator(Generator):
    """A named irrational with a user-certified enclosing interval.

    An optional ``refiner`` callback maps a target width to a tighter
    certified interval; without one, requests below the supplied width raise
    :class:`PrecisionUnreachable`.  Q-linear independence from the other
    declared generators is asserted by the user, not verified.
    """

    __slots__ = ("name", "_lo", "_hi", "_refiner")

    def __init__(self, name: str, lo, hi, refiner=None):
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo < hi:
            raise ValueError(f"symbolic generator {name!r} needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)
        object.__setattr__(self, "_refiner", refiner)

    def __setattr__(self, *a):
        raise AttributeError("SymbolicGenerator is immutable")

    def __repr__(self):
        return f"SymbolicGenerator({self.name!r}, [{self._lo}, {self._hi}])"

    def __eq__(self, other):
        return isinstance(other, SymbolicGenerator) and self.name == other.name

    def __hash__(self):
        return hash(("sym", self.name))

    def sort_key(self):
        return (1, 0, self.name)

    def key(self) -> str:
        return f"sym:{self.name}"

    def interval(self, width: Fraction) -> tuple[Fraction, Fraction]:
        lo, hi = self._lo, self._hi
        if hi - lo <= width:
            return lo, hi
        if self._refiner is None:
            raise PrecisionUnreachable(
                f"symbolic generator {self.name!r} has no refiner; "
                f"supplied width {hi - lo} > requested {width}"
            )
        nlo, nhi = self._refiner(width)
        nlo, nhi = Fraction(nlo), Fraction(nhi)
        # Refinements must stay inside the certified enclosure and shrink it.
        nlo, nhi = max(nlo, lo), min(nhi, hi)
        if not (nlo <= nhi and nhi - nlo < hi - lo):
            raise PrecisionUnreachable(
                f"refiner for {self.name!r} did not strictly shrink the interval"
            )
        if nhi - nlo > width:
            raise PrecisionUnreachable(
                f"refiner for {self.name!r} returned width {nhi - nlo} > requested {width}"
            )
        return nlo, nhi

    def enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        try:
            return self.interval(width)
        except PrecisionUnreachable:
            return self._lo, self._hi


class Scalar:
    """rational_part + sum(coeff[g] * g) over declared generators.

    Immutable.  Equality and hashing are coefficient-wise.  Comparisons go
    through exact sign determination and may raise
    :class:`SignIndeterminate` for symbolic generators.
    """

    __slots__ = ("rat", "coeffs", "_hash")

    def __init__(self, rat=0, coeffs=None):
        object.__setattr__(self, "rat", Fraction(rat))
        clean = {}
        if coeffs:
            for g, c in coeffs.items():
                c = Fraction(c)
                if c:
                    clean[g] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def _make(rat: Fraction, coeffs: dict) -> "Scalar":
        s = object.__new__(Scalar)
        object.__setattr__(s, "rat", rat)
        object.__setattr__(s, "coeffs", coeffs)
        object.__setattr__(s, "_hash", None)
        return s

    # -- classification -------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not self.coeffs

    @property
    def field_mode(self) -> bool:
        """True iff the support is at most one quadratic surd and no symbolic."""
        gens = list(self.coeffs)
        if not gens:
            return True
        return len(gens) == 1 and isinstance(gens[0], QuadraticSurd)

    def _surd_parts(self) -> tuple[Fraction, Fraction, int] | None:
        """(p, q, m) with self = p + q*sqrt(m), or None outside field mode."""
        if not self.coeffs:
            return self.rat, Fraction(0), 0
        if len(self.coeffs) != 1:
            return None
        (g, c), = self.coeffs.items()
        if not isinstance(g, QuadraticSurd):
            return None
        return self.rat, c, g.radicand

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = to_scalar(other)
        if not other.coeffs:
            return Scalar._make(self.rat + other.rat, self.coeffs)
        if not self.coeffs:
            return Scalar._make(self.rat + other.rat, other.coeffs)
        coeffs = dict(self.coeffs)
        for g, c in other.coeffs.items():
            v = coeffs.get(g, 0) + c
            if v:
                coeffs[g] = v
            else:
                coeffs.pop(g, None)
        return Scalar._make(self.rat + other.rat, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(-self.rat, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-to_scalar(other))

    def __rsub__(self, other):
        return to_scalar(other) + (-self)

    def __mul__(self, other):
        other = to_scalar(other)
        if not other.coeffs:
            q = other.rat
            if not q:
                return _ZERO
            return Scalar._make(self.rat * q, {g: c * q for g, c in self.coeffs.items()})
        if not self.coeffs:
            q = self.rat
            if not q:
                return _ZERO
            return Scalar._make(other.rat * q, {g: c * q for g, c in other.coeffs.items()})
        a, b = self._surd_parts(), other._surd_parts()
        if a is None or b is None or a[2] != b[2]:
            raise FieldClosureViolation(
                "multiplication is defined only within a single quadratic field; "
                f"got supports {sorted(g.key() for g in self.coeffs)} and "
                f"{sorted(g.key() for g in other.coeffs)}"
            )
        p1, q1, m = a
        p2, q2, _ = b
        rat = p1 * p2 + q1 * q2 * m
        surd_coeff = p1 * q2 + p2 * q1
        if not surd_coeff:
            return Scalar._make(rat, {})
        return Scalar._make(rat, {QuadraticSurd(m): surd_coeff})

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = to_scalar(other)
        if not other.coeffs:
            if not other.rat:
                raise ZeroDivisionError("scalar division by zero")
            return self * Scalar._make(1 / other.rat, {})
        b = other._surd_parts()
        if b is None:
            raise FieldClosureViolation(
                "division is defined only within a single quadratic field"
            )
        p, q, m = b
        norm = p * p - q * q * m
        if not norm:
            # p^2 = q^2 m would make sqrt(m) rational; impossible for valid surds.
            raise ZeroDivisionError("scalar division by zero")
        conj = Scalar._make(p, {QuadraticSurd(m): -q})
        return (self * conj) * Scalar._make(Fraction(1, 1) / norm, {})

    def __rtruediv__(self, other):
        return to_scalar(other) / self

    # -- equality / ordering ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = to_scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.rat == other.rat and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            items = tuple(sorted(((g.sort_key(), c) for g, c in self.coeffs.items())))
            h = hash((self.rat, items))
            object.__setattr__(self, "_hash", h)
        return h

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}; raises SignIndeterminate only past the cap."""
        if not self.coeffs:
            r = self.rat
            return (r > 0) - (r < 0)
        parts = self._surd_parts()
        if parts is not None:
            p, q, m = parts
            sq = (q > 0) - (q < 0)
            if not p:
                return sq
            sp = 1 if p > 0 else -1
            if sp == sq:
                return sp
            # p and q*sqrt(m) pull in opposite directions: compare p^2 with q^2 m.
            diff = p * p - q * q * m
            if diff == 0:
                raise AssertionError("sqrt of a non-square compared equal to a rational")
            return sp if diff > 0 else sq
        return self._interval_sign()

    def _interval_sign(self) -> int:
        cap = _precision_cap_bits()
        bits = _START_BITS
        prev = None
        while True:
            lo, hi = self._enclosure(Fraction(1, 1 << bits))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                return 0
            if bits >= cap or (lo, hi) == prev:
                raise SignIndeterminate(
                    f"sign of {self!r} undecided at interval width 2^-{bits}; "
                    f"set {_ENV_CAP} to raise the cap or refine the generators"
                )
            prev = (lo, hi)
            bits = min(bits * 2, cap)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.rat) or bool(self.coeffs)

    # -- enclosures --------------------------------------------------------

    def interval(self, width) -> tuple[Fraction, Fraction]:
        """A rational interval [lo, hi] containing self with hi - lo <= width."""
        return self._bracket(width, strict=True)

    def _enclosure(self, width) -> tuple[Fraction, Fraction]:
        """Best available enclosure; width is a target, not a contract."""
        return self._bracket(width, strict=False)

    def _bracket(self, width, strict: bool) -> tuple[Fraction, Fraction]:
        width = Fraction(width)
        if width <= 0:
            raise ValueError("interval width must be positive")
        if not self.coeffs:
            return self.rat, self.rat
        share = width / len(self.coeffs)
        lo = hi = self.rat
        for g, c in self.coeffs.items():
            target = share / abs(c)
            glo, ghi = g.interval(target) if strict else g.enclosure(target)
            if c > 0:
                lo, hi = lo + c * glo, hi + c * ghi
            else:
                lo, hi = lo + c * ghi, hi + c * glo
        return lo, hi

    def floor(self) -> int:
        """Largest integer n with n <= self; exact."""
        if not self.coeffs:
            return self.rat.numerator // self.rat.denominator
        lo, hi = self._enclosure(Fraction(1, 4))
        first = lo.numerator // lo.denominator
        last = hi.numerator // hi.denominator
        for cand in range(first, last + 1):
            if (self - cand).sign() >= 0 and (self - (cand + 1)).sign() < 0:
                return cand
        raise AssertionError("floor bracketing failed")

    def to_float(self) -> float:
        lo, hi = self.interval(Fraction(1, 1 << 64))
        return float((lo + hi) / 2)

    # -- presentation -------------------------------------------------------

    def __repr__(self):
        if not self.coeffs:
            return f"Scalar({self.rat})"
        terms = [str(self.rat)] if self.rat else []
        for g in sorted(self.coeffs, key=lambda g: g.sort_key()):
            terms.append(f"{self.coeffs[g]}*{g.key()}")
        return "Scalar(" + " + ".join(terms) + ")"


_ZERO = Scalar._make(Fraction(0), {})
_ONE = Scalar._make(Fraction(1), {})

_ONEW = object.__new__
_SET_RAT = Scalar.rat.__set__
_SET_COEFFS = Scalar.coeffs.__set__
_SET_HASH = Scalar._hash.__set__
_EMPTY_COEFFS: dict = {}  # shared by fast-path rationals; never mutated


def _rat_scalar(num: int, den: int) -> Scalar:
    """Fast rational Scalar from integers, den > 0; bulk-enumeration hot path."""
    if den == 1:
        f = _ONEW(Fraction)
        f._numerator = num
        f._denominator = 1
    else:
        g = math.gcd(num, den)
        f = _ONEW(Fraction)
        f._numerator = num // g
        f._denominator = den // g
    s = _ONEW(Scalar)
    _SET_RAT(s, f)
    _SET_COEFFS(s, _EMPTY_COEFFS)
    _SET_HASH(s, None)
    return s


def to_scalar(x) -> Scalar:
    """Coerce an int, Fraction, or Scalar to a Scalar."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, Fraction):
        return Scalar._make(x, {})
    if isinstance(x, (int, str)):
        return Scalar._make(Fraction(x), {})
    raise TypeError(f"cannot interpret {type(x).__name__} as Scalar (floats are refused)")


def scalar_sqrt(radicand, coefficient=1) -> Scalar:
    """coefficient * sqrt(radicand) as a Scalar, for a positive rational radicand.

    Square parts are folded into the coefficient: sqrt(8) -> 2*sqrt(2),
    sqrt(1/2) -> (1/2)*sqrt(2).
    """
    radicand = Fraction(radicand)
    coefficient = Fraction(coefficient)
    if radicand <= 0:
        raise ValueError("radicand must be positive")
    # sqrt(p/q) = sqrt(p*q)/q
    n = radicand.numerator * radicand.denominator
    s, m = _square_split(n)
    coeff = coefficient * Fraction(s, radicand.denominator)
    if m == 1:
        return Scalar._make(coeff, {})
    if not coeff:
        return _ZERO
    return Scalar._make(Fraction(0), {QuadraticSurd(m): coeff})


def scalar_symbolic(gen: SymbolicGenerator, coefficient=1, rational=0) -> Scalar:
    coefficient = Fraction(coefficient)
    if not coefficient:
        return Scalar._make(Fraction(rational), {})
    return Scalar._make(Fraction(rational), {gen: coefficient})


def sign(x) -> int:
    return to_scalar(x).sign()


def floor(x) -> int:
    return to_scalar(x).floor()


def ceil(x) -> int:
    return -((-to_scalar(x)).floor())


def to_interval(x, precision) -> tuple[Fraction, Fraction]:
    return to_scalar(x).interval(precision)
