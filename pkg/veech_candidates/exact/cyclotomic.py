"""
Exact arithmetic in cyclotomic fields.

An element of Q(ζ_n) is stored in the power basis ζ_n^j, 0 <= j < φ(n), as integer numerators
over one positive common denominator in lowest terms. Products and Galois images are reduced
with a cached table of the powers ζ_n^k, φ(n) <= k < n, so the arithmetic never leaves Python
integers. Values with different conductors are combined in the field of the least common multiple
of the conductors. The minimal conductor of a value is computed lazily, on serialization and
explicit request; hashing uses normalized traces, which do not depend on the conductor.
"""
import functools
import logging
import math
from fractions import Fraction

from mpmath import iv
from sympy import Matrix, Poly, Rational, Symbol, cyclotomic_poly, divisors, totient
from sympy.ntheory import mobius

logger = logging.getLogger(__name__)

_X = Symbol("x")

# Precision (bits) of the first interval evaluation in ``real_sign``.
_INITIAL_PRECISION = 53

# Relative size below which a floating point evaluation does not decide a sign.
_FLOAT_SIGN_MARGIN = 1e-10


class CyclotomicZeroDivisionError(ZeroDivisionError):
    ...


class NotRealError(ValueError):
    ...


@functools.lru_cache(maxsize=None)
def euler_phi(n):
    """Euler's totient of ``n`` as a Python ``int``."""
    return int(totient(n))


@functools.lru_cache(maxsize=None)
def _reduction_table(n):
    """
    Rows ζ_n^k for φ(n) <= k < n in the power basis, as sparse ``(index, coefficient)`` pairs.
    """
    phi = euler_phi(n)
    modulus = [int(c) for c in reversed(Poly(cyclotomic_poly(n, _X), _X).all_coeffs())]
    current = [-a for a in modulus[:phi]]
    table = []
    for _ in range(phi, n):
        table.append(tuple((i, c) for i, c in enumerate(current) if c))
        top = current[-1]
        current = [0] + current[:-1]
        if top:
            current = [c - top * a for c, a in zip(current, modulus)]
    return tuple(table)


@functools.lru_cache(maxsize=None)
def _trace_weights(n):
    # Tr(ζ_n^j) / φ(n) = μ(n/g) / φ(n/g) with g = gcd(j, n)
    weights = []
    for j in range(euler_phi(n)):
        q = n // math.gcd(j, n)
        weights.append(Fraction(int(mobius(q)), euler_phi(q)))
    return tuple(weights)


@functools.lru_cache(maxsize=None)
def _cosines(n):
    return tuple(math.cos(2 * math.pi * j / n) for j in range(euler_phi(n)))


def _reduce(n, values):
    """Integer vector of Σ values[k] ζ_n^k in the power basis (any length)."""
    phi = euler_phi(n)
    if len(values) <= phi:
        return list(values) + [0] * (phi - len(values))
    folded = [0] * max(n, phi)
    for k, c in enumerate(values):
        if c:
            folded[k % n] += c
    result = folded[:phi]
    for row, c in zip(_reduction_table(n), folded[phi:n]):
        if c:
            for i, r in row:
                result[i] += c * r
    return result


def _lowest_terms(num, den):
    g = math.gcd(den, *num)
    if g > 1:
        return tuple(c // g for c in num), den // g
    return tuple(num), den


def to_fraction(value):
    """
    Convert an integer, a string ``"p/q"``, a ``Fraction`` or a sympy rational to ``Fraction``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"Value {value!r} of type {type(value)} is not a rational number")


@functools.lru_cache(maxsize=None)
def _subfield_basis(d, n):
    """Matrix whose columns are ζ_d^j (0 <= j < φ(d)) written in the power basis of Q(ζ_n)."""
    columns = [CycNum.zeta(d, j).embed(n).coeffs for j in range(euler_phi(d))]
    return Matrix([[Rational(c.numerator, c.denominator) for c in row] for row in zip(*columns)])


@functools.lru_cache(maxsize=65536)
def _cos_enclosure(j, n, prec):
    # The caller holds 'iv.prec' at 'prec'
    return iv.cos(2 * iv.pi * j / n)


@functools.total_ordering
class CycNum:
    """
    Exact element of the cyclotomic field Q(ζ_n).

    Parameters
    ----------
    conductor: int
        The field Q(ζ_n) in which the coefficients are interpreted.
    coeffs: iterable
        Rational coefficients of Σ coeffs[j] ζ_n^j (lowest power first). Any length is accepted,
        the sequence is reduced modulo the n-th cyclotomic polynomial.

    Instances are immutable. Comparison operators are defined for real values only and raise
    ``NotRealError`` otherwise.
    """

    __slots__ = ("_conductor", "_num", "_den", "_minimal", "_real", "_hash")

    def __init__(self, conductor, coeffs=()):
        conductor = int(conductor)
        if conductor < 1:
            raise ValueError(f"Conductor must be a positive integer: {conductor}")
        fractions = [to_fraction(c) for c in coeffs]
        den = math.lcm(*(f.denominator for f in fractions)) if fractions else 1
        num = _reduce(conductor, [f.numerator * (den // f.denominator) for f in fractions])
        self._set(conductor, *_lowest_terms(num, den))

    def _set(self, conductor, num, den):
        self._conductor = conductor
        self._num = num
        self._den = den
        self._minimal = None
        self._real = None
        self._hash = None

    @classmethod
    def _from_ints(cls, conductor, num, den=1):
        obj = cls.__new__(cls)
        obj._set(conductor, *_lowest_terms(num, den))
        return obj

    @classmethod
    def from_rational(cls, value):
        value = to_fraction(value)
        return cls._from_ints(1, (value.numerator,), value.denominator)

    @classmethod
    def zero(cls, conductor=1):
        return cls._from_ints(conductor, (0,) * euler_phi(conductor))

    @classmethod
    def zeta(cls, n, exponent=1):
        """The root of unity ζ_n^exponent."""
        n = int(n)
        values = [0] * n
        values[exponent % n] = 1
        return cls._from_ints(n, _reduce(n, values))

    @property
    def conductor(self):
        return self._conductor

    @property
    def coeffs(self):
        """Rational coefficients in the power basis."""
        return tuple(Fraction(c, self._den) for c in self._num)

    # ----------------------------------------------------------------------------------
    #  Field structure

    def embed(self, m):
        """
        Write the value in Q(ζ_m). ``m`` must be a multiple of the conductor.
        """
        n = self._conductor
        if m == n:
            return self
        if m % n:
            raise ValueError(f"Q(ζ_{n}) is not contained in Q(ζ_{m})")
        step = m // n
        spread = [0] * ((len(self._num) - 1) * step + 1)
        for j, c in enumerate(self._num):
            spread[j * step] = c
        return CycNum._from_ints(m, _reduce(m, spread), self._den)

    def galois(self, t):
        """
        Apply the automorphism σ_t: ζ_n ↦ ζ_n^t. ``t`` must be coprime to the conductor.
        """
        n = self._conductor
        if math.gcd(t, n) != 1:
            raise ValueError(f"σ_{t} is not an automorphism of Q(ζ_{n})")
        if n <= 2:
            return self
        spread = [0] * n
        for j, c in enumerate(self._num):
            if c:
                spread[(j * t) % n] += c
        return CycNum._from_ints(n, _reduce(n, spread), self._den)

    def conjugate(self):
        """Complex conjugate (the automorphism σ_{-1})."""
        return self.galois(-1 % self._conductor) if self._conductor > 2 else self

    def minimal(self):
        """The same value written over its minimal conductor."""
        if self._minimal is None:
            self._minimal = self._descend()
        return self._minimal

    def _descend(self):
        n = self._conductor
        if self.is_rational():
            result = CycNum._from_ints(1, self._num[:1], self._den)
            result._minimal = result
            return result
        for d in divisors(n)[1:-1]:
            if d % 4 == 2 or not self._fixed_by(d):
                continue
            solution, _ = _subfield_basis(d, n).gauss_jordan_solve(
                Matrix([Rational(c.numerator, c.denominator) for c in self.coeffs])
            )
            result = CycNum(d, [to_fraction(c) for c in solution])
            result._minimal = result
            return result
        return self

    def _fixed_by(self, d):
        # Q(ζ_d) is the fixed field of {σ_t : t ≡ 1 mod d}
        n = self._conductor
        return all(self.galois(t) == self for t in range(1 + d, n, d) if math.gcd(t, n) == 1)

    def inverse(self):
        """
        Multiplicative inverse: the product of the other Galois conjugates divided by the norm.
        """
        if self.is_zero():
            raise CyclotomicZeroDivisionError(f"Division by zero in Q(ζ_{self._conductor})")
        n = self._conductor
        if self.is_rational():
            value = Fraction(self._den, self._num[0])
            return CycNum._from_ints(n, (value.numerator,) + (0,) * (len(self._num) - 1), value.denominator)
        others = CycNum._from_ints(n, (1,) + (0,) * (len(self._num) - 1))
        for t in range(2, n):
            if math.gcd(t, n) == 1:
                others = others * self.galois(t)
        norm = (self * others).rational_value()
        return others * (1 / norm)

    # ----------------------------------------------------------------------------------
    #  Predicates

    def is_zero(self):
        return not any(self._num)

    def is_rational(self):
        # 1 is the first element of the power basis
        return not any(self._num[1:])

    def is_real(self):
        if self._real is None:
            self._real = self._conductor <= 2 or self.conjugate() == self
        return self._real

    def rational_value(self):
        """The value as a ``Fraction``; raises ``ValueError`` for irrational values."""
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def normalized_trace(self):
        """Tr(a) / φ(n) over Q; it does not depend on the field the value is written in."""
        weights = _trace_weights(self._conductor)
        return sum((w * c for w, c in zip(weights, self._num) if c), Fraction(0)) / self._den

    # ----------------------------------------------------------------------------------
    #  Arithmetic

    @staticmethod
    def _coerce(other):
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(other)
        return None

    def _common(self, other):
        if self._conductor == other._conductor:
            return self, other
        m = math.lcm(self._conductor, other._conductor)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        den = math.lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        return CycNum._from_ints(a._conductor, [x * fa + y * fb for x, y in zip(a._num, b._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._from_ints(self._conductor, tuple(-c for c in self._num), self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = to_fraction(other)
            return CycNum._from_ints(
                self._conductor, [c * other.numerator for c in self._num], self._den * other.denominator
            )
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other._conductor == 1:
            return self * Fraction(other._num[0], other._den)
        if self._conductor == 1:
            return other * Fraction(self._num[0], self._den)
        a, b = self._common(other)
        product = [0] * (len(a._num) + len(b._num) - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        product[i + j] += x * y
        n = a._conductor
        return CycNum._from_ints(n, _reduce(n, product), a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CyclotomicZeroDivisionError("Division by the rational zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = CycNum.from_rational(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # ----------------------------------------------------------------------------------
    #  Equality, ordering, hashing

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.normalized_trace(), (self * self).normalized_trace()))
        return self._hash

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return real_sign(other - self) > 0

    def __bool__(self):
        return not self.is_zero()

    # ----------------------------------------------------------------------------------
    #  Conversion

    def approx(self):
        """
        Complex floating point approximation. Used for display and as a prefilter, never to
        decide a result.
        """
        n = self._conductor
        total = 0j
        for j, c in enumerate(self._num):
            if c:
                angle = 2 * math.pi * j / n
                total += complex(c * math.cos(angle), c * math.sin(angle))
        return total / self._den

    def __float__(self):
        return float(self.approx().real)

    def to_json(self):
        value = self.minimal()
        return {"conductor": value.conductor, "coeffs": [str(c) for c in value.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls(data["conductor"], [Fraction(c) for c in data["coeffs"]])

    def __repr__(self):
        return f"CycNum({self._conductor}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                power = f"ζ{self._conductor}" + (f"^{j}" if j > 1 else "")
                terms.append(power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def cyc_arith(op, a, b):
    """
    Exact field operation ``op`` (one of ``add``, ``sub``, ``mul``, ``div``) on two values.
    """
    operations = {
        "add": lambda x, y: x + y,
        "sub": lambda x, y: x - y,
        "mul": lambda x, y: x * y,
        "div": lambda x, y: x / y,
    }
    if op not in operations:
        raise ValueError(f"Unsupported operation {op!r}. Supported operations: {list(operations)}")
    a, b = CycNum._coerce(a), CycNum._coerce(b)
    return operations[op](a, b)


def galois_conjugates(a):
    """
    Distinct Galois conjugates σ_t(a) over the minimal field of ``a``, ordered by ``t``.

    Parameters
    ----------
    a: CycNum

    Returns
    -------
    list(CycNum)
    """
    a = CycNum._coerce(a).minimal()
    n = a.conductor
    conjugates = []
    for t in range(1, max(n, 2)):
        if math.gcd(t, n) != 1:
            continue
        value = a.galois(t)
        if value not in conjugates:
            conjugates.append(value)
    return conjugates


def _float_sign(a):
    # Real part only; the imaginary parts cancel for real values
    cosines = _cosines(a.conductor)
    value = math.fsum(c * cosines[j] for j, c in enumerate(a._num) if c)
    scale = math.fsum(abs(c) for c in a._num)
    if abs(value) > _FLOAT_SIGN_MARGIN * scale:
        return 1 if value > 0 else -1
    return 0


def _interval_value(a, prec):
    saved = iv.prec
    iv.prec = prec
    try:
        total = iv.mpf(0)
        for j, c in enumerate(a._num):
            if c:
                total += iv.mpf(c) * _cos_enclosure(j, a.conductor, prec)
        return total
    finally:
        iv.prec = saved


def real_sign(a):
    """
    Exact sign of a real cyclotomic number under ζ_n ↦ exp(2πi/n).

    A floating point evaluation decides the sign when it is far from zero relative to the size of
    the coefficients. Otherwise the value is enclosed in an interval of increasing precision until
    the enclosure excludes zero. The loop terminates because zero is detected exactly beforehand.

    Parameters
    ----------
    a: CycNum, int or Fraction

    Returns
    -------
    int
        -1, 0 or 1

    Raises
    ------
    NotRealError
        The value is not fixed by complex conjugation.
    """
    a = CycNum._coerce(a)
    if a is None:
        raise TypeError("real_sign expects a CycNum or a rational number")
    if a.is_rational():
        head = a._num[0]
        return (head > 0) - (head < 0)
    if not a.is_real():
        raise NotRealError(f"Value {a} is not real")
    guess = _float_sign(a)
    if guess:
        return guess
    prec = _INITIAL_PRECISION
    while True:
        value = _interval_value(a, prec)
        if value > 0:
            return 1
        if value < 0:
            return -1
        prec *= 2
        logger.debug("Refining the enclosure of %s to %d bits", a, prec)
