"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_k).

Rationals are plain :class:`fractions.Fraction` values.  A cyclotomic
number is stored in the power basis of Q(zeta_k), i.e. as the unique
polynomial in zeta_k of degree < phi(k) obtained by reducing modulo the
k-th cyclotomic polynomial.  Mixed-conductor arithmetic promotes both
operands to the lcm of their conductors.

:class:`ExactMatrix` is a small dense matrix type over these scalars with
products, exact inverses, determinants and a division-free
characteristic polynomial.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

MAX_CONDUCTOR = 256

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ExactArithmeticError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# integer polynomials (ascending coefficient tuples)

def _poly_divexact(num, den):
    """Exact quotient of integer polynomials; raises if there is a remainder."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ExactArithmeticError("inexact polynomial division")
        out[i] = q
        if q:
            for j, d in enumerate(den):
                num[i + j] -= q * d
    if any(num[: len(den) - 1]):
        raise ExactArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(k: int) -> tuple[int, ...]:
    """Return Phi_k as ascending integer coefficients.

    Uses t^k - 1 = prod_{d | k} Phi_d.
    """
    if k < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


def euler_phi(k: int) -> int:
    result, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def mobius(k: int) -> int:
    m, p, sign = k, 2, 1
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


def field_degree_over_Q(k: int) -> int:
    """Degree [Q(zeta_k):Q], read off as deg Phi_k."""
    return len(cyclotomic_poly(k)) - 1


# ---------------------------------------------------------------------------
# per-conductor tables

class _Field:
    """Cached reduction data for Q(zeta_k)."""

    def __init__(self, k: int):
        self.k = k
        self.phi_poly = cyclotomic_poly(k)
        self.deg = len(self.phi_poly) - 1
        # zeta^j reduced, for 0 <= j < max(k, 2*deg - 1)
        top = max(k, 2 * self.deg - 1)
        powers = []
        cur = [_ZERO] * self.deg
        cur[0] = _ONE
        for _ in range(top):
            powers.append(tuple(cur))
            cur = self._shift(cur)
        self.powers = powers
        g = [math.gcd(j, k) for j in range(k)]
        # normalized trace of zeta^j: mu(k/g)/phi(k/g); invariant under field extension
        self.ntrace = [Fraction(mobius(k // gj), euler_phi(k // gj)) for gj in g]

    def _shift(self, vec):
        # multiply by t and reduce by the monic Phi_k
        carry = vec[-1]
        out = [_ZERO] + list(vec[:-1])
        if carry:
            for i in range(self.deg):
                out[i] -= carry * self.phi_poly[i]
        return out

    def reduce(self, coeffs):
        """Reduce a coefficient list of any length modulo Phi_k."""
        d = self.deg
        if len(coeffs) <= d:
            return tuple(coeffs) + (_ZERO,) * (d - len(coeffs))
        out = list(coeffs[:d])
        for j in range(d, len(coeffs)):
            c = coeffs[j]
            if c:
                p = self.powers[j] if j < len(self.powers) else self.power_vec(j)
                for i in range(d):
                    if p[i]:
                        out[i] += c * p[i]
        return tuple(out)

    def power_vec(self, j: int):
        return self.powers[j % self.k]


@lru_cache(maxsize=None)
def _field(k: int) -> _Field:
    if k > MAX_CONDUCTOR:
        raise ExactArithmeticError(f"conductor {k} exceeds cap {MAX_CONDUCTOR}")
    return _Field(k)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# ascending Fraction polynomials, used for inversion in Q[t]/Phi_k

def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    if len(a) < len(b):
        return [], a
    q = [_ZERO] * (len(a) - len(b) + 1)
    inv_lead = 1 / Fraction(b[-1])
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return q, _ptrim(a[: len(b) - 1])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    b = list(b) + [_ZERO] * (n - len(b))
    return _ptrim([x - y for x, y in zip(a, b)])


def _pinv_mod(a, m):
    """Inverse of a modulo the irreducible m, by extended Euclid."""
    r0, r1 = _ptrim(m), _ptrim(a)
    s0, s1 = [], [_ONE]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    # r0 is a nonzero constant since gcd(a, m) = 1
    if len(r0) != 1:
        raise ExactArithmeticError("element is not invertible")
    c = 1 / Fraction(r0[0])
    return [x * c for x in s0]


# ---------------------------------------------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


class CycScalar:
    """An element of Q(zeta_k) in reduced power-basis form.

    Instances are immutable.  Rationals embed with conductor 1.
    """

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs):
        f = _field(k)
        coeffs = [_as_fraction(c) for c in coeffs]
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coeffs", f.reduce(coeffs))

    @classmethod
    def _raw(cls, k, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "k", k)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycScalar is immutable")

    @classmethod
    def rational(cls, q) -> "CycScalar":
        return cls._raw(1, (_as_fraction(q),))

    @classmethod
    def zeta(cls, k: int, j: int = 1) -> "CycScalar":
        """zeta_k ** j with zeta_k = exp(2 pi i / k)."""
        f = _field(k)
        return cls._raw(k, f.power_vec(j % k))

    @classmethod
    def coerce(cls, x) -> "CycScalar":
        if isinstance(x, CycScalar):
            return x
        return cls.rational(x)

    # -- promotion ---------------------------------------------------------

    def promote(self, m: int) -> "CycScalar":
        """Embed into Q(zeta_m); requires k | m."""
        if m == self.k:
            return self
        if m % self.k:
            raise ValueError(f"conductor {self.k} does not divide {m}")
        f = _field(m)
        step = m // self.k
        out = [_ZERO] * f.deg
        for j, c in enumerate(self.coeffs):
            if c:
                p = f.power_vec(j * step)
                for i in range(f.deg):
                    if p[i]:
                        out[i] += c * p[i]
        return CycScalar._raw(m, tuple(out))

    def _pair(self, other):
        other = CycScalar.coerce(other)
        if self.k == other.k:
            return self, other, self.k
        m = _lcm(self.k, other.k)
        return self.promote(m), other.promote(m), m

    # -- field operations --------------------------------------------------

    def __add__(self, other):
        try:
            a, b, m = self._pair(other)
        except TypeError:
            return NotImplemented
        return CycScalar._raw(m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar._raw(self.k, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        try:
            a, b, m = self._pair(other)
        except TypeError:
            return NotImplemented
        return CycScalar._raw(m, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycScalar):
            try:
                q = _as_fraction(other)
            except TypeError:
                return NotImplemented
            return CycScalar._raw(self.k, tuple(x * q for x in self.coeffs))
        if self.k == 1:
            q = self.coeffs[0]
            return CycScalar._raw(other.k, tuple(x * q for x in other.coeffs))
        if other.k == 1:
            q = other.coeffs[0]
            return CycScalar._raw(self.k, tuple(x * q for x in self.coeffs))
        a, b, m = self._pair(other)
        prod = _pmul(a.coeffs, b.coeffs)
        return CycScalar._raw(m, _field(m).reduce(prod) if prod else (_ZERO,) * _field(m).deg)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_%d)" % self.k)
        if self.k == 1:
            return CycScalar._raw(1, (1 / self.coeffs[0],))
        f = _field(self.k)
        inv = _pinv_mod(list(self.coeffs), [Fraction(c) for c in f.phi_poly])
        return CycScalar._raw(self.k, f.reduce(inv))

    def __truediv__(self, other):
        try:
            other = CycScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycScalar.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = CycScalar._raw(self.k, _field(self.k).powers[0])
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate(self) -> "CycScalar":
        """Complex conjugation, zeta_k -> zeta_k^{-1}."""
        f = _field(self.k)
        out = [_ZERO] * f.deg
        for j, c in enumerate(self.coeffs):
            if c:
                p = f.power_vec(-j % self.k)
                for i in range(f.deg):
                    if p[i]:
                        out[i] += c * p[i]
        return CycScalar._raw(self.k, tuple(out))

    # -- predicates / conversion ------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.k), math.sin(2 * math.pi / self.k))
        return complex(sum(float(c) * z**j for j, c in enumerate(self.coeffs) if c))

    def __eq__(self, other):
        try:
            a, b, _ = self._pair(other)
        except (TypeError, ExactArithmeticError):
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        # normalized trace is the same in every Q(zeta_m) containing the element
        if self.is_rational():
            return hash(self.coeffs[0])
        f = _field(self.k)
        return hash(sum((c * f.ntrace[j] for j, c in enumerate(self.coeffs) if c), _ZERO))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycScalar({to_string(self)!r})"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if j == 0 else (f"z{self.k}" if j == 1 else f"z{self.k}^{j}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"({c})*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def cyc_arith(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    """Apply one of ``+ - * /`` to two cyclotomic numbers."""
    a, b = CycScalar.coerce(a), CycScalar.coerce(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operator {op!r}")


# ---------------------------------------------------------------------------
# serialization

def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def to_string(x) -> str:
    """Serialize a scalar: ``"p/q"`` for rationals, ``"zeta:k:[c0,...]"`` otherwise."""
    if not isinstance(x, CycScalar):
        return _frac_str(_as_fraction(x))
    if x.is_rational():
        return _frac_str(x.coeffs[0])
    return f"zeta:{x.k}:[" + ",".join(_frac_str(c) for c in x.coeffs) + "]"


_ZETA_RE = re.compile(r"^\s*zeta:(\d+):(.*)$")


def parse_scalar(text: str) -> CycScalar:
    """Inverse of :func:`to_string`.

    Also accepts ``"zeta:k:j"`` meaning zeta_k ** j, and bare integers.
    """
    m = _ZETA_RE.match(text)
    if m is None:
        try:
            return CycScalar.rational(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad scalar {text!r}") from exc
    k = int(m.group(1))
    if k < 1:
        raise ValueError("conductor must be positive")
    rest = m.group(2).strip()
    if rest.startswith("["):
        if not rest.endswith("]"):
            raise ValueError(f"bad scalar {text!r}")
        body = rest[1:-1].strip()
        coeffs = [Fraction(c.strip()) for c in body.split(",")] if body else []
        return CycScalar(k, coeffs)
    return CycScalar.zeta(k, int(rest))


# ---------------------------------------------------------------------------
# matrices

def _berkowitz(rows, zero, one):
    """Characteristic polynomial coefficients [1, c1, ..., cn] of det(tI - A).

    Division-free; works over any commutative ring given by ``zero``/``one``.
    """
    n = len(rows)
    if n == 0:
        return [one]
    vect = [one, -rows[n - 1][n - 1]]
    for r in range(n - 2, -1, -1):
        m = n - 1 - r
        a = rows[r][r]
        R = rows[r][r + 1:]
        C = [rows[i][r] for i in range(r + 1, n)]
        col = [one, -a]
        v = C
        for step in range(m):
            s = zero
            for x, y in zip(R, v):
                s = s + x * y
            col.append(-s)
            if step + 1 < m:
                nv = []
                for i in range(r + 1, n):
                    acc = zero
                    row = rows[i]
                    for j, vj in zip(range(r + 1, n), v):
                        acc = acc + row[j] * vj
                    nv.append(acc)
                v = nv
        new = []
        for i in range(m + 2):
            acc = zero
            for j in range(max(0, i - (m + 1)), min(i, m) + 1):
                acc = acc + col[i - j] * vect[j]
            new.append(acc)
        vect = new
    return vect


class ExactPoly:
    """Polynomial in t with CycScalar coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [CycScalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, coeffs) -> "ExactPoly":
        return cls([CycScalar.rational(c) for c in coeffs])

    @classmethod
    def from_roots(cls, roots) -> "ExactPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-CycScalar.coerce(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other):
        if not isinstance(other, ExactPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return ExactPoly([])
        out = [CycScalar.rational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ExactPoly(out)

    def __eq__(self, other):
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = CycScalar.rational(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs])

    def __repr__(self):
        return f"ExactPoly({self})"

    def __str__(self):
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c)
                parts.append((f"({cs})" if not c.is_rational() else cs) + "*" + mono)
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


class ExactMatrix:
    """Square matrix over Q(zeta_k); entries share one conductor."""

    __slots__ = ("n", "rows", "k")

    def __init__(self, rows):
        rows = [[CycScalar.coerce(x) for x in row] for row in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("ExactMatrix must be square")
        k = 1
        for row in rows:
            for x in row:
                k = _lcm(k, x.k)
        _field(k)
        self.n = n
        self.k = k
        self.rows = tuple(tuple(x.promote(k) for x in row) for row in rows)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "ExactMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diag(cls, entries) -> "ExactMatrix":
        entries = list(entries)
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def blockdiag(cls, blocks) -> "ExactMatrix":
        n = sum(b.n for b in blocks)
        rows = [[CycScalar.rational(0)] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.n
        return cls(rows)

    @property
    def shape(self):
        return (self.n, self.n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        zero = CycScalar.rational(0)
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                new.append(acc)
            out.append(new)
        return ExactMatrix(out)

    def __add__(self, other):
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return ExactMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "ExactMatrix":
        c = CycScalar.coerce(c)
        return ExactMatrix([[c * a for a in r] for r in self.rows])

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.n == other.n and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.n)

    def _elimination(self, rhs=None):
        """Gauss-Jordan over the field; returns (det, inverse-or-None)."""
        n = self.n
        a = [list(r) for r in self.rows]
        inv = [[CycScalar.rational(1 if i == j else 0) for j in range(n)] for i in range(n)] \
            if rhs is None else None
        det = CycScalar.rational(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
            if piv is None:
                return CycScalar.rational(0), None
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                if inv is not None:
                    inv[c], inv[piv] = inv[piv], inv[c]
                det = -det
            p = a[c][c]
            det = det * p
            pinv = p.inverse()
            a[c] = [x * pinv for x in a[c]]
            if inv is not None:
                inv[c] = [x * pinv for x in inv[c]]
            for r in range(n):
                if r != c and not a[r][c].is_zero():
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                    if inv is not None:
                        inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
        return det, inv

    def det(self) -> CycScalar:
        if self.k == 1:
            return CycScalar.rational(_fraction_det([[x.coeffs[0] for x in r] for r in self.rows]))
        return self._elimination()[0]

    def inverse(self) -> "ExactMatrix":
        det, inv = self._elimination()
        if inv is None:
            raise ExactArithmeticError("singular matrix")
        return ExactMatrix(inv)

    def char_poly(self) -> ExactPoly:
        if self.k == 1:
            rows = [[x.coeffs[0] for x in r] for r in self.rows]
            desc = _berkowitz(rows, _ZERO, _ONE)
        else:
            desc = _berkowitz(self.rows, CycScalar.rational(0), CycScalar.rational(1))
        return ExactPoly(list(reversed(desc)))

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in r] for r in self.rows], dtype=complex)

    def to_strings(self):
        return [[to_string(x) for x in r] for r in self.rows]

    @classmethod
    def from_strings(cls, rows) -> "ExactMatrix":
        return cls([[parse_scalar(x) for x in r] for r in rows])

    def __repr__(self):
        return "ExactMatrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


def _fraction_det(a) -> Fraction:
    n = len(a)
    a = [list(r) for r in a]
    det = _ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return _ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det *= p
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def char_poly(M: ExactMatrix) -> ExactPoly:
    """det(tI - M), computed without division (Berkowitz)."""
    return M.char_poly()


def exact_inverse(M: ExactMatrix) -> ExactMatrix:
    return M.inverse()
