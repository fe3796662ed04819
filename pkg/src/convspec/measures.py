"""Finitely supported complex-rational measures and their convolution algebra."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import sympy

from .errors import GroupError, PreconditionError, SupportCapError
from .groups import Element, Group

DEFAULT_SUPPORT_CAP = 500_000


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {x!r}")


class ComplexRational:
    """Exact Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> ComplexRational:
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, (int, Fraction, str)):
            return cls(x)
        if isinstance(x, tuple) and len(x) == 2:
            return cls(*x)
        raise TypeError(f"cannot interpret {x!r} as an exact complex rational")

    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return ComplexRational(self.re * o.re)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if not d:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return ComplexRational(num.re / d, num.im / d)

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce_or_none(x):
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexRational(x)
    return None


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)


class Measure:
    """Finitely supported function ``group -> Q(i)``; zero coefficients are never stored.

    ``coeffs`` maps raw canonical group values to :class:`ComplexRational`.
    ``mu * nu`` is convolution when both are measures, scalar scaling otherwise.
    """

    __slots__ = ("group", "coeffs")

    def __init__(self, group: Group, coeffs=None):
        self.group = group
        out = {}
        for key, c in (coeffs or {}).items():
            c = ComplexRational.coerce(c)
            if c:
                x = group.coerce(key)
                out[x] = out.get(x, ZERO) + c
        self.coeffs = {x: c for x, c in out.items() if c}

    @classmethod
    def _raw(cls, group, coeffs) -> Measure:
        m = cls.__new__(cls)
        m.group = group
        m.coeffs = coeffs
        return m

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, group) -> Measure:
        return cls._raw(group, {})

    @classmethod
    def delta(cls, group, x=None, c=1) -> Measure:
        x = group.identity_raw() if x is None else group.coerce(x)
        return cls(group, {x: c})

    @classmethod
    def indicator(cls, group, elements: Iterable) -> Measure:
        return cls._raw(group, {group.coerce(x): ONE for x in elements})

    @classmethod
    def conjugacy_class_indicator(cls, group, x, cap: int = 100_000) -> Measure:
        """Indicator of the conjugacy class of ``x`` (closure under generator conjugation)."""
        x = group.coerce(x)
        gens = list(group.generators_raw())
        gens += [group.inv(g) for g in gens]
        seen = {x}
        todo = [x]
        while todo:
            y = todo.pop()
            for g in gens:
                z = group.conj(g, y)
                if z not in seen:
                    seen.add(z)
                    if len(seen) > cap:
                        raise SupportCapError("conjugacy class exceeds cap (infinite class?)")
                    todo.append(z)
        return cls._raw(group, {y: ONE for y in seen})

    # -- basic access ------------------------------------------------------
    def __getitem__(self, x) -> ComplexRational:
        if isinstance(x, (Element, str)):
            x = self.group.coerce(x)
        return self.coeffs.get(x, ZERO)

    def support(self) -> list:
        return sorted(self.coeffs)

    def elements(self) -> list:
        return [Element(self.group, x) for x in self.support()]

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs.values())

    def _same(self, other):
        if self.group is not other.group and self.group != other.group:
            raise GroupError("measures live on different groups")

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return (self.group is other.group or self.group == other.group) and self.coeffs == other.coeffs

    __hash__ = None

    # -- linear structure --------------------------------------------------
    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for x, c in other.coeffs.items():
            s = out.get(x, ZERO) + c
            if s:
                out[x] = s
            else:
                out.pop(x, None)
        return Measure._raw(self.group, out)

    def __neg__(self):
        return Measure._raw(self.group, {x: -c for x, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> Measure:
        c = ComplexRational.coerce(c)
        if not c:
            return Measure.zero(self.group)
        return Measure._raw(self.group, {x: c * v for x, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Measure):
            return convolve(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def map(self, f) -> Measure:
        """Pointwise ``x -> f(x) * mu(x)`` with ``f`` returning exact scalars."""
        out = {}
        for x, c in self.coeffs.items():
            v = c * ComplexRational.coerce(f(x))
            if v:
                out[x] = v
        return Measure._raw(self.group, out)

    def star(self) -> Measure:
        return adjoint(self)

    def l1_norm(self):
        return l1_norm(self)

    def to_json(self) -> list:
        return [
            {"element": self.group.format(x), "re": str(c.re), "im": str(c.im)}
            for x, c in self.items()
        ]

    def __repr__(self):
        body = ", ".join(f"{self.group.format(x)}: {c}" for x, c in self.items()[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"Measure({{{body}{more}}})"


# --------------------------------------------------------------------------


def convolve(mu: Measure, nu: Measure, cap: int = DEFAULT_SUPPORT_CAP) -> Measure:
    """``(mu * nu)(x) = sum_y mu(y) nu(y^-1 x)``, i.e. sum over products ``y z = x``."""
    mu._same(nu)
    group = mu.group
    mul = group.mul
    real = mu.is_real() and nu.is_real()
    acc = {}
    if real:
        for y, c in mu.coeffs.items():
            a = c.re
            for z, d in nu.coeffs.items():
                x = mul(y, z)
                acc[x] = acc.get(x, 0) + a * d.re
            if len(acc) > cap:
                raise SupportCapError(f"convolution support exceeds cap of {cap}")
        return Measure._raw(group, {x: ComplexRational(v) for x, v in acc.items() if v})
    for y, c in mu.coeffs.items():
        for z, d in nu.coeffs.items():
            x = mul(y, z)
            acc[x] = acc.get(x, ZERO) + c * d
        if len(acc) > cap:
            raise SupportCapError(f"convolution support exceeds cap of {cap}")
    return Measure._raw(group, {x: v for x, v in acc.items() if v})


def apply(mu: Measure, f: Measure) -> Measure:
    """``H_mu f = mu * f`` for finitely supported ``f``."""
    return convolve(mu, f)


def adjoint(mu: Measure) -> Measure:
    """``mu*(x) = conj(mu(x^-1))``."""
    inv = mu.group.inv
    return Measure._raw(mu.group, {inv(x): c.conjugate() for x, c in mu.coeffs.items()})


def is_selfadjoint(mu: Measure) -> bool:
    return adjoint(mu) == mu


def is_central(mu: Measure) -> bool:
    """Exact conjugation invariance.

    Invariance under every generator suffices; and for a finite support it is enough
    to test ``x`` in the support, since each generator conjugation then maps the
    support injectively, hence bijectively, onto itself.
    """
    group = mu.group
    gens = group.generators_raw()
    for x, c in mu.coeffs.items():
        for g in gens:
            if mu.coeffs.get(group.conj(g, x), ZERO) != c:
                return False
    return True


def convolution_power(mu: Measure, n: int, cap: int = DEFAULT_SUPPORT_CAP) -> Measure:
    if n < 0:
        raise ValueError("n must be >= 0")
    out = Measure.delta(mu.group)
    for _ in range(n):
        out = convolve(out, mu, cap)
    return out


def moment_at_identity(mu: Measure, n: int, cap: int = DEFAULT_SUPPORT_CAP) -> ComplexRational:
    """``<delta_e, H_mu^n delta_e> = mu^{*n}(e)``."""
    return convolution_power(mu, n, cap)[mu.group.identity_raw()]


def moments_at_identity(mu: Measure, nmax: int, cap: int = DEFAULT_SUPPORT_CAP) -> list:
    """``[mu^{*n}(e) for n in 0..nmax]`` computed along one chain of convolutions."""
    e = mu.group.identity_raw()
    power = Measure.delta(mu.group)
    out = [power[e]]
    for _ in range(nmax):
        power = convolve(power, mu, cap)
        out.append(power[e])
    return out


def l1_norm(mu: Measure):
    """Exact total variation ``sum |mu(x)|`` as a sympy number (sum of square roots)."""
    return sympy.Add(*[sympy.sqrt(sympy.Rational(c.abs2().numerator, c.abs2().denominator))
                       for c in mu.coeffs.values()])


def norm_bound_holds(mu: Measure, nu: Measure) -> bool:
    """Exact check of ``||mu * nu||_1 <= ||mu||_1 ||nu||_1``."""
    if mu.is_real() and nu.is_real():
        lhs = sum((abs(c.re) for c in convolve(mu, nu).coeffs.values()), Fraction(0))
        a = sum((abs(c.re) for c in mu.coeffs.values()), Fraction(0))
        b = sum((abs(c.re) for c in nu.coeffs.values()), Fraction(0))
        return lhs <= a * b
    # square roots are reduced to squarefree radicands, so the difference is canonical
    diff = sympy.expand(l1_norm(convolve(mu, nu)) - l1_norm(mu) * l1_norm(nu))
    if diff == 0:
        return True
    return bool(diff < 0)


def require_selfadjoint(mu: Measure, what: str = "measure"):
    if not is_selfadjoint(mu):
        raise PreconditionError(f"{what} must be self-adjoint")
