"""Finitely generated discrete groups with canonical element arithmetic.

Every constructor works on *raw* canonical values (nested tuples of ints), which
are hashable and totally ordered within one group.  :class:`Element` wraps a raw
value together with its group for ergonomic use::

    >>> S3 = Symmetric(3)
    >>> a, b = S3.gens
    >>> str(a * b * a)
    '[3,2,1]'

Raw forms:

=================  ==========================================================
IntLattice(d)      ``(i1, ..., id)``
Cyclic(n)          residue ``k`` in ``[0, n)``
Symmetric(n)       one-line permutation, 1-based images; ``(x*y)(i) = x(y(i))``
FreeGroup(k)       run-length word ``((gen, power), ...)``, freely reduced
DirectProduct      ``(left, right)``
Semidirect         ``(n, g)`` with ``(n, g)(m, h) = (n tau_g(m), g + h)``
PowerGroup(R, J)   ``(r_1, ..., r_J)``
=================  ==========================================================
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, Iterable, Sequence

import sympy

from .errors import BallCapError, ElementParseError, GroupError

INFINITE = math.inf
DEFAULT_BALL_CAP = 200_000
_FINITE_ENUM_CAP = 50_000

# 'e' is reserved for the identity in word literals
LETTERS = "abcdfghijklmnopqrstuvwxyz"

_TOKEN = re.compile(r"\s*([A-Za-z])\s*(?:\^\s*\{?\s*(-?\d+)\s*\}?)?")


def _parse_word(text, names):
    text = text.strip()
    if not text:
        raise ElementParseError(text, "empty literal")
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ElementParseError(text, f"unexpected character {text[pos]!r}")
        letter, power = m.group(1), int(m.group(2) or 1)
        if letter != "e":
            if letter not in names:
                raise ElementParseError(text, f"unknown generator {letter!r}")
            if power:
                out.append((names.index(letter), power))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def _format_word(word, names):
    if not word:
        return "e"
    return " ".join(names[g] if p == 1 else f"{names[g]}^{p}" for g, p in word)


def _split_top(text, sep):
    """Split on ``sep`` occurring outside any bracket pair."""
    depth = 0
    parts, start = [], 0
    for i, ch in enumerate(text):
        if ch in "([<{":
            depth += 1
        elif ch in ")]>}":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _unwrap(text, open_, close):
    text = text.strip()
    if len(text) < 2 or text[0] != open_ or text[-1] != close:
        raise ElementParseError(text, f"expected {open_}...{close}")
    return text[1:-1]


class Group:
    """Base class.  Subclasses are frozen dataclasses (structural equality)."""

    # -- raw-level interface, overridden by constructors -------------------
    def identity_raw(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def generators_raw(self) -> tuple:
        raise NotImplementedError

    def word(self, x) -> list:
        """``[(generator index, power), ...]`` whose product is ``x``."""
        raise NotImplementedError

    def parse_raw(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def is_member(self, x) -> bool:
        raise NotImplementedError

    def exact_order(self, x):
        """Order of ``x``: an int, :data:`INFINITE`, or ``None`` if undetermined."""
        raise NotImplementedError

    def in_torsion_subgroup(self, x):
        """Membership in the subgroup generated by torsion elements (True/False/None)."""
        raise NotImplementedError

    def char_coords(self, x) -> tuple:
        """Coordinates along the free abelian directions seen by real characters."""
        raise NotImplementedError

    is_abelian = False
    is_finite = False
    has_torsion = True

    @property
    def char_dim(self) -> int:
        return len(self.char_coords(self.identity_raw()))

    # -- generic helpers ---------------------------------------------------
    def power(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity_raw()
        while k:
            if k & 1:
                result = self.mul(result, x)
            k >>= 1
            if k:
                x = self.mul(x, x)
        return result

    def conj(self, y, x):
        return self.mul(self.mul(y, x), self.inv(y))

    def coerce(self, obj):
        """Raw canonical value from an Element, a literal string, or a raw value."""
        if isinstance(obj, Element):
            if obj.group != self:
                raise GroupError(f"element {obj} belongs to {obj.group!r}, not {self!r}")
            return obj.value
        if isinstance(obj, str):
            return self.parse_raw(obj)
        if not self.is_member(obj):
            raise GroupError(f"{obj!r} is not a canonical element of {self!r}")
        return obj

    def element(self, raw) -> Element:
        return Element(self, raw)

    def __call__(self, obj) -> Element:
        return Element(self, self.coerce(obj))

    def identity(self) -> Element:
        return Element(self, self.identity_raw())

    @property
    def gens(self) -> tuple:
        return tuple(Element(self, g) for g in self.generators_raw())

    def elements_raw(self, cap: int = _FINITE_ENUM_CAP) -> list:
        if not self.is_finite:
            raise GroupError(f"{self!r} is infinite")
        return ball_raw(self, self.generators_raw(), None, cap)[0]

    def size(self):
        return len(self.elements_raw()) if self.is_finite else INFINITE


class Element:
    """A group element: raw canonical value plus its group."""

    __slots__ = ("group", "value")

    def __init__(self, group: Group, value):
        self.group = group
        self.value = value

    def _check(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.group is not self.group and other.group != self.group:
            raise GroupError(f"cannot combine elements of {self.group!r} and {other.group!r}")
        return other

    def __mul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Element(self.group, self.group.mul(self.value, other.value))

    def __pow__(self, k: int):
        return Element(self.group, self.group.power(self.value, k))

    def inverse(self) -> Element:
        return Element(self.group, self.group.inv(self.value))

    def is_identity(self) -> bool:
        return self.value == self.group.identity_raw()

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.value == other.value and (self.group is other.group or self.group == other.group)

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < other.value

    def __str__(self):
        return self.group.format(self.value)

    def __repr__(self):
        return f"Element({self.group.format(self.value)!r})"


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntLattice(Group):
    d: int = 1

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise GroupError("IntLattice needs d >= 1")

    is_abelian = True
    has_torsion = False

    def identity_raw(self):
        return (0,) * self.d

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def generators_raw(self):
        return tuple(tuple(int(i == j) for j in range(self.d)) for i in range(self.d))

    def word(self, x):
        return [(i, a) for i, a in enumerate(x) if a]

    def parse_raw(self, text):
        body = text.strip()
        if body.startswith("("):
            body = _unwrap(body, "(", ")")
        elif self.d != 1:
            raise ElementParseError(text, f"expected ({self.d} integers)")
        parts = [p.strip() for p in body.split(",")]
        if len(parts) != self.d:
            raise ElementParseError(text, f"expected {self.d} coordinates")
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise ElementParseError(text, "coordinates must be integers") from None

    def format(self, x):
        return "(" + ",".join(str(a) for a in x) + ")"

    def is_member(self, x):
        return isinstance(x, tuple) and len(x) == self.d and all(type(a) is int for a in x)

    def exact_order(self, x):
        return 1 if not any(x) else INFINITE

    def in_torsion_subgroup(self, x):
        return not any(x)

    def char_coords(self, x):
        return x


@dataclass(frozen=True)
class Cyclic(Group):
    n: int = 1

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GroupError("Cyclic needs n >= 1")

    is_abelian = True
    is_finite = True

    @property
    def has_torsion(self):
        return self.n > 1

    def identity_raw(self):
        return 0

    def mul(self, x, y):
        return (x + y) % self.n

    def inv(self, x):
        return (-x) % self.n

    def generators_raw(self):
        return (1,) if self.n > 1 else ()

    def word(self, x):
        return [(0, x)] if x else []

    def parse_raw(self, text):
        try:
            return int(text.strip()) % self.n
        except ValueError:
            raise ElementParseError(text, "expected an integer residue") from None

    def format(self, x):
        return str(x)

    def is_member(self, x):
        return type(x) is int and 0 <= x < self.n

    def exact_order(self, x):
        return self.n // math.gcd(x, self.n)

    def in_torsion_subgroup(self, x):
        return True

    def char_coords(self, x):
        return ()


@dataclass(frozen=True)
class Symmetric(Group):
    """Permutations of ``{1..n}``; generators ``a, b, c, ...`` are ``(1 2), (2 3), ...``."""

    n: int = 3

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= len(LETTERS) + 1:
            raise GroupError(f"Symmetric needs 1 <= n <= {len(LETTERS) + 1}")

    is_finite = True

    @property
    def is_abelian(self):
        return self.n <= 2

    @property
    def has_torsion(self):
        return self.n > 1

    @property
    def names(self):
        return LETTERS[: self.n - 1]

    def identity_raw(self):
        return tuple(range(1, self.n + 1))

    def mul(self, x, y):
        return tuple(x[j - 1] for j in y)

    def inv(self, x):
        out = [0] * self.n
        for i, j in enumerate(x, 1):
            out[j - 1] = i
        return tuple(out)

    def generators_raw(self):
        gens = []
        for i in range(self.n - 1):
            p = list(range(1, self.n + 1))
            p[i], p[i + 1] = p[i + 1], p[i]
            gens.append(tuple(p))
        return tuple(gens)

    def word(self, x):
        # bubble sort by adjacent position swaps: x s_i1 ... s_im = id
        p = list(x)
        swaps = []
        for end in range(self.n - 1, 0, -1):
            for i in range(end):
                if p[i] > p[i + 1]:
                    p[i], p[i + 1] = p[i + 1], p[i]
                    swaps.append(i)
        return [(i, 1) for i in reversed(swaps)]

    def parse_raw(self, text):
        body = text.strip()
        if body.startswith("["):
            inner = _unwrap(body, "[", "]")
            try:
                perm = tuple(int(p) for p in inner.split(","))
            except ValueError:
                raise ElementParseError(text, "one-line entries must be integers") from None
            if sorted(perm) != list(range(1, self.n + 1)):
                raise ElementParseError(text, f"not a permutation of 1..{self.n}")
            return perm
        result = self.identity_raw()
        gens = self.generators_raw()
        for g, p in _parse_word(body, self.names):
            result = self.mul(result, self.power(gens[g], p))
        return result

    def format(self, x):
        return "[" + ",".join(str(i) for i in x) + "]"

    def is_member(self, x):
        return isinstance(x, tuple) and sorted(x) == list(range(1, self.n + 1))

    def exact_order(self, x):
        seen = [False] * self.n
        order = 1
        for i in range(self.n):
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = x[j] - 1
                length += 1
            if length:
                order = order * length // math.gcd(order, length)
        return order

    def in_torsion_subgroup(self, x):
        return True

    def char_coords(self, x):
        return ()


def _free_mul(u, v):
    out = list(u)
    i = 0
    while i < len(v) and out:
        g, p = v[i]
        lg, lp = out[-1]
        if lg != g:
            break
        out.pop()
        s = lp + p
        i += 1
        if s:
            out.append((g, s))
            break
    out.extend(v[i:])
    return tuple(out)


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group on generators ``a, b, c, d, f, ...`` (the letter ``e`` is skipped)."""

    k: int = 2

    def __post_init__(self):
        if not isinstance(self.k, int) or not 1 <= self.k <= len(LETTERS):
            raise GroupError(f"FreeGroup needs 1 <= k <= {len(LETTERS)}")

    has_torsion = False

    @property
    def is_abelian(self):
        return self.k == 1

    @property
    def names(self):
        return LETTERS[: self.k]

    def identity_raw(self):
        return ()

    def mul(self, x, y):
        return _free_mul(x, y)

    def inv(self, x):
        return tuple((g, -p) for g, p in reversed(x))

    def generators_raw(self):
        return tuple(((i, 1),) for i in range(self.k))

    def word(self, x):
        return list(x)

    def parse_raw(self, text):
        return reduce(_free_mul, (((g, p),) for g, p in _parse_word(text, self.names)), ())

    def format(self, x):
        return _format_word(x, self.names)

    def is_member(self, x):
        if not isinstance(x, tuple):
            return False
        prev = None
        for item in x:
            if not (isinstance(item, tuple) and len(item) == 2):
                return False
            g, p = item
            if type(g) is not int or not 0 <= g < self.k or type(p) is not int or p == 0 or g == prev:
                return False
            prev = g
        return True

    def exact_order(self, x):
        return 1 if not x else INFINITE

    def in_torsion_subgroup(self, x):
        return not x

    def char_coords(self, x):
        sums = [0] * self.k
        for g, p in x:
            sums[g] += p
        return tuple(sums)


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _combine_orders(orders):
    if any(o == INFINITE for o in orders):
        return INFINITE
    if any(o is None for o in orders):
        return None
    return reduce(_lcm, orders, 1)


def _combine_torsion(flags):
    if any(f is False for f in flags):
        return False
    if all(f is True for f in flags):
        return True
    return None


@dataclass(frozen=True)
class DirectProduct(Group):
    left: Group
    right: Group

    @property
    def is_abelian(self):
        return self.left.is_abelian and self.right.is_abelian

    @property
    def is_finite(self):
        return self.left.is_finite and self.right.is_finite

    @property
    def has_torsion(self):
        return self.left.has_torsion or self.right.has_torsion

    def identity_raw(self):
        return (self.left.identity_raw(), self.right.identity_raw())

    def mul(self, x, y):
        return (self.left.mul(x[0], y[0]), self.right.mul(x[1], y[1]))

    def inv(self, x):
        return (self.left.inv(x[0]), self.right.inv(x[1]))

    def generators_raw(self):
        el, er = self.left.identity_raw(), self.right.identity_raw()
        return tuple((g, er) for g in self.left.generators_raw()) + tuple(
            (el, g) for g in self.right.generators_raw()
        )

    def word(self, x):
        offset = len(self.left.generators_raw())
        return self.left.word(x[0]) + [(g + offset, p) for g, p in self.right.word(x[1])]

    def parse_raw(self, text):
        parts = _split_top(_unwrap(text, "(", ")"), "|")
        if len(parts) != 2:
            raise ElementParseError(text, "expected (<left>|<right>)")
        return (self.left.parse_raw(parts[0]), self.right.parse_raw(parts[1]))

    def format(self, x):
        return f"({self.left.format(x[0])}|{self.right.format(x[1])})"

    def is_member(self, x):
        return (
            isinstance(x, tuple) and len(x) == 2
            and self.left.is_member(x[0]) and self.right.is_member(x[1])
        )

    def exact_order(self, x):
        return _combine_orders([self.left.exact_order(x[0]), self.right.exact_order(x[1])])

    def in_torsion_subgroup(self, x):
        return _combine_torsion(
            [self.left.in_torsion_subgroup(x[0]), self.right.in_torsion_subgroup(x[1])]
        )

    def char_coords(self, x):
        return self.left.char_coords(x[0]) + self.right.char_coords(x[1])


@dataclass(frozen=True)
class PowerGroup(Group):
    """Direct power ``R^J`` (the base of a wreath-type product)."""

    base: Group
    j: int

    def __post_init__(self):
        if not isinstance(self.j, int) or self.j < 1:
            raise GroupError("PowerGroup needs j >= 1")

    @property
    def is_abelian(self):
        return self.base.is_abelian

    @property
    def is_finite(self):
        return self.base.is_finite

    @property
    def has_torsion(self):
        return self.base.has_torsion

    def identity_raw(self):
        return (self.base.identity_raw(),) * self.j

    def mul(self, x, y):
        return tuple(self.base.mul(a, b) for a, b in zip(x, y))

    def inv(self, x):
        return tuple(self.base.inv(a) for a in x)

    def generators_raw(self):
        e = self.base.identity_raw()
        gens = []
        for i in range(self.j):
            for g in self.base.generators_raw():
                gens.append(tuple(g if k == i else e for k in range(self.j)))
        return tuple(gens)

    def word(self, x):
        per = len(self.base.generators_raw())
        return [(i * per + g, p) for i, a in enumerate(x) for g, p in self.base.word(a)]

    def parse_raw(self, text):
        parts = _split_top(_unwrap(text, "<", ">"), ";")
        if len(parts) != self.j:
            raise ElementParseError(text, f"expected {self.j} ';'-separated entries")
        return tuple(self.base.parse_raw(p) for p in parts)

    def format(self, x):
        return "<" + ";".join(self.base.format(a) for a in x) + ">"

    def is_member(self, x):
        return isinstance(x, tuple) and len(x) == self.j and all(self.base.is_member(a) for a in x)

    def exact_order(self, x):
        return _combine_orders([self.base.exact_order(a) for a in x])

    def in_torsion_subgroup(self, x):
        return _combine_torsion([self.base.in_torsion_subgroup(a) for a in x])

    def char_coords(self, x):
        return tuple(c for a in x for c in self.base.char_coords(a))


# --------------------------------------------------------------------------
# actions for semidirect products
# --------------------------------------------------------------------------


def _is_abelian_constructor(group):
    if isinstance(group, (IntLattice, Cyclic)):
        return True
    if isinstance(group, DirectProduct):
        return _is_abelian_constructor(group.left) and _is_abelian_constructor(group.right)
    return False


def _hom_eval(src, dst, images, x):
    """Evaluate the homomorphism ``src -> dst`` fixed by generator images at ``x``."""
    out = dst.identity_raw()
    for g, p in src.word(x):
        out = dst.mul(out, dst.power(images[g], p))
    return out


def _acting_cyclic_moduli(acting):
    """Per generator of an abelian constructor: its order (0 for a free direction)."""
    if isinstance(acting, IntLattice):
        return (0,) * acting.d
    if isinstance(acting, Cyclic):
        return (acting.n,) if acting.n > 1 else ()
    return _acting_cyclic_moduli(acting.left) + _acting_cyclic_moduli(acting.right)


@dataclass(frozen=True)
class Trivial:
    def bind(self, normal, acting):
        return self

    def apply(self, normal, acting, g, n):
        return n


@dataclass(frozen=True)
class ConjugationBy:
    """``tau_g(n) = c^g n c^-g`` for ``G = Z`` (or ``Z/m`` when ``c^m`` is central)."""

    c: Any

    def bind(self, normal, acting):
        c = normal.coerce(self.c)
        if isinstance(acting, IntLattice) and acting.d == 1:
            pass
        elif isinstance(acting, Cyclic):
            cm = normal.power(c, acting.n)
            for s in normal.generators_raw():
                if normal.conj(cm, s) != s:
                    raise GroupError(f"ConjugationBy: c^{acting.n} is not central, action ill-defined on Z/{acting.n}")
        else:
            raise GroupError("ConjugationBy needs an acting group with a single generator")
        return ConjugationBy(c)

    def apply(self, normal, acting, g, n):
        k = g[0] if isinstance(g, tuple) else g
        ck = normal.power(self.c, k)
        return normal.mul(normal.mul(ck, n), normal.inv(ck))


_FREE_WORD_BOUND = 1000


def _automorphism_order(normal, images, cap=10_000):
    gens = normal.generators_raw()
    current = list(images)
    free = isinstance(normal, FreeGroup)
    for p in range(1, cap + 1):
        if tuple(current) == tuple(gens):
            return p
        current = [_hom_eval(normal, normal, images, x) for x in current]
        # iterates of a finite-order automorphism stay in a finite set; runaway words mean infinite order
        if free and any(sum(abs(k) for _, k in w) > _FREE_WORD_BOUND for w in current):
            return None
    return None


@dataclass(frozen=True)
class GeneratorImages:
    """One automorphism of N per generator of G, given by the images of N's generators."""

    images: tuple
    orders: tuple = field(default=(), compare=False)  # 0 marks infinite order
    inverses: tuple = field(default=(), compare=False)

    def bind(self, normal, acting):
        ngens = normal.generators_raw()
        moduli = _acting_cyclic_moduli(acting)
        if len(self.images) != len(moduli):
            raise GroupError(f"GeneratorImages needs {len(moduli)} image lists (one per generator of G)")
        images = []
        for imgs in self.images:
            if len(imgs) != len(ngens):
                raise GroupError(f"each image list needs {len(ngens)} entries (one per generator of N)")
            images.append(tuple(normal.coerce(x) for x in imgs))
        images = tuple(images)
        for imgs in images:
            _check_automorphism(normal, imgs)
        orders, inverses = [], []
        for imgs in images:
            if isinstance(normal, IntLattice):
                # unimodular matrices: infinite order is fine, the inverse is exact
                inverses.append(_lattice_inverse_images(normal, imgs))
                orders.append(_automorphism_order(normal, imgs, cap=_LATTICE_ORDER_CAP) or 0)
                continue
            order = _automorphism_order(normal, imgs)
            if order is None:
                raise GroupError("automorphism has infinite order (or order above the cap); only IntLattice N supports infinite-order actions")
            orders.append(order)
            inverses.append(None)
        for i, a in enumerate(images):
            for b in images[i + 1:]:
                for s in ngens:
                    ab = _hom_eval(normal, normal, a, _hom_eval(normal, normal, b, s))
                    ba = _hom_eval(normal, normal, b, _hom_eval(normal, normal, a, s))
                    if ab != ba:
                        raise GroupError("generator automorphisms do not commute")
        for order, m in zip(orders, moduli):
            if m and (order == 0 or m % order):
                raise GroupError(f"automorphism of order {order or 'infinity'} cannot represent a generator of order {m}")
        return GeneratorImages(images, tuple(orders), tuple(inverses))

    def apply(self, normal, acting, g, n):
        for i, p in acting.word(g):
            images = self.images[i]
            if self.orders[i]:
                p %= self.orders[i]
            elif p < 0:
                images, p = self.inverses[i], -p
            for _ in range(p):
                n = _hom_eval(normal, normal, images, n)
        return n


_LATTICE_ORDER_CAP = 64


def _lattice_inverse_images(normal, images):
    """Images of the unit vectors under the inverse of a unimodular map (columns = images)."""
    A = sympy.Matrix([[images[j][i] for j in range(normal.d)] for i in range(normal.d)])
    if abs(A.det()) != 1:
        raise GroupError(f"generator images define a map of determinant {A.det()}, not an automorphism of Z^{normal.d}")
    B = A.inv()
    return tuple(tuple(int(B[i, j]) for i in range(normal.d)) for j in range(normal.d))


def _check_automorphism(normal, images):
    if normal.is_finite:
        elems = normal.elements_raw()
        gens = normal.generators_raw()
        image_of = {x: _hom_eval(normal, normal, images, x) for x in elems}
        for x in elems:
            for s, img in zip(gens, images):
                if image_of[normal.mul(x, s)] != normal.mul(image_of[x], img):
                    raise GroupError(
                        f"generator images do not define a homomorphism (fails at {normal.format(x)})"
                    )
        if len(set(image_of.values())) != len(elems):
            raise GroupError("generator images define a non-bijective map")
    elif isinstance(normal, FreeGroup):
        # an automorphism of F_k abelianizes to an automorphism of Z^k
        A = sympy.Matrix([[sum(k for g, k in img if g == i) for img in images] for i in range(normal.k)])
        if abs(A.det()) != 1:
            raise GroupError("generator images are not an automorphism (abelianization is not unimodular)")
    elif not isinstance(normal, IntLattice):
        # free objects accept any images; elsewhere relations cannot be verified
        raise GroupError("GeneratorImages on an infinite N requires a FreeGroup or IntLattice")


@dataclass(frozen=True)
class IndexPermutation:
    """Action of G on ``R^J`` by permuting coordinates: ``tau_g(r)_j = r_{g(j)}``."""

    perms: tuple
    orders: tuple = field(default=(), compare=False)

    def bind(self, normal, acting):
        if not isinstance(normal, PowerGroup):
            raise GroupError("IndexPermutation acts on a PowerGroup")
        moduli = _acting_cyclic_moduli(acting)
        perms = tuple(tuple(int(i) for i in p) for p in self.perms)
        if len(perms) != len(moduli):
            raise GroupError(f"IndexPermutation needs {len(moduli)} permutations (one per generator of G)")
        sym = Symmetric(normal.j)
        for p in perms:
            if not sym.is_member(p):
                raise GroupError(f"{list(p)} is not a permutation of 1..{normal.j}")
        for i, p in enumerate(perms):
            for q in perms[i + 1:]:
                if sym.mul(p, q) != sym.mul(q, p):
                    raise GroupError("index permutations do not commute")
        orders = tuple(sym.exact_order(p) for p in perms)
        for order, m in zip(orders, moduli):
            if m and m % order:
                raise GroupError(f"permutation of order {order} cannot represent a generator of order {m}")
        return IndexPermutation(perms, orders)

    def apply(self, normal, acting, g, n):
        sym = Symmetric(normal.j)
        total = sym.identity_raw()
        for i, p in acting.word(g):
            total = sym.mul(total, sym.power(self.perms[i], p % self.orders[i]))
        return tuple(n[total[j] - 1] for j in range(normal.j))


_TAU_CACHE_LIMIT = 1_000_000


@dataclass(frozen=True)
class Semidirect(Group):
    """``N x_tau G`` with ``G`` an abelian constructor written additively."""

    normal: Group
    acting: Group
    action: Any = Trivial()

    def __post_init__(self):
        if not _is_abelian_constructor(self.acting):
            raise GroupError("the acting group must be IntLattice, Cyclic, or a direct product thereof")
        object.__setattr__(self, "action", self.action.bind(self.normal, self.acting))
        object.__setattr__(self, "_tau_cache", {})

    @property
    def is_abelian(self):
        return self.normal.is_abelian and isinstance(self.action, Trivial)

    @property
    def is_finite(self):
        return self.normal.is_finite and self.acting.is_finite

    @property
    def has_torsion(self):
        return self.normal.has_torsion or self.acting.has_torsion

    def tau(self, g, n):
        key = (g, n)
        cache = self._tau_cache
        out = cache.get(key)
        if out is None:
            if len(cache) > _TAU_CACHE_LIMIT:
                cache.clear()
            out = cache[key] = self.action.apply(self.normal, self.acting, g, n)
        return out

    def identity_raw(self):
        return (self.normal.identity_raw(), self.acting.identity_raw())

    def mul(self, x, y):
        return (self.normal.mul(x[0], self.tau(x[1], y[0])), self.acting.mul(x[1], y[1]))

    def inv(self, x):
        g = self.acting.inv(x[1])
        return (self.tau(g, self.normal.inv(x[0])), g)

    def generators_raw(self):
        en, eg = self.normal.identity_raw(), self.acting.identity_raw()
        return tuple((s, eg) for s in self.normal.generators_raw()) + tuple(
            (en, t) for t in self.acting.generators_raw()
        )

    def word(self, x):
        # (n, g) = (n, 0)(e, g)
        offset = len(self.normal.generators_raw())
        return self.normal.word(x[0]) + [(g + offset, p) for g, p in self.acting.word(x[1])]

    def parse_raw(self, text):
        parts = _split_top(_unwrap(text, "(", ")"), "|")
        if len(parts) != 2:
            raise ElementParseError(text, "expected (<n>|<g>)")
        return (self.normal.parse_raw(parts[0]), self.acting.parse_raw(parts[1]))

    def format(self, x):
        return f"({self.normal.format(x[0])}|{self.acting.format(x[1])})"

    def is_member(self, x):
        return (
            isinstance(x, tuple) and len(x) == 2
            and self.normal.is_member(x[0]) and self.acting.is_member(x[1])
        )

    def exact_order(self, x):
        og = self.acting.exact_order(x[1])
        if og == INFINITE or og is None:
            return og
        on = self.normal.exact_order(self.power(x, og)[0])
        if on == INFINITE or on is None:
            return on
        return og * on

    def in_torsion_subgroup(self, x):
        n, g = x
        tg = self.acting.in_torsion_subgroup(g)
        if tg is False:
            return False
        if not self.acting.has_torsion:
            # torsion elements all lie in N x {0}, so the torsion subgroup is B(N) x {0}
            return self.normal.in_torsion_subgroup(n)
        if self.is_finite:
            return True
        return None

    def char_coords(self, x):
        # only pullbacks phi o pi along the projection onto G
        return self.acting.char_coords(x[1])


def WreathLite(r: Group, j: int, g: Group, action: Sequence[Sequence[int]]) -> Semidirect:
    """``R^J x_tau G`` where each generator of G permutes the index set ``{1..j}``."""
    return Semidirect(PowerGroup(r, j), g, IndexPermutation(tuple(tuple(p) for p in action)))


# --------------------------------------------------------------------------
# element-level operations
# --------------------------------------------------------------------------


def identity(spec: Group) -> Element:
    return spec.identity()


def multiply(x: Element, y: Element) -> Element:
    return x * y


def inverse(x: Element) -> Element:
    return x.inverse()


def conjugate(y: Element, x: Element) -> Element:
    """``y x y^-1``."""
    return y * x * y.inverse()


def element_order(x: Element, cap: int = 1000):
    """Smallest ``n <= cap`` with ``x^n = e``; :data:`INFINITE` if provably infinite; else ``None``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    group = x.group
    order = group.exact_order(x.value)
    if order == INFINITE:
        return INFINITE
    if order is not None:
        return order if order <= cap else None
    e = group.identity_raw()
    y = x.value
    for n in range(1, cap + 1):
        if y == e:
            return n
        y = group.mul(y, x.value)
    return None


def symmetrize(group: Group, gens: Iterable) -> list:
    """Raw generators closed under inversion, identity removed, sorted."""
    out = set()
    e = group.identity_raw()
    for g in gens:
        g = group.coerce(g)
        if g != e:
            out.add(g)
            out.add(group.inv(g))
    return sorted(out)


def ball_raw(group: Group, gens, radius, cap: int = DEFAULT_BALL_CAP):
    """BFS ball; returns ``(elements, layer_of_each)``.  ``radius=None`` runs to closure."""
    gens = symmetrize(group, gens)
    e = group.identity_raw()
    layers = [[e]]
    seen = {e}
    frontier = [e]
    r = 0
    while frontier and (radius is None or r < radius):
        nxt = set()
        for x in frontier:
            for s in gens:
                y = group.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        if len(seen) > cap:
            raise BallCapError(f"ball exceeds cap of {cap} elements at radius {r + 1}")
        frontier = sorted(nxt)
        if frontier:
            layers.append(frontier)
        r += 1
    elems = [x for layer in layers for x in layer]
    depth = [i for i, layer in enumerate(layers) for _ in layer]
    return elems, depth


def ball(spec: Group, gens, radius: int, cap: int = DEFAULT_BALL_CAP) -> list:
    """All words of length ``<= radius`` over ``gens`` (symmetrized), identity first,
    then by BFS layer and canonical order inside each layer."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    elems, _ = ball_raw(spec, gens, radius, cap)
    return [Element(spec, x) for x in elems]
