"""Néron–Severi lattices, divisor classes and polyhedral ample cones.

Everything here is exact: coordinates are :class:`fractions.Fraction` and the
intersection form is an integer matrix.  Chamber membership is decided by
sign tests, so no float ever enters a comparison.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ParseError, ZeroVector

_RATIONAL_RE = re.compile(r"^(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` in lowest terms with ``q > 0``.

    Anything else (decimals, ``"-0"``, ``"2/4"``, whitespace) is rejected.
    """
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"malformed rational {text!r}")
    sign, p, q = m.groups()
    num = int(p)
    den = int(q) if q else 1
    if sign and num == 0:
        raise ParseError(f"malformed rational {text!r}")
    if math.gcd(num, den) != 1:
        raise ParseError(f"rational {text!r} is not in lowest terms")
    return Fraction(-num if sign else num, den)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_vector(text: str) -> "DivClass":
    """Parse a comma separated list of rationals, e.g. ``"3/2,2"``."""
    parts = text.split(",")
    return DivClass(parse_rational(p.strip()) for p in parts)


@dataclass(frozen=True)
class DivClass:
    """A rational class in the basis of some lattice."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Fraction | int | str]):
        vals = []
        for c in coeffs:
            if isinstance(c, float):
                raise TypeError("floating point coefficients are not allowed")
            vals.append(Fraction(c))
        object.__setattr__(self, "coeffs", tuple(vals))

    @classmethod
    def of(cls, *coeffs) -> "DivClass":
        return cls(coeffs)

    @classmethod
    def zero(cls, rank: int) -> "DivClass":
        return cls([0] * rank)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def _check(self, other: "DivClass") -> None:
        if len(other) != len(self):
            raise DimensionMismatch(f"length {len(self)} vs {len(other)}")

    def __add__(self, other: "DivClass") -> "DivClass":
        other = as_class(other)
        self._check(other)
        return DivClass(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "DivClass") -> "DivClass":
        other = as_class(other)
        self._check(other)
        return DivClass(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "DivClass":
        return DivClass(-a for a in self.coeffs)

    def __mul__(self, scalar) -> "DivClass":
        if isinstance(scalar, float):
            raise TypeError("floating point scalars are not allowed")
        s = Fraction(scalar)
        return DivClass(s * a for a in self.coeffs)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_strings()) + ")"


def as_class(v) -> DivClass:
    if isinstance(v, DivClass):
        return v
    if isinstance(v, str):
        return parse_vector(v)
    return DivClass(v)


@dataclass(frozen=True)
class NSLattice:
    """Integer lattice with a symmetric intersection form."""

    rank: int
    gram: tuple[tuple[int, ...], ...]
    basis_labels: tuple[str, ...] = ()
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        labels = tuple(self.basis_labels) or tuple(f"e{i}" for i in range(self.rank))
        object.__setattr__(self, "basis_labels", labels)
        if self.rank < 1:
            raise DimensionMismatch("lattice rank must be positive")
        if len(gram) != self.rank or any(len(row) != self.rank for row in gram):
            raise DimensionMismatch(f"gram must be {self.rank}x{self.rank}")
        if len(labels) != self.rank:
            raise DimensionMismatch("one basis label per lattice generator")
        for i in range(self.rank):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError(f"gram is not symmetric at ({i},{j})")
        if self.validate and self.rank == 2 and self.det() >= 0:
            warnings.warn(
                f"gram determinant {self.det()} is not negative; the form does "
                "not have signature (1,1)",
                stacklevel=3,
            )

    def det(self) -> int:
        if self.rank == 1:
            return self.gram[0][0]
        if self.rank == 2:
            (a, b), (c, d) = self.gram
            return a * d - b * c
        # Bareiss elimination keeps intermediate values integral.
        m = [list(row) for row in self.gram]
        n = self.rank
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for r in range(k + 1, n):
                    if m[r][k] != 0:
                        m[k], m[r] = m[r], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def apply(self, v: DivClass) -> DivClass:
        """Return ``gram · v``, the linear functional ``w ↦ w·v`` in coordinates."""
        v = as_class(v)
        if len(v) != self.rank:
            raise DimensionMismatch(f"class of length {len(v)} in rank {self.rank} lattice")
        return DivClass(sum(g * c for g, c in zip(row, v.coeffs)) for row in self.gram)


def pair(lattice: NSLattice, a, b) -> Fraction:
    """Intersection number ``aᵀ · gram · b``."""
    a, b = as_class(a), as_class(b)
    if len(a) != lattice.rank or len(b) != lattice.rank:
        raise DimensionMismatch(
            f"classes of length {len(a)}, {len(b)} in rank {lattice.rank} lattice"
        )
    total = Fraction(0)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        row = lattice.gram[i]
        total += ai * sum((g * bj for g, bj in zip(row, b.coeffs)), Fraction(0))
    return total


def cross(a, b) -> Fraction:
    """Orientation of a pair of rank-2 coordinate vectors."""
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class AmpleCone:
    """Open polyhedral cone ``{H : w·H > 0 for every inequality w}``.

    ``generators`` are the two boundary rays at rank 2, in the order used for
    angular sorting.
    """

    inequalities: tuple[DivClass, ...]
    generators: tuple[DivClass, DivClass] | None = None

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(as_class(w) for w in self.inequalities))
        if self.generators is not None:
            gens = tuple(as_class(g) for g in self.generators)
            if len(gens) != 2:
                raise DimensionMismatch("exactly two cone generators are expected")
            object.__setattr__(self, "generators", gens)

    def values(self, lattice: NSLattice, H) -> list[Fraction]:
        return [pair(lattice, w, H) for w in self.inequalities]


def is_ample(cone: AmpleCone, lattice: NSLattice, H) -> bool:
    return all(v > 0 for v in cone.values(lattice, H))


def in_closed_cone(cone: AmpleCone, lattice: NSLattice, H) -> bool:
    return all(v >= 0 for v in cone.values(lattice, H))


def primitive(v, cone: AmpleCone | None = None, lattice: NSLattice | None = None) -> DivClass:
    """Primitive integer representative of the ray through ``v``.

    The sign makes the first nonzero entry positive, except that a vector is
    flipped into the closed ample cone when only its negation lies there.
    """
    v = as_class(v)
    if not v.is_integral():
        raise ValueError(f"primitive() needs integer entries, got {v}")
    ints = [int(c) for c in v.coeffs]
    g = math.gcd(*ints)
    if g == 0:
        raise ZeroVector("zero vector has no primitive representative")
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    out = DivClass(ints)
    if cone is not None and lattice is not None:
        if not in_closed_cone(cone, lattice, out) and in_closed_cone(cone, lattice, -out):
            out = -out
    return out


def integral_ray(v) -> DivClass:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    v = as_class(v)
    if v.is_zero():
        raise ZeroVector("zero vector spans no ray")
    den = math.lcm(*(c.denominator for c in v.coeffs))
    ints = [int(c * den) for c in v.coeffs]
    g = math.gcd(*ints)
    return DivClass(c // g for c in ints)


def strictly_feasible(inequalities: Sequence[DivClass], lattice: NSLattice) -> bool:
    """Decide whether some H satisfies ``w·H > 0`` for all inequalities.

    The system is homogeneous, so strict feasibility is equivalent to
    feasibility of ``w·H >= 1``; that is decided by exact Fourier–Motzkin
    elimination.
    """
    rows = [(list(lattice.apply(w).coeffs), Fraction(1)) for w in inequalities]
    if not rows:
        return True
    for k in range(lattice.rank):
        pos, neg, rest = [], [], []
        for a, b in rows:
            if a[k] > 0:
                pos.append((a, b))
            elif a[k] < 0:
                neg.append((a, b))
            else:
                rest.append((a, b))
        new = rest
        for ap, bp in pos:
            for an, bn in neg:
                sp, sn = -an[k], ap[k]
                a = [sp * x + sn * y for x, y in zip(ap, an)]
                new.append((a, sp * bp + sn * bn))
        rows = _dedupe(new)
    return all(b <= 0 for _, b in rows)


def _dedupe(rows):
    seen = set()
    out = []
    for a, b in rows:
        nz = [x for x in a if x != 0]
        scale = abs(nz[0]) if nz else (abs(b) if b != 0 else Fraction(1))
        key = (tuple(x / scale for x in a), b / scale)
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out
