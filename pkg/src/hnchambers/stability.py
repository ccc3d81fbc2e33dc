"""Slopes, walls and the Harder–Narasimhan filtration of a surface tangent bundle.

Semistability here is always relative to the candidate subsheaves declared on
the model: the numerical data cannot see any other subsheaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import AmbiguousWall, NotAmple, RankUnsupported, UnsaturatedQuotient
from .lattice import DivClass, as_class, pair
from .model import SheafDescriptor, SurfaceModel


def _require_ample(model: SurfaceModel, H) -> DivClass:
    H = as_class(H)
    if not model.is_ample(H):
        raise NotAmple(f"{H} is not in the ample cone of {model.name}")
    return H


def slope(sheaf: SheafDescriptor, H, model: SurfaceModel) -> Fraction:
    """``c1(sheaf)·H / rank`` at an ample class ``H``."""
    H = _require_ample(model, H)
    return pair(model.lattice, sheaf.c1, H) / sheaf.rank


def wall_class(L: SheafDescriptor, model: SurfaceModel) -> DivClass:
    """Normal ``2·c1(L) − c1(T_X)`` of the wall where L and T_X have equal slope."""
    if L.rank != 1:
        raise RankUnsupported(f"walls are defined for rank 1 subsheaves, {L.label} has rank {L.rank}")
    return 2 * L.c1 - model.tangent_c1


def wall_value(L: SheafDescriptor, H, model: SurfaceModel) -> Fraction:
    """Pairing of the wall class with ``H``; defined for every class, ample or not."""
    return pair(model.lattice, wall_class(L, model), H)


def quotient(L: SheafDescriptor, model: SurfaceModel) -> SheafDescriptor:
    """The rank one quotient ``T_X / L``."""
    if L.rank != 1:
        raise RankUnsupported(f"{L.label} has rank {L.rank}")
    return SheafDescriptor(f"TX/{L.label}", 1, model.tangent_c1 - L.c1)


def destabilizes(L: SheafDescriptor, H, model: SurfaceModel) -> bool:
    H = _require_ample(model, H)
    return wall_value(L, H, model) > 0


def destabilizing_candidates(model: SurfaceModel, H) -> list[tuple[SheafDescriptor, Fraction]]:
    H = _require_ample(model, H)
    out = []
    for L in model.candidates:
        if wall_value(L, H, model) > 0:
            out.append((L, pair(model.lattice, L.c1, H)))
    return out


def max_destabilizer(model: SurfaceModel, H) -> SheafDescriptor | None:
    """The declared candidate of strictly maximal slope among those destabilizing at H.

    Raises AmbiguousWall when several destabilizing candidates share the top slope.
    """
    found = destabilizing_candidates(model, H)
    if not found:
        return None
    top = max(s for _, s in found)
    best = [L for L, s in found if s == top]
    if len(best) > 1:
        raise AmbiguousWall([L.label for L in best])
    return best[0]


@dataclass(frozen=True)
class Semistable:
    slope: Fraction
    relative_to: tuple[str, ...] = ()

    kind = "Semistable"

    @property
    def positive_length(self) -> int:
        return 1 if self.slope > 0 else 0

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return (self.slope,)


@dataclass(frozen=True)
class TwoStep:
    destabilizer: SheafDescriptor
    mu1: Fraction
    mu2: Fraction

    kind = "TwoStep"

    def __post_init__(self):
        if not self.mu1 > self.mu2:
            raise ValueError(f"HN slopes must strictly decrease, got {self.mu1} <= {self.mu2}")

    @property
    def positive_length(self) -> int:
        return sum(1 for mu in self.slopes if mu > 0)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return (self.mu1, self.mu2)


HNFResult = Union[Semistable, TwoStep]


def positive_length(hnf: HNFResult) -> int:
    """Largest index i with a positive i-th HN slope, 0 if there is none."""
    m = 0
    for i, mu in enumerate(hnf.slopes, start=1):
        if mu > 0:
            m = i
    return m


def hn_filtration(model: SurfaceModel, H) -> HNFResult:
    """HN filtration of T_X at an ample class.

    A rank one destabilizer with torsion-free quotient already gives the whole
    filtration ``0 ⊂ L ⊂ T_X``, since its quotient then has strictly smaller slope.
    """
    H = _require_ample(model, H)
    L = max_destabilizer(model, H)
    if L is None:
        return Semistable(slope(model.tangent, H, model), tuple(c.label for c in model.candidates))
    if not L.torsion_free_quotient:
        raise UnsaturatedQuotient(
            f"maximal destabilizer {L.label} is declared with a torsion quotient; "
            "its saturation is not known numerically"
        )
    return TwoStep(L, slope(L, H, model), slope(quotient(L, model), H, model))
