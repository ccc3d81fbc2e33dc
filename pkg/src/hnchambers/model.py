"""Surface models: lattice, canonical class, ample cone and candidate subsheaves."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .lattice import (
    AmpleCone,
    DivClass,
    NSLattice,
    as_class,
    cross,
    in_closed_cone,
    is_ample,
    strictly_feasible,
)

TANGENT_LABEL = "TX"


@dataclass(frozen=True)
class SheafDescriptor:
    """Numerical shadow of a torsion-free sheaf: its rank and first Chern class.

    ``torsion_free_quotient`` is the declared (not checked) statement that the
    quotient of the tangent bundle by this subsheaf is torsion-free.
    """

    label: str
    rank: int
    c1: DivClass
    torsion_free_quotient: bool = True
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "c1", as_class(self.c1))
        if self.rank < 1:
            raise ValueError(f"sheaf {self.label!r} must have positive rank")


@dataclass(frozen=True)
class Automorphism:
    label: str
    matrix: tuple[tuple[int, ...], ...]
    identity_component: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix)
        )

    def act(self, v) -> DivClass:
        v = as_class(v)
        return DivClass(sum(m * c for m, c in zip(row, v.coeffs)) for row in self.matrix)


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    lattice: NSLattice
    canonical: DivClass
    tangent_c1: DivClass
    cone: AmpleCone
    candidates: tuple[SheafDescriptor, ...] = ()
    automorphisms: tuple[Automorphism, ...] = ()
    uniruled: bool = False
    rc_hint: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "canonical", as_class(self.canonical))
        object.__setattr__(self, "tangent_c1", as_class(self.tangent_c1))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "automorphisms", tuple(self.automorphisms))
        validate_model(self)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def tangent(self) -> SheafDescriptor:
        return SheafDescriptor(TANGENT_LABEL, 2, self.tangent_c1, note="tangent bundle")

    def candidate(self, label: str) -> SheafDescriptor:
        for c in self.candidates:
            if c.label == label:
                return c
        raise KeyError(label)

    def sheaf(self, label: str) -> SheafDescriptor:
        """Look up a candidate by label; ``"TX"`` names the tangent bundle."""
        if label == TANGENT_LABEL:
            return self.tangent
        return self.candidate(label)

    def automorphism(self, label: str) -> Automorphism:
        for a in self.automorphisms:
            if a.label == label:
                return a
        raise KeyError(label)

    def is_ample(self, H) -> bool:
        return is_ample(self.cone, self.lattice, H)


def validate_model(model: SurfaceModel) -> None:
    """Check every model invariant, raising ValidationError with a field path."""
    n = model.lattice.rank
    if len(model.canonical) != n:
        raise ValidationError("canonical", f"expected {n} coordinates, got {len(model.canonical)}")
    if len(model.tangent_c1) != n:
        raise ValidationError("tangent_c1", f"expected {n} coordinates")
    if not (model.tangent_c1 + model.canonical).is_zero():
        raise ValidationError("tangent_c1", "must equal minus the canonical class")

    cone = model.cone
    if not cone.inequalities:
        raise ValidationError("ample_cone.inequalities", "at least one inequality is required")
    for i, w in enumerate(cone.inequalities):
        if len(w) != n:
            raise ValidationError(f"ample_cone.inequalities[{i}]", f"expected {n} coordinates")
    if not strictly_feasible(cone.inequalities, model.lattice):
        raise ValidationError("ample_cone.inequalities", "cone is empty: no class satisfies all inequalities")
    if cone.generators is not None:
        _validate_generators(model)
    elif n == 2:
        raise ValidationError("ample_cone.generators", "required at rank 2")

    seen = set()
    for i, c in enumerate(model.candidates):
        path = f"candidates[{i}]"
        if c.label in seen or c.label == "TX":
            raise ValidationError(f"{path}.label", f"duplicate or reserved label {c.label!r}")
        seen.add(c.label)
        if c.rank != 1:
            raise ValidationError(f"{path}.rank", "candidate destabilizers must have rank 1")
        if len(c.c1) != n:
            raise ValidationError(f"{path}.c1", f"expected {n} coordinates, got {len(c.c1)}")

    seen = set()
    for i, a in enumerate(model.automorphisms):
        path = f"automorphisms[{i}]"
        if a.label in seen:
            raise ValidationError(f"{path}.label", f"duplicate label {a.label!r}")
        seen.add(a.label)
        _validate_automorphism(model, a, path)


def _validate_generators(model: SurfaceModel) -> None:
    lat, cone = model.lattice, model.cone
    path = "ample_cone.generators"
    if lat.rank != 2:
        raise ValidationError(path, "generators are only supported at rank 2")
    g1, g2 = cone.generators
    for i, g in enumerate((g1, g2)):
        if len(g) != 2 or not g.is_integral():
            raise ValidationError(f"{path}[{i}]", "must be an integer vector of length 2")
        if not in_closed_cone(cone, lat, g):
            raise ValidationError(f"{path}[{i}]", "lies outside the closed cone")
        if all(v > 0 for v in cone.values(lat, g)):
            raise ValidationError(f"{path}[{i}]", "is not on the boundary of the cone")
    if cross(g1, g2) == 0:
        raise ValidationError(path, "generators are collinear")
    if not is_ample(cone, lat, g1 + g2):
        raise ValidationError("ample_cone", "cone is empty: no class strictly between generators")


def _validate_automorphism(model: SurfaceModel, a: Automorphism, path: str) -> None:
    n = model.lattice.rank
    m = a.matrix
    if len(m) != n or any(len(row) != n for row in m):
        raise ValidationError(f"{path}.matrix", f"must be {n}x{n}")
    gram = model.lattice.gram
    for i in range(n):
        for j in range(n):
            # (Mᵀ G M)_ij
            v = sum(m[k][i] * gram[k][l] * m[l][j] for k in range(n) for l in range(n))
            if v != gram[i][j]:
                raise ValidationError(f"{path}.matrix", "does not preserve the intersection form")
    if a.act(model.canonical) != model.canonical:
        raise ValidationError(f"{path}.matrix", "does not fix the canonical class")
    if model.cone.generators is not None:
        for g in model.cone.generators:
            if not in_closed_cone(model.cone, model.lattice, a.act(g)):
                raise ValidationError(f"{path}.matrix", "maps a cone generator outside the closed cone")
    if a.identity_component:
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        if m != ident:
            raise ValidationError(
                f"{path}.identity_component",
                "identity-component automorphisms act trivially on the lattice",
            )
