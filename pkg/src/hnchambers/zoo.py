"""Built-in surfaces, the surface description format, and automorphism checks."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .chambers import ChamberId, chamber_id
from .errors import (
    InvalidGenus,
    NoDestabilizer,
    NotAmple,
    ParseError,
    UnknownAutomorphism,
    ValidationError,
)
from .lattice import AmpleCone, DivClass, NSLattice, as_class, parse_rational
from .model import Automorphism, SheafDescriptor, SurfaceModel
from .stability import max_destabilizer

RELATIVE_TANGENT = "relative tangent bundle of the projection to P1"


def hirzebruch(n: int) -> SurfaceModel:
    """The Hirzebruch surface Σn in the basis (C0, f).

    ``C0² = −n``, ``C0·f = 1``, ``f² = 0``; ``aC0 + bf`` is ample iff
    ``a > 0`` and ``b > an``; ``−K = 2C0 + (2+n)f``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    lattice = NSLattice(2, ((-n, 1), (1, 0)), ("C0", "f"))
    # f·(aC0 + bf) = a and C0·(aC0 + bf) = b − na
    cone = AmpleCone((DivClass.of(0, 1), DivClass.of(1, 0)), (DivClass.of(0, 1), DivClass.of(1, n)))
    tangent = DivClass.of(2, 2 + n)
    automorphisms = [Automorphism("id", ((1, 0), (0, 1)), identity_component=True)]
    if n == 0:
        candidates = [
            SheafDescriptor("T1_X/P1", 1, DivClass.of(2, 0), note="relative tangent bundle of the first projection"),
            SheafDescriptor("T2_X/P1", 1, DivClass.of(0, 2), note="relative tangent bundle of the second projection"),
        ]
        automorphisms.append(Automorphism("swap", ((0, 1), (1, 0))))
    else:
        # c1(T_X) − c1(π*T_P1) with c1(π*T_P1) = 2f
        note = RELATIVE_TANGENT
        if n == 1:
            note += (
                "; destabilizing exactly where 2y > 3x for H = xC0 + yf. Completeness of the"
                " candidate list on 2y <= 3x rests on the Aut(Σ1) argument (radial foliation"
                " through the blown-up point), which is not checked numerically. The"
                " prose reading 'x > 3/2 y' is a variable swap of this inequality."
            )
        candidates = [SheafDescriptor("T_X/P1", 1, DivClass.of(2, n), note=note)]
    return SurfaceModel(
        name=f"hirzebruch:{n}",
        lattice=lattice,
        canonical=-tangent,
        tangent_c1=tangent,
        cone=cone,
        candidates=tuple(candidates),
        automorphisms=tuple(automorphisms),
        uniruled=True,
        rc_hint=True,
    )


def product_with_line(g: int) -> SurfaceModel:
    """C × P1 for a curve C of genus g, in the basis (s, f).

    ``s = C × pt`` and ``f = pt × P1`` (the rational fibre); the relative
    tangent bundle of X → C is ``2s``.
    """
    if g < 1:
        raise InvalidGenus("product_with_line needs g >= 1; use hirzebruch(0) for g = 0")
    lattice = NSLattice(2, ((0, 1), (1, 0)), ("s", "f"))
    cone = AmpleCone((DivClass.of(0, 1), DivClass.of(1, 0)), (DivClass.of(1, 0), DivClass.of(0, 1)))
    tangent = DivClass.of(2, 2 - 2 * g)
    return SurfaceModel(
        name=f"product:{g}",
        lattice=lattice,
        canonical=-tangent,
        tangent_c1=tangent,
        cone=cone,
        candidates=(SheafDescriptor("T_X/C", 1, DivClass.of(2, 0), note="relative tangent bundle of X -> C"),),
        automorphisms=(Automorphism("id", ((1, 0), (0, 1)), identity_component=True),),
        uniruled=True,
        rc_hint=False,
    )


def builtin(name: str) -> SurfaceModel:
    """Resolve ``hirzebruch:<n>`` or ``product:<g>``."""
    kind, sep, arg = name.partition(":")
    if not sep or not arg.isdigit():
        raise ParseError(f"unknown builtin {name!r}; expected hirzebruch:<n> or product:<g>")
    if kind == "hirzebruch":
        return hirzebruch(int(arg))
    if kind == "product":
        return product_with_line(int(arg))
    raise ParseError(f"unknown builtin {name!r}; expected hirzebruch:<n> or product:<g>")


_RAT = {"type": "string"}
_RAT_VEC = {"type": "array", "items": _RAT}
_INT_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}

SURFACE_SCHEMA = {
    "type": "object",
    "required": ["name", "rank", "basis", "gram", "canonical", "ample_cone", "candidates", "flags"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "rank": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": {"type": "string"}},
        "gram": _INT_MATRIX,
        "canonical": _RAT_VEC,
        "ample_cone": {
            "type": "object",
            "required": ["inequalities"],
            "additionalProperties": False,
            "properties": {
                "inequalities": {"type": "array", "items": _RAT_VEC},
                "generators": {
                    "type": "array",
                    "minItems": 2,
                    "maxItems": 2,
                    "items": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "rank", "c1"],
                "additionalProperties": False,
                "properties": {
                    "label": {"type": "string"},
                    "rank": {"type": "integer"},
                    "c1": _RAT_VEC,
                    "torsion_free_quotient": {"type": "boolean"},
                    "note": {"type": "string"},
                },
            },
        },
        "automorphisms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "matrix"],
                "additionalProperties": False,
                "properties": {
                    "label": {"type": "string"},
                    "matrix": _INT_MATRIX,
                    "identity_component": {"type": "boolean"},
                },
            },
        },
        "flags": {
            "type": "object",
            "required": ["uniruled"],
            "additionalProperties": False,
            "properties": {
                "uniruled": {"type": "boolean"},
                "rc_hint": {"type": ["boolean", "null"]},
            },
        },
    },
}


def to_config(model: SurfaceModel) -> dict:
    """Serialize a model to the surface description format."""
    cone = {"inequalities": [w.to_strings() for w in model.cone.inequalities]}
    if model.cone.generators is not None:
        cone["generators"] = [[int(c) for c in g] for g in model.cone.generators]
    return {
        "name": model.name,
        "rank": model.rank,
        "basis": list(model.lattice.basis_labels),
        "gram": [list(row) for row in model.lattice.gram],
        "canonical": model.canonical.to_strings(),
        "ample_cone": cone,
        "candidates": [
            {
                "label": c.label,
                "rank": c.rank,
                "c1": c.c1.to_strings(),
                "torsion_free_quotient": c.torsion_free_quotient,
                "note": c.note,
            }
            for c in model.candidates
        ],
        "automorphisms": [
            {"label": a.label, "matrix": [list(r) for r in a.matrix], "identity_component": a.identity_component}
            for a in model.automorphisms
        ],
        "flags": {"uniruled": model.uniruled, "rc_hint": model.rc_hint},
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _vec(values, path: str, n: int) -> DivClass:
    try:
        v = DivClass(parse_rational(x) for x in values)
    except ParseError as exc:
        raise ValidationError(path, str(exc)) from None
    if len(v) != n:
        raise ValidationError(path, f"expected {n} coordinates, got {len(v)}")
    return v


def _matrix(rows, path: str, n: int) -> tuple[tuple[int, ...], ...]:
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValidationError(path, f"must be a {n}x{n} matrix")
    return tuple(tuple(r) for r in rows)


def _json_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out or "<root>"


def from_config(data) -> SurfaceModel:
    """Build and validate a model from a parsed document (or its JSON text)."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    errors = sorted(
        jsonschema.Draft202012Validator(SURFACE_SCHEMA).iter_errors(data),
        key=lambda e: [str(p) for p in e.absolute_path],
    )
    if errors:
        exc = errors[0]
        raise ValidationError(_json_path(exc.absolute_path), exc.message)

    n = data["rank"]
    if len(data["basis"]) != n:
        raise ValidationError("basis", f"expected {n} labels")
    gram = _matrix(data["gram"], "gram", n)
    for i in range(n):
        for j in range(i):
            if gram[i][j] != gram[j][i]:
                raise ValidationError("gram", f"not symmetric at ({i},{j})")
    lattice = NSLattice(n, gram, tuple(data["basis"]))
    canonical = _vec(data["canonical"], "canonical", n)

    cone_doc = data["ample_cone"]
    ineqs = tuple(_vec(w, f"ample_cone.inequalities[{i}]", n) for i, w in enumerate(cone_doc["inequalities"]))
    gens = None
    if "generators" in cone_doc:
        gens = tuple(DivClass(g) for g in cone_doc["generators"])
    cone = AmpleCone(ineqs, gens)

    candidates = []
    for i, c in enumerate(data["candidates"]):
        if c["rank"] != 1:
            raise ValidationError(f"candidates[{i}].rank", "candidate destabilizers must have rank 1")
        candidates.append(
            SheafDescriptor(
                c["label"],
                c["rank"],
                _vec(c["c1"], f"candidates[{i}].c1", n),
                c.get("torsion_free_quotient", True),
                c.get("note", ""),
            )
        )
    automorphisms = [
        Automorphism(a["label"], _matrix(a["matrix"], f"automorphisms[{i}].matrix", n),
                     a.get("identity_component", False))
        for i, a in enumerate(data.get("automorphisms", []))
    ]
    flags = data["flags"]
    return SurfaceModel(
        name=data["name"],
        lattice=lattice,
        canonical=canonical,
        tangent_c1=-canonical,
        cone=cone,
        candidates=tuple(candidates),
        automorphisms=tuple(automorphisms),
        uniruled=flags["uniruled"],
        rc_hint=flags.get("rc_hint"),
    )


def load_surface(path) -> SurfaceModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return from_config(text)


def aut_image(model: SurfaceModel, aut_label: str, cls) -> DivClass:
    try:
        aut = model.automorphism(aut_label)
    except KeyError:
        raise UnknownAutomorphism(f"no automorphism {aut_label!r} on {model.name}") from None
    return aut.act(cls)


def check_aut_invariance(model: SurfaceModel, aut_label: str, H) -> bool:
    """Whether the automorphism fixes c1 of the maximal destabilizer at H.

    Identity-component automorphisms act trivially on the lattice, so they
    always pass; other lattice automorphisms may legitimately move the class
    (use :func:`aut_image` to see where it goes).
    """
    H = as_class(H)
    if not model.is_ample(H):
        raise NotAmple(f"{H} is not in the ample cone of {model.name}")
    L = max_destabilizer(model, H)
    if L is None:
        raise NoDestabilizer(f"T_X has no declared destabilizer at {H}")
    return aut_image(model, aut_label, L.c1) == L.c1


def relabel_chamber(model: SurfaceModel, aut_label: str, cid: ChamberId) -> ChamberId:
    """Image of a chamber id under the candidate permutation induced on c1 classes."""
    if cid.kind == "Semistable":
        return cid

    def image(label: str) -> str:
        c1 = aut_image(model, aut_label, model.candidate(label).c1)
        matches = [c.label for c in model.candidates if c.c1 == c1]
        if len(matches) != 1:
            raise ValueError(f"image of {label} is not a unique declared candidate")
        return matches[0]

    if cid.kind == "Destab":
        return ChamberId.destab(image(cid.label))
    return ChamberId.ambiguous(image(x) for x in cid.labels)


def aut_chamber_consistent(model: SurfaceModel, aut_label: str, H) -> bool:
    """``chamber_id(M·H)`` equals the relabelled ``chamber_id(H)``."""
    img = aut_image(model, aut_label, H)
    return chamber_id(model, img) == relabel_chamber(model, aut_label, chamber_id(model, H))
