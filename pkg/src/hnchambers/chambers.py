"""Wall-and-chamber decomposition of the ample cone.

Chambers are labelled by the maximal destabilizing candidate (or by
semistability).  At Picard rank 2 the walls are rays, which are sorted by the
sign of exact cross products between the two cone generators.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import AmbiguousWall, MissingGenerators, NotAmple, RankUnsupported
from .lattice import DivClass, as_class, cross, integral_ray, pair
from .model import SurfaceModel
from .stability import max_destabilizer, wall_class


@dataclass(frozen=True)
class ChamberId:
    kind: str  # "Semistable", "Destab" or "AmbiguousWall"
    labels: tuple[str, ...] = ()

    @classmethod
    def semistable(cls) -> "ChamberId":
        return cls("Semistable")

    @classmethod
    def destab(cls, label: str) -> "ChamberId":
        return cls("Destab", (label,))

    @classmethod
    def ambiguous(cls, labels) -> "ChamberId":
        return cls("AmbiguousWall", tuple(sorted(labels)))

    @property
    def label(self) -> str | None:
        return self.labels[0] if self.kind == "Destab" else None

    def __str__(self) -> str:
        if self.kind == "Semistable":
            return "Semistable"
        return f"{self.kind}{{{', '.join(self.labels)}}}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "labels": list(self.labels)}


def chamber_id(model: SurfaceModel, H) -> ChamberId:
    H = as_class(H)
    if not model.is_ample(H):
        raise NotAmple(f"{H} is not in the ample cone of {model.name}")
    try:
        L = max_destabilizer(model, H)
    except AmbiguousWall as exc:
        return ChamberId.ambiguous(exc.labels)
    if L is None:
        return ChamberId.semistable()
    return ChamberId.destab(L.label)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Chamber:
    """A sector of a rank 2 ample cone between two primitive boundary rays.

    ``inclusion`` says which boundary rays belong to the chamber; rays on the
    boundary of the ample cone never do.  A chamber with equal boundary rays is
    a single ray.
    """

    id: ChamberId
    boundary: tuple[DivClass, DivClass]
    inclusion: tuple[bool, bool]
    sample: DivClass

    @property
    def is_ray(self) -> bool:
        return self.boundary[0] == self.boundary[1]

    def contains(self, H) -> bool:
        H = as_class(H)
        a, b = self.boundary
        if self.is_ray:
            return cross(a, H) == 0 and _same_direction(a, H)
        orient = _sign(cross(a, b))
        sa, sb = _sign(cross(a, H)), _sign(cross(H, b))
        if sa == orient and sb == orient:
            return True
        if sa == 0 and _same_direction(a, H):
            return self.inclusion[0]
        if sb == 0 and _same_direction(b, H):
            return self.inclusion[1]
        return False


def _same_direction(a, b) -> bool:
    return sum(x * y for x, y in zip(a, b)) > 0


@dataclass(frozen=True)
class Wall:
    """A wall ray inside the open cone, with every candidate whose wall it is."""

    ray: DivClass
    labels: tuple[str, ...]


def wall_rays(model: SurfaceModel) -> tuple[list[Wall], list[str]]:
    """Wall rays meeting the open ample cone, sorted from the first generator.

    Returns the walls and diagnostic notes about skipped candidates.
    """
    if model.rank != 2:
        raise RankUnsupported("chamber decomposition is implemented for Picard rank 2 only")
    if model.cone.generators is None:
        raise MissingGenerators("ample cone generators are required for decomposition")
    g1, g2 = model.cone.generators
    orient = _sign(cross(g1, g2))
    notes = []
    by_ray: dict[DivClass, list[str]] = {}
    for L in model.candidates:
        w = wall_class(L, model)
        if w.is_zero():
            notes.append(f"{L.label}: wall class vanishes, candidate never destabilizes")
            continue
        f = model.lattice.apply(w)  # H ↦ f·H in coordinates
        if f.is_zero():
            notes.append(f"{L.label}: wall class is numerically trivial")
            continue
        r = DivClass.of(-f[1], f[0])
        for cand in (r, -r):
            if _sign(cross(g1, cand)) == orient and _sign(cross(cand, g2)) == orient:
                by_ray.setdefault(integral_ray(cand), []).append(L.label)
                break
        else:
            notes.append(f"{L.label}: wall does not meet the open ample cone")
    walls = [Wall(r, tuple(labels)) for r, labels in by_ray.items()]

    def cmp(a: Wall, b: Wall) -> int:
        return -_sign(cross(a.ray, b.ray)) * orient

    walls.sort(key=functools.cmp_to_key(cmp))
    return walls, notes


def decompose(model: SurfaceModel) -> list[Chamber]:
    """Partition the rank 2 ample cone into chambers, in angular order.

    Open sectors between consecutive walls are labelled at an interior sample;
    each wall ray is labelled on its own and merged into a neighbouring sector
    when the labels agree, otherwise it is reported as a one-ray chamber.
    """
    walls, _ = wall_rays(model)
    g1, g2 = model.cone.generators
    rays = [g1] + [w.ray for w in walls] + [g2]

    # pieces alternate sector, ray, sector, ..., sector
    pieces = []
    for i in range(len(rays) - 1):
        a, b = rays[i], rays[i + 1]
        sample = a + b
        pieces.append(("sector", a, b, sample, chamber_id(model, sample)))
        if i + 1 < len(rays) - 1:
            pieces.append(("ray", b, b, b, chamber_id(model, b)))

    chambers = []
    cur = None
    for kind, a, b, sample, cid in pieces:
        if cur is not None and cur["id"] == cid:
            cur["end"] = b
            cur["end_incl"] = kind == "ray"
            if kind == "sector" and cur["kind"] == "ray":
                cur["sample"] = sample
            cur["kind"] = "sector" if kind == "sector" else cur["kind"]
            continue
        if cur is not None:
            chambers.append(cur)
        cur = {
            "id": cid,
            "start": a,
            "start_incl": kind == "ray",
            "end": b,
            "end_incl": kind == "ray",
            "sample": sample,
            "kind": kind,
        }
    chambers.append(cur)
    return [
        Chamber(
            c["id"],
            (c["start"], c["end"]),
            (c["start_incl"], c["end_incl"]),
            c["sample"],
        )
        for c in chambers
    ]


def locate(chambers: list[Chamber], H) -> Chamber:
    hits = [c for c in chambers if c.contains(H)]
    if len(hits) != 1:
        raise ValueError(f"{H} lies in {len(hits)} chambers")
    return hits[0]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    id: ChamberId

    def contains(self, t) -> bool:
        t = Fraction(t)
        if self.lo < t < self.hi:
            return True
        return (t == self.lo and self.lo_closed) or (t == self.hi and self.hi_closed)

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        if self.lo == self.hi:
            return f"{{{self.lo}}}: {self.id}"
        return f"{left}{self.lo}, {self.hi}{right}: {self.id}"


@dataclass(frozen=True)
class SegmentReport:
    start: DivClass
    end: DivClass
    intervals: tuple[Interval, ...]
    crossings: tuple[Fraction, ...]

    def point(self, t) -> DivClass:
        return self.start + Fraction(t) * (self.end - self.start)


def _affine_roots(values0, values1) -> set[Fraction]:
    roots = set()
    for v0, v1 in zip(values0, values1):
        slope_t = v1 - v0
        if slope_t != 0:
            t = -v0 / slope_t
            if 0 <= t <= 1:
                roots.add(t)
    return roots


def segment_analysis(model: SurfaceModel, Ha, Hb) -> SegmentReport:
    """Split the segment ``Ha + t(Hb − Ha)``, ``t ∈ [0, 1]``, into chamber intervals.

    Wall values are affine in t, so their zeros are found exactly.  A segment
    never meeting the semistable locus stays in a single destabilizing chamber;
    that is checked on the result.
    """
    Ha, Hb = as_class(Ha), as_class(Hb)
    for H in (Ha, Hb):
        if not model.is_ample(H):
            raise NotAmple(f"{H} is not in the ample cone of {model.name}")
    lat = model.lattice
    functionals = [wall_class(L, model) for L in model.candidates]
    # candidates can also swap order among themselves; those are breakpoints too
    cands = model.candidates
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            functionals.append(cands[i].c1 - cands[j].c1)
    v0 = [pair(lat, f, Ha) for f in functionals]
    v1 = [pair(lat, f, Hb) for f in functionals]
    n_walls = len(model.candidates)
    crossings = sorted(_affine_roots(v0[:n_walls], v1[:n_walls]))
    breaks = sorted(_affine_roots(v0, v1) | {Fraction(0), Fraction(1)})

    def at(t) -> ChamberId:
        return chamber_id(model, Ha + t * (Hb - Ha))

    pieces = []  # (lo, hi, lo_closed, hi_closed, id)
    for k, t in enumerate(breaks):
        pieces.append((t, t, True, True, at(t)))
        if k + 1 < len(breaks):
            mid = (t + breaks[k + 1]) / 2
            pieces.append((t, breaks[k + 1], False, False, at(mid)))

    merged: list[list] = []
    for lo, hi, lc, hc, cid in pieces:
        if merged and merged[-1][4] == cid:
            merged[-1][1] = hi
            merged[-1][3] = hc
        else:
            merged.append([lo, hi, lc, hc, cid])
    intervals = tuple(Interval(*m) for m in merged)

    if Ha == Hb:
        intervals = (Interval(Fraction(0), Fraction(1), True, True, intervals[0].id),)
    if all(iv.id.kind == "Destab" for iv in intervals) and len(intervals) != 1:
        raise AssertionError(
            "segment crosses between destabilizing chambers without a semistable point"
        )
    return SegmentReport(Ha, Hb, intervals, tuple(crossings))


def check_convexity(model: SurfaceModel, H1, H2) -> bool:
    """False only if two classes share a chamber but their sum leaves it."""
    a, b = chamber_id(model, H1), chamber_id(model, H2)
    if a != b:
        return True
    return chamber_id(model, as_class(H1) + as_class(H2)) == a


def openness_radius(model: SurfaceModel, H) -> Fraction:
    """Sup-norm radius around H on which the chamber id stays constant.

    Valid for Destab chambers: every perturbation ``d`` with ``max|d_i| < r``
    keeps H ample, keeps the destabilizer's wall value positive and keeps its
    slope strictly above every other candidate.
    """
    H = as_class(H)
    cid = chamber_id(model, H)
    if cid.kind != "Destab":
        raise ValueError(f"openness radius is defined on destabilizing chambers, got {cid}")
    L = model.candidate(cid.label)
    functionals = list(model.cone.inequalities) + [wall_class(L, model)]
    functionals += [L.c1 - c.c1 for c in model.candidates if c.label != L.label]
    lat = model.lattice
    best = None
    for f in functionals:
        value = pair(lat, f, H)
        g = lat.apply(f)
        norm = sum(abs(x) for x in g)
        if norm == 0:
            continue
        r = value / norm
        if best is None or r < best:
            best = r
    return best
