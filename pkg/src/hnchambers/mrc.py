"""Search for a polarization whose HN filtration gives the MRC quotient.

Two routes, matching the two cases of the existence argument:

* not rationally connected: any polarization with ``c1(T_X)·H > 0`` has a
  destabilizer of positive slope, whose leaves are the rational fibres;
* rationally connected: move along ``H_eps = l + eps·H2`` from a nef class
  ``l`` (a very free curve, supplied by the caller) until both HN slopes are
  positive.

Rational connectedness and uniruledness are declarations on the model; the
numerical consequences are verified exactly and listed in the certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chambers import ChamberId, chamber_id
from .errors import (
    AmbiguousWall,
    ChamberNotConstant,
    EmptyInterval,
    MissingInput,
    NotAmple,
    NotFound,
    NotNef,
    NotUniruled,
)
from .lattice import DivClass, as_class, in_closed_cone, pair
from .model import SurfaceModel
from .stability import (
    HNFResult,
    TwoStep,
    hn_filtration,
    positive_length,
    quotient,
    wall_class,
)


@dataclass(frozen=True)
class Affine:
    """The expression ``const + coeff·eps``, required to be strictly positive."""

    label: str
    const: Fraction
    coeff: Fraction

    def __call__(self, eps) -> Fraction:
        return self.const + self.coeff * Fraction(eps)


def epsilon_interval(constraints: Iterable[Affine], cap=1) -> tuple[Fraction, Fraction]:
    """Open interval ``(lo, hi) ⊆ (0, cap)`` on which every constraint is positive."""
    cap = Fraction(cap)
    if cap <= 0:
        raise ValueError("cap must be positive")
    lo, hi = Fraction(0), cap
    for c in constraints:
        if c.coeff > 0:
            lo = max(lo, -c.const / c.coeff)
        elif c.coeff < 0:
            hi = min(hi, c.const / -c.coeff)
        elif c.const <= 0:
            raise EmptyInterval(f"constraint {c.label} is never positive")
    if lo >= hi:
        raise EmptyInterval(f"constraints leave no eps in (0, {cap}): need {lo} < eps < {hi}")
    return lo, hi


def simplest_between(lo, hi=None) -> Fraction:
    """Rational of smallest denominator strictly inside ``(lo, hi)``.

    This is the first node of the Stern–Brocot tree that falls in the
    interval; the descent is taken a whole run of same-direction mediant steps
    at a time, i.e. one continued-fraction term per iteration.  ``hi=None``
    means +infinity.
    """
    lo = Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if hi is not None and not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if hi is not None and hi <= 0:
        return -simplest_between(-hi, -lo)
    if lo < 0:
        return Fraction(0)
    n = math.floor(lo) + 1
    if hi is None or n < hi:
        return Fraction(n)
    base = n - 1
    # lo - base in [0, 1) and hi - base in (0, 1]; invert the fractional parts
    inner_lo = 1 / (hi - base)
    inner_hi = None if lo == base else 1 / (lo - base)
    return base + 1 / simplest_between(inner_lo, inner_hi)


@dataclass(frozen=True)
class CertificateEntry:
    """A strict inequality ``scale · (functional · H) > 0`` verified at the polarization."""

    label: str
    functional: DivClass
    scale: Fraction
    value: Fraction

    def recompute(self, model: SurfaceModel, H) -> Fraction:
        return self.scale * pair(model.lattice, self.functional, H)


@dataclass(frozen=True)
class MRCResult:
    polarization: DivClass
    hnf: HNFResult
    m: int
    route: str
    epsilon: Fraction | None = None
    interval: tuple[Fraction, Fraction] | None = None
    certificate: tuple[CertificateEntry, ...] = ()
    assumptions: tuple[str, ...] = ()
    chamber: ChamberId | None = field(default=None)

    @property
    def foliation(self) -> str:
        """Label of the highest positive HN step carrying the rational fibration."""
        if self.m == 0:
            return ""
        if isinstance(self.hnf, TwoStep) and self.m == 1:
            return self.hnf.destabilizer.label
        return "TX"


def verify_certificate(model: SurfaceModel, result: MRCResult) -> bool:
    """Recompute every certificate inequality from scratch at the polarization."""
    H = result.polarization
    if not model.is_ample(H):
        return False
    for entry in result.certificate:
        v = entry.recompute(model, H)
        if v != entry.value or not v > 0:
            return False
    return result.m == positive_length(result.hnf) and result.m >= 1


def _certificate(model: SurfaceModel, H: DivClass, hnf: HNFResult) -> tuple[CertificateEntry, ...]:
    lat = model.lattice
    entries = []
    for i, w in enumerate(model.cone.inequalities):
        entries.append(CertificateEntry(f"ample[{i}]", w, Fraction(1), pair(lat, w, H)))
    entries.append(CertificateEntry("c1(TX).H", model.tangent_c1, Fraction(1), pair(lat, model.tangent_c1, H)))
    if isinstance(hnf, TwoStep):
        L = hnf.destabilizer
        entries.append(CertificateEntry(f"wall({L.label}).H", wall_class(L, model), Fraction(1),
                                        pair(lat, wall_class(L, model), H)))
        entries.append(CertificateEntry(f"mu({L.label})", L.c1, Fraction(1), hnf.mu1))
        if hnf.mu2 > 0:
            q = quotient(L, model)
            entries.append(CertificateEntry(f"mu({q.label})", q.c1, Fraction(1), hnf.mu2))
    return tuple(entries)


def _candidate_polarizations(g1: DivClass, g2: DivClass, depth: int) -> list[DivClass]:
    """Stern–Brocot mediants of the generators, level by level, in angular order."""
    out = []
    level = [g1, g2]
    for _ in range(depth):
        nxt = [level[0]]
        for a, b in zip(level, level[1:]):
            m = a + b
            out.append(m)
            nxt += [m, b]
        level = nxt
    return out


def find_positive_polarization(
    model: SurfaceModel, seeds: Sequence = (), depth: int = 8
) -> DivClass:
    """An ample class pairing positively with ``c1(T_X)``.

    Interior mediants of the cone generators are tried first (shallowest
    first), then the caller's seeds.
    """
    if not model.uniruled:
        raise NotUniruled(f"{model.name} is not declared uniruled")
    tried = []
    if model.cone.generators is not None:
        tried += _candidate_polarizations(*model.cone.generators, depth)
    tried += [as_class(s) for s in seeds]
    for H in tried:
        if model.is_ample(H) and pair(model.lattice, model.tangent_c1, H) > 0:
            return H
    shown = ", ".join(str(h) for h in tried[:10])
    raise NotFound(
        f"no tested ample class pairs positively with c1(TX) ({len(tried)} tried: {shown}"
        + (", ...)" if len(tried) > 10 else ")")
    )


def _ray_breakpoints(model: SurfaceModel, l: DivClass, H2: DivClass, cap: Fraction) -> list[Fraction]:
    """Values of eps in (0, cap) where the chamber along ``l + eps·H2`` can change."""
    lat = model.lattice
    funcs = [wall_class(L, model) for L in model.candidates]
    cands = model.candidates
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            funcs.append(cands[i].c1 - cands[j].c1)
    roots = set()
    for f in funcs:
        a, b = pair(lat, f, l), pair(lat, f, H2)
        if b != 0:
            t = -a / b
            if 0 < t < cap:
                roots.add(t)
    return sorted(roots)


def mrc_ray_search(model: SurfaceModel, l, H2, cap=1, require_quotient_positive: bool | None = None) -> MRCResult:
    """Polarization ``l + eps*·H2`` with a positive HN part, for small eps.

    The ray is first cut at the smallest eps where any wall value (or the
    order of two candidates) changes sign, so the chamber is constant on the
    remaining interval.  Then the interval where the required slopes are
    positive is solved exactly and its simplest rational is returned.

    ``require_quotient_positive`` defaults to the model's rationally-connected
    declaration; when it is false a negative quotient slope is accepted.
    """
    l, H2 = as_class(l), as_class(H2)
    cap = Fraction(cap)
    lat = model.lattice
    if not model.is_ample(H2):
        raise NotAmple(f"auxiliary class {H2} is not ample")
    if not in_closed_cone(model.cone, lat, l):
        raise NotNef(f"{l} is outside the closed ample cone")
    if require_quotient_positive is None:
        require_quotient_positive = bool(model.rc_hint)

    breaks = _ray_breakpoints(model, l, H2, cap)
    hi_cap = breaks[0] if breaks else cap

    def ray(eps) -> DivClass:
        return l + Fraction(eps) * H2

    samples = [hi_cap / 2, hi_cap / 3, 2 * hi_cap / 3]
    ids = [chamber_id(model, ray(e)) for e in samples]
    if len(set(ids)) != 1:
        raise ChamberNotConstant(
            "chamber changes along the ray: " + ", ".join(f"eps={e}: {i}" for e, i in zip(samples, ids))
        )
    cid = ids[0]
    if cid.kind == "AmbiguousWall":
        raise AmbiguousWall(cid.labels)

    def affine(label, functional, scale=Fraction(1)) -> Affine:
        return Affine(label, scale * pair(lat, functional, l), scale * pair(lat, functional, H2))

    constraints = [affine(f"ample[{i}]", w) for i, w in enumerate(model.cone.inequalities)]
    constraints.append(affine("c1(TX).H", model.tangent_c1))
    optional = []
    if cid.kind == "Destab":
        L = model.candidate(cid.label)
        constraints.append(affine(f"mu({L.label})", L.c1))
        q = quotient(L, model)
        (constraints if require_quotient_positive else optional).append(affine(f"mu({q.label})", q.c1))

    try:
        lo, hi = epsilon_interval(constraints + optional, hi_cap)
    except EmptyInterval:
        if not optional:
            raise
        lo, hi = epsilon_interval(constraints, hi_cap)
    eps = simplest_between(lo, hi)
    H = ray(eps)
    hnf = hn_filtration(model, H)
    m = positive_length(hnf)
    assumptions = [
        f"{model.name} is declared uniruled" if model.uniruled else "uniruledness not declared",
        f"{l} is the class of a very free rational curve (supplied, not verified)",
        "semistability is relative to the declared candidates",
    ]
    return MRCResult(
        polarization=H,
        hnf=hnf,
        m=m,
        route="ray",
        epsilon=eps,
        interval=(lo, hi),
        certificate=_certificate(model, H, hnf),
        assumptions=tuple(assumptions),
        chamber=cid,
    )


def mrc_polarization(
    model: SurfaceModel,
    rc_hint: bool | None = None,
    nef_class=None,
    aux_ample=None,
    eps_cap=1,
    seeds: Sequence = (),
) -> MRCResult:
    """Polarization whose highest positive HN step gives the MRC fibration.

    Without ``rc_hint`` the non-rationally-connected route is tried first:
    find H1 with ``c1(T_X)·H1 > 0`` and use its destabilizer.  If there is
    none (or ``rc_hint`` is true) the ray route needs ``nef_class`` and
    ``aux_ample``.
    """
    if not model.uniruled:
        raise NotUniruled(f"{model.name} is not declared uniruled")
    if not rc_hint:
        H1 = find_positive_polarization(model, seeds)
        hnf = hn_filtration(model, H1)
        if isinstance(hnf, TwoStep):
            tangent = pair(model.lattice, model.tangent_c1, H1) / 2
            if not hnf.mu1 > tangent > 0:
                raise AssertionError(f"destabilizer slope {hnf.mu1} is not above {tangent} > 0")
            return MRCResult(
                polarization=H1,
                hnf=hnf,
                m=positive_length(hnf),
                route="positive",
                certificate=_certificate(model, H1, hnf),
                assumptions=(
                    f"{model.name} is declared uniruled",
                    "semistability is relative to the declared candidates",
                ),
                chamber=chamber_id(model, H1),
            )
    if nef_class is None or aux_ample is None:
        raise MissingInput(
            "the rationally connected route needs a nef class (very free curve) and an auxiliary ample class"
        )
    return mrc_ray_search(model, nef_class, aux_ample, eps_cap)
