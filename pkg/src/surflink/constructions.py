"""Link-family builders on thickened surfaces and mapping tori.

A layered family adds m pairs of parallel curves above a fully augmented
base diagram, alternating between two transverse curve classes.  The
family embeds in one of three closed ambient pieces: a doubled thickened
surface, a mapping torus with nontrivial monodromy, or the trivial
mapping torus used for triangulation volume bounds.  Annular Dehn filling
consumes the layer pairs (each filling spins transverse curves and costs
two cusps); crossing-circle filling turns the base into an alternating
twisted diagram.  Hyperbolicity is tracked as an assumption flag only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

from .bowtie import V_TET
from .curves_mcg import (
    Certificate,
    HomologyClass,
    MappingClassWord,
    acts_nontrivially,
    algebraic_intersection,
    geometric_intersection_oracle,
    parse_curve_word,
    word_to_homology,
)
from .errors import (
    CoefficientCountMismatch,
    CurveMeetsCrossingCircle,
    GenusMismatch,
    MonodromyActsTrivially,
    NoIntersectionCertificate,
    NonPositiveCoefficient,
    ZeroCoefficient,
)
from .fal_diagram import (
    FalDiagram,
    WgaReport,
    check_wga,
    choose_alternating_signs,
    detect_twist_regions,
    fill_all,
)

__all__ = [
    "IntersectionCertificate",
    "LayerCurve",
    "LayeredFamily",
    "ManifoldLink",
    "curve_class",
    "build_layered",
    "build_doubled",
    "build_mapping_torus",
    "build_trivial_torus",
    "annular_fill",
    "fill_to_wga",
    "plan_volume_target",
]

CurveInput = Union[str, tuple]


def curve_class(curve: CurveInput, g: int) -> HomologyClass:
    """Homology class of a curve given as a class vector, a word tuple, or
    a word string.  Integer tuples of length 2g are read as class vectors;
    anything else is abelianized."""
    if isinstance(curve, str):
        return word_to_homology(parse_curve_word(curve, g), g)
    curve = tuple(curve)
    if len(curve) == 2 * g:
        return curve
    return word_to_homology(curve, g)


def _as_word(curve: CurveInput, g: int) -> Optional[tuple]:
    if isinstance(curve, str):
        return parse_curve_word(curve, g)
    curve = tuple(curve)
    if len(curve) != 2 * g:
        return curve
    return None


@dataclass(frozen=True)
class IntersectionCertificate:
    """How we know the two family curves intersect essentially."""

    kind: str  # "homology" | "oracle" | "asserted"
    value: Optional[int]


@dataclass(frozen=True)
class LayerCurve:
    index: int  # nonzero; C_i and C_{-i} form the annulus pair A_i
    parity: str  # "odd" | "even"
    homology: HomologyClass


@dataclass(frozen=True)
class LayeredFamily:
    """Base diagram plus m pairs of layered curves.

    Layers are listed as C_1, C_-1, ..., C_m, C_-m; smaller |index| lies
    nearer the projection surface.  Odd-index curves carry the class of
    gamma_odd, even-index curves that of gamma_even.
    """

    base: FalDiagram
    gamma_odd: CurveInput
    gamma_even: CurveInput
    m: int
    layers: tuple  # of LayerCurve
    certificate: IntersectionCertificate
    curves_disjoint_from_circles: bool
    base2: Optional[FalDiagram] = None

    @property
    def genus(self) -> int:
        return self.base.genus

    @property
    def gamma_odd_class(self) -> HomologyClass:
        return curve_class(self.gamma_odd, self.genus)

    @property
    def gamma_even_class(self) -> HomologyClass:
        return curve_class(self.gamma_even, self.genus)

    @property
    def annuli(self) -> tuple:
        return tuple((i, -i) for i in range(1, self.m + 1))


@dataclass(frozen=True)
class ManifoldLink:
    """A layered family embedded in a closed ambient manifold."""

    kind: str  # "DoubledThickenedSurface" | "MappingTorus" | "TrivialMappingTorus"
    family: LayeredFamily
    cusp_count: int
    monodromy: Optional[MappingClassWord] = None
    annular_coefficients: Optional[tuple] = None
    circle_coefficients: Optional[tuple] = None
    hyperbolic_assumed: bool = True
    certificates: tuple = ()
    filled_diagram: Optional[FalDiagram] = None
    wga_report: Optional[WgaReport] = None
    twist_region_count: Optional[int] = None


def build_layered(
    base: FalDiagram,
    gamma_odd: CurveInput,
    gamma_even: CurveInput,
    m: int,
    assert_intersection: bool = False,
    disjoint_from_circles: bool = True,
) -> LayeredFamily:
    """Stack m pairs of unknotted, unlinked curves above the base diagram,
    alternating between the two given classes by layer parity."""
    if m < 0:
        raise ValueError("layer pair count must be nonnegative")
    if not disjoint_from_circles:
        raise CurveMeetsCrossingCircle(
            "layered curves must be isotoped off the crossing circles"
        )
    g = base.genus
    odd_class = curve_class(gamma_odd, g)
    even_class = curve_class(gamma_even, g)
    pairing = algebraic_intersection(odd_class, even_class)
    if pairing != 0:
        certificate = IntersectionCertificate("homology", pairing)
    else:
        odd_word = _as_word(gamma_odd, g)
        even_word = _as_word(gamma_even, g)
        oracle = None
        if odd_word is not None and even_word is not None:
            oracle = geometric_intersection_oracle(odd_word, even_word, g)
        if oracle:
            certificate = IntersectionCertificate("oracle", oracle)
        elif assert_intersection:
            certificate = IntersectionCertificate("asserted", None)
        else:
            raise NoIntersectionCertificate(
                "no evidence that the two curves intersect essentially"
            )
    layers = []
    for i in range(1, m + 1):
        parity = "odd" if i % 2 == 1 else "even"
        cls = odd_class if parity == "odd" else even_class
        layers.append(LayerCurve(i, parity, cls))
        layers.append(LayerCurve(-i, parity, cls))
    return LayeredFamily(
        base=base,
        gamma_odd=gamma_odd,
        gamma_even=gamma_even,
        m=m,
        layers=tuple(layers),
        certificate=certificate,
        curves_disjoint_from_circles=True,
    )


def _base_cusps(family: LayeredFamily) -> int:
    total = family.base.l + family.base.c
    if family.base2 is not None:
        total += family.base2.l + family.base2.c
    return total


def build_doubled(
    base: FalDiagram,
    base2: FalDiagram,
    family: LayeredFamily,
    hyperbolic_assumed: bool = True,
) -> ManifoldLink:
    """Glue two thickened-surface pieces along their inner boundaries."""
    if base.genus != base2.genus:
        raise GenusMismatch(
            f"cannot glue genus {base.genus} to genus {base2.genus}"
        )
    family = replace(family, base=base, base2=base2)
    return ManifoldLink(
        kind="DoubledThickenedSurface",
        family=family,
        cusp_count=_base_cusps(family) + 2 * family.m,
        hyperbolic_assumed=hyperbolic_assumed,
    )


def build_mapping_torus(
    base: FalDiagram,
    phi: MappingClassWord,
    family: LayeredFamily,
    gamma_even_justification: Optional[str] = None,
    hyperbolic_assumed: bool = True,
) -> ManifoldLink:
    """Close the thickened surface up by a monodromy that moves both
    family curves.  A homology-inconclusive gamma_even is allowed only
    with a recorded justification (e.g. it came from the second-curve
    procedure)."""
    g = base.genus
    family = replace(family, base=base)
    certs = []
    for name, cls in (
        ("gamma_odd", family.gamma_odd_class),
        ("gamma_even", family.gamma_even_class),
    ):
        verdict = acts_nontrivially(phi, cls)
        if verdict is Certificate.CertifiedNontrivial:
            certs.append((name, "CertifiedNontrivial"))
        elif name == "gamma_even" and gamma_even_justification:
            certs.append((name, gamma_even_justification))
        else:
            raise MonodromyActsTrivially(
                f"monodromy action on {name} is homology-inconclusive"
            )
    return ManifoldLink(
        kind="MappingTorus",
        family=family,
        cusp_count=_base_cusps(family) + 2 * family.m,
        monodromy=phi,
        hyperbolic_assumed=hyperbolic_assumed,
        certificates=tuple(certs),
    )


def build_trivial_torus(base: FalDiagram, family: LayeredFamily) -> ManifoldLink:
    """The product Sigma x S^1; the one ambient kind with a triangulation
    volume upper bound."""
    family = replace(family, base=base)
    return ManifoldLink(
        kind="TrivialMappingTorus",
        family=family,
        cusp_count=_base_cusps(family) + 2 * family.m,
        hyperbolic_assumed=False,
    )


def annular_fill(link: ManifoldLink, t: Sequence[int]) -> ManifoldLink:
    """Fill the m annulus pairs with coefficients (+t_i, -t_i).

    Each filled pair spins transverse curves t_i times, so the effective
    relative monodromy gains a twist with exponent +t_i about the layer's
    curve class.  The base diagram and its crossing-circle count are
    untouched; the cusp count drops by exactly 2m.
    """
    t = tuple(t)
    m = link.family.m
    if len(t) != m:
        raise CoefficientCountMismatch(
            f"expected {m} annular coefficients, got {len(t)}"
        )
    if any(ti < 1 for ti in t):
        raise NonPositiveCoefficient("annular coefficients must be >= 1")
    g = link.family.genus
    twist_letters = tuple(
        (
            link.family.gamma_odd_class if i % 2 == 1 else link.family.gamma_even_class,
            t[i - 1],
        )
        for i in range(1, m + 1)
    )
    base_letters = link.monodromy.letters if link.monodromy is not None else ()
    effective = (
        MappingClassWord(base_letters + twist_letters, g) if twist_letters or base_letters else None
    )
    return replace(
        link,
        annular_coefficients=t,
        cusp_count=link.cusp_count - 2 * m,
        monodromy=effective if link.kind == "MappingTorus" or twist_letters else link.monodromy,
    )


def fill_to_wga(
    link: ManifoldLink, s: Sequence[int], surface_incompressible: bool = True
) -> ManifoldLink:
    """Fill every crossing circle of the base with magnitude |s_k| and the
    alternation-preserving sign choice, attaching a WGA report."""
    s = tuple(s)
    base = link.family.base
    if len(s) != base.c:
        raise CoefficientCountMismatch(
            f"expected {base.c} crossing-circle coefficients, got {len(s)}"
        )
    if any(sk == 0 for sk in s):
        raise ZeroCoefficient("crossing-circle coefficients must be nonzero")
    signs = choose_alternating_signs(base)
    coefficients = {k: signs[k] * abs(sk) for k, sk in enumerate(s)}
    filled = fill_all(base, coefficients)
    regions = detect_twist_regions(filled)
    report = check_wga(filled, surface_incompressible=surface_incompressible)
    return replace(
        link,
        circle_coefficients=s,
        filled_diagram=filled,
        wga_report=report,
        twist_region_count=len(regions),
    )


def plan_volume_target(target: float) -> int:
    """Smallest layer-pair count m >= 1 whose filled family is forced past
    the volume target: 2 m v_tet > target strictly."""
    if target <= 0:
        return 1
    m = max(1, math.floor(target / (2 * V_TET)))
    while 2 * m * V_TET <= target:
        m += 1
    return m
