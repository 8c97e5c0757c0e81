import math

import pytest

from surflink.bowtie import V_TET, volume_bounds
from surflink.constructions import (
    IntersectionCertificate,
    build_doubled,
    build_layered,
    build_mapping_torus,
    build_trivial_torus,
    annular_fill,
    curve_class,
    fill_to_wga,
    plan_volume_target,
)
from surflink.curves_mcg import MappingClassWord, basis_class, twist_action
from surflink.errors import (
    CoefficientCountMismatch,
    CurveMeetsCrossingCircle,
    GenusMismatch,
    MonodromyActsTrivially,
    NoIntersectionCertificate,
    NonPositiveCoefficient,
    ZeroCoefficient,
)
from surflink.fal_diagram import detect_twist_regions
from surflink.generator import generate_fal


def base_diagram(g=2, c=6, seed=1, checkerboard=True):
    return generate_fal(g, c, seed=seed, require_checkerboard=checkerboard)


A1 = basis_class(1, 2)
B1 = basis_class(2, 2)
A2 = basis_class(3, 2)


class TestCurveClass:
    def test_class_vector_passthrough(self):
        assert curve_class((1, 0, 0, 0), 2) == (1, 0, 0, 0)

    def test_word_string(self):
        assert curve_class("a1b1", 2) == (1, 1, 0, 0)

    def test_short_word_tuple_abelianizes(self):
        assert curve_class((1, 2), 2) == (1, 1, 0, 0)


class TestBuildLayered:
    def test_m_zero_is_base_alone(self):
        fam = build_layered(base_diagram(), A1, B1, 0)
        assert fam.layers == ()
        assert fam.m == 0
        assert fam.certificate == IntersectionCertificate("homology", 1)

    def test_parity_and_pairing(self):
        fam = build_layered(base_diagram(), A1, B1, 3)
        assert len(fam.layers) == 6
        by_index = {layer.index: layer for layer in fam.layers}
        for i in (1, 3):
            assert by_index[i].parity == "odd"
            assert by_index[i].homology == A1
            assert by_index[-i].homology == A1
        assert by_index[2].parity == "even"
        assert by_index[2].homology == B1
        assert fam.annuli == ((1, -1), (2, -2), (3, -3))

    def test_no_certificate(self):
        with pytest.raises(NoIntersectionCertificate):
            build_layered(base_diagram(), A1, A2, 2)

    def test_oracle_certificate_from_words(self):
        # a1 and a1 b1 b1 pair to zero on homology of the b-side?  No:
        # <a1, a1+2b1> = 2, so use a disjoint-in-homology pair that the
        # oracle still certifies: none exists for simple basis words, so
        # check the oracle path with <a1, a1 b1> = 1 forced through words
        # whose classes pair to zero: a1 versus a1 (same class) has oracle
        # 0; instead verify the asserted path.
        fam = build_layered(base_diagram(), A1, A2, 2, assert_intersection=True)
        assert fam.certificate.kind == "asserted"

    def test_word_inputs_get_certificates(self):
        fam = build_layered(base_diagram(), "a1", "b1", 1)
        assert fam.certificate == IntersectionCertificate("homology", 1)

    def test_disjointness_flag_required(self):
        with pytest.raises(CurveMeetsCrossingCircle):
            build_layered(base_diagram(), A1, B1, 1, disjoint_from_circles=False)

    def test_negative_m_rejected(self):
        with pytest.raises(ValueError):
            build_layered(base_diagram(), A1, B1, -1)


class TestBuildDoubled:
    def test_cusp_formula(self):
        b1 = generate_fal(2, 3, seed=0)
        b2 = generate_fal(2, 3, seed=2)
        fam = build_layered(b1, A1, B1, 0)
        link = build_doubled(b1, b2, fam)
        expected = b1.l + b1.c + b2.l + b2.c
        assert link.cusp_count == expected
        fam5 = build_layered(b1, A1, B1, 5)
        assert build_doubled(b1, b2, fam5).cusp_count == expected + 10

    def test_genus_mismatch(self):
        b1 = generate_fal(2, 3, seed=0)
        b3 = generate_fal(3, 5, seed=0)
        fam = build_layered(b1, A1, B1, 1)
        with pytest.raises(GenusMismatch):
            build_doubled(b1, b3, fam)

    def test_kind_and_flag(self):
        b1 = generate_fal(2, 3, seed=0)
        link = build_doubled(b1, b1, build_layered(b1, A1, B1, 1))
        assert link.kind == "DoubledThickenedSurface"
        assert link.hyperbolic_assumed


class TestBuildMappingTorus:
    def test_accepted_with_certificates(self):
        base = generate_fal(2, 3, seed=0)
        phi = MappingClassWord(((A1, 1),), 2)
        # The twist about a1 moves b1 and moves a1+b1.
        fam = build_layered(base, B1, twist_action(B1, A1, 1), 1)
        link = build_mapping_torus(base, phi, fam)
        assert link.kind == "MappingTorus"
        assert link.cusp_count == base.l + base.c + 2
        assert dict(link.certificates) == {
            "gamma_odd": "CertifiedNontrivial",
            "gamma_even": "CertifiedNontrivial",
        }

    def test_trivial_monodromy_rejected(self):
        base = generate_fal(2, 3, seed=0)
        identity_like = MappingClassWord(((A1, 1), (A1, -1)), 2)
        fam = build_layered(base, A1, B1, 1)
        with pytest.raises(MonodromyActsTrivially):
            build_mapping_torus(base, identity_like, fam)

    def test_fixed_even_curve_needs_justification(self):
        base = generate_fal(2, 3, seed=0)
        phi = MappingClassWord(((B1, 1),), 2)  # fixes b1, moves a1
        fam = build_layered(base, A1, B1, 1)
        with pytest.raises(MonodromyActsTrivially):
            build_mapping_torus(base, phi, fam)
        link = build_mapping_torus(
            base, phi, fam, gamma_even_justification="Twisted"
        )
        assert ("gamma_even", "Twisted") in link.certificates

    def test_cusp_spot_value(self):
        base = generate_fal(2, 3, seed=4)
        assert base.c == 3
        phi = MappingClassWord(((A1, 1),), 2)
        fam = build_layered(base, B1, twist_action(B1, A1, 1), 4)
        link = build_mapping_torus(base, phi, fam)
        assert link.cusp_count == base.l + 3 + 8


class TestAnnularFill:
    def test_identity_for_m_zero(self):
        base = generate_fal(2, 4, seed=0)
        link = build_trivial_torus(base, build_layered(base, A1, B1, 0))
        filled = annular_fill(link, ())
        assert filled.cusp_count == link.cusp_count
        assert filled.family.base.c == base.c

    def test_cusp_drop_and_constancy(self):
        base = generate_fal(2, 4, seed=0)
        phi = MappingClassWord(((A1, 1),), 2)
        fam = build_layered(base, B1, twist_action(B1, A1, 1), 2)
        link = build_mapping_torus(base, phi, fam)
        filled = annular_fill(link, (3, 5))
        assert link.cusp_count - filled.cusp_count == 4
        assert filled.family.base.c == base.c
        assert filled.family.base.map is base.map
        # Monodromy extended by one twist per annulus pair, exponents +t.
        assert len(filled.monodromy.letters) == 3
        assert filled.monodromy.letters[1] == (fam.gamma_odd_class, 3)
        assert filled.monodromy.letters[2] == (fam.gamma_even_class, 5)

    def test_coefficient_errors(self):
        base = generate_fal(2, 4, seed=0)
        link = build_trivial_torus(base, build_layered(base, A1, B1, 2))
        with pytest.raises(CoefficientCountMismatch):
            annular_fill(link, (1,))
        with pytest.raises(NonPositiveCoefficient):
            annular_fill(link, (1, 0))
        with pytest.raises(NonPositiveCoefficient):
            annular_fill(link, (1, -2))


class TestFillToWga:
    def test_pipeline_counts(self):
        base = base_diagram(g=2, c=6, seed=1)
        link = build_trivial_torus(base, build_layered(base, A1, B1, 1))
        out = fill_to_wga(link, (1,) * base.c)
        assert out.twist_region_count == base.c
        assert out.wga_report is not None
        assert out.wga_report.alternating
        assert out.wga_report.checkerboard

    def test_region_sizes_follow_magnitudes(self):
        base = base_diagram(g=2, c=6, seed=1)
        assert base.c == 6
        link = build_trivial_torus(base, build_layered(base, A1, B1, 0))
        s = (2, 1, 4, -3, 1, 2)
        out = fill_to_wga(link, s)
        sizes = sorted(len(r.crossings) for r in detect_twist_regions(out.filled_diagram))
        assert sizes == sorted(2 * abs(x) for x in s)

    def test_zero_coefficient(self):
        base = base_diagram(g=2, c=6, seed=1)
        link = build_trivial_torus(base, build_layered(base, A1, B1, 0))
        with pytest.raises(ZeroCoefficient):
            fill_to_wga(link, (1, 0, 1, 1, 1, 1))

    def test_count_mismatch(self):
        base = base_diagram(g=2, c=6, seed=1)
        link = build_trivial_torus(base, build_layered(base, A1, B1, 0))
        with pytest.raises(CoefficientCountMismatch):
            fill_to_wga(link, (1, 1))


class TestPlanVolumeTarget:
    @pytest.mark.parametrize("target,expected", [(10, 5), (100, 50), (1000, 493)])
    def test_spot_values(self, target, expected):
        m = plan_volume_target(target)
        assert m == expected
        assert 2 * m * V_TET > target
        assert 2 * (m - 1) * V_TET <= target

    def test_boundary_strictness(self):
        assert plan_volume_target(2 * V_TET) == 2

    def test_tiny_target(self):
        assert plan_volume_target(0.5) == 1

    def test_planned_family_beats_target(self):
        base = generate_fal(2, 4, seed=0)
        m = plan_volume_target(100)
        link = build_trivial_torus(base, build_layered(base, A1, B1, m))
        vb = volume_bounds(base.c, base.genus, base.l, m, link.kind)
        assert vb.lower > 2 * m * V_TET - 1e-9
        assert vb.lower > 100


class TestConstancySweep:
    def test_many_specs(self):
        count = 0
        for g, c, seed in [(2, 5, s) for s in range(6)] + [(2, 6, s) for s in range(4)]:
            base = generate_fal(g, c, seed=seed, require_checkerboard=True)
            for m in (0, 1, 2, 3, 5):
                fam = build_layered(base, A1, B1, m)
                link = build_trivial_torus(base, fam)
                for t_val in (1, 2):
                    filled = annular_fill(link, (t_val,) * m)
                    assert filled.family.base.c == c
                    assert link.cusp_count - filled.cusp_count == 2 * m
                    wga = fill_to_wga(filled, tuple(range(1, c + 1)))
                    assert wga.twist_region_count == c
                    count += 1
        assert count >= 100
