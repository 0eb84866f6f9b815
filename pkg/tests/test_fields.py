"""Sign vectors, the canonical family, and PSVF serialization."""

import pytest

from cuspfold.fields import (
    EPSILON_UNFOLD,
    SignVector,
    WorkingBox,
    all_sign_vectors,
    canonical_form,
    dumps_psvf,
    loads_psvf,
    unfolded_form,
)
from cuspfold.poly import Point3, Poly3


class TestSignVector:
    def test_parse_compact(self):
        sv = SignVector.parse("+-+-+")
        assert sv.as_tuple() == (1, -1, 1, -1, 1)

    def test_parse_grouped(self):
        assert SignVector.parse("(+-+,-+)") == SignVector.parse("+-+-+")

    def test_parse_unicode_minus(self):
        assert SignVector.parse("+−+−+") == SignVector.parse("+-+-+")

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            SignVector.parse("++++")
        with pytest.raises(ValueError):
            SignVector.parse("+++*+")

    def test_round_trip_through_compact(self):
        for sv in all_sign_vectors():
            assert SignVector.parse(sv.compact()) == sv
            assert SignVector.parse(sv.pretty()) == sv

    def test_invalid_component_rejected(self):
        with pytest.raises(ValueError):
            SignVector(0, 1, 1, 1, 1)

    def test_all_sign_vectors_complete(self):
        svs = all_sign_vectors()
        assert len(svs) == 32
        assert len(set(svs)) == 32
        assert svs[0] == SignVector(1, 1, 1, 1, 1)


class TestCanonicalFamily:
    def test_canonical_components(self):
        sv = SignVector.parse("+-+-+")
        psvf = canonical_form(sv)
        x, y, z = (Poly3.variable(v) for v in "xyz")
        assert psvf.f == z
        assert psvf.zplus.fx == sv.a * y
        assert psvf.zplus.fy == Poly3.constant(sv.b)
        assert psvf.zplus.fz == sv.g * x
        assert psvf.zminus.fx.is_zero()
        assert psvf.zminus.fy == Poly3.constant(sv.m)
        assert psvf.zminus.fz == sv.t * y

    def test_unfolded_shifts_lower_z_component(self):
        sv = SignVector.parse("+++++")
        psvf = unfolded_form(sv, 0.1)
        y = Poly3.variable("y")
        assert psvf.zminus.fz == y - Poly3.constant(0.1)
        # lambda=0 reproduces the canonical form exactly
        assert unfolded_form(sv, 0.0).zminus.fz == canonical_form(sv).zminus.fz

    def test_unfolding_window_enforced(self):
        sv = SignVector.parse("+++++")
        with pytest.raises(ValueError, match="unfolding window"):
            unfolded_form(sv, EPSILON_UNFOLD)
        with pytest.raises(ValueError, match="unfolding window"):
            unfolded_form(sv, -0.7)
        # custom window
        unfolded_form(sv, 0.6, epsilon=0.7)

    def test_regular_value_check_passes_for_plane(self):
        canonical_form(SignVector.parse("-----")).validate_regular_value()

    def test_regular_value_check_fails_off_box(self):
        sv = SignVector.parse("+++++")
        psvf = canonical_form(sv)
        far = WorkingBox(1.0, 1.0, 1.0, center=Point3(0.0, 0.0, 10.0))
        with pytest.raises(ValueError, match="does not meet"):
            psvf.validate_regular_value(box=far)

    def test_regular_value_check_catches_critical_zero(self):
        from cuspfold.fields import PSVF, SmoothField3

        # f = z^2 has a vanishing gradient on its whole zero set
        z = Poly3.variable("z")
        bad = PSVF(f=z * z, zplus=canonical_form(SignVector.parse("+++++")).zplus,
                   zminus=canonical_form(SignVector.parse("+++++")).zminus)
        with pytest.raises(ValueError, match="regular-value"):
            bad.validate_regular_value()
        del SmoothField3  # imported for symmetry only


class TestWorkingBox:
    def test_contains_with_slack(self):
        box = WorkingBox(1.0, 1.0, 1.0)
        assert box.contains(Point3(1.0, -1.0, 0.5))
        assert not box.contains(Point3(1.0 + 1e-6, 0.0, 0.0))
        assert box.contains(Point3(1.0 + 1e-6, 0.0, 0.0), slack=1e-5)

    def test_positive_half_widths_required(self):
        with pytest.raises(ValueError):
            WorkingBox(0.0, 1.0, 1.0)


class TestSerialization:
    def test_json_round_trip_is_exact(self):
        for sv in all_sign_vectors()[:8]:
            for lam in (0.0, 0.1, -0.3):
                psvf = unfolded_form(sv, lam)
                back = loads_psvf(dumps_psvf(psvf))
                assert back.f == psvf.f
                for orig, rt in zip(psvf.zplus.components(),
                                    back.zplus.components()):
                    assert orig == rt
                for orig, rt in zip(psvf.zminus.components(),
                                    back.zminus.components()):
                    assert orig == rt

    def test_round_trip_preserves_nonround_coefficients(self):
        from cuspfold.fields import PSVF, SmoothField3

        x = Poly3.variable("x")
        z = Poly3.variable("z")
        weird = PSVF(
            f=z,
            zplus=SmoothField3(0.1 * x * x, Poly3.constant(1.0 / 3.0), x),
            zminus=SmoothField3(Poly3.zero(), Poly3.constant(1.0), x),
        )
        back = loads_psvf(dumps_psvf(weird))
        assert back.zplus.fx == weird.zplus.fx
        assert back.zplus.fy == weird.zplus.fy
