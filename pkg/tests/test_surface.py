from fractions import Fraction

import pytest

from teichlab import surface as S
from teichlab.errors import DomainError


def test_surface_spec_validation():
    with pytest.raises(DomainError):
        S.SurfaceSpec(1)
    surf = S.SurfaceSpec(2)
    assert surf.generator_count == 4
    assert surf.euler_characteristic == -2
    assert surf.relator == (1, 2, -1, -2, 3, 4, -3, -4)


def test_curve_class_equality_up_to_rotation_and_inversion():
    surf = S.SurfaceSpec(2)
    a = surf.curve((1, 2, 3))
    assert a == surf.curve((2, 3, 1))
    assert a == surf.curve((-3, -2, -1))
    assert hash(a) == hash(surf.curve((3, 1, 2)))
    assert a != surf.curve((1, 2, -3))


def test_curve_class_cyclically_reduces():
    surf = S.SurfaceSpec(2)
    c = surf.curve((3, 1, 2, -3))
    assert c.word == (1, 2)


def test_primitive_flag():
    surf = S.SurfaceSpec(2)
    assert surf.curve((1, 2)).primitive
    assert not surf.curve((1, 2, 1, 2)).primitive


def test_standard_pants_graph_genus2():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    assert [e.label for e in g.edges] == ["a1", "c1", "a2"]
    assert len(g.vertices) == 2
    assert g.edges[0].curve.word == (1,)
    assert g.edges[1].curve.word == (1, 2, -1, -2)
    assert g.edges[2].curve.word == (3,)
    # handles are self-gluings, the waist joins the two pants
    assert g.edges[0].ends[0] == g.edges[0].ends[1]
    assert g.edges[2].ends[0] == g.edges[2].ends[1]
    assert g.edges[1].ends[0] != g.edges[1].ends[1]


def test_standard_pants_graph_genus3():
    surf = S.SurfaceSpec(3)
    g = S.standard_pants_graph(surf)
    assert [e.label for e in g.edges] == ["a1", "c1", "a2", "d2", "c2", "a3"]
    assert len(g.vertices) == 4
    by = {e.label: e for e in g.edges}
    assert by["d2"].curve.word == (1, 2, -1, -2, 3)
    assert by["c2"].curve.word == (1, 2, -1, -2, 3, 4, -3, -4)
    assert by["a3"].curve.word == (5,)


def test_pants_graph_validation():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    with pytest.raises(DomainError):
        S.PantsGraph(surf, g.vertices, g.edges[:2])
    bad = (S.PantsEdge("x", surf.curve((1,)), ("P0", "nope")),) + g.edges[1:]
    with pytest.raises(DomainError):
        S.PantsGraph(surf, g.vertices, bad)


def test_fn_point_validation():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    with pytest.raises(DomainError):
        S.FNPoint(g, (1.0, 2.0), (0.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        S.FNPoint(g, (1.0, -2.0, 1.0), (0.0, 0.0, 0.0))
    pt = S.FNPoint(g, (1, 2, 3), (0, 0, 0))
    assert pt.lengths == (1.0, 2.0, 3.0)


def test_reference_point():
    pt = S.reference_point(S.SurfaceSpec(3), 2.5)
    assert pt.lengths == (2.5,) * 6
    assert pt.twists == (0.0,) * 6


def test_measured_multicurve_validation():
    surf = S.SurfaceSpec(2)
    a1, a2 = surf.curve((1,)), surf.curve((3,))
    mc = S.MeasuredMulticurve(((a1, Fraction(1, 2)), (a2, 2)))
    assert mc.weights() == [Fraction(1, 2), Fraction(2)]
    with pytest.raises(DomainError):
        S.MeasuredMulticurve(((a1, Fraction(0)),))
    with pytest.raises(DomainError):
        S.MeasuredMulticurve(((a1, 1), (surf.curve((-1,)), 1)))


def test_fn_point_serialization_round_trip():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    pt = S.FNPoint(g, (1.728281828459045, 2.0, 0.001), (0.1, -2.25, 1e-9))
    text = S.dumps_fn_point(pt)
    back = S.loads_fn_point(text)
    assert back.lengths == pt.lengths
    assert back.twists == pt.twists
    assert [e.label for e in back.graph.edges] == [e.label for e in g.edges]
    assert [e.curve for e in back.graph.edges] == [e.curve for e in g.edges]


def test_multicurve_serialization_round_trip():
    surf = S.SurfaceSpec(2)
    mc = S.MeasuredMulticurve(((surf.curve((1,)), Fraction(3, 16)),
                               (surf.curve((1, 2)), Fraction(7, 1))))
    back = S.loads_multicurve(S.dumps_multicurve(mc))
    assert back.components == mc.components


# ----------------------------------------------------------- Dehn twists

WORDS = [(1,), (2,), (3,), (4,), (1, 2), (2, 3), (1, 3, 2, 4),
         (1, 1, 2), (1, 2, -1, -2), (2, 1, 1, -2, 3)]


def _curves():
    surf = S.SurfaceSpec(2)
    return surf, [surf.curve(word) for word in WORDS]


def test_twist_power_zero_is_identity():
    surf, curves = _curves()
    a1 = surf.curve((1,))
    assert all(S.dehn_twist(x, a1, 0) == x for x in curves)


def test_twist_powers_compose():
    surf, curves = _curves()
    b2 = surf.curve((4,))
    for x in curves:
        twice = S.dehn_twist(S.dehn_twist(x, b2, 2), b2, 3)
        assert twice == S.dehn_twist(x, b2, 5)


def test_twist_inverse_round_trip():
    surf, curves = _curves()
    c1 = surf.curve((1, 2, -1, -2))
    for x in curves:
        assert S.dehn_twist(S.dehn_twist(x, c1, -4), c1, 4) == x


def test_dual_twists_satisfy_braid_relation():
    surf, curves = _curves()
    a1, b1 = surf.curve((1,)), surf.curve((2,))
    for x in curves:
        aba = S.dehn_twist(S.dehn_twist(S.dehn_twist(x, a1), b1), a1)
        bab = S.dehn_twist(S.dehn_twist(S.dehn_twist(x, b1), a1), b1)
        assert aba == bab


def test_six_half_periods_equal_boundary_twist():
    # (T_a1 T_b1)^6 is the twist about the boundary of the one-handle
    # subsurface, which is the separating reference curve c1
    surf, curves = _curves()
    a1, b1 = surf.curve((1,)), surf.curve((2,))
    c1 = surf.curve((1, 2, -1, -2))
    for x in curves:
        y = x
        for _ in range(6):
            y = S.dehn_twist(S.dehn_twist(y, b1), a1)
        assert y == S.dehn_twist(x, c1)


def test_twist_only_moves_the_coupled_generator():
    surf, _ = _curves()
    a1, b1 = surf.curve((1,)), surf.curve((2,))
    a2, b2 = surf.curve((3,)), surf.curve((4,))
    assert S.dehn_twist(b1, a1).word == (2, 1)
    assert S.dehn_twist(a1, b1).word == (1, -2)
    for x in (a1, a2, b2):
        assert S.dehn_twist(x, a1) == x
    for x in (b1, a2, b2):
        assert S.dehn_twist(x, b1) == x


def test_separating_twist_conjugates_far_handle():
    surf, _ = _curves()
    c1 = surf.curve((1, 2, -1, -2))
    a2 = surf.curve((3,))
    image = S.dehn_twist(a2, c1)
    assert image == surf.curve((1, 2, -1, -2, 3, 2, 1, -2, -1))
    for x in (surf.curve((1,)), surf.curve((2,))):
        assert S.dehn_twist(x, c1) == x


def test_twist_rejects_unsupported_curves():
    surf, _ = _curves()
    with pytest.raises(DomainError):
        S.dehn_twist(surf.curve((1,)), surf.curve((1, 2)))
    other = S.SurfaceSpec(3)
    with pytest.raises(DomainError):
        S.dehn_twist(surf.curve((1,)), other.curve((1,)))
