import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teichlab import fuchsian as F
from teichlab import surface as S
from teichlab.errors import DomainError, NotHyperbolicError


def rep_for(genus=2, lengths=None, twists=None):
    surf = S.SurfaceSpec(genus)
    g = S.standard_pants_graph(surf)
    n = len(g.edges)
    pt = S.FNPoint(g, lengths or (2.0,) * n, twists or (0.0,) * n)
    return F.holonomy(pt)


def test_reference_relator_and_lengths():
    for genus in (2, 3):
        rep = rep_for(genus)
        assert rep.relator_residual() <= 1e-9
        assert max(rep.pants_length_residuals().values()) <= 1e-9


def test_perturbed_grid_relator_and_lengths():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    for l0 in (1.5, 2.5):
        for tw in (-0.5, 0.0, 0.4):
            pt = S.FNPoint(g, (l0, 2.0, 2.2), (tw * l0, 0.1, -0.3))
            rep = F.holonomy(pt)
            assert rep.relator_residual() <= 1e-9
            assert max(rep.pants_length_residuals().values()) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1),
       st.tuples(*[st.floats(1.5, 2.5) for _ in range(3)]),
       st.tuples(*[st.floats(-0.5, 0.5) for _ in range(3)]))
def test_random_mild_points_are_exact(gi, lengths, tfrac):
    genus = 2 + gi
    surf = S.SurfaceSpec(genus)
    g = S.standard_pants_graph(surf)
    n = len(g.edges)
    lengths = tuple(lengths[j % 3] for j in range(n))
    twists = tuple(tfrac[j % 3] * lengths[j] for j in range(n))
    rep = F.holonomy(S.FNPoint(g, lengths, twists))
    assert rep.relator_residual() <= 1e-9
    assert max(rep.pants_length_residuals().values()) <= 1e-9


def test_handle_trace_matches_cosh():
    rep = rep_for(2)
    assert abs(float(rep.trace((1,))) - 2 * np.cosh(1.0)) < 1e-12


def test_pants_block_boundary_product_is_projective_identity():
    blk = F.PantsBlock(1.5, 2.0, 2.5)
    prod = blk.boundary[0] @ blk.boundary[1] @ blk.boundary[2]
    res = min(float(np.max(np.abs(prod - F.IDENTITY))),
              float(np.max(np.abs(prod + F.IDENTITY))))
    assert res < 1e-12
    for k, l in enumerate(blk.lengths):
        tr = blk.boundary[k][0, 0] + blk.boundary[k][1, 1]
        assert abs(float(tr) - 2 * np.cosh(l / 2)) < 1e-12


def test_pants_block_rejects_bad_lengths():
    with pytest.raises(DomainError):
        F.PantsBlock(0.0, 1.0, 1.0)


def test_trace_length_guards():
    with pytest.raises(NotHyperbolicError):
        F.trace_length(2.0)
    with pytest.raises(NotHyperbolicError):
        F.trace_length(-1.3)
    assert abs(F.trace_length(2 * np.cosh(1.5)) - 3.0) < 1e-14


def test_twists_leave_pants_lengths_alone():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    for tw in ((0.7, 0.0, 0.0), (0.0, 1.3, 0.0), (0.5, -0.9, 1.7)):
        rep = F.holonomy(S.FNPoint(g, (1.8, 2.1, 2.4), tw))
        assert max(rep.pants_length_residuals().values()) <= 1e-9


def test_displacement_is_symmetric_under_inverse():
    rep = rep_for(2, lengths=(1.7, 2.4, 2.1), twists=(0.3, -0.8, 1.1))
    for j in range(1, 5):
        assert abs(rep.displacement((j,)) - rep.displacement((-j,))) < 1e-10


def test_fixed_points_are_fixed():
    rep = rep_for(2, lengths=(1.7, 2.4, 2.1), twists=(0.3, -0.8, 1.1))
    for wd in [(1,), (3,), (1, 2), (1, 2, -1, -2), (2, 3, -2)]:
        m = rep.matrix(wd)
        for x in F.fixed_points(m):
            # projective form: m sends the direction (x, 1) to itself,
            # with (1, 0) for an endpoint rounded to infinity
            v = np.array([1.0, 0.0], dtype=F.LD) if np.isinf(float(x)) \
                else np.array([x, 1.0], dtype=F.LD)
            w = m @ v
            cross = abs(w[0] * v[1] - w[1] * v[0])
            assert float(cross) < 1e-9 * float(np.hypot(*map(float, w)))


def test_axis_frame_reconstructs_element():
    rep = rep_for(2, lengths=(1.7, 2.4, 2.1), twists=(0.3, -0.8, 1.1))
    for wd in [(1,), (2,), (1, 2), (3, 4, -3), (1, 2, -1, -2)]:
        m = F.sign_canonical(rep.matrix(wd))
        n = rep.axis_frame(wd)
        l = rep.translation_length(wd)
        m2 = n @ F.advance(l) @ F.minv(n)
        rel = float(np.max(np.abs(m2 - m)) / np.max(np.abs(m)))
        assert rel < 1e-12


def test_axis_frame_base_point_is_nearest_to_anchor():
    rep = rep_for(2, lengths=(1.7, 2.4, 2.1), twists=(0.3, -0.8, 1.1))
    for wd in [(2,), (1, 2), (3, 4)]:
        n = rep.axis_frame(wd)
        z0 = F.mobius(n, 1j)
        d0 = F.basepoint_displacement(n)
        for s in (-0.25, -0.01, 0.01, 0.25):
            zs = F.mobius(n @ F.advance(s), 1j)
            q = (zs.real ** 2 + (zs.imag - 1) ** 2) / (2 * zs.imag)
            assert np.arccosh(1 + q) >= d0 - 1e-12


def test_holonomy_rejects_foreign_graphs():
    surf = S.SurfaceSpec(2)
    g = S.standard_pants_graph(surf)
    edges = (g.edges[1], g.edges[0], g.edges[2])
    bad = S.PantsGraph(surf, g.vertices, edges)
    with pytest.raises(DomainError):
        F.holonomy(S.FNPoint(bad, (2.0,) * 3, (0.0,) * 3))


def test_word_cache_handles_inverses():
    rep = rep_for(2)
    m = rep.matrix((1, 2, -1))
    mi = rep.matrix((1, -2, -1))
    prod = m @ mi
    res = min(float(np.max(np.abs(prod - F.IDENTITY))),
              float(np.max(np.abs(prod + F.IDENTITY))))
    assert res < 1e-14
