"""Pointwise reduction: horizontal frames, induced metric/forms, checks."""

import math
from fractions import Fraction

import numpy as np
import pytest

from hkquot import (
    AmbientPoint,
    CotangentPoint,
    PreconditionError,
    WeightSystem,
    mu_hyperkahler,
    psi,
    solve_hyperkahler,
)
from hkquot.hk_reduction import (
    ambient_frame,
    ambient_potential_check,
    circle_action_check,
    frame_report_json,
    fubini_study_oracle,
    gauge_vectors,
    gram_matrices,
    horizontal_frame,
    kahler_quotient_oracle,
    quaternion_check,
    reduced_form,
    reduced_metric,
    rotate_fiber,
    transport_tangent,
    zero_section_check,
)

F = Fraction


def _lift(n: int, u: np.ndarray) -> np.ndarray:
    """Zero-section tangent lift: complex C^n direction into the real model."""
    u = np.asarray(u, dtype=complex)
    return np.concatenate([u.real, u.imag, np.zeros(n), np.zeros(n)])


@pytest.fixture
def hirzebruch_frame(hirzebruch1):
    p = CotangentPoint.numeric([0, 0, 1, 0], [0.7 + 0.2j, 0.3 - 0.5j, 0, 1])
    out = solve_hyperkahler(hirzebruch1, p)
    assert out.status == "converged"
    return horizontal_frame(hirzebruch1, out.representative)


def test_horizontal_dimensions(diag_circle2, hirzebruch_frame):
    p = CotangentPoint.numeric([1, 0], [0, 0])
    frame = horizontal_frame(diag_circle2, p)
    assert frame.dim == 4
    assert frame.gauge.shape == (4, 8)
    assert hirzebruch_frame.dim == 8
    # orthogonality between blocks
    cross = frame.horizontal @ frame.gauge.T
    assert np.max(np.abs(cross)) < 1e-10


def test_horizontal_frame_rejects_bad_points(diag_circle2):
    off_level = CotangentPoint.numeric([2, 0], [0, 0])
    with pytest.raises(PreconditionError):
        horizontal_frame(diag_circle2, off_level)
    # a continuous stabilizer must be refused
    ws = WeightSystem(2, ((1, 0), (0, 1)), (F(1, 2), F(0)))
    p = CotangentPoint.numeric([1, 0], [0, 0])
    with pytest.raises(PreconditionError):
        horizontal_frame(ws, p)


def test_reduced_metric_positive_definite(diag_circle2, hirzebruch_frame):
    p = CotangentPoint.numeric([1, 0], [0, 0])
    for frame in (horizontal_frame(diag_circle2, p), hirzebruch_frame):
        grams = gram_matrices(frame)
        eigs = np.linalg.eigvalsh(grams["g"])
        assert eigs.min() > 1e-10
        for op in ("I", "J", "K"):
            w = grams[f"omega_{op}"]
            assert np.max(np.abs(w + w.T)) < 1e-12


def test_reduced_forms_antisymmetric_and_invariant(hirzebruch_frame):
    rng = np.random.default_rng(3)
    frame = hirzebruch_frame
    for _ in range(6):
        u = frame.project(rng.standard_normal(4 * frame.n))
        v = frame.project(rng.standard_normal(4 * frame.n))
        for op in ("I", "J", "K"):
            a = reduced_form(frame, op, u, v)
            b = reduced_form(frame, op, v, u)
            assert abs(a + b) < 1e-12
            # compatibility: omega_A(Au, Av) = omega_A(u, v)
            from hkquot import apply_quaternion

            au = frame.project(apply_quaternion(op, u))
            av = frame.project(apply_quaternion(op, v))
            assert abs(reduced_form(frame, op, au, av) - a) < 1e-9


def test_quaternion_check_small(diag_circle2, hirzebruch_frame):
    p = CotangentPoint.numeric([1, 0], [0, 0])
    assert quaternion_check(horizontal_frame(diag_circle2, p)) < 1e-10
    assert quaternion_check(hirzebruch_frame) < 1e-9


def test_ambient_frame_is_exact():
    p = CotangentPoint.numeric([0.3 + 1j, -2], [0.5, 1j])
    frame = ambient_frame(p)
    assert frame.k == 0 and frame.dim == 8
    assert quaternion_check(frame) == 0.0


def test_require_horizontal_guards(diag_circle2):
    p = CotangentPoint.numeric([1, 0], [0, 0])
    frame = horizontal_frame(diag_circle2, p)
    g = frame.gauge[0]
    with pytest.raises(PreconditionError):
        frame.require_horizontal(g)
    h = frame.horizontal[0]
    assert np.allclose(frame.require_horizontal(h), h)


def test_gauge_invariance_under_torus_transport(hirzebruch1, hirzebruch_frame):
    frame = hirzebruch_frame
    p = frame.base_point
    rng = np.random.default_rng(11)
    phases = np.exp(1j * rng.uniform(0, 2 * math.pi, size=2))
    from hkquot import act_torus

    p2 = act_torus(hirzebruch1, tuple(phases), p)
    frame2 = horizontal_frame(hirzebruch1, p2)
    for _ in range(5):
        u = frame.project(rng.standard_normal(16))
        v = frame.project(rng.standard_normal(16))
        tu = transport_tangent(hirzebruch1, tuple(phases), u)
        tv = transport_tangent(hirzebruch1, tuple(phases), v)
        # transported vectors stay horizontal and keep their pairings
        assert np.linalg.norm(frame2.project(tu) - tu) < 1e-9
        assert abs(reduced_metric(frame2, tu, tv) - reduced_metric(frame, u, v)) < 1e-9
        for op in ("I", "J", "K"):
            assert (
                abs(reduced_form(frame2, op, tu, tv) - reduced_form(frame, op, u, v))
                < 1e-9
            )


def test_psi_constant_on_gauge_orbits(hirzebruch1):
    from hkquot import PhasedComplex, act_torus

    p = CotangentPoint.exact(
        [PhasedComplex.of(0), PhasedComplex.of(0), PhasedComplex.of(1), PhasedComplex.of(0)],
        [
            PhasedComplex.of("3/2", "1/7"),
            PhasedComplex.of("5/4", "2/5"),
            PhasedComplex.of(0),
            PhasedComplex.of(1),
        ],
    )
    for t in [
        (PhasedComplex.of(1, "1/3"), PhasedComplex.of(1, "1/9")),
        (PhasedComplex.of(1, "7/11"), PhasedComplex.of(1)),
    ]:
        assert psi(act_torus(hirzebruch1, t, p)) == psi(p)


def test_zero_section_matches_quotient_oracle(diag_circle2):
    x = AmbientPoint.numeric([1 / math.sqrt(2), 1j / math.sqrt(2)])
    report = zero_section_check(diag_circle2, x)
    assert report["horizontal_dim"] == 4
    assert report["max_error"] < 1e-8


def test_fubini_study_agrees_with_projection_oracle(diag_circle2):
    rng = np.random.default_rng(7)
    for _ in range(10):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)  # ||x||^2 = 1 = 2 theta
        u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        g1, w1 = fubini_study_oracle(F(1, 2), x, u, v)
        g2, w2 = kahler_quotient_oracle(diag_circle2, x, u, v)
        assert abs(g1 - g2) < 1e-12 and abs(w1 - w2) < 1e-12
    with pytest.raises(PreconditionError):
        fubini_study_oracle(F(1, 2), np.array([2.0, 0.0]), u, v)


def test_product_system_metric_is_block_diagonal():
    ws = WeightSystem(2, ((1, 0), (1, 0), (0, 1), (0, 1)), (F(1, 2), F(1, 2)))
    x = AmbientPoint.numeric([1, 0, 0, 1])
    p = CotangentPoint.numeric(x.coords, np.zeros(4, dtype=complex))
    frame = horizontal_frame(ws, p)
    rng = np.random.default_rng(19)
    for _ in range(6):
        a = np.zeros(4, dtype=complex)
        b = np.zeros(4, dtype=complex)
        a[:2] = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b[2:] = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        u = frame.project(_lift(4, a))
        v = frame.project(_lift(4, b))
        assert abs(reduced_metric(frame, u, v)) < 1e-10
        assert abs(reduced_form(frame, "I", u, v)) < 1e-10


def test_potential_identity_finite_differences():
    rng = np.random.default_rng(29)
    points = [
        CotangentPoint.numeric(
            rng.standard_normal(n) + 1j * rng.standard_normal(n),
            rng.standard_normal(n) + 1j * rng.standard_normal(n),
        )
        for n in (1, 1, 2)
    ]
    fine = ambient_potential_check(points, h=1e-4)
    assert fine["max_error"] < 1e-5
    # the potential is quadratic, so central differences are exact in h
    coarse = ambient_potential_check(points, h=1e-2)
    assert coarse["max_error"] < 1e-9
    # the I-direction computation is a deliberate negative control
    assert coarse["control_error_I"] > 0.5


def test_circle_action_check_rows(hirzebruch_frame):
    report = circle_action_check(hirzebruch_frame)
    rows = {tuple(r["lambda"]): r for r in report["lambdas"]}
    identity = rows[(1.0, 0.0)]
    assert identity["form_scale_deviation"] < 1e-12
    assert identity["mu_I_deviation"] == 0.0
    for lam in ((0.0, 1.0), (math.cos(math.pi / 4), math.sin(math.pi / 4))):
        assert rows[lam]["mu_I_deviation"] < 1e-10
    assert report["max_deviation"] < 1e-8


def test_circle_action_negates_complex_form(diag_circle2):
    # lambda = -1 sends Omega to -Omega on the C^2 example
    p = CotangentPoint.numeric([1, 0], [0, 0])
    frame = horizontal_frame(diag_circle2, p)
    report = circle_action_check(frame, lambdas=(-1.0,), pairs=4, seed=2)
    assert report["max_deviation"] < 1e-8
    q = rotate_fiber(p, -1.0)
    assert np.allclose(q.x, p.x) and np.allclose(q.z, -p.z)


def test_frame_report_shape(hirzebruch_frame):
    report = frame_report_json(hirzebruch_frame)
    assert report["n"] == 4 and report["k"] == 2
    assert report["horizontal_dim"] == 8
    assert report["quaternion_deviation"] < 1e-9
    for key in ("g", "omega_I", "omega_J", "omega_K"):
        mat = np.array(report["gram"][key])
        assert mat.shape == (8, 8)


def test_gauge_vectors_shape(hirzebruch1, hirzebruch_frame):
    p = CotangentPoint.numeric([0, 0, 1, 0], [0, 0, 0, 1])
    vecs = gauge_vectors(hirzebruch1, p)
    assert vecs.shape == (2, 16)
    # the solved representative does sit on the zero level
    hk = mu_hyperkahler(hirzebruch1, hirzebruch_frame.base_point)
    assert hk.norm() < 1e-9
