import io
import json
import math

import numpy as np
import pytest

from skewexp.curves import constant_frame_curve, locus_crossing_curve, subgroup_curve
from skewexp.errors import (
    ConvergenceError,
    LabelingError,
    LocusError,
    StepTooLargeError,
    TrackingStalledError,
)
from skewexp.expmaps import exp_skew, log_so
from skewexp.locus import dist_to_locus, separated_preimage
from skewexp.matcore import random_skew, write_matrix
from skewexp.nearlog import (
    ClosedFormCurve,
    NearLogConfig,
    PathSample,
    SampledCurve,
    TrackedPath,
    angle_trajectory,
    load_curve,
    nearby_log,
    nearby_log_info,
    track_curve,
    write_trajectory_csv,
)
from skewexp.schur import SchurSkew, schur_skew


def _away_from_locus(n, rng, margin, scale=2.0):
    while True:
        A = random_skew(n, rng) * scale
        d = dist_to_locus(schur_skew(A), with_point=False).dist
        if d >= margin:
            return A, d


def _perturbation(n, rng, size):
    P = random_skew(n, rng)
    return P * (size / np.linalg.norm(P, 2))


def test_config_validation():
    with pytest.raises(ValueError):
        NearLogConfig(max_step=math.pi)
    with pytest.raises(ValueError):
        NearLogConfig(residual_tol=0.0)


def test_seed_at_solution_takes_no_iteration():
    A = random_skew(5, 1) * 2
    res = nearby_log_info(A, exp_skew(A))
    assert res.iterations <= 1
    np.testing.assert_allclose(res.A, A, atol=1e-12)


def test_around_zero_is_principal_log():
    rng = np.random.default_rng(2)
    for _ in range(10):
        Q = exp_skew(random_skew(5, rng) * 1.5)
        try:
            L = log_so(Q)
        except Exception:
            continue
        np.testing.assert_allclose(nearby_log(np.zeros((5, 5)), Q), L, atol=1e-11)


def test_construct_and_recover_n4():
    rng = np.random.default_rng(3)
    for _ in range(20):
        A, _ = _away_from_locus(4, rng, 0.5)
        res = nearby_log_info(A + _perturbation(4, rng, 0.1), exp_skew(A))
        assert res.iterations <= 10
        np.testing.assert_allclose(res.A, A, atol=1e-11)


def test_local_inverse_law():
    rng = np.random.default_rng(4)
    for _ in range(60):
        n = int(rng.integers(3, 9))
        A, d = _away_from_locus(n, rng, 0.3)
        A0 = A + _perturbation(n, rng, rng.uniform(0, min(0.3, d) / 2))
        np.testing.assert_allclose(nearby_log(A0, exp_skew(A)), A, atol=1e-10 * n)


def test_separated_preimages_are_distinct_fixed_points():
    rng = np.random.default_rng(5)
    A, _ = _away_from_locus(6, rng, 0.3)
    B = separated_preimage(schur_skew(A), 2, 1, A)
    B2 = nearby_log(B + _perturbation(6, rng, 0.05), exp_skew(A))
    np.testing.assert_allclose(B2, B, atol=1e-9)
    assert np.linalg.norm(A - B2, 2) >= 2 * math.pi - 1e-6


def test_errors():
    A = SchurSkew.from_angles_n([1.5 * math.pi, 0.5 * math.pi], 4, np.eye(4)).matrix()
    Q = exp_skew(SchurSkew.from_angles_n([1.5 * math.pi + 0.01, 0.5 * math.pi], 4, np.eye(4)).matrix())
    with pytest.raises(LocusError) as exc:
        nearby_log(A, Q)
    assert exc.value.dist < 1e-12
    with pytest.raises(StepTooLargeError):
        nearby_log(np.zeros((2, 2)), np.diag([-1.0, -1.0]))
    with pytest.raises(ConvergenceError):
        A = random_skew(5, 0)
        nearby_log(A, exp_skew(A + _perturbation(5, np.random.default_rng(0), 0.3)), NearLogConfig(residual_tol=1e-30, max_newton_iters=3))


def test_subgroup_curve_tracks_exactly():
    curve, A0, Y = subgroup_curve(4, seed=1)
    path = track_curve(curve, A0)
    assert path.samples[-1].t == 1.0
    for p in path.samples:
        np.testing.assert_allclose(p.A, p.t * Y, atol=1e-10)
    assert path.crossings == []


def test_path_invariants():
    curve, A0, _ = locus_crossing_curve()
    cfg = NearLogConfig()
    path = track_curve(curve, A0, cfg)
    ts = path.ts
    assert ts[0] == 0.0 and ts[-1] == 1.0 and np.all(np.diff(ts) > 0)
    for p in path.samples:
        assert p.residual <= cfg.residual_tol
    for p, q in zip(path.samples, path.samples[1:]):
        assert np.linalg.norm(q.A - p.A, 2) <= cfg.max_step


def test_constant_frame_curve_loop():
    curve, A0, Y = constant_frame_curve(4, seed=0)
    path = track_curve(curve, A0)
    traj = angle_trajectory(path)
    np.testing.assert_allclose(path.samples[-1].A, A0 + Y, atol=1e-10)
    np.testing.assert_allclose(traj[-1, 1:] - traj[0, 1:], [0.0, 2 * math.pi], atol=1e-8)
    np.testing.assert_allclose(curve(1.0), curve(0.0), atol=1e-12)


def test_crossing_curve_reports_tiny_interval():
    curve, A0, A_star = locus_crossing_curve()
    path = track_curve(curve, A0)
    assert len(path.crossings) >= 1
    assert any(abs(t - 0.55) < 0.05 for t in path.crossings)
    assert min(p.dist for p in path.samples) < 1e-3


def test_stalled_tracking_keeps_partial_path():
    # 300 rad of rotation cannot be followed in steps no shorter than 1e-2
    Y = SchurSkew.from_angles_n([300.0], 2).matrix()
    with pytest.raises(TrackingStalledError) as exc:
        track_curve(ClosedFormCurve(np.eye(2), Y), np.zeros((2, 2)), NearLogConfig(min_dt=1e-2))
    assert len(exc.value.path) >= 1


def test_angle_trajectory_examples():
    Q = exp_skew(random_skew(4, 1))
    A = log_so(Q)
    const = TrackedPath([PathSample(t, A, 0.0, 1.0) for t in np.linspace(0, 1, 5)])
    traj = angle_trajectory(const)
    np.testing.assert_allclose(traj[:, 1:], np.tile(traj[0, 1:], (5, 1)), atol=1e-14)

    R = np.linalg.qr(np.random.default_rng(0).standard_normal((4, 4)))[0]
    Y = SchurSkew.from_angles_n([0.5, 0.2], 4, R).matrix()
    traj = angle_trajectory(track_curve(ClosedFormCurve(np.eye(4), Y), np.zeros((4, 4))))
    t = traj[:, :1]
    got = np.sort(np.abs(traj[:, 1:]), axis=1)
    np.testing.assert_allclose(got, np.hstack([0.2 * t, 0.5 * t]), atol=1e-12)


def test_angle_sign_continuity_through_zero():
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    samples = [PathSample(t, (1.0 - 2.0 * t) * J, 0.0, math.inf) for t in np.linspace(0, 1, 21)]
    traj = angle_trajectory(TrackedPath(samples))
    np.testing.assert_allclose(traj[:, 1] * np.sign(traj[0, 1]), 1.0 - 2.0 * traj[:, 0], atol=1e-14)
    with pytest.raises(LabelingError):
        angle_trajectory(TrackedPath([PathSample(0.0, 0 * J, 0, 0), PathSample(1.0, 2 * J, 0, 0)]))


def test_curve_files(tmp_path):
    Q0 = exp_skew(random_skew(3, 1))
    Y = random_skew(3, 2)
    write_matrix(tmp_path / "q0.txt", Q0)
    write_matrix(tmp_path / "y.txt", Y)
    closed = load_curve((tmp_path / "q0.txt", tmp_path / "y.txt"))
    np.testing.assert_allclose(closed(0.3), Q0 @ exp_skew(0.3 * Y), atol=1e-14)

    ts = np.linspace(0, 1, 9)
    entries = []
    for k, t in enumerate(ts):
        write_matrix(tmp_path / f"s{k}.txt", closed(t))
        entries.append({"t": float(t), "file": f"s{k}.txt"})
    (tmp_path / "manifest.json").write_text(json.dumps({"samples": entries}))
    sampled = load_curve(tmp_path)
    assert isinstance(sampled, SampledCurve)
    for t in (0.0, 0.3, 1.0):
        np.testing.assert_allclose(sampled(t), closed(t), atol=1e-13)


def test_trajectory_csv():
    curve, A0, _ = subgroup_curve(5, seed=2)
    path = track_curve(curve, A0)
    buf = io.StringIO()
    write_trajectory_csv(path, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,theta_1,theta_2,dist_to_locus,residual"
    assert len(lines) == len(path) + 1
