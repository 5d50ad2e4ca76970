import numpy as np
import pytest

from chebapprox.domain import find_index
from chebapprox.gallery import (
    INSTANCE_IDS,
    GalleryError,
    Z_POINTS,
    check_instance,
    get_instance,
    refinement_study,
    report_to_json,
    run_all,
    square_f,
)


def test_known_ids():
    assert set(INSTANCE_IDS) == {
        "disk-sextic-deg2", "square-f-linear", "square-h-linear",
        "square-g-linear", "bump-sharp-hex", "bump-smooth-hex",
    }


def test_unknown_id_lists_known_ones():
    with pytest.raises(GalleryError, match="disk-sextic-deg2"):
        get_instance("no-such-instance")


def test_every_instance_builds_with_expected_record():
    for iid in INSTANCE_IDS:
        inst, exp = get_instance(iid)
        assert inst.size >= 9
        assert exp.t_star > 0
        assert exp.notes and all(isinstance(n, str) and n for n in exp.notes)
        assert len(exp.optima) >= 1


def test_disk_domain_contains_injected_points():
    inst, _ = get_instance("disk-sextic-deg2")
    for k in range(7):
        i = find_index(inst.domain, Z_POINTS[k], tol=1e-9)
        assert inst.domain.label_of(i) == f"z{k}"


def test_resolution_too_coarse_is_error():
    with pytest.raises(GalleryError, match="too coarse"):
        get_instance("square-f-linear", resolution=2.0)


def test_run_all_collects_resolution_errors():
    report = run_all(resolution=2.0)
    assert not report.all_passed
    assert all(r.error is not None and "too coarse" in r.error for r in report.instances)


def test_check_instance_fast_golden():
    report = check_instance("bump-sharp-hex")
    assert report.passed, report_to_json(run_all(ids=["bump-sharp-hex"]))


def test_run_all_default_resolution_all_pass():
    report = run_all()
    assert report.all_passed, report_to_json(report)


def test_refinement_study_unknown_id():
    with pytest.raises(GalleryError):
        refinement_study("nope")


def test_refinement_study_rows_shape():
    rows = refinement_study("square-h-linear", spacings=(0.25, 0.125))
    assert [r["spacing"] for r in rows] == [0.25, 0.125]
    assert all(r["step_up"] > 0 and r["step_down"] > 0 for r in rows)


def test_report_json_shape():
    report = run_all(ids=["bump-smooth-hex"])
    payload = report_to_json(report)
    assert '"all_passed": true' in payload
    assert '"bump-smooth-hex"' in payload


def test_square_f_edge_penalty_identity():
    # why the smooth target's best fit is unique in the continuum: along
    # alpha*y the deviation at the edge point (+-1, -alpha) equals
    # 1/2 + alpha^2/2, strictly above 1/2 for every nonzero alpha
    for alpha in (-0.5, -0.2, 0.1, 0.35, 0.5):
        for sx in (-1.0, 1.0):
            pt = np.array([[sx, -alpha]])
            dev = float(square_f(pt)[0]) - alpha * (-alpha)
            assert dev == pytest.approx(0.5 + alpha**2 / 2, abs=1e-12)


def test_square_f_interior_stationary_points():
    # locate near-zero finite-difference gradients of the smooth square target
    # on a fine grid: they cluster at the five stationary candidates, of which
    # only the origin lies strictly inside the square
    n = 161
    xs = np.linspace(-1.0, 1.0, n)
    mesh = np.stack(np.meshgrid(xs, xs, indexing="ij"), axis=-1)
    vals = square_f(mesh.reshape(-1, 2)).reshape(n, n)
    h = xs[1] - xs[0]
    gx = np.gradient(vals, h, axis=0)
    gy = np.gradient(vals, h, axis=1)
    norm = np.hypot(gx, gy)
    candidates = np.array([
        (0.0, 0.0),
        (1 / np.sqrt(2), 1.0), (1 / np.sqrt(2), -1.0),
        (-1 / np.sqrt(2), 1.0), (-1 / np.sqrt(2), -1.0),
    ])
    flat = np.where(norm < 0.02)
    flat_pts = mesh[flat]
    assert len(flat_pts) > 0
    dists = np.min(np.linalg.norm(flat_pts[:, None, :] - candidates[None], axis=2), axis=1)
    assert np.all(dists < 0.1)
    for c in candidates:
        assert np.min(np.linalg.norm(flat_pts - c, axis=1)) < 0.1
    interior = candidates[
        (np.abs(candidates[:, 0]) < 1 - 1e-9) & (np.abs(candidates[:, 1]) < 1 - 1e-9)
    ]
    assert interior.shape == (1, 2) and tuple(interior[0]) == (0.0, 0.0)
