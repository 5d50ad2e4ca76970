import math

import numpy as np
import pytest

from chebapprox import certify
from chebapprox.domain import find_index, make_domain
from chebapprox.gallery import Z_POINTS, get_instance
from chebapprox.minimax import (
    Instance,
    InstanceError,
    SuboptimalError,
    active_tolerance,
    deviation_sets,
    essential_sets,
    instance_from_json,
    instance_to_json,
    max_deviation,
    relint_solution,
    solve_minimax,
    use_exact_mode,
    verify_containment,
)
from chebapprox.poly import Polynomial, enumerate_degree_basis

from _oracles import bruteforce_minimax, face_probe_points, random_instance


@pytest.fixture(scope="module")
def disk_instance():
    inst, _ = get_instance("disk-sextic-deg2")
    return inst


def hexagon_indices(inst):
    return {k: find_index(inst.domain, Z_POINTS[k]) for k in range(7)}


def test_univariate_parabola():
    dom = make_domain([[-1.0], [0.0], [1.0]])
    inst = Instance(domain=dom, values=np.array([1.0, 0.0, 1.0]),
                    basis=enumerate_degree_basis(1, 1))
    sol = solve_minimax(inst)
    assert sol.t_star == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(sol.q.coeffs, [0.5, 0.0], atol=1e-12)
    assert sol.neg_set == (1,) and sol.pos_set == (0, 2)


def test_exact_representation_gives_zero():
    rng = np.random.default_rng(5)
    basis = enumerate_degree_basis(2, 2)
    dom = make_domain(rng.uniform(-1, 1, size=(15, 2)))
    coeffs = rng.normal(size=basis.size)
    inst = Instance(domain=dom, values=Polynomial(basis, coeffs)(dom.points), basis=basis)
    sol = solve_minimax(inst)
    assert sol.t_star <= 1e-9
    assert np.allclose(sol.q.coeffs, coeffs, atol=1e-7)


def test_disk_sextic_optimal_value(disk_instance):
    sol = solve_minimax(disk_instance)
    assert sol.t_star == pytest.approx(2.0, abs=1e-8)


def test_deviation_sets_of_known_optima(disk_instance):
    inst = disk_instance
    z = hexagon_indices(inst)
    basis = inst.basis
    q0 = Polynomial(basis, np.array([1.0, 0, 0, 0, 0, 0]))
    neg, pos = deviation_sets(inst, q0)
    assert sorted(neg) == sorted([z[1], z[3], z[5]])
    assert sorted(pos) == sorted([z[2], z[4], z[6]])

    # the second optimum also touches the extreme band at the origin; the
    # deviation there is 0 - (-2) = +2, so the origin joins the positive set
    q1 = Polynomial(basis, np.array([-2.0, 0, 0, 3.0, 0, 3.0]))
    neg1, pos1 = deviation_sets(inst, q1)
    assert sorted(neg1) == sorted([z[1], z[3], z[5]])
    assert sorted(pos1) == sorted([z[2], z[4], z[6], z[0]])


def test_deviation_sets_exact_fit_is_everything():
    basis = enumerate_degree_basis(1, 1)
    dom = make_domain([[0.0], [0.5], [1.0]])
    inst = Instance(domain=dom, values=np.array([0.25, 0.75, 1.25]), basis=basis)
    q = Polynomial(basis, np.array([0.25, 1.0]))
    neg, pos = deviation_sets(inst, q)
    assert neg == (0, 1, 2) and pos == (0, 1, 2)


def test_relint_drops_boundary_only_points(disk_instance):
    sol = relint_solution(disk_instance)
    z = hexagon_indices(disk_instance)
    assert sol.is_relint
    assert sorted(sol.neg_set) == sorted([z[1], z[3], z[5]])
    assert sorted(sol.pos_set) == sorted([z[2], z[4], z[6]])
    assert z[0] not in sol.neg_set and z[0] not in sol.pos_set
    assert max_deviation(disk_instance, sol.q.coeffs) <= sol.t_star + active_tolerance(sol.t_star)


def test_relint_on_unique_instance_matches_vertex():
    dom = make_domain([[-1.0], [0.0], [1.0]])
    inst = Instance(domain=dom, values=np.array([1.0, 0.0, 1.0]),
                    basis=enumerate_degree_basis(1, 1))
    vertex = solve_minimax(inst)
    relint = relint_solution(inst)
    assert np.allclose(vertex.q.coeffs, relint.q.coeffs, atol=1e-8)
    assert relint.pos_set == (0, 2) and relint.neg_set == (1,)


def test_essential_sets_square_f():
    inst, _ = get_instance("square-f-linear")
    neg, pos = essential_sets(inst)
    neg_pts = sorted(map(tuple, inst.domain.points[list(neg)]))
    pos_pts = sorted(map(tuple, inst.domain.points[list(pos)]))
    assert neg_pts == [(0.0, 0.0)]
    assert pos_pts == [(-1.0, 0.0), (1.0, 0.0)]


def test_essential_sets_exact_fit():
    basis = enumerate_degree_basis(1, 2)
    dom = make_domain([[-1.0], [0.0], [0.5], [1.0]])
    inst = Instance(domain=dom, values=dom.points[:, 0] ** 2, basis=basis)
    neg, pos = essential_sets(inst)
    assert neg == (0, 1, 2, 3) and pos == (0, 1, 2, 3)


def test_containment_q1_extra_origin(disk_instance):
    z = hexagon_indices(disk_instance)
    q1 = Polynomial(disk_instance.basis, np.array([-2.0, 0, 0, 3.0, 0, 3.0]))
    rep = verify_containment(disk_instance, q1)
    assert rep.passed
    assert rep.missing_neg == () and rep.missing_pos == ()
    assert tuple(sorted(rep.extra_neg + rep.extra_pos)) == (z[0],)


def test_containment_of_relint_is_equality(disk_instance):
    sol = relint_solution(disk_instance)
    rep = verify_containment(disk_instance, sol.q)
    assert rep.passed
    assert rep.extra_neg == () and rep.extra_pos == ()


def test_containment_square_h_half_edges():
    inst, _ = get_instance("square-h-linear")
    q_half = Polynomial(inst.basis, np.array([0.0, 0.0, 0.5]))
    rep = verify_containment(inst, q_half)
    assert rep.passed
    extra_pts = inst.domain.points[list(rep.extra_neg + rep.extra_pos)]
    # every grid point of the half-edges x = +-1, y in [-1, 0) must appear as
    # an extra deviation point ((+-1, 0) themselves are already essential)
    pts = inst.domain.points
    on_edges = (np.abs(np.abs(pts[:, 0]) - 1.0) < 1e-12) & (pts[:, 1] < -1e-12)
    expected = {tuple(p) for p in pts[on_edges]}
    assert expected
    assert expected <= {tuple(p) for p in extra_pts}


def test_containment_rejects_suboptimal(disk_instance):
    with pytest.raises(SuboptimalError):
        verify_containment(disk_instance, disk_instance.basis.zero())


def test_interpolation_regime_flagged():
    basis = enumerate_degree_basis(2, 2)       # 6 elements, 4 points
    dom = make_domain([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    inst = Instance(domain=dom, values=np.array([1.0, 2.0, 3.0, 4.0]), basis=basis)
    with pytest.warns(UserWarning, match="interpolation"):
        sol = solve_minimax(inst)
    assert sol.unbounded_solution_set
    assert sol.t_star <= 1e-9


def test_values_length_checked():
    dom = make_domain([[0.0], [1.0]])
    with pytest.raises(InstanceError):
        Instance(domain=dom, values=np.array([1.0]), basis=enumerate_degree_basis(1, 0))


def test_exact_mode_gate():
    dyadic = Instance(domain=make_domain([[0.25], [0.5], [1.0]]),
                      values=np.array([0.125, 0.25, 0.375]),
                      basis=enumerate_degree_basis(1, 1))
    assert use_exact_mode(dyadic)
    irrational = Instance(domain=make_domain([[math.sqrt(2) / 2], [0.5], [1.0]]),
                          values=np.array([0.125, 0.25, 0.375]),
                          basis=enumerate_degree_basis(1, 1))
    assert not use_exact_mode(irrational)


def test_instance_json_roundtrip(disk_instance):
    back = instance_from_json(instance_to_json(disk_instance))
    assert back.size == disk_instance.size
    assert np.array_equal(back.values, disk_instance.values)
    assert np.array_equal(back.domain.points, disk_instance.domain.points)
    assert back.basis == disk_instance.basis


# -- property-style checks ----------------------------------------------------


def test_solver_outputs_certified_optimal_on_random_instances():
    rng = np.random.default_rng(42)
    for _ in range(60):
        inst = random_instance(rng)
        sol = solve_minimax(inst)
        cert = certify.is_optimal(inst, sol.q)
        assert cert.verdict == certify.OPTIMAL_CERTIFIED


def test_brute_force_oracle_on_random_instances():
    rng = np.random.default_rng(314)
    for _ in range(100):
        inst = random_instance(rng, max_n=2, max_d=2, max_points=12)
        sol = solve_minimax(inst)
        oracle_val, _ = bruteforce_minimax(inst, sol.q.coeffs)
        assert abs(sol.t_star - oracle_val) <= 2e-3


def test_relint_active_sets_contained_in_face_points():
    from chebapprox.poly import design_matrix

    rng = np.random.default_rng(2718)
    checked = 0
    for _ in range(25):
        inst = random_instance(rng)
        sol = relint_solution(inst)
        if sol.t_star <= 1e-9:
            continue
        checked += 1
        vertex = solve_minimax(inst)
        vn, vp = set(vertex.neg_set), set(vertex.pos_set)
        assert set(sol.neg_set) <= vn and set(sol.pos_set) <= vp
        # every essential point stays within a whisker of the extreme
        # deviation at every (approximately) optimal face point
        g = design_matrix(inst.basis, inst.domain.points)
        band = 1e-5 * (1.0 + sol.t_star)
        probes = face_probe_points(inst, sol.t_star, 10, seed=checked,
                                   slack=1e-9 * (1.0 + sol.t_star))
        for probe in probes:
            dev = inst.values - g @ probe
            assert all(-dev[i] >= sol.t_star - band for i in sol.neg_set)
            assert all(dev[i] >= sol.t_star - band for i in sol.pos_set)
    assert checked >= 10


def test_translation_equivariance():
    rng = np.random.default_rng(99)
    for _ in range(10):
        inst = random_instance(rng)
        shift = float(rng.integers(1, 9)) / 4.0
        shifted = Instance(domain=inst.domain, values=inst.values + shift,
                           basis=inst.basis)
        a = solve_minimax(inst)
        b = solve_minimax(shifted)
        assert b.t_star == pytest.approx(a.t_star, abs=1e-9)
        # shifting a's fit by the constant stays optimal for the shifted data,
        # with identical deviation sets (the whole optimal set translates)
        lifted = a.q.coeffs.copy()
        lifted[0] += shift
        assert max_deviation(shifted, lifted) == pytest.approx(a.t_star, abs=1e-9)
        ln, lp_ = deviation_sets(shifted, Polynomial(inst.basis, lifted))
        assert ln == a.neg_set and lp_ == a.pos_set
        # essential sets are vertex-independent, so they must match exactly
        assert essential_sets(inst) == essential_sets(shifted)
