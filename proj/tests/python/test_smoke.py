"""Python smoke tests for the compiled module (run with PYTHONPATH pointing at
the build directory, or against an installed wheel)."""

import json

import pytest

try:
    import lipext
except ImportError:
    import _lipext as lipext


def test_validate_metric():
    ok, issues = lipext.validate_metric([[0.0, 1.0], [1.0, 0.0]])
    assert ok and issues == []
    ok, issues = lipext.validate_metric([[0, 3, 1], [3, 0, 1], [1, 1, 0]])
    assert not ok and any("triangle" in s for s in issues)


def test_kirszbraun_extension_line():
    inst = lipext.EuclideanInstance.from_points(
        [[0.0], [1.0], [2.0]], [0, 2], [[0.0], [2.0]]
    )
    assert inst.lip_constant() == pytest.approx(1.0)
    ext = lipext.kirszbraun_extend(inst, L=1.0)
    assert ext.values[1][0] == pytest.approx(1.0, abs=1e-6)
    assert ext.lip_achieved <= 1.0 + 1e-6
    assert ext.max_constraint_violation <= 1e-6


def test_extend_point_touching_balls():
    point, residual = lipext.extend_point([([0.0, 0.0], 1.0), ([2.0, 0.0], 1.0)], L=1.0)
    assert point[0] == pytest.approx(1.0, abs=1e-6)
    assert residual <= 1e-6


def test_transport_phi_contract():
    inst = lipext.EuclideanInstance.from_points(
        [[0.0, 0.0], [0.8, 0.0], [1.6, 0.4], [0.4, 0.9]],
        [0, 1],
        [[0.0, 0.0], [0.5, 0.0]],
    )
    f_full = lipext.kirszbraun_extend(inst, L=1.0)
    g = [[0.001, 0.0], [0.501, 0.001]]
    g_prime, delta, m_bound = lipext.transport_phi(inst, f_full, g, eps=0.4)
    assert m_bound >= 1.0
    assert g_prime.lip_achieved <= 1.0 + 1e-6
    sup = max(
        max(abs(a - b) for a, b in zip(u, v))
        for u, v in zip(g_prime.values, f_full.values)
    )
    assert sup <= 0.4 + 1e-6


def test_supnorm_operators():
    dist = [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]
    f = lipext.SupNormInstance(dist, [0, 2], [[0.0], [2.0]], 1)
    lower, upper = lipext.envelopes(f, 2.0, 1)
    assert (lower, upper) == ([0.0], [2.0])
    mid = lipext.midpoint_operator(f, L=2.0)
    assert mid.values[1] == [1.0]
    clamped = lipext.clamped_operator(f, L=2.0)
    lo, hi = lipext.admissible_hull(f.values)
    assert all(lo[0] <= v[0] <= hi[0] for v in clamped.values)


def test_ball_intersection_box():
    feasible, lo, hi = lipext.ball_intersection([([0.0, 0.0], 1.0), ([2.0, 0.0], 1.0)])
    assert feasible and lo == [1.0, -1.0] and hi == [1.0, 1.0]
    feasible, _, _ = lipext.ball_intersection([([0.0, 0.0], 1.0), ([4.0, 0.0], 1.0)])
    assert not feasible


def test_tree_roundtrip():
    tree = lipext.WeightedTree(3, [(0, 1, 2.0), (1, 2, 1.0)])
    assert lipext.tree_distance(tree, (0, 0.0), (1, 1.0)) == pytest.approx(3.0)
    feasible, witness, min_h = lipext.tree_ball_intersection(
        tree, [(0, 0.0, 1.0), (1, 1.0, 2.0)]
    )
    assert feasible and min_h <= 0.0
    inst = lipext.TreeInstance(
        [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
        tree,
        [0, 2],
        [(0, 0.0), (1, 1.0)],
    )
    ext = lipext.lipschitz_extend_tree(inst, L=1.5)
    assert ext.lip_achieved <= 1.5 + 1e-9

    nonexp = lipext.TreeInstance(
        [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
        tree,
        [0, 2],
        [(1, 0.0), (1, 1.0)],
    )
    assert nonexp.lip_constant() <= 1.0
    next_ext = lipext.lipschitz_extend_tree(nonexp, L=1.0)
    g_prime = lipext.transport_extension_tree(nonexp, next_ext, [(1, 0.0), (1, 1.0)])
    assert g_prime.values == next_ext.values


def test_projection_and_slacks():
    proj = lipext.min_norm_projection(
        [2.0, 0.0], [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    )
    assert proj == pytest.approx([1.0, 0.0], abs=1e-9)
    assert lipext.reshetnyak_slack([0.0], [1.0], [0.0], [1.0]) == 0.0
    assert lipext.hull_hausdorff([[0.0]], [[1.0]]) == pytest.approx(1.0)


def test_run_experiment_csv():
    cfg = json.dumps({"experiment": "lemma_41", "trials": 25, "seed": 7})
    csv, all_pass, pass_rate = lipext.run_experiment(cfg, threads=2)
    assert all_pass and pass_rate == 1.0
    assert csv.startswith("experiment,trial,digest,quantity,value,pass\n")
    csv2, _, _ = lipext.run_experiment(cfg, threads=1)
    assert csv == csv2


def test_generate_and_check_instance():
    cfg = json.dumps({"experiment": "kirszbraun", "trials": 1, "seed": 11})
    text = lipext.generate_instance(cfg, "euclidean")
    ok, report, lip = lipext.check_instance(text)
    assert ok and lip <= 1.0 + 1e-12
    assert lipext.generate_instance(cfg, "euclidean") == text
