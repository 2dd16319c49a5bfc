"""Smoke tests for the python module: the bindings expose the engine and the
headline numbers of the bundled example hold end to end."""

import math

import pytest

import cegprop


def test_example_structure():
    tree = cegprop.example_tree()
    assert tree.vertex_count == 27
    assert tree.edge_count == 26
    assert tree.validate() == []
    assert len(tree.atoms()) == 16

    ceg = cegprop.build_ceg(tree)
    assert ceg.position_count == 8
    assert ceg.edge_count == 16
    assert ceg.path_count() == 16
    assert ceg.root == "w0"
    assert ceg.sink == "winf"
    assert ceg.pi("w0") == [0.5, 0.3, 0.2]


def test_positions_blocks():
    blocks = cegprop.compute_positions(cegprop.example_tree())
    assert sorted(map(sorted, blocks)) == sorted(
        map(
            sorted,
            [
                ["v0"],
                ["v1"],
                ["v2"],
                ["v3"],
                ["v4a", "v4b", "v4c"],
                ["v5a", "v5b"],
                ["v6a", "v6b"],
            ],
        )
    )


def test_propagation_matches_the_oracle():
    ceg = cegprop.example_ceg()
    obs = cegprop.Observation.from_edges(ceg, cegprop.example_observation_edges())
    result = cegprop.propagate(ceg, obs)
    assert math.isclose(result["event_probability"], 0.682, abs_tol=1e-12)
    assert result["counters"] == {
        "backward_edge_ops": 16,
        "backward_vertex_ops": 6,
        "forward_edge_ops": 10,
    }
    assert result["phi"]["w3"] == 0.0
    assert math.isclose(result["pi_hat"]["e1"], 0.46 / 0.682, abs_tol=1e-12)

    oracle = cegprop.brute_force_condition(ceg, obs)
    assert math.isclose(oracle["event_probability"], 0.682, abs_tol=1e-12)
    for name, value in oracle["conditional_edge_prob"].items():
        if result["pi_hat"][name] > 0.0:
            assert math.isclose(result["pi_hat"][name], value, abs_tol=1e-9)


def test_reduce_and_queries():
    ceg = cegprop.example_ceg()
    obs = cegprop.Observation.from_edges(ceg, cegprop.example_observation_edges())
    reduced = cegprop.reduce(ceg, obs)
    assert reduced.position_count == 7
    assert reduced.edge_count == 10
    assert "w3" not in reduced.positions

    value = cegprop.conditional_atom_probability(ceg, obs, ["e1", "e4"])
    assert math.isclose(value, 0.3 / 0.682, abs_tol=1e-12)
    assert math.isclose(
        cegprop.conditional_reach_probability(ceg, obs, "w4"),
        0.328 / 0.682,
        abs_tol=1e-12,
    )
    assert math.isclose(ceg.reach_probability("w4"), 0.51, abs_tol=1e-12)


def test_vacuous_identity():
    ceg = cegprop.example_ceg()
    result = cegprop.propagate(ceg, cegprop.Observation.vacuous(ceg))
    for edge in ceg.edges():
        assert result["pi_hat"][edge["id"]] == edge["prob"]


def test_zero_probability_event_raises():
    ceg = cegprop.example_ceg()
    obs = cegprop.Observation.from_position_sets(ceg, {"w0": []})
    with pytest.raises(cegprop.ZeroProbabilityError):
        cegprop.propagate(ceg, obs)


def test_compatibility_checks():
    ceg = cegprop.example_ceg()
    verdict = cegprop.check_compatibility(
        ceg, [["e1", "e5", "e10"], ["e2", "e6", "e11"]]
    )
    assert not verdict["compatible"]
    assert verdict["witness"] in (["e1", "e5", "e11"], ["e2", "e6", "e10"])

    obs = cegprop.Observation.from_edges(ceg, cegprop.example_observation_edges())
    paths = cegprop.observation_paths(ceg, obs)
    assert len(paths) == 6
    verdict = cegprop.check_compatibility(ceg, paths)
    assert verdict["compatible"]
    assert sorted(verdict["edges"]) == sorted(cegprop.example_observation_edges())


def test_random_instances_agree_with_the_oracle():
    for seed in range(1, 6):
        tree = cegprop.random_tree(seed, max_depth=5, merge_bias=0.5)
        ceg = cegprop.build_ceg(tree)
        obs = cegprop.random_observation(ceg, seed + 100)
        oracle = cegprop.brute_force_condition(ceg, obs)
        if oracle["zero_event"]:
            continue
        result = cegprop.propagate(ceg, obs)
        assert math.isclose(
            result["event_probability"], oracle["event_probability"], abs_tol=1e-9
        )


def test_model_selection_bounds():
    for n in (3, 5, 8):
        ceg = cegprop.model_selection_ceg(n)
        m = (n - 1) * (n - 2) // 2
        assert ceg.edge_count <= m * (1 + 2 * n)
        assert ceg.position_count <= 2 + m * n
        assert ceg.path_count() == m * 2 ** (n - 1)


def test_serialization_round_trip():
    tree = cegprop.example_tree()
    text = cegprop.serialize_tree_model(tree, "example1")
    model = cegprop.parse_model(text)
    assert model["name"] == "example1"
    assert cegprop.serialize_tree_model(model["tree"], "example1") == text

    dot = cegprop.export_dot(cegprop.example_ceg())
    assert dot.startswith("digraph")
    assert dot.count("->") == 16


def test_bench_reference_figures():
    ceg = cegprop.example_ceg()
    obs = cegprop.Observation.from_edges(ceg, cegprop.example_observation_edges())
    report = cegprop.bench(ceg, obs, include_bn_reference=True)
    assert report["edge_cells"] == 16
    assert report["position_cells"] == 7
    assert report["reference_bn_operations"] == 43
    assert report["reference_bn_cells"] == 27
