"""Unit tests for the zonal grid model, PTDF flows and rating calibration."""

import math

import numpy as np
import pytest

from dlrsim.grid import (
    DisconnectedGraph,
    GridModel,
    HorizonMismatch,
    Line,
    SingularNetwork,
    ampacity_to_mva,
    build_ptdf,
    calibrate_to_nlr,
    corridor_dlr,
    corridor_rating_single,
    rating_series,
)
from dlrsim.thermal import AmbientConditions


def _line(a, b, susceptance=1.0, nlr=1000.0, c220=0, c380=1):
    return Line(from_node=a, to_node=b, circuits_220=c220, circuits_380=c380,
                susceptance=susceptance, nlr_mva=nlr)


def _windy(v):
    return AmbientConditions(wind_speed=v, wind_angle_deg=45.0,
                             solar_radiation=200.0, air_temp=10.0)


class TestPtdf:
    def test_two_node_flow(self):
        model = GridModel(nodes=("A", "B"), lines=(_line("A", "B"),))
        ptdf = build_ptdf(model, "A")
        assert ptdf.flows([100.0, -100.0]) == pytest.approx([100.0])

    def test_triangle_splits_flow(self):
        model = GridModel(
            nodes=("A", "B", "C"),
            lines=(_line("A", "B"), _line("A", "C"), _line("C", "B")),
        )
        ptdf = build_ptdf(model, "A")
        flows = ptdf.flows([90.0, -90.0, 0.0])
        assert flows == pytest.approx([60.0, 30.0, 30.0])

    def test_matches_nodal_dc_solve(self, benchmark):
        model = benchmark.grid
        ptdf = build_ptdf(model, benchmark.slack)
        n = len(model.nodes)
        incidence = np.zeros((len(model.lines), n))
        b = np.zeros(len(model.lines))
        for i, line in enumerate(model.lines):
            incidence[i, model.node_index(line.from_node)] = 1.0
            incidence[i, model.node_index(line.to_node)] = -1.0
            b[i] = line.susceptance
        b_bus = incidence.T @ np.diag(b) @ incidence
        keep = [i for i in range(n) if model.nodes[i] != benchmark.slack]

        rng = np.random.default_rng(11)
        for _ in range(25):
            inj = rng.normal(0.0, 500.0, n)
            inj -= inj.mean()
            theta = np.zeros(n)
            theta[keep] = np.linalg.solve(b_bus[np.ix_(keep, keep)], inj[keep])
            oracle = b * (incidence @ theta)
            np.testing.assert_allclose(ptdf.flows(inj), oracle,
                                       rtol=1e-9, atol=1e-9)

    def test_flow_antisymmetry(self, benchmark):
        ptdf = build_ptdf(benchmark.grid, benchmark.slack)
        rng = np.random.default_rng(5)
        inj = rng.normal(0.0, 300.0, len(benchmark.grid.nodes))
        inj -= inj.mean()
        np.testing.assert_allclose(ptdf.flows(-inj), -ptdf.flows(inj),
                                   rtol=0, atol=1e-9)

    def test_slack_choice_irrelevant_for_balanced_injections(self, benchmark):
        model = benchmark.grid
        rng = np.random.default_rng(9)
        inj = rng.normal(0.0, 300.0, len(model.nodes))
        inj -= inj.mean()
        flows = [build_ptdf(model, slack).flows(inj) for slack in ("A", "D")]
        np.testing.assert_allclose(flows[0], flows[1], rtol=0, atol=1e-8)

    def test_disconnected_graph_rejected(self):
        with pytest.raises(DisconnectedGraph):
            GridModel(nodes=("A", "B", "C"), lines=(_line("A", "B"),))

    def test_near_singular_network_rejected(self):
        model = GridModel(
            nodes=("A", "B", "C"),
            lines=(_line("A", "B", susceptance=1.0),
                   _line("B", "C", susceptance=1e-15)),
        )
        with pytest.raises(SingularNetwork):
            build_ptdf(model, "A")

    def test_unknown_slack_rejected(self):
        model = GridModel(nodes=("A", "B"), lines=(_line("A", "B"),))
        with pytest.raises(ValueError):
            build_ptdf(model, "Z")


class TestAmpacityToMva:
    def test_reference_value(self):
        expected = math.sqrt(3.0) * 380e3 * 2000.0 / 1e6
        assert ampacity_to_mva(2000.0, 380.0, 1) == pytest.approx(expected)
        assert ampacity_to_mva(2000.0, 380.0, 1) == pytest.approx(1316.4, abs=0.1)

    def test_zero_current(self):
        assert ampacity_to_mva(0.0, 380.0, 2) == 0.0

    def test_linear_in_circuits(self):
        one = ampacity_to_mva(1500.0, 220.0, 1)
        assert ampacity_to_mva(1500.0, 220.0, 2) == pytest.approx(2 * one)


class TestCorridorRatings:
    def test_identical_ambient_equals_single(self, zebra):
        line = _line("A", "B", c220=1, c380=2)
        a = _windy(4.0)
        assert corridor_dlr(line, a, a, zebra) == pytest.approx(
            corridor_rating_single(line, a, zebra)
        )

    def test_min_rule(self, zebra):
        line = _line("A", "B")
        calm, windy = _windy(1.0), _windy(12.0)
        assert corridor_dlr(line, windy, calm, zebra) == pytest.approx(
            corridor_rating_single(line, calm, zebra)
        )
        assert corridor_dlr(line, windy, calm, zebra) <= min(
            corridor_rating_single(line, windy, zebra),
            corridor_rating_single(line, calm, zebra),
        ) + 1e-9

    def test_scale_factor_applies(self, zebra):
        line = _line("A", "B")
        a = _windy(4.0)
        assert corridor_dlr(line, a, a, zebra, scale=0.5) == pytest.approx(
            0.5 * corridor_rating_single(line, a, zebra)
        )


class TestCalibration:
    def test_reference_rating_reproduced(self, benchmark, zebra, reference_ambient):
        factors = calibrate_to_nlr(benchmark.grid, zebra, reference_ambient)
        for line in benchmark.grid.lines:
            rated = corridor_dlr(line, reference_ambient, reference_ambient,
                                 zebra, factors[line.key])
            assert rated == pytest.approx(line.nlr_mva, rel=1e-9)

    def test_idempotent(self, benchmark, zebra, reference_ambient):
        a = calibrate_to_nlr(benchmark.grid, zebra, reference_ambient)
        b = calibrate_to_nlr(benchmark.grid, zebra, reference_ambient)
        assert a == b

    def test_factors_within_sanity_band(self, benchmark, zebra, reference_ambient):
        factors = calibrate_to_nlr(benchmark.grid, zebra, reference_ambient)
        for key, factor in factors.items():
            assert 0.5 <= factor <= 2.0, key


class TestRatingSeries:
    def _ambients(self, model, steps, v=6.0):
        return {node: [_windy(v)] * steps for node in model.nodes}

    def test_nlr_constant(self, benchmark, zebra):
        series = rating_series(benchmark.grid, {}, zebra, {}, "NLR", n_steps=5)
        assert series.mode == "NLR"
        assert series.n_steps == 5
        for j, line in enumerate(benchmark.grid.lines):
            np.testing.assert_array_equal(series.limits[:, j],
                                          np.full(5, line.nlr_mva))

    def test_dlr_matches_corridor_rule(self, benchmark, zebra, reference_ambient):
        factors = calibrate_to_nlr(benchmark.grid, zebra, reference_ambient)
        ambients = self._ambients(benchmark.grid, 3)
        series = rating_series(benchmark.grid, ambients, zebra, factors, "DLR")
        line = benchmark.grid.lines[0]
        expected = corridor_dlr(line, ambients[line.from_node][0],
                                ambients[line.to_node][0], zebra,
                                factors[line.key])
        assert series.limits[0, 0] == pytest.approx(expected)

    def test_high_wind_dlr_exceeds_nlr(self, benchmark, zebra, reference_ambient):
        factors = calibrate_to_nlr(benchmark.grid, zebra, reference_ambient)
        ambients = self._ambients(benchmark.grid, 1, v=12.0)
        series = rating_series(benchmark.grid, ambients, zebra, factors, "DLR")
        for j, line in enumerate(benchmark.grid.lines):
            assert series.limits[0, j] > line.nlr_mva

    def test_horizon_mismatch(self, benchmark, zebra):
        ambients = self._ambients(benchmark.grid, 3)
        ambients["A"] = ambients["A"][:2]
        with pytest.raises(HorizonMismatch):
            rating_series(benchmark.grid, ambients, zebra, {}, "DLR")

    def test_unknown_mode_rejected(self, benchmark, zebra):
        with pytest.raises(ValueError):
            rating_series(benchmark.grid, {}, zebra, {}, "STATIC", n_steps=1)
