"""Multi-zone benchmark grid: topology, DC power flow sensitivities, ratings.

Zones are single nodes; corridors between zones aggregate parallel 220 kV
and 380 kV circuits.  Line flows follow the DC approximation through a PTDF
matrix, and corridor MVA limits come from the conductor ampacity under the
ambient conditions at the two endpoint zones (the lower end governs).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .thermal import AmbientConditions, ConductorSpec, ac_line_rating

log = logging.getLogger(__name__)


class DisconnectedGraph(ValueError):
    """Benchmark topology is not a single connected component."""


class SingularNetwork(ValueError):
    """Reduced susceptance matrix is singular; no DC solution exists."""


class HorizonMismatch(ValueError):
    """Ambient series of the zones are not aligned."""


# Sanity band for NLR calibration factors; values outside indicate a
# mismatch between circuit counts and the configured NLR.
CALIBRATION_BAND = (0.5, 2.0)


@dataclass(frozen=True)
class Line:
    """One inter-zone corridor with its parallel circuits."""

    from_node: str
    to_node: str
    circuits_220: int
    circuits_380: int
    susceptance: float  # per-unit, parallel circuits combined
    nlr_mva: float

    def __post_init__(self):
        if self.susceptance <= 0:
            raise ValueError(f"{self.key}: susceptance must be positive")
        if self.nlr_mva <= 0:
            raise ValueError(f"{self.key}: nlr_mva must be positive")
        if self.circuits_220 < 0 or self.circuits_380 < 0:
            raise ValueError(f"{self.key}: circuit counts must be >= 0")
        if self.circuits_220 + self.circuits_380 == 0:
            raise ValueError(f"{self.key}: corridor must have at least one circuit")

    @property
    def key(self) -> str:
        return f"{self.from_node}-{self.to_node}"


@dataclass(frozen=True)
class GridModel:
    """Zonal benchmark network."""

    nodes: tuple
    lines: tuple
    base_mva: float = 100.0

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("node ids must be unique")
        known = set(self.nodes)
        for line in self.lines:
            if line.from_node not in known or line.to_node not in known:
                raise ValueError(f"line {line.key} references unknown node")
        self._check_connected()

    def _check_connected(self):
        if not self.nodes:
            raise DisconnectedGraph("empty node set")
        adjacency = {n: set() for n in self.nodes}
        for line in self.lines:
            adjacency[line.from_node].add(line.to_node)
            adjacency[line.to_node].add(line.from_node)
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if seen != set(self.nodes):
            raise DisconnectedGraph(f"unreachable nodes: {sorted(set(self.nodes) - seen)}")

    def node_index(self, node: str) -> int:
        return self.nodes.index(node)

    def line_by_key(self, key: str) -> Line:
        for line in self.lines:
            if line.key == key:
                return line
        raise KeyError(key)


@dataclass(frozen=True)
class PtdfMatrix:
    """Line-to-node flow sensitivity matrix under the DC approximation."""

    matrix: np.ndarray  # (lines, nodes)
    slack: str
    nodes: tuple
    line_keys: tuple

    def flows(self, injections):
        """Line flows (MW) for a balanced nodal injection vector (MW)."""
        injections = np.asarray(injections, dtype=float)
        return self.matrix @ injections


def build_ptdf(model: GridModel, slack: str) -> PtdfMatrix:
    """Compute the PTDF matrix from line susceptances."""
    if slack not in model.nodes:
        raise ValueError(f"slack node {slack!r} not in model")
    n = len(model.nodes)
    m = len(model.lines)
    incidence = np.zeros((m, n))
    b = np.zeros(m)
    for i, line in enumerate(model.lines):
        incidence[i, model.node_index(line.from_node)] = 1.0
        incidence[i, model.node_index(line.to_node)] = -1.0
        b[i] = line.susceptance
    b_bus = incidence.T @ np.diag(b) @ incidence
    b_flow = np.diag(b) @ incidence
    keep = [i for i in range(n) if model.nodes[i] != slack]
    reduced = b_bus[np.ix_(keep, keep)]
    try:
        inv = np.linalg.inv(reduced)
    except np.linalg.LinAlgError as exc:
        raise SingularNetwork("reduced susceptance matrix is singular") from exc
    if np.linalg.cond(reduced) > 1e12:
        raise SingularNetwork("reduced susceptance matrix is near singular")
    ptdf = np.zeros((m, n))
    ptdf[:, keep] = b_flow[:, keep] @ inv
    return PtdfMatrix(
        matrix=ptdf,
        slack=slack,
        nodes=model.nodes,
        line_keys=tuple(line.key for line in model.lines),
    )


def ampacity_to_mva(i_ac, voltage_kv, circuits):
    """Three-phase apparent power limit (MVA) of parallel identical circuits."""
    if i_ac < 0 or voltage_kv <= 0 or circuits < 0:
        raise ValueError("inputs must be non-negative (voltage positive)")
    return math.sqrt(3.0) * voltage_kv * 1e3 * i_ac * circuits / 1e6


def corridor_rating_single(line: Line, amb: AmbientConditions, spec: ConductorSpec):
    """Corridor MVA under one ambient condition, all circuits, uncalibrated."""
    i_ac = ac_line_rating(spec, amb)
    return (ampacity_to_mva(i_ac, 220.0, line.circuits_220)
            + ampacity_to_mva(i_ac, 380.0, line.circuits_380))


def corridor_dlr(line: Line, amb_from: AmbientConditions, amb_to: AmbientConditions,
                 spec: ConductorSpec, scale: float = 1.0):
    """Corridor DLR (MVA): the lower of the two endpoint-zone ratings."""
    return scale * min(
        corridor_rating_single(line, amb_from, spec),
        corridor_rating_single(line, amb_to, spec),
    )


def calibrate_to_nlr(model: GridModel, spec: ConductorSpec,
                     reference_ambient: AmbientConditions) -> dict:
    """Per-line factors scaling the thermal rating onto the configured NLR.

    After calibration the corridor rating under the reference ambient (the
    conservative condition the static NLR assumes) equals ``nlr_mva``
    exactly for every line.
    """
    factors = {}
    for line in model.lines:
        raw = corridor_rating_single(line, reference_ambient, spec)
        factor = line.nlr_mva / raw
        if not CALIBRATION_BAND[0] <= factor <= CALIBRATION_BAND[1]:
            log.error("calibration factor %.3f for %s outside sanity band %s; "
                      "check circuit counts vs configured NLR",
                      factor, line.key, CALIBRATION_BAND)
        factors[line.key] = factor
    return factors


@dataclass(frozen=True)
class RatingSeries:
    """Per-line, per-step MVA limits, either static (NLR) or dynamic (DLR)."""

    mode: str                 # "NLR" | "DLR"
    line_keys: tuple
    limits: np.ndarray        # (steps, lines), MVA

    def __post_init__(self):
        if self.mode not in ("NLR", "DLR"):
            raise ValueError("mode must be 'NLR' or 'DLR'")
        if self.limits.shape[1] != len(self.line_keys):
            raise ValueError("limits shape does not match line count")
        if np.any(self.limits < 0):
            raise ValueError("limits must be >= 0")

    @property
    def n_steps(self) -> int:
        return self.limits.shape[0]


def rating_series(model: GridModel, ambients_by_zone: dict, spec: ConductorSpec,
                  calibration: dict, mode: str, n_steps=None) -> RatingSeries:
    """Build the limit series for all lines over the simulation horizon.

    ``ambients_by_zone`` maps zone id to its per-step ambient list (required
    for DLR; NLR needs only ``n_steps`` unless ambients are given).
    """
    if mode == "NLR":
        if n_steps is None:
            lengths = {len(v) for v in ambients_by_zone.values()}
            if len(lengths) != 1:
                raise HorizonMismatch(f"zone series lengths differ: {sorted(lengths)}")
            n_steps = lengths.pop()
        limits = np.tile([line.nlr_mva for line in model.lines], (n_steps, 1))
        return RatingSeries("NLR", tuple(l.key for l in model.lines), limits)

    if mode != "DLR":
        raise ValueError("mode must be 'NLR' or 'DLR'")
    lengths = {len(v) for v in ambients_by_zone.values()}
    if len(lengths) != 1:
        raise HorizonMismatch(f"zone series lengths differ: {sorted(lengths)}")
    steps = lengths.pop()
    limits = np.empty((steps, len(model.lines)))
    for j, line in enumerate(model.lines):
        amb_from = ambients_by_zone[line.from_node]
        amb_to = ambients_by_zone[line.to_node]
        scale = calibration[line.key]
        for t in range(steps):
            limits[t, j] = corridor_dlr(line, amb_from[t], amb_to[t], spec, scale)
    return RatingSeries("DLR", tuple(l.key for l in model.lines), limits)
