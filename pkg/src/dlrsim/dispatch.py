"""Receding-horizon economic dispatch as a convex quadratic program.

Each zone is a power node bundling dispatchable generation, wind and PV
feed-in, load, and (optionally) pumped-hydro storage.  At every step a
finite-horizon QP is solved under DC flow constraints with possibly
time-varying line limits; the first control is applied and the horizon
rolls forward.  Load shedding and RES curtailment enter as penalized slack,
so every instance is feasible by construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import clarabel
import numpy as np
import scipy.sparse as sp

from .grid import PtdfMatrix, RatingSeries

log = logging.getLogger(__name__)

# control slots per zone and step
_DISP, _WIND, _PV, _SERVED, _CHARGE, _DISCHARGE = range(6)
N_CONTROLS = 6


class InfeasibleBounds(ValueError):
    """Some lower bound exceeds its upper bound before solving."""


class Infeasible(RuntimeError):
    """Solver reported an infeasible instance."""


class MaxIterations(RuntimeError):
    """Solver hit its iteration cap without an accurate solution."""


@dataclass(frozen=True)
class StorageParams:
    """Pumped-hydro storage attached to one zone (all-zero when absent)."""

    energy_mwh: float = 0.0
    charge_mw: float = 0.0
    discharge_mw: float = 0.0
    eta_charge: float = 0.8660254037844387   # sqrt of 0.75 round trip
    eta_discharge: float = 0.8660254037844387
    soc_init: float = 0.5

    def __post_init__(self):
        if self.energy_mwh < 0 or self.charge_mw < 0 or self.discharge_mw < 0:
            raise ValueError("storage capacities must be >= 0")
        if not (0 < self.eta_charge <= 1 and 0 < self.eta_discharge <= 1):
            raise ValueError("efficiencies must be in (0, 1]")
        if not 0 <= self.soc_init <= 1:
            raise ValueError("soc_init must be in [0, 1]")


@dataclass(frozen=True)
class PowerNodeFleet:
    """Per-zone generation, load and storage over the simulation span."""

    zones: tuple
    disp_cap: np.ndarray      # (Z,) MW
    wind: np.ndarray          # (T, Z) MW available
    pv: np.ndarray            # (T, Z) MW available
    load: np.ndarray          # (T, Z) MW
    storage: tuple            # (Z,) StorageParams
    ramp_mw: np.ndarray = None  # (Z,) MW per step on dispatchables; None = unbounded

    def __post_init__(self):
        z = len(self.zones)
        if self.disp_cap.shape != (z,):
            raise ValueError("disp_cap must have one entry per zone")
        for name, arr in (("wind", self.wind), ("pv", self.pv), ("load", self.load)):
            if arr.ndim != 2 or arr.shape[1] != z:
                raise ValueError(f"{name} series must be (steps, zones)")
            if np.any(arr < 0):
                raise ValueError(f"{name} series must be >= 0")
        if np.any(self.disp_cap < 0):
            raise ValueError("disp_cap must be >= 0")
        if len(self.storage) != z:
            raise ValueError("storage must have one entry per zone")

    @property
    def n_steps(self) -> int:
        return self.wind.shape[0]

    @property
    def n_zones(self) -> int:
        return len(self.zones)


@dataclass(frozen=True)
class DispatchWeights:
    """Objective weights; ordering shed >> curtail >> generation >> ramp."""

    shed: float = 1000.0       # per MW load not served
    curtail: float = 10.0      # per MW RES not used
    generation: float = 1.0    # per MW dispatchable output
    storage_use: float = 2.5   # per MW charged or discharged
    ramp: float = 1e-6         # per (MW/step)^2 on dispatchables
    soc_deviation: float = 1.0  # on (SoC - soc_ref)^2
    soc_ref: float = 0.5
    generation_quad: float = 0.0  # optional quadratic generation cost

    def __post_init__(self):
        for name in ("shed", "curtail", "generation", "storage_use", "ramp",
                     "soc_deviation", "generation_quad"):
            if getattr(self, name) < 0:
                raise ValueError(f"weight {name} must be >= 0")


@dataclass(frozen=True)
class DispatchProblem:
    """Everything needed to pose the horizon QP at any step."""

    fleet: PowerNodeFleet
    ptdf: PtdfMatrix
    ratings: RatingSeries
    horizon: int = 256
    step_seconds: float = 900.0
    weights: DispatchWeights = field(default_factory=DispatchWeights)

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if tuple(self.ptdf.nodes) != tuple(self.fleet.zones):
            raise ValueError("PTDF node order must match fleet zones")
        if self.ratings.n_steps < self.fleet.n_steps:
            raise ValueError("rating series shorter than fleet series")

    @property
    def storage_zone_indices(self):
        return [z for z, s in enumerate(self.fleet.storage) if s.energy_mwh > 0]


@dataclass
class QpInstance:
    """Sparse QP: minimize 0.5 x'Px + q'x + const s.t. lb <= Ax <= ub.

    Equality rows carry lb == ub.  ``meta`` records the variable layout so
    solutions can be unpacked.
    """

    P: sp.csc_matrix
    q: np.ndarray
    A: sp.csc_matrix
    lb: np.ndarray
    ub: np.ndarray
    const: float
    meta: dict

    @property
    def n_vars(self) -> int:
        return self.q.shape[0]

    def objective(self, x) -> float:
        x = np.asarray(x)
        return float(0.5 * x @ (self.P @ x) + self.q @ x + self.const)


def _control_matrices(problem: DispatchProblem):
    """Per-step injection map and SoC dynamics map over one control block."""
    z = problem.fleet.n_zones
    inj = np.zeros((z, z * N_CONTROLS))
    for zi in range(z):
        base = zi * N_CONTROLS
        inj[zi, base + _DISP] = 1.0
        inj[zi, base + _WIND] = 1.0
        inj[zi, base + _PV] = 1.0
        inj[zi, base + _SERVED] = -1.0
        inj[zi, base + _CHARGE] = -1.0
        inj[zi, base + _DISCHARGE] = 1.0
    storage_idx = problem.storage_zone_indices
    dt_h = problem.step_seconds / 3600.0
    dyn = np.zeros((len(storage_idx), z * N_CONTROLS))
    for s, zi in enumerate(storage_idx):
        st = problem.fleet.storage[zi]
        base = zi * N_CONTROLS
        dyn[s, base + _CHARGE] = -st.eta_charge * dt_h / st.energy_mwh
        dyn[s, base + _DISCHARGE] = dt_h / (st.eta_discharge * st.energy_mwh)
    return inj, dyn, storage_idx


def build_qp(problem: DispatchProblem, k: int, horizon=None,
             soc_init=None, prev_disp=None) -> QpInstance:
    """Assemble the horizon-``h`` QP starting at simulation step ``k``.

    Variable layout: for l in 0..h-1 the control block
    ``[disp, wind_used, pv_used, load_served, charge, discharge]`` per zone,
    followed by the SoC states of all storage zones for l in 0..h-1.
    """
    fleet = problem.fleet
    w = problem.weights
    z = fleet.n_zones
    h = horizon if horizon is not None else problem.horizon
    h = min(h, fleet.n_steps - k)
    if h < 1:
        raise ValueError(f"no steps left at k={k}")
    if problem.ratings.n_steps < k + h:
        raise ValueError("rating series does not cover the horizon")

    inj, dyn, storage_idx = _control_matrices(problem)
    n_s = len(storage_idx)
    nu = h * z * N_CONTROLS
    n = nu + h * n_s
    if soc_init is None:
        soc_init = np.array([fleet.storage[zi].soc_init for zi in storage_idx])
    else:
        soc_init = np.asarray(soc_init, dtype=float)

    # --- constraint rows ------------------------------------------------
    eye_h = sp.eye(h, format="csr")
    zeros_states = sp.csr_matrix((h, h * n_s))
    # nodal balance: sum of injections is zero each step (lossless DC grid)
    a_balance = sp.hstack([sp.kron(eye_h, np.ones((1, z)) @ inj), zeros_states])
    lb_balance = np.zeros(h)
    ub_balance = np.zeros(h)

    # line flows within the active rating series
    n_lines = problem.ptdf.matrix.shape[0]
    a_flow = sp.hstack([sp.kron(eye_h, problem.ptdf.matrix @ inj),
                        sp.csr_matrix((h * n_lines, h * n_s))])
    caps = problem.ratings.limits[k:k + h, :].reshape(-1)
    lb_flow = -caps
    ub_flow = caps

    # SoC dynamics: soc(l) - soc(l-1) + dyn_controls(l) = 0  (soc(-1) given)
    rows = []
    if n_s:
        a_dyn_u = sp.kron(eye_h, dyn)
        shift = sp.eye(h * n_s, format="lil")
        for l in range(1, h):
            for s in range(n_s):
                shift[l * n_s + s, (l - 1) * n_s + s] = -1.0
        a_soc = sp.hstack([a_dyn_u, shift.tocsr()])
        b_soc = np.zeros(h * n_s)
        b_soc[:n_s] = soc_init
        rows.append((a_soc, b_soc, b_soc))

    # variable boxes
    a_box = sp.eye(n, format="csr")
    lb_box = np.zeros(n)
    ub_box = np.zeros(n)
    for l in range(h):
        t = k + l
        for zi in range(z):
            base = l * z * N_CONTROLS + zi * N_CONTROLS
            ub_box[base + _DISP] = fleet.disp_cap[zi]
            ub_box[base + _WIND] = fleet.wind[t, zi]
            ub_box[base + _PV] = fleet.pv[t, zi]
            ub_box[base + _SERVED] = fleet.load[t, zi]
            st = fleet.storage[zi]
            ub_box[base + _CHARGE] = st.charge_mw
            ub_box[base + _DISCHARGE] = st.discharge_mw
    ub_box[nu:] = 1.0  # SoC in [0, 1]

    # ramp limits on dispatchables
    ramp_rows = []
    if fleet.ramp_mw is not None:
        for zi in range(z):
            r = fleet.ramp_mw[zi]
            if not np.isfinite(r):
                continue
            if prev_disp is not None:
                # first step rides on the previously applied control
                i0 = 0 * z * N_CONTROLS + zi * N_CONTROLS + _DISP
                lb_box[i0] = max(lb_box[i0], prev_disp[zi] - r)
                ub_box[i0] = min(ub_box[i0], prev_disp[zi] + r)
            for l in range(1, h):
                row = sp.lil_matrix((1, n))
                row[0, l * z * N_CONTROLS + zi * N_CONTROLS + _DISP] = 1.0
                row[0, (l - 1) * z * N_CONTROLS + zi * N_CONTROLS + _DISP] = -1.0
                ramp_rows.append((row.tocsr(), -r, r))

    if np.any(lb_box > ub_box + 1e-12):
        raise InfeasibleBounds("variable lower bound exceeds upper bound")

    blocks = [(a_balance, lb_balance, ub_balance), (a_flow, lb_flow, ub_flow)]
    blocks += rows
    blocks.append((a_box, lb_box, ub_box))
    for row, lo, hi in ramp_rows:
        blocks.append((row, np.array([lo]), np.array([hi])))
    a_all = sp.vstack([b[0] for b in blocks], format="csc")
    lb_all = np.concatenate([np.atleast_1d(b[1]) for b in blocks])
    ub_all = np.concatenate([np.atleast_1d(b[2]) for b in blocks])

    # --- objective ------------------------------------------------------
    q = np.zeros(n)
    p_diag = np.zeros(n)
    p_extra = []  # (i, j, value) off-diagonal entries, symmetric
    const = 0.0
    for l in range(h):
        t = k + l
        for zi in range(z):
            base = l * z * N_CONTROLS + zi * N_CONTROLS
            q[base + _DISP] += w.generation
            q[base + _WIND] -= w.curtail
            q[base + _PV] -= w.curtail
            q[base + _SERVED] -= w.shed
            q[base + _CHARGE] += w.storage_use
            q[base + _DISCHARGE] += w.storage_use
            const += w.shed * fleet.load[t, zi]
            const += w.curtail * (fleet.wind[t, zi] + fleet.pv[t, zi])
            if w.generation_quad:
                p_diag[base + _DISP] += 2.0 * w.generation_quad
    # SoC reference tracking
    for idx in range(nu, n):
        p_diag[idx] += 2.0 * w.soc_deviation
        q[idx] -= 2.0 * w.soc_deviation * w.soc_ref
        const += w.soc_deviation * w.soc_ref**2
    # ramp smoothing between consecutive dispatch levels
    if w.ramp:
        for zi in range(z):
            if prev_disp is not None:
                i0 = zi * N_CONTROLS + _DISP
                p_diag[i0] += 2.0 * w.ramp
                q[i0] -= 2.0 * w.ramp * prev_disp[zi]
                const += w.ramp * prev_disp[zi] ** 2
            for l in range(1, h):
                i = l * z * N_CONTROLS + zi * N_CONTROLS + _DISP
                j = (l - 1) * z * N_CONTROLS + zi * N_CONTROLS + _DISP
                p_diag[i] += 2.0 * w.ramp
                p_diag[j] += 2.0 * w.ramp
                p_extra.append((i, j, -2.0 * w.ramp))

    if p_extra:
        ii, jj, vv = zip(*p_extra)
        p_off = sp.coo_matrix((vv, (ii, jj)), shape=(n, n))
        p_mat = sp.diags(p_diag) + p_off + p_off.T
    else:
        p_mat = sp.diags(p_diag)

    meta = {
        "k": k, "horizon": h, "zones": fleet.zones, "n_controls": N_CONTROLS,
        "n_control_vars": nu, "storage_zone_indices": storage_idx,
        "n_lines": n_lines,
    }
    return QpInstance(P=p_mat.tocsc(), q=q, A=a_all.tocsc(),
                      lb=lb_all, ub=ub_all, const=const, meta=meta)


@dataclass(frozen=True)
class QpSolution:
    x: np.ndarray
    objective: float
    status: str
    iterations: int


def _to_conic(qp: QpInstance):
    """Split two-sided rows into zero-cone equalities and one-sided rows."""
    eq = qp.lb == qp.ub
    a_eq, b_eq = qp.A[eq], qp.ub[eq]
    a_in = qp.A[~eq]
    lb_in, ub_in = qp.lb[~eq], qp.ub[~eq]
    fin_u = np.isfinite(ub_in)
    fin_l = np.isfinite(lb_in)
    a_conic = sp.vstack([a_eq, a_in[fin_u], -a_in[fin_l]], format="csc")
    b_conic = np.concatenate([b_eq, ub_in[fin_u], -lb_in[fin_l]])
    cones = [clarabel.ZeroConeT(a_eq.shape[0]),
             clarabel.NonnegativeConeT(int(fin_u.sum() + fin_l.sum()))]
    return a_conic, b_conic, cones


def solve_qp(qp: QpInstance) -> QpSolution:
    """Solve a QP instance with an interior-point method.

    Deterministic for fixed inputs.  Raises :class:`Infeasible` or
    :class:`MaxIterations` on failure (with shedding and curtailment slack
    present, infeasibility indicates a malformed instance).
    """
    a_conic, b_conic, cones = _to_conic(qp)
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    solver = clarabel.DefaultSolver(
        sp.triu(qp.P, format="csc"), qp.q, a_conic, b_conic, cones, settings
    )
    res = solver.solve()
    status = str(res.status)
    if "Infeasible" in status:
        raise Infeasible(status)
    if "MaxIter" in status or "MaxTime" in status:
        raise MaxIterations(status)
    if "Solved" not in status:
        raise RuntimeError(f"solver failed with status {status!r}")
    return QpSolution(
        x=np.asarray(res.x),
        objective=qp.objective(np.asarray(res.x)),
        status=status,
        iterations=res.iterations,
    )


@dataclass
class DispatchResult:
    """Applied first-step quantities of a receding-horizon run."""

    zones: tuple
    line_keys: tuple
    step_seconds: float
    disp: np.ndarray          # (T, Z) MW
    wind_used: np.ndarray
    pv_used: np.ndarray
    wind_curtailed: np.ndarray
    pv_curtailed: np.ndarray
    load_served: np.ndarray
    load_shed: np.ndarray
    charge: np.ndarray
    discharge: np.ndarray
    soc: np.ndarray           # (T, S) after each applied step
    flows: np.ndarray         # (T, L) MW
    objective: np.ndarray     # (T,) horizon objective at each step
    statuses: list


def _unpack_first_step(qp: QpInstance, x, problem: DispatchProblem, k):
    z = problem.fleet.n_zones
    block = x[: z * N_CONTROLS].reshape(z, N_CONTROLS)
    return block


def receding_horizon_run(problem: DispatchProblem, start=0, n_steps=None,
                         progress=None) -> DispatchResult:
    """Simulate the receding-horizon dispatch over ``n_steps`` applied steps.

    At each step the horizon QP is solved with perfect foresight, the first
    control is applied, storage states advance through the exact dynamics,
    and the window rolls on (shrinking near the end of the data).
    """
    fleet = problem.fleet
    z = fleet.n_zones
    total = fleet.n_steps - start if n_steps is None else n_steps
    if start + total > fleet.n_steps:
        raise ValueError("simulation span exceeds the available series")
    storage_idx = problem.storage_zone_indices
    n_s = len(storage_idx)
    dt_h = problem.step_seconds / 3600.0

    shape = (total, z)
    result = DispatchResult(
        zones=fleet.zones,
        line_keys=problem.ptdf.line_keys,
        step_seconds=problem.step_seconds,
        disp=np.zeros(shape), wind_used=np.zeros(shape), pv_used=np.zeros(shape),
        wind_curtailed=np.zeros(shape), pv_curtailed=np.zeros(shape),
        load_served=np.zeros(shape), load_shed=np.zeros(shape),
        charge=np.zeros(shape), discharge=np.zeros(shape),
        soc=np.zeros((total, n_s)),
        flows=np.zeros((total, problem.ptdf.matrix.shape[0])),
        objective=np.zeros(total),
        statuses=[],
    )

    soc = np.array([fleet.storage[zi].soc_init for zi in storage_idx])
    prev_disp = None
    for i in range(total):
        k = start + i
        qp = build_qp(problem, k, soc_init=soc, prev_disp=prev_disp)
        try:
            sol = solve_qp(qp)
        except (Infeasible, MaxIterations) as exc:
            raise type(exc)(f"step {k}: {exc}") from exc
        block = _unpack_first_step(qp, sol.x, problem, k)
        disp = block[:, _DISP]
        result.disp[i] = disp
        result.wind_used[i] = block[:, _WIND]
        result.pv_used[i] = block[:, _PV]
        result.load_served[i] = block[:, _SERVED]
        result.charge[i] = block[:, _CHARGE]
        result.discharge[i] = block[:, _DISCHARGE]
        result.wind_curtailed[i] = np.maximum(fleet.wind[k] - block[:, _WIND], 0.0)
        result.pv_curtailed[i] = np.maximum(fleet.pv[k] - block[:, _PV], 0.0)
        result.load_shed[i] = np.maximum(fleet.load[k] - block[:, _SERVED], 0.0)
        injections = (disp + block[:, _WIND] + block[:, _PV]
                      + block[:, _DISCHARGE] - block[:, _CHARGE] - block[:, _SERVED])
        result.flows[i] = problem.ptdf.flows(injections)
        result.objective[i] = sol.objective
        result.statuses.append(sol.status)
        # exact state advance with the applied first control
        for s, zi in enumerate(storage_idx):
            st = fleet.storage[zi]
            soc[s] += (st.eta_charge * block[zi, _CHARGE]
                       - block[zi, _DISCHARGE] / st.eta_discharge) * dt_h / st.energy_mwh
        soc = np.clip(soc, 0.0, 1.0)
        result.soc[i] = soc
        prev_disp = disp
        if progress is not None:
            progress(i, total)
    return result


def curtailment_report(result: DispatchResult, fleet: PowerNodeFleet,
                       start=0):
    """Per-zone shed and curtailment energies as percentages of totals.

    Returns a dict mapping zone id (plus ``"TOTAL"``) to a dict with keys
    ``load_shed_pct``, ``wind_curtailed_pct``, ``pv_curtailed_pct``.
    """
    t = result.disp.shape[0]
    load = fleet.load[start:start + t]
    wind = fleet.wind[start:start + t]
    pv = fleet.pv[start:start + t]

    def pct(part, total):
        return 100.0 * part / total if total > 0 else 0.0

    report = {}
    for zi, zone in enumerate(fleet.zones):
        report[zone] = {
            "load_shed_pct": pct(result.load_shed[:, zi].sum(), load[:, zi].sum()),
            "wind_curtailed_pct": pct(result.wind_curtailed[:, zi].sum(),
                                      wind[:, zi].sum()),
            "pv_curtailed_pct": pct(result.pv_curtailed[:, zi].sum(), pv[:, zi].sum()),
        }
    report["TOTAL"] = {
        "load_shed_pct": pct(result.load_shed.sum(), load.sum()),
        "wind_curtailed_pct": pct(result.wind_curtailed.sum(), wind.sum()),
        "pv_curtailed_pct": pct(result.pv_curtailed.sum(), pv.sum()),
    }
    return report
