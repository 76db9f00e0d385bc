"""The four solver loops: FW, AFW/BPFW, IFW, and the integer-step variant.

Every loop records one IterRecord per executed step: the iterate value, the
optimality gaps, the selected direction kind, the step and its cap, and the
case label used by the counting arguments:

* Case 1: the step stayed strictly below its cap,
* Case 2: the step hit a cap that was at least 1 (full progress available),
* Case 3: the step hit a cap below 1 (a drop step; no guaranteed decrease).

Stopping is on the Frank-Wolfe gap, an affine-invariant optimality measure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .active_set import ActiveSet
from .directions import (
    KIND_FW,
    KIND_PW,
    Direction,
    candidates_afw,
    candidates_bpfw,
    candidates_ifw,
    select,
)
from .objectives import curvature_constant
from .polytope import Polytope, PolytopeError, StdFormPolytope
from .stepsize import StepRule, target_pow2

CASE_TOL = 1e-12
POINT_TOL = 1e-10
FEAS_TOL = 1e-8

VARIANTS = ("FW", "AFW", "BPFW", "IFW", "FWIPW")

CSV_COLUMNS = ("t", "f_val", "f_gap", "fw_gap", "case", "eta", "step_kind",
               "support_or_face_dim")


def fw_gap_value(g, x, v):
    """The Frank-Wolfe gap <g, x - v> with v the LMO vertex at g."""
    return float(np.asarray(g) @ (np.asarray(x) - np.asarray(v)))


@dataclass
class RunConfig:
    variant: str
    step: StepRule
    max_iters: int = 1000
    gap_tol: float = 1e-8
    record_every: int = 1  # cadence of the feasibility assertion
    record_points: bool = False
    fstar: float | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.gap_tol <= 0:
            raise ValueError("gap_tol must be positive")
        if self.variant == "FWIPW" and self.step.kind != "pow2":
            raise ValueError("FWIPW requires the pow2 step rule")
        if self.variant != "FWIPW" and self.step.kind == "pow2":
            raise ValueError("the pow2 step rule is specific to FWIPW")


@dataclass
class IterRecord:
    t: int
    f_val: float
    f_gap: float | None
    fw_gap: float
    case: int
    step_kind: str
    eta: float
    eta_max: float
    inner: float
    support_or_face_dim: int
    strong_gap: float | None = None
    gamma: float | None = None
    x: np.ndarray | None = field(default=None, repr=False)


@dataclass
class RunTrace:
    variant: str
    records: list
    terminal_reason: str  # "gap_tol" | "max_iters" | "stationary"
    x_final: np.ndarray
    f_final: float
    fw_gap_final: float
    fstar: float | None = None

    def gap_series(self):
        """(t, f_gap) arrays over the executed iterations plus the final point."""
        if self.fstar is None:
            raise ValueError("gap_series needs a known optimal value")
        ts = [r.t for r in self.records] + [len(self.records)]
        gaps = [r.f_val - self.fstar for r in self.records]
        gaps.append(self.f_final - self.fstar)
        return np.asarray(ts, dtype=float), np.asarray(gaps, dtype=float)

    def assert_monotone(self, start=0, tol=1e-10):
        vals = [r.f_val for r in self.records[start:]] + [self.f_final]
        for a, b in zip(vals, vals[1:]):
            if b > a + tol:
                raise AssertionError(f"objective increased: {a!r} -> {b!r}")

    def to_csv(self, path):
        """Write the trace in the fixed 8-column layout, shortest-roundtrip floats."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in self.records:
                f_gap = "" if r.f_gap is None else repr(r.f_gap)
                w.writerow([r.t, repr(r.f_val), f_gap, repr(r.fw_gap), r.case,
                            repr(r.eta), r.step_kind, r.support_or_face_dim])


def _classify(eta, eta_max):
    if abs(eta - eta_max) <= CASE_TOL:
        return 2 if eta_max >= 1.0 else 3
    return 1


def _check_feasible(poly, x, t):
    if not poly.contains(x, tol=FEAS_TOL):
        raise PolytopeError(f"iterate left the polytope at t={t}")


def _face_dim(poly, x):
    return poly.minimal_face(x).dim


def run_fw(poly, obj, cfg, x0=None):
    """Algorithm: repeat x <- x + eta (v - x) with v the LMO vertex."""
    x = np.asarray(x0, dtype=float) if x0 is not None else poly.initial_vertex()
    _check_feasible(poly, x, 0)
    records = []
    reason = "max_iters"
    for t in range(cfg.max_iters):
        g = obj.grad(x)
        v = poly.lmo(g)
        gap = fw_gap_value(g, x, v)
        if gap <= cfg.gap_tol:
            reason = "gap_tol"
            break
        d = Direction(KIND_FW, v - x, 1.0, float(g @ (v - x)), payload=v)
        eta = cfg.step.step(obj, x, g, d)
        records.append(IterRecord(
            t, obj.value(x),
            None if cfg.fstar is None else obj.value(x) - cfg.fstar,
            gap, _classify(eta, d.eta_max), d.kind, eta, d.eta_max, d.inner,
            _face_dim(poly, x),
            x=x.copy() if cfg.record_points else None))
        x = x + eta * d.vec
        if cfg.record_every and t % cfg.record_every == 0:
            _check_feasible(poly, x, t + 1)
    g = obj.grad(x)
    return RunTrace("FW", records, reason, x, obj.value(x),
                    fw_gap_value(g, x, poly.lmo(g)), cfg.fstar)


def run_afw_bpfw(poly, obj, cfg, x0=None):
    """Active-set loop sharing the FW candidate with either the away step
    (AFW) or the support-local pairwise swap (BPFW)."""
    if cfg.variant not in ("AFW", "BPFW"):
        raise ValueError("run_afw_bpfw handles the AFW and BPFW variants")
    v0 = poly.initial_vertex() if x0 is None else np.asarray(x0, dtype=float)
    aset = ActiveSet.from_vertex(poly, v0)
    records = []
    reason = "max_iters"
    for t in range(cfg.max_iters):
        x = aset.point
        g = obj.grad(x)
        v = poly.lmo(g)
        gap = fw_gap_value(g, x, v)
        if gap <= cfg.gap_tol:
            reason = "gap_tol"
            break
        cands = (candidates_afw(aset, g, v) if cfg.variant == "AFW"
                 else candidates_bpfw(aset, g, v))
        a, _ = aset.away_and_local_fw(g)
        strong = float(g @ (a - v))
        d = select(cands)
        eta = cfg.step.step(obj, x, g, d)
        records.append(IterRecord(
            t, obj.value(x),
            None if cfg.fstar is None else obj.value(x) - cfg.fstar,
            gap, _classify(eta, d.eta_max), d.kind, eta, d.eta_max, d.inner,
            aset.support_size(), strong_gap=strong,
            x=x.copy() if cfg.record_points else None))
        aset.apply_step(d.set_step_kind, d.payload, eta)
        drift = np.linalg.norm(aset.point - (x + eta * d.vec))
        if drift > POINT_TOL * max(1.0, np.linalg.norm(x)):
            raise PolytopeError(f"active-set point drifted by {drift:g} at t={t}")
        if cfg.record_every and t % cfg.record_every == 0:
            _check_feasible(poly, aset.point, t + 1)
    x = aset.point
    g = obj.grad(x)
    return RunTrace(cfg.variant, records, reason, x, obj.value(x),
                    fw_gap_value(g, x, poly.lmo(g)), cfg.fstar)


def run_ifw(poly, obj, cfg, x0=None):
    """Decomposition-invariant loop: in-face away and swap candidates with
    ratio-test caps; no active set is maintained."""
    x = np.asarray(x0, dtype=float) if x0 is not None else poly.initial_vertex()
    _check_feasible(poly, x, 0)
    records = []
    reason = "max_iters"
    for t in range(cfg.max_iters):
        g = obj.grad(x)
        v = poly.lmo(g)
        gap = fw_gap_value(g, x, v)
        if gap <= cfg.gap_tol:
            reason = "gap_tol"
            break
        cands = candidates_ifw(poly, x, g, v)
        a = poly.in_face_lmo(x, -g)
        strong = float(g @ (a - v))
        d = select(cands)
        eta = cfg.step.step(obj, x, g, d)
        records.append(IterRecord(
            t, obj.value(x),
            None if cfg.fstar is None else obj.value(x) - cfg.fstar,
            gap, _classify(eta, d.eta_max), d.kind, eta, d.eta_max, d.inner,
            _face_dim(poly, x), strong_gap=strong,
            x=x.copy() if cfg.record_points else None))
        x = x + eta * d.vec
        if cfg.record_every and t % cfg.record_every == 0:
            _check_feasible(poly, x, t + 1)
    g = obj.grad(x)
    return RunTrace("IFW", records, reason, x, obj.value(x),
                    fw_gap_value(g, x, poly.lmo(g)), cfg.fstar)


def run_fwipw(poly, obj, cfg, x0=None):
    """Integer-step pairwise loop for 0/1 standard-form polytopes.

    The step is the largest power of two below both the curvature target
    gamma = -<g, d>/L and the previous step, so every iterate is an integer
    multiple of the current step.  That integrality is asserted each
    iteration; feasibility needs no ratio test.
    """
    if not (isinstance(poly, StdFormPolytope) and poly.is_simplex_like()):
        raise PolytopeError("FWIPW needs a standard-form polytope with 0/1 vertices")
    L = cfg.step.L
    x = np.asarray(x0, dtype=float) if x0 is not None else poly.initial_vertex()
    if not poly.is_vertex(x):
        raise PolytopeError("FWIPW must start at a vertex")
    eta_prev = 1.0
    records = []
    reason = "max_iters"
    for t in range(cfg.max_iters):
        g = obj.grad(x)
        v = poly.lmo(g)
        gap = fw_gap_value(g, x, v)
        if gap <= cfg.gap_tol:
            reason = "gap_tol"
            break
        a = poly.in_face_lmo(x, -g)
        vec = v - a
        inner = float(g @ vec)
        gamma = -inner / L
        if gamma <= 0.0:
            reason = "stationary"
            break
        eta = target_pow2(gamma, eta_prev)
        records.append(IterRecord(
            t, obj.value(x),
            None if cfg.fstar is None else obj.value(x) - cfg.fstar,
            gap, 1, KIND_PW, eta, np.inf, inner,
            _face_dim(poly, x), strong_gap=float(g @ (a - v)), gamma=gamma,
            x=x.copy() if cfg.record_points else None))
        x = x + eta * vec
        alpha = x / eta
        if np.abs(alpha - np.round(alpha)).max() > 1e-9:
            raise PolytopeError(
                f"integer-step invariant broken at t={t}: check L and the polytope")
        eta_prev = eta
        if cfg.record_every and t % cfg.record_every == 0:
            _check_feasible(poly, x, t + 1)
    g = obj.grad(x)
    return RunTrace("FWIPW", records, reason, x, obj.value(x),
                    fw_gap_value(g, x, poly.lmo(g)), cfg.fstar)


_RUNNERS = {"FW": run_fw, "AFW": run_afw_bpfw, "BPFW": run_afw_bpfw,
            "IFW": run_ifw, "FWIPW": run_fwipw}


def solve(poly, obj, variant, step="ls", L=None, max_iters=1000, gap_tol=1e-8,
          x0=None, fstar=None, record_points=False, record_every=1):
    """One-call front end: build the step rule and dispatch on the variant.

    ``step`` is "ls", "ss", or "pow2"; the curvature constant L defaults to
    smoothness times squared diameter when a rule needs it.
    """
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if step in ("ss", "pow2") and L is None:
        L = curvature_constant(obj, poly)
    rule = StepRule(step, L)
    cfg = RunConfig(variant, rule, max_iters=max_iters, gap_tol=gap_tol,
                    record_every=record_every, record_points=record_points,
                    fstar=fstar)
    return _RUNNERS[variant](poly, obj, cfg, x0=x0)
