"""Candidate descent directions and the selection rule.

Each solver builds a small set of candidate directions per iteration:

* the global step toward the LMO vertex (always has maximum step 1),
* the away step off the worst support/face vertex,
* the pairwise swap from the worst vertex to the best one.

``select`` picks the candidate with the most negative inner product against
the gradient; exact ties prefer the global step, then the away step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .active_set import AWAY_STEP, FW_STEP, PAIRWISE_SWAP

KIND_FW = "FW"
KIND_AWAY = "Away"
KIND_BPFW = "BPFW"
KIND_IN_AWAY = "InAway"
KIND_IN_BPFW = "InBPFW"
KIND_PW = "PW"

_TIE_ORDER = {KIND_FW: 0, KIND_AWAY: 1, KIND_IN_AWAY: 1, KIND_BPFW: 2,
              KIND_IN_BPFW: 2, KIND_PW: 3}
_SET_STEP = {KIND_FW: FW_STEP, KIND_AWAY: AWAY_STEP, KIND_BPFW: PAIRWISE_SWAP}


@dataclass
class Direction:
    """A candidate move: d = vec, feasible steps [0, eta_max]."""

    kind: str
    vec: np.ndarray
    eta_max: float
    inner: float  # <grad, vec>
    payload: object = field(default=None, repr=False)

    @property
    def set_step_kind(self):
        return _SET_STEP[self.kind]


def _fw_direction(g, x, v):
    vec = v - x
    return Direction(KIND_FW, vec, 1.0, float(g @ vec), payload=v)


def candidates_afw(aset, g, v):
    """Global step and away step for the away-step solver."""
    x = aset.point
    a, _ = aset.away_and_local_fw(g)
    vec = x - a
    away = Direction(KIND_AWAY, vec, aset.max_step_for(AWAY_STEP, a),
                     float(g @ vec), payload=a)
    return [_fw_direction(g, x, v), away]


def candidates_bpfw(aset, g, v):
    """Global step and the support-local pairwise swap."""
    x = aset.point
    a, z = aset.away_and_local_fw(g)
    vec = z - a
    swap = Direction(KIND_BPFW, vec, aset.max_step_for(PAIRWISE_SWAP, a),
                     float(g @ vec), payload=(a, z))
    return [_fw_direction(g, x, v), swap]


def candidates_ifw(poly, x, g, v=None):
    """Global, in-face away, and in-face pairwise candidates.

    The in-face candidates take their maximum steps from the polytope's
    ratio test; a degenerate direction (x already a vertex of its face)
    gets the conventional cap of 1.
    """
    g = np.asarray(g, dtype=float)
    if v is None:
        v = poly.lmo(g)
    fw = _fw_direction(g, x, v)
    # moving toward a vertex never exits before eta = 1, so snap roundoff
    oracle = poly.max_step(x, fw.vec)
    if np.isfinite(oracle) and abs(oracle - 1.0) <= 1e-9:
        oracle = 1.0
    fw.eta_max = 1.0 if not np.isfinite(oracle) else min(oracle, 1.0)

    a = poly.in_face_lmo(x, -g)
    z = poly.in_face_lmo(x, g)
    out = [fw]
    for kind, vec, payload in ((KIND_IN_AWAY, x - a, a), (KIND_IN_BPFW, z - a, (a, z))):
        eta = poly.max_step(x, vec)
        if not np.isfinite(eta):
            eta = 1.0
        out.append(Direction(kind, vec, float(eta), float(g @ vec), payload=payload))
    return out


def pairwise_direction(poly, x, g):
    """The in-face pairwise direction d = v - a used by the integer-step solver."""
    g = np.asarray(g, dtype=float)
    v = poly.lmo(g)
    a = poly.in_face_lmo(x, -g)
    vec = v - a
    return Direction(KIND_PW, vec, np.inf, float(g @ vec), payload=(a, v))


def select(cands):
    """Most-negative inner product wins; exact ties prefer the global step."""
    if not cands:
        raise ValueError("select: no candidates")
    return min(cands, key=lambda d: (d.inner, _TIE_ORDER[d.kind]))
