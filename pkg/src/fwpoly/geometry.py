"""Affine-invariant distances and facial geometry of polytopes.

Three point-to-optimum distances drive the convergence analysis:

* radial: how far x must travel past y before leaving the polytope,
* vertex: the worst case over supports S of x of writing y - x as a
  scaled difference gamma * (v - u) with v in C and u in conv(S),
* face: the same with u restricted to the minimal face of x.

They always satisfy face <= vertex <= radial <= 1 and vanish only at y = x.

The facial distances of a face F are the inner one (min over subfaces G of
the distance from G to the hull of the remaining vertices) and the outer one
(min over disjoint face pairs).  Both admit computable lower bounds from the
per-row slack profile sigma; those bounds and the resulting error-bound
certificates live here too.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ._hulls import hull_distance, hull_hform, project_to_hull
from .polytope import (
    EPS_BIND,
    FACE_LATTICE_MAX,
    Face,
    Polytope,
    PolytopeError,
    StdFormPolytope,
)

VERTEX_DIST_VMAX = 16
SUPPORT_MARGIN = 1e-10


# -- norms -------------------------------------------------------------------


def _norm(v, name):
    if name == "l2":
        return float(np.linalg.norm(v))
    if name == "l1":
        return float(np.abs(v).sum())
    if name == "linf":
        return float(np.abs(v).max()) if np.size(v) else 0.0
    raise ValueError(f"unknown norm {name!r}")


_DUAL = {"l1": "linf", "l2": "l2", "linf": "l1"}


def dual_norm(v, name):
    return _norm(v, _DUAL[name])


# -- point distances ----------------------------------------------------------


def _check_pair(poly, y, x):
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if not poly.contains(x, tol=1e-8) or not poly.contains(y, tol=1e-8):
        raise PolytopeError("distance: both points must lie in the polytope")
    return y, x


def radial_distance(poly, y, x):
    """Reciprocal of the ray-shoot factor from x through y.

    Equals 1 whenever y is a vertex distinct from x, and 0 only at y = x.
    """
    y, x = _check_pair(poly, y, x)
    w = y - x
    if np.linalg.norm(w) < 1e-14:
        return 0.0
    t = poly.max_step(x, w)
    if not np.isfinite(t):
        raise PolytopeError("radial_distance: unbounded ray (invalid polytope)")
    return min(1.0, 1.0 / max(t, 1.0))


def _difference_gauge(poly, inner_points):
    """Gauge function of K = C - conv(inner_points), as a callable on w.

    K contains the origin, so gauge(w) = 1 / max{t : t*w in K}, computed by
    one exact ratio test against the facet description of K (the hull of the
    pairwise differences of vertices).
    """
    V = np.asarray(poly.enumerate_vertices())
    U = np.atleast_2d(np.asarray(inner_points, dtype=float))
    diffs = (V[:, None, :] - U[None, :, :]).reshape(-1, poly.n)
    hf = hull_hform(diffs)

    def gauge(w):
        w = np.asarray(w, dtype=float)
        nw = np.linalg.norm(w)
        if nw < 1e-14:
            return 0.0
        if not hf.D.size:
            return 0.0  # K is a point: only reachable with w = 0
        rate = hf.D @ w
        slack = -hf.e  # slack of the origin
        shrink = rate < -1e-12 * nw
        if not shrink.any():
            return 0.0
        t = float((np.maximum(slack[shrink], 0.0) / (-rate[shrink])).min())
        # callers guarantee w = y - x with y in C, so t >= 1 up to roundoff
        return min(1.0, 1.0 / max(t, 1.0))

    return gauge


def face_distance(poly, y, x):
    """Gauge of y - x with respect to C minus the minimal face of x."""
    y, x = _check_pair(poly, y, x)
    if np.linalg.norm(y - x) < 1e-14:
        return 0.0
    U = poly.face_vertices(poly.minimal_face(x))
    return _difference_gauge(poly, U)(y - x)


def minimal_supports(poly, x, margin=SUPPORT_MARGIN):
    """Inclusion-minimal vertex supports that represent x with positive weights.

    Minimal supports are affinely independent, so they have at most dim+1
    vertices and their barycentric coordinates are unique: one least-squares
    solve per candidate subset decides membership.
    """
    V = np.asarray(poly.enumerate_vertices(cap=VERTEX_DIST_VMAX))
    x = np.asarray(x, dtype=float)
    scale = max(1.0, float(np.abs(V).max()))
    found = []
    for size in range(1, poly.dim() + 2):
        for S in itertools.combinations(range(len(V)), size):
            if any(set(m) <= set(S) for m in found):
                continue
            M = np.vstack([V[list(S)].T, np.ones(size)])
            rhs = np.concatenate([x, [1.0]])
            lam, *_ = np.linalg.lstsq(M, rhs, rcond=None)
            if np.linalg.matrix_rank(M) < size:
                continue
            if np.linalg.norm(M @ lam - rhs) > 1e-9 * scale:
                continue
            if lam.min() >= margin:
                found.append(S)
    if not found:
        raise PolytopeError("minimal_supports: the point has no vertex support")
    return found


def vertex_distance(poly, y, x):
    """Worst-case scaled-difference distance over the supports of x.

    The maximum over all supports equals the maximum over inclusion-minimal
    ones, because enlarging the support can only shrink the inner gauge.
    """
    y, x = _check_pair(poly, y, x)
    w = y - x
    if np.linalg.norm(w) < 1e-14:
        return 0.0
    V = np.asarray(poly.enumerate_vertices(cap=VERTEX_DIST_VMAX))
    best = 0.0
    for S in minimal_supports(poly, x):
        best = max(best, _difference_gauge(poly, V[list(S)])(w))
    return best


def gauge_by_bisection(poly, inner_points, w, width=1e-12, member_tol=1e-10):
    """Reference gauge evaluation: bisection on gamma with hull-membership checks.

    Slow but independent of the facet description; used to cross-check
    the ratio-test path.
    """
    V = np.asarray(poly.enumerate_vertices())
    U = np.atleast_2d(np.asarray(inner_points, dtype=float))
    diffs = (V[:, None, :] - U[None, :, :]).reshape(-1, poly.n)
    w = np.asarray(w, dtype=float)
    if np.linalg.norm(w) < 1e-14:
        return 0.0
    scale = max(1.0, float(np.abs(diffs).max()))

    def feasible(gamma):
        dist, _ = project_to_hull(diffs, w / gamma)
        return dist <= member_tol * scale

    lo, hi = 0.0, 1.0
    if not feasible(1.0):
        raise PolytopeError("gauge_by_bisection: gamma = 1 must be feasible")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


# -- face lattice --------------------------------------------------------------


@dataclass(frozen=True)
class LatticeFace:
    """A nonempty face, as the set of polytope-vertex indices it contains."""

    vset: frozenset
    dim: int


def _affine_dim(points):
    P = np.atleast_2d(points)
    if P.shape[0] <= 1:
        return 0
    s = np.linalg.svd(P - P[0], compute_uv=False)
    return int(np.sum(s > 1e-9 * max(1.0, s[0])))


def face_lattice(poly, max_faces=FACE_LATTICE_MAX):
    """All nonempty faces of the polytope, from facet-vertex incidence.

    Every face is an intersection of facets, so closing the full vertex set
    under single-facet intersections enumerates the lattice.
    """
    V = np.asarray(poly.enumerate_vertices())
    if not poly.D.size:
        raise PolytopeError("face_lattice needs an inequality description")
    slack = V @ poly.D.T - poly.e
    incidence = [frozenset(np.flatnonzero(slack[:, i] <= EPS_BIND).tolist())
                 for i in range(poly.D.shape[0])]
    full = frozenset(range(len(V)))
    seen = {full}
    queue = [full]
    while queue:
        fset = queue.pop()
        for inc in incidence:
            child = fset & inc
            if child and child not in seen:
                if len(seen) >= max_faces:
                    raise PolytopeError(f"face lattice exceeds {max_faces} faces")
                seen.add(child)
                queue.append(child)
    ordered = sorted(seen, key=lambda s: (len(s), tuple(sorted(s))))
    return [LatticeFace(s, _affine_dim(V[sorted(s)])) for s in ordered]


def face_vertex_set(poly, face):
    """Normalize a face argument to a frozenset of vertex indices.

    Accepts a Face (binding rows), an iterable of vertex indices, or a
    LatticeFace.
    """
    if isinstance(face, LatticeFace):
        return face.vset
    if isinstance(face, Face):
        return frozenset(poly.face_vertex_index(face.binding))
    return frozenset(int(i) for i in face)


def binding_rows_of_vset(poly, vset):
    """Rows binding on every vertex of the face (its canonical binding set)."""
    V = np.asarray(poly.enumerate_vertices())
    idx = sorted(vset)
    slack = V[idx] @ poly.D.T - poly.e
    return frozenset(np.flatnonzero(np.all(slack <= EPS_BIND, axis=0)).tolist())


def minimal_face_of_set(poly, points):
    """Smallest face of the polytope containing all the given points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    binding = None
    for p in points:
        rows = frozenset(np.flatnonzero(poly.binding_rows(p)).tolist())
        binding = rows if binding is None else (binding & rows)
    return Face(binding, poly.face_dim(binding))


# -- facial distances ----------------------------------------------------------


def inner_facial_distance(poly, face, lattice=None):
    """Min over subfaces G of dist(G, hull of the vertices outside G).

    For F = C this is the pyramidal width of the vertex set; for proper F
    every subface of F competes.
    """
    V = np.asarray(poly.enumerate_vertices())
    lattice = lattice if lattice is not None else face_lattice(poly)
    fset = face_vertex_set(poly, face)
    full = frozenset(range(len(V)))
    best = np.inf
    for G in lattice:
        if G.vset <= fset and G.vset != full:
            rest = sorted(full - G.vset)
            best = min(best, hull_distance(V[sorted(G.vset)], V[rest]))
    if not np.isfinite(best):
        raise PolytopeError("inner_facial_distance: no admissible subface")
    return float(best)


def outer_facial_distance(poly, face, lattice=None):
    """Min distance between a face of F and a disjoint face of C.

    Faces are disjoint exactly when they share no vertex, so the pair scan
    runs on vertex sets.
    """
    lattice = lattice if lattice is not None else face_lattice(poly)
    V = np.asarray(poly.enumerate_vertices())
    fset = face_vertex_set(poly, face)
    subs = [G for G in lattice if G.vset <= fset]
    best = np.inf
    for G in subs:
        for H in lattice:
            if not (G.vset & H.vset):
                best = min(best, hull_distance(V[sorted(G.vset)], V[sorted(H.vset)]))
    if not np.isfinite(best):
        raise PolytopeError("outer_facial_distance: no disjoint face pair")
    return float(best)


# -- slack profile and lower bounds ---------------------------------------------


def sigma_profile(poly):
    """Per-row minimal strictly positive slack over the vertices."""
    V = np.asarray(poly.enumerate_vertices())
    if not poly.D.size:
        raise PolytopeError("sigma_profile needs inequality rows")
    slack = V @ poly.D.T - poly.e
    sigma = np.empty(poly.D.shape[0])
    for i in range(sigma.size):
        strict = slack[:, i] > EPS_BIND
        if not strict.any():
            raise PolytopeError(f"sigma_profile: row {i} binds every vertex")
        sigma[i] = slack[strict, i].min()
    return sigma


def independent_binding_sets(poly, binding, cap=20000):
    """Maximal linearly independent subsets of the binding rows."""
    idx = sorted(binding)
    if not idx:
        raise PolytopeError("independent_binding_sets: empty binding set")
    Dsub = poly.D[idx]
    r = np.linalg.matrix_rank(Dsub)
    if comb(len(idx), r) > cap:
        raise PolytopeError("independent_binding_sets: too many subsets")
    out = []
    for S in itertools.combinations(idx, r):
        if np.linalg.matrix_rank(poly.D[list(S)]) == r:
            out.append(tuple(S))
    return out


def facial_lower_bound(poly, face, other=None, norm="l2", sigma=None):
    """Slack-profile lower bound on facial distances.

    With ``other`` omitted: a lower bound on the distance from the face to
    the hull of the vertices outside it.  With ``other`` given: a lower
    bound on the distance between the two (disjoint) faces.
    """
    sigma = sigma_profile(poly) if sigma is None else sigma
    fset = face_vertex_set(poly, face)
    I_F = binding_rows_of_vset(poly, fset)
    if other is None:
        return _one_sided_bound(poly, I_F, frozenset(), sigma, norm)
    gset = face_vertex_set(poly, other)
    if fset & gset:
        raise PolytopeError("facial_lower_bound: faces must be disjoint")
    I_G = binding_rows_of_vset(poly, gset)
    return max(
        _one_sided_bound(poly, I_F, I_G, sigma, norm),
        _one_sided_bound(poly, I_G, I_F, sigma, norm),
    )


def _one_sided_bound(poly, binding, exclude, sigma, norm):
    best = 0.0
    for I in independent_binding_sets(poly, binding):
        rows = [i for i in I if i not in exclude]
        if not rows:
            continue
        combo = (poly.D[rows] / sigma[rows, None]).sum(axis=0)
        denom = dual_norm(combo, norm)
        if denom > 0:
            best = max(best, 1.0 / denom)
    return best


def phi_lower_bound(poly, face, norm="l2", sigma=None, lattice=None):
    """Corollary-level lower bound on the inner facial distance.

    The inner facial distance minimizes over subfaces of F, so its bound
    does too: min over proper subfaces G of F of the slack-profile bound on
    dist(G, hull of the other vertices).  facial_lower_bound alone bounds
    only the distance for F itself, which can exceed the inner distance.
    """
    sigma = sigma_profile(poly) if sigma is None else sigma
    lattice = lattice if lattice is not None else face_lattice(poly)
    fset = face_vertex_set(poly, face)
    full = frozenset(range(len(poly.enumerate_vertices())))
    best = np.inf
    for G in lattice:
        if G.vset <= fset and G.vset != full:
            I_G = binding_rows_of_vset(poly, G.vset)
            best = min(best, _one_sided_bound(poly, I_G, frozenset(), sigma, norm))
    if not np.isfinite(best):
        raise PolytopeError("phi_lower_bound: no admissible subface")
    return float(best)


def phi_lower_bound_std(poly, face, norm="l2", sigma=None):
    """Standard-form closed form of the face separation bound.

    Equals facial_lower_bound(poly, face): in standard form the binding
    rows are coordinate axes, so the one maximal independent row set is
    all of I_F.  Bounds the distance from the face to the hull of the
    remaining vertices.  Note the subface-minimized inner facial distance
    can sit below this value on faces of dimension >= 1 (a balanced
    vertex split of a large face separates less than the face itself);
    phi_lower_bound is the bound that tracks the inner distance.
    """
    if not isinstance(poly, StdFormPolytope):
        raise PolytopeError("phi_lower_bound_std needs a standard-form polytope")
    sigma = sigma_profile(poly) if sigma is None else sigma
    fset = face_vertex_set(poly, face)
    I_F = sorted(binding_rows_of_vset(poly, fset))
    if not I_F:
        raise PolytopeError("phi_lower_bound_std: face equals the polytope")
    v = np.zeros(poly.n)
    v[I_F] = 1.0 / sigma[I_F]
    return 1.0 / dual_norm(v, norm)


def phibar_lower_bound_std(poly, face, norm="l2", sigma=None):
    """Standard-form lower bound on the outer facial distance.

    The outer distance minimizes over pairs (G, H) with G a subface of F
    and H a face disjoint from G, so only terms uniform over those pairs
    are admissible.  Two survive the pairwise bound:

    - vertex term: any subface G binds at least the rows of one vertex of
      F, and shrinking a row set never shrinks the dual norm, so the worst
      single-vertex value min_{v in F} 1/||sigma^-1 on I_v||* undercuts
      every G-side bound;
    - complement term: H's binding rows outside I_G always include rows
      outside I_F (if they did not, G would satisfy all of H's bindings
      and sit inside H, contradicting disjointness), giving the uniform
      value 1/||sigma^-1 on the complement of I_F||*.

    For a vertex face both reduce to the familiar pair of closed forms.
    Taking 1/||sigma^-1 on I_F||* directly is NOT sound here for faces of
    dimension >= 1: on the five-vertex simplex facet {e0..e3} the split
    G={e0,e1,e2}, H={e3,e4} realizes distance sqrt(5/6) < 1.
    """
    if not isinstance(poly, StdFormPolytope):
        raise PolytopeError("phibar_lower_bound_std needs a standard-form polytope")
    sigma = sigma_profile(poly) if sigma is None else sigma
    fset = face_vertex_set(poly, face)
    vals = []
    vert_vals = []
    for j in sorted(fset):
        I_v = sorted(binding_rows_of_vset(poly, frozenset([j])))
        if not I_v:
            continue
        v = np.zeros(poly.n)
        v[I_v] = 1.0 / sigma[I_v]
        vert_vals.append(1.0 / dual_norm(v, norm))
    if vert_vals:
        vals.append(min(vert_vals))
    I_F = binding_rows_of_vset(poly, fset)
    comp = sorted(set(range(poly.n)) - set(I_F))
    if comp:
        v = np.zeros(poly.n)
        v[comp] = 1.0 / sigma[comp]
        vals.append(1.0 / dual_norm(v, norm))
    if not vals:
        raise PolytopeError("phibar_lower_bound_std: degenerate face")
    return max(vals)


# -- error-bound certificates -----------------------------------------------------


def relative_boundary_distance(poly, x):
    """Distance from x to the relative boundary, via per-facet slacks.

    Each inequality row is projected onto the tangent space of the affine
    hull; the minimum normalized slack is the exact distance for points in
    the relative interior.
    """
    x = np.asarray(x, dtype=float)
    if not poly.contains(x, tol=1e-8):
        raise PolytopeError("relative_boundary_distance: point outside polytope")
    if not poly.D.size:
        return np.inf
    if poly.A.size:
        _, _, Vt = np.linalg.svd(poly.A, full_matrices=True)
        m = np.linalg.matrix_rank(poly.A)
        Tan = Vt[m:].T  # n x (n-m) orthonormal tangent basis
    else:
        Tan = np.eye(poly.n)
    slack = poly.D @ x - poly.e
    best = np.inf
    for i in range(poly.D.shape[0]):
        norm_t = np.linalg.norm(poly.D[i] @ Tan)
        if norm_t > 1e-12:
            best = min(best, max(slack[i], 0.0) / norm_t)
    return float(best)


@dataclass
class ErrorBoundCert:
    """A Holder error bound (mu, theta) measured in one of the set distances."""

    mu: float
    theta: float
    kind: str
    detail: str = ""

    @property
    def valid(self):
        return self.mu > 0.0


def derive_error_bound(poly, mu, theta, xstar_points, kind, lattice=None):
    """Convert a norm error bound into a set-distance error bound.

    kind: "radial" (needs the optimum in the relative interior), "vertex"
    (scales by the inner facial distance of the optimal face), "face"
    (outer facial distance), or "simplex" (closed form for standard-form
    polytopes with 0/1 vertices).
    """
    pts = np.atleast_2d(np.asarray(xstar_points, dtype=float))
    if kind == "radial":
        d = min(relative_boundary_distance(poly, p) for p in pts)
        if d <= EPS_BIND:
            return ErrorBoundCert(0.0, theta, kind,
                                  "optimum touches the relative boundary")
        return ErrorBoundCert(mu * d ** (1.0 / theta), theta, kind,
                              f"boundary distance {d}")
    if kind in ("vertex", "face"):
        face = minimal_face_of_set(poly, pts)
        if kind == "vertex":
            phi = inner_facial_distance(poly, face, lattice)
        else:
            phi = outer_facial_distance(poly, face, lattice)
        return ErrorBoundCert(mu * phi ** (1.0 / theta), theta, kind,
                              f"facial distance {phi}")
    if kind == "simplex":
        if not (isinstance(poly, StdFormPolytope) and poly.is_simplex_like()):
            raise PolytopeError("simplex certificates need a 0/1 standard-form polytope")
        card = int(max(np.sum(p > EPS_BIND) for p in pts))
        if card == 0 or card >= poly.n:
            raise PolytopeError("simplex certificate: degenerate support size")
        expo = 1.0 / (2.0 * theta)
        val = max(mu / card**expo, mu / (poly.n - card) ** expo)
        return ErrorBoundCert(val, theta, kind, f"support size {card}")
    raise ValueError(f"unknown certificate kind {kind!r}")


def fit_holder_exponent(gaps, dists):
    """Least-squares fit of log(dist) = theta*log(gap) - theta*log(mu).

    Returns (mu_fit, theta_fit).  Needs at least 5 usable points and
    nonconstant gaps.
    """
    gaps = np.asarray(gaps, dtype=float)
    dists = np.asarray(dists, dtype=float)
    ok = (gaps > 0) & (dists > 0)
    if ok.sum() < 5:
        raise ValueError("fit_holder_exponent: need at least 5 usable points")
    lg, ld = np.log(gaps[ok]), np.log(dists[ok])
    if lg.max() - lg.min() < 1e-9:
        raise ValueError("fit_holder_exponent: gaps are constant")
    theta, intercept = np.polyfit(lg, ld, 1)
    if theta <= 0:
        raise ValueError("fit_holder_exponent: nonpositive fitted exponent")
    mu = float(np.exp(-intercept / theta))
    return mu, float(theta)


def estimate_theta(trace, poly, xstar_points, kind="radial"):
    """Fit (mu, theta) from a recorded run with known optimal points.

    The trace must have been recorded with points; distances from the
    optimum to each iterate are measured with the requested set distance.
    """
    pts = np.atleast_2d(np.asarray(xstar_points, dtype=float))
    dist_fn = {"radial": radial_distance, "vertex": vertex_distance,
               "face": face_distance}[kind]
    gaps, dists = [], []
    for rec in trace.records:
        if rec.x is None or rec.f_gap is None:
            continue
        gaps.append(rec.f_gap)
        dists.append(min(dist_fn(poly, p, rec.x) for p in pts))
    if len(gaps) < 5:
        raise ValueError("estimate_theta: trace needs points and at least 5 records")
    return fit_holder_exponent(np.asarray(gaps), np.asarray(dists))
