"""Polytope representations and the oracle layer used by all solvers.

Every polytope carries an inequality description {x : A x = b, D x >= e}
plus, where available, closed-form shortcuts for the linear minimization
oracle, in-face minimization, maximum feasible step, and vertex enumeration.

Conventions shared across the package:

* all points are 1-d float numpy arrays,
* inequality rows within EPS_BIND of equality count as binding,
* LMO ties break toward the lowest vertex index (vertex lists keep a fixed
  deterministic order),
* max_step returns ``inf`` for directions of norm below EPS_DIRECTION, and
  callers that need a finite cap replace it by 1.0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._hulls import hull_hform

EPS_BIND = 1e-9
EPS_DIRECTION = 1e-14
ETA_CAP = 1e6
V_MAX = 64
FACE_LATTICE_MAX = 4096
_BASIS_ENUM_CAP = 200_000


class PolytopeError(ValueError):
    """Invalid polytope data or an oracle precondition violation."""


class VertexCapExceeded(PolytopeError):
    """Vertex enumeration would exceed the configured cap."""


def _as_matrix(M, n):
    if M is None:
        return np.zeros((0, n))
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return np.zeros((0, n))
    if M.shape[1] != n:
        raise PolytopeError(f"expected {n} columns, got {M.shape[1]}")
    return M


def _as_vector(v, k):
    if v is None:
        return np.zeros(0)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if v.size != k:
        raise PolytopeError(f"expected length {k}, got {v.size}")
    return v


@dataclass(frozen=True)
class Face:
    """A face of a polytope, identified by its binding inequality rows."""

    binding: frozenset
    dim: int

    def __contains__(self, row):
        return row in self.binding


class Polytope:
    """Bounded polytope with equality rows A x = b and inequalities D x >= e.

    The base class implements every oracle generically from the inequality
    description and a cached vertex list; structured subclasses override the
    hot paths with closed forms.
    """

    def __init__(self, A=None, b=None, D=None, e=None, n=None, name="polytope"):
        if n is None:
            for M in (D, A):
                if M is not None:
                    n = np.atleast_2d(np.asarray(M, dtype=float)).shape[1]
                    break
        if n is None:
            raise PolytopeError("cannot infer the ambient dimension")
        self.n = int(n)
        self.A = _as_matrix(A, self.n)
        self.b = _as_vector(b, self.A.shape[0])
        self.D = _as_matrix(D, self.n)
        self.e = _as_vector(e, self.D.shape[0])
        self.name = name
        self._vertices = None
        self._dim = None

    # -- description ---------------------------------------------------

    def hform(self):
        """The (A, b, D, e) inequality description."""
        return self.A, self.b, self.D, self.e

    def dim(self):
        """Dimension of the polytope (affine dimension of its vertex set)."""
        if self._dim is None:
            V = self.enumerate_vertices()
            if len(V) == 1:
                self._dim = 0
            else:
                R = np.asarray(V) - V[0]
                s = np.linalg.svd(R, compute_uv=False)
                self._dim = int(np.sum(s > 1e-9 * max(1.0, s[0])))
        return self._dim

    def diameter(self):
        V = np.asarray(self.enumerate_vertices())
        d2 = np.sum((V[:, None, :] - V[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    # -- membership and faces -------------------------------------------

    def contains(self, x, tol=1e-8):
        x = np.asarray(x, dtype=float)
        if self.A.size and np.abs(self.A @ x - self.b).max() > tol:
            return False
        if self.D.size and (self.D @ x - self.e).min() < -tol:
            return False
        return True

    def binding_rows(self, x, eps=EPS_BIND):
        """Boolean mask of inequality rows binding at x."""
        if not self.D.size:
            return np.zeros(0, dtype=bool)
        return self.D @ np.asarray(x, dtype=float) - self.e <= eps

    def minimal_face(self, x, eps=EPS_BIND):
        """Smallest face of the polytope containing x."""
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise PolytopeError("minimal_face: point is not in the polytope")
        binding = frozenset(int(i) for i in np.flatnonzero(self.binding_rows(x, eps)))
        return Face(binding, self.face_dim(binding))

    def face_dim(self, binding):
        rows = [self.A] if self.A.size else []
        idx = sorted(binding)
        if idx:
            rows.append(self.D[idx])
        if not rows:
            return self.n
        M = np.vstack(rows)
        s = np.linalg.svd(M, compute_uv=False)
        return self.n - int(np.sum(s > 1e-9 * max(1.0, s[0])))

    def face_vertex_index(self, binding, eps=EPS_BIND):
        """Indices of the polytope vertices lying on the given face."""
        V = np.asarray(self.enumerate_vertices())
        idx = sorted(binding)
        if not idx:
            return list(range(len(V)))
        ok = np.all(V @ self.D[idx].T - self.e[idx] <= eps, axis=1)
        return [int(i) for i in np.flatnonzero(ok)]

    def face_vertices(self, face, eps=EPS_BIND):
        binding = face.binding if isinstance(face, Face) else frozenset(face)
        V = self.enumerate_vertices()
        return [V[i] for i in self.face_vertex_index(binding, eps)]

    def is_vertex(self, x, eps=EPS_BIND):
        return self.contains(x) and self.minimal_face(x, eps).dim == 0

    # -- oracles ---------------------------------------------------------

    def lmo(self, g):
        """A vertex minimizing <g, v>; ties break to the lowest index."""
        V = np.asarray(self.enumerate_vertices())
        return V[int(np.argmin(V @ np.asarray(g, dtype=float)))].copy()

    def in_face_lmo(self, x, g):
        """A vertex of the minimal face of x minimizing <g, v>."""
        face = self.minimal_face(x)
        idx = self.face_vertex_index(face.binding)
        if not idx:
            raise PolytopeError("in_face_lmo: face has no vertices")
        V = np.asarray(self.enumerate_vertices())[idx]
        return V[int(np.argmin(V @ np.asarray(g, dtype=float)))].copy()

    def max_step(self, x, d):
        """Largest eta >= 0 with x + eta*d still in the polytope.

        Ratio test over the inequality rows.  Directions must stay in the
        affine hull (A d = 0); near-zero directions give ``inf``.
        """
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        nd = np.linalg.norm(d)
        if nd < EPS_DIRECTION:
            return np.inf
        if self.A.size and np.abs(self.A @ d).max() > 1e-8 * max(1.0, nd):
            raise PolytopeError("max_step: direction leaves the affine hull")
        if not self.D.size:
            return np.inf
        slack = self.D @ x - self.e
        rate = self.D @ d
        shrink = rate < -EPS_DIRECTION * max(1.0, nd)
        if not shrink.any():
            return np.inf
        ratios = slack[shrink] / (-rate[shrink])
        return float(max(ratios.min(), 0.0))

    # -- vertices ---------------------------------------------------------

    def enumerate_vertices(self, cap=V_MAX):
        """All vertices, in a fixed deterministic order (cached)."""
        if self._vertices is None:
            self._vertices = self._enumerate_vertices_impl(cap)
        if len(self._vertices) > cap:
            raise VertexCapExceeded(
                f"{self.name}: {len(self._vertices)} vertices exceed cap {cap}"
            )
        return self._vertices

    def _enumerate_vertices_impl(self, cap):
        m = np.linalg.matrix_rank(self.A) if self.A.size else 0
        k = self.D.shape[0]
        need = self.n - m
        if need < 0:
            raise PolytopeError("over-determined equality system")
        from math import comb

        if comb(k, need) > _BASIS_ENUM_CAP:
            raise VertexCapExceeded(
                f"{self.name}: basis enumeration over {comb(k, need)} subsets refused"
            )
        seen = {}
        for subset in itertools.combinations(range(k), need):
            M = np.vstack([self.A, self.D[list(subset)]]) if self.A.size else self.D[list(subset)]
            rhs = np.concatenate([self.b, self.e[list(subset)]])
            if M.shape[0] != self.n or np.linalg.matrix_rank(M) < self.n:
                continue
            try:
                x = np.linalg.solve(M, rhs)
            except np.linalg.LinAlgError:
                continue
            if self.contains(x, tol=1e-8):
                key = tuple(np.round(x, 9) + 0.0)
                if key not in seen:
                    seen[key] = x
        verts = sorted(seen.values(), key=lambda v: tuple(np.round(v, 12)))
        if not verts:
            raise PolytopeError(f"{self.name}: no vertices found (empty polytope?)")
        return verts

    def initial_vertex(self):
        """Deterministic starting vertex for the solvers."""
        return self.lmo(np.ones(self.n))

    def sample_point(self, rng):
        """Random point of the polytope (Dirichlet mix of the vertices)."""
        V = np.asarray(self.enumerate_vertices())
        return rng.dirichlet(np.ones(len(V))) @ V

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r} n={self.n}>"


class Simplex(Polytope):
    """Probability simplex {x >= 0, sum(x) = 1} in R^n."""

    def __init__(self, n, name=None):
        if n < 1:
            raise PolytopeError("simplex needs n >= 1")
        super().__init__(
            A=np.ones((1, n)), b=[1.0], D=np.eye(n), e=np.zeros(n),
            n=n, name=name or f"simplex{n}",
        )

    def lmo(self, g):
        v = np.zeros(self.n)
        v[int(np.argmin(np.asarray(g, dtype=float)))] = 1.0
        return v

    def in_face_lmo(self, x, g):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise PolytopeError("in_face_lmo: point is not in the polytope")
        free = np.flatnonzero(x > EPS_BIND)
        g = np.asarray(g, dtype=float)
        v = np.zeros(self.n)
        v[free[int(np.argmin(g[free]))]] = 1.0
        return v

    def _enumerate_vertices_impl(self, cap):
        return [np.eye(self.n)[i] for i in range(self.n)]

    def diameter(self):
        return float(np.sqrt(2.0)) if self.n > 1 else 0.0

    def dim(self):
        return self.n - 1


class Box(Polytope):
    """Axis-aligned box {lo <= x <= hi}."""

    def __init__(self, lo, hi, name=None):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape or (hi <= lo).any():
            raise PolytopeError("box needs lo < hi componentwise")
        n = lo.size
        super().__init__(
            D=np.vstack([np.eye(n), -np.eye(n)]),
            e=np.concatenate([lo, -hi]),
            n=n, name=name or f"box{n}",
        )
        self.lo, self.hi = lo, hi

    def lmo(self, g):
        g = np.asarray(g, dtype=float)
        # ties (g_i == 0) go to the lower bound: lexicographically smallest
        return np.where(g < 0, self.hi, self.lo).astype(float)

    def in_face_lmo(self, x, g):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise PolytopeError("in_face_lmo: point is not in the polytope")
        g = np.asarray(g, dtype=float)
        v = np.where(g < 0, self.hi, self.lo).astype(float)
        at_lo = x - self.lo <= EPS_BIND
        at_hi = self.hi - x <= EPS_BIND
        v[at_lo] = self.lo[at_lo]
        v[at_hi] = self.hi[at_hi]
        return v

    def _enumerate_vertices_impl(self, cap):
        if 2**self.n > max(cap, V_MAX):
            raise VertexCapExceeded(f"box{self.n} has {2**self.n} vertices")
        corners = [
            np.where(np.array(bits), self.hi, self.lo).astype(float)
            for bits in itertools.product([0, 1], repeat=self.n)
        ]
        return sorted(corners, key=lambda v: tuple(np.round(v, 12)))

    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))

    def dim(self):
        return self.n

    def sample_point(self, rng):
        return rng.uniform(self.lo, self.hi)


class L1Ball(Polytope):
    """Cross-polytope {||x||_1 <= r}.

    The facet description has 2^n rows, so it is only materialized for small
    n; the oracles below use closed forms that work in any dimension.
    """

    _HFORM_MAX_N = 12

    def __init__(self, n, radius=1.0, name=None):
        if radius <= 0:
            raise PolytopeError("l1 ball needs radius > 0")
        if n <= self._HFORM_MAX_N:
            signs = np.array(list(itertools.product([1.0, -1.0], repeat=n)))
            D, e = -signs, np.full(2**n, -radius)
        else:
            D, e = None, None
        super().__init__(D=D, e=e, n=n, name=name or f"l1ball{n}")
        self.radius = float(radius)

    def contains(self, x, tol=1e-8):
        return float(np.abs(np.asarray(x, dtype=float)).sum()) <= self.radius + tol

    def lmo(self, g):
        g = np.asarray(g, dtype=float)
        vals = np.concatenate([self.radius * g, -self.radius * g])
        i = int(np.argmin(vals))
        v = np.zeros(self.n)
        v[i % self.n] = self.radius if i < self.n else -self.radius
        return v

    def in_face_lmo(self, x, g):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise PolytopeError("in_face_lmo: point is not in the polytope")
        if np.abs(x).sum() < self.radius - EPS_BIND:
            return self.lmo(g)
        g = np.asarray(g, dtype=float)
        support = np.flatnonzero(np.abs(x) > EPS_BIND)
        vals = np.sign(x[support]) * self.radius * g[support]
        i = support[int(np.argmin(vals))]
        v = np.zeros(self.n)
        v[i] = np.sign(x[i]) * self.radius
        return v

    def max_step(self, x, d):
        """Exact breakpoint walk of the piecewise-linear map eta -> ||x + eta d||_1."""
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        if np.linalg.norm(d) < EPS_DIRECTION:
            return np.inf

        def phi(eta):
            return float(np.abs(x + eta * d).sum())

        breaks = sorted({float(-xi / di) for xi, di in zip(x, d)
                         if abs(di) > EPS_DIRECTION and -xi / di > 0})
        eta_prev, phi_prev = 0.0, phi(0.0)
        for eta_b in breaks + [breaks[-1] + 1.0 if breaks else 1.0]:
            phi_b = phi(eta_b)
            if phi_b > self.radius + 1e-15:
                slope = (phi_b - phi_prev) / (eta_b - eta_prev)
                return eta_prev + max(self.radius - phi_prev, 0.0) / slope
            eta_prev, phi_prev = eta_b, phi_b
        tail = float(np.abs(d).sum())
        return eta_prev + max(self.radius - phi_prev, 0.0) / tail

    def _enumerate_vertices_impl(self, cap):
        out = []
        for i in range(self.n):
            v = np.zeros(self.n)
            v[i] = self.radius
            out.append(v.copy())
            v[i] = -self.radius
            out.append(v.copy())
        return out

    def diameter(self):
        return 2.0 * self.radius

    def dim(self):
        return self.n


class VRepPolytope(Polytope):
    """Polytope given by an explicit vertex list (order preserved)."""

    def __init__(self, vertices, name="vrep"):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.shape[0] < 1:
            raise PolytopeError("vrep needs at least one point")
        hf = hull_hform(V)
        if len(hf.vertex_index) != V.shape[0]:
            inner = sorted(set(range(V.shape[0])) - set(hf.vertex_index))
            raise PolytopeError(
                f"vrep: points at indices {inner} are convex combinations of the others"
            )
        super().__init__(A=hf.A, b=hf.b, D=hf.D, e=hf.e, n=V.shape[1], name=name)
        self._vertices = [V[i].copy() for i in range(V.shape[0])]


class StdFormPolytope(Polytope):
    """Standard-form polytope {x : A x = b, x >= 0}."""

    def __init__(self, A, b, name="stdform", check_bounded=True):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        m, n = A.shape
        if np.linalg.matrix_rank(A) < m:
            raise PolytopeError("stdform: A must have full row rank")
        super().__init__(A=A, b=b, D=np.eye(n), e=np.zeros(n), n=n, name=name)
        self.m = m
        if check_bounded and self._has_recession_direction():
            raise PolytopeError("stdform: feasible region is unbounded")

    def _has_recession_direction(self):
        # nonzero d >= 0 with A d = 0 certifies unboundedness
        from scipy.optimize import linprog

        res = linprog(
            c=-np.ones(self.n),
            A_eq=self.A, b_eq=np.zeros(self.m),
            bounds=[(0.0, 1.0)] * self.n,
            method="highs",
        )
        return res.status == 0 and -res.fun > 1e-9

    def lmo(self, g):
        V = np.asarray(self.enumerate_vertices())
        return V[int(np.argmin(V @ np.asarray(g, dtype=float)))].copy()

    def in_face_lmo(self, x, g):
        """LMO of the sub-polytope with the zero coordinates of x pinned."""
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise PolytopeError("in_face_lmo: point is not in the polytope")
        fixed = x <= EPS_BIND
        V = np.asarray(self.enumerate_vertices())
        ok = np.flatnonzero(np.all(V[:, fixed] <= EPS_BIND, axis=1))
        if ok.size == 0:
            raise PolytopeError("in_face_lmo: face has no vertices")
        sub = V[ok]
        return sub[int(np.argmin(sub @ np.asarray(g, dtype=float)))].copy()

    def _enumerate_vertices_impl(self, cap):
        from math import comb

        if comb(self.n, self.m) > _BASIS_ENUM_CAP:
            raise VertexCapExceeded(
                f"{self.name}: basis enumeration over {comb(self.n, self.m)} bases refused"
            )
        seen = {}
        for cols in itertools.combinations(range(self.n), self.m):
            B = self.A[:, cols]
            if np.linalg.matrix_rank(B) < self.m:
                continue
            try:
                xb = np.linalg.solve(B, self.b)
            except np.linalg.LinAlgError:
                continue
            if xb.min() < -1e-9:
                continue
            x = np.zeros(self.n)
            x[list(cols)] = np.maximum(xb, 0.0)
            key = tuple(np.round(x, 9) + 0.0)
            if key not in seen:
                seen[key] = x
        verts = sorted(seen.values(), key=lambda v: tuple(np.round(v, 12)))
        if not verts:
            raise PolytopeError(f"{self.name}: empty feasible region")
        return verts

    def is_simplex_like(self, tol=1e-9):
        """True when every vertex has 0/1 coordinates."""
        V = np.asarray(self.enumerate_vertices())
        return bool(np.all(np.minimum(np.abs(V), np.abs(V - 1.0)) <= tol))


class HFormPolytope(Polytope):
    """General bounded polytope {x : A x = b, D x >= e}."""

    def __init__(self, A=None, b=None, D=None, e=None, name="hform", validate=True):
        super().__init__(A=A, b=b, D=D, e=e, name=name)
        if not self.D.size:
            raise PolytopeError("hform needs at least one inequality row")
        rows = np.vstack([self.A, self.D]) if self.A.size else self.D
        if np.linalg.matrix_rank(rows) < self.n:
            raise PolytopeError("hform: lineality space is nontrivial (unbounded)")
        if validate:
            self._validate_rows()

    def _validate_rows(self):
        V = np.asarray(self.enumerate_vertices())
        slack = V @ self.D.T - self.e  # (num_vertices, k)
        never_binding = np.flatnonzero(slack.min(axis=0) > EPS_BIND)
        always_binding = np.flatnonzero(slack.max(axis=0) <= EPS_BIND)
        if never_binding.size:
            raise PolytopeError(
                f"hform rows {never_binding.tolist()} are never binding (redundant)"
            )
        if always_binding.size:
            raise PolytopeError(
                f"hform rows {always_binding.tolist()} are implicit equalities"
            )


def simplex_like_cube(n, name=None):
    """The cube [0,1]^n in standard form via slack variables (0/1 vertices)."""
    A = np.hstack([np.eye(n), np.eye(n)])
    b = np.ones(n)
    return StdFormPolytope(A, b, name=name or f"cube{n}_std")


# -- file format -----------------------------------------------------------


def _tokens(path):
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                yield line.split()


def load_polytope(path):
    """Read a polytope from a small keyword text format.

    The first non-comment line names the kind (simplex, box, l1ball, vrep,
    stdform, hform); following lines carry the payload, one keyword per line.
    See the README for the grammar.
    """
    rows = list(_tokens(path))
    if not rows:
        raise PolytopeError(f"{path}: empty polytope file")
    kind, *head = rows[0]
    body = rows[1:]

    def collect(key):
        return [list(map(float, r[1:])) for r in body if r[0] == key]

    def scalar(key, default=None):
        vals = collect(key)
        if not vals:
            if default is None:
                raise PolytopeError(f"{path}: missing '{key}'")
            return default
        return vals[0][0]

    if kind == "simplex":
        n = int(head[0]) if head else int(scalar("n"))
        return Simplex(n)
    if kind == "box":
        lo, hi = collect("lo"), collect("hi")
        if lo and hi:
            return Box(lo[0], hi[0])
        n = int(head[0]) if head else int(scalar("n"))
        return Box(np.zeros(n), np.ones(n))
    if kind == "l1ball":
        n = int(head[0]) if head else int(scalar("n"))
        r = float(head[1]) if len(head) > 1 else scalar("radius", 1.0)
        return L1Ball(n, r)
    if kind == "vrep":
        V = collect("v")
        if not V:
            raise PolytopeError(f"{path}: vrep needs 'v' rows")
        return VRepPolytope(V)
    if kind == "stdform":
        A, b = collect("A"), collect("b")
        if not A or not b:
            raise PolytopeError(f"{path}: stdform needs 'A' rows and a 'b' row")
        return StdFormPolytope(A, np.ravel(b))
    if kind == "hform":
        A, b = collect("A"), collect("b")
        D, e = collect("D"), collect("e")
        if not D or not e:
            raise PolytopeError(f"{path}: hform needs 'D' rows and an 'e' row")
        return HFormPolytope(
            A=A or None, b=np.ravel(b) if b else None, D=D, e=np.ravel(e)
        )
    raise PolytopeError(f"{path}: unknown polytope kind {kind!r}")
