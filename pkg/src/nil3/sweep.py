"""A desk-scale version of the barrier sweep behind the half-space theorem.

A test surface ``S`` on one side of the vertical plane ``P = {y = 0}`` is
pushed ``epsilon`` towards ``P``; then a family of surfaces with boundary in
``P`` (Euclidean half catenoids, or the barriers ``M_c``) is swept from far
(``r = 1`` / ``c`` close to ``c0``) towards ``P``. We track the clearance
between ``S`` and each family member, bisect the first parameter where it
drops below ``delta`` and classify the contact as interior or boundary.

Clearance is the chart (coordinate Euclidean) distance between the two
triangle meshes, a proxy for the Riemannian distance on compact windows.
Only y- and z-translations are used as ambient isometries: the metric
coefficients depend on x alone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from scipy.spatial import cKDTree

from . import barrier as bar
from . import revolution as rev
from .core import AmbientParams
from .mesh import FieldTable, TriMesh, mesh_parametric, mesh_revolution
from .oracle import NumericDiffPolicy, ParametricSurface, catalog, numeric_mean_curvature, translate_y

FAMILIES = ("euclidean_catenoids", "heisenberg_barriers")
MINIMALITY_TOL = 1e-4
MINIMALITY_SAMPLES = 200
BISECTION_RTOL = 1e-3


class NonMinimalSurface(ValueError):
    def __init__(self, sup_h: float, tol: float):
        super().__init__(f"test surface is not minimal: sup |H| = {sup_h:.3e} >= {tol:g}")
        self.sup_h = sup_h


# -- distances --------------------------------------------------------------------------


def closest_points_on_triangles(p, a, b, c):
    """Closest points of triangles ``abc`` to points ``p`` (row-wise, vectorised)."""
    ab, ac, ap = b - a, c - a, p - a
    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = p - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = p - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    with np.errstate(divide="ignore", invalid="ignore"):
        denom = va + vb + vc
        v = vb / denom
        w = vc / denom
        out = a + ab * v[:, None] + ac * w[:, None]
        # edge regions
        t_ab = d1 / (d1 - d3)
        m = (vc <= 0) & (d1 >= 0) & (d3 <= 0)
        out[m] = a[m] + ab[m] * t_ab[m, None]
        t_ac = d2 / (d2 - d6)
        m = (vb <= 0) & (d2 >= 0) & (d6 <= 0)
        out[m] = a[m] + ac[m] * t_ac[m, None]
        t_bc = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        m = (va <= 0) & ((d4 - d3) >= 0) & ((d5 - d6) >= 0)
        out[m] = b[m] + (c - b)[m] * t_bc[m, None]
    # vertex regions last so they win ties
    m = (d1 <= 0) & (d2 <= 0)
    out[m] = a[m]
    m = (d3 >= 0) & (d4 <= d3)
    out[m] = b[m]
    m = (d6 >= 0) & (d5 <= d6)
    out[m] = c[m]
    return out


def _vertex_to_mesh(points: np.ndarray, mesh: TriMesh, chunk: int = 400_000):
    """Min over ``points`` of the distance to ``mesh``; returns ``(d, p, q)``."""
    verts = mesh.vertices
    tree = cKDTree(verts)
    dv, _ = tree.query(points)
    # every point of a triangle with longest edge l lies within l / sqrt(3)
    # of one of its vertices
    L = mesh.max_edge_length() / math.sqrt(3.0)
    upper = float(dv.min())
    keep = np.flatnonzero(dv - L <= upper + 1e-12)
    tri_of, starts = _incident(mesh)
    pi, ti = _pairs(tree, points[keep], np.minimum(dv[keep], upper) + L + 1e-12, tri_of, starts,
                    len(mesh.triangles))
    pi = keep[pi]
    if len(pi) == 0:
        return upper, None, None
    best = (math.inf, None, None)
    for s in range(0, len(pi), chunk):
        P = points[pi[s:s + chunk]]
        T = mesh.triangles[ti[s:s + chunk]]
        Q = closest_points_on_triangles(P, verts[T[:, 0]], verts[T[:, 1]], verts[T[:, 2]])
        d = np.linalg.norm(P - Q, axis=1)
        k = int(np.argmin(d))
        if d[k] < best[0]:
            best = (float(d[k]), P[k].copy(), Q[k].copy())
    return best


def _incident(mesh: TriMesh):
    """Vertex -> incident triangles as ``(tri_of, starts)`` CSR arrays."""
    flat = mesh.triangles.ravel()
    order = np.argsort(flat, kind="stable")
    return order // 3, np.searchsorted(flat[order], np.arange(len(mesh.vertices) + 1))


def _pairs(tree, centers, radii, tri_of, starts, n_tri):
    """Unique (query, triangle) pairs with a triangle vertex inside each query ball."""
    near = tree.query_ball_point(centers, radii)
    counts = np.fromiter((len(v) for v in near), dtype=np.int64, count=len(near))
    if counts.sum() == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    qi = np.repeat(np.arange(len(centers)), counts)
    vv = np.concatenate([np.asarray(v, dtype=np.int64) for v in near if len(v)])
    deg = starts[vv + 1] - starts[vv]
    qi = np.repeat(qi, deg)
    offs = np.arange(deg.sum()) - np.repeat(np.cumsum(deg) - deg, deg)
    ti = tri_of[np.repeat(starts[vv], deg) + offs]
    code = np.unique(qi * n_tri + ti)
    return code // n_tri, code % n_tri


def segments_cross_triangles(p, q, a, b, c, tol: float = 1e-12):
    """Row-wise segment/triangle intersection (Moller-Trumbore); returns ``(hit, point)``."""
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, h)
    ok = np.abs(det) > tol * np.linalg.norm(d, axis=1) * np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1)
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    s = p - a
    u = inv * np.einsum("ij,ij->i", s, h)
    qv = np.cross(s, e1)
    v = inv * np.einsum("ij,ij->i", d, qv)
    t = inv * np.einsum("ij,ij->i", e2, qv)
    hit = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t >= 0) & (t <= 1)
    return hit, p + d * t[:, None]


def _edge_crossing(A: TriMesh, B: TriMesh, dv_A: np.ndarray):
    """A point where an edge of ``A`` pierces a triangle of ``B``, or ``None``.

    ``dv_A`` are nearest-vertex distances from A's vertices to B: an edge can
    only cross B if both endpoints lie within ``|edge| + L`` of B's vertices.
    """
    edges = np.unique(A.edges(), axis=0)
    va, vb = A.vertices[edges[:, 0]], A.vertices[edges[:, 1]]
    length = np.linalg.norm(vb - va, axis=1)
    L = B.max_edge_length() / math.sqrt(3.0)
    keep = np.flatnonzero((dv_A[edges[:, 0]] <= length + L) & (dv_A[edges[:, 1]] <= length + L))
    if len(keep) == 0:
        return None
    tree = cKDTree(B.vertices)
    tri_of, starts = _incident(B)
    ei, ti = _pairs(tree, 0.5 * (va[keep] + vb[keep]), 0.5 * length[keep] + L + 1e-12, tri_of, starts,
                    len(B.triangles))
    if len(ei) == 0:
        return None
    T = B.triangles[ti]
    e = keep[ei]
    hit, x = segments_cross_triangles(va[e], vb[e], B.vertices[T[:, 0]], B.vertices[T[:, 1]],
                                      B.vertices[T[:, 2]])
    if not hit.any():
        return None
    # lowest edge index for determinism
    return x[np.flatnonzero(hit)[0]].copy()


def closest_pair(A: TriMesh, B: TriMesh):
    """Symmetrised vertex-to-triangle distance; returns ``(d, point_on_A, point_on_B)``.

    Meshes that cross (an edge of one pierces a triangle of the other) are at
    distance 0, with the piercing point returned twice.
    """
    if len(A) == 0 or len(B) == 0 or len(A.triangles) == 0 or len(B.triangles) == 0:
        raise ValueError("clearance needs two nonempty meshes")
    d1, pa, qb = _vertex_to_mesh(A.vertices, B)
    d2, pb, qa = _vertex_to_mesh(B.vertices, A)
    # a crossing edge puts both its endpoints within one edge length of the other mesh
    if 0 < min(d1, d2) <= A.max_edge_length() + B.max_edge_length():
        dvA, _ = cKDTree(B.vertices).query(A.vertices)
        x = _edge_crossing(A, B, dvA)
        if x is None:
            dvB, _ = cKDTree(A.vertices).query(B.vertices)
            x = _edge_crossing(B, A, dvB)
        if x is not None:
            return 0.0, x, x.copy()
    if d1 <= d2:
        return d1, pa, qb
    return d2, qa, pb


def clearance(S_mesh: TriMesh, M_mesh: TriMesh, metric_mode: str = "chart", plane_y=None) -> float:
    """Minimum distance between two meshes.

    ``chart`` is the coordinate Euclidean distance. ``plane_gap`` needs one of
    the meshes to be the vertical plane ``{y = plane_y}`` and returns the
    exact plane distance ``min |y - plane_y|`` over the other mesh.
    """
    if metric_mode == "chart":
        return closest_pair(S_mesh, M_mesh)[0]
    if metric_mode == "plane_gap":
        if plane_y is None:
            raise ValueError("plane_gap mode needs the y-value of a vertical plane")
        for mesh in (S_mesh, M_mesh):
            if not np.allclose(mesh.vertices[:, 1], plane_y, atol=1e-12):
                return float(np.min(np.abs(mesh.vertices[:, 1] - plane_y)))
        return 0.0
    raise ValueError(f"unknown metric_mode {metric_mode!r}")


# -- test surfaces -------------------------------------------------------------------


@dataclass
class TestSurface:
    """A surface on one side of ``{y = 0}``; ``side`` is +1 for ``y >= 0``, -1 for ``y <= 0``.

    ``shift`` is the y-translation applied since construction; the side
    condition applies to the unshifted surface.
    """

    __test__ = False

    mesh: TriMesh
    surface: ParametricSurface | None = None
    side: int = -1
    shift: float = 0.0

    def __post_init__(self):
        if self.side not in (1, -1):
            raise ValueError("side must be +1 or -1")
        y0 = self.mesh.vertices[:, 1] - self.shift
        if np.any(self.side * y0 < -1e-12):
            raise ValueError("test surface is not contained in its declared half-space")

    @classmethod
    def from_surface(cls, srf: ParametricSurface, resolution=(64, 64), side: int = -1,
                     **mesh_kw) -> "TestSurface":
        return cls(mesh_parametric(srf, resolution, **mesh_kw), srf, side)


def shift_toward_plane(S: TestSurface, eps: float) -> TestSurface:
    """Translate ``S`` by ``eps`` in y towards ``{y = 0}`` (an isometry)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    dy = -S.side * eps
    srf = translate_y(S.surface, dy) if S.surface is not None else None
    return TestSurface(S.mesh.translated((0.0, dy, 0.0)), srf, S.side, S.shift + dy)


def minimality_sup(srf: ParametricSurface, amb, n: int = MINIMALITY_SAMPLES, seed: int = 0,
                   policy: NumericDiffPolicy | None = None) -> float:
    """``sup |H|`` of the oracle over ``n`` seeded random parameter points."""
    policy = policy or NumericDiffPolicy()
    rng = np.random.default_rng(seed)
    pad = 3 * policy.h
    u = rng.uniform(srf.u_range[0] + pad, srf.u_range[1] - pad, n)
    v = rng.uniform(srf.v_range[0] + pad, srf.v_range[1] - pad, n)
    return float(np.max(np.abs(numeric_mean_curvature(srf, u, v, policy, amb))))


# -- configuration ------------------------------------------------------------------


def _parse_resolution(val):
    if isinstance(val, str):
        a, b = val.lower().split("x")
        return (int(a), int(b))
    return tuple(int(x) for x in val)


@dataclass
class SweepConfig:
    tau: float = 0.0
    family: str = "euclidean_catenoids"
    epsilon: float = 0.1
    count: int = 16
    spacing: str = "geometric"
    param_start: float | None = None
    param_end: float | None = None
    delta: float = 1e-3
    t_max: float = 5.0
    window: float = 4.5
    resolution: tuple = (96, 192)
    surface: str = "vertical_plane"
    surface_params: dict = field(default_factory=dict)
    surface_resolution: tuple = (96, 192)
    side: int = -1
    check_minimal: bool = True
    metric_mode: str = "chart"

    def __post_init__(self):
        self.tau = float(self.tau)
        AmbientParams(self.tau)
        self.resolution = _parse_resolution(self.resolution)
        self.surface_resolution = _parse_resolution(self.surface_resolution)
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.family == "euclidean_catenoids" and self.tau != 0:
            raise ValueError("Euclidean catenoids are only minimal for tau = 0")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.count < 2:
            raise ValueError("schedule needs at least 2 parameters")
        if self.spacing not in ("linear", "geometric"):
            raise ValueError("spacing must be linear or geometric")
        if self.metric_mode not in ("chart", "plane_gap"):
            raise ValueError("metric_mode must be chart or plane_gap")
        if self.side not in (1, -1):
            raise ValueError("side must be +1 or -1")
        if self.family == "euclidean_catenoids":
            self.param_start = 1.0 if self.param_start is None else float(self.param_start)
            self.param_end = 0.05 if self.param_end is None else float(self.param_end)
            for r in (self.param_start, self.param_end):
                if not 0 < r <= 1:
                    raise ValueError("catenoid necksizes must lie in (0, 1]")
        else:
            c0 = bar.c0(self.tau)
            self.param_start = 1.05 * c0 if self.param_start is None else float(self.param_start)
            self.param_end = 16.0 * c0 if self.param_end is None else float(self.param_end)
            for c in (self.param_start, self.param_end):
                if not c > c0:
                    raise ValueError(f"barrier parameters must exceed c0 = {c0:g}")
        if not self.window > 0 or not self.t_max > 0:
            raise ValueError("window and t_max must be positive")

    def schedule(self) -> np.ndarray:
        """Parameters ordered from far (clear of S) to near the plane."""
        if self.spacing == "geometric":
            return np.geomspace(self.param_start, self.param_end, self.count)
        return np.linspace(self.param_start, self.param_end, self.count)

    @classmethod
    def from_mapping(cls, items: dict) -> "SweepConfig":
        known = {f.name: f for f in fields(cls)}
        kw, sparams = {}, {}
        for key, raw in items.items():
            key = key.strip().replace("-", "_")
            if key.startswith("surface_") and key not in known:
                sparams[key[len("surface_"):]] = float(raw)
                continue
            if key not in known:
                raise ValueError(f"unknown sweep config key {key!r}")
            kw[key] = _coerce(key, raw)
        if sparams:
            kw.setdefault("surface_params", {}).update(sparams)
        return cls(**kw)

    def as_dict(self) -> dict:
        d = asdict(self)
        sp = d.pop("surface_params")
        d["resolution"] = "x".join(map(str, self.resolution))
        d["surface_resolution"] = "x".join(map(str, self.surface_resolution))
        for k in sorted(sp):
            d[f"surface_{k}"] = sp[k]
        return d


def _coerce(key, raw):
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    if key in ("tau", "epsilon", "param_start", "param_end", "delta", "t_max", "window"):
        return float(raw)
    if key in ("count", "side"):
        return int(raw)
    if key == "check_minimal":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"check_minimal must be a boolean, got {raw!r}")
    return raw


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                k, v = line.split(sep, 1)
                out[k.strip()] = v.strip()
                break
        else:
            raise ValueError(f"line {n}: expected key = value")
    return out


def load_config(path) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        return SweepConfig.from_mapping(parse_config_text(fh.read()))


def build_test_surface(cfg: SweepConfig) -> TestSurface:
    """Catalog surface named in ``cfg`` meshed over the sweep window."""
    params = dict(cfg.surface_params)
    if cfg.surface == "vertical_plane":
        params.setdefault("half_width", cfg.window)
    srf = catalog(cfg.surface, params, cfg.tau)
    return TestSurface.from_surface(srf, cfg.surface_resolution, cfg.side)


# -- family ------------------------------------------------------------------------


def family_meridian(cfg: SweepConfig, param: float) -> rev.Meridian:
    if cfg.family == "euclidean_catenoids":
        return rev.catenoid_meridian(param)
    return bar.barrier_meridian(bar.BarrierParams(param, cfg.tau))


def family_truncation(cfg: SweepConfig, param: float) -> float:
    """Largest ``t`` kept in the mesh: inside the window cylinder and below ``t_max``."""
    R = cfg.window
    if cfg.family == "euclidean_catenoids":
        t_window = param * math.acosh(R / param) if R > param else 0.0
        t_cap = math.inf
    else:
        p = bar.BarrierParams(param, cfg.tau)
        t_window = bar.convergence_profile(p, R) or 0.0
        t_cap = bar.overflow_threshold(param)
    t = min(cfg.t_max, t_window, t_cap)
    if t <= 0:
        raise ValueError(f"window radius {R:g} does not reach beyond the boundary ring")
    return t


def family_mesh(cfg: SweepConfig, param: float) -> TriMesh:
    m = family_meridian(cfg, param)
    return mesh_revolution(m, (0.0, family_truncation(cfg, param)), cfg.resolution, spacing="arc")


# -- sweep ----------------------------------------------------------------------------


@dataclass
class ExhaustionResult:
    eps: float
    T: float
    params: list
    min_outside_distance: float
    passed: bool


def exhaustion_check(cfg: SweepConfig, param: float, eps: float, neighbors=None,
                     n_t: int = 64, n_phi: int = 32) -> ExhaustionResult:
    """Find ``K = {t <= T}`` outside of which the family member is ``> eps`` from ``{y=0}``.

    The same ``T`` is verified by sampling for ``param`` and its neighbours
    (adjacent schedule entries unless given).
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if neighbors is None:
        sched = cfg.schedule()
        k = int(np.argmin(np.abs(sched - param)))
        neighbors = [sched[j] for j in (k - 1, k + 1) if 0 <= j < len(sched) and sched[j] != param]
    params = [float(param)] + [float(q) for q in neighbors]
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)

    if cfg.family == "heisenberg_barriers":
        T = bar.clearance_threshold(bar.BarrierParams(param, cfg.tau), eps)
    else:
        m = family_meridian(cfg, param)
        ts = np.linspace(0.0, family_truncation(cfg, param), 4 * n_t)
        dist = bar.vertical_plane_distance(rev.immerse(m, ts[:, None], phi[None, :])).min(axis=1)
        # smallest sample beyond which every sample clears eps
        # first sample past the last one within eps
        bad = np.flatnonzero(dist <= eps)
        T = float(ts[min(bad[-1] + 1, len(ts) - 1)]) if len(bad) else float(ts[0])

    worst = math.inf
    for q in params:
        t_end = family_truncation(cfg, q)
        if t_end <= T:
            continue
        ts = np.linspace(T, t_end, n_t + 1)[1:]
        pts = rev.immerse(family_meridian(cfg, q), ts[:, None], phi[None, :])
        worst = min(worst, float(bar.vertical_plane_distance(pts).min()))
    return ExhaustionResult(float(eps), float(T), params, worst, bool(worst > eps))


@dataclass
class SweepReport:
    family: str
    tau: float
    epsilon: float
    delta: float
    metric_mode: str
    clearance_curve: list
    first_contact: float | None
    contact_point: tuple | None
    classification: str
    distance_to_barrier_boundary: float | None
    distance_to_barrier_cut: float | None
    distance_to_surface_boundary: float | None
    brackets: list
    bracket_ok: bool
    exhaustion: list
    plane_gap_curve: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = {
            "family": self.family,
            "tau": self.tau,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "metric_mode": self.metric_mode,
            "schedule_steps": len(self.clearance_curve),
            "min_clearance": min(c for _, c in self.clearance_curve),
            "first_contact": "none" if self.first_contact is None else self.first_contact,
            "classification": self.classification,
        }
        if self.contact_point is not None:
            d["contact_x"], d["contact_y"], d["contact_z"] = self.contact_point
            d["distance_to_barrier_boundary"] = self.distance_to_barrier_boundary
            d["distance_to_barrier_cut"] = self.distance_to_barrier_cut
            d["distance_to_surface_boundary"] = self.distance_to_surface_boundary
        d["bisection_steps"] = len(self.brackets)
        d["bracket_ok"] = self.bracket_ok
        for k, ex in enumerate(self.exhaustion):
            d[f"exhaustion_{k}_T"] = ex.T
            d[f"exhaustion_{k}_eps"] = ex.eps
            d[f"exhaustion_{k}_pass"] = ex.passed
        for k, note in enumerate(self.notes):
            d[f"note_{k}"] = note
        return d

    def clearance_table(self) -> FieldTable:
        return FieldTable(["parameter", "clearance"], [list(r) for r in self.clearance_curve])


def _boundary_distances(point, mesh: TriMesh):
    """Distances from ``point`` to marked boundary and to unmarked (cut) rims."""
    open_ = mesh.open_vertices()
    out = []
    for mask in (mesh.boundary, open_ & ~mesh.boundary):
        pts = mesh.vertices[mask]
        out.append(float(np.min(np.linalg.norm(pts - point, axis=1))) if len(pts) else math.inf)
    return out


def run_sweep(cfg: SweepConfig, S: TestSurface) -> SweepReport:
    """Shift ``S`` by ``epsilon``, sweep the family and locate the first contact."""
    notes = ["clearance uses chart distance, a proxy for Riemannian distance on the window"]
    if cfg.check_minimal:
        if S.surface is None:
            raise ValueError("minimality check needs a parametric test surface")
        sup_h = minimality_sup(S.surface, cfg.tau)
        if not sup_h < MINIMALITY_TOL:
            raise NonMinimalSurface(sup_h, MINIMALITY_TOL)

    S = shift_toward_plane(S, cfg.epsilon)
    plane_y = S.surface.info.get("plane_y") if S.surface is not None else None
    if plane_y is not None:
        plane_y = plane_y + S.shift

    cache = {}

    def measure(param):
        if param not in cache:
            M = family_mesh(cfg, param)
            d, pS, pM = closest_pair(S.mesh, M)
            gap = clearance(S.mesh, M, "plane_gap", plane_y) if plane_y is not None else None
            cache[param] = (d if cfg.metric_mode == "chart" or gap is None else gap, pS, pM, M, d, gap)
        return cache[param]

    curve, gaps = [], []
    hit = None
    for k, param in enumerate(cfg.schedule()):
        param = float(param)
        d, *_rest = measure(param)
        curve.append((param, d))
        chart_d, gap = _rest[3], _rest[4]
        if gap is not None:
            gaps.append((param, gap))
            if abs(gap - chart_d) > 0.1 * max(abs(gap), 1e-300):
                notes.append(f"chart {chart_d:.6g} and plane-gap {gap:.6g} differ by >10% at {param:.6g}")
        if d < cfg.delta:
            hit = k
            break

    brackets, bracket_ok = [], True
    first = None
    if hit is None:
        classification, point, dists = "none", None, (None, None, None)
        last = curve[-1][0]
    else:
        sched = [p for p, _ in curve]
        contact_side = sched[hit]
        if hit > 0:
            clear_side = sched[hit - 1]
            while abs(clear_side - contact_side) > BISECTION_RTOL * abs(contact_side):
                mid = 0.5 * (clear_side + contact_side)
                dm = measure(mid)[0]
                if dm < cfg.delta:
                    contact_side = mid
                else:
                    clear_side = mid
                dlo, dhi = measure(contact_side)[0], measure(clear_side)[0]
                ok = dlo < cfg.delta <= dhi
                bracket_ok &= ok
                brackets.append((clear_side, contact_side, dhi, dlo, ok))
        else:
            notes.append("contact already at the first schedule parameter; no bracket")
        first = contact_side
        d, pS, pM, M, _, _ = measure(contact_side)
        point = 0.5 * (pS + pM)
        dB, dCut = _boundary_distances(point, M)
        dS = min(_boundary_distances(point, S.mesh))
        classification = "interior" if min(dB, dCut, dS) > cfg.delta else "boundary"
        dists = (dB, dCut, dS)
        point = tuple(float(x) for x in point)
        last = contact_side

    exhaustion = [exhaustion_check(cfg, last, 2 * cfg.epsilon)]
    return SweepReport(
        family=cfg.family, tau=cfg.tau, epsilon=cfg.epsilon, delta=cfg.delta,
        metric_mode=cfg.metric_mode, clearance_curve=curve, first_contact=first,
        contact_point=point, classification=classification,
        distance_to_barrier_boundary=dists[0], distance_to_barrier_cut=dists[1],
        distance_to_surface_boundary=dists[2], brackets=brackets, bracket_ok=bool(bracket_ok),
        exhaustion=exhaustion, plane_gap_curve=gaps, notes=notes,
    )


def ridge_scenario(**overrides) -> tuple[SweepConfig, TestSurface]:
    """Barrier sweep (tau = 1/2) against a rotational ridge that pokes through ``{y=0}``.

    The ridge crest sits at ``y = -0.05`` before the ``epsilon = 0.2`` shift,
    so after it the crest is at ``y = 0.15`` over ``rho = 3``, where the
    descending barriers first touch it away from every boundary.
    """
    kw = dict(tau=0.5, family="heisenberg_barriers", epsilon=0.2, count=12, param_start=3.2,
              param_end=48.0, window=4.5, t_max=5.0, surface="ridge",
              surface_params={"height": -0.05, "rho0": 3.0, "curvature": 0.5, "half_width": 1.0},
              resolution=(96, 192), surface_resolution=(48, 192), side=-1, check_minimal=False)
    kw.update(overrides)
    cfg = SweepConfig(**kw)
    return cfg, build_test_surface(cfg)


def reflected_barrier_scenario(sigma: float | None = None, **overrides) -> tuple[SweepConfig, TestSurface]:
    """Barrier sweep (tau = 1/2) against ``M_5`` reflected through ``{y = sigma}``.

    The reflected surface lies in ``{y <= 2 sigma}`` and opens towards
    ``-y``; its boundary ring of radius ``exp(1/5)`` sits at ``y = 2 sigma``.
    The default ``sigma = -0.4 epsilon`` lifts that ring just above
    ``{y = 0}`` after the shift, centred over the axis of the barriers. The
    two trumpets open in opposite directions, so they first meet next to a
    boundary ring: this scenario yields boundary contact (or none), never
    interior contact. :func:`ridge_scenario` is the interior-contact case.
    """
    kw = dict(tau=0.5, family="heisenberg_barriers", epsilon=0.2, count=12, param_start=3.2,
              param_end=48.0, window=4.5, t_max=5.0, surface="reflected_barrier",
              resolution=(96, 192), surface_resolution=(48, 192), side=-1, check_minimal=False)
    kw.update(overrides)
    if sigma is None:
        sigma = -0.4 * kw["epsilon"]
    sp = {"c": 5.0, "sigma": float(sigma), "t_max": bar.profile_height(5.0, kw["window"])}
    sp.update(kw.pop("surface_params", {}))
    cfg = SweepConfig(surface_params=sp, **kw)
    return cfg, build_test_surface(cfg)
