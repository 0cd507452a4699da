"""Triangle meshes of parametric surfaces and plain-text emission.

OBJ files carry chart coordinates. Floats are written with ``repr`` (shortest
round-trip form, at most 17 significant digits) so output is byte-stable.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import revolution as rev
from .oracle import ParametricSurface


@dataclass
class TriMesh:
    vertices: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray = None
    name: str = "mesh"

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if self.boundary is None:
            self.boundary = np.zeros(len(self.vertices), dtype=bool)
        self.boundary = np.asarray(self.boundary, dtype=bool)

    def __len__(self):
        return len(self.vertices)

    def edges(self) -> np.ndarray:
        e = np.concatenate([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]],
                            self.triangles[:, [2, 0]]])
        return np.sort(e, axis=1)

    def boundary_edges(self) -> np.ndarray:
        """Edges with exactly one incident triangle."""
        e, counts = np.unique(self.edges(), axis=0, return_counts=True)
        return e[counts == 1]

    def open_vertices(self) -> np.ndarray:
        """Mask of vertices on the topological boundary (marked or cut)."""
        mask = np.zeros(len(self.vertices), dtype=bool)
        mask[self.boundary_edges().ravel()] = True
        return mask

    def triangle_areas(self) -> np.ndarray:
        a, b, c = (self.vertices[self.triangles[:, k]] for k in range(3))
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)

    def max_edge_length(self) -> float:
        e = self.edges()
        return float(np.max(np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]], axis=1)))

    def validate(self):
        """Raise ``ValueError`` unless the mesh satisfies its invariants."""
        n = len(self.vertices)
        if self.boundary.shape != (n,):
            raise ValueError("boundary markers must have one flag per vertex")
        if len(self.triangles) and (self.triangles.min() < 0 or self.triangles.max() >= n):
            raise ValueError("triangle index out of range")
        if len(self.triangles) and np.any(self.triangle_areas() <= 0):
            raise ValueError("zero-area triangle")
        if np.any(self.boundary & ~self.open_vertices()):
            raise ValueError("a marked boundary vertex is not on a boundary edge")
        return self

    def translated(self, offset) -> "TriMesh":
        return TriMesh(self.vertices + np.asarray(offset, float), self.triangles.copy(),
                       self.boundary.copy(), self.name)


@dataclass
class FieldTable:
    columns: list
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.columns = list(self.columns)
        self.rows = [list(r) for r in self.rows]
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row of length {len(r)} in a table of {len(self.columns)} columns")

    @classmethod
    def from_arrays(cls, columns, *arrays):
        arrays = [np.ravel(np.asarray(a)) for a in arrays]
        return cls(columns, [list(r) for r in zip(*arrays)])


# -- construction -------------------------------------------------------------------


def _grid_triangles(n_u: int, n_v: int, periodic_v: bool) -> np.ndarray:
    cols = n_v if periodic_v else n_v - 1
    i, j = np.meshgrid(np.arange(n_u - 1), np.arange(cols), indexing="ij")
    i, j = i.ravel(), j.ravel()
    jn = (j + 1) % n_v
    a = i * n_v + j
    b = i * n_v + jn
    c = (i + 1) * n_v + j
    d = (i + 1) * n_v + jn
    return np.concatenate([np.stack([a, c, b], 1), np.stack([b, c, d], 1)])


def mesh_parametric(srf: ParametricSurface, resolution=(32, 32), u_range=None, v_range=None,
                    mark=("u_min", "u_max", "v_min", "v_max"), u_samples=None) -> TriMesh:
    """Structured grid over the parameter rectangle.

    Periodic ``v`` is welded: no duplicated seam column. ``mark`` lists the
    rectangle sides whose vertices get a boundary flag.
    """
    n_u, n_v = resolution
    periodic = srf.v_periodic
    if n_u < 2 or n_v < (3 if periodic else 2):
        raise ValueError("resolution too small")
    u_lo, u_hi = u_range or srf.u_range
    v_lo, v_hi = v_range or srf.v_range
    u = np.asarray(u_samples, float) if u_samples is not None else np.linspace(u_lo, u_hi, n_u)
    n_u = len(u)
    v = np.linspace(v_lo, v_hi, n_v, endpoint=not periodic)
    U, V = np.meshgrid(u, v, indexing="ij")
    verts = srf(U, V).reshape(-1, 3)
    flags = np.zeros((n_u, n_v), dtype=bool)
    if "u_min" in mark:
        flags[0, :] = True
    if "u_max" in mark:
        flags[-1, :] = True
    if not periodic:
        if "v_min" in mark:
            flags[:, 0] = True
        if "v_max" in mark:
            flags[:, -1] = True
    return TriMesh(verts, _grid_triangles(n_u, n_v, periodic), flags.ravel(), srf.name)


def arc_length_samples(m: rev.Meridian, t_range, n: int, dense: int = 4096) -> np.ndarray:
    """``n`` values of ``t`` equally spaced in chart arc length of ``(t, r(t))``."""
    t = np.linspace(t_range[0], t_range[1], dense)
    r = np.asarray(m.r(t), float)
    s = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(t), np.diff(r)))])
    out = np.interp(np.linspace(0.0, s[-1], n), s, t)
    out[0], out[-1] = t_range
    return out


def mesh_revolution(m: rev.Meridian, t_range, resolution=(32, 64), spacing="uniform") -> TriMesh:
    """Mesh of ``(t, phi) -> (-r sin phi, t, r cos phi)``; the first ring is the boundary.

    ``spacing`` is ``"uniform"`` in ``t`` or ``"arc"`` (equal meridian arc
    length, better for fast-growing profiles).
    """
    from .oracle import revolution_surface

    n_t, n_phi = resolution
    if n_t < 2 or n_phi < 3:
        raise ValueError("need at least 2 t-samples and 3 phi-samples")
    m.check_domain(np.asarray(t_range, float))
    if spacing == "uniform":
        ts = np.linspace(t_range[0], t_range[1], n_t)
    elif spacing == "arc":
        ts = arc_length_samples(m, t_range, n_t)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    srf = revolution_surface(m, tuple(t_range))
    return mesh_parametric(srf, (n_t, n_phi), mark=("u_min",), u_samples=ts)


# -- emission -------------------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def emit_obj(mesh: TriMesh) -> bytes:
    """Wavefront OBJ with ``v`` and 1-based ``f`` records."""
    out = io.StringIO()
    out.write(f"# {mesh.name}\n")
    for x, y, z in mesh.vertices:
        out.write(f"v {fmt(x)} {fmt(y)} {fmt(z)}\n")
    for a, b, c in mesh.triangles + 1:
        out.write(f"f {a} {b} {c}\n")
    return out.getvalue().encode("ascii")


def read_obj(data: bytes | str) -> TriMesh:
    """Minimal reader for the ``v``/``f`` subset written by :func:`emit_obj`."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    verts, faces = [], []
    for line in data.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return TriMesh(np.array(verts).reshape(-1, 3), np.array(faces, dtype=np.int64).reshape(-1, 3))


def emit_csv(table: FieldTable) -> bytes:
    """CSV with a mandatory header row and ``\\n``-terminated records."""
    lines = [",".join(table.columns)]
    lines += [",".join(fmt(x) for x in row) for row in table.rows]
    return ("\n".join(lines) + "\n").encode("ascii")


def emit_report(report) -> str:
    """``key: value`` lines from a mapping (or anything with ``as_dict``)."""
    items = report.as_dict() if hasattr(report, "as_dict") else dict(report)
    return "".join(f"{k}: {fmt(v)}\n" for k, v in items.items())
