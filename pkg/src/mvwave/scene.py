"""Wireframe test objects as sets of voxels on the (cell, cell, plane) grid.

Plane 0 is the screen plane and has no reference pattern, so segments
are walked in raw integer coordinates and any step landing on ``k == 0``
is dropped. The number of dropped steps is kept on the result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import ConfigurationError, FormatError
from .reffun import DisplayConfig

__all__ = [
    "VoxelSet",
    "EdgeList",
    "walk_segment_3d",
    "rasterize_segment_3d",
    "cube_diagonals",
    "TetrahedronGeometry",
    "tetrahedron_geometry",
    "tetrahedron_edges",
    "from_edge_list",
    "parse_object",
    "read_object",
]

log = logging.getLogger(__name__)

Point = tuple[int, int, int]


@dataclass(frozen=True)
class VoxelSet:
    """Voxels as ``(cx, cy, k)`` triples inside a ``lateral_cells`` extent."""

    voxels: frozenset[Point]
    lateral_cells: tuple[int, int]
    skipped_screen_plane: int = 0

    def __post_init__(self):
        voxels = frozenset((int(x), int(y), int(k)) for x, y, k in self.voxels)
        nx, ny = self.lateral_cells
        for x, y, k in voxels:
            if k == 0:
                raise ConfigurationError(f"voxel {(x, y, k)} lies in plane 0")
            if not (0 <= x < nx and 0 <= y < ny):
                raise ConfigurationError(f"voxel {(x, y, k)} outside lateral extent {nx}x{ny}")
        object.__setattr__(self, "voxels", voxels)
        object.__setattr__(self, "lateral_cells", (int(nx), int(ny)))

    @classmethod
    def from_points(cls, points: Iterable[Point], lateral_cells=None, skipped: int = 0):
        points = [tuple(p) for p in points]
        if lateral_cells is None:
            nx = max((p[0] for p in points), default=-1) + 1
            ny = max((p[1] for p in points), default=-1) + 1
            lateral_cells = (nx, ny)
        return cls(frozenset(points), lateral_cells, skipped)

    def __len__(self):
        return len(self.voxels)

    def __iter__(self):
        return iter(sorted(self.voxels))

    def __contains__(self, item):
        return tuple(item) in self.voxels

    def union(self, other: "VoxelSet") -> "VoxelSet":
        lateral = (
            max(self.lateral_cells[0], other.lateral_cells[0]),
            max(self.lateral_cells[1], other.lateral_cells[1]),
        )
        return VoxelSet(
            self.voxels | other.voxels,
            lateral,
            self.skipped_screen_plane + other.skipped_screen_plane,
        )

    def planes(self) -> list[int]:
        return sorted({k for _, _, k in self.voxels})

    def in_plane(self, k: int) -> list[Point]:
        return sorted(v for v in self.voxels if v[2] == k)

    def bounding_box(self):
        """``((xmin, xmax), (ymin, ymax), (kmin, kmax))`` or None when empty."""
        if not self.voxels:
            return None
        xs, ys, ks = zip(*self.voxels)
        return (min(xs), max(xs)), (min(ys), max(ys)), (min(ks), max(ks))


@dataclass(frozen=True)
class EdgeList:
    vertices: list[Point]
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.vertices)
        for i, j in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise FormatError(f"edge ({i}, {j}) references a missing vertex (have {n})")
            if i == j:
                raise FormatError(f"edge ({i}, {j}) is a self-loop")


def _round_toward(num: int, den: int, toward_up: bool) -> int:
    """``num / den`` rounded to nearest, exact halves resolved in one direction."""
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and toward_up):
        return q + 1
    return q


def walk_segment_3d(a: Point, b: Point) -> list[Point]:
    """Bresenham walk between two integer points, both ends included.

    The endpoints are sorted first so the walk does not depend on the
    argument order; ties on the minor axes round toward the second
    (larger) endpoint. Plane 0 is *not* removed here.
    """
    p, q = sorted([tuple(map(int, a)), tuple(map(int, b))])
    delta = [q[i] - p[i] for i in range(3)]
    n = max(abs(d) for d in delta)
    if n == 0:
        return [p]
    return [
        tuple(p[i] + _round_toward(delta[i] * t, n, delta[i] > 0) for i in range(3))
        for t in range(n + 1)
    ]


def rasterize_segment_3d(a: Point, b: Point, lateral_cells=None) -> VoxelSet:
    walk = walk_segment_3d(a, b)
    kept = [v for v in walk if v[2] != 0]
    skipped = len(walk) - len(kept)
    if skipped:
        log.debug("segment %s-%s: dropped %d screen-plane step(s)", a, b, skipped)
    for v in (tuple(a), tuple(b)):
        if v[2] == 0:
            raise ConfigurationError(f"segment endpoint {v} lies in plane 0")
    return VoxelSet.from_points(kept, lateral_cells, skipped)


def cube_diagonals(size: int = 8, cfg: DisplayConfig | None = None) -> VoxelSet:
    """The four space diagonals of a ``size``-cube.

    Depth runs over ``-size/2 .. -1, 1 .. size/2``. The raw depth span is one
    longer than the lateral span, and the extra step is exactly the dropped
    plane 0, so every diagonal visits each lateral step and each plane once.
    """
    cfg = cfg or DisplayConfig()
    if size < 2 or size % 2:
        raise ConfigurationError(f"cube size must be even and >= 2, got {size}")
    half = size // 2
    if half > cfg.max_abs_plane:
        raise ConfigurationError(f"cube size {size} needs |k| up to {half} > max_abs_plane")
    m = size - 1
    corners = [((0, 0), (m, m)), ((m, 0), (0, m)), ((0, m), (m, 0)), ((m, m), (0, 0))]
    out = VoxelSet(frozenset(), (size, size))
    for (x0, y0), (x1, y1) in corners:
        out = out.union(rasterize_segment_3d((x0, y0, -half), (x1, y1, half), (size, size)))
    return out


@dataclass(frozen=True)
class TetrahedronGeometry:
    """Vertex placement of the tetrahedron test object.

    ``base`` holds three vertices in the deepest plane, ``apex`` one vertex
    in the shallowest plane, ``markers`` isolated points. ``lower_left`` is
    the index of the base vertex at cell ``(0, 0)``. "Lower-left" follows
    the plotting convention with the y axis pointing up, so on the pixel
    array (rows growing downward) this corner is the first row and column.
    """

    extent: int
    base: tuple[Point, Point, Point]
    apex: Point
    markers: tuple[Point, ...]
    lower_left: int = 0

    @property
    def vertices(self) -> list[Point]:
        return [*self.base, self.apex]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]

    def lower_left_edge(self) -> tuple[Point, Point]:
        return self.base[self.lower_left], self.apex


def tetrahedron_geometry(extent: int = 40, deep: int = -5, shallow: int = 4) -> TetrahedronGeometry:
    """Default tetrahedron: base triangle in plane ``deep``, apex above the center.

    Two base vertices occupy the corners of the ``y = 0`` side, the third
    sits mid-way along the opposite side, and the apex is over the lateral
    center. Both "middle" coordinates are the floor of the true center
    ``(extent - 1) / 2``. The two corners left free by the base carry the
    marker points, also in plane ``deep``.
    """
    m = extent - 1
    mid = m // 2
    base = ((0, 0, deep), (m, 0, deep), (mid, m, deep))
    apex = (mid, mid, shallow)
    markers = ((0, m, deep), (m, m, deep))
    return TetrahedronGeometry(extent, base, apex, markers, lower_left=0)


def tetrahedron_edges(cfg: DisplayConfig | None = None, geometry: TetrahedronGeometry | None = None) -> VoxelSet:
    cfg = cfg or DisplayConfig()
    geometry = geometry or tetrahedron_geometry()
    deepest = max(abs(v[2]) for v in [*geometry.vertices, *geometry.markers])
    if deepest > cfg.max_abs_plane:
        raise ConfigurationError(f"tetrahedron needs |k| up to {deepest} > max_abs_plane={cfg.max_abs_plane}")
    edges = EdgeList([*geometry.vertices, *geometry.markers], geometry.edges)
    shape = from_edge_list(edges)
    return VoxelSet(shape.voxels, (geometry.extent, geometry.extent), shape.skipped_screen_plane)


def from_edge_list(e: EdgeList) -> VoxelSet:
    """Union of all rasterized edges plus every vertex (isolated ones included)."""
    for v in e.vertices:
        if v[2] == 0:
            raise FormatError(f"vertex {v} lies in plane 0")
        if v[0] < 0 or v[1] < 0:
            raise FormatError(f"vertex {v} has a negative lateral coordinate")
    points = set(map(tuple, e.vertices))
    skipped = 0
    for i, j in e.edges:
        seg = rasterize_segment_3d(e.vertices[i], e.vertices[j])
        points |= seg.voxels
        skipped += seg.skipped_screen_plane
    return VoxelSet.from_points(points, skipped=skipped)


def parse_object(text: str, source: str = "<string>") -> EdgeList:
    """Parse ``v cx cy k`` / ``e i j`` records; vertex indices are 0-based."""
    vertices: list[Point] = []
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *fields = line.split()
        try:
            nums = [int(f) for f in fields]
        except ValueError:
            raise FormatError(f"{source}:{lineno}: non-integer field in {raw!r}") from None
        if tag == "v" and len(nums) == 3:
            vertices.append(tuple(nums))
        elif tag == "e" and len(nums) == 2:
            edges.append(tuple(nums))
        else:
            raise FormatError(f"{source}:{lineno}: unrecognized record {raw!r}")
    if not vertices:
        raise FormatError(f"{source}: no vertices")
    return EdgeList(vertices, edges)


def read_object(path) -> EdgeList:
    path = Path(path)
    return parse_object(path.read_text(), str(path))
