"""Bowtie decomposition of a FAL projection and its triangulations.

Cutting the trivial mapping torus along the surface and bisecting every
crossing disc flattens the complement onto the projection surface: each
crossing circle contributes two shaded triangles (the bowtie) whose third
corner is the circle's ideal vertex, strand arcs collapse to ideal
vertices, and the complementary regions become white ideal polygons.

Ideal vertex sites are tagged tuples: ("arc", e) for the collapsed strand
arc of map edge e, ("beta", k) for circle k.  There are 2c arcs and c
circles, 3c sites in all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    DegenerateFace,
    GenusTooSmall,
    MalformedMap,
    NotCellular,
    WrongManifoldKind,
)
from .fal_diagram import CrossingCircle, FalDiagram
from .surface_map import CombinatorialMap, genus as map_genus, trace_faces

__all__ = [
    "V_TET",
    "BowtieDecomposition",
    "Nerve",
    "SurfaceTriangulation",
    "PrismTriangulation",
    "VolumeBounds",
    "decompose",
    "reglue",
    "build_nerve",
    "triangulate_white_faces",
    "prism_triangulation",
    "volume_bounds",
]

# Volume of the regular ideal hyperbolic tetrahedron, 3 * Lobachevsky(pi/3).
V_TET = 1.0149416064096536


# SideRef: (circle, half, side index, (corner walked from, corner walked to))
# Shaded triangle corners are numbered (0: beta, 1: u, 2: w); side i runs
# between corners i and i+1 mod 3.


@dataclass(frozen=True)
class ShadedTriangle:
    circle: int
    half: int  # 0: built on rotation slots 0,1; 1: on slots 2,3
    corners: tuple  # (("beta", k), ("arc", u), ("arc", w))


@dataclass(frozen=True)
class WhitePolygon:
    """Boundary walk: entry i holds an ideal vertex and the shaded-triangle
    side leading from it to the next entry's vertex."""

    entries: tuple


@dataclass(frozen=True)
class BowtieDecomposition:
    genus: int
    c: int
    white: tuple[WhitePolygon, ...]
    shaded: tuple[ShadedTriangle, ...]
    circle_slots: tuple[tuple, ...]  # per circle, the four arc ids in slot order
    half_twists: tuple[tuple[bool, int], ...]  # recorded and stripped flags
    chunk_count: int = 1

    @property
    def white_count(self) -> int:
        return len(self.white)

    @property
    def shaded_count(self) -> int:
        return len(self.shaded)

    def ideal_vertices(self) -> tuple:
        sites = {e for slots in self.circle_slots for e in slots}
        return tuple(sorted(("arc", e) for e in sites)) + tuple(
            ("beta", k) for k in range(self.c)
        )

    def ideal_vertex_incidences(self) -> dict:
        """Site -> list of (polygon index, position) where it appears."""
        incidences: dict = {}
        for p, poly in enumerate(self.white):
            for i, (site, _) in enumerate(poly.entries):
                incidences.setdefault(site, []).append((p, i))
        return incidences


def decompose(fal: FalDiagram) -> BowtieDecomposition:
    """The five cutting steps, done combinatorially.

    Half-twist flags are recorded and stripped; each circle splits into two
    shaded triangles hanging off its strand passages; strands collapse to
    ideal vertices; the map faces survive as the white polygons.
    """
    m = fal.map
    for v, kind in enumerate(fal.vertex_kind):
        if not isinstance(kind, CrossingCircle):
            raise MalformedMap(f"vertex {v} is not a crossing circle; augment first")
    try:
        if map_genus(m) != fal.genus:
            raise NotCellular(
                f"map genus {map_genus(m)} differs from declared genus {fal.genus}"
            )
    except MalformedMap as exc:
        raise NotCellular(str(exc))

    c = m.vertex_count
    arc = m.edge_of  # collapsed strand arcs, one per map edge

    shaded = []
    for k in range(c):
        rot = m.rotation[k]
        shaded.append(
            ShadedTriangle(k, 0, (("beta", k), ("arc", arc(rot[0])), ("arc", arc(rot[1]))))
        )
        shaded.append(
            ShadedTriangle(k, 1, (("beta", k), ("arc", arc(rot[2])), ("arc", arc(rot[3]))))
        )

    white = []
    for cycle in trace_faces(m).faces:
        entries = []
        for d in cycle:
            x = m.opposite[d]
            k = m.vertex_of(x)
            q = m.position_of(x)
            rot = m.rotation[k]
            if q == 0:
                entries.append((("arc", arc(rot[0])), (k, 0, 1, (1, 2))))
            elif q == 1:
                entries.append((("arc", arc(rot[1])), (k, 0, 2, (2, 0))))
                entries.append((("beta", k), (k, 1, 0, (0, 1))))
            elif q == 2:
                entries.append((("arc", arc(rot[2])), (k, 1, 1, (1, 2))))
            else:
                entries.append((("arc", arc(rot[3])), (k, 1, 2, (2, 0))))
                entries.append((("beta", k), (k, 0, 0, (0, 1))))
        white.append(WhitePolygon(tuple(entries)))

    # Every shaded side must border exactly one white polygon.
    used = [ref[:3] for poly in white for _, ref in poly.entries]
    assert len(used) == 6 * c and len(set(used)) == 6 * c

    decomposition = BowtieDecomposition(
        genus=fal.genus,
        c=c,
        white=tuple(white),
        shaded=tuple(shaded),
        circle_slots=tuple(tuple(arc(d) for d in m.rotation[k]) for k in range(c)),
        half_twists=tuple(
            (kind.half_twist, kind.half_twist_sign) for kind in fal.vertex_kind
        ),
    )
    assert decomposition.white_count == c + 2 - 2 * fal.genus
    return decomposition


def reglue(d: BowtieDecomposition) -> FalDiagram:
    """Rebuild the FAL by gluing the shaded faces back along the arcs and
    reapplying the recorded half-twists."""
    occurrences: dict = {}
    for k, slots in enumerate(d.circle_slots):
        for pos, e in enumerate(slots):
            occurrences.setdefault(e, []).append(4 * k + pos)
    opposite = {}
    for e, darts in occurrences.items():
        if len(darts) != 2:
            raise MalformedMap(f"arc {e} does not have exactly two circle slots")
        a, b = darts
        opposite[a] = b
        opposite[b] = a
    rotation = tuple(tuple(range(4 * k, 4 * k + 4)) for k in range(d.c))
    kinds = tuple(
        CrossingCircle(half_twist=ht, half_twist_sign=sign) for ht, sign in d.half_twists
    )
    return FalDiagram(CombinatorialMap(rotation, opposite), d.genus, kinds)


@dataclass(frozen=True)
class Nerve:
    node_count: int
    edges: tuple  # (site, (polygon, polygon))
    faces: tuple  # ((circle, half), (polygon, polygon, polygon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def chi(self) -> int:
        return self.node_count - self.edge_count + self.face_count


def build_nerve(d: BowtieDecomposition) -> Nerve:
    """One node per white polygon, one edge per ideal vertex site, one
    triangular face per shaded triangle."""
    side_owner = {}
    for p, poly in enumerate(d.white):
        for _, ref in poly.entries:
            side_owner[ref[:3]] = p
    incidences = d.ideal_vertex_incidences()
    edges = []
    for site in sorted(incidences):
        occ = incidences[site]
        assert len(occ) == 2, (site, occ)
        edges.append((site, (occ[0][0], occ[1][0])))
    faces = []
    for tri in d.shaded:
        nodes = tuple(side_owner[(tri.circle, tri.half, s)] for s in range(3))
        faces.append(((tri.circle, tri.half), nodes))
    nerve = Nerve(d.white_count, tuple(edges), tuple(faces))
    assert nerve.edge_count == 3 * d.c
    assert nerve.face_count == 2 * d.c
    return nerve


# -- boundary triangulation --------------------------------------------------


@dataclass(frozen=True)
class Triangle:
    corners: tuple  # three ideal vertex sites
    kind: str  # "shaded" or "fan"
    source: tuple  # (circle, half) or (polygon index, fan index)
    sides: tuple  # per side i (between corners i, i+1): (cell id, flipped)


@dataclass(frozen=True)
class SurfaceTriangulation:
    triangles: tuple[Triangle, ...]
    cells: tuple  # cell id -> (end0 site, end1 site)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)


def _rotate_to_canonical(entries):
    n = len(entries)
    best = None
    best_i = 0
    for i in range(n):
        key = tuple(entries[(i + j) % n][0] for j in range(n))
        if best is None or key < best:
            best = key
            best_i = i
    return tuple(entries[(best_i + j) % n] for j in range(n))


def triangulate_white_faces(d: BowtieDecomposition) -> SurfaceTriangulation:
    """Fan every white n-gon into n-2 ideal triangles and assemble the
    closed boundary surface (fans plus the 2c shaded triangles) with its
    1-cells identified."""
    cells: list = []

    def new_cell(end0, end1) -> int:
        cells.append((end0, end1))
        return len(cells) - 1

    shaded_sides: dict = {}  # (circle, half, side) -> (cell, flipped)
    triangles: list[Triangle] = []

    for p, poly in enumerate(d.white):
        entries = _rotate_to_canonical(poly.entries)
        n = len(entries)
        if n < 3:
            raise DegenerateFace(f"white face {p} has only {n} sides")
        verts = [site for site, _ in entries]
        boundary = []
        for j in range(n):
            cell = new_cell(verts[j], verts[(j + 1) % n])
            boundary.append(cell)
            # Shaded sides always walk end0 -> end1 in corner order.
            shaded_sides[entries[j][1][:3]] = (cell, False)
        diagonal = {i: new_cell(verts[0], verts[i]) for i in range(2, n - 1)}
        for i in range(1, n - 1):
            side0 = (boundary[0], False) if i == 1 else (diagonal[i], False)
            side1 = (boundary[i], False)
            side2 = (boundary[n - 1], False) if i == n - 2 else (diagonal[i + 1], True)
            triangles.append(
                Triangle(
                    corners=(verts[0], verts[i], verts[i + 1]),
                    kind="fan",
                    source=(p, i),
                    sides=(side0, side1, side2),
                )
            )

    for tri in d.shaded:
        triangles.append(
            Triangle(
                corners=tri.corners,
                kind="shaded",
                source=(tri.circle, tri.half),
                sides=tuple(shaded_sides[(tri.circle, tri.half, s)] for s in range(3)),
            )
        )

    out = SurfaceTriangulation(tuple(triangles), tuple(cells))
    assert out.triangle_count == 6 * d.c + 4 * d.genus - 4
    assert len(cells) == 9 * d.c + 6 * d.genus - 6
    # Closed surface: every cell used by exactly two triangle sides.
    use = {}
    for t in triangles:
        for cell, _ in t.sides:
            use[cell] = use.get(cell, 0) + 1
    assert all(v == 2 for v in use.values())
    return out


# -- prisms over the boundary ------------------------------------------------


def _side_end_corners(side_idx: int, flipped: bool) -> tuple[int, int]:
    """Corner positions matching cell ends (end0, end1) for a triangle side."""
    a, b = side_idx, (side_idx + 1) % 3
    return (b, a) if flipped else (a, b)


def _corner_order(tri: Triangle, tail_end: dict) -> Optional[tuple[int, int, int]]:
    """Linear order (lowest first) of the triangle's corner positions under
    the per-cell diagonal orientations, or None when cyclic."""
    wins = [0, 0, 0]
    for s, (cell, flipped) in enumerate(tri.sides):
        c0, c1 = _side_end_corners(s, flipped)
        tail_corner = c0 if tail_end[cell] == 0 else c1
        head_corner = c1 if tail_corner == c0 else c0
        wins[head_corner] += 1  # head is above tail
    if sorted(wins) != [0, 1, 2]:
        return None
    return tuple(sorted(range(3), key=lambda i: wins[i]))


def _orient_cells(surface: SurfaceTriangulation) -> dict:
    """Diagonal direction per cell: tail at the smaller ideal vertex site.

    Cells with equal endpoint sites are free; a deterministic backtracking
    pass orients them so every prism admits the staircase cut.  Triangles
    with at most one repeated corner are order-able for any choice, so only
    clusters of all-same-corner triangles ever constrain the search.
    """
    tail_end: dict = {}
    free = []
    for cid, (a, b) in enumerate(surface.cells):
        if a < b:
            tail_end[cid] = 0
        elif b < a:
            tail_end[cid] = 1
        else:
            free.append(cid)
            tail_end[cid] = 0

    def affected(cid):
        return [
            t
            for t in surface.triangles
            if any(cell == cid for cell, _ in t.sides)
        ]

    def ok(tris):
        return all(_corner_order(t, tail_end) is not None for t in tris)

    if ok(surface.triangles):
        return tail_end

    def solve(i: int) -> bool:
        if i == len(free):
            return ok(surface.triangles)
        cid = free[i]
        for bit in (0, 1):
            tail_end[cid] = bit
            candidates = [
                t
                for t in affected(cid)
                if all(tail_end.get(c) is not None for c, _ in t.sides)
            ]
            if ok(candidates) and solve(i + 1):
                return True
        tail_end[cid] = 0
        return False

    if not solve(0):
        raise MalformedMap("no diagonal orientation triangulates all prisms")
    return tail_end


# Tetrahedron slot labels within one prism, as (corner rank, level): rank 0
# is the lowest corner of the triangle's linear order.
_S1 = ((0, 0), (1, 0), (2, 0), (2, 1))
_S2 = ((0, 0), (1, 0), (1, 1), (2, 1))
_S3 = ((0, 0), (0, 1), (1, 1), (2, 1))
_TET_LABELS = (_S1, _S2, _S3)


@dataclass(frozen=True)
class VolumeBounds:
    v_tet: float
    lower: float
    upper: Optional[float]


@dataclass(frozen=True)
class PrismTriangulation:
    tetrahedron_count: int
    gluings: tuple  # per tet: four (neighbour, neighbour face, perm) entries

    def export_gluing_table(self) -> str:
        lines = []
        for tet, faces in enumerate(self.gluings):
            parts = []
            for nbr, face, perm in faces:
                parts.append(f"({nbr},{face},{''.join(map(str, perm))})")
            lines.append(f"{tet} : " + " ".join(parts))
        return "\n".join(lines) + "\n"


def _glue(table, tet_a, labels_a, tet_b, labels_b, label_map):
    """Record the mutual gluing of the faces of tet_a/tet_b spanned by the
    three matched labels; the off-face vertices pair with each other."""
    slot_b = {lab: i for i, lab in enumerate(labels_b)}
    perm = [None] * 4
    matched_a = set()
    for i, lab in enumerate(labels_a):
        if lab in label_map:
            perm[i] = slot_b[label_map[lab]]
            matched_a.add(i)
    (face_a,) = set(range(4)) - matched_a
    (face_b,) = set(range(4)) - set(perm[i] for i in matched_a)
    perm[face_a] = face_b
    inverse = [None] * 4
    for i, j in enumerate(perm):
        inverse[j] = i
    assert table[tet_a][face_a] is None and table[tet_b][face_b] is None
    table[tet_a][face_a] = (tet_b, face_b, tuple(perm))
    table[tet_b][face_b] = (tet_a, face_a, tuple(inverse))


def prism_triangulation(
    d: BowtieDecomposition, kind: str = "TrivialMappingTorus"
) -> PrismTriangulation:
    """Triangulate (surface) x S^1: one prism per boundary triangle, cut
    into three tetrahedra along the staircase of its side diagonals."""
    if kind != "TrivialMappingTorus":
        raise WrongManifoldKind(
            "prism triangulation is defined only for the trivial mapping torus"
        )
    surface = triangulate_white_faces(d)
    tail_end = _orient_cells(surface)

    order = []  # per triangle: rank -> corner position
    for tri in surface.triangles:
        ranked = _corner_order(tri, tail_end)
        assert ranked is not None
        order.append(ranked)

    n_tets = 3 * surface.triangle_count
    table = [[None] * 4 for _ in range(n_tets)]

    def tets_of(t):
        return (3 * t, 3 * t + 1, 3 * t + 2)

    # Within each prism: the two staircase cuts and the vertical S^1 gluing.
    for t in range(surface.triangle_count):
        s1, s2, s3 = tets_of(t)
        _glue(table, s1, _S1, s2, _S2, {(0, 0): (0, 0), (1, 0): (1, 0), (2, 1): (2, 1)})
        _glue(table, s2, _S2, s3, _S3, {(0, 0): (0, 0), (1, 1): (1, 1), (2, 1): (2, 1)})
        _glue(table, s3, _S3, s1, _S1, {(0, 1): (0, 0), (1, 1): (1, 0), (2, 1): (2, 0)})

    # Across each 1-cell: the shared side square, already split by its
    # diagonal into a lower and an upper triangle on both sides.
    incident: dict = {}
    for t, tri in enumerate(surface.triangles):
        for s, (cell, flipped) in enumerate(tri.sides):
            incident.setdefault(cell, []).append((t, s, flipped))
    for cell, occ in sorted(incident.items()):
        (ta, sa, fa), (tb, sb, fb) = occ

        def square_faces(t, s, flipped):
            c0, c1 = _side_end_corners(s, flipped)
            tail = c0 if tail_end[cell] == 0 else c1
            head = c1 if tail == c0 else c0
            rank = {corner: r for r, corner in enumerate(order[t])}
            lower = ((rank[tail], 0), (rank[head], 0), (rank[head], 1))
            upper = ((rank[tail], 0), (rank[head], 1), (rank[tail], 1))
            # Geometric points on the square: (cell end, level).
            end_of = {rank[tail]: tail_end[cell], rank[head]: 1 - tail_end[cell]}
            return lower, upper, end_of

        lo_a, up_a, end_a = square_faces(ta, sa, fa)
        lo_b, up_b, end_b = square_faces(tb, sb, fb)
        rank_from_end_b = {end: rank for rank, end in end_b.items()}

        def find_tet(t, face_labels):
            for tet, labels in zip(tets_of(t), _TET_LABELS):
                if set(face_labels) <= set(labels):
                    return tet, labels
            raise AssertionError("face not on any staircase tetrahedron")

        for face_a, face_b in ((lo_a, lo_b), (up_a, up_b)):
            tet_a, labels_a = find_tet(ta, face_a)
            tet_b, labels_b = find_tet(tb, face_b)
            label_map = {
                (r, lv): (rank_from_end_b[end_a[r]], lv) for (r, lv) in face_a
            }
            _glue(table, tet_a, labels_a, tet_b, labels_b, label_map)

    assert all(entry is not None for faces in table for entry in faces)
    for tet, faces in enumerate(table):
        for face, (nbr, nf, perm) in enumerate(faces):
            back = table[nbr][nf]
            assert back[0] == tet and back[1] == face
            assert tuple(back[2][p] for p in perm) == (0, 1, 2, 3)

    out = PrismTriangulation(n_tets, tuple(tuple(faces) for faces in table))
    assert out.tetrahedron_count == 6 * (3 * d.c + 2 * d.genus - 2)
    return out


def volume_bounds(c: int, g: int, l: int, m: int, kind: str) -> VolumeBounds:
    """Cusp-count lower bound, and the prism upper bound when the manifold
    is the trivial mapping torus."""
    if g < 2:
        raise GenusTooSmall("volume bounds require an ambient surface of genus >= 2")
    if min(c, l, m) < 0:
        raise MalformedMap("counts must be nonnegative")
    cusp_count = l + c + 2 * m
    upper = 6 * (3 * c + 2 * g - 2) * V_TET if kind == "TrivialMappingTorus" else None
    return VolumeBounds(v_tet=V_TET, lower=cusp_count * V_TET, upper=upper)
