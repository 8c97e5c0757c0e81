"""Typed link diagrams on surfaces: FAL structure, twist regions, and fills.

A diagram is a 4-valent combinatorial map whose vertices carry a kind:
either a crossing-circle site (possibly with a half-twist) or a plain
crossing that remembers which opposite dart pair runs over.  Strands pass
straight through every vertex: darts at opposite rotation positions belong
to the same strand arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import (
    MalformedMap,
    NonAlternatingTwistRegion,
    NotACrossingCircle,
    NotCheckerboard,
    UnfilledCircle,
    ZeroCoefficient,
)
from .surface_map import (
    CombinatorialMap,
    canonical_form,
    checkerboard_coloring,
    cut_along_two_cut,
    genus as map_genus,
    trace_faces,
)

__all__ = [
    "CrossingCircle",
    "Crossing",
    "FalDiagram",
    "TwistRegion",
    "WgaReport",
    "ValidationReport",
    "validate_fal",
    "detect_twist_regions",
    "augment",
    "fill_crossing_circle",
    "choose_alternating_signs",
    "check_alternating",
    "check_weakly_prime",
    "check_wga",
    "diagrams_isomorphic",
]


@dataclass(frozen=True)
class CrossingCircle:
    """A crossing-circle site; the circle is perpendicular to the surface."""

    half_twist: bool = False
    half_twist_sign: int = 1

    def __post_init__(self) -> None:
        if self.half_twist_sign not in (1, -1):
            raise MalformedMap("half-twist sign must be +1 or -1")


@dataclass(frozen=True)
class Crossing:
    """A plain crossing; over_pair selects which dart pair {0,2} / {1,3}
    runs over."""

    over_pair: int

    def __post_init__(self) -> None:
        if self.over_pair not in (0, 1):
            raise MalformedMap("over_pair must be 0 or 1")


VertexKind = Union[CrossingCircle, Crossing]


@dataclass(frozen=True)
class FalDiagram:
    map: CombinatorialMap
    genus: int
    vertex_kind: tuple[VertexKind, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_kind", tuple(self.vertex_kind))
        if len(self.vertex_kind) != self.map.vertex_count:
            raise MalformedMap("one vertex kind required per vertex")
        for k in self.vertex_kind:
            if not isinstance(k, (CrossingCircle, Crossing)):
                raise MalformedMap(f"unknown vertex kind {k!r}")

    @property
    def c(self) -> int:
        """Number of crossing circles."""
        return sum(1 for k in self.vertex_kind if isinstance(k, CrossingCircle))

    @property
    def l(self) -> int:
        """Number of projection (strand) components."""
        return len(self.strand_components())

    def strand_components(self) -> list[frozenset[int]]:
        """Partition of darts into closed strand cycles.

        Darts of one edge share a strand, as do darts at opposite rotation
        positions of any vertex (strands pass straight through).
        """
        m = self.map
        parent: dict[int, int] = {d: d for d in m.darts}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: int, y: int) -> None:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for d in m.darts:
            union(d, m.opposite[d])
        for cycle in m.rotation:
            half = len(cycle) // 2
            for i in range(half):
                union(cycle[i], cycle[i + half])
        groups: dict[int, set[int]] = {}
        for d in m.darts:
            groups.setdefault(find(d), set()).add(d)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_over_end(self, dart: int) -> bool:
        """True when the strand through `dart` is the overstrand at its
        crossing vertex.  Only meaningful at Crossing vertices."""
        v = self.map.vertex_of(dart)
        kind = self.vertex_kind[v]
        if not isinstance(kind, Crossing):
            raise UnfilledCircle(f"vertex {v} is not a crossing")
        return self.map.position_of(dart) % 2 == kind.over_pair


@dataclass(frozen=True)
class TwistRegion:
    crossings: tuple[int, ...]
    boundary_darts: tuple[int, int, int, int]
    sign: int

    @property
    def parity(self) -> int:
        return len(self.crossings) % 2


@dataclass(frozen=True)
class ValidationReport:
    four_valent: bool
    crossing_discs: bool
    crossings_anchored: bool
    components_meet_circles: bool
    cellular: bool

    @property
    def ok(self) -> bool:
        return all(
            (
                self.four_valent,
                self.crossing_discs,
                self.crossings_anchored,
                self.components_meet_circles,
                self.cellular,
            )
        )


@dataclass(frozen=True)
class WgaReport:
    weakly_prime: bool
    components_on_all_surfaces: bool
    crossing_per_component: bool
    checkerboard: bool
    alternating: bool
    representativity: str  # "InfiniteIncompressible" | "NotChecked"

    @property
    def wga_positive(self) -> bool:
        return (
            self.weakly_prime
            and self.components_on_all_surfaces
            and self.crossing_per_component
            and self.checkerboard
            and self.alternating
            and self.representativity == "InfiniteIncompressible"
        )


def validate_fal(diagram: FalDiagram) -> ValidationReport:
    m = diagram.map
    four_valent = all(m.degree(v) == 4 for v in range(m.vertex_count))
    # A crossing disc is met exactly twice iff its circle vertex carries
    # exactly the two strand passages, i.e. is 4-valent.
    crossing_discs = all(
        m.degree(v) == 4
        for v in range(m.vertex_count)
        if isinstance(diagram.vertex_kind[v], CrossingCircle)
    )
    circles = {
        v for v in range(m.vertex_count) if isinstance(diagram.vertex_kind[v], CrossingCircle)
    }
    crossings = set(range(m.vertex_count)) - circles
    if circles and crossings:
        anchored = all(
            any(m.vertex_of(m.opposite[d]) in circles for d in m.rotation[v])
            for v in crossings
        )
    else:
        anchored = True
    if circles:
        meet = all(
            any(m.vertex_of(d) in circles for d in comp)
            for comp in diagram.strand_components()
        )
    else:
        meet = all(
            any(m.vertex_of(d) in crossings for d in comp)
            for comp in diagram.strand_components()
        )
    try:
        cellular = four_valent and map_genus(m) == diagram.genus
    except MalformedMap:
        cellular = False
    return ValidationReport(four_valent, crossing_discs, anchored, meet, cellular)


# -- twist regions ----------------------------------------------------------


def detect_twist_regions(diagram: FalDiagram) -> list[TwistRegion]:
    """Maximal end-to-end bigon chains of crossings, plus lone crossings."""
    m = diagram.map
    fs = trace_faces(m)
    crossings = {
        v for v in range(m.vertex_count) if isinstance(diagram.vertex_kind[v], Crossing)
    }
    # Bigon faces joining two distinct crossings link the chain.
    links: dict[int, list[tuple[int, tuple[int, int]]]] = {v: [] for v in crossings}
    for cycle in fs.faces:
        if len(cycle) != 2:
            continue
        p, q = cycle
        vp, vq = m.vertex_of(p), m.vertex_of(q)
        if vp == vq or vp not in crossings or vq not in crossings:
            continue
        links[vp].append((vq, (p, q)))
        links[vq].append((vp, (q, p)))

    internal: set[int] = set()
    for v in crossings:
        for _, (p, q) in links[v]:
            internal.update((p, m.opposite[p], q, m.opposite[q]))

    regions: list[TwistRegion] = []
    seen: set[int] = set()
    for start in sorted(crossings):
        if start in seen:
            continue
        if not links[start]:
            seen.add(start)
            ports = tuple(m.rotation[start])
            sign = 1 if diagram.is_over_end(ports[0]) else -1
            regions.append(TwistRegion((start,), ports, sign))
            continue
        # Walk to an end of the chain, then back across it.
        comp = _chain_component(links, start)
        ends = [v for v in comp if len(links[v]) == 1]
        if not ends:
            raise MalformedMap("closed cycle of bigons has no twist-region ends")
        first = min(ends)
        chain = _walk_chain(links, first)
        seen.update(chain)
        for v in chain:
            if len(links[v]) > 2:
                raise MalformedMap(f"crossing {v} sits in more than two bigons")
        _check_region_alternates(diagram, chain, links)
        x, y = _end_ports(m, chain[0], internal)
        z, w = _end_ports(m, chain[-1], internal)
        sign = 1 if diagram.is_over_end(x) else -1
        regions.append(TwistRegion(tuple(chain), (x, y, z, w), sign))
    return regions


def _chain_component(links, start):
    comp = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for u, _ in links[v]:
            if u not in comp:
                comp.add(u)
                todo.append(u)
    return comp


def _walk_chain(links, first):
    chain = [first]
    prev = None
    cur = first
    while True:
        nxt = [u for u, _ in links[cur] if u != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        chain.append(cur)
    return chain


def _end_ports(m: CombinatorialMap, v: int, internal: set[int]) -> tuple[int, int]:
    """The two non-bigon darts at a chain end, in rotation order."""
    ports = [d for d in m.rotation[v] if d not in internal]
    if len(ports) != 2:
        raise MalformedMap(f"chain end {v} has {len(ports)} boundary darts")
    a, b = ports
    if m.rotation_successor(a) == b:
        return a, b
    if m.rotation_successor(b) == a:
        return b, a
    raise MalformedMap(f"boundary darts at {v} are not adjacent in the rotation")


def _check_region_alternates(diagram: FalDiagram, chain, links) -> None:
    for v in chain:
        for _, (p, q) in links[v]:
            # Each bigon side must pass over at one crossing and under at
            # the other, otherwise a Reidemeister II move would shorten it.
            for d in (p, q):
                if diagram.is_over_end(d) == diagram.is_over_end(diagram.map.opposite[d]):
                    raise NonAlternatingTwistRegion(
                        f"bigon edge at dart {d} has two over-ends or two under-ends"
                    )


# -- augmentation and filling -----------------------------------------------


def augment(diagram: FalDiagram) -> FalDiagram:
    """Replace every twist region by a crossing circle.

    A region with k crossings becomes a circle with half_twist = (k odd);
    the half-twist sign records the region's common crossing sign.
    """
    regions = detect_twist_regions(diagram)
    m = diagram.map
    if not regions:
        return diagram

    removed: set[int] = set()
    singles: dict[int, TwistRegion] = {}
    chains: list[TwistRegion] = []
    for r in regions:
        if len(r.crossings) == 1:
            singles[r.crossings[0]] = r
        else:
            removed.update(r.crossings)
            chains.append(r)

    interior: set[int] = set()
    for r in chains:
        for v in r.crossings:
            interior.update(m.rotation[v])
        interior.difference_update(r.boundary_darts)

    next_dart = max(m.darts) + 1
    rep: dict[int, int] = {}
    new_vertices: list[tuple[int, ...]] = []
    new_kinds: list[VertexKind] = []
    for r in chains:
        slots = tuple(range(next_dart, next_dart + 4))
        next_dart += 4
        for port, slot in zip(r.boundary_darts, slots):
            rep[port] = slot
        new_vertices.append(slots)
        new_kinds.append(
            CrossingCircle(half_twist=len(r.crossings) % 2 == 1, half_twist_sign=r.sign)
        )

    rotation: list[tuple[int, ...]] = []
    kinds: list[VertexKind] = []
    for v in range(m.vertex_count):
        if v in removed:
            continue
        rotation.append(m.rotation[v])
        if v in singles:
            kinds.append(CrossingCircle(half_twist=True, half_twist_sign=singles[v].sign))
        else:
            kinds.append(diagram.vertex_kind[v])
    rotation.extend(new_vertices)
    kinds.extend(new_kinds)

    opposite: dict[int, int] = {}
    for d in m.edges():
        e = m.opposite[d]
        if d in interior or e in interior:
            continue
        a, b = rep.get(d, d), rep.get(e, e)
        opposite[a] = b
        opposite[b] = a

    out = FalDiagram(CombinatorialMap(tuple(rotation), opposite), diagram.genus, tuple(kinds))
    assert map_genus(out.map) == diagram.genus
    return out


def fill_crossing_circle(diagram: FalDiagram, k: int, t: int) -> FalDiagram:
    """1/t Dehn filling on circle k: the circle becomes a twist region.

    Without a half-twist the region has 2|t| crossings of sign sgn(t);
    a half-twist merges in (2|t|+1) when its sign matches sgn(t) and
    cancels one crossing (2|t|-1) otherwise.
    """
    if t == 0:
        raise ZeroCoefficient("filling coefficient t must be nonzero")
    m = diagram.map
    if not (0 <= k < m.vertex_count) or not isinstance(diagram.vertex_kind[k], CrossingCircle):
        raise NotACrossingCircle(f"vertex {k} is not a crossing circle")
    kind = diagram.vertex_kind[k]
    sign = 1 if t > 0 else -1
    n = 2 * abs(t)
    if kind.half_twist:
        n = n + 1 if sign == kind.half_twist_sign else n - 1
    over_pair = 0 if sign == 1 else 1

    circle = m.rotation[k]
    next_dart = max(m.darts) + 1
    # Ladder of n crossings; each rotation reads (a, b, c, d) with a,b the
    # rungs facing the previous crossing and c,d facing the next.
    ladder = []
    for _ in range(n):
        ladder.append(tuple(range(next_dart, next_dart + 4)))
        next_dart += 4

    rep = {
        circle[0]: ladder[0][0],
        circle[1]: ladder[0][1],
        circle[2]: ladder[-1][2],
        circle[3]: ladder[-1][3],
    }
    opposite: dict[int, int] = {}
    for d in m.edges():
        e = m.opposite[d]
        a, b = rep.get(d, d), rep.get(e, e)
        opposite[a] = b
        opposite[b] = a
    for i in range(n - 1):
        _, _, c_i, d_i = ladder[i]
        a_next, b_next, _, _ = ladder[i + 1]
        opposite[c_i] = b_next
        opposite[b_next] = c_i
        opposite[d_i] = a_next
        opposite[a_next] = d_i

    rotation = [m.rotation[v] for v in range(m.vertex_count) if v != k]
    kinds = [diagram.vertex_kind[v] for v in range(m.vertex_count) if v != k]
    rotation.extend(ladder)
    kinds.extend(Crossing(over_pair) for _ in range(n))

    out = FalDiagram(CombinatorialMap(tuple(rotation), opposite), diagram.genus, tuple(kinds))
    assert map_genus(out.map) == diagram.genus
    return out


def fill_all(diagram: FalDiagram, coefficients: dict[int, int]) -> FalDiagram:
    """Fill several circles at once; keys are vertex indices of `diagram`.

    Fills are applied from the highest index down so the remaining indices
    stay valid as vertices are consumed.
    """
    out = diagram
    for k in sorted(coefficients, reverse=True):
        out = fill_crossing_circle(out, k, coefficients[k])
    return out


# -- alternation ------------------------------------------------------------


def check_alternating(diagram: FalDiagram) -> bool:
    """True iff every edge runs from an overstrand end to an understrand end.

    Equivalent to over/under alternation along every face boundary.
    """
    m = diagram.map
    for v, kind in enumerate(diagram.vertex_kind):
        if isinstance(kind, CrossingCircle):
            raise UnfilledCircle(f"vertex {v} is still a crossing circle")
    return all(
        diagram.is_over_end(d) != diagram.is_over_end(m.opposite[d]) for d in m.edges()
    )


def choose_alternating_signs(diagram: FalDiagram) -> tuple[int, ...]:
    """Per-circle filling signs making every filling alternate.

    The corner faces around a 4-valent vertex alternate checkerboard
    colors, so the color of a circle's slot-0 corner face determines which
    dart pair must run over after filling.  Any fill magnitude works: the
    twist chain's four end darts sit at the same slot parities regardless
    of its length.  The two globally-flipped solutions are disambiguated by
    forcing +1 at the lowest-index circle.
    """
    m = diagram.map
    circles = [
        v for v in range(m.vertex_count) if isinstance(diagram.vertex_kind[v], CrossingCircle)
    ]
    coloring = checkerboard_coloring(m)
    if coloring is None:
        raise NotCheckerboard("diagram faces admit no checkerboard coloring")
    fs = trace_faces(m)
    signs = [1 if coloring[fs.face_of[m.rotation[v][0]]] == 0 else -1 for v in circles]
    if signs and signs[0] == -1:
        signs = [-s for s in signs]
    return tuple(signs)


# -- weak primeness and the WGA report --------------------------------------


def check_weakly_prime(diagram: FalDiagram):
    """Scan all realizable 2-cut curves for a disc side.

    Candidate curves cross a pair of distinct edges sharing both flanking
    faces.  A separating candidate whose disc side contains vertices is a
    weak-primeness witness: on a disc any vertex-free strand would be
    unknotted, so only vertex-carrying disc sides disqualify the diagram.
    Returns (True, None) or (False, (e1, e2)).
    """
    m = diagram.map
    fs = trace_faces(m)
    by_corridor: dict[frozenset[int], list[int]] = {}
    for d in m.edges():
        key = frozenset((fs.face_of[d], fs.face_of[m.opposite[d]]))
        if len(key) == 2:
            by_corridor.setdefault(key, []).append(d)
    for key in sorted(by_corridor, key=sorted):
        group = by_corridor[key]
        fa, fb = sorted(key)
        for i, e1 in enumerate(group):
            for e2 in group[i + 1 :]:
                a, b, disc_a, disc_b = cut_along_two_cut(m, e1, e2, fa, fb)
                if (disc_a and a.vertices) or (disc_b and b.vertices):
                    return False, (e1, e2)
    return True, None


def check_wga(diagram: FalDiagram, surface_incompressible: bool) -> WgaReport:
    m = diagram.map
    crossings = {
        v for v in range(m.vertex_count) if isinstance(diagram.vertex_kind[v], Crossing)
    }
    try:
        alternating = check_alternating(diagram)
    except UnfilledCircle:
        alternating = False
    weakly_prime, _ = check_weakly_prime(diagram)
    per_component = all(
        any(m.vertex_of(d) in crossings for d in comp)
        for comp in diagram.strand_components()
    )
    try:
        cellular = map_genus(m) == diagram.genus
    except MalformedMap:
        cellular = False
    return WgaReport(
        weakly_prime=weakly_prime,
        components_on_all_surfaces=cellular,
        crossing_per_component=per_component,
        checkerboard=checkerboard_coloring(m) is not None,
        alternating=alternating,
        representativity="InfiniteIncompressible" if surface_incompressible else "NotChecked",
    )


# -- isomorphism ------------------------------------------------------------


def _dart_label(diagram: FalDiagram):
    def label(d: int):
        kind = diagram.vertex_kind[diagram.map.vertex_of(d)]
        if isinstance(kind, CrossingCircle):
            return ("O", kind.half_twist)
        return ("X", diagram.is_over_end(d))

    return label


def diagram_canonical_form(diagram: FalDiagram) -> tuple:
    return (diagram.genus, canonical_form(diagram.map, dart_label=_dart_label(diagram)))


def diagrams_isomorphic(a: FalDiagram, b: FalDiagram) -> bool:
    """Equality up to dart relabeling; half-twist flags compared, their
    signs not (the sign is a presentation choice)."""
    return diagram_canonical_form(a) == diagram_canonical_form(b)
