"""Constructing curve pairs: normal curves on one-vertex triangulations.

A normal curve is given by how many times it meets each edge of a
triangulation.  Two such curves are overlaid into a single rotation system
whose vertices are the original vertices, the points where the curves meet
edges and the crossings inside triangles.  The overlay is then put in
minimal position and coarsened.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .surface import (
    CurveArcTriple,
    Surface,
    SurfaceError,
    Walk,
    free_reduce,
    map_walk,
    puncture_corner,
    rebuild,
    reduce_to_minimal,
)


def polygon_word(genus: int) -> List[int]:
    """Darts of the standard 4g-gon a1 b1 a1^-1 b1^-1 ...."""
    word = []
    for i in range(genus):
        a, b = 2 * i, 2 * i + 1
        word += [2 * a, 2 * b, 2 * a + 1, 2 * b + 1]
    return word


def one_vertex_polygon(genus: int) -> Surface:
    return Surface.from_faces([polygon_word(genus)])


def triangulated_polygon(genus: int) -> Surface:
    """Fan triangulation from one corner of the 4g-gon."""
    sides = polygon_word(genus)
    n = len(sides)
    first_diag = 2 * genus
    diag = {j: first_diag + (j - 2) for j in range(2, n - 1)}  # corner 0 to corner j
    tris = [[sides[0], sides[1], 2 * diag[2] + 1]]
    for j in range(2, n - 2):
        tris.append([2 * diag[j], sides[j], 2 * diag[j + 1] + 1])
    tris.append([2 * diag[n - 2], sides[n - 2], sides[n - 1]])
    return Surface.from_faces(tris)


# ---------------------------------------------------------------- normal curves


def _corner_counts(s: Surface, w: Sequence[int], f: int) -> List[int]:
    walk = s.faces[f]
    ws = [w[d >> 1] for d in walk]
    if sum(ws) % 2:
        raise SurfaceError(f"odd weight sum around face {f}")
    out = []
    for i in range(3):
        c2 = ws[i] + ws[(i + 1) % 3] - ws[(i + 2) % 3]
        if c2 < 0:
            raise SurfaceError(f"triangle inequality fails on face {f}")
        out.append(c2 // 2)
    return out


def normal_arcs(s: Surface, w: Sequence[int]) -> List[Tuple[int, int, int, int]]:
    """Arcs of the normal curve as (dart, pos, dart, pos); positions are
    indices along the edge in its forward direction."""
    arcs = []
    for f, walk in enumerate(s.faces):
        if len(walk) != 3:
            raise SurfaceError("normal coordinates need a triangulation")
        cs = _corner_counts(s, w, f)
        for i in range(3):
            d1, d2 = walk[i], walk[(i + 1) % 3]
            w1, w2 = w[d1 >> 1], w[d2 >> 1]
            for t in range(cs[i]):
                p1 = w1 - 1 - t
                p2 = t
                q1 = p1 if d1 % 2 == 0 else w1 - 1 - p1
                q2 = p2 if d2 % 2 == 0 else w2 - 1 - p2
                arcs.append((d1, q1, d2, q2))
    return arcs


def components(s: Surface, w: Sequence[int]) -> int:
    arcs = normal_arcs(s, w)
    adj: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for d1, q1, d2, q2 in arcs:
        a, b = (d1 >> 1, q1), (d2 >> 1, q2)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    count = 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


@dataclass
class _Chord:
    curve: str
    face: int
    ends: Tuple[Tuple[int, int], Tuple[int, int]]   # (side dart, merged index on the edge)
    coords: Tuple[int, int]
    crossings: List[int]
    segs: List[int]


def overlay(s: Surface, wa: Sequence[int], wb: Sequence[int], rng: Optional[random.Random] = None,
            flip_alpha: bool = False, flip_beta: bool = False) -> Tuple[Surface, Walk, Walk]:
    """Overlay two connected normal curves; returns the surface and both curves."""
    if components(s, wa) != 1 or components(s, wb) != 1:
        raise SurfaceError("normal coordinates do not describe a single curve")
    E = s.num_edges
    # interleave the two curves' points on every edge
    merged: List[List[str]] = []
    for e in range(E):
        seq = ["a"] * wa[e] + ["b"] * wb[e]
        if rng is not None:
            rng.shuffle(seq)
        merged.append(seq)
    idx: Dict[Tuple[str, int, int], int] = {}
    for e, seq in enumerate(merged):
        ca = cb = 0
        for m, lab in enumerate(seq):
            if lab == "a":
                idx[("a", e, ca)] = m
                ca += 1
            else:
                idx[("b", e, cb)] = m
                cb += 1

    V = s.num_vertices
    point_vertex: Dict[Tuple[int, int], int] = {}
    nv = V
    for e, seq in enumerate(merged):
        for m in range(len(seq)):
            point_vertex[(e, m)] = nv
            nv += 1
    chords: List[_Chord] = []
    side_index = {}
    for f, walk in enumerate(s.faces):
        for i, d in enumerate(walk):
            side_index[d] = (f, i)
    for lab, w in (("a", wa), ("b", wb)):
        for d1, q1, d2, q2 in normal_arcs(s, w):
            ends = []
            coords = []
            for d, q in ((d1, q1), (d2, q2)):
                e = d >> 1
                m = idx[(lab, e, q)]
                L = len(merged[e])
                pos = m if d % 2 == 0 else L - 1 - m
                f, i = side_index[d]
                ends.append((d, m))
                coords.append(i * 100000 + pos)
            if coords[0] > coords[1]:
                ends.reverse()
                coords.reverse()
            chords.append(_Chord(lab, side_index[d1][0], tuple(ends), tuple(coords), [], []))
    by_face: Dict[int, List[int]] = {}
    for ci, ch in enumerate(chords):
        by_face.setdefault(ch.face, []).append(ci)
    crossing_at: Dict[Tuple[int, int], int] = {}
    for f, cis in by_face.items():
        a_ch = [c for c in cis if chords[c].curve == "a"]
        b_ch = [c for c in cis if chords[c].curve == "b"]
        for ca in a_ch:
            p, q = chords[ca].coords
            for cb in b_ch:
                r, t = chords[cb].coords
                if (p < r < q) != (p < t < q):
                    crossing_at[(ca, cb)] = nv
                    nv += 1
    # order crossings along each chord from its first end
    for ci, ch in enumerate(chords):
        p, q = ch.coords
        items = []
        for (ca, cb), x in crossing_at.items():
            if ci == ca:
                other = chords[cb].coords
            elif ci == cb:
                other = chords[ca].coords
            else:
                continue
            inner = other[0] if p < other[0] < q else other[1]
            items.append((inner, x))
        ch.crossings = [x for _, x in sorted(items)]

    # edges: pieces of the triangulation edges, then chord segments
    pairs_ends: List[Tuple[int, int]] = []

    def new_edge(u: int, v: int) -> int:
        pairs_ends.append((u, v))
        return 2 * (len(pairs_ends) - 1)

    sub_edges: List[List[int]] = []
    for e in range(E):
        nodes = [s.origin(2 * e)] + [point_vertex[(e, m)] for m in range(len(merged[e]))] + [s.head(2 * e)]
        sub_edges.append([new_edge(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)])
    chord_of_end: Dict[Tuple[int, int], int] = {}
    for ci, ch in enumerate(chords):
        (d1, m1), (d2, m2) = ch.ends
        nodes = [point_vertex[(d1 >> 1, m1)]] + ch.crossings + [point_vertex[(d2 >> 1, m2)]]
        ch.segs = [new_edge(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)]
        chord_of_end[(d1, m1)] = ci
        chord_of_end[(d2, m2)] = ci

    def dart_into(ci: int, end_vertex: int) -> int:
        ch = chords[ci]
        (d1, m1), _ = ch.ends
        if point_vertex[(d1 >> 1, m1)] == end_vertex:
            return ch.segs[0]
        return ch.segs[-1] ^ 1

    rot: List[List[int]] = [[] for _ in range(nv)]
    for v in range(V):
        for d in s.rotations[v]:
            e = d >> 1
            rot[v].append(sub_edges[e][0] if d % 2 == 0 else sub_edges[e][-1] ^ 1)
    for e in range(E):
        for m in range(len(merged[e])):
            x = point_vertex[(e, m)]
            rot[x] = [
                sub_edges[e][m + 1],
                dart_into(chord_of_end[(2 * e, m)], x),
                sub_edges[e][m] ^ 1,
                dart_into(chord_of_end[(2 * e + 1, m)], x),
            ]
    for (ca, cb), x in crossing_at.items():
        spokes = []
        for ci in (ca, cb):
            ch = chords[ci]
            j = ch.crossings.index(x)
            spokes.append((ch.coords[0], ch.segs[j] ^ 1))
            spokes.append((ch.coords[1], ch.segs[j + 1]))
        rot[x] = [d for _, d in sorted(spokes)]
    out = Surface(rot)
    if out.euler_characteristic() != s.euler_characteristic():
        raise SurfaceError("overlay changed the Euler characteristic")

    def trace(lab: str, flip: bool) -> Walk:
        ends = [ci for ci, ch in enumerate(chords) if ch.curve == lab]
        start_ci = ends[0]
        ch = chords[start_ci]
        cur_vertex = point_vertex[(ch.ends[0][0] >> 1, ch.ends[0][1])]
        ci = start_ci
        darts: List[int] = []
        while True:
            ch = chords[ci]
            (d1, m1), (d2, m2) = ch.ends
            if point_vertex[(d1 >> 1, m1)] == cur_vertex:
                darts += ch.segs
                far = (d2, m2)
            else:
                darts += [g ^ 1 for g in reversed(ch.segs)]
                far = (d1, m1)
            cur_vertex = point_vertex[(far[0] >> 1, far[1])]
            nxt = chord_of_end[(far[0] ^ 1, far[1])]
            if nxt == start_ci:
                break
            ci = nxt
        w = Walk.of(out, darts)
        return w.reversed() if flip else w

    return out, trace("a", flip_alpha), trace("b", flip_beta)


# ---------------------------------------------------------------- coarsening


def _bfs_path(s: Surface, a: int, b: int, avoid_edges=frozenset()) -> List[int]:
    prev = {a: None}
    dq = deque([a])
    while dq:
        x = dq.popleft()
        if x == b:
            break
        for d in s.rotations[x]:
            if (d >> 1) in avoid_edges:
                continue
            y = s.head(d)
            if y not in prev:
                prev[y] = d
                dq.append(y)
    if b not in prev:
        raise SurfaceError("no path between the vertices")
    path = []
    x = b
    while prev[x] is not None:
        d = prev[x]
        path.append(d)
        x = s.origin(d)
    return path[::-1]


def simplify(t: CurveArcTriple) -> CurveArcTriple:
    """Coarsen the cell structure without touching the curves' isotopy data.

    Deletes filling edges between distinct disc faces (rerouting tau around
    the removed edge), prunes dangling edges and smooths degree-2 vertices
    away from the basepoints.
    """
    s, alpha, beta, tau = t.surface, t.alpha, t.beta, t.tau
    keep_vertices = {alpha.start, beta.start}
    changed = True
    while changed:
        changed = False
        curve_edges = alpha.edges() | beta.edges()
        bverts = s.boundary_vertices()
        for e in range(s.num_edges):
            if e in curve_edges:
                continue
            f1, f2 = s.face_of(2 * e), s.face_of(2 * e + 1)
            if f1 == f2 or s.is_boundary_face(f1) or s.is_boundary_face(f2):
                continue
            detour = {}
            for d in (2 * e, 2 * e + 1):
                walk = s.faces[s.face_of(d)]
                i = walk.index(d)
                rest = walk[i + 1:] + walk[:i]
                detour[d] = [x ^ 1 for x in reversed(rest)]
            new_tau = []
            for d in tau.darts:
                new_tau += detour.get(d, [d])
            new_tau = free_reduce(new_tau)
            rotations = {v: [d for d in s.rotations[v] if d >> 1 != e] for v in range(s.num_vertices)}
            pairs = [(2 * x, 2 * x + 1) for x in range(s.num_edges) if x != e]
            s2, dmap, vmap = rebuild(s, rotations, pairs)
            alpha = map_walk(s2, alpha, dmap, vmap)
            beta = map_walk(s2, beta, dmap, vmap)
            tau = map_walk(s2, Walk(tuple(new_tau), tau.start, tau.end), dmap, vmap)
            keep_vertices = {vmap[v] for v in keep_vertices}
            s = s2
            changed = True
            break
        if changed:
            continue
        for v in range(s.num_vertices):
            if v in keep_vertices or v in bverts:
                continue
            if s.degree(v) == 1:
                d = s.rotations[v][0]
                if s.head(d) in bverts:
                    continue
                e = d >> 1
                tau = Walk(tuple(free_reduce(tau.darts)), tau.start, tau.end)
                rotations = {u: [x for x in s.rotations[u] if x >> 1 != e] for u in range(s.num_vertices) if u != v}
                pairs = [(2 * x, 2 * x + 1) for x in range(s.num_edges) if x != e]
                s2, dmap, vmap = rebuild(s, rotations, pairs)
                alpha = map_walk(s2, alpha, dmap, vmap)
                beta = map_walk(s2, beta, dmap, vmap)
                tau = map_walk(s2, tau, dmap, vmap)
                keep_vertices = {vmap[u] for u in keep_vertices}
                s = s2
                changed = True
                break
            if s.degree(v) == 2:
                p, q = s.rotations[v]
                if p >> 1 == q >> 1:
                    continue
                tau = Walk(tuple(free_reduce(tau.darts)), tau.start, tau.end)
                rotations = {u: list(s.rotations[u]) for u in range(s.num_vertices) if u != v}
                ep, eq = p >> 1, q >> 1
                pairs = []
                for x in range(s.num_edges):
                    if x == ep:
                        pairs.append((p ^ 1, q ^ 1))
                    elif x != eq:
                        pairs.append((2 * x, 2 * x + 1))
                s2, dmap, vmap = rebuild(s, rotations, pairs)
                dmap = dict(dmap)
                dmap[p] = None
                dmap[q] = None
                alpha = _smooth_walk(s2, alpha, dmap, vmap)
                beta = _smooth_walk(s2, beta, dmap, vmap)
                tau = _smooth_walk(s2, tau, dmap, vmap)
                keep_vertices = {vmap[u] for u in keep_vertices}
                s = s2
                changed = True
                break
    return CurveArcTriple(s, alpha, beta, tau)


def _smooth_walk(s2: Surface, w: Walk, dmap, vmap) -> Walk:
    darts = [dmap[d] for d in w.darts if dmap.get(d) is not None]
    if not darts:
        return Walk((), vmap[w.start], vmap[w.start])
    return Walk.of(s2, darts, start=vmap[w.start])


# ---------------------------------------------------------------- random pairs


def random_weights(s: Surface, rng: random.Random, top: int) -> Optional[List[int]]:
    for _ in range(200):
        w = [rng.randint(0, top) for _ in range(s.num_edges)]
        if not any(w):
            continue
        try:
            for f in range(len(s.faces)):
                _corner_counts(s, w, f)
        except SurfaceError:
            continue
        if components(s, w) == 1:
            return w
    return None


def triple_from_weights(base: Surface, wa: Sequence[int], wb: Sequence[int], rng: random.Random,
                        puncture_faces: int = 0, minimize: bool = True, coarsen: bool = True) -> CurveArcTriple:
    """Overlay, choose basepoints and tau, remove bigons and coarsen."""
    s, alpha, beta = overlay(base, wa, wb, rng, rng.random() < 0.5, rng.random() < 0.5)
    for _ in range(puncture_faces):
        # puncture at a corner on an original vertex, away from the curves
        on_curves = {s.origin(d) for d in alpha.darts + beta.darts}
        d = next(d for f in s.filled_faces() for d in s.faces[f]
                 if s.head(d) < base.num_vertices and s.head(d) not in on_curves)
        s = puncture_corner(s, d)
        alpha = Walk.of(s, alpha.darts)
        beta = Walk.of(s, beta.darts)
    va = [s.origin(d) for d in alpha.darts]
    vb = [s.origin(d) for d in beta.darts]
    cross = set(va) & set(vb)
    choices_a = [x for x in va if x not in cross] or va
    choices_b = [x for x in vb if x not in cross] or vb
    v = rng.choice(choices_a)
    w = rng.choice(choices_b)
    alpha = alpha.rotated(s, va.index(v))
    beta = beta.rotated(s, vb.index(w))
    z = rng.randrange(s.num_vertices)
    tau_darts = free_reduce(_bfs_path(s, v, z) + _bfs_path(s, z, w))
    tau = Walk.of(s, tau_darts, start=v) if tau_darts else Walk((), v, v)
    t = CurveArcTriple(s, alpha, beta, tau)
    if minimize:
        t, _ = reduce_to_minimal(t)
    return simplify(t) if coarsen else t
