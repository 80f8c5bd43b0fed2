"""Local exploration of Cay(Alt(H*), {x, y, z}) and small coset graphs.

Neighbour rule: the neighbours of a vertex ``w`` are ``s*w`` for ``s`` in
(x, y, z), with ``*`` the left-to-right product of :mod:`cayleycert.perm`.
Then ``w' * w^-1`` is the generator on the edge, which is the Cayley adjacency
rule. Every vertex fixes point 0 and is therefore the canonical representative
of its right coset of R(H).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from . import halgebra as ha
from .construction import Construction, build, build_R
from .halgebra import HElement
from .perm import Permutation, compose, identity, inverse

DEFAULT_MAX_RADIUS = 12
DEFAULT_MAX_VERTICES = 2_000_000
GEN_ORDER = "xyz"


@dataclass
class CayleyBall:
    m: int
    radius: int
    vertices: list[Permutation]
    words: list[str]
    depths: list[int]
    edges: list[tuple[int, int]]
    frontier_sizes: list[int]
    truncated: bool = False
    collisions: list[tuple[str, str]] = field(default_factory=list)
    root: int = 0

    def index(self) -> dict[bytes, int]:
        return {v.key(): i for i, v in enumerate(self.vertices)}

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


@dataclass
class LocalCheck:
    """Outcome of a ball-local test; the lemma suite wraps these into CheckResults."""

    passed: bool
    details: dict


def _gens(con: Construction) -> list[Permutation]:
    return list(con.connection_set())


def bfs_ball(m: int, radius: int, max_vertices: int = DEFAULT_MAX_VERTICES, *,
             construction: Construction | None = None) -> CayleyBall:
    """Ball of the given radius about the identity, with all edges between ball vertices."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if max_vertices < 1:
        raise ValueError("max_vertices must be positive")
    con = construction if construction is not None else build(m)
    gens = _gens(con)
    root = identity(con.degree)
    vertices = [root]
    words = [""]
    depths = [0]
    seen = {root.key(): 0}
    frontier_sizes = [1]
    collisions: list[tuple[str, str]] = []
    truncated = False
    level = [0]
    for d in range(1, radius + 1):
        nxt = []
        for i in level:
            for label, s in zip(GEN_ORDER, gens):
                if words[i].startswith(label):
                    continue  # s*s*w = w
                w = compose(s, vertices[i])
                k = w.key()
                if k in seen:
                    if len(collisions) < 50:
                        collisions.append((label + words[i], words[seen[k]]))
                    continue
                if len(vertices) >= max_vertices:
                    truncated = True
                    break
                seen[k] = len(vertices)
                vertices.append(w)
                words.append(label + words[i])
                depths.append(d)
                nxt.append(seen[k])
            if truncated:
                break
        frontier_sizes.append(len(nxt))
        level = nxt
        if truncated or not nxt:
            break
    edges = set()
    for i, v in enumerate(vertices):
        for s in gens:
            j = seen.get(compose(s, v).key())
            if j is not None and j != i:
                edges.add((min(i, j), max(i, j)))
    return CayleyBall(con.m, radius, vertices, words, depths, sorted(edges),
                      frontier_sizes, truncated, collisions)


def ball_structure(ball: CayleyBall) -> dict:
    """Simplicity, interior degrees and pairwise coset distinctness."""
    deg = [0] * len(ball.vertices)
    for i, j in ball.edges:
        deg[i] += 1
        deg[j] += 1
    simple = all(i != j for i, j in ball.edges) and len(set(ball.edges)) == len(ball.edges)
    interior = [i for i, d in enumerate(ball.depths) if d < ball.radius]
    if ball.truncated:
        # Only vertices whose full neighbourhood was explored count as interior.
        cut = max(ball.depths) - 1
        interior = [i for i in interior if ball.depths[i] < cut]
    interior_cubic = all(deg[i] == 3 for i in interior)
    fixes0 = all(v(0) == 0 for v in ball.vertices)
    # Distinct vertices fixing 0 lie in distinct right cosets of R(H).
    reps = {v.key() for v in ball.vertices}
    distinct = len(reps) == len(ball.vertices) and fixes0
    return {
        "simple": simple,
        "interior_cubic": interior_cubic,
        "interior_vertices": len(interior),
        "all_fix_identity": fixes0,
        "pairwise_coset_distinct": distinct,
    }


def coset_equality(w1: Permutation, w2: Permutation, m: int) -> bool:
    """Whether ``w1`` and ``w2`` lie in the same right coset of R(H)."""
    if w1.degree != w2.degree:
        raise ValueError("degree mismatch")
    q = compose(w2, inverse(w1))
    return q == build_R(ha.decode(q(0), m))


def canonical_rep(p: Permutation, m: int) -> Permutation:
    """The unique element of R(H)p fixing point 0."""
    return compose(build_R(ha.decode(inverse(p)(0), m)), p)


def coset_consistency_check(ball: CayleyBall, dc: Sequence[Permutation],
                            non_edge_samples: int = 200) -> LocalCheck:
    """Every ball edge lies in the double coset, sampled non-edges do not."""
    keys = {p.key() for p in dc}
    bad_edges = [(i, j) for i, j in ball.edges
                 if compose(ball.vertices[j], inverse(ball.vertices[i])).key() not in keys]
    adjacent = set(ball.edges)
    tested = 0
    bad_non_edges = []
    n = len(ball.vertices)
    # Deterministic sweep over pairs in index order.
    for i in range(n):
        for j in range(i + 1, n):
            if tested >= non_edge_samples:
                break
            if (i, j) in adjacent:
                continue
            tested += 1
            if compose(ball.vertices[j], inverse(ball.vertices[i])).key() in keys:
                bad_non_edges.append((i, j))
        if tested >= non_edge_samples:
            break
    ok = not bad_edges and not bad_non_edges
    return LocalCheck(ok, {
        "edges_tested": len(ball.edges),
        "edges_outside_double_coset": bad_edges[:20],
        "non_edges_tested": tested,
        "non_edges_inside_double_coset": bad_non_edges[:20],
    })


def girth_report(ball: CayleyBall) -> dict:
    """Shortest cycle through the root inside the ball, or a lower bound.

    The ball is induced, so a cycle of length at most 2r+1 through the root is
    seen whole. Any non-tree edge joining different root branches closes such a
    cycle; the minimum over those edges is the girth.
    """
    adj = ball.adjacency()
    parent = [-1] * len(ball.vertices)
    branch = [-1] * len(ball.vertices)
    dist = [-1] * len(ball.vertices)
    dist[0] = 0
    q = deque([0])
    while q:
        u = q.popleft()
        for v in sorted(adj[u]):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                parent[v] = u
                branch[v] = v if u == 0 else branch[u]
                q.append(v)
    best = None
    for u, v in ball.edges:
        if parent[v] == u or parent[u] == v or u == 0 or v == 0:
            continue
        if branch[u] != branch[v]:
            length = dist[u] + dist[v] + 1
            if best is None or length < best[0]:
                best = (length, u, v)
    if best is None:
        return {"girth": None, "lower_bound": 2 * ball.radius + 1, "cycle": None,
                "revalidated": None, "exact": False}
    _, u, v = best

    def path(w: int) -> list[int]:
        out = [w]
        while out[-1] != 0:
            out.append(parent[out[-1]])
        return out

    cycle = path(u)[::-1] + path(v)
    cycle.pop()  # the root appears at both ends
    gens = {s.key() for s in _gens(build(ball.m))}
    ring = cycle + [cycle[0]]
    revalidated = all(
        compose(ball.vertices[b], inverse(ball.vertices[a])).key() in gens
        for a, b in zip(ring, ring[1:])
    ) and len(set(cycle)) == len(cycle)
    return {"girth": best[0], "lower_bound": None, "cycle": [ball.words[i] for i in cycle],
            "revalidated": revalidated, "exact": not ball.truncated}


def automorphism_action_sample(ball: CayleyBall, g: HElement) -> LocalCheck:
    """Right multiplication by R(g) (re-canonicalised) maps ball edges to edges."""
    m = ball.m
    rg = build_R(g)
    idx = ball.index()
    image = [idx.get(canonical_rep(compose(v, rg), m).key()) for v in ball.vertices]
    edge_set = set(ball.edges)
    testable = 0
    violations = []
    for i, j in ball.edges:
        a, b = image[i], image[j]
        if a is None or b is None:
            continue
        testable += 1
        if (min(a, b), max(a, b)) not in edge_set:
            violations.append((ball.words[i], ball.words[j]))
    return LocalCheck(not violations, {
        "element": str(g),
        "testable_edges": testable,
        "violations": violations[:20],
    })


# Generic coset graphs ---------------------------------------------------------


class CosetGraphError(ValueError):
    """A hypothesis of the coset-graph construction fails."""


@dataclass
class CosetGraph:
    vertex_count: int
    representatives: list[Permutation]
    words: list[str | None]
    edges: list[tuple[int, int]]
    valency: int
    group_order: int
    subgroup_order: int
    double_coset_size: int
    connected: bool
    generates: bool


def _closure(gens: Sequence[Permutation], degree: int, cap: int) -> dict[bytes, Permutation]:
    one = identity(degree)
    seen = {one.key(): one}
    q = deque([one])
    while q:
        p = q.popleft()
        for s in gens:
            r = compose(p, s)
            k = r.key()
            if k not in seen:
                if len(seen) >= cap:
                    raise CosetGraphError(f"group has more than {cap} elements")
                seen[k] = r
                q.append(r)
    return seen


def build_coset_graph(G_gens: Sequence[Permutation], H_gens: Sequence[Permutation],
                      S: Sequence[Permutation], cap: int = 100_000,
                      labels: Sequence[str] | None = None) -> CosetGraph:
    """Cos(G, H, HSH): vertices are right cosets Hg, with Hg ~ Hsg for s in HSH."""
    if not G_gens:
        raise ValueError("G needs at least one generator")
    n = G_gens[0].degree
    G = _closure(G_gens, n, cap)
    H = _closure(H_gens, n, cap)
    if any(k not in G for k in H):
        raise CosetGraphError("H is not contained in G")
    if any(s.key() not in G for s in S):
        raise CosetGraphError("S is not contained in G")
    if any(s.key() in H for s in S):
        raise CosetGraphError("S meets H")
    Hs = list(H.values())
    HSH = {}
    for s in S:
        for h1 in Hs:
            left = compose(h1, s)
            for h2 in Hs:
                p = compose(left, h2)
                HSH[p.key()] = p
    if any(inverse(p).key() not in HSH for p in HSH.values()):
        raise CosetGraphError("HSH is not closed under inverses")

    def coset_key(g: Permutation) -> bytes:
        return min(compose(h, g).key() for h in Hs)

    # BFS over G by left multiplication with S and the H-generators labels each
    # coset by the shortest word that reaches it; unreachable cosets get None.
    labels = list(labels) if labels is not None else [f"s{i}" for i in range(len(S))]
    moves = list(zip(labels, S)) + [(f"h{i}", h) for i, h in enumerate(H_gens)]
    one = identity(n)
    elem_word = {one.key(): ""}
    q = deque([one])
    while q:
        p = q.popleft()
        for lab, s in moves:
            r = compose(s, p)
            if r.key() not in elem_word:
                elem_word[r.key()] = lab if not elem_word[p.key()] else lab + "." + elem_word[p.key()]
                q.append(r)

    reps: dict[bytes, Permutation] = {}
    for k, g in G.items():
        ck = coset_key(g)
        if ck not in reps:
            reps[ck] = G[ck]
    # Order cosets by reachability word, then by key, for a stable layout.
    def order_key(item):
        ck, rep = item
        w = min((elem_word[compose(h, rep).key()] for h in Hs
                 if compose(h, rep).key() in elem_word), key=lambda s: (len(s), s), default=None)
        return (w is None, len(w) if w is not None else 0, w or "", ck), w

    ordered = sorted(((order_key(it), it) for it in reps.items()), key=lambda t: t[0][0])
    keys = [it[0] for _, it in ordered]
    representatives = [it[1] for _, it in ordered]
    words = [ok[1] for ok, _ in ordered]
    index = {k: i for i, k in enumerate(keys)}

    edges = set()
    valencies = set()
    hsh = list(HSH.values())
    for i, g in enumerate(representatives):
        nbrs = {index[coset_key(compose(s, g))] for s in hsh}
        valencies.add(len(nbrs))
        for j in nbrs:
            if i == j:
                raise CosetGraphError("a loop arose; S must avoid H")
            edges.add((min(i, j), max(i, j)))
    expected = len(HSH) // len(H)
    if valencies and valencies != {expected}:
        raise CosetGraphError(f"valency {sorted(valencies)} differs from |HSH|/|H| = {expected}")

    comp = _components(len(keys), edges)
    generated = _closure(list(S) + list(H_gens), n, cap)
    generates = len(generated) == len(G)
    if (comp == 1) != generates:
        raise CosetGraphError("connectivity disagrees with <S, H> = G")
    return CosetGraph(len(keys), representatives, words, sorted(edges),
                      expected if keys else 0, len(G), len(H), len(HSH), comp == 1, generates)


def _components(n: int, edges) -> int:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


# Export ------------------------------------------------------------------------


def _label(i: int, word: str | None) -> str:
    return f"v{i}:{word if word else ('1' if word == '' else '?')}"


def to_json_obj(obj: CayleyBall | CosetGraph) -> dict:
    if isinstance(obj, CayleyBall):
        return {
            "m": obj.m,
            "radius": obj.radius,
            "truncated": obj.truncated,
            "vertices": [{"index": i, "word": w} for i, w in enumerate(obj.words)],
            "edges": [[i, j] for i, j in obj.edges],
        }
    return {
        "vertex_count": obj.vertex_count,
        "valency": obj.valency,
        "connected": obj.connected,
        "vertices": [{"index": i, "word": w} for i, w in enumerate(obj.words)],
        "edges": [[i, j] for i, j in obj.edges],
    }


def export(obj: CayleyBall | CosetGraph, fmt: str) -> bytes:
    """Serialise a ball or coset graph as ``dot`` or ``json``, deterministically."""
    if fmt == "json":
        return (json.dumps(to_json_obj(obj), sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt == "dot":
        name = "ball" if isinstance(obj, CayleyBall) else "coset_graph"
        lines = [f"graph {name} {{"]
        for i, w in enumerate(obj.words):
            lines.append(f'  v{i} [label="{_label(i, w)}"];')
        for i, j in obj.edges:
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}; use 'dot' or 'json'")


def ball_from_json(data: bytes | str | dict, construction: Construction | None = None) -> CayleyBall:
    """Rebuild a ball from its JSON export by re-evaluating the vertex words."""
    if not isinstance(data, dict):
        data = json.loads(data)
    m = data["m"]
    con = construction if construction is not None else build(m)
    gens = dict(zip(GEN_ORDER, _gens(con)))
    vertices, words, depths = [], [], []
    for v in sorted(data["vertices"], key=lambda v: v["index"]):
        p = identity(con.degree)
        # word "s1 s2 ... sk" denotes s1 * s2 * ... * sk
        for ch in reversed(v["word"]):
            p = compose(gens[ch], p)
        vertices.append(p)
        words.append(v["word"])
        depths.append(len(v["word"]))
    sizes = [0] * (max(depths) + 1 if depths else 1)
    for d in depths:
        sizes[d] += 1
    return CayleyBall(m, data["radius"], vertices, words, depths,
                      [tuple(e) for e in data["edges"]], sizes, data["truncated"])
