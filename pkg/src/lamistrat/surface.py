"""Combinatorial ideal triangulations of punctured surfaces.

A triangulation is a list of F triangles, each an ordered triple of
*oriented edge labels*.  Edge ``e`` traversed forwards is the label ``e``,
traversed backwards it is ``~e`` (= ``-e-1``, so orientation of edge 0 is
unambiguous).  Walking a triple traverses the triangle boundary; the two
slots holding the same edge are glued direction-matched.  Punctures are the
vertex classes of the gluing, recovered as corner cycles.

Triangle orientations are normalised on construction so every edge occurs
once forwards and once backwards (rejecting non-orientable gluings), and
the triple list is put in a canonical rotation/sort order, which makes all
derived labelling deterministic.

Geometric fact baked into :func:`flip`: flipping the same edge twice
returns the original triangulation only up to reversing that edge's
orientation (the quad rotates by pi).  Frame identity is therefore offered
at two strengths: strict structural equality (``==``) and
:func:`same_frame` which quotients by per-edge orientation reversal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    BadEuler,
    Disconnected,
    EdgeDegree,
    InvalidInput,
    NotFlippable,
    NotOrientable,
    SelfFolded,
)


def reversed_label(label):
    """The same edge traversed the other way."""
    return ~label


def edge_of(label):
    """Unsigned edge index of an oriented label."""
    return label if label >= 0 else ~label


def is_forward(label):
    return label >= 0


def _label_sort_key(label):
    # forward label of an edge sorts just before its backward label
    return 2 * edge_of(label) + (0 if label >= 0 else 1)


def _canonical_triple(triple):
    rots = [tuple(triple[i:]) + tuple(triple[:i]) for i in range(3)]
    return min(rots, key=lambda t: tuple(_label_sort_key(x) for x in t))


@dataclass(frozen=True)
class SurfaceSig:
    """Topological signature of a punctured surface."""

    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 1:
            raise BadEuler(
                f"no punctured surface matches (g, n) = ({self.genus}, {self.punctures})")
        if self.complexity < 1:
            raise BadEuler(
                f"complexity 3g-3+n = {self.complexity} < 1 for (g, n) = "
                f"({self.genus}, {self.punctures}); surface carries no essential curve")

    @property
    def complexity(self):
        return 3 * self.genus - 3 + self.punctures


class Triangulation:
    """Validated, canonically labelled ideal triangulation.

    Immutable after construction; all operations return new values.
    """

    def __init__(self, triangles):
        triples = [tuple(t) for t in triangles]
        self._validate_shape(triples)
        triples = self._orient(triples)
        triples = sorted((_canonical_triple(t) for t in triples),
                         key=lambda t: tuple(_label_sort_key(x) for x in t))
        self.triangles = tuple(triples)
        self.edge_count = 3 * len(self.triangles) // 2
        # position[label] = (triangle index, slot); each label occurs once
        pos = {}
        for t, triple in enumerate(self.triangles):
            for i, lab in enumerate(triple):
                pos[lab] = (t, i)
        self.position = pos
        self.vertex_links = self._trace_links()
        n = len(self.vertex_links)
        chi = -self.edge_count + len(self.triangles)
        two_g = 2 - n - chi
        if two_g < 0 or two_g % 2:
            raise BadEuler(f"Euler count {chi} with {n} vertex links matches no (g, n>=1)")
        self.sig = SurfaceSig(two_g // 2, n)

    # -- construction helpers --------------------------------------------

    @staticmethod
    def _validate_shape(triples):
        if not triples:
            raise EdgeDegree("empty triangle list")
        counts = {}
        for triple in triples:
            if len(triple) != 3 or not all(isinstance(x, int) for x in triple):
                raise InvalidInput(f"triangle {triple!r} is not a triple of labels")
            edges = [edge_of(x) for x in triple]
            if len(set(edges)) != 3:
                raise SelfFolded(f"triangle {triple!r} repeats an edge")
            for e in edges:
                counts[e] = counts.get(e, 0) + 1
        e_max = max(counts)
        for e in range(e_max + 1):
            if counts.get(e, 0) != 2:
                raise EdgeDegree(f"edge {e} used {counts.get(e, 0)} times, expected 2")
        if 2 * (e_max + 1) != 3 * len(triples):
            raise EdgeDegree("edge indices are not exactly 0..3F/2-1")

    @staticmethod
    def _orient(triples):
        """Reverse triangles (a no-op on the glued surface) until every edge
        occurs once forwards, once backwards; reject non-orientable gluings.
        Also checks the dual gluing graph is connected."""
        occ = {}  # edge -> [(tri, sign)]
        for t, triple in enumerate(triples):
            for lab in triple:
                occ.setdefault(edge_of(lab), []).append((t, 1 if lab >= 0 else -1))
        state = {0: 1}  # triangle -> +1 keep, -1 reverse
        queue = [0]
        while queue:
            t = queue.pop()
            for lab in triples[t]:
                (t1, s1), (t2, s2) = occ[edge_of(lab)]
                other, s_other, s_here = (t2, s2, s1) if t1 == t else (t1, s1, s2)
                # opposite signs after reorientation <=> orientable gluing
                want = -1 * state[t] * s_here * s_other
                if other not in state:
                    state[other] = want
                    queue.append(other)
                elif state[other] != want:
                    raise NotOrientable("edge gluing admits no consistent orientation")
        if len(state) != len(triples):
            raise Disconnected("dual gluing graph is not connected")
        out = []
        for t, triple in enumerate(triples):
            if state[t] == 1:
                out.append(triple)
            else:
                out.append(tuple(~lab for lab in reversed(triple)))
        return out

    def _trace_links(self):
        """Corner cycles around punctures.

        The corner after slot k of triangle t sits between labels t[k]
        (incoming) and t[k+1] (outgoing); rotating around the vertex across
        the incoming side lands at the corner before the other occurrence
        of that side.  Cycles are listed by least corner, each rotated to
        start at its least corner.
        """
        def link_next(corner):
            t, k = corner
            t2, j = self.position[~self.triangles[t][k]]
            return (t2, (j - 1) % 3)

        corners = [(t, k) for t in range(len(self.triangles)) for k in range(3)]
        seen = set()
        links = []
        for start in corners:
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            cur = link_next(start)
            while cur != start:
                cycle.append(cur)
                seen.add(cur)
                cur = link_next(cur)
            m = cycle.index(min(cycle))
            links.append(tuple(cycle[m:] + cycle[:m]))
        links.sort()
        return tuple(links)

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.triangles == other.triangles

    def __hash__(self):
        return hash(self.triangles)

    def __repr__(self):
        return f"Triangulation({list(map(list, self.triangles))!r})"

    # -- derived queries -----------------------------------------------------

    @property
    def face_count(self):
        return len(self.triangles)

    def corner_vertex(self, t, k):
        """Puncture id at the corner after slot k of triangle t."""
        return self._corner_vertex[(t, k)]

    @property
    def _corner_vertex(self):
        try:
            return self.__corner_vertex
        except AttributeError:
            table = {}
            for v, cycle in enumerate(self.vertex_links):
                for corner in cycle:
                    table[corner] = v
            self.__corner_vertex = table
            return table

    def vertex_link_weights(self, v):
        """Normal coordinates of the curve encircling puncture v: the weight
        on edge e counts the ends of e at v."""
        w = [0] * self.edge_count
        for (t, k) in self.vertex_links[v]:
            # the corner's outgoing side t[k+1] leaves v along that edge end
            w[edge_of(self.triangles[t][(k + 1) % 3])] += 1
        return tuple(w)

    def to_json_dict(self):
        """Signed-triple JSON form; magnitudes are edge index + 1."""
        return {
            "edges": self.edge_count,
            "triangles": [
                [(edge_of(l) + 1) * (1 if l >= 0 else -1) for l in t]
                for t in self.triangles
            ],
        }

    @classmethod
    def from_json_dict(cls, data):
        triangles = []
        for raw in data["triangles"]:
            triple = []
            for s in raw:
                if not isinstance(s, int) or s == 0:
                    raise InvalidInput(f"bad signed edge reference {s!r}")
                e = abs(s) - 1
                triple.append(e if s > 0 else ~e)
            triangles.append(triple)
        tri = cls(triangles)
        if "edges" in data and data["edges"] != tri.edge_count:
            raise EdgeDegree(
                f"declared edge count {data['edges']} != actual {tri.edge_count}")
        return tri

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class FlipRecord:
    """One diagonal exchange.

    ``quad_sides`` lists the four boundary sides (a, b, c, d) of the quad
    around the flipped edge in cyclic order: a, b in one adjacent triangle,
    c, d in the other, a opposite c.  The two adjacent triangles are
    always distinct.
    """

    flipped_edge: int
    quad_sides: tuple
    source: Triangulation
    target: Triangulation


def flip(tri, e):
    """Replace edge e by the opposite diagonal of its quad.

    Refuses configurations where both sides of e lie in one triangle and
    flips that would create a self-folded triangle (v1 keeps the
    no-self-folded invariant closed under flips).
    """
    if not 0 <= e < tri.edge_count:
        raise NotFlippable(f"no edge {e}")
    t1, i1 = tri.position[e]
    t2, i2 = tri.position[~e]
    if t1 == t2:
        raise NotFlippable(f"edge {e} is self-adjacent")
    tr1, tr2 = tri.triangles[t1], tri.triangles[t2]
    alpha, beta = tr1[(i1 + 1) % 3], tr1[(i1 + 2) % 3]
    gamma, delta = tr2[(i2 + 1) % 3], tr2[(i2 + 2) % 3]
    if edge_of(delta) == edge_of(alpha) or edge_of(beta) == edge_of(gamma):
        raise NotFlippable(f"flipping edge {e} would create a self-folded triangle")
    new_triples = [t for k, t in enumerate(tri.triangles) if k not in (t1, t2)]
    new_triples.append((e, delta, alpha))
    new_triples.append((~e, beta, gamma))
    target = Triangulation(new_triples)
    rec = FlipRecord(
        flipped_edge=e,
        quad_sides=(edge_of(alpha), edge_of(beta), edge_of(gamma), edge_of(delta)),
        source=tri,
        target=target,
    )
    return target, rec


def apply_relabel(tri, perm, reverse=False):
    """Image triangulation under an edge relabelling, optionally composed
    with an orientation reversal."""
    if sorted(perm) != list(range(tri.edge_count)):
        raise InvalidInput(f"relabelling {perm!r} is not a permutation of the edges")

    def phi(lab):
        e = edge_of(lab)
        return perm[e] if lab >= 0 else ~perm[e]

    triples = []
    for t in tri.triangles:
        if reverse:
            triples.append((~phi(t[2]), ~phi(t[1]), ~phi(t[0])))
        else:
            triples.append((phi(t[0]), phi(t[1]), phi(t[2])))
    return Triangulation(triples)


def same_frame(a, b):
    """Equality of triangulations up to per-edge orientation reversal.

    This is the right identity for coordinate frames: reversing an edge's
    orientation changes no normal-coordinate semantics, and flipping an
    edge twice lands exactly here rather than at strict equality.
    """
    if not isinstance(a, Triangulation) or not isinstance(b, Triangulation):
        return False
    if a.edge_count != b.edge_count or a.face_count != b.face_count:
        return False
    if a.triangles == b.triangles:
        return True

    rotations = {}
    for t, triple in enumerate(b.triangles):
        for i in range(3):
            rotations.setdefault(tuple(edge_of(x) for x in triple[i:] + triple[:i]),
                                 []).append((t, i))

    flips = {}  # edge -> 0 keep orientation, 1 reverse

    def consistent(a_triple, b_triple):
        changes = {}
        for la, lb in zip(a_triple, b_triple):
            if edge_of(la) != edge_of(lb):
                return None
            req = 0 if (la >= 0) == (lb >= 0) else 1
            e = edge_of(la)
            known = flips.get(e, changes.get(e))
            if known is None:
                changes[e] = req
            elif known != req:
                return None
        return changes

    used = [False] * b.face_count

    def match(k):
        if k == a.face_count:
            return True
        a_triple = a.triangles[k]
        key = tuple(edge_of(x) for x in a_triple)
        for (t, i) in rotations.get(key, ()):
            if used[t]:
                continue
            b_triple = b.triangles[t][i:] + b.triangles[t][:i]
            changes = consistent(a_triple, b_triple)
            if changes is None:
                continue
            used[t] = True
            flips.update(changes)
            if match(k + 1):
                return True
            used[t] = False
            for e in changes:
                del flips[e]
        return False

    return match(0)


def frame_automorphisms(tri):
    """All (perm, reverse) relabellings mapping the triangulation to itself
    up to per-edge orientation reversal, lex-sorted.

    Candidates are generated by backtracking over triangle matchings on
    unsigned labels, then validated against the full gluing.
    """
    f = tri.face_count
    unsigned = [tuple(edge_of(x) for x in t) for t in tri.triangles]
    results = []
    for reverse in (False, True):
        sources = unsigned if not reverse else [t[::-1] for t in unsigned]
        seen = set()

        def backtrack(k, perm, used):
            if k == f:
                p = tuple(perm)
                if p not in seen:
                    seen.add(p)
                    if same_frame(apply_relabel(tri, list(p), reverse), tri):
                        results.append((p, reverse))
                return
            src = sources[k]
            for t in range(f):
                if used[t]:
                    continue
                for i in range(3):
                    tgt = unsigned[t][i:] + unsigned[t][:i]
                    changes = {}
                    ok = True
                    for es, et in zip(src, tgt):
                        known = perm[es] if perm[es] is not None else changes.get(es)
                        if known is None:
                            if et in used_targets or et in changes.values():
                                ok = False
                                break
                            changes[es] = et
                        elif known != et:
                            ok = False
                            break
                    if not ok:
                        continue
                    for es, et in changes.items():
                        perm[es] = et
                        used_targets.add(et)
                    used[t] = True
                    backtrack(k + 1, perm, used)
                    used[t] = False
                    for es, et in changes.items():
                        perm[es] = None
                        used_targets.discard(et)

        used_targets = set()
        backtrack(0, [None] * tri.edge_count, [False] * f)
    return sorted(set(results))


def build_triangulation(spec):
    """Validated triangulation from a list of signed label triples.

    Accepts internal labels (e / ~e) directly; JSON input goes through
    :meth:`Triangulation.from_json_dict`.
    """
    return Triangulation(spec)
