"""Integer normal coordinates for multicurves.

A nonnegative integer weight per edge, meeting the per-triangle parity and
triangle-inequality conditions, is the normal form of a unique disjoint
union of circles, each either essential or a puncture link.  Components
are recovered by tracing the corner arcs: in a triangle with side weights
x, y, z the corner opposite the x-side carries (y+z-x)/2 parallel arcs,
and arcs meet across each edge by matching positions along it.

Weights are plain Python ints, so arbitrarily large twists cannot
overflow; costs are O(total weight).
"""

from __future__ import annotations

from fractions import Fraction

from . import arrangement
from .errors import (
    EmptyLamination,
    FrameMismatch,
    InvalidInput,
    NotConnected,
    ParityViolation,
    PeripheralComponent,
    TriangleInequalityViolation,
)
from .surface import Triangulation, edge_of


def check_triangle_conditions(tri, weights):
    """Raise unless the weights satisfy parity and triangle inequalities."""
    if len(weights) != tri.edge_count:
        raise InvalidInput(
            f"expected {tri.edge_count} weights, got {len(weights)}")
    if any(w < 0 or not isinstance(w, int) for w in weights):
        raise InvalidInput("weights must be nonnegative integers")
    for triple in tri.triangles:
        x, y, z = (weights[edge_of(l)] for l in triple)
        if (x + y + z) % 2:
            raise ParityViolation(
                f"odd weight sum {x + y + z} in triangle {triple}")
        if x > y + z or y > z + x or z > x + y:
            raise TriangleInequalityViolation(
                f"weights ({x}, {y}, {z}) break the triangle inequality in {triple}")


class NormalCoords:
    """A weight vector in normal position on a fixed triangulation."""

    def __init__(self, tri, weights):
        if not isinstance(tri, Triangulation):
            raise InvalidInput("tri must be a Triangulation")
        weights = tuple(int(w) for w in weights)
        check_triangle_conditions(tri, weights)
        self.tri = tri
        self.weights = weights

    def __eq__(self, other):
        return (isinstance(other, NormalCoords)
                and self.tri == other.tri and self.weights == other.weights)

    def __hash__(self):
        return hash((self.tri, self.weights))

    def __repr__(self):
        return f"{type(self).__name__}({list(self.weights)})"

    @property
    def total_weight(self):
        return sum(self.weights)

    def is_empty(self):
        return not any(self.weights)


class Multicurve(NormalCoords):
    """NormalCoords with no puncture-linking component (all essential)."""

    def __init__(self, tri, weights):
        super().__init__(tri, weights)
        linking = _linking_components(tri, self.weights)
        if linking:
            raise PeripheralComponent(
                f"vertex-linking component(s) around puncture(s) {sorted(linking)}",
                punctures=sorted(linking))


def _same_frame_or_raise(a, b):
    if a.tri != b.tri:
        raise FrameMismatch("operands live on different triangulations")


def trace_components(tri, weights):
    """Decompose a weight vector into connected circles.

    Returns a sorted list of (component weight tuple, multiplicity).
    Isotopic parallel circles trace as separate cycles with identical
    weight vectors and are grouped.
    """
    E = tri.edge_count
    if not any(weights):
        return []
    # arcs[point] = list of the two arc partners of each edge point,
    # where point = (edge, absolute position 1..w)
    partners = {}

    def absolute(label, traversal_pos):
        e = edge_of(label)
        return traversal_pos if label >= 0 else weights[e] + 1 - traversal_pos

    for triple in tri.triangles:
        w = [weights[edge_of(l)] for l in triple]
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            corner = (w[i] + w[j] - w[k]) // 2
            for r in range(1, corner + 1):
                a = (edge_of(triple[i]), absolute(triple[i], w[i] + 1 - r))
                b = (edge_of(triple[j]), absolute(triple[j], r))
                partners.setdefault(a, []).append(b)
                partners.setdefault(b, []).append(a)

    for pt, ps in partners.items():
        assert len(ps) == 2, f"point {pt} has {len(ps)} arcs"

    seen = set()
    components = {}
    for start in sorted(partners):
        if start in seen:
            continue
        comp = [0] * E
        prev, cur = None, start
        while True:
            seen.add(cur)
            comp[cur[0]] += 1
            nxts = partners[cur]
            nxt = nxts[0] if nxts[0] != prev else nxts[1]
            # a 2-cycle traverses both arcs between the same two points
            if len(set(nxts)) == 1 and prev is not None:
                nxt = nxts[0]
                if nxt == start and cur != start:
                    pass
            prev, cur = cur, nxt
            if cur == start:
                break
        key = tuple(comp)
        components[key] = components.get(key, 0) + 1
    out = sorted(components.items())
    total = [0] * E
    for comp, mult in out:
        for e in range(E):
            total[e] += mult * comp[e]
    assert tuple(total) == tuple(weights), "component weights do not sum back"
    return out


def _linking_components(tri, weights):
    """Puncture ids whose link occurs as a component (with multiplicity)."""
    links = {tri.vertex_link_weights(v): v for v in range(len(tri.vertex_links))}
    found = []
    for comp, mult in trace_components(tri, weights):
        if comp in links:
            found.extend([links[comp]] * mult)
    return found


def validate(tri, weights):
    """Multicurve from raw weights; errors name the broken condition."""
    return Multicurve(tri, weights)


def strip_peripheral(tri, weights):
    """Remove vertex-linking components.

    Returns (Multicurve, stripped puncture ids with multiplicity).  The
    remainder may be empty.
    """
    check_triangle_conditions(tri, tuple(int(w) for w in weights))
    links = {tri.vertex_link_weights(v): v for v in range(len(tri.vertex_links))}
    kept = [0] * tri.edge_count
    stripped = []
    for comp, mult in trace_components(tri, tuple(weights)):
        if comp in links:
            stripped.extend([links[comp]] * mult)
        else:
            for e in range(tri.edge_count):
                kept[e] += mult * comp[e]
    return Multicurve(tri, kept), sorted(stripped)


def decompose(m):
    """Connected components of a multicurve, with multiplicities."""
    if not isinstance(m, NormalCoords):
        raise InvalidInput("decompose expects NormalCoords")
    cls = type(m) if isinstance(m, Multicurve) else NormalCoords
    return [(cls(m.tri, comp), mult) for comp, mult in trace_components(m.tri, m.weights)]


def is_connected(m):
    comps = trace_components(m.tri, m.weights)
    return len(comps) == 1 and comps[0][1] == 1


def transport_flip(m, rec):
    """Weights after one diagonal exchange.

    New weight on the flipped edge: max(w(a)+w(c), w(b)+w(d)) - w(e) with
    (a, b, c, d) the quad sides, a opposite c.  Involutive, and preserves
    validity, component count and pairwise intersection numbers.
    """
    if m.tri != rec.source:
        raise FrameMismatch("coordinates do not live on the flip's source frame")
    a, b, c, d = rec.quad_sides
    e = rec.flipped_edge
    w = list(m.weights)
    w[e] = max(w[a] + w[c], w[b] + w[d]) - w[e]
    return type(m)(rec.target, w)


def is_disjoint(alpha, beta):
    """Disjointness via additive normal forms.

    Normal coordinates add exactly on disjoint unions and normal forms are
    unique, so alpha and beta are disjoint iff the components of the sum
    are the merged components of the parts.  Equivalent to
    intersection_number == 0; the arrangement algorithm stays as an
    independent cross-check.
    """
    _same_frame_or_raise(alpha, beta)
    merged = {}
    for part in (alpha, beta):
        for comp, mult in trace_components(part.tri, part.weights):
            merged[comp] = merged.get(comp, 0) + mult
    summed = tuple(x + y for x, y in zip(alpha.weights, beta.weights))
    return dict(trace_components(alpha.tri, summed)) == merged


def intersection_number(alpha, beta):
    """Exact geometric intersection number of two multicurves.

    Realises both families taut in every triangle, overlays them with a
    deterministic interleaving on each edge, and removes innermost bigons
    until none remain; the surviving crossing count is i(alpha, beta).
    """
    _same_frame_or_raise(alpha, beta)
    return arrangement.geometric_intersection(alpha.tri, alpha.weights, beta.weights)


class RationalLamination:
    """Weighted disjoint union of pairwise non-isotopic connected curves.

    The rational points of measured lamination space.  Components are kept
    canonically sorted by weight vector.
    """

    def __init__(self, components):
        comps = []
        for curve, coeff in components:
            if not isinstance(curve, Multicurve):
                raise InvalidInput("components must be Multicurves")
            coeff = Fraction(coeff)
            if coeff <= 0:
                raise InvalidInput(f"component weight {coeff} must be positive")
            if not is_connected(curve):
                raise NotConnected(f"component {curve!r} is not connected")
            comps.append((curve, coeff))
        for i, (c1, _) in enumerate(comps):
            for c2, _ in comps[i + 1:]:
                _same_frame_or_raise(c1, c2)
                if c1.weights == c2.weights:
                    raise InvalidInput("isotopic components must be merged")
                if not is_disjoint(c1, c2):
                    raise InvalidInput("components must be pairwise disjoint")
        self.components = tuple(sorted(comps, key=lambda cw: cw[0].weights))

    def __eq__(self, other):
        return (isinstance(other, RationalLamination)
                and self.components == other.components)

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "RationalLamination(%s)" % ", ".join(
            f"{c}*{list(m.weights)}" for m, c in self.components)

    @property
    def tri(self):
        if not self.components:
            raise EmptyLamination("empty lamination has no frame")
        return self.components[0][0].tri

    def is_empty(self):
        return not self.components

    @classmethod
    def from_weights(cls, tri, weighted_vectors):
        """Build from raw (weights, coefficient) pairs, decomposing and
        merging isotopic pieces."""
        acc = {}
        for weights, coeff in weighted_vectors:
            curve = Multicurve(tri, weights)
            for comp, mult in trace_components(tri, curve.weights):
                acc[comp] = acc.get(comp, Fraction(0)) + Fraction(coeff) * mult
        return cls([(Multicurve(tri, comp), c) for comp, c in acc.items() if c])


def lam_intersection(lam, mu):
    """Intersection of rational laminations: bilinear over components."""
    if lam.is_empty() or mu.is_empty():
        return Fraction(0)
    _same_frame_or_raise(lam.components[0][0], mu.components[0][0])
    total = Fraction(0)
    for c1, w1 in lam.components:
        for c2, w2 in mu.components:
            total += w1 * w2 * intersection_number(c1, c2)
    return total


def cut_invariants(c):
    """Topological pieces of the surface cut along a connected curve.

    Returns (pieces, is_separating) where pieces is the sorted list of
    (genus, punctures, boundary circles) of the complementary regions.
    """
    if not isinstance(c, Multicurve):
        raise InvalidInput("cut_invariants expects a Multicurve")
    if not is_connected(c):
        raise NotConnected("cut_invariants needs a connected curve")
    regions = arrangement.complement_regions(c.tri, c.weights)
    pieces = []
    for chi, punctures, walks in regions:
        genus2 = 2 - walks - chi
        assert genus2 >= 0 and genus2 % 2 == 0, (chi, punctures, walks)
        pieces.append((genus2 // 2, punctures, walks))
    pieces.sort()
    sig = c.tri.sig
    assert sum(2 - 2 * g - n - b for g, n, b in pieces) == 2 - 2 * sig.genus - sig.punctures
    assert sum(b for _, _, b in pieces) == 2
    return pieces, len(pieces) == 2
