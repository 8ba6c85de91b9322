"""Exact arrangements of one or two normal families on a triangulation.

Both families are drawn taut (their arcs in each triangle are chords
joining distinct sides, nested at corners), so the only free data is the
interleaving of the two families' crossing points along each edge.  Two
chords of a triangle cross iff their endpoints interleave on the boundary
circle, and the crossings along a chord are totally ordered because the
chords of the other family crossing it are pairwise disjoint; the whole
arrangement is therefore determined combinatorially by the per-edge
shuffles, with no numeric geometry.

The overlay (curves plus the triangulation's own 1-skeleton) is built as a
global rotation system; its faces are disks, and complementary regions of
the curves alone are faces glued across the triangulation-edge segments.
A removable bigon is an unpunctured disk region whose boundary has exactly
two corners, one side on each family; its interior meets triangulation
edges only in "rungs" joining shuffle-adjacent points of opposite
families (anything else would be an edge-bigon against a taut family).
Removing the bigon swaps those adjacent pairs, which cancels exactly the
two corner crossings.  When no bigon remains, the crossing count is the
geometric intersection number.
"""

from __future__ import annotations

from .surface import edge_of


def _interleaved(a0, a1, b0, b1):
    """Do chords with circle indices (a0, a1), (b0, b1) cross?"""
    a0, a1 = min(a0, a1), max(a0, a1)
    return (a0 < b0 < a1) != (a0 < b1 < a1)


class _Chord:
    __slots__ = ("fam", "p", "q", "p_point", "q_point", "crossings", "nodes", "segs")

    def __init__(self, fam, end0, end1):
        # ends: (circle index, point vertex key); orient from smaller index
        if end0[0] > end1[0]:
            end0, end1 = end1, end0
        self.fam = fam
        self.p, self.p_point = end0
        self.q, self.q_point = end1
        self.crossings = []  # (in-endpoint circle idx, crossing vertex key)


class Overlay:
    """One combinatorial drawing of the families given per-edge shuffles."""

    def __init__(self, tri, families, sigma):
        self.tri = tri
        self.families = [tuple(w) for w in families]
        self.sigma = [list(s) for s in sigma]
        for e in range(tri.edge_count):
            counts = [self.sigma[e].count(f) for f in range(len(families))]
            assert counts == [w[e] for w in self.families], "shuffle/weight mismatch"
        self._build()

    # ------------------------------------------------------------------
    def _build(self):
        tri = self.tri
        nfam = len(self.families)
        self.edges = []          # (kind, fam, v0, v1, meta)
        self.rot = {}            # vertex key -> list of darts (CCW)
        edge_ids = {}

        def add_edge(kind, fam, v0, v1, meta):
            self.edges.append((kind, fam, v0, v1, meta))
            return len(self.edges) - 1

        def head(d):
            k, f, v0, v1, m = self.edges[d >> 1]
            return v1 if (d & 1) == 0 else v0

        self._head = head

        # puncture at each end of each edge (via the forward label's corners)
        tail_vertex, head_vertex = {}, {}
        for e in range(tri.edge_count):
            t, i = tri.position[e]
            tail_vertex[e] = tri.corner_vertex(t, (i - 1) % 3)
            head_vertex[e] = tri.corner_vertex(t, i)

        # 1. segments along triangulation edges
        seg = {}
        for e in range(tri.edge_count):
            m = len(self.sigma[e])
            chain = ([("v", tail_vertex[e])]
                     + [("p", e, k) for k in range(m)]
                     + [("v", head_vertex[e])])
            for k in range(m + 1):
                seg[(e, k)] = add_edge("s", None, chain[k], chain[k + 1], (e, k))

        # per-family positions along each edge, in absolute order
        fam_pos = [[[] for _ in range(tri.edge_count)] for _ in range(nfam)]
        for e in range(tri.edge_count):
            for k, f in enumerate(self.sigma[e]):
                fam_pos[f][e].append(k)

        # 2. chords and crossings, per triangle
        chords_at_point = {}   # (point key, triangle) -> (chord, at_p_end)
        tri_chords = []
        crossing_keys = set()
        for t, triple in enumerate(tri.triangles):
            # boundary circle: corner (t,2), side 0, corner (t,0), side 1, ...
            circle_of = {}
            idx = 0
            side_points = []   # per slot, per family: [(circle idx, point key)]
            for i, lab in enumerate(triple):
                idx += 1  # corner before this side
                e = edge_of(lab)
                order = self.sigma[e] if lab >= 0 else self.sigma[e][::-1]
                ks = range(len(order)) if lab >= 0 else range(len(order) - 1, -1, -1)
                per_fam = [[] for _ in range(nfam)]
                for k in ks:
                    key = ("p", e, k)
                    circle_of[key] = idx
                    per_fam[self.sigma[e][k]].append((idx, key))
                    idx += 1
                side_points.append(per_fam)

            chords = []
            for f in range(nfam):
                w = [self.families[f][edge_of(l)] for l in triple]
                for i in range(3):
                    j, k = (i + 1) % 3, (i + 2) % 3
                    corner = (w[i] + w[j] - w[k]) // 2
                    for r in range(1, corner + 1):
                        end_i = side_points[i][f][w[i] - r]       # traversal pos w_i+1-r
                        end_j = side_points[j][f][r - 1]          # traversal pos r
                        chords.append(_Chord(f, end_i, end_j))
            # crossings between distinct families only
            for ia, ca in enumerate(chords):
                for ib in range(ia + 1, len(chords)):
                    cb = chords[ib]
                    if ca.fam == cb.fam:
                        continue
                    if _interleaved(ca.p, ca.q, cb.p, cb.q):
                        xkey = ("x", t, ia, ib)
                        crossing_keys.add(xkey)
                        in_a = cb.p if ca.p < cb.p < ca.q else cb.q
                        in_b = ca.p if cb.p < ca.p < cb.q else ca.q
                        ca.crossings.append((in_a, xkey))
                        cb.crossings.append((in_b, xkey))
            # split chords into segments; crossings ordered from the p end
            for ci, c in enumerate(chords):
                c.crossings.sort()
                c.nodes = [c.p_point] + [x for _, x in c.crossings] + [c.q_point]
                c.segs = []
                for si in range(len(c.nodes) - 1):
                    c.segs.append(add_edge("c", c.fam, c.nodes[si], c.nodes[si + 1],
                                           (t, ci, si)))
                chords_at_point[(c.p_point, t)] = (c, True)
                chords_at_point[(c.q_point, t)] = (c, False)
            tri_chords.append(chords)

            # rotations at this triangle's crossings
            for ia, ca in enumerate(chords):
                for pos_a, (in_a, xkey) in enumerate(ca.crossings):
                    _, _, ia2, ib2 = xkey
                    if ia != ia2:
                        continue  # write each rotation once, from the A side
                    cb = chords[ib2]
                    pos_b = next(pb for pb, (_, xk) in enumerate(cb.crossings)
                                 if xk == xkey)
                    # darts out of the crossing along each chord
                    a_to_q = ca.segs[pos_a + 1] * 2
                    a_to_p = ca.segs[pos_a] * 2 + 1
                    b_to_q = cb.segs[pos_b + 1] * 2
                    b_to_p = cb.segs[pos_b] * 2 + 1
                    # cb's endpoint inside (ca.p, ca.q) is right of ca directed
                    # p->q; the other endpoint is left.  CCW: q, left, p, right.
                    if in_a == cb.p:
                        b_to_in, b_to_out = b_to_p, b_to_q
                    else:
                        b_to_in, b_to_out = b_to_q, b_to_p
                    self.rot[xkey] = [a_to_q, b_to_out, a_to_p, b_to_in]

        # 3. rotations at shuffle points: toward head, left chord, toward
        # tail, right chord (left = triangle containing the forward label)
        for e in range(tri.edge_count):
            t_left, _ = tri.position[e]
            t_right, _ = tri.position[~e]
            for k in range(len(self.sigma[e])):
                key = ("p", e, k)
                toward_head = seg[(e, k + 1)] * 2
                toward_tail = seg[(e, k)] * 2 + 1

                def chord_dart(tt):
                    c, at_p = chords_at_point[(key, tt)]
                    return c.segs[0] * 2 if at_p else c.segs[-1] * 2 + 1

                self.rot[key] = [toward_head, chord_dart(t_left),
                                 toward_tail, chord_dart(t_right)]

        # 4. rotations at punctures: cross the incoming side of each corner
        # along the vertex link (CCW)
        for v, cycle in enumerate(tri.vertex_links):
            darts = []
            for (t, k) in cycle:
                lab = tri.triangles[t][k]
                e = edge_of(lab)
                if lab >= 0:   # head end of e
                    darts.append(seg[(e, len(self.sigma[e]))] * 2 + 1)
                else:          # tail end of e
                    darts.append(seg[(e, 0)] * 2)
            self.rot[("v", v)] = darts

        # dart -> (vertex, index in rotation)
        self.rot_pos = {}
        for vkey, darts in self.rot.items():
            for i, d in enumerate(darts):
                assert d not in self.rot_pos, "dart in two rotations"
                self.rot_pos[d] = (vkey, i)
        assert len(self.rot_pos) == 2 * len(self.edges), "missing darts"

        self.crossings = crossing_keys
        self._trace_faces()

    # ------------------------------------------------------------------
    def _next_face_dart(self, d):
        """Walking d with its face on the left, the next boundary dart."""
        vkey, i = self.rot_pos[d ^ 1]
        darts = self.rot[vkey]
        return darts[(i - 1) % len(darts)]

    def _trace_faces(self):
        face_of = {}
        faces = []
        for d0 in range(2 * len(self.edges)):
            if d0 in face_of:
                continue
            fid = len(faces)
            walk = []
            d = d0
            while d not in face_of:
                face_of[d] = fid
                walk.append(d)
                d = self._next_face_dart(d)
            assert d == d0, "face walk did not close"
            faces.append(walk)
        self.face_of = face_of
        self.faces = faces
        V = len(self.rot)
        E = len(self.edges)
        F = len(faces)
        g = self.tri.sig.genus
        assert V - E + F == 2 - 2 * g, f"overlay Euler check failed: {V}-{E}+{F}"

        # regions: faces glued across triangulation-edge segments
        parent = list(range(F))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid, (kind, *_rest) in enumerate(self.edges):
            if kind == "s":
                a, b = find(self.face_of[eid * 2]), find(self.face_of[eid * 2 + 1])
                if a != b:
                    parent[a] = b
        self.region_of = [find(f) for f in range(F)]

    # ------------------------------------------------------------------
    def region_data(self):
        """Per region: faces, interior segment edges, chord dart incidences,
        puncture vertices."""
        regions = {}
        for f in range(len(self.faces)):
            r = self.region_of[f]
            regions.setdefault(r, {"faces": [], "segs": [], "chords": [],
                                   "punctures": set()})["faces"].append(f)
        for eid, (kind, fam, v0, v1, meta) in enumerate(self.edges):
            r = self.region_of[self.face_of[eid * 2]]
            if kind == "s":
                assert r == self.region_of[self.face_of[eid * 2 + 1]]
                regions[r]["segs"].append(eid)
            else:
                regions[r]["chords"].append(eid * 2)
                r2 = self.region_of[self.face_of[eid * 2 + 1]]
                regions[r2]["chords"].append(eid * 2 + 1)
        for vkey in self.rot:
            if vkey[0] == "v":
                d0 = self.rot[vkey][0]
                # a puncture's whole star lies in one region
                r = self.region_of[self.face_of[d0]]
                regions[r]["punctures"].add(vkey[1])
        return regions

    def _euler_of_region(self, r, data):
        """Euler characteristic of the abstract closure (walls doubled)."""
        faces = set(data["faces"])
        interior = set(data["segs"])
        E_hat = len(interior) + len(data["chords"])
        F_hat = len(faces)
        # sectors around each vertex, merged across interior segment darts
        V_hat = 0
        touched = {}
        for f in faces:
            for d in self.faces[f]:
                vkey, i = self.rot_pos[d]
                touched.setdefault(vkey, set()).add(i)
        for vkey, idxs in touched.items():
            darts = self.rot[vkey]
            k = len(darts)
            par = {i: i for i in idxs}

            def find(x):
                while par[x] != x:
                    par[x] = par[par[x]]
                    x = par[x]
                return x

            for i in list(idxs):
                j = (i + 1) % k
                if j not in par:
                    continue
                d_between = darts[j]
                if (d_between >> 1) in interior:
                    a, b = find(i), find(j)
                    if a != b:
                        par[a] = b
            V_hat += len({find(i) for i in idxs})
        return V_hat - E_hat + F_hat

    def _next_region_dart(self, d):
        """Next wall dart of the region boundary: rotate past interior
        triangulation-edge darts at the head of d (they join adjacent
        sectors of the same region)."""
        vkey, i = self.rot_pos[d ^ 1]
        darts = self.rot[vkey]
        j = (i - 1) % len(darts)
        while self.edges[darts[j] >> 1][0] == "s":
            j = (j - 1) % len(darts)
        return darts[j]

    def _region_walks(self, data):
        """Boundary walks of a region's abstract closure, as dart lists."""
        walks = []
        seen = set()
        for d0 in sorted(data["chords"]):
            if d0 in seen:
                continue
            walk = []
            d = d0
            while True:
                assert d not in seen or d == d0
                walk.append(d)
                seen.add(d)
                d = self._next_region_dart(d)
                if d == d0:
                    break
            walks.append(walk)
        return walks

    def region_summaries(self):
        """(chi of abstract closure, puncture count, boundary walk count)
        for every complementary region of the drawn families."""
        out = []
        for r, data in sorted(self.region_data().items()):
            chi = self._euler_of_region(r, data)
            walks = self._region_walks(data)
            out.append((chi, len(data["punctures"]), len(walks)))
        return out

    # ------------------------------------------------------------------
    def find_bigons(self):
        """Removable bigons: unpunctured disk regions bounded by one arc of
        each family meeting at two distinct crossings.  Returns a list of
        rung swap batches, deterministic order."""
        bigons = []
        for r, data in sorted(self.region_data().items()):
            if data["punctures"]:
                continue
            walks = self._region_walks(data)
            if len(walks) != 1:
                continue
            walk = walks[0]
            corners = []
            for i, d in enumerate(walk):
                d2 = walk[(i + 1) % len(walk)]
                if self.edges[d >> 1][1] != self.edges[d2 >> 1][1]:
                    corners.append(self._head(d))
            if len(corners) != 2 or corners[0] == corners[1]:
                continue
            if self._euler_of_region(r, data) != 1:
                continue
            swaps = []
            ok = True
            for eid in data["segs"]:
                _, _, v0, v1, (e, k) = self.edges[eid]
                if v0[0] != "p" or v1[0] != "p":
                    ok = False
                    break
                f0, f1 = self.sigma[e][k - 1], self.sigma[e][k]
                if f0 == f1:
                    ok = False
                    break
                swaps.append((e, k))
            assert ok and swaps, "bigon without a clean rung ladder"
            bigons.append(swaps)
        return bigons

    @property
    def crossing_count(self):
        return len(self.crossings)


def initial_shuffles(tri, u, v, rule="proportional"):
    """Deterministic starting interleavings.

    "proportional" spaces the two families evenly along each edge (close
    to minimal position); "blocks" writes all of the first family first.
    The final count is independent of this choice.
    """
    sigma = []
    for e in range(tri.edge_count):
        a, b = u[e], v[e]
        if rule == "blocks":
            sigma.append([0] * a + [1] * b)
        elif rule == "proportional":
            out = []
            i = j = 1
            while i <= a or j <= b:
                if j > b:
                    out.append(0); i += 1
                elif i > a:
                    out.append(1); j += 1
                elif (2 * i - 1) * b <= (2 * j - 1) * a:
                    out.append(0); i += 1
                else:
                    out.append(1); j += 1
            sigma.append(out)
        else:
            raise ValueError(f"unknown shuffle rule {rule!r}")
    return sigma


def geometric_intersection(tri, u, v, rule="proportional"):
    """Crossing count after full bigon reduction: i(u, v) exactly."""
    if not any(u) or not any(v):
        return 0
    sigma = initial_shuffles(tri, u, v, rule)
    last = None
    while True:
        ov = Overlay(tri, (u, v), sigma)
        if last is not None:
            assert ov.crossing_count < last, "bigon removal must reduce crossings"
        last = ov.crossing_count
        bigons = ov.find_bigons()
        if not bigons:
            return ov.crossing_count
        used = set()
        applied = False
        for swaps in bigons:
            touched = {(e, k - 1) for e, k in swaps} | {(e, k) for e, k in swaps}
            if touched & used:
                continue
            for e, k in swaps:
                sigma[e][k - 1], sigma[e][k] = sigma[e][k], sigma[e][k - 1]
            used |= touched
            applied = True
        assert applied


def complement_regions(tri, w):
    """Regions of the complement of one normal family: list of
    (chi of abstract closure, punctures inside, boundary circles)."""
    sigma = [[0] * w[e] for e in range(tri.edge_count)]
    ov = Overlay(tri, (w,), sigma)
    assert ov.crossing_count == 0
    return ov.region_summaries()
