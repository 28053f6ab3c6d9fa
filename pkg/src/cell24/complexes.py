"""Cellular chain complexes of glued, truncated 24-cells.

Truncating the ideal 24-cell at its vertices gives a compact 4-polytope:
the octahedral sides become truncated octahedra, each ridge becomes a
hexagon, each vertex grows a cube (its link), each side sprouts a square
at each of its six vertices, and each polytope edge is cut to a compact
segment with a corner at either end.  A side-pairing glues the boundary
cells in pairs; the quotient is a compact manifold with boundary whose
cellular chain complex this module assembles with exact integer
orientation signs.

The builder supports several sheets (copies of the polytope) with a
per-side sheet shift, which is how orientable double covers are built.

All geometry lives in the affine chart x5 = 1, where the ideal 24-cell is
the Euclidean 24-cell; corner points are scaled by 8 to stay integral, and
orientation comparisons are signs of small integer determinants.
"""


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        total += term if j % 2 == 0 else -term
    return total


def _diffs(points):
    p0 = points[0]
    return [tuple(x - y for x, y in zip(p, p0)) for p in points[1:]]


def _orientation_sign(basis_a, basis_b):
    """Sign of the change of basis between two bases of one k-subspace.

    Both are lists of k integer 4-vectors spanning the same subspace; the
    sign is sgn det(A^T B), valid because det(A^T A) > 0.
    """
    gram = [[sum(x * y for x, y in zip(a, b)) for b in basis_b]
            for a in basis_a]
    d = _det(gram)
    if d == 0:
        raise AssertionError("degenerate orientation comparison")
    return 1 if d > 0 else -1


class _Cells:
    """Instance cells of one dimension-and-type, with union-find and the
    identification edges that generated the classes."""

    def __init__(self, keys):
        self.keys = list(keys)
        self.index = {key: k for k, key in enumerate(self.keys)}
        self.parent = list(range(len(self.keys)))
        self.edges = [[] for _ in self.keys]   # (neighbor, corner_map)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def identify(self, x, y, fwd, bwd):
        self.edges[x].append((y, fwd))
        self.edges[y].append((x, bwd))
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def roots(self):
        return [k for k in range(len(self.keys)) if self.find(k) == k]


class QuotientComplex:
    """Cells of the glued truncated manifold with integer boundary maps.

    boundaries[k] is the matrix of d_k: C_k -> C_{k-1} (rows indexed by
    (k-1)-cell classes, columns by k-cell classes).  cell_counts gives the
    number of classes per dimension; counts_by_type breaks the middle
    dimensions down by cell type.
    """

    def __init__(self, cell_counts, boundaries, counts_by_type):
        self.cell_counts = cell_counts
        self.boundaries = boundaries
        self.counts_by_type = counts_by_type
        self._check_chain_complex()

    def euler_characteristic(self):
        total = 0
        for k, n in enumerate(self.cell_counts):
            total += n if k % 2 == 0 else -n
        return total

    def _check_chain_complex(self):
        for k in (2, 3, 4):
            a, b = self.boundaries[k - 1], self.boundaries[k]
            if not a or not b or not a[0] or not b[0]:
                continue
            for j in range(len(b[0])):
                for i in range(len(a)):
                    if sum(a[i][l] * b[l][j] for l in range(len(b))):
                        raise AssertionError("dd != 0 into degree %d" % (k - 2))


class _Builder:
    def __init__(self, p, nsheets, sheet_shift):
        self.p = p
        self.model = p.model
        self.nsheets = nsheets
        self.sheet_shift = sheet_shift or [0] * 25
        self.vmaps = [None] + [p.vmap(i) for i in range(1, 25)]
        self._corner_points()
        self._instances()
        self._identify_all()
        self.carried = {
            "1t": self._transport(self.d1t, self.f1t),
            "1c": self._transport(self.d1c, self.f1c),
            "2h": self._transport(self.d2h, self.f2h),
            "2s": self._transport(self.d2s, self.f2s),
            "3s": self._transport(self.d3s, self.f3s),
            "3c": dict(enumerate(self.f3c)),
        }

    # -- geometry ------------------------------------------------------

    def _corner_points(self):
        model = self.model
        pts = {}
        for e, ((a, b), _) in enumerate(model.edges):
            va, vb = model.vertices[a], model.vertices[b]
            pts[(a, e)] = tuple(3 * va[k] + vb[k] for k in range(4))
            pts[(b, e)] = tuple(3 * vb[k] + va[k] for k in range(4))
        self.cpt = pts

    def pts(self, corner_keys):
        return [self.cpt[c] for c in corner_keys]

    # -- instance cells and structural frames --------------------------

    def _instances(self):
        model = self.model
        sheets = range(self.nsheets)
        self.corners = _Cells([(t, v, e) for t in sheets
                               for e, ((a, b), _) in enumerate(model.edges)
                               for v in (a, b)])
        self.d1t = _Cells([(t, e) for t in sheets for e in range(96)])
        self.d1c = _Cells([(t, v, r) for t in sheets for r in range(96)
                           for v in model.ridges[r][1]])
        self.d2h = _Cells([(t, r) for t in sheets for r in range(96)])
        self.d2s = _Cells([(t, v, s) for t in sheets for s in range(1, 25)
                           for v in model.sorted_side_vertices[s]])
        self.d3s = _Cells([(t, s) for t in sheets for s in range(1, 25)])
        self.d3c = _Cells([(t, v) for t in sheets for v in range(1, 25)])

        self.f1t = [self._edge_frame(key) for key in self.d1t.keys]
        self.f1c = [self._cube_edge_frame(key) for key in self.d1c.keys]
        self.f2h = [tuple(self.hexagon_circuit(key[1])[:3])
                    for key in self.d2h.keys]
        self.f2s = [tuple(self.square_circuit(key[1], key[2])[:3])
                    for key in self.d2s.keys]
        self.f3s = [self._side_frame(key[1]) for key in self.d3s.keys]
        self.f3c = [self._cube_frame(key[1]) for key in self.d3c.keys]

    def edge_between(self, v, w):
        return self.model.edge_index[tuple(sorted((v, w)))]

    def other_end(self, e, v):
        a, b = self.model.edges[e][0]
        return b if v == a else a

    def _edge_frame(self, key):
        t, e = key
        a, b = self.model.edges[e][0]
        return ((a, e), (b, e))

    def _cube_edge_frame(self, key):
        t, v, r = key
        x, y = sorted(w for w in self.model.ridges[r][1] if w != v)
        return ((v, self.edge_between(v, x)), (v, self.edge_between(v, y)))

    def hexagon_circuit(self, r):
        a, b, c = self.model.ridges[r][1]
        return [(a, self.edge_between(a, b)), (b, self.edge_between(a, b)),
                (b, self.edge_between(b, c)), (c, self.edge_between(b, c)),
                (c, self.edge_between(a, c)), (a, self.edge_between(a, c))]

    def ridge_at(self, v, e1, e2):
        """The ridge through v containing both polytope edges e1, e2."""
        w1, w2 = self.other_end(e1, v), self.other_end(e2, v)
        return self.model.ridge_index.get(tuple(sorted((v, w1, w2))))

    def square_circuit(self, v, s):
        model = self.model
        edges = [e for e in model.edges_at_vertex[v]
                 if s in model.edges[e][1]]
        if len(edges) != 4:
            raise AssertionError("vertex figure in a side is not a square")

        def consecutive(e1, e2):
            r = self.ridge_at(v, e1, e2)
            return r is not None and s in model.ridges[r][0]

        cyc = [edges[0]]
        rest = edges[1:]
        while rest:
            nxt = [e for e in rest if consecutive(cyc[-1], e)]
            cyc.append(nxt[0])
            rest.remove(nxt[0])
        return [(v, e) for e in cyc]

    def side_corners(self, s):
        return [(v, e) for e in self.model.edges_of_side[s]
                for v in self.model.edges[e][0]]

    def cube_corners(self, v):
        return [(v, e) for e in self.model.edges_at_vertex[v]]

    def _side_frame(self, s):
        c0 = min(self.side_corners(s))
        v, e = c0
        w = self.other_end(e, v)
        nbrs = [(w, e)]
        for r in self.model.ridges_of_edge[e]:
            if s in self.model.ridges[r][0]:
                z = [x for x in self.model.ridges[r][1] if x not in (v, w)][0]
                nbrs.append((v, self.edge_between(v, z)))
        nbrs.sort()
        if len(nbrs) != 3:
            raise AssertionError("truncated octahedron corner is not trivalent")
        return (c0,) + tuple(nbrs)

    def _cube_frame(self, v):
        c0 = min(self.cube_corners(v))
        _, e = c0
        w = self.other_end(e, v)
        nbrs = []
        for r in self.model.ridges_of_edge[e]:
            z = [x for x in self.model.ridges[r][1] if x not in (v, w)][0]
            nbrs.append((v, self.edge_between(v, z)))
        nbrs.sort()
        if len(nbrs) != 3:
            raise AssertionError("cube corner is not trivalent")
        return (c0,) + tuple(nbrs)

    # -- identifications -----------------------------------------------

    def _row_corner_maps(self, i, t):
        """Forward and backward corner maps of the row of side i, sheet t."""
        model = self.model
        j = self.p.sigma[i]
        vm = self.vmaps[i]
        vm_inv = self.vmaps[j]
        t2 = (t ^ self.sheet_shift[i]) % self.nsheets

        def fwd(key):
            v, e = key
            a, b = model.edges[e][0]
            return (vm[v], model.edge_index[tuple(sorted((vm[a], vm[b])))])

        def bwd(key):
            v, e = key
            a, b = model.edges[e][0]
            return (vm_inv[v],
                    model.edge_index[tuple(sorted((vm_inv[a], vm_inv[b])))])

        return t2, fwd, bwd

    def _identify_all(self):
        model = self.model
        for i in range(1, 25):
            j = self.p.sigma[i]
            if i > j:
                continue
            vm = self.vmaps[i]
            for t in range(self.nsheets):
                t2, fwd, bwd = self._row_corner_maps(i, t)
                pack = (t, t2, fwd, bwd)
                for e in model.edges_of_side[i]:
                    e2 = self._edge_img(vm, e)
                    self._link(self.d1t, (t, e), (t2, e2), pack)
                    a, b = model.edges[e][0]
                    for v in (a, b):
                        self.corners.identify(
                            self.corners.index[(t, v, e)],
                            self.corners.index[(t2, vm[v], e2)],
                            None, None)
                for r in model.ridges_of_side[i]:
                    r2 = self._ridge_img(vm, r)
                    self._link(self.d2h, (t, r), (t2, r2), pack)
                    for v in model.ridges[r][1]:
                        self._link(self.d1c, (t, v, r), (t2, vm[v], r2), pack)
                for v in model.sorted_side_vertices[i]:
                    self._link(self.d2s, (t, v, i), (t2, vm[v], j), pack)
                self._link(self.d3s, (t, i), (t2, j), pack)

    def _edge_img(self, vm, e):
        a, b = self.model.edges[e][0]
        return self.model.edge_index[tuple(sorted((vm[a], vm[b])))]

    def _ridge_img(self, vm, r):
        return self.model.ridge_index[
            tuple(sorted(vm[v] for v in self.model.ridges[r][1]))]

    def _link(self, cells, key_src, key_dst, pack):
        t, t2, fwd, bwd = pack
        cells.identify(cells.index[key_src], cells.index[key_dst], fwd, bwd)

    # -- frame transport -----------------------------------------------

    def _transport(self, cells, frames):
        """Carry each class representative's frame to every instance.

        carried[x] is a tuple of (v, e) corner keys giving the class
        orientation as seen on instance x.  Conflicting orientations along
        identification loops mean the input violates the manifold
        conditions and raise.
        """
        carried = {}
        for root in cells.roots():
            carried[root] = tuple(frames[root])
            queue = [root]
            while queue:
                x = queue.pop()
                fx = carried[x]
                for y, cmap in cells.edges[x]:
                    fy = tuple(cmap(c) for c in fx)
                    if y in carried:
                        if len(fy) >= 2:
                            a = _diffs(self.pts(fy))
                            b = _diffs(self.pts(carried[y]))
                            if _orientation_sign(a, b) != 1:
                                raise AssertionError(
                                    "orientation conflict while gluing cells")
                    else:
                        carried[y] = fy
                        queue.append(y)
        if len(carried) != len(cells.keys):
            raise AssertionError("instances unreachable from class roots")
        return carried

    # -- boundary matrices ---------------------------------------------

    def one_cell_class_and_frame(self, c1_ids, t, c_from, c_to):
        """The 1-cell instance between adjacent corners, with its carried
        frame; corners are (v, e) keys on sheet t."""
        (v1, e1), (v2, e2) = c_from, c_to
        if e1 == e2 and v1 != v2:
            inst = self.d1t.index[(t, e1)]
            return c1_ids.of(self.d1t, inst), self.carried["1t"][inst]
        if v1 == v2 and e1 != e2:
            r = self.ridge_at(v1, e1, e2)
            if r is None:
                raise AssertionError("corners not joined by a cube edge")
            inst = self.d1c.index[(t, v1, r)]
            return c1_ids.of(self.d1c, inst), self.carried["1c"][inst]
        raise AssertionError("corners are not adjacent")

    def polygon_boundary(self, bmat, col, circuit, frame, t, c1_ids):
        n = len(circuit)
        idx0 = circuit.index(frame[0])
        idx1 = circuit.index(frame[1])
        if (idx0 + 1) % n == idx1:
            ordered = [circuit[(idx0 + k) % n] for k in range(n)]
        elif (idx0 - 1) % n == idx1:
            ordered = [circuit[(idx0 - k) % n] for k in range(n)]
        else:
            raise AssertionError("polygon frame is not consecutive")
        for k in range(n):
            c_from, c_to = ordered[k], ordered[(k + 1) % n]
            row, carried = self.one_cell_class_and_frame(c1_ids, t,
                                                         c_from, c_to)
            if carried == (c_from, c_to):
                bmat[row][col] += 1
            elif carried == (c_to, c_from):
                bmat[row][col] -= 1
            else:
                raise AssertionError("polygon side frame mismatch")

    def add_facet(self, bmat, col, row, framepts, cellpts,
                  facet_framepts, facetpts):
        m_c, m_f = len(cellpts), len(facetpts)
        sum_c = [sum(q[k] for q in cellpts) for k in range(4)]
        sum_f = [sum(q[k] for q in facetpts) for k in range(4)]
        outward = tuple(m_c * sum_f[k] - m_f * sum_c[k] for k in range(4))
        basis_a = _diffs(framepts)
        basis_b = [outward] + _diffs(facet_framepts)
        bmat[row][col] += _orientation_sign(basis_a, basis_b)

    def build(self):
        model = self.model
        c0 = _ClassIds([self.corners])
        c1 = _ClassIds([self.d1t, self.d1c])
        c2 = _ClassIds([self.d2h, self.d2s])
        c3 = _ClassIds([self.d3s, self.d3c])
        n0, n1, n2, n3 = c0.count, c1.count, c2.count, c3.count
        n4 = self.nsheets

        b1 = [[0] * n1 for _ in range(n0)]
        for cells, frames in ((self.d1t, self.f1t), (self.d1c, self.f1c)):
            for k in cells.roots():
                t = cells.keys[k][0]
                col = c1.of(cells, k)
                f0, f1 = frames[k]
                b1[c0.of(self.corners, self.corners.index[(t,) + f1])][col] += 1
                b1[c0.of(self.corners, self.corners.index[(t,) + f0])][col] -= 1

        b2 = [[0] * n2 for _ in range(n1)]
        for k in self.d2h.roots():
            t, r = self.d2h.keys[k]
            self.polygon_boundary(b2, c2.of(self.d2h, k),
                                  self.hexagon_circuit(r), self.f2h[k], t, c1)
        for k in self.d2s.roots():
            t, v, s = self.d2s.keys[k]
            self.polygon_boundary(b2, c2.of(self.d2s, k),
                                  self.square_circuit(v, s), self.f2s[k],
                                  t, c1)

        b3 = [[0] * n3 for _ in range(n2)]
        for k in self.d3s.roots():
            t, s = self.d3s.keys[k]
            col = c3.of(self.d3s, k)
            cellpts = self.pts(self.side_corners(s))
            framepts = self.pts(self.f3s[k])
            for r in model.ridges_of_side[s]:
                inst = self.d2h.index[(t, r)]
                self.add_facet(b3, col, c2.of(self.d2h, inst),
                               framepts, cellpts,
                               self.pts(self.carried["2h"][inst]),
                               self.pts(self.hexagon_circuit(r)))
            for v in model.sorted_side_vertices[s]:
                inst = self.d2s.index[(t, v, s)]
                self.add_facet(b3, col, c2.of(self.d2s, inst),
                               framepts, cellpts,
                               self.pts(self.carried["2s"][inst]),
                               self.pts(self.square_circuit(v, s)))
        for k in self.d3c.roots():
            t, v = self.d3c.keys[k]
            col = c3.of(self.d3c, k)
            cellpts = self.pts(self.cube_corners(v))
            framepts = self.pts(self.f3c[k])
            for s in sorted(model.vertex_sides[v]):
                inst = self.d2s.index[(t, v, s)]
                self.add_facet(b3, col, c2.of(self.d2s, inst),
                               framepts, cellpts,
                               self.pts(self.carried["2s"][inst]),
                               self.pts(self.square_circuit(v, s)))

        b4 = [[0] * n4 for _ in range(n3)]
        all_corners = [(v, e) for e, ((a, b), _) in enumerate(model.edges)
                       for v in (a, b)]
        toppts = self.pts(all_corners)
        frame_idx = _affine_frame(toppts)
        framepts = [toppts[i] for i in frame_idx]
        for t in range(self.nsheets):
            for s in range(1, 25):
                inst = self.d3s.index[(t, s)]
                self.add_facet(b4, t, c3.of(self.d3s, inst), framepts, toppts,
                               self.pts(self.carried["3s"][inst]),
                               self.pts(self.side_corners(s)))
            for v in range(1, 25):
                inst = self.d3c.index[(t, v)]
                self.add_facet(b4, t, c3.of(self.d3c, inst), framepts, toppts,
                               self.pts(self.carried["3c"][inst]),
                               self.pts(self.cube_corners(v)))

        counts_by_type = {
            "corner_classes": n0,
            "trunc_edge_classes": len(self.d1t.roots()),
            "cube_edge_classes": len(self.d1c.roots()),
            "hexagon_classes": len(self.d2h.roots()),
            "square_classes": len(self.d2s.roots()),
            "side_classes": len(self.d3s.roots()),
            "cube_classes": len(self.d3c.roots()),
            "four_cells": n4,
        }
        return QuotientComplex((n0, n1, n2, n3, n4),
                               {1: b1, 2: b2, 3: b3, 4: b4}, counts_by_type)


class _ClassIds:
    def __init__(self, groups):
        self.maps = []
        n = 0
        for cells in groups:
            m = {}
            for k in cells.roots():
                m[k] = n
                n += 1
            self.maps.append((cells, m))
        self.count = n

    def of(self, cells, instance):
        for c, m in self.maps:
            if c is cells:
                return m[c.find(instance)]
        raise KeyError("unknown cell group")


def _affine_frame(points):
    """Indices of five affinely independent points, greedily chosen."""
    chosen = [0]
    for i in range(1, len(points)):
        trial = chosen + [i]
        vecs = _diffs([points[j] for j in trial])
        gram = [[sum(x * y for x, y in zip(a, b)) for b in vecs]
                for a in vecs]
        if _det(gram) != 0:
            chosen = trial
            if len(chosen) == 5:
                return chosen
    raise AssertionError("could not span the 4-cell")


def build_quotient_complex(p, nsheets=1, sheet_shift=None):
    """Assemble the truncated quotient complex of a side-pairing.

    sheet_shift[i] in {0, 1} says which sheet the row of side i glues to,
    relative to its source sheet; all zeros builds a single copy.  The
    pairing must satisfy the manifold conditions.
    """
    builder = _Builder(p, nsheets, sheet_shift)
    return builder.build(), builder
