"""Cusp cross-sections: the cube complex at the ideal vertices, flat
3-manifold identification, and the maximal cusp volume.

The link of an ideal vertex of the right-angled 24-cell is a cube; a
side-pairing glues these cubes along their square faces into a closed flat
3-manifold, one per cusp.  Identification is by orientability and first
homology, which separates the two cases the census needs: the second
non-orientable flat 3-manifold (H1 = Z^2) and the 3-torus (H1 = Z^3).

The maximal cusp volume expands equal horoballs at the vertices of the
cusp class until first tangency, which happens simultaneously at all edge
midpoints.  Each vertex contributes (cube cross-section volume)/(3 h^3) in
an upper-half-space chart sending it to infinity; closed form for the
standard 24-cell: the cross-section is a Euclidean cube of edge 2 at
tangency height h = 2, so each of the 24 vertices contributes 8/24 and the
total is 8.
"""

import numpy as np
from scipy.spatial import ConvexHull

from .complexes import _diffs, _orientation_sign
from .lorentz import lorentz_product4
from .poincare import cusp_count
from .snf import AbelianGroup, homology_of_pair


class MultipleCusps(Exception):
    """The operation needs a one-cusped pairing."""


class CubeComplex:
    """A closed complex of combinatorial cubes glued along square faces.

    Construction data:
      cubes          -- list of hashable cube ids
      corner_points  -- dict (cube, corner) -> integer coordinate tuple,
                        used only for orientation determinants
      faces          -- dict (cube, face) -> list of 4 corners in circuit
                        order
      gluings        -- list of ((cube, face), (cube', face'), corner_map)
                        with corner_map a dict mapping the 4 corners of the
                        first face onto those of the second

    Derived: square/edge/corner classes, integer chain complex, Euler
    characteristic, orientability.
    """

    def __init__(self, cubes, corner_points, faces, gluings):
        self.cubes = list(cubes)
        self.corner_points = corner_points
        self.faces = faces
        self.gluings = list(gluings)
        self._derive()

    # -- structure -------------------------------------------------------

    def _derive(self):
        corners = {}
        for (cube, corner) in self.corner_points:
            corners.setdefault(cube, []).append(corner)
        for cube in self.cubes:
            if len(corners[cube]) != 8:
                raise ValueError("cube %r does not have 8 corners" % (cube,))
        self.cube_corners = corners

        # edge instances from face circuits; each appears in 2 faces
        edge_faces = {}
        self.face_list = sorted(self.faces)
        for fkey in self.face_list:
            circ = self.faces[fkey]
            if len(circ) != 4:
                raise ValueError("face %r is not a square" % (fkey,))
            for k in range(4):
                e = (fkey[0], frozenset((circ[k], circ[(k + 1) % 4])))
                edge_faces.setdefault(e, []).append(fkey)
        for e, fs in edge_faces.items():
            if len(fs) != 2:
                raise ValueError("edge %r lies in %d faces" % (e, len(fs)))
        self.edge_list = sorted(edge_faces, key=_edge_sort_key)
        self.edge_faces = edge_faces
        for cube in self.cubes:
            n = sum(1 for e in self.edge_list if e[0] == cube)
            if n != 12:
                raise ValueError("cube %r has %d edges" % (cube, n))

        glued = {}
        for (f1, f2, cmap) in self.gluings:
            for f in (f1, f2):
                if f in glued:
                    raise ValueError("face %r glued twice" % (f,))
            if f1 == f2:
                raise ValueError("face %r glued to itself" % (f1,))
            glued[f1] = (f2, cmap)
            glued[f2] = (f1, _invert(cmap))
        missing = [f for f in self.face_list if f not in glued]
        if missing:
            raise ValueError("unglued faces: %r" % (missing,))
        self.face_partner = glued

        self._classes()
        self._chain_complex()

    def _classes(self):
        corner_keys = sorted((c, x) for c in self.cubes
                             for x in self.cube_corners[c])
        self.corner_index = {k: i for i, k in enumerate(corner_keys)}
        self.corner_keys = corner_keys
        cparent = list(range(len(corner_keys)))

        eparent = list(range(len(self.edge_list)))
        self.edge_index = {e: i for i, e in enumerate(self.edge_list)}
        fparent = list(range(len(self.face_list)))
        self.face_index = {f: i for i, f in enumerate(self.face_list)}

        def find(parent, x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(parent, x, y):
            rx, ry = find(parent, x), find(parent, y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for (f1, f2, cmap) in self.gluings:
            union(fparent, self.face_index[f1], self.face_index[f2])
            for a, b in cmap.items():
                union(cparent, self.corner_index[(f1[0], a)],
                      self.corner_index[(f2[0], b)])
            circ = self.faces[f1]
            for k in range(4):
                a, b = circ[k], circ[(k + 1) % 4]
                e1 = (f1[0], frozenset((a, b)))
                e2 = (f2[0], frozenset((cmap[a], cmap[b])))
                union(eparent, self.edge_index[e1], self.edge_index[e2])

        self._cfind = lambda x: find(cparent, x)
        self._efind = lambda x: find(eparent, x)
        self._ffind = lambda x: find(fparent, x)
        self.corner_classes = _group(range(len(corner_keys)), self._cfind)
        self.edge_classes = _group(range(len(self.edge_list)), self._efind)
        self.face_classes = _group(range(len(self.face_list)), self._ffind)

    def cell_counts(self):
        return (len(self.corner_classes), len(self.edge_classes),
                len(self.face_classes), len(self.cubes))

    def euler_characteristic(self):
        n0, n1, n2, n3 = self.cell_counts()
        return n0 - n1 + n2 - n3

    # -- chain complex ----------------------------------------------------

    def _pts(self, cube, cs):
        return [self.corner_points[(cube, x)] for x in cs]

    def _neighbors(self, cube, corner):
        out = []
        for e in self.edge_list:
            if e[0] == cube and corner in e[1]:
                out.append(next(x for x in e[1] if x != corner))
        return sorted(out)

    def _chain_complex(self):
        # transported orientation frames for edge and face classes
        edge_frames = {}
        for i, (cube, pair) in enumerate(self.edge_list):
            a, b = sorted(pair)
            edge_frames[i] = (a, b)
        face_frames = {i: tuple(self.faces[f][:3])
                       for i, f in enumerate(self.face_list)}

        carried_e = self._transport_edges(edge_frames)
        carried_f = self._transport_faces(face_frames)
        self._carried_e = carried_e
        self._carried_f = carried_f

        croots = sorted(set(map(self._cfind, range(len(self.corner_keys)))))
        eroots = sorted(set(map(self._efind, range(len(self.edge_list)))))
        froots = sorted(set(map(self._ffind, range(len(self.face_list)))))
        cid = {r: k for k, r in enumerate(croots)}
        eid = {r: k for k, r in enumerate(eroots)}
        fid = {r: k for k, r in enumerate(froots)}
        n0, n1, n2 = len(croots), len(eroots), len(froots)
        n3 = len(self.cubes)

        b1 = [[0] * n1 for _ in range(n0)]
        for r in eroots:
            cube = self.edge_list[r][0]
            a, b = carried_e[r]
            col = eid[r]
            b1[cid[self._cfind(self.corner_index[(cube, b)])]][col] += 1
            b1[cid[self._cfind(self.corner_index[(cube, a)])]][col] -= 1

        b2 = [[0] * n2 for _ in range(n1)]
        for r in froots:
            fkey = self.face_list[r]
            cube = fkey[0]
            circ = self.faces[fkey]
            frame = carried_f[r]
            ordered = _align_circuit(circ, frame)
            col = fid[r]
            for k in range(4):
                a, b = ordered[k], ordered[(k + 1) % 4]
                ei = self.edge_index[(cube, frozenset((a, b)))]
                root = self._efind(ei)
                fa, fb = carried_e[ei]
                if (fa, fb) == (a, b):
                    b2[eid[root]][col] += 1
                elif (fa, fb) == (b, a):
                    b2[eid[root]][col] -= 1
                else:
                    raise AssertionError("edge frame mismatch on face circuit")

        b3 = [[0] * n3 for _ in range(len(froots))]
        self._cube_face_signs = {}
        for ci, cube in enumerate(self.cubes):
            frame = self._cube_frame(cube)
            framepts = self._pts(cube, frame)
            cellpts = self._pts(cube, self.cube_corners[cube])
            for fkey in self.face_list:
                if fkey[0] != cube:
                    continue
                fi = self.face_index[fkey]
                facetpts = self._pts(cube, self.faces[fkey])
                carried = self._pts(cube, carried_f[fi])
                sign = _facet_sign(framepts, cellpts, carried, facetpts)
                b3[fid[self._ffind(fi)]][ci] += sign
                self._cube_face_signs[fkey] = sign
        self.boundaries = {1: b1, 2: b2, 3: b3}
        self._check_dd()

    def _cube_frame(self, cube):
        c0 = min(self.cube_corners[cube])
        nbrs = self._neighbors(cube, c0)
        if len(nbrs) != 3:
            raise AssertionError("cube corner is not trivalent")
        return (c0,) + tuple(nbrs)

    def _transport_edges(self, frames):
        adj = {i: [] for i in range(len(self.edge_list))}
        for (f1, f2, cmap) in self.gluings:
            inv = _invert(cmap)
            circ = self.faces[f1]
            for k in range(4):
                a, b = circ[k], circ[(k + 1) % 4]
                e1 = self.edge_index[(f1[0], frozenset((a, b)))]
                e2 = self.edge_index[(f2[0], frozenset((cmap[a], cmap[b])))]
                adj[e1].append((e2, cmap))
                adj[e2].append((e1, inv))
        return self._bfs_frames(adj, frames, self._efind,
                                lambda i: self.edge_list[i][0],
                                len(self.edge_list))

    def _transport_faces(self, frames):
        adj = {i: [] for i in range(len(self.face_list))}
        for (f1, f2, cmap) in self.gluings:
            i1, i2 = self.face_index[f1], self.face_index[f2]
            adj[i1].append((i2, cmap))
            adj[i2].append((i1, _invert(cmap)))
        return self._bfs_frames(adj, frames, self._ffind,
                                lambda i: self.face_list[i][0],
                                len(self.face_list))

    def _bfs_frames(self, adj, frames, find, cube_of, n):
        carried = {}
        for root in range(n):
            if find(root) != root:
                continue
            carried[root] = tuple(frames[root])
            queue = [root]
            while queue:
                x = queue.pop()
                fx = carried[x]
                for y, cmap in adj[x]:
                    fy = tuple(cmap[c] for c in fx)
                    if y in carried:
                        a = _diffs(self._pts(cube_of(y), fy))
                        b = _diffs(self._pts(cube_of(y), carried[y]))
                        if _orientation_sign(a, b) != 1:
                            raise AssertionError(
                                "orientation conflict gluing cube faces")
                    else:
                        carried[y] = fy
                        queue.append(y)
        if len(carried) != n:
            raise AssertionError("cube complex is not class-connected")
        return carried

    def _check_dd(self):
        for k in (2, 3):
            a, b = self.boundaries[k - 1], self.boundaries[k]
            if not a or not b or not a[0] or not b[0]:
                continue
            for j in range(len(b[0])):
                for i in range(len(a)):
                    if sum(a[i][l] * b[l][j] for l in range(len(b))):
                        raise AssertionError("dd != 0 in cube complex")

    # -- topology ---------------------------------------------------------

    def is_orientable(self):
        """Whether cube orientations extend coherently across the gluings."""
        color = {}
        for cube in self.cubes:
            if cube in color:
                continue
            color[cube] = 1
            queue = [cube]
            while queue:
                c = queue.pop()
                for fkey in self.face_list:
                    if fkey[0] != c:
                        continue
                    other, _ = self.face_partner[fkey]
                    # coherent iff induced face orientations are opposite:
                    # color * sign + color' * sign' = 0
                    rel = -self._cube_face_signs[fkey] \
                        * self._cube_face_signs[other]
                    want = color[c] * rel
                    if other[0] in color:
                        if color[other[0]] != want:
                            return False
                    else:
                        color[other[0]] = want
                        queue.append(other[0])
        return True

    def homology(self):
        """H_0..H_3 of the complex."""
        n = self.cell_counts()
        out = []
        for k in range(4):
            bk = self.boundaries.get(k) if k >= 1 else None
            bk1 = self.boundaries.get(k + 1) if k < 3 else None
            out.append(homology_of_pair(bk, bk1, n[k]))
        return out


def _edge_sort_key(e):
    return (e[0], tuple(sorted(e[1])))


def _invert(cmap):
    return {b: a for a, b in cmap.items()}


def _group(items, find):
    classes = {}
    for x in items:
        classes.setdefault(find(x), []).append(x)
    return [classes[r] for r in sorted(classes)]


def _align_circuit(circ, frame):
    n = len(circ)
    i0, i1 = circ.index(frame[0]), circ.index(frame[1])
    if (i0 + 1) % n == i1:
        return [circ[(i0 + k) % n] for k in range(n)]
    if (i0 - 1) % n == i1:
        return [circ[(i0 - k) % n] for k in range(n)]
    raise AssertionError("frame is not consecutive on the circuit")


def _facet_sign(framepts, cellpts, facet_framepts, facetpts):
    dim = len(cellpts[0])
    m_c, m_f = len(cellpts), len(facetpts)
    sum_c = [sum(q[k] for q in cellpts) for k in range(dim)]
    sum_f = [sum(q[k] for q in facetpts) for k in range(dim)]
    outward = tuple(m_c * sum_f[k] - m_f * sum_c[k] for k in range(dim))
    return _orientation_sign(_diffs(framepts),
                             [outward] + _diffs(facet_framepts))


class FlatLinkClass:
    """Orientability plus H1 of a cusp cross-section, with a label when the
    pair identifies one of the two flat 3-manifolds the census meets."""

    def __init__(self, orientable, h1, label):
        self.orientable = orientable
        self.h1 = h1
        self.label = label

    def __repr__(self):
        return ("FlatLinkClass(orientable=%s, h1=%s, label=%s)"
                % (self.orientable, self.h1, self.label))


def build_cusp_link(p, cusp_class=None, nsheets=1, sheet_shift=None):
    """The cube complex of one cusp of a glued manifold.

    cusp_class is a set of vertex indices (defaults to the unique class of
    a one-cusped pairing); with two sheets and a sheet shift this builds
    the cusp of the corresponding double cover.
    """
    model = p.model
    if cusp_class is None:
        ncusps, partition = cusp_count(p)
        if ncusps != 1:
            raise MultipleCusps("pairing has %d cusps; pass a class" % ncusps)
        cusp_class = partition[0]
    cusp_class = set(cusp_class)
    if sheet_shift is None:
        sheet_shift = [0] * 25
    # classes may be given as vertex indices or as (sheet, vertex) pairs
    if cusp_class and not isinstance(next(iter(cusp_class)), tuple):
        cusp_class = {(t, v) for t in range(nsheets) for v in cusp_class}

    cubes = sorted(cusp_class)
    corner_points = {}
    faces = {}
    for t, v in cubes:
        for e in model.edges_at_vertex[v]:
            a, b = model.edges[e][0]
            w = b if v == a else a
            pt = tuple(3 * model.vertices[v][k] + model.vertices[w][k]
                       for k in range(4))
            corner_points[((t, v), e)] = pt
        for s in sorted(model.vertex_sides[v]):
            circ = _square_circuit_edges(model, v, s)
            faces[((t, v), s)] = circ

    gluings = []
    vmaps = [None] + [p.vmap(i) for i in range(1, 25)]
    for i in range(1, 25):
        j = p.sigma[i]
        if i > j:
            continue
        vm = vmaps[i]
        for t in range(nsheets):
            t2 = (t ^ sheet_shift[i]) % nsheets
            for v in model.sorted_side_vertices[i]:
                if (t, v) not in cusp_class:
                    continue
                v2 = vm[v]
                cmap = {}
                for e in model.edges_at_vertex[v]:
                    if i not in model.edges[e][1]:
                        continue
                    a, b = model.edges[e][0]
                    e2 = model.edge_index[tuple(sorted((vm[a], vm[b])))]
                    cmap[e] = e2
                gluings.append(((((t, v)), i), (((t2, v2)), j), cmap))
    return CubeComplex(cubes, corner_points, faces, gluings)


def _square_circuit_edges(model, v, s):
    edges = [e for e in model.edges_at_vertex[v] if s in model.edges[e][1]]

    def consecutive(e1, e2):
        a1, b1 = model.edges[e1][0]
        a2, b2 = model.edges[e2][0]
        w1 = b1 if v == a1 else a1
        w2 = b2 if v == a2 else a2
        r = model.ridge_index.get(tuple(sorted((v, w1, w2))))
        return r is not None and s in model.ridges[r][0]

    cyc = [edges[0]]
    rest = edges[1:]
    while rest:
        nxt = [e for e in rest if consecutive(cyc[-1], e)]
        cyc.append(nxt[0])
        rest.remove(nxt[0])
    return cyc


def classify_flat_link(c):
    """Orientability and H1, with the label the tables use when it applies."""
    orientable = c.is_orientable()
    h1 = c.homology()[1]
    label = None
    if not orientable and h1 == AbelianGroup(2):
        label = "N3_2"
    elif orientable and h1 == AbelianGroup(3):
        label = "T3"
    return FlatLinkClass(orientable, h1, label)


def max_cusp_volume(p, check_containment=True):
    """Volume of the maximal cusp of a one-cusped glued manifold.

    Equal-height horoballs at the 24 ideal vertices expand until first
    tangency; first tangency is on the polytope edges.  Each vertex is sent
    to infinity in an upper-half-space chart where its horoball is
    {t > h} over a cube cross-section of Euclidean volume A, contributing
    A/(3 h^3).
    """
    model = p.model
    ncusps, _ = cusp_count(p)
    if ncusps != 1:
        raise MultipleCusps("maximal cusp volume needs a single cusp")

    verts = [np.array(model.vertices[a], dtype=float) / 2.0
             for a in range(25)]

    def circ(x, y):
        return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3] \
            - x[4] * y[4]

    # first tangency: maximal s with s^2 (v_a o v_b) = -2 over all pairs
    s = 0.0
    for a in range(1, 25):
        for b in range(a + 1, 25):
            q = circ(verts[a], verts[b])
            if q < 0:
                s = max(s, (2.0 / -q) ** 0.5)
    total = 0.0
    contributions = []
    for a in range(1, 25):
        v = verts[a]
        b = _antipode(model, a)
        w = verts[b]
        scale = -2.0 / circ(v, w)
        w = w * scale
        basis = _spacelike_basis(v, w)
        nbrs = sorted(model.neighbors[a])
        pts = []
        for u in nbrs:
            uu = verts[u]
            pts.append([-circ(uu, e) / circ(uu, v) for e in basis])
        pts = np.array(pts)
        area = ConvexHull(pts).volume
        if check_containment:
            _assert_cap_inside(model, verts, v, w, basis, pts, s)
        contributions.append(area / (3.0 * s ** 3))
        total += contributions[-1]
    return total, contributions


def _antipode(model, a):
    va = model.vertices[a]
    target = tuple(-x for x in va[:4]) + (va[4],)
    for b in range(1, 25):
        if model.vertices[b] == target:
            return b
    raise AssertionError("vertex has no antipode")


def _spacelike_basis(v, w):
    """Three orthonormal spacelike vectors Lorentz-orthogonal to v and w."""
    J = np.diag([1.0, 1.0, 1.0, 1.0, -1.0])

    def form(x, y):
        return x @ J @ y

    basis = []
    for k in range(5):
        cand = np.zeros(5)
        cand[k] = 1.0
        # project out v, w (lightlike pair with form(v, w) = -2), then the
        # accepted spacelike directions
        cand = cand - form(cand, w) / form(v, w) * v \
            - form(cand, v) / form(v, w) * w
        for e in basis:
            cand = cand - form(cand, e) * e
        norm2 = form(cand, cand)
        if norm2 > 1e-9:
            basis.append(cand / norm2 ** 0.5)
        if len(basis) == 3:
            return basis
    raise AssertionError("could not build a spacelike basis")


def _assert_cap_inside(model, verts, v, w, basis, corner_ys, s):
    """The horoball cap over the cube must satisfy every side inequality."""
    J = np.diag([1.0, 1.0, 1.0, 1.0, -1.0])
    for y in corner_ys:
        z = y / s
        b = 1.0 / (2.0 * s)
        a = (1.0 + z @ z) / (4.0 * b)
        x = a * v + b * w + z[0] * basis[0] + z[1] * basis[1] + z[2] * basis[2]
        if abs(x @ J @ x + 1.0) > 1e-6:
            raise AssertionError("chart inversion failed")
        for i in range(1, 25):
            n = np.array(model.normals[i], dtype=float) / 2.0
            if x @ J @ n > 1e-6:
                raise AssertionError("horoball cap leaves the polytope")
