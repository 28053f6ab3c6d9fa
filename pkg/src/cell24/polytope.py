"""The standard ideal right-angled 24-cell: normals, ideal vertices,
incidence, ridges, edges, side reflections, and the order-1152 symmetry
group with its permutation actions.

Sides and vertices are numbered 1..24 throughout, matching the fixed
ordering used by the bundled pairing files.  The incidence structure is
derived from exact inner products, never hardcoded: a vertex lies on a side
iff their Lorentzian product vanishes.
"""

from functools import lru_cache

from . import lorentz
from .lorentz import (IDENTITY, inverse, is_positive_lorentz,
                      lorentz_product4, matmul, matvec,
                      reflect_in_hyperplane)


class NotASymmetry(Exception):
    """No symmetry of the 24-cell realizes the requested vertex bijection."""


def _standard_normals():
    # Outward unit normals: (+-1, +-1) in a coordinate pair, 1 in the last
    # slot; pairs ordered (1,2),(1,3),(2,3),(1,4),(2,4),(3,4), signs ordered
    # (+,+),(-,+),(+,-),(-,-).  Doubled entries.
    pairs = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    signs = [(1, 1), (-1, 1), (1, -1), (-1, -1)]
    normals = [None]
    for a, b in pairs:
        for sa, sb in signs:
            v = [0, 0, 0, 0, 2]
            v[a] = 2 * sa
            v[b] = 2 * sb
            normals.append(tuple(v))
    return normals


def _standard_vertices():
    # v1..v16: all (+-1/2)^4, the k-th sign bit of the index giving the sign
    # of coordinate k; v17..v24: +-e_k.  Doubled entries.
    verts = [None]
    for b in range(16):
        v = [1 if b & (8 >> k) else -1 for k in range(4)]
        verts.append(tuple(v + [2]))
    for k in range(4):
        for sign in (2, -2):
            v = [0, 0, 0, 0, 2]
            v[k] = sign
            verts.append(tuple(v))
    return verts


class Cell24Model:
    """Static combinatorial and geometric model of the standard 24-cell.

    Attributes (all immutable after construction):

    - normals[i], vertices[a]: doubled 5-vectors, index 1..24 (slot 0 unused)
    - side_vertices[i]: frozenset of the 6 vertex indices on side i
    - sorted_side_vertices[i]: the same, as a sorted tuple
    - vertex_sides[a]: frozenset of the 6 side indices through vertex a
    - ridges: list of (sides pair tuple, vertex triple tuple), 96 entries
    - edges: list of (vertex pair tuple, side triple tuple), 96 entries
    - symmetries: list of doubled matrices, 1152 entries, identity first
    - side_perm[k], vert_perm[k]: induced permutations (tuples indexed 1..24)
    """

    def __init__(self):
        self.normals = _standard_normals()
        self.vertices = _standard_vertices()
        self._build_incidence()
        self._build_symmetries()
        self._build_side_reflections()

    # ------------------------------------------------------------------
    # incidence

    def _build_incidence(self):
        normals, vertices = self.normals, self.vertices
        side_vertices = [None]
        for i in range(1, 25):
            on = frozenset(a for a in range(1, 25)
                           if lorentz_product4(vertices[a], normals[i]) == 0)
            if len(on) != 6:
                raise AssertionError("side %d has %d vertices" % (i, len(on)))
            side_vertices.append(on)
        self.side_vertices = side_vertices
        self.sorted_side_vertices = [None] + [
            tuple(sorted(side_vertices[i])) for i in range(1, 25)]
        self.vertex_sides = [None] + [
            frozenset(i for i in range(1, 25) if a in side_vertices[i])
            for a in range(1, 25)]
        for a in range(1, 25):
            if len(self.vertex_sides[a]) != 6:
                raise AssertionError("vertex figure is not a cube")

        # Ridges: side pairs sharing exactly 3 vertices.
        ridges = []
        for i in range(1, 25):
            for j in range(i + 1, 25):
                common = side_vertices[i] & side_vertices[j]
                if len(common) == 3:
                    ridges.append(((i, j), tuple(sorted(common))))
                elif len(common) > 3:
                    raise AssertionError("sides %d,%d share %d vertices"
                                         % (i, j, len(common)))
        if len(ridges) != 96:
            raise AssertionError("expected 96 ridges, got %d" % len(ridges))
        self.ridges = ridges
        self.ridge_index = {verts: k for k, ((_, _), verts) in
                            ((k, r) for k, r in enumerate(ridges))}
        self.ridges_of_side = [()] * 25
        for k, ((i, j), _) in enumerate(ridges):
            self.ridges_of_side[i] += (k,)
            self.ridges_of_side[j] += (k,)

        # Edges: vertex pairs lying on exactly 3 common sides.
        edges = []
        for a in range(1, 25):
            for b in range(a + 1, 25):
                common = self.vertex_sides[a] & self.vertex_sides[b]
                if len(common) == 3:
                    edges.append(((a, b), tuple(sorted(common))))
        if len(edges) != 96:
            raise AssertionError("expected 96 edges, got %d" % len(edges))
        self.edges = edges
        self.edge_index = {pair: k for k, (pair, _) in enumerate(edges)}
        self.edges_of_side = [()] * 25
        for k, (_, sides) in enumerate(edges):
            for i in sides:
                self.edges_of_side[i] += (k,)
        self.edges_at_vertex = [()] * 25
        for k, ((a, b), _) in enumerate(edges):
            self.edges_at_vertex[a] += (k,)
            self.edges_at_vertex[b] += (k,)
        self.neighbors = [frozenset()] * 25
        for (a, b), _ in edges:
            self.neighbors[a] |= {b}
            self.neighbors[b] |= {a}

        # Each ridge has 3 vertices and lies in 2 sides; each edge lies in
        # 3 ridges (one for each pair of its 3 sides).
        self.ridges_of_edge = []
        for (a, b), sides in edges:
            rs = []
            for x in range(3):
                for y in range(x + 1, 3):
                    common = tuple(sorted(self.side_vertices[sides[x]]
                                          & self.side_vertices[sides[y]]))
                    rs.append(self.ridge_index[common])
            if len(set(rs)) != 3:
                raise AssertionError("edge not in exactly 3 ridges")
            self.ridges_of_edge.append(tuple(sorted(set(rs))))

    # ------------------------------------------------------------------
    # symmetry group

    def _build_symmetries(self):
        half = [[1, 1, 1, 1, 0],
                [1, 1, -1, -1, 0],
                [1, -1, 1, -1, 0],
                [1, -1, -1, 1, 0],
                [0, 0, 0, 0, 2]]
        gens = [tuple(tuple(r) for r in half)]
        for perm_rows in ([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0],
                           [0, 0, 0, -1, 0], [0, 0, 0, 0, 1]],
                          [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 0, 1, 0],
                           [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]],
                          [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 1, 0, 0, 0],
                           [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]):
            gens.append(tuple(tuple(2 * x for x in row) for row in perm_rows))
        self.symmetry_generators = gens

        seen = {IDENTITY: 0}
        elements = [IDENTITY]
        frontier = [IDENTITY]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    p = matmul(m, g)
                    if p not in seen:
                        seen[p] = len(elements)
                        elements.append(p)
                        nxt.append(p)
            frontier = nxt
            if len(elements) > 1152:
                raise AssertionError("symmetry closure exceeded order 1152")
        if len(elements) != 1152:
            raise AssertionError("symmetry closure has order %d"
                                 % len(elements))
        self.symmetries = elements
        self.symmetry_index = seen

        norm_lookup = {self.normals[i]: i for i in range(1, 25)}
        vert_lookup = {self.vertices[a]: a for a in range(1, 25)}
        side_perms, vert_perms = [], []
        for m in elements:
            sp = [0] * 25
            vp = [0] * 25
            for i in range(1, 25):
                sp[i] = norm_lookup[matvec(m, self.normals[i])]
            for a in range(1, 25):
                vp[a] = vert_lookup[matvec(m, self.vertices[a])]
            side_perms.append(tuple(sp))
            vert_perms.append(tuple(vp))
        self.side_perm = side_perms
        self.vert_perm = vert_perms

        # A symmetry is determined by where it sends one side and that
        # side's six vertices; index them for O(1) realization lookups.
        lookup = {}
        for k in range(1152):
            sp, vp = side_perms[k], vert_perms[k]
            for i in range(1, 25):
                key = (i, sp[i], tuple(vp[a] for a in
                                       self.sorted_side_vertices[i]))
                if key in lookup:
                    raise AssertionError("side action does not determine "
                                         "the symmetry")
                lookup[key] = k
        self._side_action_lookup = lookup

        # Gluing candidates: for each ordered side pair (i, j), the 48
        # vertex bijections realizable by a symmetry, with the symmetry.
        candidates = {}
        for k in range(1152):
            sp, vp = side_perms[k], vert_perms[k]
            for i in range(1, 25):
                j = sp[i]
                vmap = tuple(vp[a] for a in self.sorted_side_vertices[i])
                candidates.setdefault((i, j), []).append((vmap, k))
        for key, lst in candidates.items():
            lst.sort()
            if len(lst) != 48:
                raise AssertionError("expected 48 gluings for %s" % (key,))
        self.pair_candidates = candidates

    def _build_side_reflections(self):
        self.side_reflections = [None] + [
            reflect_in_hyperplane(self.normals[i]) for i in range(1, 25)]

    # ------------------------------------------------------------------
    # queries

    def side_reflection(self, j):
        """Reflection of H^4 in the hyperplane of side j."""
        return self.side_reflections[j]

    def find_side_symmetry(self, i, j, vmap):
        """The unique symmetry f with f(S_i) = S_j inducing vmap on vertices.

        vmap maps the 6 vertex indices of side i to those of side j; raises
        NotASymmetry if no element of the 1152 realizes it.
        """
        key = (i, j, tuple(vmap[a] for a in self.sorted_side_vertices[i]))
        k = self._side_action_lookup.get(key)
        if k is None:
            raise NotASymmetry("no symmetry realizes %d -> %d with %s"
                               % (i, j, dict(vmap)))
        return self.symmetries[k]

    def find_side_symmetry_index(self, i, j, images):
        """Index variant: images is a tuple over sorted(S_i)."""
        k = self._side_action_lookup.get((i, j, images))
        if k is None:
            raise NotASymmetry("no symmetry realizes %d -> %d" % (i, j))
        return k

    def side_stabilizer(self, i):
        """Indices of the 48 symmetries fixing side i setwise."""
        return [k for k in range(1152) if self.side_perm[k][i] == i]

    def other_side_of_ridge(self, ridge_idx, side):
        i, j = self.ridges[ridge_idx][0]
        return j if side == i else i


@lru_cache(maxsize=1)
def standard_cell():
    """The shared immutable model; built once per process."""
    return Cell24Model()


def build_standard_cell():
    return standard_cell()
