"""Decide whether a side-pairing of the 24-cell yields a complete hyperbolic
4-manifold: ridge cycle conditions, edge-link conditions, cusp counting,
and extraction of the group presentation.

All checks here use exact matrices; the census search has its own faster
combinatorial pruner and re-checks its output through this module.
"""

from . import lorentz
from .pairing import derive_transformations
from .polytope import NotASymmetry


class RidgeCycleReport:
    """Cycle decomposition of the 96 ridges under a side-pairing.

    cycles: list of (states, word, return_matrix) where states is the
    ordered list of (ridge_index, through_side) pairs visited, word is the
    ordered tuple of sides applied, and return_matrix is the composed
    transformation (exact).  Each unordered ridge class appears once, via
    the direction whose relator word is lexicographically smaller.
    """

    def __init__(self, cycles, failures):
        self.cycles = cycles
        self.failures = failures

    @property
    def all_pass(self):
        return not self.failures

    def __repr__(self):
        return ("RidgeCycleReport(%d cycles, %d failures)"
                % (len(self.cycles), len(self.failures)))


class EdgeClassReport:
    def __init__(self, edges, n_vertices, n_edges, n_triangles, euler,
                 connected, closes):
        self.edges = edges
        self.n_vertices = n_vertices
        self.n_edges = n_edges
        self.n_triangles = n_triangles
        self.euler = euler
        self.connected = connected
        self.closes = closes

    @property
    def ok(self):
        return (len(self.edges) == 8 and self.connected and self.euler == 2
                and self.closes)


class EdgeLinkReport:
    def __init__(self, classes):
        self.classes = classes

    @property
    def all_pass(self):
        return all(c.ok for c in self.classes)

    def __repr__(self):
        return "EdgeLinkReport(%d classes, pass=%s)" % (
            len(self.classes), self.all_pass)


class Presentation:
    """12 generators (sides i with i < sigma(i)) and 24 length-4 relators.

    Relator letters are signed side indices: +i is the generator of the
    pair (i, sigma(i)) with i < sigma(i), -i its inverse.  Words evaluate
    to the identity under left-to-right matrix multiplication.
    """

    def __init__(self, generators, relators):
        self.generators = generators
        self.relators = relators

    def exponent_matrix(self):
        """24 x 12 matrix of exponent sums, rows = relators."""
        col = {g: k for k, g in enumerate(self.generators)}
        rows = []
        for word in self.relators:
            r = [0] * len(self.generators)
            for x in word:
                r[col[abs(x)]] += 1 if x > 0 else -1
            rows.append(r)
        return rows


class ManifoldVerdict:
    def __init__(self, ok, reason, transformations=None, ridge_report=None,
                 edge_report=None, completeness_ok=None):
        self.ok = ok
        self.reason = reason
        self.transformations = transformations
        self.ridge_report = ridge_report
        self.edge_report = edge_report
        self.completeness_ok = completeness_ok

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "ManifoldVerdict(%s: %s)" % (self.ok, self.reason)


def _letter_key(x):
    return (abs(x), 0 if x > 0 else 1)


def _word_key(word):
    return tuple(_letter_key(x) for x in word)


def canonical_word(word):
    """Minimal representative of a word up to cyclic rotation and inversion."""
    variants = []
    inv = tuple(-x for x in reversed(word))
    for w in (tuple(word), inv):
        for r in range(len(w)):
            variants.append(w[r:] + w[:r])
    return min(variants, key=_word_key)


def _ridge_step(model, p, state):
    """One gluing step: apply the row of the through side."""
    ridge, a = state
    verts = model.ridges[ridge][1]
    vm = p.vmap(a)
    image = tuple(sorted(vm[v] for v in verts))
    ridge2 = model.ridge_index[image]
    sides2 = model.ridges[ridge2][0]
    j = p.sigma[a]
    if j not in sides2:
        raise AssertionError("image ridge does not lie in the paired side")
    return (ridge2, sides2[0] if sides2[1] == j else sides2[1])


def ridge_cycles(p):
    """Partition the 192 (ridge, side) states into cycles and test them.

    A passing report has 24 cycles of length 4 whose composed return
    transformations are all exactly the identity.
    """
    model = p.model
    g = derive_transformations(p)
    states = [(r, s) for r in range(96) for s in model.ridges[r][0]]
    seen = set()
    cycles = []
    failures = []
    for start in states:
        if start in seen:
            continue
        orbit = [start]
        cur = _ridge_step(model, p, start)
        while cur != start:
            orbit.append(cur)
            if len(orbit) > 96:
                raise AssertionError("ridge traversal does not cycle")
            cur = _ridge_step(model, p, cur)
        word = tuple(s for _, s in orbit)
        # applying g_{a0} first means the matrix product is taken reversed
        ret = lorentz.matmul_chain(g[a] for a in reversed(word))
        # the same unordered cycle traversed backwards starts from the
        # partner state of the start ridge; mark both directions seen
        for ridge, s in orbit:
            seen.add((ridge, s))
        partner = _other_state(model, orbit)
        rev_orbit = [partner]
        cur = _ridge_step(model, p, partner)
        guard = 0
        while cur != partner and guard <= 96:
            rev_orbit.append(cur)
            cur = _ridge_step(model, p, cur)
            guard += 1
        for ridge, s in rev_orbit:
            seen.add((ridge, s))
        chosen = min(
            (orbit, rev_orbit),
            key=lambda o: _word_key(relator_word(p, tuple(s for _, s in o))))
        cyc_word = tuple(s for _, s in chosen)
        cyc_ret = lorentz.matmul_chain(g[a] for a in reversed(cyc_word))
        cycles.append((chosen, cyc_word, cyc_ret))
        if len(orbit) != 4 or ret != lorentz.IDENTITY:
            failures.append((chosen, cyc_word, cyc_ret))
    return RidgeCycleReport(cycles, failures)


def _other_state(model, orbit):
    ridge, a = orbit[0]
    return (ridge, model.other_side_of_ridge(ridge, a))


def relator_word(p, sides):
    """Relator letters for a traversal, in evaluation order.

    The traversal applies its sides left to right; the relator reads the
    same letters reversed so that left-to-right matrix multiplication gives
    the return transformation.
    """
    letters = []
    for a in reversed(sides):
        letters.append(a if a < p.sigma[a] else -p.sigma[a])
    return tuple(letters)


def presentation(p, ridge_report=None):
    """Generators and the 24 ridge-cycle relators of the glued manifold."""
    if ridge_report is None:
        ridge_report = ridge_cycles(p)
    if not ridge_report.all_pass:
        raise ValueError("side-pairing does not satisfy the ridge conditions")
    generators = [i for i in range(1, 25) if i < p.sigma[i]]
    relators = []
    for _, word, _ in ridge_report.cycles:
        letters = relator_word(p, word)
        # deterministic form: minimal cyclic rotation
        rots = [letters[r:] + letters[:r] for r in range(len(letters))]
        relators.append(min(rots, key=_word_key))
    relators.sort(key=_word_key)
    return Presentation(generators, relators)


def edge_link_check(p, ridge_report=None):
    """Assemble and test the spherical link around each edge class.

    Each edge of the 24-cell contributes one octant triangle (corners at
    its three ridges, sides at its three sides).  Triangles are glued
    along the side-pairing; a passing class has 8 triangles forming a
    2-sphere and the developed copies of the polytope close up exactly.
    """
    model = p.model
    g = derive_transformations(p)
    vmaps = [None] + [p.vmap(i) for i in range(1, 25)]
    ginv = [None] + [lorentz.inverse(g[i]) for i in range(1, 25)]

    def edge_image(e, s):
        a, b = model.edges[e][0]
        vm = vmaps[s]
        return model.edge_index[tuple(sorted((vm[a], vm[b])))]

    classes = []
    seen = [False] * 96
    for e0 in range(96):
        if seen[e0]:
            continue
        # breadth-first development of the triangles around this class
        dev = {e0: lorentz.IDENTITY}
        order = [e0]
        queue = [e0]
        closes = True
        while queue:
            e = queue.pop(0)
            for s in model.edges[e][1]:
                e2 = edge_image(e, s)
                m2 = lorentz.matmul(dev[e], ginv[s])
                if e2 in dev:
                    if dev[e2] != m2:
                        closes = False
                else:
                    dev[e2] = m2
                    order.append(e2)
                    queue.append(e2)
        for e in order:
            seen[e] = True
        n_tri = len(order)
        n_edge2, n_vert = _link_surface_counts(model, p, order, vmaps)
        euler = n_vert - n_edge2 + n_tri
        classes.append(EdgeClassReport(order, n_vert, n_edge2, n_tri, euler,
                                       True, closes))
    return EdgeLinkReport(classes)


def _link_surface_counts(model, p, edges_in_class, vmaps):
    """Edge and vertex counts of the glued link surface."""
    halfedges = set()
    for e in edges_in_class:
        for s in model.edges[e][1]:
            halfedges.add((e, s))
    if len(halfedges) % 2:
        raise AssertionError("unmatched link-surface edges")
    n_edge2 = len(halfedges) // 2

    corners = [(e, r) for e in edges_in_class for r in model.ridges_of_edge[e]]
    idx = {c: k for k, c in enumerate(corners)}
    parent = list(range(len(corners)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, r in corners:
        for s in model.ridges[r][0]:
            vm = vmaps[s]
            a, b = model.edges[e][0]
            e2 = model.edge_index[tuple(sorted((vm[a], vm[b])))]
            r2 = model.ridge_index[tuple(sorted(vm[v]
                                                for v in model.ridges[r][1]))]
            x, y = find(idx[(e, r)]), find(idx[(e2, r2)])
            if x != y:
                parent[x] = y
    n_vert = len({find(k) for k in range(len(corners))})
    return n_edge2, n_vert


def cusp_count(p):
    """Number of ideal-vertex classes, plus the class partition."""
    parent = list(range(25))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(1, 25):
        for a, b in p.vmap(i).items():
            x, y = find(a), find(b)
            if x != y:
                parent[x] = y
    classes = {}
    for a in range(1, 25):
        classes.setdefault(find(a), set()).add(a)
    partition = sorted(classes.values(), key=min)
    return len(partition), partition


def completeness_check(p, transformations=None):
    """Each gluing map carries the height-1 light-cone representative of a
    source vertex to the height-1 representative of the target vertex."""
    model = p.model
    g = transformations or derive_transformations(p)
    for i in range(1, 25):
        for a, b in p.vmap(i).items():
            image = lorentz.matvec(g[i], model.vertices[a])
            if image != model.vertices[b]:
                return False
            if image[4] != model.vertices[b][4]:
                return False
    return True


def is_manifold(p):
    """Full verdict: derivation, ridge cycles, edge links, completeness."""
    try:
        g = derive_transformations(p)
    except NotASymmetry as exc:
        return ManifoldVerdict(False, "invalid row: %s" % exc)
    ridge_report = ridge_cycles(p)
    if not ridge_report.all_pass:
        return ManifoldVerdict(False,
                               "%d ridge cycles fail" % len(ridge_report.failures),
                               transformations=g, ridge_report=ridge_report)
    edge_report = edge_link_check(p, ridge_report)
    if not edge_report.all_pass:
        return ManifoldVerdict(False, "edge-link conditions fail",
                               transformations=g, ridge_report=ridge_report,
                               edge_report=edge_report)
    comp = completeness_check(p, g)
    if not comp:
        return ManifoldVerdict(False, "completeness height check fails",
                               transformations=g, ridge_report=ridge_report,
                               edge_report=edge_report, completeness_ok=False)
    return ManifoldVerdict(True, "manifold", transformations=g,
                           ridge_report=ridge_report, edge_report=edge_report,
                           completeness_ok=True)
