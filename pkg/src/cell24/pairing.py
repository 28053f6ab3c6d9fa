"""Side-pairings of the 24-cell: data model, text format, and derivation of
the 24 side-pairing transformations.

A side-pairing is a fixed-point-free involution sigma on the side indices
together with, for each side i, a vertex bijection S_i -> S_sigma(i) that is
realizable by a symmetry of the 24-cell.  The bundled text format lists one
row per unordered side pair:

    i -> j : a1>b1, a2>b2, a3>b3, a4>b4, a5>b5, a6>b6

with i < j and the sources a1..a6 in increasing order; '#' starts a comment.
The i > j rows are completed by reversing arrows.
"""

import re
from importlib import resources

from . import lorentz
from .polytope import standard_cell


class PairingError(Exception):
    pass


class MalformedLine(PairingError):
    pass


class NotAnInvolution(PairingError):
    pass


class NotABijection(PairingError):
    pass


class VertexNotOnSide(PairingError):
    pass


class SidePairing:
    """An involutive side matching with per-side vertex bijections.

    sigma is a tuple indexed 1..24 (slot 0 unused); images[i] is the tuple
    of images of sorted(S_i) under the vertex bijection of side i.
    """

    def __init__(self, sigma, images, model=None):
        self.model = model or standard_cell()
        self.sigma = tuple(sigma)
        self.images = tuple(images)
        self._validate()

    @classmethod
    def from_rows(cls, rows, model=None):
        """Build from (i, j, mapping) triples with i < j, one per pair."""
        model = model or standard_cell()
        sigma = [0] * 25
        images = [None] * 25
        for i, j, mapping in rows:
            if sigma[i] or sigma[j]:
                raise NotAnInvolution("side %d paired twice" % (i if sigma[i] else j))
            if i == j:
                raise NotAnInvolution("side %d paired with itself" % i)
            sigma[i], sigma[j] = j, i
            src = model.sorted_side_vertices[i]
            if set(mapping) != set(src):
                bad = sorted(set(mapping) - set(src))
                raise VertexNotOnSide("vertices %s are not on side %d" % (bad, i))
            if set(mapping.values()) != set(model.side_vertices[j]):
                raise NotABijection("row %d -> %d images are not the "
                                    "vertices of side %d" % (i, j, j))
            images[i] = tuple(mapping[a] for a in src)
            inv = {b: a for a, b in mapping.items()}
            images[j] = tuple(inv[b] for b in model.sorted_side_vertices[j])
        missing = [i for i in range(1, 25) if not sigma[i]]
        if missing:
            raise NotAnInvolution("sides %s are unpaired" % missing)
        return cls(sigma, images, model=model)

    def _validate(self):
        model = self.model
        if len(self.sigma) != 25 or len(self.images) != 25:
            raise PairingError("need 24 sides")
        for i in range(1, 25):
            j = self.sigma[i]
            if not 1 <= j <= 24 or j == i:
                raise NotAnInvolution("sigma(%d) = %d" % (i, j))
            if self.sigma[j] != i:
                raise NotAnInvolution("sigma is not an involution at %d" % i)
            img = self.images[i]
            if sorted(img) != sorted(model.side_vertices[j]):
                raise NotABijection("side %d images do not fill side %d"
                                    % (i, j))
        for i in range(1, 25):
            if self.vmap(self.sigma[i]) != {b: a for a, b in self.vmap(i).items()}:
                raise NotABijection("rows %d and %d are not mutually inverse"
                                    % (i, self.sigma[i]))

    def vmap(self, i):
        """The vertex bijection of side i, as a dict."""
        src = self.model.sorted_side_vertices[i]
        return dict(zip(src, self.images[i]))

    def rows(self):
        """(i, sigma(i), images) for each pair, listed with i < sigma(i)."""
        return [(i, self.sigma[i], self.images[i])
                for i in range(1, 25) if i < self.sigma[i]]

    def key(self):
        """Total-order key: the tuple of i < sigma(i) rows."""
        return tuple(self.rows())

    def __eq__(self, other):
        return (isinstance(other, SidePairing) and self.sigma == other.sigma
                and self.images == other.images)

    def __hash__(self):
        return hash((self.sigma, self.images))

    def __repr__(self):
        return "SidePairing(%s)" % ", ".join(
            "%d->%d" % (i, j) for i, j, _ in self.rows())


_ROW_RE = re.compile(r"^(\d+)\s*->\s*(\d+)\s*:\s*(.*)$")


def parse_pairing(text, model=None):
    """Parse the text format into a SidePairing."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ROW_RE.match(line)
        if not m:
            raise MalformedLine("line %d: %r" % (lineno, raw))
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i <= 24 and 1 <= j <= 24):
            raise MalformedLine("line %d: side index out of range" % lineno)
        if i >= j:
            raise MalformedLine("line %d: rows must have i < j" % lineno)
        mapping = {}
        parts = [p.strip() for p in m.group(3).split(",")]
        if len(parts) != 6:
            raise MalformedLine("line %d: expected 6 vertex arrows" % lineno)
        for part in parts:
            try:
                a, b = part.split(">")
                a, b = int(a), int(b)
            except ValueError:
                raise MalformedLine("line %d: bad arrow %r" % (lineno, part))
            if a in mapping:
                raise NotABijection("line %d: vertex %d mapped twice"
                                    % (lineno, a))
            mapping[a] = b
        rows.append((i, j, mapping))
    if len(rows) != 12:
        raise MalformedLine("expected 12 rows, got %d" % len(rows))
    return SidePairing.from_rows(rows, model=model)


def serialize_pairing(p):
    """Render a SidePairing in the bundled text format (normal form)."""
    lines = []
    for i, j, images in p.rows():
        src = p.model.sorted_side_vertices[i]
        arrows = ", ".join("%d>%d" % (a, b) for a, b in zip(src, images))
        lines.append("%d -> %d : %s" % (i, j, arrows))
    return "\n".join(lines) + "\n"


def bundled_pairing_names():
    return ["24c1_1", "24c1_2", "24c1_3", "24c1_4"]


def bundled_pairing(name, model=None):
    """Load one of the four bundled one-cusped pairings by name."""
    fname = name if name.endswith(".pairing") else name + ".pairing"
    text = resources.files("cell24.data").joinpath(fname).read_text()
    return parse_pairing(text, model=model)


def load_pairing(path, model=None):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pairing(fh.read(), model=model)


class DerivedTransformations:
    """The 24 side-pairing transformations g_i, exact positive Lorentz."""

    def __init__(self, matrices):
        self.g = tuple(matrices)

    def __getitem__(self, i):
        return self.g[i]


def derive_transformations(p):
    """g_i = (reflection in side sigma(i)) o (symmetry realizing the row).

    Checks exactness of the inverse relation g_sigma(i) = g_i^-1, the vertex
    contract (each source vertex vector maps to the target vertex vector,
    same height), and the outward-normal convention g_i s_i = -s_sigma(i).
    """
    model = p.model
    gs = [None] * 25
    for i in range(1, 25):
        j = p.sigma[i]
        f = model.find_side_symmetry(i, j, p.vmap(i))
        g = lorentz.matmul(model.side_reflection(j), f)
        if not lorentz.is_positive_lorentz(g):
            raise AssertionError("derived transformation is not positive Lorentz")
        gs[i] = g
    for i in range(1, 25):
        j = p.sigma[i]
        if gs[j] != lorentz.inverse(gs[i]):
            raise AssertionError("g_%d is not the inverse of g_%d" % (j, i))
        for a, b in p.vmap(i).items():
            if lorentz.matvec(gs[i], model.vertices[a]) != model.vertices[b]:
                raise AssertionError("g_%d does not realize the vertex map" % i)
        ni = lorentz.matvec(gs[i], model.normals[i])
        if ni != tuple(-x for x in model.normals[j]):
            raise AssertionError("g_%d breaks the outward-normal convention" % i)
    return DerivedTransformations(gs)
