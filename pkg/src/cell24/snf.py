"""Smith normal form over the integers and finitely generated abelian
groups.

Matrices are lists of lists of Python ints (arbitrary precision).  The
pivoting strategy is: move the smallest nonzero entry of the remaining
block to the pivot, clear its row and column by division with remainder,
and repair the divisibility chain at the end.  Matrices here stay around
100x100, so nothing fancier is needed.
"""

from math import gcd


def smith_normal_form(mat):
    """Invariant factors of an integer matrix, as (invariants, rank).

    invariants is the list d_1 | d_2 | ... of positive diagonal entries of
    the Smith form (ones included); rank = len(invariants).
    """
    a = [list(row) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    t = 0
    while True:
        # smallest nonzero entry in the block at (t, t)
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, bi, bj = best
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        # clear column and row; swapping remainders in keeps pivots shrinking
        dirty = True
        while dirty:
            dirty = False
            piv = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
                        piv = a[t][t]
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
                        piv = a[t][t]
        t += 1

    diag = [abs(a[i][i]) for i in range(t)]
    # repair divisibility: replace (a, b) by (gcd, lcm) until chained
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            if diag[j] % diag[i]:
                g = gcd(diag[i], diag[j])
                diag[i], diag[j] = g, diag[i] * diag[j] // g
    diag.sort()
    return diag, len(diag)


class AbelianGroup:
    """A finitely generated abelian group: free rank plus torsion list.

    Torsion entries are >= 2 and each divides the next.
    """

    def __init__(self, free_rank, torsion=()):
        torsion = tuple(int(d) for d in torsion)
        for d in torsion:
            if d < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for x, y in zip(torsion, torsion[1:]):
            if y % x:
                raise ValueError("torsion must be in divisibility order")
        self.free_rank = int(free_rank)
        self.torsion = torsion

    @classmethod
    def from_invariants(cls, free_rank, invariants):
        return cls(free_rank, [d for d in invariants if d > 1])

    @classmethod
    def from_factors(cls, free_rank, factors):
        """Normalize an arbitrary direct sum of cyclic factors.

        Accepts e.g. (3, 13) or (2, 2, 2, 5) in any order and rewrites to
        the invariant-factor chain, so primary decompositions compare equal
        to divisibility-ordered ones.
        """
        diag = [int(d) for d in factors if int(d) != 1]
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i]:
                    g = gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
        diag.sort()
        return cls(free_rank, [d for d in diag if d > 1])

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __eq__(self, other):
        return (isinstance(other, AbelianGroup)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z_%d" % d for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "AbelianGroup(%d, %r)" % (self.free_rank, self.torsion)


def cokernel(mat, ambient_rank):
    """Z^ambient_rank modulo the column span of mat."""
    if not mat or not mat[0]:
        return AbelianGroup(ambient_rank)
    invariants, rank = smith_normal_form(mat)
    return AbelianGroup.from_invariants(ambient_rank - rank, invariants)


def homology_of_pair(boundary_k, boundary_k1, dim_k):
    """H = ker(boundary_k) / im(boundary_k1) for integer boundary maps.

    boundary_k: matrix of the map out of degree k (rows: degree k-1 cells,
    columns: degree k cells); boundary_k1: the map into degree k.  Either
    may be None for the zero map.
    """
    rank_out = smith_normal_form(boundary_k)[1] if _nonempty(boundary_k) else 0
    if _nonempty(boundary_k1):
        invariants, rank_in = smith_normal_form(boundary_k1)
    else:
        invariants, rank_in = [], 0
    free = dim_k - rank_out - rank_in
    if free < 0:
        raise AssertionError("negative free rank; boundary maps inconsistent")
    return AbelianGroup.from_invariants(free, invariants)


def _nonempty(mat):
    return mat is not None and len(mat) > 0 and len(mat[0]) > 0
