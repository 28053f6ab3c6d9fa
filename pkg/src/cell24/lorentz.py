"""Exact arithmetic for vectors and matrices over half-integers with the
Lorentzian inner product of signature (4,1).

Vectors and matrices are stored *doubled*: a vector is a 5-tuple of Python
ints equal to twice the actual entries, and a matrix is a 5x5 nested tuple
of ints equal to twice the actual entries.  All the geometric data of the
ideal 24-cell (side normals, ideal vertices, symmetry generators, gluing
transformations) has half-integer entries, so everything here is exact and
values hash and compare natively.  Python ints are arbitrary precision;
products of long generator words never overflow.

Everything is immutable and safe to share between worker processes.
"""

from fractions import Fraction

# Signature diag(1, 1, 1, 1, -1).
J_SIGNS = (1, 1, 1, 1, -1)

IDENTITY = tuple(tuple(2 if i == j else 0 for j in range(5)) for i in range(5))


def vector(entries):
    """Build a doubled vector from exact entries (ints or Fractions)."""
    doubled = []
    for x in entries:
        d = 2 * Fraction(x)
        if d.denominator != 1:
            raise ValueError("entry %s is not a half-integer" % (x,))
        doubled.append(int(d))
    if len(doubled) != 5:
        raise ValueError("need exactly 5 entries")
    return tuple(doubled)


def matrix(rows):
    """Build a doubled matrix from exact row entries."""
    m = tuple(vector(row) for row in rows)
    if len(m) != 5:
        raise ValueError("need exactly 5 rows")
    return m


def vector_entries(x):
    """Exact entries of a doubled vector, as Fractions."""
    return tuple(Fraction(c, 2) for c in x)


def matrix_entries(m):
    """Exact entries of a doubled matrix, as Fractions."""
    return tuple(tuple(Fraction(c, 2) for c in row) for row in m)


def lorentz_product4(x, y):
    """Four times the Lorentzian product of two doubled vectors (an int)."""
    return (x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
            - x[4] * y[4])


def lorentz_product(x, y):
    """x1*y1 + x2*y2 + x3*y3 + x4*y4 - x5*y5, exactly (a Fraction)."""
    return Fraction(lorentz_product4(x, y), 4)


def matvec(m, x):
    """Apply a doubled matrix to a doubled vector; result must be doubled."""
    out = []
    for row in m:
        s = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3] + row[4] * x[4]
        if s & 1:
            raise ArithmeticError("product left the half-integer lattice")
        out.append(s >> 1)
    return tuple(out)


def matmul(a, b):
    """Product of two doubled matrices; entries must stay half-integral."""
    bt = tuple(zip(*b))
    out = []
    for row in a:
        orow = []
        for col in bt:
            s = (row[0] * col[0] + row[1] * col[1] + row[2] * col[2]
                 + row[3] * col[3] + row[4] * col[4])
            if s & 1:
                raise ArithmeticError("product left the half-integer lattice")
            orow.append(s >> 1)
        out.append(tuple(orow))
    return tuple(out)


def matmul_chain(ms):
    """Left-to-right product of a sequence of doubled matrices."""
    out = IDENTITY
    for m in ms:
        out = matmul(out, m)
    return out


def transpose(m):
    return tuple(zip(*m))


def is_form_preserving(m):
    """True iff M^T J M = J exactly."""
    for i in range(5):
        for j in range(i, 5):
            s = sum(J_SIGNS[k] * m[k][i] * m[k][j] for k in range(5))
            want = 4 * J_SIGNS[i] if i == j else 0
            if s != want:
                return False
    return True


def is_positive_lorentz(m):
    """True iff M preserves the form and the upper sheet (entry (5,5) > 0)."""
    return m[4][4] > 0 and is_form_preserving(m)


def inverse(m):
    """Inverse of a form-preserving matrix, computed as J M^T J."""
    if not is_form_preserving(m):
        raise ValueError("matrix does not preserve the Lorentzian form")
    return tuple(tuple(J_SIGNS[i] * J_SIGNS[j] * m[j][i] for j in range(5))
                 for i in range(5))


def determinant(m):
    """Determinant of the (undoubled) matrix; +-1 for form-preserving input."""
    # Expansion by permutations is fine at size 5; doubled entries give
    # 32 * det, which is exact.
    rows = m
    det32 = 0
    for perm, sign in _PERMS5:
        p = sign
        for i in range(5):
            p *= rows[i][perm[i]]
        det32 += p
    if det32 % 32:
        raise ArithmeticError("determinant is not an integer")
    return det32 // 32


def _perms5():
    out = []

    def rec(rest, acc, sign):
        if not rest:
            out.append((tuple(acc), sign))
            return
        for idx, v in enumerate(rest):
            rec(rest[:idx] + rest[idx + 1:], acc + [v], sign * (-1) ** idx)

    rec(list(range(5)), [], 1)
    return out


_PERMS5 = _perms5()


def reflect_in_hyperplane(s):
    """Matrix of x -> x - 2 (x o s) s for a spacelike unit normal s.

    Requires s o s = 1 exactly; the result is an involution in O(4,1).
    """
    if lorentz_product4(s, s) != 4:
        raise ValueError("normal must satisfy s o s = 1")
    cols = []
    for k in range(5):
        e = tuple(2 if i == k else 0 for i in range(5))
        q4 = lorentz_product4(e, s)
        # doubled image: e - q4 * s / 2  (entries stay half-integral because
        # q4 * s_k is even for every paper normal; assert via matvec rules)
        col = []
        for i in range(5):
            num = 2 * e[i] - q4 * s[i]
            if num & 1:
                raise ArithmeticError("reflection left the half-integer lattice")
            col.append(num >> 1)
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(5)) for i in range(5))


def same_ray(x, y):
    """True iff y = lambda x for some positive rational lambda."""
    pivot = None
    for i in range(5):
        if x[i] != 0 or y[i] != 0:
            if x[i] == 0 or y[i] == 0:
                return False
            if pivot is None:
                if (x[i] > 0) != (y[i] > 0):
                    return False
                pivot = i
            elif x[pivot] * y[i] != y[pivot] * x[i]:
                return False
    return pivot is not None
