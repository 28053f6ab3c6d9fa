"""Integral homology of glued 24-cell manifolds.

Homology is taken for the compact truncated manifold with boundary (ideal
vertices replaced by their cube links), computed from the cellular chain
complex via Smith normal form.  The volume of the glued manifold follows
from the Euler characteristic.
"""

import math

from .complexes import build_quotient_complex
from .snf import AbelianGroup, homology_of_pair, smith_normal_form


def truncated_complex(p, nsheets=1, sheet_shift=None):
    """The quotient CW complex of the truncated manifold."""
    complex_, _ = build_quotient_complex(p, nsheets=nsheets,
                                         sheet_shift=sheet_shift)
    return complex_


def homology_of_complex(cx):
    """H_0..H_n of a QuotientComplex, as AbelianGroup values."""
    counts = cx.cell_counts
    top = len(counts) - 1
    out = []
    for k in range(top + 1):
        bk = cx.boundaries.get(k) if k >= 1 else None
        bk1 = cx.boundaries.get(k + 1) if k < top else None
        out.append(homology_of_pair(bk, bk1, counts[k]))
    return out


def homology_groups(p, nsheets=1, sheet_shift=None):
    """H_0..H_4 of the glued manifold (truncated model)."""
    return homology_of_complex(truncated_complex(p, nsheets, sheet_shift))


def abelianization(pr):
    """H_1 as the abelianization of a ridge-cycle presentation."""
    mat = pr.exponent_matrix()
    ngens = len(pr.generators)
    if not mat:
        return AbelianGroup(ngens)
    invariants, rank = smith_normal_form(mat)
    return AbelianGroup.from_invariants(ngens - rank, invariants)


def volume_from_euler(chi):
    """Vol = (4/3) pi^2 chi for a finite-volume hyperbolic 4-manifold."""
    if chi < 0 or chi != int(chi):
        raise ValueError("Euler characteristic must be a non-negative integer")
    return (4.0 / 3.0) * math.pi ** 2 * chi
