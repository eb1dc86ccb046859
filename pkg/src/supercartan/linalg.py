"""Small exact linear algebra over the rationals.

Everything here is deterministic: rows and columns keep their given order,
pivoting is leftmost-first, and integer "primitive" representatives are
normalized to coprime entries with positive leading coefficient.  Matrices
are lists of lists of Fractions (or ints).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    rows = [[Fraction(x) for x in row] for row in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_basis(rows, ncols=None):
    """Basis of {x : A x = 0} for A given by rows; echelon-parametrized."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for empty matrix")
        ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -red[r][f]
        basis.append(vec)
    return basis


def row_space_coordinate_slice(rows, keep):
    """Basis of the subspace of rowspace(rows) supported on columns `keep`.

    keep is a set of column indices.  Returned vectors span
    rowspace(rows) intersected with the coordinate subspace.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    other = [c for c in range(ncols) if c not in keep]
    # coefficients x over the rows with (x . rows) vanishing outside keep
    constraint = [[rows[r][c] for r in range(len(rows))] for c in other]
    coeffs = kernel_basis(constraint, ncols=len(rows)) if other else [
        [Fraction(1 if i == j else 0) for j in range(len(rows))] for i in range(len(rows))
    ]
    out = []
    for x in coeffs:
        vec = [sum(x[r] * rows[r][c] for r in range(len(rows))) for c in range(ncols)]
        if any(v != 0 for v in vec):
            out.append(vec)
    red, _ = rref(out)
    return red


def solve_coordinates(basis_rows, target):
    """Coordinates of target over basis_rows, or None if not in the span."""
    if not basis_rows:
        return None if any(t != 0 for t in target) else []
    ncols = len(basis_rows[0])
    aug = [[basis_rows[r][c] for r in range(len(basis_rows))] + [Fraction(target[c])]
           for c in range(ncols)]
    red, pivots = rref(aug)
    n = len(basis_rows)
    if n in pivots:
        return None  # inconsistent
    coords = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        coords[p] = red[r][-1]
    # verify (guards against underdetermined bases, which we never produce)
    for c in range(ncols):
        if sum(coords[r] * basis_rows[r][c] for r in range(n)) != target[c]:
            return None
    return coords


def primitive(vector):
    """Scale a rational vector to coprime integers with positive leading entry."""
    denom = 1
    for x in vector:
        denom = denom * Fraction(x).denominator // gcd(denom, Fraction(x).denominator)
    ints = [int(Fraction(x) * denom) for x in vector]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-v for v in ints]
            break
    return ints


def rank(rows):
    red, pivots = rref(rows)
    return len(pivots)
