"""
Contractads Linalg - Exact rational matrices on top of sympy's DomainMatrix over QQ.

Rows are sparse dicts {column: Fraction}; everything returned is converted
back to Fraction.
"""

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Row = Dict[int, Fraction]


def to_qq(value: Fraction):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def matrix(rows: Sequence[Row], ncols: int) -> DomainMatrix:
    dod = {}
    for i, row in enumerate(rows):
        entries = {j: to_qq(c) for j, c in row.items() if c}
        if entries:
            dod[i] = entries
    return DomainMatrix.from_dod(dod, (len(rows), ncols), QQ)


def rank(rows: Sequence[Row], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return matrix(rows, ncols).rank()


def rref(rows: Sequence[Row], ncols: int) -> Tuple[List[Row], List[int]]:
    """Nonzero rows of the reduced row echelon form and their pivot columns."""
    if not rows or ncols == 0:
        return [], []
    reduced, pivots = matrix(rows, ncols).rref()
    dod = reduced.to_dod()
    result = []
    for i in range(len(pivots)):
        result.append({j: from_qq(c) for j, c in dod.get(i, {}).items()})
    return result, list(pivots)


def nullspace(rows: Sequence[Row], ncols: int) -> List[Row]:
    """A basis of {y : row . y = 0 for every row}."""
    if ncols == 0:
        return []
    if not any(rows):
        return [{j: Fraction(1)} for j in range(ncols)]
    basis = matrix(rows, ncols).nullspace().to_dod()
    return [{j: from_qq(c) for j, c in basis[i].items()} for i in sorted(basis)]


def is_zero_product(left: DomainMatrix, right: DomainMatrix) -> bool:
    """Whether left * right vanishes; shapes must chain."""
    if left.shape[1] != right.shape[0]:
        raise ValueError(f"shapes {left.shape} and {right.shape} do not chain")
    if 0 in left.shape or 0 in right.shape:
        return True
    return left.matmul(right).is_zero_matrix
