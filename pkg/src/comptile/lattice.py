"""Index vectors and integer lattices generated by them.

The lattice generated by a list of integer k-vectors is decided through a
row-style Hermite normal form computed over Python's arbitrary-precision
integers, with the unimodular row transform tracked so that a positive
membership answer comes with integer coefficients over the ORIGINAL
generators (membership certificates are re-multiplied before being
returned).

A transferral is a difference u_i - u_j of unit vectors lying in the
lattice; the scan over ordered pairs is deterministic and the degenerate
pair i == j is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, ValidationError
from .graphs import VertexPartition


def index_vector(s, p: VertexPartition) -> tuple:
    """i-th coordinate = |S intersect V_i|.  S must lie in the ground set."""
    s = list(s)
    if any(not 0 <= v < p.n for v in s):
        raise ValidationError("vertex outside the partition's ground set")
    if len(set(s)) != len(s):
        raise ValidationError("index_vector expects a set (duplicate vertex)")
    counts = [0] * p.k
    for v in s:
        counts[p.block_of(v)] += 1
    return tuple(counts)


def _hnf_with_transform(rows: list, dim: int) -> tuple:
    """Row HNF of the matrix with the given rows.

    Returns (hnf_rows, transform, pivots) with transform @ rows == hnf_rows
    over the integers and pivots a list of (row_index, column) pairs for
    the non-zero rows.  Pivots are positive; entries above a pivot are
    reduced into [0, pivot).
    """
    m = len(rows)
    h = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    pivots = []
    for col in range(dim):
        # gcd-reduce all entries below `row` in this column into one row
        while True:
            nz = [r for r in range(row, m) if h[r][col] != 0]
            if not nz:
                break
            r0 = min(nz, key=lambda r: (abs(h[r][col]), r))
            if r0 != row:
                h[row], h[r0] = h[r0], h[row]
                u[row], u[r0] = u[r0], u[row]
            done = True
            for r in range(row + 1, m):
                if h[r][col]:
                    q = h[r][col] // h[row][col]
                    for c in range(dim):
                        h[r][c] -= q * h[row][c]
                    for c in range(m):
                        u[r][c] -= q * u[row][c]
                    if h[r][col]:
                        done = False
            if done:
                break
        if row < m and h[row][col] != 0:
            if h[row][col] < 0:
                h[row] = [-x for x in h[row]]
                u[row] = [-x for x in u[row]]
            for r in range(row):
                q = h[r][col] // h[row][col]
                if q:
                    for c in range(dim):
                        h[r][c] -= q * h[row][c]
                    for c in range(m):
                        u[r][c] -= q * u[row][c]
            pivots.append((row, col))
            row += 1
            if row == m:
                break
    return h, u, pivots


class GeneratedLattice:
    """Integer span of a generator list, with HNF basis cached."""

    def __init__(self, generators, dim: int = None):
        gens = [tuple(int(x) for x in g) for g in generators]
        if dim is None:
            if not gens:
                raise ValidationError("dimension required for an empty generator list")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ValidationError("generators have mixed dimensions")
        self.generators = gens
        self.dim = dim
        self._hnf, self._transform, self._pivots = _hnf_with_transform(gens, dim)

    def membership(self, x) -> tuple:
        """(member, coefficients): coefficients over the original generators.

        Solves the triangular pivot system; any non-zero residual left in a
        pivot-free column means x is outside the lattice.
        """
        x = [int(v) for v in x]
        if len(x) != self.dim:
            raise ValidationError(f"vector has dimension {len(x)}, lattice has {self.dim}")
        residual = list(x)
        hnf_coeffs = [0] * len(self.generators)
        for row, col in self._pivots:
            piv = self._hnf[row][col]
            if residual[col] % piv != 0:
                return False, None
            q = residual[col] // piv
            if q:
                for c in range(self.dim):
                    residual[c] -= q * self._hnf[row][c]
            hnf_coeffs[row] = q
        if any(residual):
            return False, None
        coeffs = [0] * len(self.generators)
        for r, q in enumerate(hnf_coeffs):
            if q:
                for s in range(len(self.generators)):
                    coeffs[s] += q * self._transform[r][s]
        # certificate check: the returned coefficients must reproduce x
        rebuilt = [0] * self.dim
        for a, gen in zip(coeffs, self.generators):
            if a:
                for c in range(self.dim):
                    rebuilt[c] += a * gen[c]
        if rebuilt != x:
            raise ConsistencyError("membership certificate failed to reproduce the target")
        return True, tuple(coeffs)

    def __contains__(self, x) -> bool:
        return self.membership(x)[0]


def unit_vector(i: int, k: int) -> tuple:
    if not 0 <= i < k:
        raise ValidationError(f"unit vector index {i} outside 0..{k - 1}")
    return tuple(1 if j == i else 0 for j in range(k))


def find_transferral(lattice: GeneratedLattice) -> tuple:
    """First ordered pair (i, j), i != j, with u_i - u_j in the lattice.

    Returns (i, j, coefficients) or None.  Indices are 0-based; the scan
    order is lexicographic over ordered pairs.
    """
    k = lattice.dim
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            target = tuple((1 if c == i else 0) - (1 if c == j else 0) for c in range(k))
            member, coeffs = lattice.membership(target)
            if member:
                return i, j, coeffs
    return None


@dataclass(frozen=True)
class PosNegSplit:
    p: tuple
    q: tuple
    c: int  # common coefficient mass when balanced, else sum(p)


def split_pos_neg(coeffs, expect_balanced: bool = False) -> PosNegSplit:
    """p = max(a, 0), q = max(-a, 0) componentwise; p - q == a.

    For coefficients coming from a transferral equation over h-vectors the
    two masses agree (sum p == sum q =: C); pass expect_balanced=True to
    enforce that.
    """
    a = [int(x) for x in coeffs]
    p = tuple(max(x, 0) for x in a)
    q = tuple(max(-x, 0) for x in a)
    if expect_balanced and sum(p) != sum(q):
        raise ConsistencyError(f"unbalanced split: sum p = {sum(p)}, sum q = {sum(q)}")
    return PosNegSplit(p, q, sum(p))
