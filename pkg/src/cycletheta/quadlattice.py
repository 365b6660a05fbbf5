"""Integral even quadratic lattices, their duals, and discriminant forms.

All structural data is exact: Gram matrices are Python integers, coset
representatives are tuples of fractions.Fraction, and the signature is
computed by congruence diagonalization over the rationals (no eigenvalues,
no floating point).  The only float-valued function in this module is
gauss_sum, which serves as the numeric side of the signature oracle
|sum e(Q(x))| = sqrt(|D|) * e(sig/8).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "LatticeError",
    "NotSymmetric",
    "NotEven",
    "Degenerate",
    "Lattice",
    "DiscriminantForm",
    "new_lattice",
    "named_lattice",
    "direct_sum",
    "rescale",
    "discriminant_form",
    "disc_b",
    "gauss_sum",
    "smith_normal_form",
    "BUILTIN_GRAMS",
]

GramMatrix = tuple[tuple[int, ...], ...]
Coset = tuple[Fraction, ...]


class LatticeError(ValueError):
    """Base class for lattice construction failures."""


class NotSymmetric(LatticeError):
    pass


class NotEven(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


@dataclass(frozen=True)
class Lattice:
    """An integral lattice with even Gram matrix and known inertia.

    ``gram[i][j]`` is the bilinear value (e_i, e_j); the quadratic form is
    Q(x) = (x, x)/2, integer valued on lattice vectors.
    """

    gram: GramMatrix
    rank: int
    signature: tuple[int, int]
    det: int

    @property
    def is_positive_definite(self) -> bool:
        return self.signature == (self.rank, 0)

    def bilinear(self, x, y) -> Fraction:
        """(x, y) for vectors given in lattice-basis coordinates."""
        g = self.gram
        n = self.rank
        return sum(x[i] * g[i][j] * y[j] for i in range(n) for j in range(n))

    def quadratic(self, x) -> Fraction:
        """Q(x) = (x, x)/2."""
        return self.bilinear(x, x) / 2


def _det_bareiss(m: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _inertia(gram: GramMatrix) -> tuple[int, int]:
    """Signature (p, q) by exact symmetric congruence reduction over Q."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    for t in range(n):
        if m[t][t] == 0:
            # bring a nonzero entry to the pivot position
            piv = next((i for i in range(t, n) if m[i][i] != 0), None)
            if piv is not None:
                m[t], m[piv] = m[piv], m[t]
                for row in m:
                    row[t], row[piv] = row[piv], row[t]
            else:
                off = next(
                    ((i, j) for i in range(t, n) for j in range(i + 1, n) if m[i][j] != 0),
                    None,
                )
                if off is None:
                    break  # remaining block is zero
                i, j = off
                if i != t:
                    m[t], m[i] = m[i], m[t]
                    for row in m:
                        row[t], row[i] = row[i], row[t]
                    j = t if j == t else j
                # zero diagonal block: e_t += e_j creates 2*m[t][j] on the diagonal
                for s in range(n):
                    m[t][s] += m[j][s]
                for row in m:
                    row[t] += row[j]
        p = m[t][t]
        if p == 0:
            continue
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(t + 1, n):
            f = m[i][t] / p
            if f:
                for s in range(t, n):
                    m[i][s] -= f * m[t][s]
        for i in range(t + 1, n):
            m[t][i] = Fraction(0)
            m[i][t] = Fraction(0)
    return pos, neg


def new_lattice(gram) -> Lattice:
    """Validate a square integer Gram matrix and build a Lattice.

    Raises NotSymmetric / NotEven / Degenerate naming the violated
    invariant.
    """
    rows = [tuple(int(x) for x in row) for row in gram]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise LatticeError("gram must be a nonempty square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
    for i in range(n):
        if rows[i][i] % 2 != 0:
            raise NotEven(f"diagonal entry gram[{i}][{i}] = {rows[i][i]} is odd")
    det = _det_bareiss([list(r) for r in rows])
    if det == 0:
        raise Degenerate("gram is singular")
    sig = _inertia(tuple(rows))
    assert sig[0] + sig[1] == n
    return Lattice(gram=tuple(rows), rank=n, signature=sig, det=det)


# Standard even lattices used throughout the test corpus and the CLI.
BUILTIN_GRAMS: dict[str, tuple[tuple[int, ...], ...]] = {
    "A1": ((2,),),
    "A1(-1)": ((-2,),),
    "A2": ((2, -1), (-1, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    "D4": ((2, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, 0), (0, -1, 0, 2)),
    "E8": (
        (2, -1, 0, 0, 0, 0, 0, 0),
        (-1, 2, -1, 0, 0, 0, 0, 0),
        (0, -1, 2, -1, 0, 0, 0, 0),
        (0, 0, -1, 2, -1, 0, 0, 0),
        (0, 0, 0, -1, 2, -1, 0, -1),
        (0, 0, 0, 0, -1, 2, -1, 0),
        (0, 0, 0, 0, 0, -1, 2, 0),
        (0, 0, 0, 0, -1, 0, 0, 2),
    ),
    "U": ((0, 1), (1, 0)),
}


@lru_cache(maxsize=None)
def named_lattice(name: str) -> Lattice:
    try:
        gram = BUILTIN_GRAMS[name]
    except KeyError:
        raise LatticeError(f"unknown lattice name {name!r}; known: {sorted(BUILTIN_GRAMS)}")
    return new_lattice(gram)


def direct_sum(*lats: Lattice) -> Lattice:
    """Orthogonal direct sum (block-diagonal Gram matrix)."""
    n = sum(l.rank for l in lats)
    gram = [[0] * n for _ in range(n)]
    off = 0
    for l in lats:
        for i in range(l.rank):
            for j in range(l.rank):
                gram[off + i][off + j] = l.gram[i][j]
        off += l.rank
    return new_lattice(gram)


def rescale(lat: Lattice, c: int) -> Lattice:
    """The lattice L(c) with Gram matrix c * gram (c must keep it even)."""
    return new_lattice([[c * x for x in row] for row in lat.gram])


def smith_normal_form(a) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form over Z: returns (S, U, V) with U a V = S.

    S is diagonal with d_i | d_{i+1}, U and V unimodular.
    """
    m = [list(map(int, row)) for row in a]
    n_rows = len(m)
    n_cols = len(m[0])
    u = [[int(i == j) for j in range(n_rows)] for i in range(n_rows)]
    v = [[int(i == j) for j in range(n_cols)] for i in range(n_cols)]

    def row_op(i, j, q):  # row i -= q * row j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col i -= q * col j
        for row in m:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    size = min(n_rows, n_cols)
    while t < size:
        # find entry of smallest absolute value in the remaining block
        best = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        dirty = False
        for i in range(t + 1, n_rows):
            q = m[i][t] // m[t][t]
            if q:
                row_op(i, t, q)
            if m[i][t]:
                dirty = True
        for j in range(t + 1, n_cols):
            q = m[t][j] // m[t][t]
            if q:
                col_op(j, t, q)
            if m[t][j]:
                dirty = True
        if dirty:
            continue
        # enforce divisibility d_t | remaining entries
        bad = next(
            ((i, j) for i in range(t + 1, n_rows) for j in range(t + 1, n_cols)
             if m[i][j] % m[t][t] != 0),
            None,
        )
        if bad is not None:
            row_op(t, bad[0], -1)  # row t += row bad[0]
            continue
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return m, u, v


def _mat_inv_fraction(a) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]


class DiscriminantForm:
    """The finite quadratic module L'/L with Q: L'/L -> Q/Z.

    Cosets are represented canonically by dual vectors (in lattice-basis
    coordinates) with entries reduced into [0, 1).  The coset ordering is
    the sorted order of those tuples and is the index order used by the
    Weil representation matrices.
    """

    def __init__(self, lat: Lattice):
        self._lat = lat
        self.order = abs(lat.det)
        self.sig8 = (lat.signature[0] - lat.signature[1]) % 8

        n = lat.rank
        s, u, _v = smith_normal_form(lat.gram)
        u_inv = _mat_inv_fraction(u)
        g_inv = _mat_inv_fraction(lat.gram)

        gens: list[tuple[Coset, int]] = []
        for i in range(n):
            d = s[i][i]
            if abs(d) > 1:
                col = [u_inv[r][i] for r in range(n)]
                vec = tuple(
                    (sum(g_inv[r][c] * col[c] for c in range(n))) % 1 for r in range(n)
                )
                gens.append((vec, abs(d)))
        self.generators: tuple[tuple[Coset, int], ...] = tuple(gens)

        # enumerate the full group
        cosets = {tuple(Fraction(0) for _ in range(n))}
        for vec, d in gens:
            new = set()
            for base in cosets:
                cur = base
                for _ in range(d):
                    new.add(cur)
                    cur = tuple((x + y) % 1 for x, y in zip(cur, vec))
            cosets = new
        if len(cosets) != self.order:
            raise LatticeError(
                f"discriminant group enumeration mismatch: {len(cosets)} != {self.order}"
            )
        self.cosets: tuple[Coset, ...] = tuple(sorted(cosets))
        self._index = {c: i for i, c in enumerate(self.cosets)}

        gram = lat.gram
        q_table = {}
        for lam in self.cosets:
            val = sum(lam[i] * gram[i][j] * lam[j] for i in range(n) for j in range(n))
            q_table[lam] = (val / 2) % 1
        self.q_table: dict[Coset, Fraction] = q_table

        self.level = math.lcm(1, *(q.denominator for q in q_table.values()))

        for lam in self.cosets:
            if q_table[lam] != q_table[self.neg(lam)]:
                raise LatticeError("q(lambda) != q(-lambda); broken group structure")

    @property
    def lattice(self) -> Lattice:
        return self._lat

    def q(self, lam: Coset) -> Fraction:
        return self.q_table[self.reduce(lam)]

    def reduce(self, lam) -> Coset:
        return tuple(Fraction(x) % 1 for x in lam)

    def neg(self, lam: Coset) -> Coset:
        return tuple((-x) % 1 for x in lam)

    def add(self, lam: Coset, mu: Coset) -> Coset:
        return tuple((x + y) % 1 for x, y in zip(lam, mu))

    def index(self, lam: Coset) -> int:
        return self._index[self.reduce(lam)]

    def b(self, lam: Coset, mu: Coset) -> Fraction:
        """Bilinear form b(lam, mu) = Q(lam+mu) - Q(lam) - Q(mu) mod 1."""
        gram = self._lat.gram
        n = self._lat.rank
        val = sum(lam[i] * gram[i][j] * mu[j] for i in range(n) for j in range(n))
        return val % 1

    def coset_label(self, lam: Coset) -> str:
        return "(" + ",".join(str(x) for x in lam) + ")"

    def __repr__(self):
        return f"DiscriminantForm(order={self.order}, sig8={self.sig8}, level={self.level})"


@lru_cache(maxsize=None)
def discriminant_form(lat: Lattice) -> DiscriminantForm:
    return DiscriminantForm(lat)


def disc_b(df: DiscriminantForm, lam, mu) -> Fraction:
    """b(lam, mu) in [0, 1); symmetric and bi-additive."""
    return df.b(df.reduce(lam), df.reduce(mu))


def gauss_sum(df: DiscriminantForm) -> complex:
    """Sum of e(Q(lambda)) over the discriminant group (floating point)."""
    return sum(cmath.exp(2j * cmath.pi * float(df.q_table[lam])) for lam in df.cosets)
