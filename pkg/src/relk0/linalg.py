"""Exact normal forms and solvers.

Integer Smith normal form with recorded transforms, Howell normal form over
Z/l^N, division-free determinants over commutative group rings, and rational
solving over Q[G] through the regular representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .errors import BadSize
from .grouprings import INT, RAT, Domain, FiniteAbelianGroup, GroupRingElement


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass
class SmithDecomposition:
    """U * A * V = S with S diagonal; ``diagonal`` holds s_1 | s_2 | ..."""

    U: list
    V: list
    U_inv: list
    V_inv: list
    S: list
    diagonal: list

    @property
    def rank(self) -> int:
        return sum(1 for s in self.diagonal if s != 0)


def smith_normal_form(A) -> SmithDecomposition:
    A = [list(map(int, row)) for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    S = [row[:] for row in A]
    U, Ui, V, Vi = _identity(m), _identity(m), _identity(n), _identity(n)

    def row_add(i, j, c):  # row_i += c * row_j
        if c:
            S[i] = [a + c * b for a, b in zip(S[i], S[j])]
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
            for r in Ui:
                r[j] -= c * r[i]

    def row_swap(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def row_neg(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(i, j, c):  # col_i += c * col_j
        if c:
            for r in S:
                r[i] += c * r[j]
            for r in V:
                r[i] += c * r[j]
            Vi[j] = [a - c * b for a, b in zip(Vi[j], Vi[i])]

    def col_swap(i, j):
        if i != j:
            for r in S:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            row_swap(t, best[0])
            col_swap(t, best[1])
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    row_add(i, t, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    col_add(j, t, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if S[t][t] < 0:
            row_neg(t)
        if best is None:
            break
    diag = [S[i][i] for i in range(min(m, n))]
    return SmithDecomposition(U, V, Ui, Vi, S, diag)


# ---------------------------------------------------------------------------
# Howell normal form over Z/l^N


def _val(x, l):
    v = 0
    while x % l == 0:
        x //= l
        v += 1
    return v


@dataclass(frozen=True)
class HowellBasis:
    """Howell normal form of a row span over Z/l^N.

    Pivots are powers of l; entries above a pivot are reduced into
    [0, pivot). Two spans are equal iff their bases are identical.
    """

    l: int
    N: int
    ncols: int
    rows: tuple

    @property
    def modulus(self) -> int:
        return self.l**self.N

    def pivots(self):
        return [next(j for j, x in enumerate(r) if x) for r in self.rows]

    def __len__(self):
        return len(self.rows)


def howell_form(rows, l: int, N: int, ncols: int | None = None) -> HowellBasis:
    q = l**N
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pool = {tuple(x % q for x in r) for r in rows}
    pool = [list(r) for r in pool if any(r)]
    basis = []
    for c in range(ncols):
        best, bestv = None, None
        for i, r in enumerate(pool):
            if r[c]:
                v = _val(r[c], l)
                if best is None or v < bestv:
                    best, bestv = i, v
                    if v == 0:
                        break
        if best is None:
            continue
        piv = pool.pop(best)
        lv = l**bestv
        unit = piv[c] // lv
        inv = pow(unit, -1, q)
        piv = [x * inv % q for x in piv]
        seen = set()
        new_pool = []
        for r in pool:
            if r[c]:
                f = r[c] // lv
                r = [(a - f * b) % q for a, b in zip(r, piv)]
            t = tuple(r)
            if any(t) and t not in seen:
                seen.add(t)
                new_pool.append(r)
        if bestv > 0:
            ann = tuple(x * (q // lv) % q for x in piv)
            if any(ann) and ann not in seen:
                new_pool.append(list(ann))
        pool = new_pool
        basis.append((c, piv))
    for k, (c, piv) in enumerate(basis):
        pv = piv[c]
        for j in range(k):
            row = basis[j][1]
            f = row[c] // pv
            if f:
                basis[j] = (basis[j][0], [(a - f * b) % q for a, b in zip(row, piv)])
    return HowellBasis(l, N, ncols, tuple(tuple(r) for _, r in basis))


def residue_membership(B: HowellBasis, v) -> bool:
    q = B.modulus
    v = [x % q for x in v]
    if len(v) != B.ncols:
        raise BadSize(f"vector of length {len(v)} against {B.ncols} columns")
    for row in B.rows:
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        f = v[c] // row[c]
        if f:
            v = [(a - f * b) % q for a, b in zip(v, row)]
    return not any(v)


def kernel_mod(A, l: int, N: int, ncols: int) -> list[list[int]]:
    """Generators of {x in (Z/l^N)^ncols : A x = 0}, A given as rows."""
    m = len(A)
    rows = []
    for j in range(ncols):
        rows.append([A[i][j] for i in range(m)] + [int(k == j) for k in range(ncols)])
    H = howell_form(rows, l, N, m + ncols)
    return [list(r[m:]) for r in H.rows if not any(r[:m])]


# ---------------------------------------------------------------------------
# Matrices over group rings


class GroupRingMatrix:
    """rows x cols matrix with entries in one group ring."""

    def __init__(self, group: FiniteAbelianGroup, domain: Domain, entries, rows=None, cols=None):
        entries = [list(r) for r in entries]
        self.group = group
        self.domain = domain
        self.rows = len(entries) if rows is None else rows
        self.cols = (len(entries[0]) if entries else 0) if cols is None else cols
        fixed = []
        for r in entries:
            if len(r) != self.cols:
                raise BadSize("ragged matrix")
            out = []
            for x in r:
                if not isinstance(x, GroupRingElement):
                    x = GroupRingElement.scalar(group, x, domain)
                elif x.domain != domain:
                    x = x.to_domain(domain)
                out.append(x)
            fixed.append(tuple(out))
        if len(fixed) != self.rows:
            raise BadSize("row count mismatch")
        self.entries = tuple(fixed)

    @classmethod
    def zeros(cls, group, rows, cols, domain=INT):
        z = GroupRingElement.zero(group, domain)
        return cls(group, domain, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, group, n, domain=INT):
        z = GroupRingElement.zero(group, domain)
        o = GroupRingElement.one(group, domain)
        return cls(group, domain, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, elements, domain=None):
        group = elements[0].group
        domain = domain or elements[0].domain
        n = len(elements)
        z = GroupRingElement.zero(group, domain)
        return cls(group, domain, [[elements[i] if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_ints(cls, group, rows, domain=INT):
        """Entries given as integers (scalars) or coefficient lists."""
        out = []
        for r in rows:
            out.append(
                [
                    GroupRingElement(group, domain, tuple(x)) if isinstance(x, (list, tuple)) else x
                    for x in r
                ]
            )
        return cls(group, domain, out, len(rows), len(rows[0]) if rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingMatrix)
            and self.group == other.group
            and self.domain == other.domain
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"GroupRingMatrix({self.rows}x{self.cols}, {self.domain}, [{body}])"

    def map(self, f):
        return GroupRingMatrix(self.group, self.domain, [[f(x) for x in r] for r in self.entries], self.rows, self.cols)

    def to_domain(self, domain):
        return GroupRingMatrix(self.group, domain, [[x.to_domain(domain) for x in r] for r in self.entries], self.rows, self.cols)

    def to_rational(self):
        return self.to_domain(RAT)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise BadSize(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        z = GroupRingElement.zero(self.group, self.domain)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GroupRingMatrix(self.group, self.domain, out, self.rows, other.cols)

    def __add__(self, other):
        return GroupRingMatrix(
            self.group, self.domain,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.rows, self.cols,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return self.map(lambda x: x * c)

    def transpose(self):
        return GroupRingMatrix(
            self.group, self.domain,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols, self.rows,
        )

    def tau(self):
        return self.map(lambda x: x.tau())

    def submatrix(self, rows, cols):
        return GroupRingMatrix(
            self.group, self.domain,
            [[self.entries[i][j] for j in cols] for i in rows],
            len(rows), len(cols),
        )

    def is_zero(self):
        return all(x.is_zero() for r in self.entries for x in r)

    def expand(self) -> list[list]:
        """Block matrix of the regular representation, size (rows*|G|) x (cols*|G|)."""
        n = self.group.order
        M = [[0] * (self.cols * n) for _ in range(self.rows * n)]
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                if x.is_zero():
                    continue
                B = x.mult_matrix()
                for a in range(n):
                    row = M[i * n + a]
                    for b in range(n):
                        row[j * n + b] = B[a][b]
        return M

    @classmethod
    def from_equivariant(cls, group, M, rows, cols, domain=RAT):
        """Inverse of :meth:`expand` for a G-equivariant block matrix."""
        n = group.order
        entries = [
            [
                GroupRingElement(group, domain, tuple(M[i * n + h][j * n] for h in range(n)))
                for j in range(cols)
            ]
            for i in range(rows)
        ]
        return cls(group, domain, entries, rows, cols)

    @staticmethod
    def block(blocks):
        """Assemble a block matrix from a nested list of GroupRingMatrix."""
        first = blocks[0][0]
        out = []
        for brow in blocks:
            h = brow[0].rows
            for i in range(h):
                out.append([x for b in brow for x in b.entries[i]])
        cols = sum(b.cols for b in blocks[0])
        return GroupRingMatrix(first.group, first.domain, out, len(out), cols)


def column_vector(elements):
    return GroupRingMatrix(elements[0].group, elements[0].domain, [[x] for x in elements])


def det_division_free(A: GroupRingMatrix) -> GroupRingElement:
    """Berkowitz determinant; uses only ring additions and products."""
    if A.rows != A.cols:
        raise BadSize("determinant of a non-square matrix")
    return berkowitz_det(
        [list(r) for r in A.entries],
        GroupRingElement.one(A.group, A.domain),
        GroupRingElement.zero(A.group, A.domain),
    )


def berkowitz_det(M, one, zero):
    """Determinant over any commutative ring, given its one and zero."""
    n = len(M)
    if n == 0:
        return one
    poly = [one, zero - M[0][0]]  # char poly of the leading 1x1 block, highest first
    for r in range(2, n + 1):
        a = M[r - 1][r - 1]
        row = M[r - 1][: r - 1]
        col = [M[i][r - 1] for i in range(r - 1)]
        # toeplitz column: 1, -a, -R c, -R A c, ..., -R A^(r-2) c
        tcol = [one, zero - a]
        vec = col
        for _ in range(r - 1):
            s = zero
            for x, y in zip(row, vec):
                s = s + x * y
            tcol.append(zero - s)
            vec = [_dot(M[i][: r - 1], vec, zero) for i in range(r - 1)]
        new = []
        for i in range(r + 1):
            s = zero
            for j in range(min(i, r - 1) + 1):
                if i - j < len(tcol):
                    s = s + tcol[i - j] * poly[j]
            new.append(s)
        poly = new
    d = poly[n]
    return d if n % 2 == 0 else zero - d


def _dot(u, v, zero):
    s = zero
    for x, y in zip(u, v):
        s = s + x * y
    return s


def cofactor_det(M, one, zero):
    """Laplace expansion along the first row; test oracle for small matrices."""
    n = len(M)
    if n == 0:
        return one
    total = zero
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * cofactor_det(minor, one, zero)
        total = total + term if j % 2 == 0 else total - term
    return total


def all_minors(A: GroupRingMatrix, k: int) -> list[GroupRingElement]:
    if k < 0 or k > min(A.rows, A.cols):
        raise BadSize(f"no {k}x{k} minors in a {A.rows}x{A.cols} matrix")
    one = GroupRingElement.one(A.group, A.domain)
    zero = GroupRingElement.zero(A.group, A.domain)
    out = []
    for rs in itertools.combinations(range(A.rows), k):
        for cs in itertools.combinations(range(A.cols), k):
            out.append(berkowitz_det([[A.entries[i][j] for j in cs] for i in rs], one, zero))
    return out


# ---------------------------------------------------------------------------
# Rational solving over Q[G]


def equivariant_solve(A: GroupRingMatrix, b: GroupRingMatrix, rng=None):
    """Some X over Q[G] with A X = b, or ``None`` when no solution exists.

    With ``rng`` a random element of the solution space is returned.
    """
    G = A.group
    n = G.order
    Ax = A.to_rational().expand()
    bx = b.to_rational().expand()
    null = None
    cols = []
    for k in range(b.cols):
        rhs = [bx[i][k * n] for i in range(len(bx))]
        x = exact.solve(Ax, rhs)
        if x is None:
            return None
        if rng is not None:
            if null is None:
                null = exact.nullspace(Ax, A.cols * n)
            for v in null:
                c = Fraction(rng.randint(-3, 3))
                if c:
                    x = [a + c * b_ for a, b_ in zip(x, v)]
        cols.append(x)
    entries = [
        [GroupRingElement(G, RAT, tuple(cols[k][j * n:(j + 1) * n])) for k in range(b.cols)]
        for j in range(A.cols)
    ]
    return GroupRingMatrix(G, RAT, entries, A.cols, b.cols)


def generalized_inverse(A: GroupRingMatrix, rng=None) -> GroupRingMatrix:
    """G-equivariant S over Q[G] with A S A = A.

    A rational generalized inverse of the expanded matrix is averaged over G;
    ``rng`` randomizes the pivot choice and adds a random element of the
    generalized-inverse family before averaging.
    """
    G = A.group
    n = G.order
    D = A.to_rational().expand()
    m, k = len(D), A.cols * n
    if m == 0 or k == 0:
        return GroupRingMatrix.zeros(G, A.cols, A.rows, RAT)
    col_order = list(range(k))
    row_order = list(range(m))
    if rng is not None:
        rng.shuffle(col_order)
        rng.shuffle(row_order)
    _, cols = exact.rref(D, k, col_order)
    Dt = [list(r) for r in zip(*D)]
    _, rows = exact.rref(Dt, m, row_order)
    S0 = [[Fraction(0)] * m for _ in range(k)]
    if cols:
        inv = exact.inverse([[D[i][j] for j in cols] for i in rows])
        for a, j in enumerate(cols):
            for b, i in enumerate(rows):
                S0[j][i] = inv[a][b]
    if rng is not None:
        Z1 = [[Fraction(rng.randint(-2, 2)) for _ in range(m)] for _ in range(k)]
        Z2 = [[Fraction(rng.randint(-2, 2)) for _ in range(m)] for _ in range(k)]
        SD = exact.matmul(S0, D)
        DS = exact.matmul(D, S0)
        I_SD = [[int(i == j) - SD[i][j] for j in range(k)] for i in range(k)]
        I_DS = [[int(i == j) - DS[i][j] for j in range(m)] for i in range(m)]
        T1 = exact.matmul(I_SD, Z1)
        T2 = exact.matmul(Z2, I_DS)
        S0 = [[a + b + c for a, b, c in zip(r0, r1, r2)] for r0, r1, r2 in zip(S0, T1, T2)]
    # average g S0 g^-1, keeping only the identity column of each block
    table = G.mul_table
    entries = []
    for a in range(A.cols):
        row = []
        for b in range(A.rows):
            coeffs = []
            for h in range(n):
                s = sum(S0[a * n + table[g][h]][b * n + g] for g in range(n))
                coeffs.append(Fraction(s) / n)
            row.append(GroupRingElement(G, RAT, tuple(coeffs)))
        entries.append(row)
    return GroupRingMatrix(G, RAT, entries, A.cols, A.rows)
