"""Dense exact linear algebra over Q and Z/p on plain nested lists."""

from fractions import Fraction


def rref(rows, ncols=None, pivot_order=None):
    """Reduced row echelon form over Q.

    Returns ``(R, pivots)`` where ``pivots[i]`` is the pivot column of row i.
    ``pivot_order`` optionally permutes the order in which columns are tried,
    which changes the pivots chosen but not the row space.
    """
    R = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    cols = list(range(ncols)) if pivot_order is None else list(pivot_order)
    pivots = []
    r = 0
    for c in cols:
        if r == len(R):
            break
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [a - f * b for a, b in zip(Ri, Rr)]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def solve(A, b):
    """One solution x of A x = b over Q (b a list), or None if inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x


def nullspace(A, ncols):
    """Basis of {x : A x = 0} over Q."""
    R, piv = rref(A, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(R, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def inverse(A):
    """Inverse of a square rational matrix, or None if singular."""
    n = len(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        return None
    return [row[n:] for row in R]


def det(A):
    """Determinant over Q by elimination."""
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def matmul(A, B):
    if not A:
        return []
    m = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else [() for _ in range(m)]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def rank_mod_p(rows, p):
    """Rank of an integer matrix over F_p."""
    R = [[x % p for x in row] for row in rows]
    r = 0
    ncols = len(R[0]) if R else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [x * inv % p for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(a - f * b) % p for a, b in zip(R[i], R[r])]
        r += 1
    return r
