"""Linear algebra: Gaussian elimination over the coefficient fields and F2 tools.

Over local fields elimination uses full pivoting on the entry of minimal
valuation, which keeps the precision loss bounded by the valuation of the
pivots.  Zero tests go through ``F.decide_zero``.
"""

from .errors import IllConditioned
from .fields import LocalField


def _pivot_key(F, x):
    if isinstance(F, LocalField):
        return x.valuation()
    return 0


def echelon(F, rows, ncols):
    """Row-reduce an augmented matrix in place.

    ``rows`` are lists of length ``ncols + extra``; pivots are searched only in
    the first ``ncols`` columns.  Returns the list of (row, col) pivots; the
    rows after the pivots are the residual rows.
    """
    m = len(rows)
    pivots = []
    r = 0
    cols_left = set(range(ncols))
    while r < m and cols_left:
        best = None
        for i in range(r, m):
            row = rows[i]
            for j in cols_left:
                x = row[j]
                if F.is_zero(x):
                    continue
                key = _pivot_key(F, x)
                if best is None or key < best[0]:
                    best = (key, i, j)
                    if key == 0 and not isinstance(F, LocalField):
                        break
            if best is not None and not isinstance(F, LocalField):
                break
        if best is None:
            break
        _, i, j = best
        if F.decide_zero(rows[i][j]):
            break
        rows[r], rows[i] = rows[i], rows[r]
        prow = rows[r]
        inv = F.inv(prow[j])
        prow[:] = [F.mul(x, inv) for x in prow]
        for i2 in range(m):
            if i2 == r:
                continue
            t = rows[i2][j]
            if F.is_zero(t):
                continue
            row = rows[i2]
            rows[i2] = [F.sub(a, F.mul(t, b)) for a, b in zip(row, prow)]
        pivots.append((r, j))
        cols_left.discard(j)
        r += 1
    return pivots


def solve(F, A, b):
    """Solve A x = b.

    Returns ``(x, nullity)`` with free variables set to zero, or ``None`` when
    the system is inconsistent.  Raises IllConditioned when consistency
    cannot be decided at the available precision.
    """
    ncols = len(A[0]) if A else 0
    rows = [list(A[i]) + [b[i]] for i in range(len(A))]
    pivots = echelon(F, rows, ncols)
    for i in range(len(pivots), len(rows)):
        if not F.decide_zero(rows[i][ncols]):
            return None
        for j in range(ncols):
            if not F.decide_zero(rows[i][j]):
                raise IllConditioned("residual row has undecided entries")
    x = [F.zero] * ncols
    for r, j in pivots:
        x[j] = rows[r][ncols]
    return x, ncols - len(pivots)


def invert(F, M):
    n = len(M)
    rows = [list(M[i]) + [F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    pivots = echelon(F, rows, n)
    if len(pivots) < n:
        raise IllConditioned("matrix is singular to the working precision")
    inv = [None] * n
    for r, j in pivots:
        inv[j] = rows[r][n:]
    return inv


def matvec(F, M, v):
    out = []
    for row in M:
        acc = F.zero
        for a, x in zip(row, v):
            acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


# --------------------------------------------------------------------------
# F2 linear algebra on int bitmasks


class F2Space:
    """Row-echelon basis of a subspace of F2^dim (vectors are ints)."""

    def __init__(self, vectors=()):
        self.rows = {}  # pivot bit -> vector
        for v in vectors:
            self.add(v)

    def reduce(self, v):
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def normal_form(self, v):
        """Canonical representative of v modulo the space (linear in v)."""
        for top in sorted(self.rows, reverse=True):
            if (v >> top) & 1:
                v ^= self.rows[top]
        return v

    def add(self, v):
        """Insert v; returns True when it was independent."""
        v = self.reduce(v)
        if not v:
            return False
        self.rows[v.bit_length() - 1] = v
        return True

    def contains(self, v):
        return self.reduce(v) == 0

    @property
    def dim(self):
        return len(self.rows)

    def basis(self):
        return [self.rows[k] for k in sorted(self.rows)]

    def reduced_basis(self):
        """The unique reduced row-echelon basis, ascending by pivot."""
        pivots = sorted(self.rows)
        out = []
        for i, p in enumerate(pivots):
            v = self.rows[p]
            for q, w in zip(pivots[:i], out):
                if (v >> q) & 1:
                    v ^= w
            out.append(v)
        return out

    def elements(self):
        out = [0]
        for b in self.basis():
            out += [x ^ b for x in out]
        return sorted(out)


def f2_rank(vectors):
    return F2Space(vectors).dim


def f2_kernel(images):
    """Kernel of the map e -> sum e_i images[i], as a list of bitmask combos."""
    space = {}
    kernel = []
    for i, v in enumerate(images):
        combo = 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in space:
                space[top] = (v, combo)
                break
            pv, pc = space[top]
            v ^= pv
            combo ^= pc
        if not v:
            kernel.append(combo)
    return kernel


def f2_combine(images, combo):
    out = 0
    i = 0
    while combo:
        if combo & 1:
            out ^= images[i]
        combo >>= 1
        i += 1
    return out


def f2_preimage(images, target):
    """Some combo with f2_combine(images, combo) == target, or None."""
    space = {}
    for i, v in enumerate(images):
        combo = 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in space:
                space[top] = (v, combo)
                break
            pv, pc = space[top]
            v ^= pv
            combo ^= pc
    combo = 0
    v = target
    while v:
        top = v.bit_length() - 1
        if top not in space:
            return None
        pv, pc = space[top]
        v ^= pv
        combo ^= pc
    return combo
