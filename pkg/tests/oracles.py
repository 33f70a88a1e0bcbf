"""Independent reference computations used to derive expected values.

Nothing here imports the package under test: words are plain tuples of
(generator, sign), matrices are lists of Fractions or ints, and group rings
over cyclic groups are coefficient lists.
"""

from fractions import Fraction
from itertools import product


def all_reduced_words(n, max_len):
    """Every freely reduced word of length <= max_len as a tuple of (gen, sign)."""
    letters = [(i, s) for i in range(n) for s in (1, -1)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for a in letters:
                if w and w[-1] == (a[0], -a[1]):
                    continue
                nxt.append(w + (a,))
        out.extend(nxt)
        frontier = nxt
    return out


def brute_count_reduced(n, max_len):
    """Count by filtering all letter strings, no recursion shared with the above."""
    letters = [(i, s) for i in range(n) for s in (1, -1)]
    total = 0
    for k in range(max_len + 1):
        for w in product(letters, repeat=k):
            if all(w[j + 1] != (w[j][0], -w[j][1]) for j in range(k - 1)):
                total += 1
    return total


def cyclic_trivial_words(m, r):
    """Reduced words in one letter of length <= r trivial in Z/m (m = 0 means Z)."""
    out = {()}
    for k in range(1, r + 1):
        if m and k % m == 0:
            out.add(((0, 1),) * k)
            out.add(((0, -1),) * k)
    return out


def cyclic_valuation(m1, m2, cap):
    """Largest r <= cap where one-letter kernels agree; m = 0 means Z."""
    for r in range(1, cap + 1):
        if cyclic_trivial_words(m1, r) != cyclic_trivial_words(m2, r):
            return r - 1
    return cap


def frac_matmul(x, y):
    n = len(x)
    return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def frac_inverse(m):
    """Gauss-Jordan over Fractions."""
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        f = a[c][c]
        a[c] = [v / f for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                g = a[r][c]
                a[r] = [u - g * v for u, v in zip(a[r], a[c])]
    return [row[n:] for row in a]


def laurent_to_frac(lm):
    return [[Fraction(num, lm.p**exp) for num, exp in row] for row in lm.entries]


def mod_matmul(x, y, q):
    n = len(x)
    return [[sum(x[i][k] * y[k][j] for k in range(n)) % q for j in range(n)] for i in range(n)]


def mod_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mod_order(m, q, bound=10**5):
    n = len(m)
    cur = [row[:] for row in m]
    cur = [[v % q for v in row] for row in cur]
    for k in range(1, bound + 1):
        if cur == mod_identity(n):
            return k
        cur = mod_matmul(cur, m, q)
    return None


def elementary(n, i, j, v):
    m = mod_identity(n)
    m[i][j] = v
    return m


def cyclic_poly_mul(u, v, m, modulus=None):
    """Product in R[C_m] for coefficient lists of length m."""
    out = [0] * m
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            out[(i + j) % m] += a * b
    if modulus:
        out = [c % modulus for c in out]
    return out


def naive_direct_finiteness(ring_elems, add, mul, zero, one, group_elems, gmul, identity):
    """Pure-Python scan over R[G]: (count, units, violations)."""
    k = len(group_elems)
    idx = {g: i for i, g in enumerate(group_elems)}
    e = idx[identity]
    elems = list(product(ring_elems, repeat=k))

    def times(x, y):
        out = [zero] * k
        for i, a in enumerate(x):
            if a == zero:
                continue
            for j, b in enumerate(y):
                if b == zero:
                    continue
                t = idx[gmul(group_elems[i], group_elems[j])]
                out[t] = add(out[t], mul(a, b))
        return tuple(out)

    one_vec = tuple(one if i == e else zero for i in range(k))
    units, bad = 0, []
    for x in elems:
        right = [y for y in elems if times(x, y) == one_vec]
        if right:
            for y in right:
                if times(y, x) != one_vec:
                    bad.append((x, y))
            if any(times(y, x) == one_vec for y in right):
                units += 1
    return len(elems), units, bad


def perm_compose(g, h):
    """Apply g, then h."""
    return tuple(h[i] for i in g)


def perm_closure(gens):
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    stack = [ident]
    while stack:
        g = stack.pop()
        for s in gens:
            x = perm_compose(g, s)
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen
