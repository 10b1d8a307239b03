"""Writes Cayley tables of small 2-groups, built from explicit normal forms.

Run from this directory: python3 generate.py
"""
from itertools import product


def cyclic(n):
    return list(range(n)), lambda x, y: (x + y) % n


def direct(*groups):
    elems = list(product(*[g[0] for g in groups]))
    muls = [g[1] for g in groups]
    return elems, lambda x, y: tuple(m(a, b) for m, a, b in zip(muls, x, y))


def metacyclic(n, m, r, s=0):
    """<a, b | a^n = 1, b^m = a^s, b a b^-1 = a^r>, elements a^k b^e."""
    elems = [(k, e) for e in range(m) for k in range(n)]

    def mul(x, y):
        k, e = x
        l, f = y
        k2 = (k + pow(r, e, n) * l) % n
        e2 = e + f
        if e2 >= m:
            e2 -= m
            k2 = (k2 + s) % n
        return (k2, e2)

    return elems, mul


def semidirect_c4c2_by_c2(action):
    """(C4 x C2) ⋊ C2 where the C2 generator sends (i, j) to action(i, j)."""
    base = [(i, j) for j in range(2) for i in range(4)]
    elems = [(i, j, t) for t in range(2) for (i, j) in base]

    def act(t, x):
        return action(*x) if t else x

    def mul(x, y):
        i, j, t = x
        u, v = act(t, (y[0], y[1]))
        return ((i + u) % 4, (j + v) % 2, (t + y[2]) % 2)

    return elems, mul


def table(group):
    elems, mul = group
    ident = next(e for e in elems if all(mul(e, x) == x for x in elems))
    elems = [ident] + [e for e in elems if e != ident]
    pos = {e: i for i, e in enumerate(elems)}
    return [[pos[mul(x, y)] for y in elems] for x in elems]


def invariants(t):
    n = len(t)

    def order(x):
        k, y = 1, x
        while y != 0:
            y, k = t[y][x], k + 1
        return k

    inv = [row.index(0) for row in t]
    centre = [x for x in range(n) if all(t[x][y] == t[y][x] for y in range(n))]
    comm = {t[t[inv[x]][inv[y]]][t[x][y]] for x in range(n) for y in range(n)}
    derived = {0}
    frontier = list(comm)
    while frontier:
        new = []
        for a in frontier:
            for b in list(derived):
                c = t[a][b]
                if c not in derived:
                    derived.add(c)
                    new.append(c)
        frontier = new
    squares = {t[x][x] for x in range(n)}
    hist = sorted(order(x) for x in range(n))
    zhist = sorted(order(x) for x in centre)
    return (tuple(hist), tuple(zhist), len(derived), len(squares))


def write(name, t):
    with open(name, "w") as f:
        f.write(f"{len(t)}\n")
        for row in t:
            f.write(" ".join(map(str, row)) + "\n")


def inv_d8():
    return metacyclic(4, 2, 3)


def q8():
    return metacyclic(4, 2, 3, 2)


ORDER_16 = {
    "c16": cyclic(16),
    "c4xc4": direct(cyclic(4), cyclic(4)),
    "c4c2_c2": semidirect_c4c2_by_c2(lambda i, j: (i, (j + i) % 2)),
    "c4_c4": metacyclic(4, 4, 3),
    "c8xc2": direct(cyclic(8), cyclic(2)),
    "m16": metacyclic(8, 2, 5),
    "d16": metacyclic(8, 2, 7),
    "sd16": metacyclic(8, 2, 3),
    "q16": metacyclic(8, 2, 7, 4),
    "c4xc2xc2": direct(cyclic(4), cyclic(2), cyclic(2)),
    "c2xd8": direct(cyclic(2), inv_d8()),
    "c2xq8": direct(cyclic(2), q8()),
    "pauli": semidirect_c4c2_by_c2(lambda i, j: ((i + 2 * j) % 4, j)),
    "c2x4": direct(cyclic(2), cyclic(2), cyclic(2), cyclic(2)),
}

ORDER_32 = {
    "c32": cyclic(32),
    "c2x5": direct(*[cyclic(2)] * 5),
    "d32": metacyclic(16, 2, 15),
    "q32": metacyclic(16, 2, 15, 8),
    "c4xq8": direct(cyclic(4), q8()),
    "c2xd16": direct(cyclic(2), metacyclic(8, 2, 7)),
    "c8_c4": metacyclic(8, 4, 5),
    "c4xd8": direct(cyclic(4), inv_d8()),
}


def main():
    for order, groups in ((16, ORDER_16), (32, ORDER_32)):
        seen = {}
        for name, g in groups.items():
            t = table(g)
            assert len(t) == order
            key = invariants(t)
            assert key not in seen, (name, seen.get(key))
            seen[key] = name
            write(f"order{order}_{name}.tbl", t)


if __name__ == "__main__":
    main()
