"""Independent high-precision oracles for the constants frozen in the C++ tests.

Run with `python3 frozen_values.py`; every printed value is pasted into the
corresponding test with 17 significant digits.
"""
import mpmath as mp

mp.mp.dps = 50


def lp(v, p):
    return mp.fsum(abs(mp.mpf(t)) ** p for t in v) ** (1 / mp.mpf(p))


def c_r(p):
    p = mp.mpf(p)
    if p == 2:
        return mp.mpf(2)
    if p > 2:
        return 4 / 2 ** p
    return 2 * (p - 1)


def r_of(p):
    return mp.mpf(p) if p > 2 else mp.mpf(2)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


# space
show("lp_norm((3,-4,12), 3)", lp([3, -4, 12], 3))
show("lp_norm((0.5,-1.5,2,0.25), 1.5)", lp([0.5, -1.5, 2, 0.25], 1.5))
for p, x, y, w in [(3, [1, 0], [0, 1], 0.5), (4, [1, 2, -1], [0.5, -1, 3], 0.25),
                   (1.5, [1, 0], [0, 1], 0.5), (1.5, [2, -1, 0.5], [0, 3, 1], 0.3)]:
    p = mp.mpf(p)
    r = r_of(p)
    w = mp.mpf(w)
    z = [(1 - w) * a + w * b for a, b in zip(x, y)]
    d = [a - b for a, b in zip(x, y)]
    res = (1 - w) * lp(x, p) ** r + w * lp(y, p) ** r - c_r(p) / 2 * w * (1 - w) * lp(d, p) ** r - lp(z, p) ** r
    show(f"convexity_residual(p={p}, x={x}, y={y}, w={w})", res)

# projections: power mean center = argmin_a sum |v_i - a|^p
for vals, p in [([1, 0, 0], 3), ([0, 1, 4], 1.5), ([-2, 0.5, 3, 7], 4)]:
    p = mp.mpf(p)
    f = lambda a: mp.fsum(mp.sign(a - v) * abs(a - v) ** (p - 1) for v in vals)
    show(f"power_mean_center({vals}, p={p})", mp.findroot(f, (min(vals), max(vals)), solver="anderson"))


def plane_projection(x, a, b, p):
    """argmin ||y - x||_p on {a.y = b} by Newton on an explicit plane chart."""
    x = [mp.mpf(t) for t in x]
    a = [mp.mpf(t) for t in a]
    n = len(x)
    k = max(range(n), key=lambda i: abs(a[i]))
    free = [i for i in range(n) if i != k]

    def point(s):
        y = [mp.mpf(0)] * n
        for idx, i in enumerate(free):
            y[i] = s[idx]
        y[k] = (b - mp.fsum(a[i] * y[i] for i in free)) / a[k]
        return y

    def grad(*s):
        y = point(s)
        g = [mp.sign(y[i] - x[i]) * abs(y[i] - x[i]) ** (p - 1) for i in range(n)]
        return [g[i] - g[k] * a[i] / a[k] for i in free]

    s = mp.findroot(grad, [x[i] for i in free], tol=mp.mpf(10) ** -40)
    return point(list(s) if n > 2 else [s])


for x, a, b, p in [([2, 1, 0], [1, 2, -1], 1, 3), ([1, -2, 3], [0.5, 1, 2], -1, 1.5)]:
    y = plane_projection(x, a, b, mp.mpf(p))
    show(f"halfspace projection x={x} a={a} b={b} p={p}", mp.matrix(y).T)

# operators
show("interpolation bound [[1,2],[3,4]] p=3", mp.mpf(6) ** (mp.mpf(1) / 3) * mp.mpf(7) ** (mp.mpf(2) / 3))
for n, a, r in [(2, 0.5, 2), (2, 0.5, 3), (5, 0.5, 2), (3, 0.25, 4)]:
    a = mp.mpf(a)
    show(f"composition firm n={n} a={a} r={r}", 1 / (1 + (1 - a) / (mp.mpf(n) ** (r - 1) * a)))
for p in [1.5, 2, 3, 4]:
    c = c_r(p)
    show(f"truncation alpha p={p}", c / (c + 2))

# dynamics: R_{t/n}^n x for F = -Id is (1 + 2t/n)^-n x
for n in [1, 8, 16, 1024]:
    show(f"a_n(1) n={n}", (1 + mp.mpf(2) / n) ** (-n))
show("exp(-2)", mp.e ** -2)


def swap_proj(x, i, j):
    y = list(x)
    y[i] = y[j] = (x[i] + x[j]) / 2
    return y


x = [mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(0)]
for k in range(3):
    x = swap_proj(swap_proj(x, 0, 1), 1, 2)
    show(f"alternating iterate {k + 1}", mp.matrix(x).T)
x = [mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(0)]
for k in range(2):
    u, v = swap_proj(x, 0, 1), swap_proj(x, 1, 2)
    x = [(s + t) / 2 for s, t in zip(u, v)]
    show(f"averaged iterate {k + 1}", mp.matrix(x).T)
for _ in range(400):
    x = swap_proj(swap_proj(x, 0, 1), 1, 2)
show("alternating limit", mp.matrix(x).T)
