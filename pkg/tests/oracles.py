"""Slow, independent reimplementations used only as test oracles."""

from fractions import Fraction


def log_series(x: int, p: int, m: int) -> int:
    """Iwasawa log of a unit integer via the exact rational series, with generous truncation."""
    work = p ** (m + 4)
    u = Fraction(pow(x, p - 1, work) - 1)
    total = Fraction(0)
    for k in range(1, 4 * m + 12):
        total += (-1) ** (k + 1) * u**k / k
    total /= p - 1
    mod = p**m
    return total.numerator * pow(total.denominator, -1, mod) % mod


def teichmuller(r: int, p: int, m: int) -> int:
    mod = p**m
    x = r % mod
    for _ in range(m + 1):
        x = pow(x, p, mod)
    return x


def angle_table(p: int, m: int) -> list[int]:
    mod = p**m
    return [(x * pow(teichmuller(x, p, m), -1, mod)) % mod if x % p else 1 for x in range(mod)]


def morita(n: int, p: int, m: int) -> int:
    """(-1)^n prod_{1 <= l < n, p !| l} l mod p^m, straight from the definition."""
    mod = p**m
    acc = 1
    for l in range(1, n):
        if l % p:
            acc = acc * l % mod
    return (-acc if n % 2 else acc) % mod


def residue(fr, mod: int) -> int:
    fr = Fraction(fr)
    return fr.numerator * pow(fr.denominator, -1, mod) % mod


def bigamma_counting(p: int, m: int, y1, y2, form=(1, 4, 1)) -> int:
    """Gamma_{p,V} by grouping the box into residue classes mod p^m.

    <Nm(l)> mod p^m depends on l mod p^m only, and its order divides p^(m-1),
    so the box product is prod_{a, b} T[a][b]^(c1(a) c2(b)) with counts reduced mod p^(m-1).
    """
    mod = p**m
    big = p ** (2 * m - 1)
    n1 = residue(y1, big) or big
    n2 = residue(y2, big) or big
    A, B, C = form
    table = angle_table(p, m)

    def counts(n):
        full, rem = divmod(n - 1, mod)
        c = [full] * mod
        for l in range(1, rem + 1):
            c[l % mod] += 1
        return c

    c1, c2 = counts(n1), counts(n2)
    order = p ** (m - 1)
    out = 1
    for a in range(mod):
        if not c1[a]:
            continue
        for b in range(mod):
            e = c1[a] * c2[b] % order
            if e:
                out = out * pow(table[(A * a * a + B * a * b + C * b * b) % mod], e, mod) % mod
    return out


def h_brute(N: int, residues, a: int) -> Fraction:
    """h_U(a) by the defining sum, written independently of the package."""
    r = len(residues)
    if r == 0:
        return Fraction(N - 1 if a % N == 0 else -1)
    total = 0

    def rec(i, acc_sum, acc_prod):
        nonlocal total
        if i == r:
            if (acc_sum + a) % N == 0:
                total += acc_prod
            return
        for d in range(N):
            rec(i + 1, acc_sum + d * residues[i], acc_prod * d)

    rec(0, 0, 1)
    return Fraction(total, N ** (r - 1)) - Fraction(N - 1, 2) ** r


def telescoping_holds(h, only2, only1, empty, u1: int, u2: int, N: int, L: int) -> bool:
    """h_U(x + l.u) = h_U(x) + the three partial sums over nonempty S, for all x and 0 <= l_i < L.

    The h arguments are callables on Z/N; the S-sums are accumulated as running sums.
    """
    from fractions import Fraction

    for x in range(N):
        s1, s2 = [Fraction(0)], [Fraction(0)]
        for d in range(L):
            s1.append(s1[-1] + only2(x + d * u1))
            s2.append(s2[-1] + only1(x + d * u2))
        s12 = [[Fraction(0)] * (L + 1) for _ in range(L + 1)]
        for i in range(L):
            for j in range(L):
                s12[i + 1][j + 1] = s12[i][j + 1] + s12[i + 1][j] - s12[i][j] + empty(x + i * u1 + j * u2)
        for l1 in range(L):
            for l2 in range(L):
                if h(x + l1 * u1 + l2 * u2) != h(x) + s1[l1] + s2[l2] + s12[l1][l2]:
                    return False
        acc = only1(x)
        for l in range(L):
            if only1(x + l * u1) != acc:
                return False
            acc += empty(x + l * u1)
    return True
