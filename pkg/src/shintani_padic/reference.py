"""Published numerical values the verification suite is anchored to."""

from fractions import Fraction

# Gamma_{p,V}((u + v e)/6) for the Q(sqrt 3) cone, keyed by (p, precision) then (u, v)
BIGAMMA_TABLES = {
    (5, 4): {(1, 3): 411, (1, 5): 81, (3, 5): 86, (1, 1): 146, (3, 3): 441, (5, 5): 496},
    (7, 3): {(1, 3): 260, (1, 5): 211, (3, 5): 218, (1, 1): 190, (3, 3): 288, (5, 5): 204},
}

# <Gamma_p(z)> mod p^precision, keyed by (p, z, precision)
GAMMA_ANGLES = {
    (5, Fraction(1, 4), 4): 21,
    (7, Fraction(1, 3), 3): 15,
}


def gamma_angle(p: int, z, m: int):
    """Published residue of <Gamma_p(z)> mod p^m, if one covers this precision."""
    z = Fraction(z)
    for (rp, rz, rm), value in GAMMA_ANGLES.items():
        if rp == p and rz == z and m <= rm:
            return value % p**m
    return None


def bigamma_value(p: int, y1, y2, m: int):
    for (rp, rm), table in BIGAMMA_TABLES.items():
        if rp != p or m > rm:
            continue
        u, v = Fraction(y1) * 6, Fraction(y2) * 6
        if u.denominator == 1 and v.denominator == 1 and (int(u), int(v)) in table:
            return table[int(u), int(v)] % p**m
    return None
