"""Shintani measures on O_p for a single cone and their derivative at s = 0.

The measure mu_{V,x,N} gives the coset x + l.v + q^n O_p the mass h_V(x + l.v)
(the sign (-1)^k is +1 for k = 2).  The h_U are N-periodic weight functions
computed here by brute force; everything combinatorial stays in exact
rationals until the final reduction mod p^m.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numba
import numpy as np

from .gamma import GammaCache, MissingGammaError, bigamma, default_workers, partition
from .kronecker import kronecker_chi
from .lattice import CNIdeal, ConeData, LatticeElement, LatticeError, cn_residue
from .padic import PadicInt, log_iwasawa, to_padic
from .report import VerifyReport, checked

K = 2  # rank of the cone


class ResourceError(RuntimeError):
    pass


# largest Riemann grid (points) l_derivative_direct will attempt
MAX_GRID = 2 * 10**10


@lru_cache(maxsize=None)
def _h_table(N: int, residues: tuple[int, ...]) -> tuple[Fraction, ...]:
    r = len(residues)
    if r == 0:
        return tuple(Fraction(N - 1 if a == 0 else -1) for a in range(N))
    for u in residues:
        if math.gcd(u, N) != 1:
            raise LatticeError(f"{u} is not a unit mod {N}")
    sums = [0] * N
    for d in itertools.product(range(N), repeat=r):
        s = sum(di * ui for di, ui in zip(d, residues)) % N
        sums[-s % N] += math.prod(d)
    shift = Fraction(N - 1, 2) ** r
    return tuple(Fraction(h, N ** (r - 1)) - shift for h in sums)


@dataclass(frozen=True)
class HFunction:
    """h_U on Z/N, U given by the residues phi(u)."""

    N: int
    residues: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "residues", tuple(u % self.N for u in self.residues))
        _h_table(self.N, self.residues)

    @property
    def table(self) -> tuple[Fraction, ...]:
        return _h_table(self.N, self.residues)

    def __call__(self, a: int) -> Fraction:
        return self.table[a % self.N]

    def without(self, i: int) -> "HFunction":
        return HFunction(self.N, self.residues[:i] + self.residues[i + 1:])


def _residues(ideal: CNIdeal, U) -> tuple[int, ...]:
    return tuple(cn_residue(ideal, u) if isinstance(u, LatticeElement) else int(u) % ideal.N for u in U)


def h_value(ideal: CNIdeal, U, a) -> Fraction:
    """h_U(a); U holds lattice elements or their residues, a is a residue or a lattice element."""
    if isinstance(a, LatticeElement):
        a = cn_residue(ideal, a)
    return HFunction(ideal.N, _residues(ideal, U))(a)


def minimal_q(p: int, N: int) -> int:
    q = p
    while q % N != 1:
        q *= p
    return q


@dataclass(frozen=True)
class ShintaniLContext:
    cone: ConeData
    ideal: CNIdeal
    x: LatticeElement
    p: int
    q: int

    @classmethod
    def create(cls, cone: ConeData, ideal: CNIdeal, x: LatticeElement, p: int) -> "ShintaniLContext":
        if kronecker_chi(cone.discriminant, p) != -1:
            raise LatticeError(f"p={p} is not inert in {cone.label}")
        if ideal.N % p == 0:
            raise LatticeError("the Cassou-Nogues ideal must be prime to p")
        if math.gcd(x.denominator(), p * ideal.N) != 1:
            raise LatticeError(f"{x} is not N p-integral")
        return cls(cone, ideal, x, p, minimal_q(p, ideal.N))

    @property
    def h_v(self) -> HFunction:
        return HFunction(self.ideal.N, self.ideal.phi_images)

    @property
    def phi_x(self) -> int:
        return cn_residue(self.ideal, self.x)

    def residue_at(self, l1: int, l2: int) -> int:
        u1, u2 = self.ideal.phi_images
        return (self.phi_x + l1 * u1 + l2 * u2) % self.ideal.N


def measure_period(ctx: ShintaniLContext, l) -> Fraction:
    """Mass of x + l.v + q^n O_p (independent of n)."""
    return (-1) ** K * ctx.h_v(ctx.residue_at(*l))


def _unit_counts(ctx: ShintaniLContext, Q: int) -> np.ndarray:
    """For each residue a mod N, the number of unit cosets x + l.v (0 <= l < Q) with phi = a.

    Unit-ness depends on l mod p and phi on l mod N, so it is enough to count
    each coordinate's residues mod pN.
    """
    p, N = ctx.p, ctx.ideal.N
    A, B, C = ctx.cone.norm_form
    x1, x2 = (to_padic(c, p, 1).residue for c in ctx.x.coords)
    u1, u2 = ctx.ideal.phi_images
    M = p * N
    c = np.arange(M, dtype=np.int64)
    per_residue = np.array([(Q - r + M - 1) // M for r in range(M)], dtype=object)
    r1 = (x1 + c[:, None]) % p
    r2 = (x2 + c[None, :]) % p
    unit = (A * r1 * r1 + B * r1 * r2 + C * r2 * r2) % p != 0
    phi = (ctx.phi_x + u1 * c[:, None] + u2 * c[None, :]) % N
    weight = np.outer(per_residue, per_residue)
    counts = np.zeros(N, dtype=object)
    for a, w in zip(phi[unit], weight[unit]):
        counts[a] += w
    return counts


def l_zero(ctx: ShintaniLContext, level: int = 1) -> Fraction:
    """L_{p,V,x,N}(0), exact: the level-q Riemann sum is already the integral."""
    counts = _unit_counts(ctx, ctx.q**level)
    h = ctx.h_v
    return (-1) ** K * sum((int(c) * h(a) for a, c in enumerate(counts)), Fraction(0))


@lru_cache(maxsize=32)
def log_table(p: int, m: int) -> np.ndarray:
    """log_p(r) mod p^m for each residue r mod p^m; 0 on non-units."""
    mod = p**m
    out = np.zeros(mod, dtype=np.int64)
    for r in range(mod):
        if r % p:
            out[r] = log_iwasawa(PadicInt(p, m, r)).residue
    out.setflags(write=False)
    return out


@numba.njit(nogil=True, cache=True)
def _log_sums(lo, hi, Q, x1, x2, A, B, C, mod, logtab, N):
    out = np.zeros((N, N), dtype=np.int64)
    row = np.zeros(N, dtype=np.int64)
    two_c = (2 * C) % mod
    for l1 in range(lo, hi):
        c1 = (x1 + l1) % mod
        nm = (A * c1 % mod * c1 + B * c1 % mod * x2 + C * x2 % mod * x2) % mod
        step = (B * c1 + C * (2 * x2 + 1)) % mod
        row[:] = 0
        j2 = 0
        for _ in range(Q):
            row[j2] += logtab[nm]
            j2 += 1
            if j2 == N:
                j2 = 0
            nm += step
            if nm >= mod:
                nm -= mod
            step += two_c
            if step >= mod:
                step -= mod
        j1 = l1 % N
        for j in range(N):
            out[j1, j] = (out[j1, j] + row[j]) % mod
    return out


def riemann_log_sums(ctx: ShintaniLContext, level: int, m: int, workers: int | None = None) -> np.ndarray:
    """S[i, j] = sum of log_p Nm(x + l.v) over unit l in [0, q^level)^2 with l = (i, j) mod N."""
    p, N = ctx.p, ctx.ideal.N
    Q = ctx.q**level
    if Q * Q > MAX_GRID:
        raise ResourceError(f"level {level} needs {Q * Q} grid points (limit {MAX_GRID})")
    mod = p**m
    A, B, C = (int(c) % mod for c in ctx.cone.norm_form)
    x1, x2 = (to_padic(c, p, m).residue for c in ctx.x.coords)
    table = log_table(p, m)
    workers = workers or default_workers()
    blocks = partition(0, Q, workers)
    if workers > 1 and len(blocks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _log_sums(b[0], b[1], Q, x1, x2, A, B, C, mod, table, N), blocks))
    else:
        parts = [_log_sums(lo, hi, Q, x1, x2, A, B, C, mod, table, N) for lo, hi in blocks]
    total = np.zeros((N, N), dtype=np.int64)
    for part in parts:
        total = (total + part) % mod
    return total


def weight_table(ctx: ShintaniLContext, weights: str = "period") -> list[list[Fraction]]:
    """Weights of the coset x + l.v as a function of l mod N.

    ``period`` uses h_V(x + l.v); ``telescoped`` uses sum_{0 <= d < l} h_empty(x + d.v),
    which depends on l only mod N because h_empty sums to zero over a period.
    """
    N = ctx.ideal.N
    if weights == "period":
        h = ctx.h_v
        return [[h(ctx.residue_at(i, j)) for j in range(N)] for i in range(N)]
    if weights == "telescoped":
        h0 = HFunction(N, ())
        w = [[Fraction(0)] * N for _ in range(N)]
        for i in range(N):
            for j in range(N):
                w[i][j] = sum((h0(ctx.residue_at(d1, d2)) for d1 in range(i) for d2 in range(j)), Fraction(0))
        return w
    raise ValueError(f"unknown weights {weights!r}")


def l_derivative_direct(ctx: ShintaniLContext, level: int, m: int, weights: str = "period",
                        workers: int | None = None) -> PadicInt:
    """Level-``level`` Riemann sum for L'_{p,V,x,N}(0); trust it to about p^(level-1)."""
    p = ctx.p
    S = riemann_log_sums(ctx, level, m, workers)
    W = weight_table(ctx, weights)
    N = ctx.ideal.N
    total = PadicInt(p, m, 0)
    for i in range(N):
        for j in range(N):
            if W[i][j] and S[i, j]:
                total = total + to_padic(W[i][j], p, m) * int(S[i, j])
    return (-1) ** (K - 1) * total


def shifted_arguments(x: LatticeElement, N: int):
    """(d, (x + d.v)/N) for d in [0, N)^2."""
    for d1 in range(N):
        for d2 in range(N):
            yield (d1, d2), x.shift(d1, d2).scale(Fraction(1, N))


def _gamma_log_sum(ctx: ShintaniLContext, m: int, cache, workers, cache_only) -> PadicInt:
    p, N = ctx.p, ctx.ideal.N
    h0 = HFunction(N, ())
    total = PadicInt(p, m, 0)
    missing = []
    for d, y in shifted_arguments(ctx.x, N):
        try:
            g = bigamma(p, m, ctx.cone, y, cache=cache, workers=workers, cache_only=cache_only)
        except MissingGammaError as exc:
            missing.extend(exc.keys)
            continue
        total = total + log_iwasawa(g) * int(h0(ctx.residue_at(*d)))
    if missing:
        raise MissingGammaError(missing)
    return total


def l_derivative_formula(ctx: ShintaniLContext, m: int, cache: GammaCache | None = None,
                         workers: int | None = None, cache_only: bool = False) -> PadicInt:
    """L'_{p,V,x,N}(0) from bivariate Gamma values at (x + d.v)/N."""
    p, N = ctx.p, ctx.ideal.N
    s = _gamma_log_sum(ctx, m, cache, workers, cache_only)
    zero = l_zero(ctx)
    out = (-1) ** (K - 1) * s
    if zero:
        out = out - K * log_iwasawa(PadicInt(p, m, N)) * to_padic(zero, p, m)
    return out


def class_coefficients(cone: ConeData, chi_values) -> dict[LatticeElement, int]:
    """Aggregate chi(a_i) over classes for each parallelotope point."""
    coeff: dict[LatticeElement, int] = defaultdict(int)
    for cl, chi in zip(cone.classes, chi_values):
        for x in cl.points:
            coeff[x] += chi
    return dict(coeff)


def theorem_A_sum(cone: ConeData, ideal: CNIdeal, chi_values, p: int, m: int, cache: GammaCache | None = None,
                  workers: int | None = None, skip_cancelled: bool = True, cache_only: bool = False) -> PadicInt:
    """(-1)^k sum_i chi(a_i) sum_x sum_d h_empty(x + d.v) log_p Gamma_{p,V}((x + d.v)/N).

    Points shared by several classes are merged first; with ``skip_cancelled``
    a point whose character weights sum to zero is not evaluated at all.
    """
    if len(chi_values) != len(cone.classes):
        raise ValueError("one character value per class representative is required")
    total = PadicInt(p, m, 0)
    for x, c in class_coefficients(cone, chi_values).items():
        if c == 0 and skip_cancelled:
            continue
        ctx = ShintaniLContext.create(cone, ideal, x, p)
        total = total + c * _gamma_log_sum(ctx, m, cache, workers, cache_only)
    return (-1) ** K * total


def theorem_A_direct(cone: ConeData, ideal: CNIdeal, chi_values, p: int, m: int, level: int,
                     workers: int | None = None) -> PadicInt:
    """-sum_i chi(a_i) sum_x L'_{p,V,x,N}(0) from Riemann sums (the class sums of L(0) vanish)."""
    total = PadicInt(p, m, 0)
    for x, c in class_coefficients(cone, chi_values).items():
        if c:
            ctx = ShintaniLContext.create(cone, ideal, x, p)
            total = total + c * l_derivative_direct(ctx, level, m, workers=workers)
    return -total


def theorem_A_verify(cone: ConeData, ideal: CNIdeal, chi_values, p: int, m: int, level: int,
                     cache: GammaCache | None = None, workers: int | None = None,
                     cache_only: bool = False) -> VerifyReport:
    gamma_side = theorem_A_sum(cone, ideal, chi_values, p, m, cache, workers, cache_only=cache_only)
    riemann_side = theorem_A_direct(cone, ideal, chi_values, p, m, level, workers)
    return checked("thmA", {"p": p, "N": ideal.N, "m": m, "level": level}, gamma_side, riemann_side,
                   "derived", gamma_side == riemann_side)
