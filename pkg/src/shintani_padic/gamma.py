"""Morita's Gamma_p and the bivariate Gamma_{p,V}.

Gamma_{p,V}(y1 v1 + y2 v2) is the limit over n_i -> y_i of

    prod_{1 <= l1 < n1, 1 <= l2 < n2, p does not divide Nm(l.v)} <Nm(l.v)>.

Values modulo p^m only depend on n_i modulo p^(2m-1), so we take the least
positive representatives and run the double product directly.  That is
Theta(p^(4m-2)) multiplications, which is why results go to a persistent
cache.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numba
import numpy as np

from .kronecker import kronecker_chi
from .lattice import ConeData, LatticeElement
from .padic import PadicDomainError, PadicInt, teichmuller_table, to_padic

log = logging.getLogger(__name__)

ENGINE_VERSION = "1"
CACHE_FORMAT = {"format": "shintani-gamma-cache", "version": 1}

# products of two residues must stay inside int64
MAX_MODULUS = 3_000_000_000


class UnsupportedConfiguration(ValueError):
    pass


class CacheVersionError(RuntimeError):
    pass


class MissingGammaError(LookupError):
    def __init__(self, keys):
        self.keys = list(keys)
        super().__init__("missing Gamma values: " + ", ".join(str(k) for k in self.keys))


def default_workers() -> int:
    env = os.environ.get("SHINTANI_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@lru_cache(maxsize=16)
def _morita_prefix(p: int, m: int) -> tuple[int, ...]:
    mod = p**m
    out = [1, 1]  # index n holds prod_{1 <= l < n, p !| l} l
    acc = 1
    for l in range(1, mod):
        if l % p:
            acc = acc * l % mod
        out.append(acc)
    return tuple(out)


def morita_gamma(p: int, m: int, t) -> PadicInt:
    """Morita's p-adic Gamma function at a p-integral rational, mod p^m."""
    mod = p**m
    n = to_padic(t, p, m).residue or mod
    value = _morita_prefix(p, m)[n]
    if n % 2:
        value = -value
    return PadicInt(p, m, value)


def representative(y, p: int, e: int) -> int:
    """Least positive integer congruent to y mod p^e."""
    mod = p**e
    return to_padic(y, p, e).residue or mod


@lru_cache(maxsize=32)
def angle_table(p: int, m: int) -> np.ndarray:
    """<r> mod p^m for every residue r; non-units map to 1 so they drop out of products."""
    mod = p**m
    omega_inv = [0] + [pow(w, -1, mod) for w in teichmuller_table(p, m)[1:]]
    r = np.arange(mod, dtype=np.int64)
    inv = np.array(omega_inv, dtype=np.int64)[r % p]
    table = (r * inv) % mod
    table[r % p == 0] = 1
    table.setflags(write=False)
    return table


@numba.njit(nogil=True, cache=True)
def _row_block_product(lo, hi, n2, A, B, C, mod, table):
    # Nm(l1 + l2 e) = A l1^2 + B l1 l2 + C l2^2, walked along l2 with two additions per step
    acc = 1
    two_c = (2 * C) % mod
    for l1 in range(lo, hi):
        r1 = l1 % mod
        nm = (A * r1 % mod * r1 + B * r1 + C) % mod
        step = (B * r1 + 3 * C) % mod
        for _ in range(1, n2):
            acc = acc * table[nm] % mod
            nm += step
            if nm >= mod:
                nm -= mod
            step += two_c
            if step >= mod:
                step -= mod
    return acc


def partition(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo)) if hi > lo else 1
    size, extra = divmod(hi - lo, parts)
    out, start = [], lo
    for i in range(parts):
        end = start + size + (1 if i < extra else 0)
        out.append((start, end))
        start = end
    return out


def box_product(p: int, m: int, n1: int, n2: int, form, workers: int = 1, chunks: int | None = None) -> int:
    """prod over 1 <= l1 < n1, 1 <= l2 < n2 of <form(l1, l2)> (units only), mod p^m."""
    mod = p**m
    if mod > MAX_MODULUS:
        raise UnsupportedConfiguration(f"p^m = {mod} exceeds the int64 kernel limit")
    A, B, C = (int(c) % mod for c in form)
    table = angle_table(p, m)
    blocks = partition(1, n1, chunks or workers)
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _row_block_product(b[0], b[1], n2, A, B, C, mod, table), blocks))
    else:
        parts = [_row_block_product(lo, hi, n2, A, B, C, mod, table) for lo, hi in blocks]
    acc = 1
    for part in parts:
        acc = acc * int(part) % mod
    return acc


def _is_inert(cone: ConeData, p: int) -> bool:
    return kronecker_chi(cone.discriminant, p) == -1


def _coords(y) -> tuple[Fraction, Fraction]:
    if isinstance(y, LatticeElement):
        return y.coords
    a, b = y
    return Fraction(a), Fraction(b)


def bigamma(p: int, m: int, cone: ConeData, y, *, workers: int | None = None, cache: "GammaCache | None" = None,
            cache_only: bool = False) -> PadicInt:
    """Gamma_{p,V}(y1 v1 + y2 v2) mod p^m."""
    y1, y2 = _coords(y)
    if not _is_inert(cone, p):
        raise UnsupportedConfiguration(f"p={p} is not inert in {cone.label}")
    if cone.basis_index() % p == 0:
        raise UnsupportedConfiguration(f"cone basis does not span O_{p}")
    for c in (y1, y2):
        if c.denominator % p == 0:
            raise PadicDomainError(f"argument coordinate {c} is not {p}-integral")
    if cache is not None:
        hit = cache.get(p, m, cone.key, (y1, y2))
        if hit is not None:
            return hit
        if cache_only:
            raise MissingGammaError([cache.describe(p, m, cone.key, (y1, y2))])
    e = 2 * m - 1
    n1, n2 = representative(y1, p, e), representative(y2, p, e)
    value = box_product(p, m, n1, n2, cone.norm_form, workers or default_workers())
    result = PadicInt(p, m, value)
    if cache is not None:
        cache.put(p, m, cone.key, (y1, y2), result)
    return result


@dataclass
class _Entry:
    m: int
    value: int


class GammaCache:
    """JSON Lines store of bivariate Gamma values.

    A value cached at precision m' serves any request at m <= m'.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple, _Entry] = {}
        if self.path is not None and self.path.exists():
            self._load()

    @staticmethod
    def _key(p, cone_key, y):
        y1, y2 = (Fraction(c) for c in y)
        return (p, cone_key, y1.numerator, y1.denominator, y2.numerator, y2.denominator)

    def describe(self, p, m, cone_key, y) -> dict:
        k = self._key(p, cone_key, y)
        return {"p": p, "m": m, "cone": cone_key, "num": list(k[2:])}

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            return
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError:
            header = None
        if header != CACHE_FORMAT:
            raise CacheVersionError(f"{self.path}: unexpected cache header {lines[0][:80]!r}")
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                if rec["version"] != ENGINE_VERSION:
                    continue
                a, b, c, d = (int(v) for v in rec["num"])
                key = (int(rec["p"]), str(rec["cone"]), a, b, c, d)
                entry = _Entry(int(rec["m"]), int(rec["value"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                log.warning("%s:%d: skipping corrupt cache line", self.path, lineno)
                continue
            self._remember(key, entry)

    def _remember(self, key, entry):
        old = self._data.get(key)
        if old is None or entry.m > old.m:
            self._data[key] = entry

    def get(self, p, m, cone_key, y) -> PadicInt | None:
        entry = self._data.get(self._key(p, cone_key, y))
        if entry is None or entry.m < m:
            return None
        return PadicInt(p, m, entry.value % p**m)

    def put(self, p, m, cone_key, y, value: PadicInt):
        key = self._key(p, cone_key, y)
        entry = _Entry(m, value.residue)
        self._remember(key, entry)
        if self.path is None:
            return
        rec = {"p": p, "m": m, "cone": cone_key, "num": list(key[2:]), "value": value.residue,
               "version": ENGINE_VERSION}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        payload = (json.dumps(CACHE_FORMAT) + "\n" if fresh else "") + json.dumps(rec, sort_keys=True) + "\n"
        fd = os.open(self.path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)
        try:
            os.write(fd, payload.encode())
        finally:
            os.close(fd)

    def __len__(self):
        return len(self._data)


def default_cache_path() -> Path:
    env = os.environ.get("SHINTANI_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "shintani_padic" / "gamma.jsonl"

