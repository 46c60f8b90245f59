"""Recompute the reference bivariate Gamma tables and the Gamma_p ratios they produce."""

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from shintani_padic.cli import FULL_PRECISION
from shintani_padic.gamma import GammaCache, bigamma, default_cache_path
from shintani_padic.genus import cor12_example
from shintani_padic.lattice import default_config
from shintani_padic.reference import BIGAMMA_TABLES


@dataclass
class RunConfig:
    primes: tuple[int, ...] = (5, 7)
    quick: bool = False
    cache: str | None = None
    workers: int | None = None

    def precision_for(self, p: int) -> int:
        m = FULL_PRECISION[p]
        return m - 1 if self.quick else m


def run(cfg: RunConfig) -> bool:
    config = default_config()
    cache = GammaCache(cfg.cache or default_cache_path())
    ok = True
    for p in cfg.primes:
        m = cfg.precision_for(p)
        table = BIGAMMA_TABLES[(p, FULL_PRECISION[p])]
        print(f"p = {p}, mod {p}^{m}")
        for (u, v), expected in table.items():
            start = time.perf_counter()
            value = bigamma(p, m, config.cone, (Fraction(u, 6), Fraction(v, 6)), cache=cache, workers=cfg.workers)
            match = value.residue == expected % p**m
            ok &= match
            print(f"  Gamma(({u}+{v}e)/6) = {value.residue:4d}  reference {expected % p**m:4d}  "
                  f"{'ok' if match else 'MISMATCH'}  ({time.perf_counter() - start:.1f}s)")
        rep = cor12_example(p, m, config, cache, cfg.workers)
        ok &= rep.passed
        print(f"  {rep.to_text()}")
    return ok


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="one p-adic digit less")
    ap.add_argument("--cache")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7])
    args = ap.parse_args()
    ok = run(RunConfig(tuple(args.primes), quick=args.quick, cache=args.cache, workers=args.workers))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
