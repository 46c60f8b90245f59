"""log of the regularized Gamma ratio for several Cassou-Nogues ideals N, side by side."""

import argparse
from dataclasses import dataclass

from shintani_padic.gamma import GammaCache, default_cache_path, morita_gamma
from shintani_padic.genus import GenusConfig, cor12_ratio, cor12_target, regularizer
from shintani_padic.lattice import default_config
from shintani_padic.padic import log_iwasawa


@dataclass
class RunConfig:
    p: int = 5
    Ns: tuple[int, ...] = (3, 11, 13)
    precision: int = 2
    cache: str | None = None


def run(cfg: RunConfig) -> bool:
    config = default_config()
    cache = GammaCache(cfg.cache or default_cache_path())
    genus = GenusConfig.from_config(config, cfg.p)
    base, coeff = cor12_target(cfg.p)
    target = coeff * log_iwasawa(morita_gamma(cfg.p, cfg.precision, base))
    print(f"p = {cfg.p}: {coeff} log Gamma_p({base}) = {target.residue} mod {cfg.p}^{cfg.precision}")
    ok = True
    for N in cfg.Ns:
        ideal = config.ideal(N)
        reg = regularizer(genus, ideal)
        value = log_iwasawa(cor12_ratio(cfg.p, ideal, cfg.precision, config.cone, cache)) / reg
        ok &= value == target
        print(f"  N = {N:3d}  1 - chi(N)N = {reg:4d}  log(ratio)/(1 - chi(N)N) = {value.residue}")
    return ok


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--N", type=int, nargs="+", default=[3, 11, 13])
    ap.add_argument("--prec", type=int, default=2)
    ap.add_argument("--cache")
    args = ap.parse_args()
    raise SystemExit(0 if run(RunConfig(args.p, tuple(args.N), args.prec, args.cache)) else 1)


if __name__ == "__main__":
    main()
