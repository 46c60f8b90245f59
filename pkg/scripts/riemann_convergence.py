"""Watch the level-n Riemann sums for L'_{p,V,x,N}(0) settle onto the Gamma-value formula."""

import argparse
from dataclasses import dataclass, field

from shintani_padic.gamma import GammaCache, default_cache_path
from shintani_padic.lattice import default_config, parse_lattice
from shintani_padic.padic import PadicInt
from shintani_padic.shintani import ResourceError, ShintaniLContext, l_derivative_direct, l_derivative_formula


@dataclass
class RunConfig:
    p: int = 7
    N: int = 3
    points: list[str] = field(default_factory=lambda: ["1", "1/2+1/2*e"])
    precision: int = 3
    levels: tuple[int, ...] = (1, 2, 3, 4)
    cache: str | None = None


def agreement(a: PadicInt, b: PadicInt) -> int:
    """Number of leading p-adic digits on which a and b agree."""
    k = 0
    while k < a.precision and a.congruent(b, k + 1):
        k += 1
    return k


def run(cfg: RunConfig) -> None:
    config = default_config()
    cache = GammaCache(cfg.cache or default_cache_path())
    for text in cfg.points:
        ctx = ShintaniLContext.create(config.cone, config.ideal(cfg.N), parse_lattice(text), cfg.p)
        formula = l_derivative_formula(ctx, cfg.precision, cache)
        print(f"x = {ctx.x}: formula {formula.residue} mod {cfg.p}^{cfg.precision} (q = {ctx.q})")
        for n in cfg.levels:
            try:
                direct = l_derivative_direct(ctx, n, cfg.precision)
            except ResourceError as exc:
                print(f"  level {n}: skipped ({exc})")
                continue
            print(f"  level {n}: {direct.residue:6d}  agrees to {agreement(direct, formula)} digits")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--prec", type=int, default=3)
    ap.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--cache")
    args = ap.parse_args()
    run(RunConfig(args.p, args.N, precision=args.prec, levels=tuple(args.levels), cache=args.cache))


if __name__ == "__main__":
    main()
