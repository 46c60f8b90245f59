"""Command-line entry point: ``shintani-padic <command> ...``."""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import reference
from .cyclo import (
    DirichletChar,
    comparison_trivial_char,
    cyclo_unit_identity,
    dh_admissible,
    dh_verify,
    fg_permutation,
    gamma_dist_verify,
    mu_period_verify,
)
from .gamma import CacheVersionError, GammaCache, MissingGammaError, bigamma, default_cache_path, morita_gamma
from .genus import cor12_example, cor12_verify, independence_verify, lemma44_verify, prop41_verify
from .lattice import LatticeError, load_config, parse_lattice
from .padic import PadicDomainError, PadicInt, angle
from .report import VerifyReport, checked, dump_json, dump_text, timed
from .shintani import ShintaniLContext, l_derivative_direct, l_derivative_formula, l_zero, theorem_A_verify

CHECKS = ("cor12", "prop41", "thmA", "dh", "dist", "comparison", "cyclo-units", "mu-period", "fg-perm", "lemma44")

# precision of the reference Gamma-ratio data per prime
FULL_PRECISION = {5: 4, 7: 3}

EXIT_FAIL = 1
EXIT_CONFIG = 3
EXIT_CACHE = 4
EXIT_MISSING = 5


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("json", "text"), default="text")
    common.add_argument("--cache", help="Gamma cache file (default: $SHINTANI_CACHE or ~/.cache/...)")
    common.add_argument("--no-cache", action="store_true", help="keep Gamma values in memory only")
    common.add_argument("--cache-only", action="store_true", help="fail instead of computing missing Gamma values")
    common.add_argument("--config", help="field/cone configuration JSON (default: bundled Q(sqrt 3))")
    common.add_argument("--threads", type=int, help="worker threads (default: $SHINTANI_THREADS or CPU count)")
    common.add_argument("--quick", action="store_true", help="one precision level less on Gamma-heavy checks")
    common.add_argument("--no-timing", action="store_true", help="omit wall times from JSON output")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="shintani-padic", description="p-adic Shintani/Gamma verification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", parents=[common], help="Morita Gamma_p and its 1-unit part")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--prec", type=int, required=True)
    g.add_argument("--arg", type=Fraction, required=True)

    b = sub.add_parser("bigamma", parents=[common], help="bivariate Gamma_{p,V} at a+b*e")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--prec", type=int, required=True)
    b.add_argument("--arg", required=True)

    lv = sub.add_parser("lvalue", parents=[common], help="exact L_{p,V,x,N}(0)")
    lv.add_argument("--p", type=int, required=True)
    lv.add_argument("--N", type=int, default=3)
    lv.add_argument("--x", required=True)
    lv.add_argument("--level", type=int, default=1)

    ld = sub.add_parser("lderiv", parents=[common], help="L'_{p,V,x,N}(0) from Gamma values (and Riemann sums)")
    ld.add_argument("--p", type=int, required=True)
    ld.add_argument("--N", type=int, default=3)
    ld.add_argument("--x", required=True)
    ld.add_argument("--prec", type=int, default=2)
    ld.add_argument("--level", type=int, help="also compute the level-n Riemann sum and compare")

    v = sub.add_parser("verify", parents=[common], help="run verification checks")
    v.add_argument("check", choices=CHECKS + ("all",))
    v.add_argument("--p", type=int)
    v.add_argument("--prec", type=int)
    v.add_argument("--N", type=int)
    v.add_argument("--M", type=int)
    v.add_argument("--nu", type=int, default=1)
    v.add_argument("--nuprime", type=int)
    v.add_argument("--h", type=Fraction)
    v.add_argument("--d", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--a", type=int)
    v.add_argument("--level", type=int)
    v.add_argument("--chi", type=int, default=-4, help="fundamental discriminant of the character (mu-period)")
    return parser


class Context:
    def __init__(self, args):
        self.args = args
        self.config = load_config(args.config)
        if args.no_cache:
            self.cache = GammaCache()
        else:
            self.cache = GammaCache(args.cache or default_cache_path())
        self.workers = args.threads
        self.cache_only = args.cache_only

    def gamma_kwargs(self) -> dict:
        return {"cache": self.cache, "workers": self.workers, "cache_only": self.cache_only}

    def precision(self, p: int, default: int | None = None) -> int:
        if self.args.prec is not None:
            return self.args.prec
        m = FULL_PRECISION.get(p, 2) if default is None else default
        return m - 1 if self.args.quick else m


def cmd_gamma(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    value = morita_gamma(a.p, a.prec, a.arg)
    ang = angle(value)
    params = {"p": a.p, "m": a.prec, "arg": str(a.arg)}
    ref = reference.gamma_angle(a.p, a.arg, a.prec)
    if ref is None:
        return [VerifyReport("gamma", params, ang, details={"gamma": value})]
    return [checked("gamma", params, ang, PadicInt(a.p, a.prec, ref), "paper", gamma=value)]


def cmd_bigamma(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    y = parse_lattice(a.arg)
    value = bigamma(a.p, a.prec, ctx.config.cone, y, **ctx.gamma_kwargs())
    params = {"p": a.p, "m": a.prec, "arg": str(y)}
    ref = reference.bigamma_value(a.p, *y.coords, a.prec)
    if ref is None:
        return [VerifyReport("bigamma", params, value)]
    return [checked("bigamma", params, value, PadicInt(a.p, a.prec, ref), "paper")]


def _lctx(ctx: Context) -> ShintaniLContext:
    a = ctx.args
    return ShintaniLContext.create(ctx.config.cone, ctx.config.ideal(a.N), parse_lattice(a.x), a.p)


def cmd_lvalue(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    lc = _lctx(ctx)
    return [VerifyReport("lvalue", {"p": a.p, "N": a.N, "x": str(lc.x), "level": a.level}, l_zero(lc, a.level),
                         details={"q": lc.q})]


def cmd_lderiv(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    lc = _lctx(ctx)
    formula = l_derivative_formula(lc, a.prec, **ctx.gamma_kwargs())
    params = {"p": a.p, "N": a.N, "x": str(lc.x), "m": a.prec}
    if a.level is None:
        return [VerifyReport("lderiv", params, formula)]
    direct = l_derivative_direct(lc, a.level, a.prec, workers=ctx.workers)
    # a level-n Riemann sum is trusted to p^(n-1)
    m = min(a.prec, a.level - 1)
    params["level"] = a.level
    return [checked("lderiv", params, formula, direct, "derived", formula.congruent(direct, m), agree_to=m)]


def _verify_cor12(ctx: Context) -> list[VerifyReport]:
    a, cfg = ctx.args, ctx.config
    out = []
    for p in [a.p] if a.p else [5, 7]:
        m = ctx.precision(p)
        if a.N is None:
            out.append(cor12_example(p, m, cfg, **ctx.gamma_kwargs()))
            out.append(cor12_verify(p, cfg.ideal(3), m, cfg, **ctx.gamma_kwargs()))
        else:
            out.append(cor12_verify(p, cfg.ideal(a.N), m, cfg, **ctx.gamma_kwargs()))
    return out


def _verify_prop41(ctx: Context) -> list[VerifyReport]:
    a, cfg = ctx.args, ctx.config
    out = []
    for p in [a.p] if a.p else [5, 7]:
        if a.N is not None:
            out.append(prop41_verify(p, cfg.ideal(a.N), ctx.precision(p), cfg, **ctx.gamma_kwargs()))
            continue
        out.append(prop41_verify(p, cfg.ideal(3), ctx.precision(p), cfg, **ctx.gamma_kwargs()))
        out.append(prop41_verify(p, cfg.ideal(11), 2, cfg, **ctx.gamma_kwargs()))
        out.append(independence_verify(p, [3, 11], 2, cfg, **ctx.gamma_kwargs()))
    return out


def _verify_thm_a(ctx: Context) -> list[VerifyReport]:
    a, cfg = ctx.args, ctx.config
    level = a.level or (2 if a.quick else 3)
    chi = [cl.genus_sign for cl in cfg.cone.classes]
    return [
        theorem_A_verify(cfg.cone, cfg.ideal(a.N or 3), chi, p, a.prec or 2, level, **ctx.gamma_kwargs())
        for p in ([a.p] if a.p else [5, 7])
    ]


def _verify_dh(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    if a.p and a.nuprime and a.h is not None:
        return [dh_verify(a.p, a.nu, a.nuprime, a.h)]
    out = []
    for p in [a.p] if a.p else [3, 5, 7]:
        for nup in [a.nuprime] if a.nuprime else [2, 3]:
            if p**nup > 350 and not a.nuprime:
                continue
            out.extend(dh_verify(p, a.nu, nup, h) for h in dh_admissible(p, a.nu, nup))
    return out


DIST_TUPLES = [(5, 3, 2, 1), (5, 3, 2, 2), (5, 4, 3, 1), (5, 4, 3, 3), (7, 3, 2, 1), (7, 3, 2, 2), (7, 4, 3, 1),
               (7, 4, 3, 3)]


def _verify_dist(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    m = a.prec or 3
    if a.p and a.M and a.N and a.d:
        return [gamma_dist_verify(a.p, a.M, a.N, a.d, m)]
    return [gamma_dist_verify(p, M, N, d, m) for p, M, N, d in DIST_TUPLES]


def _verify_comparison(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    m = a.prec or 3
    if a.p and a.M and a.N:
        return [comparison_trivial_char(a.p, a.M, a.N, m)]
    return [comparison_trivial_char(p, M, N, m) for p, M, N, _ in DIST_TUPLES if _ == 1]


def _verify_cyclo_units(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    if a.M and a.N and a.a is not None:
        return [cyclo_unit_identity(a.M, a.N, a.a)]
    return [cyclo_unit_identity(M, N, r) for M in range(2, 9) for N in range(2, 6) if math.gcd(M, N) == 1
            for r in range(1, M)]


def _verify_mu_period(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    chi = DirichletChar.kronecker(a.chi)
    N, p, n = a.N or 3, a.p or 5, a.n or 2
    values = [a.a] if a.a is not None else range(p**n)
    return [mu_period_verify(chi, N, p, n, r) for r in values]


FG_MATRIX = [(3, 2, 5, 2), (4, 3, 5, 2), (3, 2, 7, 1), (4, 3, 7, 2), (3, 4, 5, 2)]


def _verify_fg_perm(ctx: Context) -> list[VerifyReport]:
    a = ctx.args
    if a.M and a.N and a.p and a.n:
        ds = [a.d] if a.d is not None else range(a.M * a.N)
        return [fg_permutation(a.M, a.N, d, a.p, a.n) for d in ds]
    return [fg_permutation(M, N, d, p, n) for M, N, p, n in FG_MATRIX for d in range(M * N)]


def _verify_lemma44(ctx: Context) -> list[VerifyReport]:
    a, cfg = ctx.args, ctx.config
    return [lemma44_verify(cfg.ideal(N), cfg) for N in ([a.N] if a.N else [3, 11])]


VERIFIERS = {
    "cor12": _verify_cor12,
    "prop41": _verify_prop41,
    "thmA": _verify_thm_a,
    "dh": _verify_dh,
    "dist": _verify_dist,
    "comparison": _verify_comparison,
    "cyclo-units": _verify_cyclo_units,
    "mu-period": _verify_mu_period,
    "fg-perm": _verify_fg_perm,
    "lemma44": _verify_lemma44,
}


def cmd_verify(ctx: Context) -> list[VerifyReport]:
    names = CHECKS if ctx.args.check == "all" else (ctx.args.check,)
    reports: list[VerifyReport] = []
    for name in names:
        with timed(reports):
            reports.extend(VERIFIERS[name](ctx))
    return reports


COMMANDS = {"gamma": cmd_gamma, "bigamma": cmd_bigamma, "lvalue": cmd_lvalue, "lderiv": cmd_lderiv,
            "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args)
        reports: list[VerifyReport] = []
        with timed(reports):
            reports.extend(COMMANDS[args.command](ctx))
    except CacheVersionError as exc:
        print(f"error: cache version mismatch: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except MissingGammaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (LatticeError, PadicDomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.report == "json":
        print(dump_json(reports, timing=not args.no_timing))
    else:
        print(dump_text(reports))
    return 0 if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
