"""Command-line driver: randomized verification suites and Stickelberger reports.

Every subcommand writes one JSON report (stdout, or ``--out``). Exit status
is 0 when every check passes, 2 when a mathematical check fails and 1 on
configuration, input or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass
from importlib.metadata import PackageNotFoundError, version

from . import complexes, modules, serialize, stickelberger
from .errors import BadB, ParseError, Relk0Error
from .grouprings import FiniteAbelianGroup, det_class_equals, is_prime

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2
ENV_PREFIX = "RELK0_"


def _version():
    try:
        return version("relk0")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass
class SuiteConfig:
    l: int = 3
    group: str = "C3"
    trials: int = 20
    seed: int = 0
    max_rank: int = 3
    guard: int = modules.DEFAULT_GUARD
    out: str | None = None

    def validate(self):
        if not is_prime(self.l):
            raise ValueError(f"l = {self.l} is not prime")
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if self.guard < 1:
            raise ValueError("guard must be >= 1")
        if self.max_rank < 1:
            raise ValueError("rank bound must be >= 1")
        FiniteAbelianGroup.parse(self.group)


class CliError(Exception):
    pass


def _env(name, cast, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise CliError(f"bad value {raw!r} for {ENV_PREFIX}{name.upper()}") from None


def _opt(args, name, cast, default):
    """Command-line flag, then RELK0_<NAME>, then the default."""
    v = getattr(args, name, None)
    return v if v is not None else _env(name, cast, default)


def _group(text):
    try:
        return FiniteAbelianGroup.parse(text)
    except ParseError as exc:
        raise CliError(str(exc)) from None


def _report(command, config, records, passed, extra=None):
    doc = {
        "tool": "relk0",
        "version": _version(),
        "command": command,
        "config": config,
        "records": records,
        "summary": {"pass": passed, "records": len(records), "failures": sum(1 for r in records if not r.get("pass", True))},
    }
    if extra:
        doc["summary"].update(extra)
    return doc


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args):
    cfg = SuiteConfig(
        l=_opt(args, "l", int, 3),
        group=_opt(args, "group", str, "C3"),
        trials=_opt(args, "trials", int, 20),
        seed=_opt(args, "seed", int, 0),
        max_rank=_opt(args, "max_rank", int, 3),
        guard=_opt(args, "guard", int, modules.DEFAULT_GUARD),
        out=_opt(args, "out", str, None),
    )
    try:
        cfg.validate()
    except (ValueError, ParseError) as exc:
        raise CliError(str(exc)) from None
    records = []
    if not args.prop28:
        G = _group(cfg.group)
        gen = complexes.verify_many(cfg.l, cfg.trials, cfg.seed, G, cfg.max_rank, cfg.guard)
        for i, (spec, rep) in enumerate(gen):
            d = rep.to_dict()
            d["expected_class_agrees"] = det_class_equals(rep.det, spec.expected_class())
            d["pass"] = d["pass"] and d["expected_class_agrees"]
            records.append({"kind": "theorem", "trial": i, **d})
        rng = random.Random(cfg.seed + 1)
        for i in range(cfg.trials):
            pm, M = modules.random_presented_module(rng, cfg.l, G if G.order <= 12 else None)
            F = modules.fitting_ideal(pm, guard=cfg.guard)
            bad_fa = modules.fitting_in_annihilator(M, F)
            bad_af = modules.annihilator_power_in_fitting(M, F=F)
            dual = modules.duality_checks(M)
            records.append(
                {
                    "kind": "module",
                    "trial": i,
                    "factors": list(M.factors),
                    "fitting_in_ann": not bad_fa,
                    "ann_power_in_fitting": not bad_af,
                    "duality": dual,
                    "pass": not bad_fa and not bad_af and all(dual.values()),
                }
            )
    w = complexes.prop_2_8_witness(cfg.l, cfg.guard)
    ok = (w["fitting_valuation"], w["dual_fitting_valuation"]) == (2, 1) and w["ann_duality"]
    records.append({"kind": "prop28", **w, "pass": ok})
    passed = all(r["pass"] for r in records)
    config = {k: v for k, v in asdict(cfg).items() if k != "out"}
    config["prop28_only"] = bool(args.prop28)
    return _report("verify", config, records, passed), passed, cfg.out


def _field(args):
    f = _opt(args, "f", int, None)
    if f is None:
        raise CliError("--f is required")
    try:
        H = [int(x) for x in args.H.split(",")] if args.H else []
        return stickelberger.AbelianFieldSpec(f, H)
    except (ValueError, Relk0Error) as exc:
        raise CliError(str(exc)) from None


def cmd_theta(args):
    K = _field(args)
    n = _opt(args, "n", int, None)
    if n is None or n < 2:
        raise CliError("theta needs --n >= 2")
    th = stickelberger.theta_element(K, n)
    labels = [K.label(i) for i in K.coset_order()]
    record = {
        "f": K.f,
        "H": sorted(K.H),
        "n": n,
        "group": str(K.group),
        "labels": labels,
        "coefficients": [str(c) for c in th.coefficients()],
        "element": str(th),
        "pass": True,
    }
    return _report("theta", {"f": K.f, "H": sorted(K.H), "n": n}, [record], True), True, _opt(args, "out", str, None)


def cmd_cs_check(args):
    K = _field(args)
    n = _opt(args, "n", int, None)
    b = _opt(args, "b", int, None)
    l = _opt(args, "l", int, None)
    if n is None or b is None or l is None:
        raise CliError("cs-check needs --n, --b and --l")
    if n < 1 or not is_prime(l):
        raise CliError("cs-check needs n >= 1 and a prime l")
    try:
        rep = stickelberger.coates_sinnott_check(K, n, l, b)
    except BadB as exc:
        raise CliError(str(exc)) from None
    d = rep.to_dict()
    config = {"f": K.f, "H": sorted(K.H), "n": n, "b": b, "l": l}
    return _report("cs-check", config, [d], rep.passed), rep.passed, _opt(args, "out", str, None)


def cmd_prop28(args):
    l = _opt(args, "l", int, 3)
    guard = _opt(args, "guard", int, modules.DEFAULT_GUARD)
    if not is_prime(l):
        raise CliError(f"l = {l} is not prime")
    w = complexes.prop_2_8_witness(l, guard)
    ok = (w["fitting_valuation"], w["dual_fitting_valuation"]) == (2, 1) and w["ann_duality"]
    return _report("prop28", {"l": l, "guard": guard}, [{**w, "pass": ok}], ok), ok, _opt(args, "out", str, None)


def _load_complex(path):
    try:
        C = serialize.parse_artifacts(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    if not isinstance(C, complexes.PerfectComplex):
        raise CliError(f"{path} does not hold a complex")
    return C


def cmd_homology(args):
    C = _load_complex(args.path)
    H = complexes.homology(C)
    records = [
        {"degree": i, "order": M.order, "module": serialize.module_to_json(M), "pass": True}
        for i, M in enumerate(H.modules)
    ]
    extra = {"m0": H.m0, "m1": H.m1}
    return _report("homology", {"path": str(args.path)}, records, True, extra), True, _opt(args, "out", str, None)


def cmd_detclass(args):
    C = _load_complex(args.path)
    seed = _opt(args, "seed", int, 0)
    d = complexes.det_class(C, random.Random(seed))
    record = {"det": [str(c) for c in d.rep.coeffs], "element": str(d.rep), "pass": True}
    return _report("detclass", {"path": str(args.path), "seed": seed}, [record], True), True, _opt(args, "out", str, None)


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="relk0", description=__doc__.splitlines()[0])
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--guard", type=int, help="extra l-adic digits for membership double checks")

    v = sub.add_parser("verify", help="random cone verification suite")
    v.add_argument("--l", type=int)
    v.add_argument("--group")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--max-rank", dest="max_rank", type=int)
    v.add_argument("--prop28", action="store_true", help="only run the C_l x C_l witness")
    common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("theta", help="Stickelberger coefficients")
    t.add_argument("--f", type=int)
    t.add_argument("--n", type=int)
    t.add_argument("--H", help="comma-separated generators of the fixing subgroup")
    common(t)
    t.set_defaults(func=cmd_theta)

    c = sub.add_parser("cs-check", help="integrality of w (b^(n+1) - sigma_b) Theta")
    c.add_argument("--f", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--l", type=int)
    c.add_argument("--H")
    common(c)
    c.set_defaults(func=cmd_cs_check)

    w = sub.add_parser("prop28", help="Fitting ideals of the C_l x C_l witness")
    w.add_argument("--l", type=int)
    common(w)
    w.set_defaults(func=cmd_prop28)

    h = sub.add_parser("homology", help="homology of a complex file")
    h.add_argument("path")
    common(h)
    h.set_defaults(func=cmd_homology)

    d = sub.add_parser("detclass", help="det(X) of a complex file")
    d.add_argument("path")
    d.add_argument("--seed", type=int)
    common(d)
    d.set_defaults(func=cmd_detclass)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    started = time.perf_counter() if args.timing else None
    try:
        doc, passed, out = args.func(args)
    except (CliError, ParseError) as exc:
        print(f"relk0: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Relk0Error as exc:
        print(f"relk0: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if started is not None:
        doc["wall_clock_seconds"] = round(time.perf_counter() - started, 3)
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    try:
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"relk0: error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
