"""Command-line entry point: ``cjf <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 cap or budget exceeded,
4 verification failed.  Defaults for caps and budgets can be overridden with
``CJF_TABLE_CAP``, ``CJF_STEP_BUDGET``, ``CJF_LEVELS``, ``CJF_THREADS`` and
``CJF_FORMAT``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import crossjoin, enumeration, fryers, gf2, register
from .crossjoin import CrossJoinQuadruple
from .errors import CJFError, InvalidInput
from .register import FeedbackFunction

SIM_VERIFY_CAP = 24


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw, 0)
    except ValueError:
        raise InvalidInput(f"{name}={raw!r} is not an integer") from None
    if value <= 0:
        raise InvalidInput(f"{name} must be positive")
    return value


@dataclass
class RunConfig:
    command: str
    poly: str | None = None
    n: int | None = None
    caps: dict = field(default_factory=dict)
    format: str = "text"
    path: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.format not in ("text", "json"):
            raise InvalidInput(f"format must be text or json, not {self.format!r}")
        if any(v is not None and v <= 0 for v in self.caps.values()):
            raise InvalidInput("caps must be positive")
        if self.threads < 1:
            raise InvalidInput("threads must be positive")


class _Out:
    def __init__(self, path: str | None):
        self.fh = open(path, "w") if path else sys.stdout

    def line(self, text: str = "") -> None:
        self.fh.write(text + "\n")

    def json(self, obj) -> None:
        json.dump(obj, self.fh, indent=2, sort_keys=False)
        self.fh.write("\n")

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()


def _field(cfg: RunConfig, assume: bool) -> gf2.FieldCtx:
    if cfg.poly is None:
        raise InvalidInput("--poly is required")
    return gf2.field_new(cfg.poly, assume_primitive=assume)


# ---------- commands


def cmd_zech(args, cfg: RunConfig, out: _Out) -> int:
    cap = cfg.caps["table_cap"]
    if args.table_in:
        table = gf2.load_table(args.table_in)
        if cfg.poly and gf2.as_polynomial(cfg.poly) != table.poly:
            raise InvalidInput(f"cache holds {table.poly}, not {cfg.poly}")
        ctx = gf2.field_new(table.poly, assume_primitive=True)
    else:
        ctx = _field(cfg, args.assume_primitive)
        if args.table_out:
            table = gf2.zech_build_table(ctx, cap)
        else:
            table = gf2.zech_backend(ctx, cap)
    if args.table_out:
        gf2.save_table(table, args.table_out)
        print(f"wrote {len(table)} entries for {ctx.poly} to {args.table_out}", file=sys.stderr)
    results = [(j, table.lookup(j)) for j in args.query]
    if cfg.format == "json":
        out.json([{"j": str(j), "z": str(z)} for j, z in results])
    else:
        for _, z in results:
            out.line(str(z))
    return 0


def cmd_pairs(args, cfg: RunConfig, out: _Out) -> int:
    ctx = _field(cfg, args.assume_primitive)
    table = gf2.zech_build_table(ctx, cfg.caps["table_cap"])
    quads = crossjoin.find_crossjoin_pairs(ctx, table, workers=cfg.threads)
    if cfg.format == "json":
        out.json([q.to_json() for q in quads])
    else:
        out.line("i\tj\tzi\tzj")
        for q in quads:
            out.line("\t".join(str(v) for v in q))
    return 0


def _parse_pairs(spec: str, ctx: gf2.FieldCtx, cap: int) -> list[CrossJoinQuadruple]:
    quads = []
    backend = None
    for chunk in filter(None, (c.strip() for c in spec.split(";"))):
        try:
            vals = [int(v) for v in chunk.split(",")]
        except ValueError:
            raise InvalidInput(f"bad pair spec {chunk!r}") from None
        if len(vals) == 2:
            backend = backend or gf2.zech_backend(ctx, cap)
            vals = [vals[0], vals[1], backend.lookup(vals[0]), backend.lookup(vals[1])]
        if len(vals) != 4:
            raise InvalidInput(f"pair spec {chunk!r} needs 2 or 4 exponents")
        quads.append(CrossJoinQuadruple(*vals))
    return quads


def _parse_select(text: str | None, count: int) -> list[int]:
    if text is None:
        return list(range(count))
    body = text.strip().strip("{}[]")
    try:
        picks = sorted({int(v) for v in body.split(",") if v.strip()})
    except ValueError:
        raise InvalidInput(f"bad selection {text!r}") from None
    if any(not 0 <= k < count for k in picks):
        raise InvalidInput(f"selection {picks} outside family of size {count}")
    return picks


def cmd_synth(args, cfg: RunConfig, out: _Out) -> int:
    ctx = _field(cfg, args.assume_primitive)
    if args.family:
        try:
            stride, count = (int(v) for v in args.family.split(","))
        except ValueError:
            raise InvalidInput("--family expects stride,count") from None
        family = crossjoin.disjoint_family(ctx, stride, count)
        quads = [family[k] for k in _parse_select(args.select, count)]
    elif args.pairs is not None:
        quads = _parse_pairs(args.pairs, ctx, cfg.caps["table_cap"])
    else:
        quads = []
    F = crossjoin.synthesize_nfsr(ctx, quads)
    if ctx.n <= SIM_VERIFY_CAP or args.simulate:
        full = register.period(F, 1, cfg.caps["step_budget"]) == ctx.order
        status = "verified" if full else "failed"
    else:
        status = "unverified"
    try:
        degree = register.algebraic_degree(F)
    except CJFError:
        degree = None
    obj = F.to_json()
    obj.update(
        quadruples=[q.to_json() for q in quads],
        degree=degree,
        status=status,
    )
    out.json(obj)
    return 4 if status == "failed" else 0


def _load_function(path: str) -> FeedbackFunction:
    text = sys.stdin.read() if path == "-" else open(path).read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not JSON ({exc})") from exc
    return FeedbackFunction.from_json(obj)


def cmd_verify(args, cfg: RunConfig, out: _Out) -> int:
    F = _load_function(args.function)
    n = F.n
    seed = register.parse_state(args.seed, n) if args.seed else 1
    budget = cfg.caps["step_budget"]
    report = {"n": n, "mode": args.mode, "seed": "".join(map(str, register.state_bits(seed, n)))}
    T = register.period(F, seed, budget)
    report["period"] = str(T)
    if args.mode == "period":
        if register.evaluate(F, 0):
            want = 1 << n
        else:
            want = (1 << n) - 1 if seed else 1
        if args.expect is not None:
            want = int(args.expect)
        report["expected"] = str(want)
        ok = T == want
    else:
        if n > register.WINDOW_CAP:
            raise InvalidInput(f"de Bruijn verification needs n <= {register.WINDOW_CAP}")
        if T not in ((1 << n) - 1, 1 << n):
            kind = "raw"
        else:
            seq = register.generate(F, seed, T)
            kind = register.verify_kind(seq)
            if kind == "modified_debruijn":
                full = register.insert_zero(seq)
                report["extended_kind"] = full.kind
        report["kind"] = kind
        ok = kind != "raw"
    report["ok"] = ok
    if cfg.format == "json":
        out.json(report)
    else:
        for k, v in report.items():
            out.line(f"{k}\t{v}")
    return 0 if ok else 4


def cmd_fryers(args, cfg: RunConfig, out: _Out) -> int:
    table = fryers.fryers_spectrum(args.n)
    if cfg.format == "json":
        obj = {"n": args.n, "counts": {str(k): str(v) for k, v in table.items()}}
        obj["sum"] = str(fryers.spectrum_sum(args.n))
        out.json(obj)
    else:
        out.line("k\tN(l;k)")
        for k, v in table.items():
            out.line(f"{k}\t{v}")
        if args.sum:
            out.line(f"sum\t{fryers.spectrum_sum(args.n)}")
    return 0


def cmd_enumerate(args, cfg: RunConfig, out: _Out) -> int:
    if args.spectrum:
        hist = enumeration.distance_spectrum(args.n, args.allow_n6)
        if cfg.format == "json":
            out.json({"n": args.n, "counts": {str(k): v for k, v in hist.items()}, "total": sum(hist.values())})
        else:
            out.line("k\tcount")
            for k, v in hist.items():
                out.line(f"{k}\t{v}")
            out.line(f"total\t{sum(hist.values())}")
        return 0
    total = 0
    width = max(1, -(-(1 << (args.n - 1)) // 4))
    for seq, rec in enumeration.distance_records(args.n, args.allow_n6):
        total += 1
        if cfg.format == "json":
            out.line(json.dumps({"seq": str(seq), "f_table": format(rec.truth_table, f"0{width}x"), "distance": rec.distance_k}))
        else:
            out.line(str(seq))
    print(f"{total} sequences", file=sys.stderr)
    return 0


def cmd_closure(args, cfg: RunConfig, out: _Out) -> int:
    res = enumeration.closure(args.n, cfg.caps["levels"])
    spectrum = fryers.fryers_spectrum(args.n)
    rows = []
    for m, (size, dist) in enumerate(zip(res.counts, res.level_distances)):
        k = 2 * m + 1
        rows.append({"level": m, "count": size, "distances": dist, "spectrum_k": k, "spectrum": spectrum.get(k, 0)})
    if cfg.format == "json":
        out.json({"n": args.n, "levels": [{**r, "distances": {str(a): b for a, b in r["distances"].items()}} for r in rows], "total": res.total})
    else:
        out.line("level\tcount\tN(l;2m+1)\tdistances")
        for r in rows:
            dist = ",".join(f"{a}:{b}" for a, b in r["distances"].items())
            out.line(f"{r['level']}\t{r['count']}\t{r['spectrum']}\t{dist}")
        out.line(f"total\t{res.total}")
    return 0


# ---------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--output", "-o", default=None, help="write results to this file")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--table-cap", type=int, default=None)
    common.add_argument("--step-budget", type=int, default=None)

    p = argparse.ArgumentParser(prog="cjf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zech", parents=[common], help="Zech logarithm queries and table cache")
    z.add_argument("--poly")
    z.add_argument("--query", type=int, action="append", default=[])
    z.add_argument("--table-out")
    z.add_argument("--table-in")
    z.add_argument("--assume-primitive", action="store_true")
    z.set_defaults(func=cmd_zech)

    pr = sub.add_parser("pairs", parents=[common], help="all cross-join pairs of an m-sequence")
    pr.add_argument("--poly", required=True)
    pr.add_argument("--assume-primitive", action="store_true")
    pr.set_defaults(func=cmd_pairs)

    s = sub.add_parser("synth", parents=[common], help="synthesise an NFSR feedback function")
    s.add_argument("--poly", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--pairs", help="'i,j' or 'i,j,zi,zj', several separated by ';'")
    g.add_argument("--family", help="stride,count for x^n+x+1")
    s.add_argument("--select", help="family indices, e.g. 3 or 0,5,7 (default: all)")
    s.add_argument("--assume-primitive", action="store_true")
    s.add_argument("--simulate", action="store_true", help="check the period by simulation at any n <= 62")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", parents=[common], help="period or de Bruijn check of a feedback function")
    v.add_argument("--function", required=True, help="FeedbackFunction JSON file, or - for stdin")
    v.add_argument("--mode", choices=("period", "debruijn"), default="period")
    v.add_argument("--seed", help="initial state x_0..x_{n-1} as 0/1 string (default 10...0)")
    v.add_argument("--expect", help="expected period (default 2^n-1, or 1 for the zero seed)")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fryers", parents=[common], help="exact spectrum N(l;k)")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--sum", action="store_true")
    f.set_defaults(func=cmd_fryers)

    e = sub.add_parser("enumerate", parents=[common], help="all de Bruijn sequences of order n")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--spectrum", action="store_true")
    e.add_argument("--allow-n6", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("closure", parents=[common], help="level-by-level cross-join closure")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--levels", type=int, default=None)
    c.set_defaults(func=cmd_closure)
    return p


def _config(args) -> RunConfig:
    caps = {
        "table_cap": args.table_cap or _env_int("CJF_TABLE_CAP", gf2.TABLE_CAP),
        "step_budget": args.step_budget or _env_int("CJF_STEP_BUDGET", register.STEP_BUDGET),
        "levels": getattr(args, "levels", None) or (
            _env_int("CJF_LEVELS", 1) if "CJF_LEVELS" in os.environ else None
        ),
    }
    return RunConfig(
        command=args.command,
        poly=getattr(args, "poly", None),
        n=getattr(args, "n", None),
        caps=caps,
        format=args.format or os.environ.get("CJF_FORMAT", "text"),
        path=args.output,
        threads=args.threads or _env_int("CJF_THREADS", 1),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = None
    try:
        cfg = _config(args)
        out = _Out(cfg.path)
        return args.func(args, cfg, out)
    except CJFError as exc:
        print(f"cjf {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"cjf {args.command}: {exc}", file=sys.stderr)
        return 2
    finally:
        if out is not None:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
