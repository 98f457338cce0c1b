"""Command-line front end: ``diqss <subcommand> [flags]``.

Exit status is 0 on success, 1 on a domain or validation error (message on
stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from typing import Optional, Sequence

from .channel import ChannelParams, distance_for_efficiency, global_efficiency
from .errors import DomainError, NoThresholdError
from .outcome_model import (
    apply_post_selection,
    oracle_ad,
    oracle_qber,
    outcome_distribution,
    svetlichny_polynomial,
)
from .rates import (
    TABLE1_VARIANTS,
    ProtocolConfig,
    Variant,
    distilled_qber,
    effective_qber,
    raw_qber,
    secret_rate,
)
from .simulate import POST_AD, PRE_AD, SimulationConfig, run_pipeline
from .sweep import (
    Axis,
    SweepSpec,
    run_sweep,
    table1,
    write_csv,
    write_json,
    write_table1_csv,
    write_table1_json,
)
from .thresholds import max_distance, threshold_report
from .verification import SUITES, all_passed, check_monte_carlo

DEFAULT_Q = 0.05


def _fmt4(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, float):
        return format(x, ".4g")
    return str(x)


def _jsonable(obj):
    if isinstance(obj, Variant):
        return obj.name
    if dataclasses.is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _render_record(record: dict, fmt: str, units: Optional[dict] = None) -> str:
    """Render a flat mapping as human text, one-row CSV or JSON."""
    units = units or {}
    if fmt == "json":
        return json.dumps(_jsonable(record), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(record))
        writer.writerow([repr(v) if isinstance(v, float) else v for v in record.values()])
        return buf.getvalue()
    width = max(len(k) for k in record)
    lines = [f"{k:<{width}}  {_fmt4(v)}{units.get(k, '')}" for k, v in record.items()]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_protocol(p: argparse.ArgumentParser, fidelity: float = 0.98, eta: bool = True) -> None:
    p.add_argument("--fidelity", "-F", type=float, default=fidelity, help=f"GHZ fidelity (default {fidelity})")
    if eta:
        p.add_argument("--eta", type=float, default=None, help="global detection efficiency (default 0.98)")
    p.add_argument("--q", type=float, default=None,
                   help=f"flip probability for np/nps (default {DEFAULT_Q}; must be 0 otherwise)")
    p.add_argument("--variant", choices=("basic", "np", "ps", "nps"), default="basic")
    p.add_argument("--ad", action="store_true", help="apply advantage distillation")
    p.add_argument("--block-len", type=int, default=2, help="AD block length (default 2)")


def _add_channel(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.2, help="fiber loss, dB/km (default 0.2)")
    p.add_argument("--eta-d", type=float, default=0.98, help="detector efficiency (default 0.98)")
    p.add_argument("--eta-c", type=float, default=0.99, help="coupling efficiency (default 0.99)")


def _add_output(p: argparse.ArgumentParser, default: str = "human", choices=("csv", "json", "human")) -> None:
    p.add_argument("--format", choices=choices, default=default)
    p.add_argument("--output", help="write to this path instead of stdout")


def _variant(args) -> Variant:
    return Variant.from_name(("ad+" if args.ad else "") + args.variant)


def _q(args, variant: Variant) -> float:
    if args.q is not None:
        return args.q
    return DEFAULT_Q if variant.noise_preprocessing else 0.0


def _channel(args) -> ChannelParams:
    return ChannelParams(args.alpha, args.eta_d, args.eta_c)


def _config(args) -> ProtocolConfig:
    variant = _variant(args)
    if getattr(args, "distance", None) is not None:
        if args.eta is not None:
            raise DomainError("give either --eta or --distance, not both")
        eta = global_efficiency(args.distance, _channel(args))
    else:
        eta = 0.98 if args.eta is None else args.eta
    return ProtocolConfig(
        fidelity=args.fidelity,
        eta=eta,
        q=_q(args, variant),
        noise_preprocessing=variant.noise_preprocessing,
        post_selection=variant.post_selection,
        advantage_distillation=variant.advantage_distillation,
        block_length=args.block_len,
    )


def cmd_rate(args) -> int:
    cfg = _config(args)
    rep = secret_rate(cfg)
    record = {"variant": cfg.variant.name, "fidelity": cfg.fidelity, "eta": cfg.eta, "q": cfg.q,
              **dataclasses.asdict(rep)}
    _emit(_render_record(record, args.format), args.output)
    return 0


def cmd_qber(args) -> int:
    cfg = _config(args)
    dist = outcome_distribution(cfg.fidelity, cfg.eta)
    n = cfg.block_length
    record = {
        "variant": cfg.variant.name,
        "raw_qber": raw_qber(cfg.fidelity, cfg.eta, cfg.post_selection),
        "distilled_qber": distilled_qber(cfg.fidelity, cfg.eta, cfg.post_selection, n)[0],
        "ad_retention": distilled_qber(cfg.fidelity, cfg.eta, cfg.post_selection, n)[1],
        "effective_qber": effective_qber(cfg),
        "svetlichny_at_unit_efficiency": svetlichny_polynomial(cfg.fidelity),
    }
    if cfg.post_selection:
        ps = apply_post_selection(dist)
        record["oracle_raw_qber"] = oracle_qber(ps)
        if n <= 4:
            record["oracle_ad_retention"], record["oracle_distilled_qber"] = oracle_ad(
                ps, n=n, discard_noclick=False)
    else:
        record["oracle_raw_qber"] = oracle_qber(dist)
        record["oracle_click_conditional_qber"] = oracle_qber(dist, discard_noclick=True)
        if n <= 4:
            record["oracle_ad_retention"], record["oracle_distilled_qber"] = oracle_ad(
                dist, n=n, discard_noclick=True)
    _emit(_render_record(record, args.format), args.output)
    return 0


def cmd_threshold(args) -> int:
    variant = _variant(args)
    rep = threshold_report(args.fidelity, _q(args, variant), variant, args.block_len, _channel(args))
    units = {"d_max": " km", "d_max_user_to_user": " km"}
    _emit(_render_record(_jsonable(rep), args.format, units), args.output)
    return 0


def cmd_distance(args) -> int:
    params = _channel(args)
    if args.eta is not None:
        record = {"eta": args.eta, "distance_km": distance_for_efficiency(args.eta, params)}
    else:
        variant = _variant(args)
        res = max_distance(args.fidelity, _q(args, variant), variant, args.block_len, params)
        record = {"variant": variant.name, "fidelity": args.fidelity, "d_max": res.km,
                  "d_max_bisection": res.km_bisection, "d_max_user_to_user": res.user_to_user_km,
                  "reachable": res.reachable}
    units = {k: " km" for k in ("distance_km", "d_max", "d_max_bisection", "d_max_user_to_user")}
    _emit(_render_record(record, args.format, units), args.output)
    return 0


def cmd_sweep(args) -> int:
    if not args.axis:
        raise DomainError("at least one --axis name:min:max:count is required")
    if args.variants:
        variants = tuple(Variant.from_name(v) for v in args.variants.split(","))
    else:
        variants = TABLE1_VARIANTS
    spec = SweepSpec(
        axes=tuple(Axis.parse(a) for a in args.axis),
        fidelity=args.fidelity,
        eta=1.0 if args.eta is None else args.eta,
        q=DEFAULT_Q if args.q is None else args.q,
        block_length=args.block_len,
        variants=variants,
        channel=_channel(args),
    )
    rows = run_sweep(spec)
    buf = io.StringIO()
    (write_json if args.format == "json" else write_csv)(rows, buf)
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_table1(args) -> int:
    rows = table1(args.fidelity, args.q, args.eta, _channel(args), args.distance_fidelity, args.block_len)
    buf = io.StringIO()
    if args.format == "json":
        write_table1_json(rows, buf)
    elif args.format == "csv":
        write_table1_csv(rows, buf)
    else:
        buf.write(f"{'protocol':<34} {'r':>7} {'delta_th':>9} {'eta_th':>8} {'d (km)':>7}\n")
        for r in rows:
            buf.write(f"{r.label:<34} {r.rate:>7.3f} {100 * r.delta_threshold:>8.2f}% "
                      f"{100 * r.eta_threshold:>7.2f}% {r.d_max:>7.2f}\n")
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_simulate(args) -> int:
    cfg = SimulationConfig(_config(args), args.rounds, args.seed)
    report = run_pipeline(cfg, args.flip_stage)
    if args.format == "json":
        text = json.dumps(_jsonable(report), indent=2) + "\n"
    else:
        flat = {}
        for k, v in _jsonable(report).items():
            if isinstance(v, dict):
                flat[k] = v["value"]
                flat[f"{k}_ci95"] = v["ci_halfwidth"]
            else:
                flat[k] = v
        text = _render_record(flat, args.format)
    _emit(text, args.output)
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        if name == "mc":
            results += check_monte_carlo(args.rounds, (args.seed, args.seed + 1))
        else:
            results += SUITES[name]()
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if all_passed(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diqss",
        description="Rates, thresholds and simulation for device-independent "
                    "quantum secret sharing with advantage distillation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="secret-sharing rate for one configuration")
    _add_protocol(p)
    _add_channel(p)
    p.add_argument("--distance", type=float, help="derive eta from this fiber distance (km)")
    _add_output(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("qber", help="closed-form and enumerated QBERs")
    _add_protocol(p)
    _add_channel(p)
    p.add_argument("--distance", type=float, help="derive eta from this fiber distance (km)")
    _add_output(p)
    p.set_defaults(func=cmd_qber)

    p = sub.add_parser("threshold", help="efficiency threshold, noise tolerance and reach")
    _add_protocol(p, eta=False)
    _add_channel(p)
    _add_output(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("distance", help="maximum secure distance, or the distance for a given --eta")
    _add_protocol(p, fidelity=1.0)
    _add_channel(p)
    _add_output(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("sweep", help="rate on a 1-D or 2-D grid")
    p.add_argument("--axis", action="append", help="name:min:max:count with name in eta, F, q, d")
    p.add_argument("--variants", help="comma list, e.g. basic,ad+basic (default: all eight)")
    p.add_argument("--fidelity", "-F", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=None, help="fixed eta when not swept (default 1)")
    p.add_argument("--q", type=float, default=None, help=f"flip probability for np/nps (default {DEFAULT_Q})")
    p.add_argument("--block-len", type=int, default=2)
    _add_channel(p)
    _add_output(p, default="csv", choices=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "table1",
        help="eight-variant summary",
        description="Rate at (F, q, eta); delta_th and eta_th at (F, q); d_max at "
                    "(--distance-fidelity, q).  The published table uses F=0.98 for the "
                    "first three columns and F=1 for the distance column.",
    )
    p.add_argument("--fidelity", "-F", type=float, default=0.98)
    p.add_argument("--eta", type=float, default=0.98)
    p.add_argument("--q", type=float, default=DEFAULT_Q)
    p.add_argument("--distance-fidelity", type=float, default=1.0)
    p.add_argument("--block-len", type=int, default=2)
    _add_channel(p)
    _add_output(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("simulate", help="Monte Carlo of the sifting and distillation pipeline")
    _add_protocol(p)
    _add_channel(p)
    p.add_argument("--distance", type=float, help="derive eta from this fiber distance (km)")
    p.add_argument("--rounds", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flip-stage", choices=(PRE_AD, POST_AD), default=PRE_AD)
    _add_output(p, default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the built-in consistency suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--rounds", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=20240917)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, NoThresholdError) as exc:
        print(f"diqss {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
