"""Command line front end.

    hazardscan analyze  fig1.net --from 1111 --to 1001 --at 5
    hazardscan enumerate fig1.net --mode all
    hazardscan simulate fig1.net --from 1111 --to 1001 --at 5 --delay tau=1 --vcd y.vcd
    hazardscan check    fig1.net --from 1111 --to 1001 --at 5 --delay tau=1

Exit codes: 0 clean, 1 usage or input error, 2 hazard found,
3 step order depends on unassigned delays, 4 oracle divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .analyze import classify, enumerate_transitions, propagate
from .circuit import Stimulus, parse_netlist, stimulus_waveforms
from .errors import AmbiguousOrdering, HazardScanError
from .oracle import render_ascii, simulate, trace_vs_waveform, write_vcd
from .waveform import format_rational

EXIT_OK, EXIT_ERROR, EXIT_HAZARD, EXIT_AMBIGUOUS, EXIT_DIVERGENCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    netlist_path: str
    command: str
    from_bits: str | None = None
    to_bits: str | None = None
    at: Fraction = Fraction(0)
    delay_assignments: dict = field(default_factory=dict)
    output_format: str = "text"
    vcd_path: str | None = None
    enumerate_mode: str = "hamming1"
    output: str | None = None
    delay_model: str = "pure"

    def validate(self):
        if self.command in ("analyze", "simulate", "check") and (self.from_bits is None or self.to_bits is None):
            raise UsageError(f"{self.command} needs --from and --to")


def _parse_delay(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected SYMBOL=VALUE, got {text!r}")
    try:
        return name.strip(), Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad delay value in {text!r}") from None


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hazardscan", description="Symbolic hazard analysis of gate netlists.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analyze", "classify one input transition symbolically"),
        ("enumerate", "list every hazardous truth-table transition"),
        ("simulate", "event-driven simulation with concrete delays"),
        ("check", "compare symbolic waveforms with the simulator"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("netlist")
        p.add_argument("--from", dest="from_bits", metavar="BITS")
        p.add_argument("--to", dest="to_bits", metavar="BITS")
        p.add_argument("--at", type=_parse_rational, default=Fraction(0), metavar="TIME")
        p.add_argument("--delay", type=_parse_delay, action="append", default=[], metavar="SYM=VALUE")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", metavar="NAME", help="restrict to one primary output")
        if name == "enumerate":
            p.add_argument("--mode", choices=("hamming1", "all"), default="hamming1")
        if name == "simulate":
            p.add_argument("--vcd", metavar="PATH")
            p.add_argument("--model", choices=("pure", "inertial"), default="pure")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        netlist_path=args.netlist,
        command=args.command,
        from_bits=args.from_bits,
        to_bits=args.to_bits,
        at=args.at,
        delay_assignments=dict(args.delay),
        output_format=args.format,
        vcd_path=getattr(args, "vcd", None),
        enumerate_mode=getattr(args, "mode", "hamming1"),
        output=args.output,
        delay_model=getattr(args, "model", "pure"),
    )


def run(config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        config.validate()
        with open(config.netlist_path, encoding="utf-8") as fh:
            netlist = parse_netlist(fh.read())
        if config.output is not None and config.output not in netlist.outputs:
            raise UsageError(f"no primary output named {config.output}")
        outputs = [config.output] if config.output else [o for o, _ in netlist.primary_outputs]
        handler = {"analyze": _analyze, "enumerate": _enumerate, "simulate": _simulate, "check": _check}
        return handler[config.command](config, netlist, outputs, out)
    except AmbiguousOrdering as exc:
        print(f"error: {exc}", file=err)
        return EXIT_AMBIGUOUS
    except (UsageError, HazardScanError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR


def _stimulus(config, netlist) -> Stimulus:
    return Stimulus.from_bits(netlist, config.from_bits, config.to_bits, config.at)


def _analyze(config, netlist, outputs, out) -> int:
    netlist = netlist.substitute(config.delay_assignments)
    stim = _stimulus(config, netlist)
    reports = [classify(netlist, stim, o) for o in outputs]
    if config.output_format == "json":
        payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        print(json.dumps(payload, indent=2), file=out)
    else:
        for r in reports:
            print(r.summary(with_name=len(reports) > 1), file=out)
    return EXIT_HAZARD if any(r.hazardous for r in reports) else EXIT_OK


def _enumerate(config, netlist, outputs, out) -> int:
    netlist = netlist.substitute(config.delay_assignments)
    mode = "all_pairs" if config.enumerate_mode == "all" else config.enumerate_mode
    rows = []
    for o in outputs:
        for stim, report in enumerate_transitions(netlist, o, mode):
            frm, to = stim.bits(netlist)
            rows.append((frm, to, report))
    if config.output_format == "json":
        payload = [{"from": f, "to": t, **r.to_dict()} for f, t, r in rows]
        print(json.dumps(payload, indent=2), file=out)
    else:
        for f, t, r in rows:
            print(f"{f} -> {t}  {r.summary()}", file=out)
        if not rows:
            print("no hazardous transitions", file=out)
    return EXIT_HAZARD if rows else EXIT_OK


def _require_delays(config, netlist):
    missing = sorted(netlist.delay_symbols() - set(config.delay_assignments))
    if missing:
        raise UsageError(f"{config.command} needs concrete delays; pass --delay for {', '.join(missing)}")


def _simulate(config, netlist, outputs, out) -> int:
    _require_delays(config, netlist)
    stim = _stimulus(config, netlist)
    trace = simulate(netlist, stim, config.delay_assignments, config.delay_model)
    if config.vcd_path:
        write_vcd(trace, config.vcd_path)
    if config.output_format == "json":
        payload = {
            "initial": trace.initial,
            "final": trace.final,
            "settle_time": format_rational(trace.settle_time),
            "events": [{"time": format_rational(e.time), "signal": e.signal, "value": e.new_value} for e in trace.all_events()],
        }
        print(json.dumps(payload, indent=2), file=out)
    else:
        for e in trace.all_events():
            print(f"t={format_rational(e.time)}  {e.signal} -> {e.new_value}", file=out)
        print(f"settled at t={format_rational(trace.settle_time)}", file=out)
        print(render_ascii(trace), file=out)
    return EXIT_OK


def _check(config, netlist, outputs, out) -> int:
    _require_delays(config, netlist)
    stim = _stimulus(config, netlist)
    trace = simulate(netlist, stim, config.delay_assignments)
    try:
        waves = propagate(netlist, stimulus_waveforms(stim))
    except AmbiguousOrdering:
        waves = propagate(netlist.substitute(config.delay_assignments), stimulus_waveforms(stim))
        print("note: symbolic order undecidable, compared with delays substituted", file=out)
    agreement = trace_vs_waveform(trace, waves, config.delay_assignments)
    if agreement.ok:
        print("agreement: all signals", file=out)
        return EXIT_OK
    d = agreement.first_divergence
    print(f"divergence: {d.signal} at t={format_rational(d.time)}: simulator {d.trace_value}, symbolic {d.waveform_value}", file=out)
    return EXIT_DIVERGENCE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
