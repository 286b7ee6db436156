"""Command-line front end.

    shuttleqec build    --code golay --out golay.net
    shuttleqec optimize --code golay --seed 7 --out opt.net --trace opt.trace
    shuttleqec stats    --network opt.net --format kv > opt.stats
    shuttleqec cost     --stats opt.stats
    shuttleqec render   --network opt.net --out opt.svg

A ``--config`` file holds ``key = value`` lines using the long flag names
(dashes or underscores); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .anneal import AnnealConfig, AnnealState, anneal_chains, format_trace
from .costmodel import (
    SWAP,
    TRANSPORT,
    ConcatenationParams,
    CostModel,
    concat_analysis,
    format_report,
    required_precision,
)
from .gf2codes import CodeError, get_code
from .schedule import LogicalNetwork, build_network
from .shuttle import (
    NetworkFormatError,
    ShuttledNetwork,
    distance_stats,
    initial_layout,
    parse_network,
    render_svg,
    serialize_network,
    shuttle_transform,
)


class CliError(Exception):
    pass


ANNEAL_KEYS = {f.name for f in fields(AnnealConfig)} - {"seed"}


def _add_common(p: argparse.ArgumentParser, *, code=True, network=False, fmt=True):
    p.add_argument("--config", help="file of 'key = value' lines mirroring the flags")
    if code:
        p.add_argument("--code", help="golay | bch127 | file:<path> (default golay)")
        p.add_argument("--kind", choices=["verification", "generation"], help="network kind (default verification)")
        p.add_argument("--above", type=int, help="verification bits placed above the ancilla block")
    if network:
        p.add_argument("--network", help="network file written by build/optimize")
    if fmt:
        p.add_argument("--format", choices=["text", "kv"], help="report format (default text)")
    p.add_argument("--out", help="output file")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shuttleqec", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="unoptimized shuttled network from a code")
    _add_common(p)

    p = sub.add_parser("optimize", help="anneal ancilla order and mover choices")
    _add_common(p, network=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--chains", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--trace", help="write the annealing trace here")
    p.add_argument("--initial-temperature", type=float)
    p.add_argument("--cooling-factor", type=float)
    p.add_argument("--steps-per-temperature", type=int)
    p.add_argument("--temperature-levels", type=int)
    p.add_argument("--reheat-cycles", type=int)
    p.add_argument("--reheat-factor", type=float)
    p.add_argument("--move-mix", type=float)

    p = sub.add_parser("stats", help="distance statistics of a network file")
    _add_common(p, code=False, network=True)

    p = sub.add_parser("cost", help="precision-factor and concatenation report")
    _add_common(p, code=False, network=True)
    p.add_argument("--stats", help="kv stats file (from 'stats --format kv')")
    p.add_argument("--sbar", type=float, help="mean separation for the precision comparison")
    p.add_argument("--sbar-inner", type=float, help="inner (Golay) mean separation, default 6")
    p.add_argument("--sbar-outer", type=float, help="outer (BCH) mean separation, default --sbar or 22")
    p.add_argument("--gamma", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--D", type=float, dest="D", help="transport distance scale")
    p.add_argument("--ancillas", type=int, help="ancillas per inner block (2 or 4)")

    p = sub.add_parser("render", help="SVG diagram of a network")
    _add_common(p, network=True, fmt=False)
    return ap


def read_config(path: str, parser: argparse.ArgumentParser, ns: argparse.Namespace) -> dict:
    known = {k for k in vars(ns)} - {"command", "config"}
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read config {path}: {e.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        if "=" not in ln:
            raise CliError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (x.strip() for x in ln.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise CliError(f"{path}:{lineno}: unknown key {key!r} for this command")
        out[key] = val
    return out


def resolve(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    ns = parser.parse_args(argv)
    if getattr(ns, "config", None):
        sub = parser._subparsers._group_actions[0].choices[ns.command]
        types = {a.dest: a.type for a in sub._actions if a.dest != "help"}
        choices = {a.dest: a.choices for a in sub._actions if a.choices}
        for key, val in read_config(ns.config, parser, ns).items():
            if getattr(ns, key) is not None:
                continue
            conv = types.get(key) or str
            try:
                v = conv(val)
            except ValueError:
                raise CliError(f"config key {key!r}: bad value {val!r}") from None
            if key in choices and v not in choices[key]:
                raise CliError(f"config key {key!r}: {v!r} not in {sorted(choices[key])}")
            setattr(ns, key, v)
    return ns


def _get(ns, key, default):
    v = getattr(ns, key, None)
    return default if v is None else v


def _stats_lines(sn: ShuttledNetwork) -> list[tuple[str, str]]:
    d = distance_stats(sn).as_dict()
    return [(k, f"{v:.4f}" if isinstance(v, float) else str(v)) for k, v in d.items()]


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _load_network(path: str, kind: str = "verification") -> ShuttledNetwork:
    try:
        return parse_network(Path(path).read_text(), kind=kind)
    except OSError as e:
        raise CliError(f"cannot read network {path}: {e.strerror}") from None


def _logical(ns) -> tuple[LogicalNetwork, int | None]:
    code = get_code(_get(ns, "code", "golay"))
    net = build_network(code, _get(ns, "kind", "verification"))
    return net, getattr(ns, "above", None)


def cmd_build(ns) -> str:
    net, above = _logical(ns)
    sn = shuttle_transform(net, initial_layout(net.n, net.v, above=above))
    _write(ns.out, serialize_network(sn))
    return format_report(_stats_lines(sn), _get(ns, "format", "text"))


def cmd_optimize(ns) -> str:
    start = None
    if ns.network:
        sn0 = _load_network(ns.network, _get(ns, "kind", "verification"))
        net = sn0.logical(_get(ns, "kind", "verification"))
        line = sn0.initial.line
        above = next(p for p, b in enumerate(line) if b < net.n)
        start = AnnealState(tuple(line[above:above + net.n]), tuple(sn0.movers()))
        if any(b < net.n for b in line[:above]) or any(b >= net.n for b in line[above:above + net.n]):
            raise CliError("network layout does not keep the ancilla block contiguous")
    else:
        net, above = _logical(ns)
    kw = {k: getattr(ns, k) for k in ANNEAL_KEYS if getattr(ns, k, None) is not None}
    cfg = AnnealConfig(seed=_get(ns, "seed", 0), **kw)
    chains = _get(ns, "chains", 1)
    best, results = anneal_chains(net, cfg, chains, getattr(ns, "workers", None), above, start)
    _write(ns.out, serialize_network(best.network))
    _write(ns.trace, format_trace(best.trace))
    lines = _stats_lines(best.network)
    lines += [("seed", str(best.seed)), ("chains", str(chains))]
    if chains > 1:
        lines.append(("chain_objectives", " ".join(f"{r.objective.max_s}/{r.objective.j_max}/{r.objective.rms:.4f}" for r in results)))
    return format_report(lines, _get(ns, "format", "text"))


def cmd_stats(ns) -> str:
    if not ns.network:
        raise CliError("stats needs --network")
    text = format_report(_stats_lines(_load_network(ns.network)), _get(ns, "format", "text"))
    _write(ns.out, text)
    return text


def _read_stats_mean(path: str) -> float:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read stats file {path}: {e.strerror}") from None
    for ln in text.splitlines():
        if ln.strip().startswith("mean="):
            return float(ln.split("=", 1)[1])
    raise CliError(f"stats file {path} has no 'mean=' line")


def cmd_cost(ns) -> str:
    if ns.sbar is not None:
        s_bar = ns.sbar
    elif ns.stats:
        s_bar = _read_stats_mean(ns.stats)
    elif ns.network:
        s_bar = distance_stats(_load_network(ns.network)).mean
    else:
        s_bar = 22.0
    gamma, eps = _get(ns, "gamma", 1e-4), _get(ns, "epsilon", 1e-4)
    fmt = _get(ns, "format", "text")
    swap = required_precision(CostModel(gamma, eps, model=SWAP), s_bar)
    D = getattr(ns, "D", None)
    transport = required_precision(CostModel(gamma, eps, D=D or 1.0, model=TRANSPORT), s_bar)
    params = ConcatenationParams.with_ancillas(_get(ns, "ancillas", 4))
    concat = concat_analysis(params, _get(ns, "sbar_inner", 6.0), _get(ns, "sbar_outer", s_bar), D=D)
    lines = [("swap_" + k, v) for k, v in swap.lines() if k != "note"]
    lines += [("transport_" + k, v) for k, v in transport.lines() if k not in ("note", "model", "s_bar")]
    lines.append(("models_coincide", "yes" if swap.factor == 1.0 else "no"))
    lines += [("concat_" + k, v) for k, v in concat.lines()]
    text = format_report(lines, fmt)
    _write(ns.out, text)
    return text


def cmd_render(ns) -> str:
    if ns.network:
        sn = _load_network(ns.network)
        title = Path(ns.network).name
    else:
        net, above = _logical(ns)
        sn = shuttle_transform(net, initial_layout(net.n, net.v, above=above))
        title = _get(ns, "code", "golay")
    svg = render_svg(sn, title=title)
    if ns.out:
        _write(ns.out, svg)
        return f"wrote {ns.out} ({len(sn.initial)} lines, {len(sn.gates)} gates)\n"
    return svg


COMMANDS = {"build": cmd_build, "optimize": cmd_optimize, "stats": cmd_stats, "cost": cmd_cost, "render": cmd_render}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        ns = resolve(parser, argv)
        if getattr(ns, "chains", None) is not None and ns.chains < 1:
            raise CliError("--chains must be >= 1")
        sys.stdout.write(COMMANDS[ns.command](ns))
    except (CliError, CodeError, NetworkFormatError, ValueError) as e:
        print(f"shuttleqec: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
