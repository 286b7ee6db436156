"""Shuttled form of a logical network on a linear array of qubits.

Every two-bit gate is realised by transporting one of its bits (the *mover*)
until it sits next to the other (the *stationary* bit); the bits in between
slide one place back toward where the mover came from, like a shift register.
The separation ``s`` of a gate is the number of bits between its two qubits
just before the transport, so neighbours have ``s = 0``.

Gates within one time step are physically simultaneous, but positions need a
definite order to be well defined.  They are applied in ascending order of
the stationary bit's position at the start of the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .schedule import LogicalNetwork

ROW, COL = 0, 1
MOVER_CODES = {ROW: "R", COL: "C"}
MOVER_FROM_CODE = {"R": ROW, "C": COL}
FORMAT_HEADER = "qec-shuttle v1"


class NetworkFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Layout:
    """Which logical bit sits at each position of the line."""

    line: tuple[int, ...]

    def __post_init__(self):
        line = tuple(int(b) for b in self.line)
        if sorted(line) != list(range(len(line))):
            raise ValueError("layout must be a permutation of the logical bits")
        object.__setattr__(self, "line", line)

    def __len__(self) -> int:
        return len(self.line)

    def positions(self) -> list[int]:
        """``positions()[bit]`` is the position of ``bit``."""
        pos = [0] * len(self.line)
        for p, b in enumerate(self.line):
            pos[b] = p
        return pos


def initial_layout(n: int, v: int = 0, order=None, above: int | None = None) -> Layout:
    """Ancilla bits in the centre, verification bits split around them.

    ``order[p]`` is the ancilla bit placed at the p-th central position
    (default: identity).  Verification bits ``n..n+v-1`` go in index order,
    ``above`` of them (default ``ceil(v / 2)``) before the ancilla block and
    the rest after it.
    """
    order = list(range(n)) if order is None else [int(b) for b in order]
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of the {n} ancilla bits")
    if above is None:
        above = math.ceil(v / 2)
    if not 0 <= above <= v:
        raise ValueError(f"cannot place {above} of {v} verification bits above the ancilla")
    verif = list(range(n, n + v))
    return Layout(tuple(verif[:above] + order + verif[above:]))


@dataclass(frozen=True)
class ShuttledGate:
    step: int
    row_bit: int
    col_bit: int
    mover: int
    s: int

    @property
    def moving_bit(self) -> int:
        return self.row_bit if self.mover == ROW else self.col_bit

    @property
    def stationary_bit(self) -> int:
        return self.col_bit if self.mover == ROW else self.row_bit


@dataclass(frozen=True)
class ShuttledNetwork:
    """Gates in the order they are applied, plus start and end layouts."""

    n: int
    v: int
    gates: tuple[ShuttledGate, ...]
    initial: Layout
    final: Layout

    def separations(self) -> np.ndarray:
        return np.array([g.s for g in self.gates], dtype=np.int64)

    def logical(self, kind: str = "verification") -> LogicalNetwork:
        return LogicalNetwork(tuple((g.step, g.row_bit, g.col_bit) for g in self.gates), self.n, self.v, kind)

    def movers(self) -> list[int]:
        """Mover choices indexed like ``self.logical().gates``."""
        by_gate = {(g.step, g.row_bit, g.col_bit): g.mover for g in self.gates}
        return [by_gate[g] for g in self.logical().gates]


def _apply_transport(line: list[int], pos: list[int], mover: int, stationary: int) -> int:
    """Move ``mover`` next to ``stationary`` in place and return the separation."""
    pm, ps = pos[mover], pos[stationary]
    s = abs(pm - ps) - 1
    if pm < ps:
        # bits pm+1..ps-1 slide down, mover lands on ps-1
        line[pm:ps - 1] = line[pm + 1:ps]
        line[ps - 1] = mover
        lo, hi = pm, ps
    else:
        line[ps + 2:pm + 1] = line[ps + 1:pm]
        line[ps + 1] = mover
        lo, hi = ps + 1, pm + 1
    for p in range(lo, hi):
        pos[line[p]] = p
    return s


def _mover_code(m) -> int:
    if isinstance(m, str):
        if m not in MOVER_FROM_CODE:
            raise ValueError(f"mover code {m!r} is not R or C")
        return MOVER_FROM_CODE[m]
    if m in (ROW, COL):
        return int(m)
    raise ValueError(f"mover {m!r} is not ROW/COL or 'R'/'C'")


def movers_from_bits(net: LogicalNetwork, bits) -> list[int]:
    """Translate per-gate moving-bit ids into ROW/COL choices."""
    out = []
    for (t, r, c), b in zip(net.gates, bits):
        if b == r:
            out.append(ROW)
        elif b == c:
            out.append(COL)
        else:
            raise ValueError(f"bit {b} is not part of gate {(t, r, c)}")
    return out


def shuttle_transform(net: LogicalNetwork, layout: Layout, movers=None) -> ShuttledNetwork:
    """Replay ``net`` on ``layout`` with the given mover choice per gate.

    ``movers[g]`` refers to ``net.gates[g]`` and is ``ROW``/``COL`` or the
    codes ``"R"``/``"C"`` (see :func:`movers_from_bits` for bit ids).  By
    default the row bit moves.
    """
    if len(layout) != net.n_bits:
        raise ValueError(f"layout has {len(layout)} positions, network has {net.n_bits} bits")
    movers = [ROW] * len(net) if movers is None else list(movers)
    if len(movers) != len(net):
        raise ValueError(f"{len(movers)} mover choices for {len(net)} gates")
    choice = [_mover_code(m) for m in movers]
    line = list(layout.line)
    pos = layout.positions()
    out: list[ShuttledGate] = []
    i = 0
    gates = net.gates
    while i < len(gates):
        step = gates[i][0]
        j = i
        while j < len(gates) and gates[j][0] == step:
            j += 1
        block = []
        for g in range(i, j):
            _, r, c = gates[g]
            stat = c if choice[g] == ROW else r
            block.append((pos[stat], g))
        block.sort()
        for _, g in block:
            t, r, c = gates[g]
            mov, stat = (r, c) if choice[g] == ROW else (c, r)
            s = _apply_transport(line, pos, mov, stat)
            out.append(ShuttledGate(t, r, c, choice[g], s))
        i = j
    return ShuttledNetwork(net.n, net.v, tuple(out), layout, Layout(tuple(line)))


@dataclass(frozen=True)
class DistanceStats:
    n_gates: int
    mean: float
    median: int
    maximum: int
    rms: float
    j_max: int
    parallelism: tuple[int, ...]

    @property
    def first_step(self) -> int:
        return self.parallelism[0]

    @property
    def steady(self) -> int:
        """Most common gate count after the first step (largest on ties)."""
        rest = self.parallelism[1:] or self.parallelism
        counts = np.bincount(rest)
        return int(np.flatnonzero(counts == counts.max())[-1])

    def as_dict(self) -> dict:
        return {
            "gates": self.n_gates,
            "mean": self.mean,
            "median": self.median,
            "max": self.maximum,
            "rms": self.rms,
            "j_max": self.j_max,
            "depth": len(self.parallelism),
            "first_step": self.first_step,
            "steady": self.steady,
            "parallelism": " ".join(map(str, self.parallelism)),
        }


def stats_from_separations(s, steps) -> DistanceStats:
    s = np.asarray(s, dtype=np.int64)
    if s.size == 0:
        raise ValueError("distance statistics of an empty network are undefined")
    srt = np.sort(s)
    mx = int(srt[-1])
    steps = np.asarray(steps, dtype=np.int64)
    par = np.bincount(steps, minlength=int(steps.max()) + 1)[1:]
    return DistanceStats(
        n_gates=int(s.size),
        mean=float(s.mean()),
        median=int(srt[(s.size - 1) // 2]),
        maximum=mx,
        rms=float(np.sqrt(np.mean(s.astype(np.float64) ** 2))),
        j_max=int(np.count_nonzero(s == mx)),
        parallelism=tuple(int(x) for x in par),
    )


def distance_stats(sn: ShuttledNetwork) -> DistanceStats:
    """Mean, lower median, max, rms and count-at-max of the gate separations."""
    if not sn.gates:
        raise ValueError("distance statistics of an empty network are undefined")
    return stats_from_separations([g.s for g in sn.gates], [g.step for g in sn.gates])


def serialize_network(sn: ShuttledNetwork) -> str:
    lines = [
        FORMAT_HEADER,
        f"bits {sn.n} {sn.v}",
        "layout " + " ".join(map(str, sn.initial.line)),
        "# step row_bit col_bit mover s",
    ]
    lines += [f"{g.step} {g.row_bit} {g.col_bit} {MOVER_CODES[g.mover]} {g.s}" for g in sn.gates]
    return "\n".join(lines) + "\n"


def parse_network(text: str, kind: str = "verification") -> ShuttledNetwork:
    """Inverse of :func:`serialize_network`.

    The network is replayed from the stored layout and movers; a stored
    separation that disagrees with the replay is an error.
    """
    body = []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if ln:
            body.append(ln)
    if not body or body[0] != FORMAT_HEADER:
        raise NetworkFormatError(f"missing header {FORMAT_HEADER!r}")
    try:
        tag, n, v = body[1].split()
        if tag != "bits":
            raise ValueError
        n, v = int(n), int(v)
        tag, *ids = body[2].split()
        if tag != "layout":
            raise ValueError
        layout = Layout(tuple(int(x) for x in ids))
    except (ValueError, IndexError) as e:
        raise NetworkFormatError(f"bad bits/layout lines: {e}") from None
    if len(layout) != n + v:
        raise NetworkFormatError(f"layout has {len(layout)} entries, expected {n + v}")
    gates, movers, stored = [], {}, {}
    for ln in body[3:]:
        parts = ln.split()
        if len(parts) != 5 or parts[3] not in MOVER_FROM_CODE:
            raise NetworkFormatError(f"bad gate line {ln!r}")
        t, r, c, s = int(parts[0]), int(parts[1]), int(parts[2]), int(parts[4])
        gates.append((t, r, c))
        movers[(t, r, c)] = MOVER_FROM_CODE[parts[3]]
        stored[(t, r, c)] = s
    if not gates:
        raise NetworkFormatError("network file has no gates")
    try:
        net = LogicalNetwork(tuple(gates), n=n, v=v, kind=kind)
    except ValueError as e:
        raise NetworkFormatError(str(e)) from None
    sn = shuttle_transform(net, layout, [movers[g] for g in net.gates])
    for g in sn.gates:
        if stored[(g.step, g.row_bit, g.col_bit)] != g.s:
            raise NetworkFormatError(
                f"gate {(g.step, g.row_bit, g.col_bit)}: stored s={stored[(g.step, g.row_bit, g.col_bit)]}, replay gives {g.s}"
            )
    return sn


def render_svg(sn: ShuttledNetwork, title: str | None = None) -> str:
    """Shuttled network as an SVG document.

    One horizontal line per position, one gate glyph per gate drawn at its
    step (gates of one step are fanned out slightly in serialization order).
    Each glyph is a vertical bar from the mover's starting position to the
    stationary bit with an arrowhead on the mover end pointing toward the
    direction of travel.
    """
    nlines = len(sn.initial)
    depth = max(g.step for g in sn.gates)
    per_step = np.bincount([g.step for g in sn.gates], minlength=depth + 1)
    dy, margin = 12.0, 40.0
    sub = 6.0
    col_w = max(30.0, sub * (int(per_step.max()) + 1))
    width = margin * 2 + col_w * depth
    height = margin * 2 + dy * (nlines - 1)
    verif = set(range(sn.n, sn.n + sn.v))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"5\" "
        "markerHeight=\"5\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>",
    ]
    if title:
        out.append(f'<title>{title}</title>')
    out.append('<g class="qubit-lines" stroke="#999" stroke-width="0.5">')
    for p in range(nlines):
        y = margin + p * dy
        out.append(f'<line class="qubit" x1="{margin - 10:.1f}" y1="{y:.1f}" x2="{width - margin + 10:.1f}" y2="{y:.1f}"/>')
    out.append("</g>")
    out.append('<g class="initial-labels" font-size="7" font-family="monospace" text-anchor="end">')
    for p, b in enumerate(sn.initial.line):
        colour = "#b8860b" if b in verif else "#2e8b57"
        out.append(f'<text x="{margin - 12:.1f}" y="{margin + p * dy + 2.5:.1f}" fill="{colour}">{b}</text>')
    out.append("</g>")

    line = list(sn.initial.line)
    pos = sn.initial.positions()
    k_in_step: dict[int, int] = {}
    out.append('<g class="gates" stroke="black" stroke-width="1">')
    for g in sn.gates:
        k = k_in_step.get(g.step, 0)
        k_in_step[g.step] = k + 1
        x = margin + (g.step - 1) * col_w + sub * (k + 0.5)
        pm, ps = pos[g.moving_bit], pos[g.stationary_bit]
        y_from = margin + pm * dy
        y_to = margin + (ps - 1 if pm < ps else ps + 1) * dy
        ys = margin + ps * dy
        out.append(
            f'<g class="gate" data-step="{g.step}" data-s="{g.s}">'
            f'<line x1="{x:.1f}" y1="{y_from:.1f}" x2="{x:.1f}" y2="{ys:.1f}" stroke-opacity="0.35"/>'
            f'<line x1="{x:.1f}" y1="{y_from:.1f}" x2="{x:.1f}" y2="{y_to:.1f}" marker-end="url(#arrow)"/>'
            f'<circle cx="{x:.1f}" cy="{ys:.1f}" r="1.8"/></g>'
        )
        _apply_transport(line, pos, g.moving_bit, g.stationary_bit)
    out.append("</g>")
    out.append('<g class="step-labels" font-size="8" font-family="sans-serif" text-anchor="middle">')
    for t in range(1, depth + 1):
        out.append(f'<text x="{margin + (t - 0.5) * col_w:.1f}" y="{height - margin / 3:.1f}">{t}</text>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"
