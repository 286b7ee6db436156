"""Precision budgets for swap-based versus transport-based communication.

A gate between qubits ``s`` sites apart is taken to cost ``1 + s/D`` times a
neighbour gate.  Nearest-neighbour swapping is the case ``D = 1``; moving the
qubits themselves is ``D >> 1``.  Everything here is closed-form arithmetic;
the "of order" estimates are evaluated as exact expressions and only rounded
for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SWAP, TRANSPORT = "swap", "transport"
ORDER_CAVEAT = "order-of-magnitude estimate"


def round_sig(x: float, digits: int = 1) -> float:
    """Round to ``digits`` significant figures (22 -> 20, 9.71 -> 10)."""
    if x == 0:
        return 0.0
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


def _fmt_sig(x: float) -> str:
    r = round_sig(x)
    return str(int(r)) if r == int(r) else f"{r:g}"


@dataclass(frozen=True)
class CostModel:
    gamma: float = 1e-4
    epsilon: float = 1e-4
    D: float = 1.0
    model: str = SWAP
    t_m_ratio: float = 25.0

    def __post_init__(self):
        if not 0 < self.gamma < 1 or not 0 < self.epsilon < 1:
            raise ValueError("gamma and epsilon must lie in (0, 1)")
        if self.D < 1:
            raise ValueError("D must be >= 1")
        if self.t_m_ratio < 0:
            raise ValueError("t_m_ratio must be non-negative")
        if self.model not in (SWAP, TRANSPORT):
            raise ValueError(f"model must be {SWAP!r} or {TRANSPORT!r}")

    @property
    def distance_scale(self) -> float:
        return 1.0 if self.model == SWAP else self.D


def gate_noise_factor(s: float, cm: CostModel) -> float:
    """Relative cost ``1 + s/D`` of a gate across ``s`` intervening sites."""
    if s < 0:
        raise ValueError("separation must be >= 0")
    return 1.0 + s / cm.distance_scale


@dataclass(frozen=True)
class PrecisionReport:
    model: str
    s_bar: float
    gate_precision: float
    memory_precision: float
    factor: float

    @property
    def headline_factor(self) -> str:
        return _fmt_sig(self.factor)

    def lines(self) -> list[tuple[str, str]]:
        return [
            ("model", self.model),
            ("s_bar", f"{self.s_bar:g}"),
            ("gate_precision", f"{self.gate_precision:.3g}"),
            ("memory_precision", f"{self.memory_precision:.3g}"),
            ("factor", f"{self.factor:g}"),
            ("factor_headline", f"~{self.headline_factor}"),
            ("note", ORDER_CAVEAT),
        ]


def required_precision(cm: CostModel, s_bar: float) -> PrecisionReport:
    """Per-operation noise needed once communication over ``s_bar`` sites is paid.

    Swap model: ``(gamma / s_bar, epsilon / s_bar)``; transport model leaves
    both unchanged.  ``factor`` is how much more precise a swap has to be than
    a transported-qubit gate, i.e. ``s_bar`` for the swap model and 1
    otherwise.
    """
    if not s_bar > 0:
        raise ValueError("mean separation must be positive")
    if cm.model == SWAP:
        return PrecisionReport(SWAP, s_bar, cm.gamma / s_bar, cm.epsilon / s_bar, float(s_bar))
    return PrecisionReport(TRANSPORT, s_bar, cm.gamma, cm.epsilon, 1.0)


@dataclass(frozen=True)
class ConcatenationParams:
    """Golay-inside-BCH layout multipliers."""

    inner_block: int = 23
    ancillas_per_block: int = 4
    vertical_multiplier: int = 5
    horizontal_multiplier: int = 23
    outer_ancilla_transport: float = 2.0
    inner_t: int = 3
    min_ancillas_per_block: int = 2

    def __post_init__(self):
        if self.vertical_multiplier != self.ancillas_per_block + 1:
            raise ValueError("vertical_multiplier must equal ancillas_per_block + 1")
        if not 1 <= self.min_ancillas_per_block <= self.ancillas_per_block:
            raise ValueError("min_ancillas_per_block must be in 1..ancillas_per_block")
        if self.inner_t < 0 or self.inner_block < 1:
            raise ValueError("inner_t must be >= 0 and inner_block >= 1")

    @classmethod
    def with_ancillas(cls, ancillas: int, **kw) -> "ConcatenationParams":
        return cls(ancillas_per_block=ancillas, vertical_multiplier=ancillas + 1, **kw)


@dataclass(frozen=True)
class ConcatReport:
    inner_range: tuple[float, float]
    vertical_range: tuple[float, float]
    horizontal_mean: float
    attenuation_exponent: float
    attenuated_outer: float
    overall_range: tuple[float, float]
    D: float | None
    D_threshold: float

    @property
    def transport_ok(self) -> bool | None:
        return None if self.D is None else self.D > self.D_threshold

    def lines(self) -> list[tuple[str, str]]:
        lo, hi = self.overall_range
        out = [
            ("inner_swap_factor", f"{self.inner_range[0]:g} .. {self.inner_range[1]:g}"),
            ("outer_vertical_separation", f"{self.vertical_range[0]:g} .. {self.vertical_range[1]:g}"),
            ("outer_horizontal_mean", f"{self.horizontal_mean:g}"),
            ("outer_reduction_root", f"{self.vertical_range[1]:g}^{self.attenuation_exponent:g} = {self.attenuated_outer:.2f}"),
            ("overall_factor", f"{lo:.2f} .. {hi:.2f}"),
            ("overall_factor_headline", f"~{_fmt_sig(lo)} to {_fmt_sig(hi)}"),
        ]
        if self.D is not None:
            verdict = "ok" if self.transport_ok else "VIOLATED"
            out.append(("transport_D", f"{self.D:g} (needs D > {self.D_threshold:g}: {verdict})"))
        out.append(("note", ORDER_CAVEAT))
        return out


def concat_analysis(
    p: ConcatenationParams,
    s_bar_inner: float,
    s_bar_outer: float,
    inner_lower: float = 3.0,
    horizontal_residual: float = 4.0,
    D: float | None = None,
    D_threshold: float = 40.0,
) -> ConcatReport:
    """Swap-versus-transport precision factor for a concatenated code.

    ``s_bar_inner`` and ``s_bar_outer`` are the mean separations of the inner
    (Golay) and outer (BCH) verification networks.  Vertical outer distances
    scale with the number of stacked inner lines, horizontal ones with the
    inner block size.  Because the inner code corrects ``inner_t`` errors, an
    outer noise reduction ``F`` needs only ``F**(1/(inner_t+1))`` at the
    physical level.
    """
    if min(s_bar_inner, s_bar_outer) <= 0:
        raise ValueError("mean separations must be positive")
    inner = (float(inner_lower), float(s_bar_inner))
    vertical = ((p.min_ancillas_per_block + 1) * s_bar_outer, p.vertical_multiplier * s_bar_outer)
    horizontal = p.horizontal_multiplier * p.outer_ancilla_transport + horizontal_residual
    expo = 1.0 / (p.inner_t + 1)
    att = vertical[1] ** expo
    return ConcatReport(
        inner_range=inner,
        vertical_range=vertical,
        horizontal_mean=horizontal,
        attenuation_exponent=expo,
        attenuated_outer=att,
        overall_range=(inner[0] * att, inner[1] * att),
        D=D,
        D_threshold=D_threshold,
    )


def recovery_time_estimate(
    depth_G: int,
    depth_H: int,
    cm: CostModel,
    repetitions: int = 1,
    coupling_depth: int = 1,
) -> float:
    """Duration of one serialized recovery in units of a controlled-gate time.

    ``(depth_G + depth_H + t_m + coupling_depth) * repetitions``: a linear
    estimate that ignores parallel ancilla preparation.
    """
    if depth_G < 1 or depth_H < 1 or repetitions < 1 or coupling_depth < 0:
        raise ValueError("depths and repetitions must be >= 1")
    return float((depth_G + depth_H + cm.t_m_ratio + coupling_depth) * repetitions)


def format_report(lines: list[tuple[str, str]], fmt: str = "text") -> str:
    if fmt == "kv":
        return "\n".join(f"{k}={v}" for k, v in lines) + "\n"
    width = max(len(k) for k, _ in lines)
    return "\n".join(f"{k.replace('_', ' '):<{width}}  {v}" for k, v in lines) + "\n"
