"""Parameter sweeps and the eight-variant performance table.

Sweeps evaluate :func:`diqss.rates.secret_rate` over a 1-D or 2-D grid of
``eta``, ``F``, ``q`` or ``d`` (distance in km, mapped through the fiber
channel).  Rows are ordered row-major over the axes, then by variant in the
order given.  Numbers are written with 10 significant digits so output
files are stable and diff-able.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .channel import ChannelParams, global_efficiency
from .errors import DomainError
from .rates import TABLE1_VARIANTS, ProtocolConfig, Variant, secret_rate, variant_label
from .thresholds import efficiency_threshold, max_distance, noise_tolerance

AXIS_NAMES = ("eta", "F", "q", "d")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DomainError(f"axis must be one of {AXIS_NAMES}, got {self.name!r}")
        if self.num < 2:
            raise DomainError("an axis needs at least 2 points")
        if not self.start < self.stop:
            raise DomainError(f"axis {self.name}: min must be < max")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)

    @classmethod
    def parse(cls, text: str) -> Axis:
        """Parse ``name:min:max:count``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise DomainError(f"axis spec must be name:min:max:count, got {text!r}")
        name, lo, hi, num = parts
        try:
            return cls(name, float(lo), float(hi), int(num))
        except ValueError as exc:
            raise DomainError(f"bad axis spec {text!r}: {exc}") from exc


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    fidelity: float = 1.0
    eta: float = 1.0
    q: float = 0.05
    block_length: int = 2
    variants: tuple[Variant, ...] = TABLE1_VARIANTS
    channel: ChannelParams = field(default_factory=ChannelParams)

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if not 1 <= len(names) <= 2:
            raise DomainError("a sweep has one or two axes")
        if len(set(names)) != len(names):
            raise DomainError("axes must be distinct")
        if {"d", "eta"} <= set(names):
            raise DomainError("d and eta cannot both be swept: d determines eta")
        if not self.variants:
            raise DomainError("at least one variant is required")


@dataclass(frozen=True)
class SweepRow:
    axis_values: dict[str, float]
    variant: str
    rate: float
    s_value: float
    effective_qber: float


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    rows = []
    grids = [a.values() for a in spec.axes]
    for point in itertools.product(*grids):
        values = {a.name: float(v) for a, v in zip(spec.axes, point)}
        fidelity = values.get("F", spec.fidelity)
        q = values.get("q", spec.q)
        if "d" in values:
            eta = global_efficiency(values["d"], spec.channel)
        else:
            eta = values.get("eta", spec.eta)
        for variant in spec.variants:
            cfg = ProtocolConfig.for_variant(variant, fidelity, eta, q, spec.block_length)
            rep = secret_rate(cfg)
            rows.append(SweepRow(values, variant.name, rep.rate, rep.s_value, rep.effective_qber))
    return rows


def _fmt(x: float) -> str:
    return format(x, ".10g")


def _num(x: float):
    return float(_fmt(x))


def write_csv(rows: Sequence[SweepRow], out: IO[str]) -> None:
    """CSV with header ``<axes...>,variant,rate,s_value,effective_qber``."""
    axis_names = list(rows[0].axis_values) if rows else []
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([*axis_names, "variant", "rate", "s_value", "effective_qber"])
    for r in rows:
        writer.writerow(
            [*(_fmt(r.axis_values[n]) for n in axis_names), r.variant,
             _fmt(r.rate), _fmt(r.s_value), _fmt(r.effective_qber)]
        )


def rows_to_json(rows: Sequence[SweepRow]) -> list[dict]:
    return [
        {**{k: _num(v) for k, v in r.axis_values.items()}, "variant": r.variant,
         "rate": _num(r.rate), "s_value": _num(r.s_value), "effective_qber": _num(r.effective_qber)}
        for r in rows
    ]


def write_json(rows: Sequence[SweepRow], out: IO[str]) -> None:
    json.dump(rows_to_json(rows), out, indent=2)
    out.write("\n")


def sweep_to_string(rows: Sequence[SweepRow], fmt: str = "csv") -> str:
    buf = io.StringIO()
    (write_json if fmt == "json" else write_csv)(rows, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class Table1Row:
    variant: str
    label: str
    rate: float
    delta_threshold: float
    eta_threshold: float
    d_max: float
    d_reachable: bool


def table1(
    fidelity: float = 0.98,
    q: float = 0.05,
    eta: float = 0.98,
    params: ChannelParams = ChannelParams(),
    distance_fidelity: float = 1.0,
    block_length: int = 2,
) -> list[Table1Row]:
    """Rate, noise tolerance, efficiency threshold and reach for all eight variants.

    Rate and thresholds use ``fidelity``; the distance column uses
    ``distance_fidelity`` (1 by default), matching how the published table
    was assembled.  ``q`` applies to the pre-processing variants only.
    """
    rows = []
    for v in TABLE1_VARIANTS:
        cfg = ProtocolConfig.for_variant(v, fidelity, eta, q, block_length)
        dist = max_distance(distance_fidelity, q, v, block_length, params)
        rows.append(
            Table1Row(
                variant=v.name,
                label=variant_label(v),
                rate=secret_rate(cfg).rate,
                delta_threshold=noise_tolerance(fidelity, q, v, block_length),
                eta_threshold=efficiency_threshold(fidelity, q, v, block_length),
                d_max=dist.km,
                d_reachable=dist.reachable,
            )
        )
    return rows


def write_table1_csv(rows: Sequence[Table1Row], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["variant", "label", "rate", "delta_th", "eta_th", "d_max_km"])
    for r in rows:
        writer.writerow([r.variant, r.label, _fmt(r.rate), _fmt(r.delta_threshold),
                         _fmt(r.eta_threshold), _fmt(r.d_max)])


def table1_to_json(rows: Sequence[Table1Row]) -> list[dict]:
    return [
        {"variant": r.variant, "label": r.label, "rate": _num(r.rate),
         "delta_th": _num(r.delta_threshold), "eta_th": _num(r.eta_threshold),
         "d_max_km": _num(r.d_max), "d_reachable": r.d_reachable}
        for r in rows
    ]


def write_table1_json(rows: Sequence[Table1Row], out: IO[str]) -> None:
    json.dump(table1_to_json(rows), out, indent=2)
    out.write("\n")
