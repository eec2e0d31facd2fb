"""
Event counters, checkpoint snapshots and their on-disk form.

A run writes one CSV row per checkpoint plus a JSON sidecar (<csv>.json)
with everything needed to rebuild the scenario and the sequence. The exact
byte layout is documented in CHECKPOINT_FORMAT.md.
"""

import csv
import json
import os
import time
from dataclasses import dataclass, field, fields, asdict
from typing import Optional

from states.rmt import Scenario

CSV_HEADER = (
    "scenario", "n", "total", "skipped", "ppt", "ppt_det_greater",
    "realign_entangled", "bound_entangled", "p_ppt", "det_greater_frac",
    "conjecture_ratio", "unix_time",
)
SIDECAR_SUFFIX = ".json"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Checkpoint file is missing, empty, malformed or for another scenario."""


@dataclass(frozen=True)
class Counters:
    """
    Additive tallies; n_total counts classified samples, n_skipped the rest.

    realign marks counters that include the realignment test; without it the
    realignment fractions are None.
    """
    n_total: int = 0
    n_skipped: int = 0
    n_ppt: int = 0
    n_ppt_det_greater: int = 0
    n_realign_entangled: int = 0
    n_bound_entangled: int = 0
    realign: bool = False

    def __add__(self, other):
        return merge(self, other)

    @property
    def n_indices(self):
        return self.n_total + self.n_skipped

    @property
    def p_ppt(self):
        return self.n_ppt / self.n_total if self.n_total else None

    @property
    def det_greater_frac(self):
        return self.n_ppt_det_greater / self.n_ppt if self.n_ppt else None

    @property
    def realign_frac(self):
        if not self.realign or not self.n_total:
            return None
        return self.n_realign_entangled / self.n_total

    @property
    def bound_frac(self):
        if not self.realign or not self.n_total:
            return None
        return self.n_bound_entangled / self.n_total


def merge(a, b):
    """Component-wise sum of two Counters; realign holds if either side applied it."""
    tallies = {f.name: getattr(a, f.name) + getattr(b, f.name) for f in fields(Counters) if f.name != "realign"}
    return Counters(**tallies, realign=a.realign or b.realign)


def _format_float(value):
    return "" if value is None else repr(float(value))


@dataclass(frozen=True)
class Checkpoint:
    """Cumulative counters at sequence index n, with derived probabilities."""
    scenario_id: str
    n: int
    counters: Counters
    realign: bool = False
    conjecture_value: Optional[float] = None
    unix_time: float = field(default_factory=time.time)

    @property
    def p_ppt(self):
        return self.counters.p_ppt

    @property
    def det_greater_frac(self):
        return self.counters.det_greater_frac

    @property
    def realign_frac(self):
        return self.counters.realign_frac

    @property
    def bound_frac(self):
        return self.counters.bound_frac

    @property
    def conjecture_ratio(self):
        if self.conjecture_value is None or self.p_ppt is None:
            return None
        return self.p_ppt / self.conjecture_value

    def to_row(self):
        c = self.counters
        return [
            self.scenario_id,
            str(self.n),
            str(c.n_total),
            str(c.n_skipped),
            str(c.n_ppt),
            str(c.n_ppt_det_greater),
            str(c.n_realign_entangled) if self.realign else "",
            str(c.n_bound_entangled) if self.realign else "",
            _format_float(self.p_ppt),
            _format_float(self.det_greater_frac),
            _format_float(self.conjecture_ratio),
            f"{self.unix_time:.3f}",
        ]

    @classmethod
    def from_row(cls, row, conjecture_value=None):
        if len(row) != len(CSV_HEADER):
            raise CheckpointError(f"expected {len(CSV_HEADER)} columns, got {len(row)}")
        try:
            realign = row[6] != ""
            counters = Counters(
                n_total=int(row[2]),
                n_skipped=int(row[3]),
                n_ppt=int(row[4]),
                n_ppt_det_greater=int(row[5]),
                n_realign_entangled=int(row[6]) if realign else 0,
                n_bound_entangled=int(row[7]) if realign else 0,
                realign=realign,
            )
            return cls(
                scenario_id=row[0],
                n=int(row[1]),
                counters=counters,
                realign=realign,
                conjecture_value=conjecture_value,
                unix_time=float(row[11]),
            )
        except ValueError as e:
            raise CheckpointError(f"malformed checkpoint row {row!r}: {e}") from e


def sidecar_path(csv_path):
    return csv_path + SIDECAR_SUFFIX


def write_sidecar(csv_path, params):
    """Write the run parameters next to the CSV, keys sorted for stable bytes."""
    payload = dict(params, format_version=FORMAT_VERSION)
    with open(sidecar_path(csv_path), "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def read_sidecar(csv_path):
    path = sidecar_path(csv_path)
    if not os.path.exists(path):
        raise CheckpointError(f"sidecar not found: {path}")
    try:
        with open(path, "r") as f:
            params = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"unreadable sidecar {path}: {e}") from e
    missing = [k for k in ("scenario", "n_a", "n_b", "field", "measure", "d", "alpha0")
               if k not in params]
    if missing:
        raise CheckpointError(f"sidecar {path} lacks {', '.join(missing)}")
    return params


def scenario_params(scenario):
    return asdict(scenario)


def scenario_from_params(params):
    try:
        return Scenario(
            n_a=int(params["n_a"]),
            n_b=int(params["n_b"]),
            field=params["field"],
            measure=params["measure"],
            k=int(params.get("k", 0)),
            x=float(params.get("x", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"sidecar scenario is invalid: {e}") from e


class CheckpointWriter:
    """
    Serialized writer for one run's CSV.

    A fresh writer truncates the CSV and writes the header; append=True keeps
    existing rows (resume). The sidecar is (re)written either way, and again
    after every row so its n_end is always the last index reached.
    """

    def __init__(self, csv_path, params, append=False):
        self.csv_path = csv_path
        self.params = dict(params)
        directory = os.path.dirname(os.path.abspath(csv_path))
        os.makedirs(directory, exist_ok=True)
        write_sidecar(csv_path, self.params)
        if not append:
            with open(csv_path, "w", newline="") as f:
                csv.writer(f, lineterminator="\n").writerow(CSV_HEADER)

    def append(self, checkpoint):
        with open(self.csv_path, "a", newline="") as f:
            csv.writer(f, lineterminator="\n").writerow(checkpoint.to_row())
        self.params["n_end"] = checkpoint.n
        write_sidecar(self.csv_path, self.params)


def read_checkpoints(csv_path):
    """All rows of a checkpoint CSV as Checkpoint objects (header checked)."""
    if not os.path.exists(csv_path):
        raise CheckpointError(f"checkpoint file not found: {csv_path}")
    with open(csv_path, "r", newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise CheckpointError(f"checkpoint file is empty: {csv_path}")
    if tuple(rows[0]) != CSV_HEADER:
        raise CheckpointError(f"unexpected header in {csv_path}: {rows[0]!r}")
    return [Checkpoint.from_row(row) for row in rows[1:] if row]


@dataclass(frozen=True)
class ResumePoint:
    scenario_id: str
    scenario: Scenario
    params: dict
    n: int
    counters: Counters


def resume(csv_path, expected_scenario=None):
    """
    Read the last checkpoint of a run so it can continue from index n.

    :param expected_scenario: scenario id the caller intends to run; a
                              different id in the file is an error
    """
    checkpoints = read_checkpoints(csv_path)
    if not checkpoints:
        raise CheckpointError(f"no checkpoint rows in {csv_path}")
    params = read_sidecar(csv_path)
    last = checkpoints[-1]

    if last.scenario_id != params["scenario"]:
        raise CheckpointError(
            f"CSV scenario {last.scenario_id!r} does not match sidecar {params['scenario']!r}"
        )
    if expected_scenario is not None and expected_scenario != last.scenario_id:
        raise CheckpointError(
            f"checkpoint is for {last.scenario_id!r}, not {expected_scenario!r}"
        )

    return ResumePoint(
        scenario_id=last.scenario_id,
        scenario=scenario_from_params(params),
        params=params,
        n=last.n,
        counters=last.counters,
    )
