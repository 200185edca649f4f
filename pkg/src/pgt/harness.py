"""Experiment plumbing: exponent fits, configs, and machine-readable output.

Every "fitted exponent" in the package goes through fit_exponent (least
squares on log-log axes).  Output helpers emit CSV with a header row naming
each quantity, or JSON objects carrying a schema version.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

JSON_SCHEMA_VERSION = 1
THREADS_ENV_VAR = "PGT_THREADS"


@dataclass
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    samples: list  # (x, y) pairs as fitted

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("fit needs at least two samples")
        if not -1e-12 <= self.r_squared <= 1.0 + 1e-12:
            raise ValueError("r_squared out of [0, 1]")


def fit_exponent(samples) -> FitResult:
    """Least squares of log(magnitude) against log(scale).

    samples: iterable of (scale, magnitude), magnitudes > 0, at least two
    distinct scales.
    """
    pts = [(float(x), float(y)) for x, y in samples]
    if len(pts) < 2:
        raise ValueError("need at least two samples")
    if any(y <= 0 for _, y in pts):
        raise ValueError("magnitudes must be positive")
    if len({x for x, _ in pts}) < 2:
        raise ValueError("need at least two distinct scales")
    lx = [math.log(x) for x, _ in pts]
    ly = [math.log(y) for _, y in pts]
    n = len(pts)
    mx = sum(lx) / n
    my = sum(ly) / n
    sxx = sum((x - mx) ** 2 for x in lx)
    sxy = sum((x - mx) * (y - my) for x, y in zip(lx, ly))
    slope = sxy / sxx
    intercept = my - slope * mx
    syy = sum((y - my) ** 2 for y in ly)
    ss_res = sum((y - slope * x - intercept) ** 2 for x, y in zip(lx, ly))
    r2 = 1.0 if syy == 0 else max(0.0, 1.0 - ss_res / syy)
    return FitResult(slope=slope, intercept=intercept, r_squared=r2, samples=pts)


@dataclass
class ExperimentConfig:
    """Shared CLI run parameters; command-specific ones ride in `params`."""

    seed: int = 7
    tolerance: float = 1e-2
    threads: int = 1
    output_format: str = "json"   # "csv" or "json"
    output_path: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def parse_config_file(path: str) -> dict:
    """key=value lines; '#' comments; values kept as strings."""
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ValueError(f"malformed config line: {text!r}")
            key, _, value = text.partition("=")
            out[key.strip()] = value.strip()
    return out


def write_csv(rows: list, header: list, path: str | None = None) -> str:
    """Render rows to CSV (returns the text; writes it when path given)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def write_json(obj, path: str | None = None) -> str:
    """Render an object to versioned JSON (schema field added at top level)."""
    payload = {"schema": JSON_SCHEMA_VERSION}
    payload.update(obj)
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _json_default(value):
    from fractions import Fraction
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "pair"):
        return str(value)
    if hasattr(value, "__dict__"):
        return {k: v for k, v in vars(value).items() if not k.startswith("_")}
    raise TypeError(f"cannot serialize {type(value)}")
