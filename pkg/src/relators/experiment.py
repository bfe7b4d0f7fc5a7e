"""Seeded experiment harness: Monte Carlo and exhaustive estimation of
tuple properties over the few-relator random model, with deterministic CSV
output.

Per-trial seeds are derived from (master seed, length, trial index) by
hashing, so results are reproducible and independent of the worker count;
rows are reduced in trial order.  Exhaustive mode reports exact fractions;
Monte Carlo mode reports the point estimate with a Wilson 95% interval.
Wall-clock columns default to 0 so that identical configurations produce
byte-identical CSV; timing is opt-in.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .abelian import (
    Slope,
    count_slope_classes,
    enumerate_kernel_slopes,
    enumerate_valid_slopes,
    first_betti_number,
)
from .mincond import MinConditionWitness, check_minimum_condition, tau_deficiency_one
from .novikov import injectivity_certificate
from .smallcanc import check_small_cancellation
from .words import (
    CyclicWord,
    Presentation,
    count_cyclically_reduced,
    enumerate_cyclically_reduced,
    sample_cyclically_reduced,
)

CSV_HEADER = (
    "predicate,n,m,l,mode,trials,successes,"
    "estimate_num,estimate_den_or_point,ci_lo,ci_hi,seed,wall_ms"
)

# 97.5% normal quantile, fixed to keep output byte-stable across platforms
_WILSON_Z = 1.959963984540054


@dataclass(frozen=True)
class PredicateSpec:
    """Which tuple property a run estimates.

    name: c-prime | b1 | min-condition | slope-classes | certificate
    lam:  the C'(lambda) threshold (c-prime only)
    k:    class count / truncation order (slope-classes, certificate)
    box:  slope search box (min-condition, slope-classes, certificate)
    """

    name: str
    lam: Optional[Fraction] = None
    k: Optional[int] = None
    box: int = 8

    def label(self) -> str:
        if self.name == "c-prime":
            return f"c-prime:{self.lam}"
        if self.name == "b1":
            return "b1"
        if self.name == "min-condition":
            return f"min-condition:box={self.box}"
        if self.name == "slope-classes":
            return f"slope-classes:k={self.k},box={self.box}"
        if self.name == "certificate":
            return f"certificate:k={self.k},box={self.box}"
        raise ValueError(f"unknown predicate {self.name}")

    def validate(self, n: int, m: int) -> None:
        if self.name == "c-prime":
            if self.lam is None or not (0 < self.lam <= 1):
                raise ValueError("c-prime needs 0 < lambda <= 1")
        elif self.name == "b1":
            pass
        elif self.name in ("min-condition", "certificate"):
            if m >= n:
                raise ValueError(f"{self.name} needs m < n")
            if self.box < 1:
                raise ValueError("box must be >= 1")
            if self.name == "certificate" and (self.k is None or self.k < 1):
                raise ValueError("certificate needs truncation order k >= 1")
        elif self.name == "slope-classes":
            if self.k is None or self.k < 1 or self.box < 1:
                raise ValueError("slope-classes needs k >= 1 and box >= 1")
        else:
            raise ValueError(f"unknown predicate {self.name}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    m: int
    lengths: tuple[int, ...]
    predicate: PredicateSpec
    mode: str = "monte-carlo"  # or "exhaustive"
    trials: int = 100
    seed: int = 0
    workers: int = 1
    budget: int = 1_000_000
    timing: bool = False
    out: Optional[str] = None

    def validate(self) -> None:
        if self.n < 2 or self.m < 1:
            raise ValueError("need n >= 2 and m >= 1")
        if not self.lengths or any(l < 1 for l in self.lengths):
            raise ValueError("lengths must be positive")
        if self.mode not in ("monte-carlo", "exhaustive"):
            raise ValueError(f"unknown mode {self.mode}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        self.predicate.validate(self.n, self.m)


@dataclass(frozen=True)
class ExperimentRow:
    predicate: str
    n: int
    m: int
    l: int
    mode: str
    trials: int
    successes: int
    estimate_num: Optional[int]  # exhaustive only
    estimate_den_or_point: str  # denominator, or repr(point estimate)
    ci_lo: Optional[float]
    ci_hi: Optional[float]
    seed: int
    wall_ms: int

    @property
    def estimate(self) -> Fraction | float:
        if self.estimate_num is not None:
            return Fraction(self.estimate_num, int(self.estimate_den_or_point))
        return float(self.estimate_den_or_point)

    def csv_fields(self) -> list[str]:
        return [
            self.predicate,
            str(self.n),
            str(self.m),
            str(self.l),
            self.mode,
            str(self.trials),
            str(self.successes),
            "" if self.estimate_num is None else str(self.estimate_num),
            self.estimate_den_or_point,
            "" if self.ci_lo is None else repr(self.ci_lo),
            "" if self.ci_hi is None else repr(self.ci_hi),
            str(self.seed),
            str(self.wall_ms),
        ]


def derive_seed(master: int, length: int, trial: int) -> int:
    """Stable per-trial seed from (master, length, trial), hash-based so it
    is independent of worker scheduling and platform."""
    digest = hashlib.sha256(f"{master}:{length}:{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion.

    >>> lo, hi = wilson_interval(0, 10)
    >>> lo == 0.0 and 0 < hi < 0.35
    True
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    z = _WILSON_Z
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def sample_tuple(
    n: int, m: int, length: int, rng: random.Random
) -> tuple[CyclicWord, ...]:
    """An ordered m-tuple of independent uniform cyclically reduced words."""
    return tuple(sample_cyclically_reduced(n, length, rng) for _ in range(m))


def evaluate_predicate(
    spec: PredicateSpec, n: int, relators: Sequence[CyclicWord]
) -> bool:
    m = len(relators)
    p = Presentation(n, tuple(relators))
    if spec.name == "c-prime":
        return check_small_cancellation(tuple(relators), spec.lam)[0]
    if spec.name == "b1":
        return first_betti_number(p) == max(n - m, 0)
    if spec.name == "min-condition":
        for phi in enumerate_kernel_slopes(p, spec.box, primitive_only=True):
            if isinstance(
                check_minimum_condition(tuple(relators), phi), MinConditionWitness
            ):
                return True
        return False
    if spec.name == "slope-classes":
        slopes = enumerate_valid_slopes(p, spec.box)
        if not slopes:
            return False
        count, _ = count_slope_classes(p, slopes)
        return count >= spec.k
    if spec.name == "certificate":
        for phi in enumerate_kernel_slopes(p, spec.box, primitive_only=True):
            if isinstance(
                check_minimum_condition(tuple(relators), phi), MinConditionWitness
            ):
                cert = injectivity_certificate(p, phi, spec.k)
                return (
                    cert.error_min_degree is None
                    or cert.error_min_degree >= spec.k
                )
        return False
    raise ValueError(f"unknown predicate {spec.name}")


def _run_trial(args: tuple[PredicateSpec, int, int, int, int, int]) -> bool:
    spec, n, m, length, master, trial = args
    rng = random.Random(derive_seed(master, length, trial))
    return evaluate_predicate(spec, n, sample_tuple(n, m, length, rng))


def _exhaustive_budget(n: int, m: int, length: int) -> int:
    return count_cyclically_reduced(n, length) ** m


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRow]:
    """One row per configured length; deterministic for a fixed config."""
    cfg.validate()
    rows = []
    for length in cfg.lengths:
        t0 = time.perf_counter()
        if cfg.mode == "exhaustive":
            total = _exhaustive_budget(cfg.n, cfg.m, length)
            if total > cfg.budget:
                raise ValueError(
                    f"exhaustive space {total} exceeds budget {cfg.budget}"
                )
            successes = 0
            pools = [
                list(enumerate_cyclically_reduced(cfg.n, length))
                for _ in range(cfg.m)
            ]
            for combo in itertools.product(*pools):
                if evaluate_predicate(cfg.predicate, cfg.n, combo):
                    successes += 1
            est = Fraction(successes, total)
            row = ExperimentRow(
                predicate=cfg.predicate.label(),
                n=cfg.n,
                m=cfg.m,
                l=length,
                mode=cfg.mode,
                trials=total,
                successes=successes,
                estimate_num=est.numerator,
                estimate_den_or_point=str(est.denominator),
                ci_lo=None,
                ci_hi=None,
                seed=cfg.seed,
                wall_ms=int((time.perf_counter() - t0) * 1000) if cfg.timing else 0,
            )
        else:
            tasks = [
                (cfg.predicate, cfg.n, cfg.m, length, cfg.seed, t)
                for t in range(cfg.trials)
            ]
            if cfg.workers > 1:
                with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                    outcomes = list(pool.map(_run_trial, tasks, chunksize=16))
            else:
                outcomes = [_run_trial(t) for t in tasks]
            successes = sum(outcomes)
            lo, hi = wilson_interval(successes, cfg.trials)
            row = ExperimentRow(
                predicate=cfg.predicate.label(),
                n=cfg.n,
                m=cfg.m,
                l=length,
                mode=cfg.mode,
                trials=cfg.trials,
                successes=successes,
                estimate_num=None,
                estimate_den_or_point=repr(successes / cfg.trials),
                ci_lo=lo,
                ci_hi=hi,
                seed=cfg.seed,
                wall_ms=int((time.perf_counter() - t0) * 1000) if cfg.timing else 0,
            )
        rows.append(row)
    return rows


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


@dataclass(frozen=True)
class TauCountResult:
    """Exact counting data for the commutator-insertion map at one length:
    all (n-1)-tuples R_l, the Betti-1 subset R'_l, the tau image size
    (= |R'_l| iff tau is injective), and the ratio |image| / |R_{l+4}| —
    a lower bound on the minimum-condition fraction at length l+4."""

    n: int
    l: int
    r_count: int
    r_prime_count: int
    tau_image_count: int
    r_count_extended: int  # |R_{l+4}|

    @property
    def injective(self) -> bool:
        return self.tau_image_count == self.r_prime_count

    @property
    def image_fraction(self) -> Fraction:
        return Fraction(self.tau_image_count, self.r_count_extended)


def tau_count(n: int, length: int, budget: int = 1_000_000) -> TauCountResult:
    """Enumerate all (n-1)-tuples of cyclically reduced length-l words,
    filter to first Betti number 1, push through tau_deficiency_one, and
    count the image exactly."""
    m = n - 1
    total = count_cyclically_reduced(n, length) ** m
    if total > budget:
        raise ValueError(f"exhaustive space {total} exceeds budget {budget}")
    pools = [list(enumerate_cyclically_reduced(n, length)) for _ in range(m)]
    r_count = 0
    r_prime = 0
    image = set()
    for combo in itertools.product(*pools):
        r_count += 1
        if first_betti_number(Presentation(n, combo)) != 1:
            continue
        r_prime += 1
        image.add(tau_deficiency_one(combo, n))
    return TauCountResult(
        n=n,
        l=length,
        r_count=r_count,
        r_prime_count=r_prime,
        tau_image_count=len(image),
        r_count_extended=count_cyclically_reduced(n, length + 4) ** m,
    )


# -- config file: `key = value` lines, '#' comments --------------------

_CONFIG_KEYS = {
    "n",
    "m",
    "lengths",
    "trials",
    "seed",
    "mode",
    "predicate",
    "lambda",
    "k",
    "box",
    "workers",
    "budget",
    "timing",
    "out",
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the simple key-value config format, e.g.::

        predicate = c-prime
        lambda = 1/6
        n = 2
        m = 1
        lengths = 50, 100, 200
        trials = 500
        seed = 7
    """
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip().lower()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        values[key] = val.strip()
    for required in ("n", "m", "lengths", "predicate"):
        if required not in values:
            raise ValueError(f"config is missing {required!r}")
    spec = PredicateSpec(
        name=values["predicate"],
        lam=Fraction(values["lambda"]) if "lambda" in values else None,
        k=int(values["k"]) if "k" in values else None,
        box=int(values.get("box", 8)),
    )
    return ExperimentConfig(
        n=int(values["n"]),
        m=int(values["m"]),
        lengths=tuple(int(x) for x in values["lengths"].split(",") if x.strip()),
        predicate=spec,
        mode=values.get("mode", "monte-carlo"),
        trials=int(values.get("trials", 100)),
        seed=int(values.get("seed", 0)),
        workers=int(values.get("workers", 1)),
        budget=int(values.get("budget", 1_000_000)),
        timing=values.get("timing", "false").lower() in ("1", "true", "yes"),
        out=values.get("out"),
    )
