"""Radar geometry, sum-range measurements and the noise generators.

A scene is M transmitters, N receivers and one target in a 2-D plane, all in
meters.  The observable is the M*N vector of sum-ranges (transmitter -> target
-> receiver path lengths).  Entry k = M*(j-1) + i holds the measurement for
transmitter i and receiver j (both 1-based), i.e. the vector stacks the
transmitter index fastest.

All random generation runs through numpy's Philox counter-based generator so
that a (seed, path) pair maps to the same stream on every platform.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError, DegenerateGeometry, PatternMismatch, TargetMissing

GENERATOR_NAME = "numpy-philox4x64-10/seedsequence"


def substream(*keys):
    """Deterministic RNG for an integer key path, e.g. (master, level, trial)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in keys])))


def derive_seed(*keys):
    """Fold an integer key path into a single 64-bit seed."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, np.uint64)[0])


def _as_points(value, name):
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ConfigError(name, f"expected a non-empty list of 2-D points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(name, "coordinates must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ScenarioGeometry:
    """Transmitter/receiver/target positions in meters.

    The target is optional; it is absent when only estimating.  Target-antenna
    coincidence and the M*N >= 3 solvability requirement are enforced by the
    operations that need them, not at construction.
    """

    transmitters: np.ndarray
    receivers: np.ndarray
    target: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "transmitters", _as_points(self.transmitters, "transmitters"))
        object.__setattr__(self, "receivers", _as_points(self.receivers, "receivers"))
        if self.target is not None:
            tgt = np.asarray(self.target, dtype=float).reshape(-1)
            if tgt.shape != (2,) or not np.all(np.isfinite(tgt)):
                raise ConfigError("target", "expected a finite 2-D point")
            tgt.flags.writeable = False
            object.__setattr__(self, "target", tgt)

    @property
    def m(self):
        return self.transmitters.shape[0]

    @property
    def n(self):
        return self.receivers.shape[0]

    def antenna_distances(self, point):
        """Distances from `point` to every antenna, transmitters first."""
        antennas = np.vstack([self.transmitters, self.receivers])
        return np.linalg.norm(antennas - np.asarray(point, dtype=float), axis=1)


@dataclass(frozen=True)
class MeasurementSet:
    """Length-M*N vector of sum-ranges with its (m, n) shape.

    Index convention: values[m*(j-1) + (i-1)] belongs to transmitter i and
    receiver j, 1-based.
    """

    values: np.ndarray
    m: int
    n: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.shape != (self.m * self.n,):
            raise ConfigError("values", f"expected length {self.m * self.n}, got {vals.shape[0]}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def entry_index(self, i, j):
        """Flat index of the (transmitter i, receiver j) entry, 1-based."""
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise PatternMismatch(f"entry ({i}, {j}) outside a {self.m}x{self.n} scene")
        return self.m * (j - 1) + (i - 1)

    def as_matrix(self):
        """(n, m) view: row j-1 is receiver j, column i-1 is transmitter i."""
        return self.values.reshape(self.n, self.m)


class NoiseKind(Enum):
    GAUSSIAN = "gaussian"
    NLOS_EXPONENTIAL = "nlos_exponential"
    LAPLACE_SINR = "laplace_sinr"


class ContaminationMode(Enum):
    NONE = "none"
    ONE_ANTENNA = "one_antenna"
    ONE_TX_ONE_RX = "one_tx_one_rx"
    EXPLICIT_ENTRIES = "explicit_entries"


@dataclass(frozen=True)
class ContaminationPattern:
    """Which measurement entries receive outliers.

    ONE_ANTENNA draws one of the M+N antennas uniformly per realization and
    contaminates every measurement involving it.  ONE_TX_ONE_RX draws one
    transmitter and one receiver, contaminating the union (M+N-1 entries).
    EXPLICIT_ENTRIES uses the fixed 1-based (i, j) pairs.
    """

    mode: ContaminationMode = ContaminationMode.NONE
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mode", ContaminationMode(self.mode))
        object.__setattr__(self, "entries", tuple((int(i), int(j)) for i, j in self.entries))

    def select(self, m, n, rng):
        """Flat indices to contaminate for one realization, consuming `rng`.

        Draw order is part of the reproducibility contract: ONE_ANTENNA takes
        one integer in [0, m+n); ONE_TX_ONE_RX takes a transmitter then a
        receiver index; explicit/none take nothing.
        """
        if self.mode is ContaminationMode.NONE:
            return np.empty(0, dtype=int)
        if self.mode is ContaminationMode.ONE_ANTENNA:
            a = int(rng.integers(0, m + n))
            if a < m:
                ks = [m * j + a for j in range(n)]
            else:
                ks = [m * (a - m) + i for i in range(m)]
            return np.asarray(ks, dtype=int)
        if self.mode is ContaminationMode.ONE_TX_ONE_RX:
            i0 = int(rng.integers(0, m))
            j0 = int(rng.integers(0, n))
            ks = sorted({m * j + i0 for j in range(n)} | {m * j0 + i for i in range(m)})
            return np.asarray(ks, dtype=int)
        ks = []
        for i, j in self.entries:
            if not (1 <= i <= m and 1 <= j <= n):
                raise PatternMismatch(f"entry ({i}, {j}) outside a {m}x{n} scene")
            ks.append(m * (j - 1) + (i - 1))
        return np.asarray(sorted(ks), dtype=int)


@dataclass(frozen=True)
class NoiseSpec:
    """Recipe for one noise realization: Gaussian floor plus optional outliers.

    gaussian_variance is in meters^2 and applies to every entry for all kinds.
    outlier_scale is the standard deviation of the outlier distribution in
    meters (for the exponential NLOS model the mean equals the standard
    deviation; NLOS outliers are added with positive sign since multipath only
    lengthens paths).  Identical specs, including the seed, produce
    bit-identical noise.
    """

    kind: NoiseKind
    gaussian_variance: float
    outlier_scale: float = 0.0
    contamination: ContaminationPattern = field(default_factory=ContaminationPattern)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if self.gaussian_variance < 0:
            raise ConfigError("gaussianVariance", "must be >= 0")
        if self.outlier_scale < 0:
            raise ConfigError("outlierScale", "must be >= 0")
        if self.kind is NoiseKind.GAUSSIAN and self.contamination.mode is not ContaminationMode.NONE:
            raise ConfigError("contamination", "gaussian noise takes no contamination pattern")


def true_distances(geometry):
    """Noise-free sum-ranges ||p - t_i|| + ||p - r_j|| for the scene target.

    Raises TargetMissing without a target and DegenerateGeometry when the
    target sits exactly on an antenna (transmitters and receivers may coincide
    with each other).
    """
    if geometry.target is None:
        raise TargetMissing("true_distances needs a ground-truth target")
    p = geometry.target
    dt = np.linalg.norm(p - geometry.transmitters, axis=1)
    dr = np.linalg.norm(p - geometry.receivers, axis=1)
    if dt.min() == 0.0 or dr.min() == 0.0:
        raise DegenerateGeometry("target coincides with an antenna")
    dt_stacked, dr_stacked = stack_ranges(dt, dr)
    return MeasurementSet(dt_stacked + dr_stacked, geometry.m, geometry.n)


def apply_noise(clean, spec):
    """Add one noise realization to a clean measurement set.

    Per-entry zero-mean Gaussian noise (variance `gaussian_variance`) lands on
    every entry; outliers land on the contaminated entries only: exponential
    with mean = outlier_scale, added positively, for the NLOS kind, or
    zero-mean Laplace with standard deviation = outlier_scale for the SINR
    kind.  Stream order is fixed: Gaussian draws, then pattern selection, then
    outlier magnitudes, so two specs differing only in kind share the Gaussian
    part.
    """
    rng = substream(spec.seed)
    values = clean.values + rng.normal(0.0, np.sqrt(spec.gaussian_variance), clean.values.shape[0])
    if spec.kind is not NoiseKind.GAUSSIAN and spec.contamination.mode is not ContaminationMode.NONE:
        ks = spec.contamination.select(clean.m, clean.n, rng)
        if ks.size and ks.max() >= clean.values.shape[0]:
            raise PatternMismatch("pattern references entries outside the measurement set")
        if spec.kind is NoiseKind.NLOS_EXPONENTIAL:
            values[ks] += rng.exponential(spec.outlier_scale, ks.size)
        else:
            values[ks] += rng.laplace(0.0, spec.outlier_scale / np.sqrt(2.0), ks.size)
    return MeasurementSet(values, clean.m, clean.n)


def stack_ranges(dt, dr):
    """Replicate per-antenna ranges onto the M*N measurement index.

    dt_stacked[k] = dt[i], dr_stacked[k] = dr[j] for k = M*(j-1)+i, matching
    the measurement vector layout; works on batched (B, M)/(B, N) input too.
    """
    dt = np.asarray(dt, dtype=float)
    dr = np.asarray(dr, dtype=float)
    n = dr.shape[-1]
    m = dt.shape[-1]
    return np.tile(dt, dr.shape[:-1] + (n,)), np.repeat(dr, m, axis=-1)


_NOISE_KEYS = {"kind", "gaussianVariance", "outlierScale", "contamination", "seed"}


def _pattern_from_json(obj):
    if obj is None:
        return ContaminationPattern()
    if not isinstance(obj, dict):
        raise ConfigError("noise.contamination", "expected an object")
    try:
        mode = ContaminationMode(obj.get("mode", "none"))
    except ValueError:
        raise ConfigError("noise.contamination.mode", f"unknown mode {obj.get('mode')!r}")
    entries = obj.get("entries", [])
    if mode is ContaminationMode.EXPLICIT_ENTRIES and not entries:
        raise ConfigError("noise.contamination.entries", "explicit_entries needs entries")
    try:
        return ContaminationPattern(mode=mode, entries=[(e[0], e[1]) for e in entries])
    except (TypeError, IndexError):
        raise ConfigError("noise.contamination.entries", "expected a list of [i, j] pairs")


def scenario_from_dict(doc):
    """Parse the scenario document {transmitters, receivers, target?, noise?}."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario", "expected a JSON object")
    for key in ("transmitters", "receivers"):
        if key not in doc:
            raise ConfigError(key, "missing required field")
    geometry = ScenarioGeometry(doc["transmitters"], doc["receivers"], doc.get("target"))
    noise = None
    if "noise" in doc and doc["noise"] is not None:
        nd = doc["noise"]
        if not isinstance(nd, dict):
            raise ConfigError("noise", "expected an object")
        unknown = set(nd) - _NOISE_KEYS
        if unknown:
            raise ConfigError(f"noise.{sorted(unknown)[0]}", "unknown field")
        if "kind" not in nd:
            raise ConfigError("noise.kind", "missing required field")
        try:
            kind = NoiseKind(nd["kind"])
        except ValueError:
            raise ConfigError("noise.kind", f"unknown kind {nd['kind']!r}")
        try:
            noise = NoiseSpec(
                kind=kind,
                gaussian_variance=float(nd.get("gaussianVariance", 0.0)),
                outlier_scale=float(nd.get("outlierScale", 0.0)),
                contamination=_pattern_from_json(nd.get("contamination")),
                seed=int(nd.get("seed", 0)),
            )
        except (TypeError, ValueError):
            raise ConfigError("noise", "non-numeric field value")
    return geometry, noise


def load_scenario(path):
    """Load a scenario JSON file; returns (geometry, noise_spec_or_None)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError("scenario", f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError("scenario", f"invalid JSON: {exc}")
    return scenario_from_dict(doc)


def scenario_to_dict(geometry, noise=None):
    doc = {
        "transmitters": geometry.transmitters.tolist(),
        "receivers": geometry.receivers.tolist(),
    }
    if geometry.target is not None:
        doc["target"] = geometry.target.tolist()
    if noise is not None:
        doc["noise"] = {
            "kind": noise.kind.value,
            "gaussianVariance": noise.gaussian_variance,
            "outlierScale": noise.outlier_scale,
            "contamination": {
                "mode": noise.contamination.mode.value,
                "entries": [list(e) for e in noise.contamination.entries],
            },
            "seed": noise.seed,
        }
    return doc
