"""Experiment orchestration: per-setup pipelines, CSV outputs, manifest.

Determinism contract: every output byte is a pure function of the manifest.
Randomness is split into named substreams keyed by (master seed, setup,
purpose, index), so the set of schemes or precoders evaluated never alters
another's draws, and schemes within a setup see identical geometry, shadow
fading, channel and pilot-noise realizations.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import SimulationConfig
from .evaluation import evaluate_setup, summarize
from .network import build_channel_statistics, generate_network
from .schemes import SCHEME_ORDER, build_access

PRECODERS = ("mr", "lpmmse")

RESULT_COLUMNS = ("setup", "scheme", "precoder", "ue", "se_bits_per_hz", "status")
SUMMARY_COLUMNS = ("scheme", "precoder", "avg_se", "se90", "count")

# substream purposes; fixed numbers are part of the determinism contract
_STREAM_GEOMETRY = 0
_STREAM_SCHEME = 1
_STREAM_REALIZATION = 2


def substream(master_seed, *key):
    """Independent Generator for a named purpose under the master seed."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, key)]))


@dataclass
class RunManifest:
    config: SimulationConfig
    schemes: tuple
    precoders: tuple
    out_dir: str
    setup_seeds: tuple = field(default=())

    def __post_init__(self):
        for s in self.schemes:
            if s not in SCHEME_ORDER:
                raise ValueError(f"unknown scheme '{s}' (known: {', '.join(SCHEME_ORDER)})")
        for p in self.precoders:
            if p not in PRECODERS:
                raise ValueError(f"unknown precoder '{p}'")
        if not self.setup_seeds:
            self.setup_seeds = tuple(int(self.config.seed) for _ in range(self.config.n_setups))

    def to_json(self):
        d = asdict(self)
        d["config"] = asdict(self.config)
        return json.dumps(d, indent=2, sort_keys=True)


def run_setup(config, manifest, setup):
    """All per-UE SEs of one setup: {(scheme, precoder): (se, status, diag)}."""
    seed = manifest.setup_seeds[setup]
    rng_geo = substream(seed, setup, _STREAM_GEOMETRY)
    net = generate_network(config, rng_geo)
    stats = build_channel_statistics(net, config, rng_geo)

    access = {}
    for scheme in manifest.schemes:
        rng_scheme = substream(seed, setup, _STREAM_SCHEME, SCHEME_ORDER.index(scheme))
        access[scheme] = build_access(scheme, stats.beta, config, rng_scheme)

    def realization_rng(r):
        return substream(seed, setup, _STREAM_REALIZATION, r)

    return evaluate_setup(config, stats, access, manifest.precoders, realization_rng)


def run_experiment(manifest):
    """Run all setups and write results.csv, summary.csv and manifest.json.

    Returns (results_path, summary_path). Row order is canonical
    (setup, scheme, precoder, ue) regardless of evaluation order, and two
    runs from identical manifests produce byte-identical files.
    """
    config = manifest.config
    os.makedirs(manifest.out_dir, exist_ok=True)
    results_path = os.path.join(manifest.out_dir, "results.csv")
    summary_path = os.path.join(manifest.out_dir, "summary.csv")
    manifest_path = os.path.join(manifest.out_dir, "manifest.json")

    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write(manifest.to_json())
        fh.write("\n")

    rows = []
    for setup in range(config.n_setups):
        per_setup = run_setup(config, manifest, setup)
        for scheme in manifest.schemes:
            for precoder in manifest.precoders:
                se, status, _diag = per_setup[(scheme, precoder)]
                for ue in range(config.K):
                    rows.append((setup, scheme, precoder, ue,
                                 float(se[ue]), str(status[ue])))

    with open(results_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for setup, scheme, precoder, ue, se, status in rows:
            writer.writerow((setup, scheme, precoder, ue, repr(se), status))

    summarize_csv(results_path, summary_path,
                  scheme_order=manifest.schemes, precoder_order=manifest.precoders)
    return results_path, summary_path


def read_results(path):
    """results.csv rows as a list of dicts with typed fields."""
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(RESULT_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            out.append({"setup": int(row["setup"]), "scheme": row["scheme"],
                        "precoder": row["precoder"], "ue": int(row["ue"]),
                        "se_bits_per_hz": float(row["se_bits_per_hz"]),
                        "status": row["status"]})
    return out


def summarize_csv(results_path, summary_path, scheme_order=None, precoder_order=None):
    """Aggregate results.csv into summary.csv.

    Pools SE over setups and UEs per (scheme, precoder), skipping rows whose
    status is not 'ok'. Groups left empty are omitted with a warning.
    """
    rows = read_results(results_path)
    groups = {}
    for row in rows:
        key = (row["scheme"], row["precoder"])
        groups.setdefault(key, [])
        if row["status"] == "ok":
            groups[key].append(row["se_bits_per_hz"])

    def sort_key(key):
        scheme, precoder = key
        s = scheme_order.index(scheme) if scheme_order and scheme in scheme_order \
            else SCHEME_ORDER.index(scheme)
        p = precoder_order.index(precoder) if precoder_order and precoder in precoder_order \
            else PRECODERS.index(precoder)
        return (s, p)

    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for key in sorted(groups, key=sort_key):
            samples = groups[key]
            if not samples:
                print(f"warning: no valid rows for {key[0]}/{key[1]}, omitted",
                      file=sys.stderr)
                continue
            stats = summarize(samples)
            writer.writerow((key[0], key[1], repr(stats.average), repr(stats.se90),
                             stats.count))
    return summary_path


def read_summary(path):
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(SUMMARY_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            out.append({"scheme": row["scheme"], "precoder": row["precoder"],
                        "avg_se": float(row["avg_se"]), "se90": float(row["se90"]),
                        "count": int(row["count"])})
    return out
