"""Run configuration for the command-line tools.

A run is described by one YAML mapping.  Defaults cover everything
except ``chain.anisotropy``, which has no sensible default and must be
stated explicitly.  Unknown keys are rejected rather than ignored, so a
typo cannot silently fall back to a default.  Command-line ``--set``
assignments use dotted paths (``--set chain.n_sites=11``) and parse
their right-hand side as YAML, so lists and nulls work too.

The resolved configuration (defaults + file + overrides) is what every
experiment consumes, and its SHA-256 digest is stamped into every
output file so a table can always be traced back to the exact settings
that produced it.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .analysis import ENSEMBLE_KINDS
from .errors import ConfigError
from .evolve import linear_time_grid, log_time_grid
from .model import POWER_LAW, ChainSpec

OUTDIR_ENV_VAR = "OTOCSIM_OUTDIR"

DEFAULTS = {
    "chain": {
        "n_sites": 13,
        "interaction": "power-law",
        "alpha": 3.0,
        "coupling": 1.0,
    },
    "disorder": {
        "strength": 14.0,
        "strengths": None,
    },
    "ensemble": {
        "n_realizations": 100,
        "n_workers": None,
    },
    "otoc": {
        "site_i": 3,
        "sites_j": None,
        "axis": "x",
        "estimator": "typicality",
        "n_haar": None,
        "n_up": None,
    },
    "times": {
        "kind": "log",
        "start": 0.1,
        "stop": 100.0,
        "points": 40,
    },
    "lightcone": {
        "thresholds": [0.25, 0.5, 1.0],
        "fit_r_min": 2,
    },
    "distributions": {
        "distance": 3,
        "bins": 80,
    },
    "slow_fraction": {
        "distance": 3,
        "time": 100.0,
        "cutoff_alpha": 6.0,
    },
    "floquet": {
        "sequence": "modified",
        "cycle_time": 0.1,
        "max_cycles": 20,
        "norm_check_sites": 8,
    },
    "sampling": {
        "ensembles": list(ENSEMBLE_KINDS),
        "sample_counts": [1, 2, 4, 8, 16, 32, 64, 128],
        "system_sizes": [13, 15],
        "pool_size": None,
    },
    "output": {
        "directory": None,
    },
    "seed": 0,
}

_NULLABLE_POSITIVE_INT = {"type": ["integer", "null"], "minimum": 1}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["chain"],
    "properties": {
        "chain": {
            "type": "object",
            "additionalProperties": False,
            "required": ["anisotropy"],
            "properties": {
                "n_sites": {"type": "integer", "minimum": 2},
                "interaction": {"enum": ["nearest-neighbor", "power-law"]},
                "anisotropy": {"type": "number"},
                "alpha": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "coupling": {"type": "number"},
            },
        },
        "disorder": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "strength": {"type": "number", "minimum": 0},
                "strengths": {
                    "type": ["array", "null"],
                    "items": {"type": "number", "minimum": 0},
                    "minItems": 1,
                },
            },
        },
        "ensemble": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_realizations": {"type": "integer", "minimum": 1},
                "n_workers": _NULLABLE_POSITIVE_INT,
            },
        },
        "otoc": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "site_i": {"type": "integer", "minimum": 0},
                "sites_j": {
                    "type": ["array", "null"],
                    "items": {"type": "integer", "minimum": 0},
                    "minItems": 1,
                },
                "axis": {"enum": ["x", "y", "z"]},
                "estimator": {"enum": ["typicality", "exact-trace"]},
                "n_haar": _NULLABLE_POSITIVE_INT,
                "n_up": {"type": ["integer", "null"], "minimum": 0},
            },
        },
        "times": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["log", "linear"]},
                "start": {"type": "number"},
                "stop": {"type": "number"},
                "points": {"type": "integer", "minimum": 2},
            },
        },
        "lightcone": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "thresholds": {
                    "type": "array",
                    "items": {
                        "type": "number",
                        "exclusiveMinimum": 0,
                        "exclusiveMaximum": 4,
                    },
                    "minItems": 1,
                },
                "fit_r_min": {"type": "integer", "minimum": 0},
            },
        },
        "distributions": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "distance": {"type": "integer", "minimum": 1},
                "bins": {"type": "integer", "minimum": 4},
            },
        },
        "slow_fraction": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "distance": {"type": "integer", "minimum": 1},
                "time": {"type": "number", "exclusiveMinimum": 0},
                "cutoff_alpha": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "floquet": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "sequence": {"enum": ["wahuha", "modified"]},
                "cycle_time": {"type": "number", "exclusiveMinimum": 0},
                "max_cycles": {"type": "integer", "minimum": 1},
                "norm_check_sites": {"type": "integer", "minimum": 2, "maximum": 10},
            },
        },
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "ensembles": {
                    "type": "array",
                    "items": {"enum": list(ENSEMBLE_KINDS)},
                    "minItems": 1,
                },
                "sample_counts": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 1,
                },
                "system_sizes": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 2},
                    "minItems": 1,
                },
                "pool_size": _NULLABLE_POSITIVE_INT,
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directory": {"type": ["string", "null"]},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}


def load_config(path) -> dict:
    """Read a YAML config file; parse errors keep their line/column marks."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping, not {type(raw).__name__}")
    return raw


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def merge_defaults(raw: dict) -> dict:
    """Defaults overlaid with the user's file; unknown keys survive so the
    schema can reject them by name."""
    return _deep_merge(DEFAULTS, raw)


def apply_overrides(config: dict, assignments) -> dict:
    """Apply ``path.to.key=value`` assignments; values are parsed as YAML."""
    out = copy.deepcopy(config)
    for assignment in assignments:
        path, sep, text = assignment.partition("=")
        if not sep or not path:
            raise ConfigError(f"override {assignment!r} is not of the form key.path=value")
        try:
            value = yaml.safe_load(text) if text else None
        except yaml.YAMLError as exc:
            raise ConfigError(f"override {assignment!r}: {exc}") from exc
        keys = path.split(".")
        node = out
        for key in keys[:-1]:
            if key not in node:
                node[key] = {}
            node = node[key]
            if not isinstance(node, dict):
                raise ConfigError(
                    f"override {assignment!r}: {key!r} is not a mapping"
                )
        node[keys[-1]] = value
    return out


def chain_from_config(config: dict) -> ChainSpec:
    """The spin chain a config describes; ``alpha`` only applies to power law."""
    chain = config["chain"]
    alpha = chain["alpha"] if chain["interaction"] == POWER_LAW else None
    try:
        return ChainSpec(
            n_sites=chain["n_sites"],
            interaction=chain["interaction"],
            anisotropy=chain["anisotropy"],
            alpha=alpha,
            coupling=chain["coupling"],
        )
    except ValueError as exc:
        raise ConfigError(f"chain: {exc}") from exc


def times_from_config(config: dict) -> np.ndarray:
    times = config["times"]
    builder = log_time_grid if times["kind"] == "log" else linear_time_grid
    try:
        return builder(times["start"], times["stop"], times["points"])
    except ValueError as exc:
        raise ConfigError(f"times: {exc}") from exc


def probe_sites(config: dict) -> tuple:
    """Measurement sites: the explicit list, or every site right of site_i."""
    n_sites = config["chain"]["n_sites"]
    otoc = config["otoc"]
    if otoc["sites_j"] is None:
        return tuple(range(otoc["site_i"] + 1, n_sites))
    return tuple(int(j) for j in otoc["sites_j"])


def probe_distances(config: dict) -> tuple:
    site_i = config["otoc"]["site_i"]
    return tuple(sorted({abs(j - site_i) for j in probe_sites(config)}))


def _check_schema(config: dict) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for err in errors:
            where = ".".join(str(p) for p in err.absolute_path) or "<root>"
            lines.append(f"{where}: {err.message}")
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(lines))


def _check_generic(config: dict) -> None:
    chain_from_config(config)
    times_from_config(config)
    n_sites = config["chain"]["n_sites"]
    otoc = config["otoc"]
    site_i = otoc["site_i"]
    if site_i >= n_sites:
        raise ConfigError(f"otoc.site_i: site {site_i} outside a {n_sites}-site chain")
    sites = probe_sites(config)
    if not sites:
        raise ConfigError("otoc.sites_j: no measurement sites right of otoc.site_i")
    for j in sites:
        if j >= n_sites:
            raise ConfigError(f"otoc.sites_j: site {j} outside a {n_sites}-site chain")
        if j == site_i:
            raise ConfigError("otoc.sites_j: must not contain otoc.site_i itself")
    n_up = otoc["n_up"]
    if n_up is not None:
        if otoc["axis"] != "z":
            raise ConfigError(
                "otoc.n_up: a magnetization sector is incompatible with the"
                f" '{otoc['axis']}' axis; transverse Paulis connect different"
                " sectors.  Use axis 'z' or drop n_up."
            )
        if n_up > n_sites:
            raise ConfigError(f"otoc.n_up: cannot place {n_up} up spins on {n_sites} sites")


def _check_lightcone(config: dict) -> None:
    # Thresholds and fit_r_min are fully covered by the schema; fits with
    # too few surviving crossings are reported in fits.json, not fatal.
    pass


def _check_distributions(config: dict) -> None:
    distance = config["distributions"]["distance"]
    available = probe_distances(config)
    if distance not in available:
        raise ConfigError(
            f"distributions.distance: {distance} is not measured"
            f" (available distances: {list(available)})"
        )


def _check_slow_fraction(config: dict) -> None:
    section = config["slow_fraction"]
    available = probe_distances(config)
    if section["distance"] not in available:
        raise ConfigError(
            f"slow_fraction.distance: {section['distance']} is not measured"
            f" (available distances: {list(available)})"
        )
    grid = times_from_config(config)
    if not np.isclose(grid, section["time"], rtol=1e-9, atol=1e-12).any():
        raise ConfigError(
            f"slow_fraction.time: {section['time']} is not on the measurement"
            " time grid; pick one of the grid times"
        )


def _check_floquet(config: dict) -> None:
    anisotropy = config["chain"]["anisotropy"]
    if not 0.0 <= anisotropy < 2.0:
        raise ConfigError(
            "floquet: the pulse timings only exist for anisotropy in the"
            f" range [0, 2), got {anisotropy:g}"
        )
    if config["otoc"]["axis"] != "x":
        raise ConfigError(
            "floquet: the driven echo measures the x-basis protocol;"
            " set otoc.axis to 'x'"
        )
    if config["otoc"]["n_up"] is not None:
        raise ConfigError("floquet: the echo protocol uses the full basis; drop otoc.n_up")


def _check_sampling(config: dict) -> None:
    section = config["sampling"]
    counts = section["sample_counts"]
    pool = section["pool_size"]
    if pool is not None and pool < max(counts):
        raise ConfigError(
            f"sampling.pool_size: {pool} is smaller than the largest sample"
            f" count {max(counts)}"
        )
    site_i = config["otoc"]["site_i"]
    smallest = min(section["system_sizes"])
    if site_i >= smallest:
        raise ConfigError(
            f"otoc.site_i: site {site_i} outside the smallest studied chain"
            f" ({smallest} sites)"
        )


_EXPERIMENT_CHECKS = {
    "lightcone": _check_lightcone,
    "distributions": _check_distributions,
    "slow-fraction": _check_slow_fraction,
    "floquet-check": _check_floquet,
    "sampling-study": _check_sampling,
    "ising-oracle": lambda config: None,
}

# Which experiment's extra checks a config section implies, for `validate`
# runs that are not tied to a single subcommand.
SECTION_EXPERIMENTS = {
    "lightcone": "lightcone",
    "distributions": "distributions",
    "slow_fraction": "slow-fraction",
    "floquet": "floquet-check",
    "sampling": "sampling-study",
}


def validate_config(config: dict, experiments=()) -> None:
    """Schema check plus cross-field physics checks.

    ``experiments`` names the experiment(s) whose extra constraints apply;
    the generic checks (chain consistency, probe sites in range, sector
    versus axis compatibility, time grid) always run.
    """
    _check_schema(config)
    _check_generic(config)
    for experiment in experiments:
        try:
            check = _EXPERIMENT_CHECKS[experiment]
        except KeyError:
            raise ConfigError(f"unknown experiment {experiment!r}") from None
        check(config)


def config_digest(config: dict) -> str:
    """SHA-256 over the canonical JSON form of the resolved config.

    Execution details that cannot change any number (worker count, where
    the files go) are excluded, so the same physics always hashes the
    same and ``--workers`` keeps result tables byte-identical.
    """
    pruned = copy.deepcopy(config)
    pruned.get("ensemble", {}).pop("n_workers", None)
    pruned.pop("output", None)
    canonical = json.dumps(pruned, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def resolve_output_dir(config: dict, cli_choice=None) -> Path:
    """Output directory precedence: flag, then environment, then config."""
    choice = (
        cli_choice
        or os.environ.get(OUTDIR_ENV_VAR)
        or config["output"]["directory"]
        or "otocsim-results"
    )
    return Path(choice)
