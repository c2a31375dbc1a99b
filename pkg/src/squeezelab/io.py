"""Config loading, domain construction from configs and reproducible CSV output."""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import domains, hartogs, profiles
from .polyalg import MixedPolynomial

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Malformed or schema-violating configuration."""


def load_schema() -> dict:
    return json.loads(resources.files("squeezelab").joinpath("schema/run_config.json").read_text())


def validate_config(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, load_schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {path}: {exc.message}") from None
    return cfg


def load_config(path) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return validate_config(cfg)


def as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def as_point(v) -> np.ndarray:
    return np.array([as_complex(x) for x in v], dtype=np.complex128)


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def build_domain(spec: dict):
    """Domain object described by a config ``domain`` block.

    Returns a ``DomainSpec`` (with ``form`` attached for canonical models
    via a tuple) or a ``HartogsSpec``.
    """
    kind = spec["type"]
    if kind == "ball":
        return domains.unit_ball(spec.get("n", 2))
    if kind == "polydisc":
        return domains.unit_polydisc(spec.get("n", 2))
    if kind in ("egg", "omega"):
        eps = spec.get("eps", 0.1)
        sigma = profiles.from_record(spec.get("sigma", profiles.SHIPPED_SIGMA), eps)
        P = [as_complex(c) for c in spec.get("P", [0.0, 1.0])]
        egg = domains.build_egg_domain(P, sigma, check=False)
        return egg if kind == "egg" else domains.unshear(egg)
    if kind == "canonical":
        m = spec["m"]
        psi = (MixedPolynomial.from_records(1, spec["psi"]) if "psi" in spec
               else MixedPolynomial.abs_squared(1, 0, m))
        R1 = MixedPolynomial.from_records(1, spec["R1"]) if "R1" in spec else None
        R2 = MixedPolynomial.from_records(1, spec["R2"]) if "R2" in spec else None
        box = np.asarray(spec["box"], dtype=float) if "box" in spec else None
        return domains.canonical_model(m, psi, R1, R2, truncation=spec.get("truncation"), box=box)
    if kind == "hartogs":
        return hartogs.hartogs_spec(spec.get("n", 2), spec.get("k_max"))
    raise ConfigError(f"unknown domain type {kind!r}")


def schedule_from(cfg_seq: dict) -> np.ndarray:
    sch = cfg_seq.get("schedule", {"ratio": 4.0, "start": 3, "steps": 10})
    if isinstance(sch, dict):
        k = np.arange(sch["start"], sch["start"] + sch["steps"])
        return float(sch["ratio"]) ** (-k.astype(float))
    return np.asarray(sch, dtype=float)


def fmt(v) -> str:
    """17 significant digits, '.' decimal, locale independent."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            vals = [r.get(h) for h in header] if isinstance(r, dict) else list(r)
            w.writerow([fmt(v) for v in vals])
    return path


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(o):
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, complex) or isinstance(o, np.complexfloating):
        return complex_to_json(o)
    if isinstance(o, np.ndarray):
        return [_json_default(x) if np.iscomplexobj(x) else x for x in o.tolist()]
    raise TypeError(f"not serializable: {type(o)}")
