"""Command-line sweep driver.

Evaluates the local mode structure and requested observables of a pure
multipole source over a grid of observation points and writes one
machine-readable record per point (CSV or JSON), in deterministic order
(kr outer, theta middle, phi inner).

Exit codes: 0 success, 2 configuration error, 3 numerical failure (fully
dark point or Fock-dimension refusal).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .effective import build_effective_transform, coherent_parameters
from .errors import ConfigError, DarkPointError, DimensionLimitError, SphotonError
from .fock import FockSpace, FockState, coherent_state, fock_basis_state
from .modes import MU_ORDER, PARITIES, SpatialPoint, mode_matrix, zone_classify
from .observables import mandel_q, polarization_matrices, stokes_variance_report
from .errors import UndefinedQError

__all__ = ["SweepConfig", "run_sweep", "main"]

# Smallest kr the CLI accepts; the near-origin limit is probed, never hit.
KR_FLOOR = 1e-3

MAX_FOCK_DIM = 10 ** 6

OBSERVABLE_CHOICES = ("q", "stokes", "polarization", "alpha")

_MU_TAG = {1: "p1", 0: "0", -1: "m1"}
_NULL = "null"


@dataclass
class SweepConfig:
    j: int = 1
    parity: str = "electric"
    gamma: complex = 1.0 + 0.0j
    kr: list = field(default_factory=list)
    theta: list = field(default_factory=list)
    phi: list = field(default_factory=list)
    state_kind: str = "coherent"  # 'coherent' | 'fock'
    state_values: list = field(default_factory=list)
    observables: tuple = ("q", "stokes", "alpha")
    w_epsilon: float = 1e-8
    n_max: int = 8
    out_format: str = "csv"
    out_path: str | None = None
    near_bound: float = 0.1
    far_bound: float = 100.0

    def validate(self) -> None:
        if not isinstance(self.j, int) or self.j < 1:
            raise ConfigError(f"j must be an integer >= 1, got {self.j!r}")
        if self.parity not in PARITIES:
            raise ConfigError(f"parity must be one of {PARITIES}, got {self.parity!r}")
        for name in ("kr", "theta", "phi"):
            axis = getattr(self, name)
            if not axis:
                raise ConfigError(f"grid axis {name!r} is empty")
            if not all(np.isfinite(v) for v in axis):
                raise ConfigError(f"grid axis {name!r} contains non-finite values")
        if min(self.kr) < KR_FLOOR:
            raise ConfigError(f"kr values must be >= {KR_FLOOR}")
        if any(t < 0.0 or t > np.pi for t in self.theta):
            raise ConfigError("theta values must lie in [0, pi]")
        if self.state_kind not in ("coherent", "fock"):
            raise ConfigError(f"unknown state kind {self.state_kind!r}")
        n_modes = 2 * self.j + 1
        if len(self.state_values) != n_modes:
            raise ConfigError(
                f"state spec needs {n_modes} entries for j={self.j}, "
                f"got {len(self.state_values)}"
            )
        if self.state_kind == "fock":
            for n in self.state_values:
                if not float(n).is_integer() or n < 0 or n > self.n_max:
                    raise ConfigError(
                        f"fock occupations must be integers in [0, {self.n_max}]"
                    )
        bad = [o for o in self.observables if o not in OBSERVABLE_CHOICES]
        if bad:
            raise ConfigError(f"unknown observables {bad}; choose from {OBSERVABLE_CHOICES}")
        if not (0.0 < self.w_epsilon < 1.0):
            raise ConfigError(f"w-epsilon must lie in (0, 1), got {self.w_epsilon}")
        if not isinstance(self.n_max, int) or self.n_max < 1:
            raise ConfigError(f"n-max must be an integer >= 1, got {self.n_max!r}")
        if self.out_format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.out_format!r}")
        if not (0.0 < self.near_bound < self.far_bound):
            raise ConfigError("require 0 < near-bound < far-bound")

    @property
    def fock_dim(self) -> int:
        return (self.n_max + 1) ** (2 * self.j + 1)


# ---------------------------------------------------------------------------
# value parsing / serialization
# ---------------------------------------------------------------------------

def parse_axis(spec: str) -> list:
    """Parse a grid axis: single value, comma list, or start:stop:count[:log]."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ConfigError(
                f"range spec must be start:stop:count[:log], got {spec!r}"
            )
        try:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad range spec {spec!r}: {exc}") from None
        if count < 1:
            raise ConfigError(f"range count must be >= 1 in {spec!r}")
        if len(parts) == 4:
            if start <= 0 or stop <= 0:
                raise ConfigError(f"log range needs positive endpoints in {spec!r}")
            return [float(v) for v in np.geomspace(start, stop, count)]
        return [float(v) for v in np.linspace(start, stop, count)]
    try:
        return [float(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad axis value {spec!r}: {exc}") from None


def parse_complex(tok: str) -> complex:
    try:
        return complex(tok.strip().replace(" ", ""))
    except ValueError:
        raise ConfigError(f"bad complex number {tok!r} (expected re±imj)") from None


def parse_state(spec: str) -> tuple[str, list]:
    if ":" not in spec:
        raise ConfigError("state spec must be coherent:<complex list> or fock:<int list>")
    kind, _, body = spec.partition(":")
    kind = kind.strip()
    toks = [t for t in body.split(",") if t.strip() != ""]
    if kind == "coherent":
        return "coherent", [parse_complex(t) for t in toks]
    if kind == "fock":
        try:
            return "fock", [int(t) for t in toks]
        except ValueError:
            raise ConfigError(f"fock occupations must be integers, got {body!r}") from None
    raise ConfigError(f"unknown state kind {kind!r}")


def fmt_float(x: float) -> str:
    return "%.17g" % float(x)


def fmt_complex(z: complex) -> str:
    return "%.17g%+.17gj" % (z.real, z.imag)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _record_fields(config: SweepConfig) -> list:
    fields = ["kr", "theta", "phi", "zone", "w_p1", "w_0", "w_m1", "suppressed"]
    if "alpha" in config.observables:
        for mu in MU_ORDER:
            tag = _MU_TAG[mu]
            fields += [f"alpha_abs_{tag}", f"alpha_phase_{tag}"]
    if "q" in config.observables:
        fields += [f"q_{_MU_TAG[mu]}" for mu in MU_ORDER]
    if "stokes" in config.observables:
        fields += [
            "s1_mean",
            "s2_mean",
            "s1_var_oracle",
            "s1_var_formula",
            "s1_var_plane_wave",
            "s1_extra_terms",
            "mu0_vacuum",
        ]
    if "polarization" in config.observables:
        for kind in ("pn", "pan"):
            for a in MU_ORDER:
                for b in MU_ORDER:
                    fields.append(f"{kind}_{_MU_TAG[a]}{_MU_TAG[b]}")
    return fields


def _build_state(config: SweepConfig, space: FockSpace) -> FockState:
    if config.state_kind == "coherent":
        return coherent_state(space, np.asarray(config.state_values, dtype=complex))
    return fock_basis_state(space, [int(n) for n in config.state_values])


def _point_record(config: SweepConfig, space: FockSpace, state: FockState,
                  kr: float, theta: float, phi: float) -> dict:
    point = SpatialPoint(kr=kr, theta=theta, phi=phi)
    V = mode_matrix(config.j, config.parity, point, config.gamma)
    T = build_effective_transform(V, w_epsilon=config.w_epsilon)
    rec: dict = {
        "kr": kr,
        "theta": theta,
        "phi": phi,
        "zone": zone_classify(kr, config.near_bound, config.far_bound),
        "w_p1": float(T.W[0]),
        "w_0": float(T.W[1]),
        "w_m1": float(T.W[2]),
        "suppressed": sorted((_MU_TAG[mu] for mu in T.suppressed), reverse=True),
    }
    if "alpha" in config.observables:
        if config.state_kind == "coherent":
            params = coherent_parameters(T, np.asarray(config.state_values, dtype=complex))
            for r, mu in enumerate(MU_ORDER):
                tag = _MU_TAG[mu]
                if mu in params.suppressed:
                    rec[f"alpha_abs_{tag}"] = None
                    rec[f"alpha_phase_{tag}"] = None
                else:
                    z = params.values[r]
                    rec[f"alpha_abs_{tag}"] = abs(z)
                    rec[f"alpha_phase_{tag}"] = float(np.angle(z))
        else:
            for mu in MU_ORDER:
                rec[f"alpha_abs_{_MU_TAG[mu]}"] = None
                rec[f"alpha_phase_{_MU_TAG[mu]}"] = None
    if "q" in config.observables:
        for mu in MU_ORDER:
            try:
                rec[f"q_{_MU_TAG[mu]}"] = mandel_q(state, T, mu)
            except UndefinedQError:
                rec[f"q_{_MU_TAG[mu]}"] = None
    if "stokes" in config.observables:
        rep = stokes_variance_report(state, T)
        rec["s1_mean"] = rep.mean_s1
        rec["s2_mean"] = rep.mean_s2
        rec["s1_var_oracle"] = rep.var_s1_oracle
        rec["s1_var_formula"] = rep.var_s1_paper_formula
        rec["s1_var_plane_wave"] = rep.var_s1_plane_wave
        rec["s1_extra_terms"] = rep.extra_terms
        rec["mu0_vacuum"] = rep.mu0_vacuum
    if "polarization" in config.observables:
        pol = polarization_matrices(state, V)
        for kind, mat in (("pn", pol.normal), ("pan", pol.antinormal)):
            for ra, a in enumerate(MU_ORDER):
                for rb, b in enumerate(MU_ORDER):
                    rec[f"{kind}_{_MU_TAG[a]}{_MU_TAG[b]}"] = complex(mat[ra, rb])
    return rec


def _csv_cell(value) -> str:
    if value is None:
        return _NULL
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        return fmt_complex(value)
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, list):
        return ";".join(value)
    return str(value)


def _json_cell(value):
    if isinstance(value, complex):
        return fmt_complex(value)
    if isinstance(value, float):
        return float(fmt_float(value))
    return value


def run_sweep(config: SweepConfig, sink) -> int:
    """Run the sweep and write records to the text sink. Returns exit status."""
    try:
        config.validate()
    except ConfigError as exc:
        print(f"sphoton: config error: {exc}", file=sys.stderr)
        return 2
    if config.fock_dim > MAX_FOCK_DIM:
        print(
            f"sphoton: refusing Fock dimension {config.fock_dim} "
            f"(n_max+1)^(2j+1) > {MAX_FOCK_DIM}; lower --n-max or --j",
            file=sys.stderr,
        )
        return 3
    try:
        space = FockSpace(j=config.j, n_max=config.n_max)
        state = _build_state(config, space)
        fields = _record_fields(config)
        records = []
        for kr in config.kr:
            for theta in config.theta:
                for phi in config.phi:
                    records.append(
                        _point_record(config, space, state, kr, theta, phi)
                    )
    except (DarkPointError, DimensionLimitError) as exc:
        print(f"sphoton: numerical failure: {exc}", file=sys.stderr)
        return 3
    except SphotonError as exc:
        print(f"sphoton: config error: {exc}", file=sys.stderr)
        return 2

    if config.out_format == "csv":
        sink.write(",".join(fields) + "\n")
        for rec in records:
            sink.write(",".join(_csv_cell(rec[f]) for f in fields) + "\n")
    else:
        payload = [{f: _json_cell(rec[f]) for f in fields} for rec in records]
        json.dump(payload, sink, indent=1)
        sink.write("\n")
    return 0


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sphoton",
        description="Field maps and photon statistics of a quantum multipole source.",
    )
    p.add_argument("--config", help="flat key=value config file; flags override it")
    p.add_argument("--j", type=int, help="multipole order (>= 1)")
    p.add_argument("--parity", choices=PARITIES, help="multipole type")
    p.add_argument("--gamma", help="overall mode normalization, complex re±imj")
    p.add_argument("--kr", help="kr grid: value, comma list, or start:stop:count[:log]")
    p.add_argument("--theta", help="theta grid (radians), same syntax as --kr")
    p.add_argument("--phi", help="phi grid (radians), same syntax as --kr")
    p.add_argument("--state", help="coherent:<complex list> or fock:<int list>")
    p.add_argument(
        "--observables",
        help=f"comma list from {','.join(OBSERVABLE_CHOICES)} (default q,stokes,alpha)",
    )
    p.add_argument("--w-epsilon", type=float, dest="w_epsilon",
                   help="relative eigenvalue threshold for suppressed modes")
    p.add_argument("--n-max", type=int, dest="n_max", help="per-mode Fock cutoff")
    p.add_argument("--format", choices=("csv", "json"), dest="out_format")
    p.add_argument("--out", dest="out_path", help="output path (default stdout)")
    p.add_argument("--near-bound", type=float, dest="near_bound")
    p.add_argument("--far-bound", type=float, dest="far_bound")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def load_config_file(path: str) -> dict:
    """Read a flat key = value config file (same value syntax as the flags)."""
    raw: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                raw[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return raw


_CONFIG_KEYS = {
    "j", "parity", "gamma", "kr", "theta", "phi", "state",
    "observables", "w_epsilon", "n_max", "format", "out",
    "near_bound", "far_bound",
}


def _apply_settings(config: SweepConfig, settings: dict) -> None:
    for key, value in settings.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        if value is None:
            continue
        if key == "j":
            config.j = int(value)
        elif key == "parity":
            config.parity = str(value)
        elif key == "gamma":
            config.gamma = parse_complex(str(value))
        elif key in ("kr", "theta", "phi"):
            setattr(config, key, parse_axis(str(value)))
        elif key == "state":
            config.state_kind, config.state_values = parse_state(str(value))
        elif key == "observables":
            config.observables = tuple(
                t.strip() for t in str(value).split(",") if t.strip()
            )
        elif key == "w_epsilon":
            config.w_epsilon = float(value)
        elif key == "n_max":
            config.n_max = int(value)
        elif key == "format":
            config.out_format = str(value)
        elif key == "out":
            config.out_path = str(value)
        elif key == "near_bound":
            config.near_bound = float(value)
        elif key == "far_bound":
            config.far_bound = float(value)


def build_config(args: argparse.Namespace) -> SweepConfig:
    config = SweepConfig()
    if args.config:
        _apply_settings(config, load_config_file(args.config))
    flag_map = {
        "j": args.j,
        "parity": args.parity,
        "gamma": args.gamma,
        "kr": args.kr,
        "theta": args.theta,
        "phi": args.phi,
        "state": args.state,
        "observables": args.observables,
        "w_epsilon": args.w_epsilon,
        "n_max": args.n_max,
        "format": args.out_format,
        "out": args.out_path,
        "near_bound": args.near_bound,
        "far_bound": args.far_bound,
    }
    _apply_settings(config, flag_map)
    return config


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = build_config(args)
    except ConfigError as exc:
        print(f"sphoton: config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"sphoton: config error: {exc}", file=sys.stderr)
        return 2
    if config.out_path:
        try:
            with open(config.out_path, "w", encoding="utf-8", newline="") as fh:
                return run_sweep(config, fh)
        except OSError as exc:
            print(f"sphoton: cannot write {config.out_path}: {exc}", file=sys.stderr)
            return 2
    return run_sweep(config, sys.stdout)


if __name__ == "__main__":
    raise SystemExit(main())
