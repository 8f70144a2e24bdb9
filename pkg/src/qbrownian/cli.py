"""Command-line front end: reproducible runs writing CSV plus a JSON manifest.

Every command reads a flat key-value configuration (dotted sections, e.g.
``system.M = 1.0``), resolves it against built-in defaults, dispatches into
the library, and writes

* ``<command>.csv`` -- the data, with a comment header naming columns and
  units and a column-name row; '.' decimal separator, locale-independent;
* ``<command>.manifest.json`` -- the fully resolved configuration (every
  default the code filled in), the library version, all tolerances, and a
  small results block;
* optionally ``<command>.gp`` -- a gnuplot companion script (``--gnuplot``).

Angular quantities are entered in units of the configured omega0 and
emitted in natural units built from (M, omega0, hbar); with the default
M = omega0 = hbar = k_B = 1 all numbers are absolute.  Identical
configuration yields bit-identical CSV bytes: summation orders are fixed,
sweeps run in deterministic input order (a serial worker pool), and any
randomized path takes its seed from the configuration.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error
(surfaced verbatim), 4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bath import (BathSpec, DiscreteBathDamping, damping_kernel,
                   discretize_bath, noise_commutator, noise_correlation)
from .damping import DrudeDamping, OhmicDamping
from .dynamics import (GaussianState, build_hamiltonian, normal_modes,
                       propagate_trajectory, propagator, symplectic_form,
                       equilibrium_system_moments, two_time_correlation,
                       correlation_from_propagator, flip_momenta)
from .errors import DomainError, QBrownianError
from .imaginary_time import (CubicPotentialSpec, PathGrid,
                             crossover_temperature,
                             crossover_temperature_ohmic, effective_action,
                             fluctuation_eigenvalue)
from .numerics import ThermalParams, coth_weight
from .oscillator import (OscillatorSpec, position_variance,
                         reduced_density_matrix, second_moments,
                         sqq_ohmic_closed_form, sqq_quadrature)
from .response import (current_noise, current_noise_parts, fdt_spectrum,
                       oscillator_response, resistor, series_rlc)
from .thermo import (density_of_states, internal_energy, log_partition,
                     q2_from_partition)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_VALIDATION = 4


class ConfigError(Exception):
    """Configuration problem, reported with its origin (file:line or --set)."""


# ---------------------------------------------------------------------------
# configuration: parsing, defaults, resolution
# ---------------------------------------------------------------------------

def _parse_scalar(text: str):
    """int, then float, then bool literal, else the bare string."""
    s = text.strip()
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    if s.lower() in ("true", "false"):
        return s.lower() == "true"
    return s


def parse_config_text(text: str, origin: str) -> dict:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', "
                              f"got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or any(c.isspace() for c in key):
            raise ConfigError(f"{origin}:{lineno}: malformed key {key!r}")
        if not value:
            raise ConfigError(f"{origin}:{lineno}: key {key!r} has no value")
        if key in out:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}")
        out[key] = _parse_scalar(value)
    return out


# (default, kind); kind "ofloat"/"ostr" means optional -- None resolves later
GLOBAL_KEYS = {
    "system.M": (1.0, "float"),
    "system.omega0": (1.0, "float"),
    "system.q0": (1.0, "float"),
    "damping.variant": ("drude", ("none", "ohmic", "drude", "bath")),
    "damping.gamma": (0.5, "float"),
    "damping.omega_d": (8.0, "float"),
    "damping.bath_file": (None, "ostr"),
    "thermal.T": (None, "ofloat"),
    "thermal.beta": (None, "ofloat"),
    "thermal.hbar": (1.0, "float"),
    "thermal.kB": (1.0, "float"),
    "numeric.n_max": (20000, "int"),
}

COMMAND_KEYS = {
    "spectrum": {
        "spectrum.kind": ("oscillator", ("oscillator", "resistor", "rlc")),
        "spectrum.omega_min": (-10.0, "float"),
        "spectrum.omega_max": (10.0, "float"),
        "spectrum.n_omega": (801, "int"),
        "circuit.R": (1.0, "float"),
        "circuit.L": (1.0, "float"),
        "circuit.C": (1.0, "float"),
    },
    "correlation": {
        "correlation.t_min": (0.0, "float"),
        "correlation.t_max": (20.0, "float"),
        "correlation.n_t": (401, "int"),
        "correlation.route": ("auto", ("auto", "closed", "quadrature", "modes")),
        "correlation.n_modes": (400, "int"),
        "correlation.bath_grid": ("linear", ("linear", "log")),
    },
    "moments": {},
    "density-matrix": {
        "density-matrix.q_max": (4.0, "float"),
        "density-matrix.n_q": (41, "int"),
    },
    "partition": {
        "partition.T_min": (0.1, "float"),
        "partition.T_max": (10.0, "float"),
        "partition.n_T": (50, "int"),
        "partition.grid": ("log", ("log", "linear")),
    },
    "dos": {
        "dos.e_max": (None, "ofloat"),
        "dos.n_energy": (1201, "int"),
        "dos.smearing": (None, "ofloat"),
        "dos.contour_real": (None, "ofloat"),
        "dos.n_explicit": (2048, "int"),
        "dos.contour_rtol": (1e-3, "float"),
    },
    "noise": {
        "noise.n_modes": (400, "int"),
        "noise.t_min": (0.0, "float"),
        "noise.t_max": (10.0, "float"),
        "noise.n_t": (201, "int"),
        "noise.bath_grid": ("linear", ("linear", "log")),
        "noise.omega_max": (None, "ofloat"),
    },
    "bath-export": {
        "bath-export.n_modes": (400, "int"),
        "bath-export.grid": ("linear", ("linear", "log")),
        "bath-export.omega_max": (None, "ofloat"),
        "bath-export.omega_min": (None, "ofloat"),
        "bath-export.mode_mass": (1.0, "float"),
        "bath-export.coverage_rtol": (0.05, "float"),
    },
    "simulate": {
        "simulate.N": (128, "int"),
        "simulate.t_min": (0.0, "float"),
        "simulate.t_max": (20.0, "float"),
        "simulate.n_t": (201, "int"),
        "simulate.q0": (1.0, "float"),
        "simulate.p0": (0.0, "float"),
        "simulate.preparation": ("shifted", ("shifted", "factorized")),
        "simulate.bath_grid": ("log", ("linear", "log")),
        "simulate.omega_max": (None, "ofloat"),
    },
    "decay": {
        "decay.T_min": (None, "ofloat"),
        "decay.T_max": (None, "ofloat"),
        "decay.n_T": (50, "int"),
    },
    "action": {
        "action.path_kind": ("mode", ("mode", "file", "random")),
        "action.path_file": (None, "ostr"),
        "action.mode_n": (1, "int"),
        "action.amplitude": (0.8, "float"),
        "action.phase": (0.0, "float"),
        "action.offset": (0.0, "float"),
        "action.samples": (64, "int"),
        "action.seed": (1234, "int"),
        "action.rtol": (1e-6, "float"),
    },
    "validate": {
        "validate.profile": ("default", ("default",)),
    },
}

COMMANDS = tuple(COMMAND_KEYS)


def _check_type(key: str, value, kind, origin: str):
    if isinstance(kind, tuple):
        if not isinstance(value, str) or value not in kind:
            raise ConfigError(f"{origin}: key {key!r} must be one of "
                              f"{', '.join(kind)}, got {value!r}")
        return value
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{origin}: key {key!r} must be an integer, "
                              f"got {value!r}")
        return value
    if kind in ("float", "ofloat"):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{origin}: key {key!r} must be a number, "
                              f"got {value!r}")
        return float(value)
    if kind == "ostr":
        if not isinstance(value, str):
            raise ConfigError(f"{origin}: key {key!r} must be a string, "
                              f"got {value!r}")
        return value
    raise AssertionError(kind)


def resolve_config(command: str, file_pairs: dict, file_origin: str,
                   set_pairs: dict) -> dict:
    """Merge defaults, config file, and --set overrides for one command.

    Returns the fully resolved flat mapping; every key listed in the
    defaults appears, so the manifest records each default the code
    filled in.  Unknown keys and cross-variant leftovers are rejected.
    """
    spec = dict(GLOBAL_KEYS)
    spec.update(COMMAND_KEYS[command])
    cfg = {k: d for k, (d, _) in spec.items()}
    user_keys = set()
    for pairs, origin in ((file_pairs, file_origin), (set_pairs, "--set")):
        for key, value in pairs.items():
            if key not in spec:
                raise ConfigError(f"{origin}: unknown key {key!r} for "
                                  f"command {command!r}")
            cfg[key] = _check_type(key, value, spec[key][1], origin)
            user_keys.add(key)

    # exactly one way to give the temperature
    if "thermal.T" in user_keys and "thermal.beta" in user_keys:
        raise ConfigError("set either thermal.T or thermal.beta, not both")
    if cfg["thermal.hbar"] <= 0.0 or cfg["thermal.kB"] <= 0.0:
        raise ConfigError("thermal.hbar and thermal.kB must be > 0")
    if cfg["thermal.beta"] is not None:
        if cfg["thermal.beta"] <= 0.0:
            raise ConfigError("thermal.beta must be > 0")
        cfg["thermal.T"] = 1.0 / (cfg["thermal.kB"] * cfg["thermal.beta"])
    elif cfg["thermal.T"] is None:
        cfg["thermal.T"] = 1.0
    if cfg["thermal.T"] < 0.0:
        raise ConfigError("thermal.T must be >= 0")
    cfg["thermal.beta"] = (None if cfg["thermal.T"] == 0.0 else
                           1.0 / (cfg["thermal.kB"] * cfg["thermal.T"]))

    # exactly one damping variant: reject keys of the variants not chosen
    variant = cfg["damping.variant"]
    allowed = {"none": set(), "ohmic": {"damping.gamma"},
               "drude": {"damping.gamma", "damping.omega_d"},
               "bath": {"damping.bath_file"}}[variant]
    for key in ("damping.gamma", "damping.omega_d", "damping.bath_file"):
        if key in user_keys and key not in allowed:
            raise ConfigError(f"key {key!r} does not apply to "
                              f"damping.variant = {variant!r}")
        if key not in allowed:
            cfg[key] = None
    if variant == "none":
        cfg["damping.gamma"] = 0.0
    if variant == "bath" and not cfg["damping.bath_file"]:
        raise ConfigError("damping.variant = bath requires damping.bath_file")
    if cfg["damping.gamma"] is not None and cfg["damping.gamma"] < 0.0:
        raise ConfigError("damping.gamma must be >= 0")
    if cfg["damping.omega_d"] is not None and cfg["damping.omega_d"] <= 0.0:
        raise ConfigError("damping.omega_d must be > 0")

    for key in ("system.M", "system.omega0", "system.q0"):
        if cfg[key] <= 0.0:
            raise ConfigError(f"{key} must be > 0")
    if cfg["numeric.n_max"] < 100:
        raise ConfigError("numeric.n_max must be >= 100")

    # command-specific sanity
    for key, value in cfg.items():
        tail = key.rsplit(".", 1)[-1]
        if tail in ("n_omega", "n_t", "n_T", "n_q", "n_energy") and value < 2:
            raise ConfigError(f"{key} must be >= 2")
        if tail in ("n_modes", "N") and isinstance(value, int) and value < 2:
            raise ConfigError(f"{key} must be >= 2")
    for lo, hi in (("spectrum.omega_min", "spectrum.omega_max"),
                   ("correlation.t_min", "correlation.t_max"),
                   ("partition.T_min", "partition.T_max"),
                   ("noise.t_min", "noise.t_max"),
                   ("simulate.t_min", "simulate.t_max"),
                   ("decay.T_min", "decay.T_max")):
        if lo in cfg and cfg[lo] is not None and cfg[hi] is not None \
                and cfg[lo] >= cfg[hi]:
            raise ConfigError(f"{lo} must be < {hi}")
    for key in ("partition.T_min", "decay.T_min", "dos.e_max",
                "dos.smearing", "dos.contour_real", "noise.omega_max",
                "simulate.omega_max", "bath-export.omega_max",
                "bath-export.omega_min", "density-matrix.q_max",
                "action.rtol", "dos.contour_rtol",
                "bath-export.coverage_rtol", "bath-export.mode_mass"):
        if key in cfg and cfg[key] is not None and cfg[key] <= 0.0:
            raise ConfigError(f"{key} must be > 0")
    return cfg


# ---------------------------------------------------------------------------
# building physics objects from a resolved configuration
# ---------------------------------------------------------------------------

def load_bath_csv(path: str, system_mass: float) -> BathSpec:
    """Read a bath exported by ``bath-export`` (columns m, omega, c)."""
    meta = {}
    rows = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read damping.bath_file {path!r}: {exc}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = _parse_scalar(value)
            continue
        parts = line.split(",")
        if parts[0].strip() and not parts[0].strip()[0].isdigit() \
                and parts[0].strip()[0] not in "+-.":
            continue                      # column-name row
        if len(parts) != 3:
            raise ConfigError(f"{path}:{lineno}: expected 3 columns "
                              f"(m, omega, c), got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: non-numeric entry in "
                              f"{line!r}")
    if not rows:
        raise ConfigError(f"{path}: no bath modes found")
    arr = np.asarray(rows, dtype=float)
    omega_max = float(meta.get("omega_max", arr[:, 1].max()))
    file_mass = meta.get("system_mass")
    if file_mass is not None and abs(float(file_mass) - system_mass) > \
            1e-12 * max(system_mass, 1.0):
        raise ConfigError(f"{path}: bath was exported for system_mass = "
                          f"{file_mass}, configuration has {system_mass}")
    return BathSpec(omega=arr[:, 1], coupling=arr[:, 2], mass=arr[:, 0],
                    system_mass=system_mass, omega_max=omega_max)


def make_damping(cfg: dict):
    """(damping model, BathSpec or None) from the resolved configuration."""
    variant = cfg["damping.variant"]
    w0 = cfg["system.omega0"]
    if variant == "none":
        return OhmicDamping(0.0), None
    if variant == "ohmic":
        return OhmicDamping(cfg["damping.gamma"] * w0), None
    if variant == "drude":
        return DrudeDamping(cfg["damping.gamma"] * w0,
                            cfg["damping.omega_d"] * w0), None
    bath = load_bath_csv(cfg["damping.bath_file"], cfg["system.M"])
    return DiscreteBathDamping(bath), bath


def make_oscillator(cfg: dict) -> OscillatorSpec:
    return OscillatorSpec(mass=cfg["system.M"], omega0=cfg["system.omega0"])


def make_thermal(cfg: dict) -> ThermalParams:
    # k_B T in the library's hbar = 1 energy (= frequency) units
    return ThermalParams(temperature=cfg["thermal.kB"] * cfg["thermal.T"]
                         / cfg["thermal.hbar"])


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------

def format_number(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def write_csv(path: Path, units: list[str], columns: list[str],
              rows, extra_comments: list[str] | None = None) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("# columns: " + ", ".join(
            f"{c} [{u}]" for c, u in zip(columns, units)) + "\n")
        for line in extra_comments or []:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(format_number(v) for v in row) + "\n")


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def write_manifest(path: Path, command: str, cfg: dict, outputs: dict,
                   results: dict, tolerances: dict) -> None:
    doc = {
        "command": command,
        "library": "qbrownian",
        "version": __version__,
        "config": _jsonable(cfg),
        "outputs": outputs,
        "results": _jsonable(results),
        "tolerances": _jsonable(tolerances),
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_gnuplot(path: Path, csv_name: str, xlabel: str, ylabel: str,
                  plot_lines: list[str], extra: list[str] | None = None) -> None:
    lines = [
        f"# gnuplot companion for {csv_name}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set grid",
    ]
    lines += extra or []
    lines.append("plot " + ", \\\n     ".join(plot_lines))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# the commands
# ---------------------------------------------------------------------------

def cmd_spectrum(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    thermal = make_thermal(cfg)
    w0 = osc.omega0
    grid = np.linspace(cfg["spectrum.omega_min"], cfg["spectrum.omega_max"],
                       cfg["spectrum.n_omega"])
    kind = cfg["spectrum.kind"]
    if kind == "oscillator":
        damp, _ = make_damping(cfg)
        resp = oscillator_response(osc, damp)
        s = fdt_spectrum(resp, thermal, grid * w0) * osc.mass * w0 ** 2
        columns, units = ["omega", "Sqq"], ["omega0", "hbar/(M*omega0^2)"]
        ylabel = "Sqq [hbar/(M*omega0^2)]"
    else:
        adm = resistor(cfg["circuit.R"]) if kind == "resistor" else \
            series_rlc(cfg["circuit.R"], cfg["circuit.L"], cfg["circuit.C"])
        s = current_noise(adm, thermal, grid * w0)
        columns, units = ["omega", "SII"], ["omega0", "hbar*omega0/R"]
        ylabel = "SII [hbar*omega0/R]"
    rows = np.column_stack([grid, s])
    csv = out_dir / "spectrum.csv"
    write_csv(csv, units, columns, rows)
    if gnuplot:
        write_gnuplot(out_dir / "spectrum.gp", csv.name,
                      "omega [omega0]", ylabel,
                      [f"'{csv.name}' using 1:2 with lines"])
    results = {"kind": kind, "peak_value": float(np.max(s)),
               "peak_omega": float(grid[int(np.argmax(s))])}
    return csv, results, {}


def cmd_correlation(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    thermal = make_thermal(cfg)
    damp, bath = make_damping(cfg)
    w0 = osc.omega0
    t = np.linspace(cfg["correlation.t_min"], cfg["correlation.t_max"],
                    cfg["correlation.n_t"]) / w0
    route = cfg["correlation.route"]
    variant = cfg["damping.variant"]
    if route == "auto":
        route = "modes" if variant == "bath" else (
            "closed" if variant in ("none", "ohmic") else "quadrature")
    if route == "closed":
        if variant not in ("none", "ohmic"):
            raise ConfigError("correlation.route = closed requires strictly "
                              "ohmic (or zero) damping")
        s = sqq_ohmic_closed_form(osc, damp.gamma, thermal, t,
                                  n_max=cfg["numeric.n_max"])
    elif route == "quadrature":
        if variant == "bath":
            raise ConfigError("correlation.route = quadrature needs a smooth "
                              "damping model; use route = modes")
        s = sqq_quadrature(osc, damp, thermal, t)
    else:
        if bath is None:
            bath = discretize_bath(damp, cfg["correlation.n_modes"],
                                   system_mass=osc.mass,
                                   grid=cfg["correlation.bath_grid"])
        ham = build_hamiltonian(osc, bath)
        s = two_time_correlation(ham, thermal, t)
    cfg = dict(cfg)
    cfg["correlation.route"] = route
    rows = np.column_stack([t * w0, np.asarray(s) * osc.mass * w0])
    csv = out_dir / "correlation.csv"
    write_csv(csv, ["1/omega0", "hbar/(M*omega0)"], ["t", "Sqq"], rows)
    if gnuplot:
        write_gnuplot(out_dir / "correlation.gp", csv.name, "t [1/omega0]",
                      "Sqq [hbar/(M*omega0)]",
                      [f"'{csv.name}' using 1:2 with lines"])
    results = {"route": route, "Sqq_t0": float(np.asarray(s)[0] * osc.mass * w0)}
    return csv, results, {}, cfg


def cmd_moments(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    thermal = make_thermal(cfg)
    damp, bath = make_damping(cfg)
    if bath is not None:
        m = equilibrium_system_moments(build_hamiltonian(osc, bath), thermal)
    else:
        m = second_moments(osc, damp, thermal, n_max=cfg["numeric.n_max"])
    w0 = osc.omega0
    q2 = m.q2 * osc.mass * w0
    p2 = m.p2 / (osc.mass * w0)
    csv = out_dir / "moments.csv"
    write_csv(csv, ["hbar/(M*omega0)", "M*hbar*omega0", "hbar^2"],
              ["q2", "p2", "uncertainty_product"],
              [[q2, p2, q2 * p2]])
    results = {"q2": q2, "p2": p2, "uncertainty_product": q2 * p2,
               "heisenberg_bound": 0.25}
    return csv, results, {}


def cmd_density_matrix(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    thermal = make_thermal(cfg)
    damp, bath = make_damping(cfg)
    if bath is not None:
        raise ConfigError("density-matrix needs a smooth damping model "
                          "(moments of a file bath: use the moments command)")
    length = 1.0 / np.sqrt(osc.mass * osc.omega0)     # sqrt(hbar/(M omega0))
    q = np.linspace(-cfg["density-matrix.q_max"], cfg["density-matrix.q_max"],
                    cfg["density-matrix.n_q"])
    rho = reduced_density_matrix(osc, damp, thermal, q * length,
                                 moments=second_moments(
                                     osc, damp, thermal,
                                     n_max=cfg["numeric.n_max"]))
    rows = [(qi, qj, rho[i, j] * length)
            for i, qi in enumerate(q) for j, qj in enumerate(q)]
    csv = out_dir / "density-matrix.csv"
    write_csv(csv, ["sqrt(hbar/(M*omega0))", "sqrt(hbar/(M*omega0))",
                    "sqrt(M*omega0/hbar)"],
              ["q", "qprime", "rho"], rows)
    if gnuplot:
        write_gnuplot(out_dir / "density-matrix.gp", csv.name,
                      "q [sqrt(hbar/(M*omega0))]",
                      "q' [sqrt(hbar/(M*omega0))]",
                      [f"'{csv.name}' using 1:2:3 with image"],
                      extra=["set view map", "set size square"])
    results = {"trace_grid": float(np.trapezoid(np.diag(rho), q * length)),
               "rho_00": float(rho[len(q) // 2, len(q) // 2] * length)}
    return csv, results, {}


def cmd_partition(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    damp, _ = make_damping(cfg)
    w0 = osc.omega0
    if cfg["partition.grid"] == "log":
        ts = np.geomspace(cfg["partition.T_min"], cfg["partition.T_max"],
                          cfg["partition.n_T"])
    else:
        ts = np.linspace(cfg["partition.T_min"], cfg["partition.T_max"],
                         cfg["partition.n_T"])
    n_max = cfg["numeric.n_max"]
    rows = []
    for t_red in ts:                       # deterministic input order
        th = ThermalParams(temperature=t_red * w0)
        lnz = log_partition(osc, damp, th, n_max=n_max)
        rows.append([t_red, np.exp(lnz), lnz,
                     -lnz * th.temperature / w0,
                     internal_energy(osc, damp, th, n_max=n_max) / w0])
    csv = out_dir / "partition.csv"
    write_csv(csv, ["hbar*omega0/kB", "1", "1", "hbar*omega0", "hbar*omega0"],
              ["T", "Z", "lnZ", "F", "U"], rows)
    if gnuplot:
        write_gnuplot(out_dir / "partition.gp", csv.name,
                      "T [hbar*omega0/kB]", "energy [hbar*omega0]",
                      [f"'{csv.name}' using 1:4 with lines",
                       f"'{csv.name}' using 1:5 with lines"],
                      extra=["set logscale x"]
                      if cfg["partition.grid"] == "log" else [])
    results = {"U_at_T_min": rows[0][4], "U_at_T_max": rows[-1][4]}
    return csv, results, {}


def cmd_dos(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    damp, _ = make_damping(cfg)
    w0 = osc.omega0
    e_max = cfg["dos.e_max"]
    dos = density_of_states(
        osc, damp,
        e_max=None if e_max is None else e_max * w0,
        n_energy=cfg["dos.n_energy"],
        smearing_width=None if cfg["dos.smearing"] is None
        else cfg["dos.smearing"] * w0,
        contour_real=None if cfg["dos.contour_real"] is None
        else cfg["dos.contour_real"] / w0,
        n_explicit=cfg["dos.n_explicit"],
        contour_rtol=cfg["dos.contour_rtol"])
    cfg = dict(cfg)
    cfg["dos.e_max"] = float(dos.energies[-1] - dos.ground_energy) / w0
    cfg["dos.smearing"] = dos.smearing / w0
    if cfg["dos.contour_real"] is None:
        cfg["dos.contour_real"] = 4.5 / cfg["dos.e_max"]
    rows = np.column_stack([dos.energies / w0, dos.rho * w0])
    csv = out_dir / "dos.csv"
    write_csv(csv, ["hbar*omega0", "1/(hbar*omega0)"], ["E", "rho"], rows,
              extra_comments=[
                  "continuum part only; the ground state carries a separate "
                  "delta peak (see manifest: ground_energy, ground_weight)"])
    if gnuplot:
        write_gnuplot(out_dir / "dos.gp", csv.name, "E [hbar*omega0]",
                      "rho [1/(hbar*omega0)]",
                      [f"'{csv.name}' using 1:2 with lines",
                       f"{dos.plateau * w0} with lines dashtype 2 "
                       f"title 'plateau'"])
    results = {"ground_energy": dos.ground_energy / w0,
               "ground_weight": dos.ground_weight,
               "plateau": dos.plateau * w0,
               "smearing": dos.smearing / w0,
               "contour_real": cfg["dos.contour_real"]}
    return csv, results, {"contour_rtol": cfg["dos.contour_rtol"]}, cfg


def cmd_noise(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    thermal = make_thermal(cfg)
    damp, bath = make_damping(cfg)
    w0 = osc.omega0
    if bath is None:
        om = cfg["noise.omega_max"]
        bath = discretize_bath(damp, cfg["noise.n_modes"],
                               system_mass=osc.mass,
                               omega_max=None if om is None else om * w0,
                               grid=cfg["noise.bath_grid"])
    t = np.linspace(cfg["noise.t_min"], cfg["noise.t_max"],
                    cfg["noise.n_t"]) / w0
    unit = osc.mass * w0 ** 3                       # hbar*M*omega0^3
    corr = noise_correlation(bath, thermal, t) / unit
    comm = np.imag(noise_commutator(bath, t)) / unit
    columns = ["t", "Sxx", "commutator_im"]
    units = ["1/omega0", "hbar*M*omega0^3", "hbar*M*omega0^3"]
    data = [t * w0, corr, comm]
    if bath.source is not None:
        data.insert(2, noise_correlation(bath, thermal, t,
                                         method="kernel_integral") / unit)
        columns.insert(2, "Sxx_kernel")
        units.insert(2, "hbar*M*omega0^3")
    csv = out_dir / "noise.csv"
    write_csv(csv, units, columns, np.column_stack(data))
    if gnuplot:
        write_gnuplot(out_dir / "noise.gp", csv.name, "t [1/omega0]",
                      "Sxx [hbar*M*omega0^3]",
                      [f"'{csv.name}' using 1:{k + 2} with lines"
                       for k in range(len(columns) - 1)])
    results = {"n_modes": bath.n_modes, "omega_max": bath.omega_max / w0,
               "Sxx_t0": float(corr[0])}
    return csv, results, {}


def cmd_bath_export(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    damp, bath = make_damping(cfg)
    w0 = osc.omega0
    if bath is None:
        om = cfg["bath-export.omega_max"]
        omin = cfg["bath-export.omega_min"]
        bath = discretize_bath(
            damp, cfg["bath-export.n_modes"], system_mass=osc.mass,
            omega_max=None if om is None else om * w0,
            grid=cfg["bath-export.grid"],
            omega_min=None if omin is None else omin * w0,
            mode_mass=cfg["bath-export.mode_mass"],
            coverage_rtol=cfg["bath-export.coverage_rtol"])
    cfg = dict(cfg)
    cfg["bath-export.omega_max"] = bath.omega_max / w0
    rows = np.column_stack([bath.mass, bath.omega, bath.coupling])
    csv = out_dir / "bath-export.csv"
    write_csv(csv, ["1", "1", "1"], ["m", "omega", "c"], rows,
              extra_comments=[
                  "natural units, hbar = kB = 1; load with "
                  "damping.variant = bath",
                  f"system_mass = {format_number(bath.system_mass)}",
                  f"omega_max = {format_number(bath.omega_max)}"])
    if gnuplot:
        write_gnuplot(out_dir / "bath-export.gp", csv.name, "omega",
                      "coupling c", [f"'{csv.name}' using 2:3 with impulses"])
    gamma0 = float(np.sum(bath.strength) / bath.system_mass)
    results = {"n_modes": bath.n_modes, "omega_max": bath.omega_max / w0,
               "gamma0_reconstructed": gamma0}
    return csv, results, {"coverage_rtol": cfg["bath-export.coverage_rtol"]}, cfg


def cmd_simulate(cfg, out_dir, gnuplot):
    osc = make_oscillator(cfg)
    thermal = make_thermal(cfg)
    damp, bath = make_damping(cfg)
    w0 = osc.omega0
    if bath is None:
        om = cfg["simulate.omega_max"]
        bath = discretize_bath(damp, cfg["simulate.N"],
                               system_mass=osc.mass,
                               omega_max=None if om is None else om * w0,
                               grid=cfg["simulate.bath_grid"])
    ham = build_hamiltonian(osc, bath)
    t = np.linspace(cfg["simulate.t_min"], cfg["simulate.t_max"],
                    cfg["simulate.n_t"]) / w0

    # displaced system, thermal bath; under the shifted preparation the
    # bath minima follow the initial position (no counterterm slip)
    q0 = cfg["simulate.q0"] / np.sqrt(osc.mass * w0)
    p0 = cfg["simulate.p0"] * np.sqrt(osc.mass * w0)
    shift = bath.coupling / (bath.mass * bath.omega ** 2)
    if cfg["simulate.preparation"] == "factorized":
        shift = np.zeros_like(shift)
    mean = np.zeros(ham.dim)
    mean[0], mean[1] = q0, p0
    mean[2::2] = shift * q0
    wgt = coth_weight(bath.omega, thermal)
    cov = np.zeros((ham.dim, ham.dim))
    cov[0, 0] = 1.0 / (2.0 * osc.mass * w0)
    cov[1, 1] = osc.mass * w0 / 2.0
    cov[2::2, 2::2] = np.diag(wgt / (2.0 * bath.mass * bath.omega ** 2))
    cov[3::2, 3::2] = np.diag(0.5 * bath.mass * wgt)
    states = propagate_trajectory(ham, GaussianState(mean=mean, cov=cov), t)

    a = ham.a_matrix
    rows = []
    min_var_prod = np.inf
    for tk, st in zip(t, states):
        vq, vp, cqp = st.system_variances
        q2 = vq + st.mean[0] ** 2
        p2 = vp + st.mean[1] ** 2
        det = vq * vp - cqp ** 2
        min_var_prod = min(min_var_prod, vq * vp)
        energy = 0.5 * (st.mean @ a @ st.mean + float(np.sum(a * st.cov)))
        rows.append([tk * w0, q2 * osc.mass * w0, p2 / (osc.mass * w0),
                     det, energy / w0])
    csv = out_dir / "simulate.csv"
    write_csv(csv, ["1/omega0", "hbar/(M*omega0)", "M*hbar*omega0",
                    "hbar^2", "hbar*omega0"],
              ["t", "q2", "p2", "det_cov", "energy"], rows)
    if gnuplot:
        write_gnuplot(out_dir / "simulate.gp", csv.name, "t [1/omega0]",
                      "second moments",
                      [f"'{csv.name}' using 1:2 with lines",
                       f"'{csv.name}' using 1:3 with lines"])
    gaps = np.diff(bath.omega)
    recurrence = float(2.0 * np.pi / gaps.min()) if gaps.size else None
    arr = np.asarray(rows)
    results = {"N": bath.n_modes,
               "recurrence_time_estimate": None if recurrence is None
               else recurrence * w0,
               "min_uncertainty_product": float(min_var_prod),
               "energy_drift": float(arr[:, 4].max() - arr[:, 4].min())}
    return csv, results, {}


def cmd_decay(cfg, out_dir, gnuplot):
    pot = CubicPotentialSpec(mass=cfg["system.M"],
                             omega0=cfg["system.omega0"],
                             q0=cfg["system.q0"] / np.sqrt(
                                 cfg["system.M"] * cfg["system.omega0"]))
    damp, _ = make_damping(cfg)
    w0 = cfg["system.omega0"]
    hbar, kb = cfg["thermal.hbar"], cfg["thermal.kB"]
    if cfg["damping.variant"] in ("none", "ohmic"):
        t0_lib = crossover_temperature_ohmic(pot, damp.gamma)
    else:
        t0_lib = crossover_temperature(pot, damp)
    t0_red = t0_lib / w0                       # units hbar*omega0/kB
    cfg = dict(cfg)
    if cfg["decay.T_min"] is None:
        cfg["decay.T_min"] = 0.2 * t0_red
    if cfg["decay.T_max"] is None:
        cfg["decay.T_max"] = 3.0 * t0_red
    ts = np.linspace(cfg["decay.T_min"], cfg["decay.T_max"], cfg["decay.n_T"])
    rows = [[t_red, fluctuation_eigenvalue(
        pot, damp, ThermalParams(temperature=t_red * w0), 1) / w0 ** 2]
        for t_red in ts]
    csv = out_dir / "decay.csv"
    write_csv(csv, ["hbar*omega0/kB", "omega0^2"], ["T", "Lambda1"], rows)
    if gnuplot:
        write_gnuplot(out_dir / "decay.gp", csv.name, "T [hbar*omega0/kB]",
                      "Lambda1 [omega0^2]",
                      [f"'{csv.name}' using 1:2 with lines",
                       "0 with lines dashtype 2 title ''"])
    results = {"T0": hbar * t0_lib / kb,
               "T0_reduced": t0_red,
               "barrier_position": pot.barrier_position
               * np.sqrt(pot.mass * w0),
               "barrier_height": pot.barrier_height / w0,
               "omega_b": pot.omega_b / w0,
               "well_curvature": pot.well_curvature / (pot.mass * w0 ** 2),
               "barrier_curvature": pot.barrier_curvature
               / (pot.mass * w0 ** 2)}
    return csv, results, {}, cfg


def cmd_action(cfg, out_dir, gnuplot):
    thermal = make_thermal(cfg)
    damp, _ = make_damping(cfg)
    mass = cfg["system.M"]
    if thermal.is_zero:
        raise ConfigError("action requires thermal.T > 0 (periodic paths "
                          "live on a finite imaginary-time interval)")
    beta_h = 1.0 / thermal.temperature          # hbar * beta, hbar = 1
    kind = cfg["action.path_kind"]
    if kind == "file":
        if not cfg["action.path_file"]:
            raise ConfigError("action.path_kind = file requires "
                              "action.path_file")
        try:
            raw = Path(cfg["action.path_file"]).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read action.path_file: {exc}")
        vals = []
        for lineno, line in enumerate(raw.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            cells = body.split(",")
            try:
                vals.append(float(cells[-1]))   # last column is q(tau_j)
            except ValueError:
                if vals:
                    raise ConfigError(f"{cfg['action.path_file']}:{lineno}: "
                                      f"non-numeric sample {cells[-1]!r}")
                continue                         # header row
        path = PathGrid(beta_hbar=beta_h, samples=np.asarray(vals))
    elif kind == "random":
        rng = np.random.default_rng(cfg["action.seed"])
        path = PathGrid(beta_hbar=beta_h,
                        samples=cfg["action.amplitude"]
                        * rng.standard_normal(cfg["action.samples"]))
    else:
        nu = 2.0 * np.pi * cfg["action.mode_n"] / beta_h
        amp, phase = cfg["action.amplitude"], cfg["action.phase"]
        off = cfg["action.offset"]
        path = PathGrid.from_callable(
            beta_h, cfg["action.samples"],
            lambda tau: off + amp * np.cos(nu * tau + phase))
    res = effective_action(path, damp, thermal, mass=mass,
                           rtol=cfg["action.rtol"])
    csv = out_dir / "action.csv"
    write_csv(csv, ["hbar", "hbar", "1", "1"],
              ["action", "quadrature", "n_modes", "kernel_samples"],
              [[res.action, res.quadrature, res.n_modes,
                res.kernel_samples]])
    results = {"action": res.action, "quadrature": res.quadrature,
               "route_defect": abs(res.action - res.quadrature)
               / max(abs(res.action), 1e-300),
               "n_samples": path.n_samples}
    return csv, results, {"route_rtol": cfg["action.rtol"]}


# ---------------------------------------------------------------------------
# the validation suite: cross-route oracles aggregated into one table
# ---------------------------------------------------------------------------

def _validation_checks(cfg):
    """Yield (name, deviation, tolerance) rows; deterministic throughout."""
    osc = OscillatorSpec(mass=1.0, omega0=1.0)
    t1 = ThermalParams(temperature=1.0)

    # fluctuation-dissipation decomposition: full coth line vs its
    # vacuum + Bose splitting, over frequencies and temperatures
    adm = resistor(1.0)
    w = np.linspace(-10.0, 10.0, 401)
    w = w[w != 0.0]
    dev = 0.0
    for t_val in (0.01, 1.0, 100.0):
        th = ThermalParams(temperature=t_val)
        total = current_noise(adm, th, w)
        vac, thermal_part = current_noise_parts(adm, th, w)
        dev = max(dev, float(np.max(np.abs(total - vac - thermal_part))
                             / np.max(np.abs(total))))
    yield "fdt-decomposition", dev, 1e-12

    # undamped moments against the bare-oscillator closed form
    m0 = second_moments(osc, OhmicDamping(0.0), t1)
    exact = 0.5 / np.tanh(0.5)
    yield ("moments-undamped",
           max(abs(m0.q2 - exact), abs(m0.p2 - exact)) / exact, 1e-10)

    # ohmic correlation: trigonometric/Matsubara closed form vs the
    # frequency-domain quadrature route
    t_grid = np.linspace(0.0, 10.0, 51)
    dev = 0.0
    for gamma, t_val in ((0.6, 0.3), (0.6, 2.0), (1.2, 1.0)):
        th = ThermalParams(temperature=t_val)
        closed = sqq_ohmic_closed_form(osc, gamma, th, t_grid)
        quadr = sqq_quadrature(osc, OhmicDamping(gamma), th, t_grid)
        dev = max(dev, float(np.max(np.abs(closed - quadr))
                             / np.max(np.abs(closed))))
    yield "correlation-routes", dev, 1e-6

    # Matsubara moments vs the normal-mode covariance of a discrete bath
    drude = DrudeDamping(0.5, 8.0)
    bath = discretize_bath(drude, 400, system_mass=1.0, grid="log",
                           omega_min=1e-4)
    ham = build_hamiltonian(osc, bath)
    modes = normal_modes(ham)
    min_prod = np.inf
    dev = 0.0
    for t_val in (0.5, 1.0, 5.0):
        th = ThermalParams(temperature=t_val)
        ana = second_moments(osc, drude, th)
        sim = equilibrium_system_moments(ham, th, modes=modes)
        dev = max(dev, abs(sim.q2 - ana.q2) / ana.q2,
                  abs(sim.p2 - ana.p2) / ana.p2)
        min_prod = min(min_prod, ana.uncertainty_product,
                       sim.uncertainty_product)
    yield "moments-bath-oracle", dev, 1e-3
    yield "heisenberg-bound", (0.25 - min_prod) / 0.25, 1e-12

    # two-time correlation: normal-mode route vs the matrix-exponential
    # ladder -- two independent propagation algorithms on one bath
    small = discretize_bath(drude, 40, system_mass=1.0)
    ham_s = build_hamiltonian(osc, small)
    t_small = np.linspace(0.0, 8.0, 17)
    c_modes = two_time_correlation(ham_s, t1, t_small)
    c_ladder = correlation_from_propagator(ham_s, t1, t_small)
    yield ("dynamics-correlation-routes",
           float(np.max(np.abs(c_modes - c_ladder))
                 / np.max(np.abs(c_modes))), 1e-10)

    # exact propagation: symplectic form preserved, time reversal returns
    s_step = propagator(ham_s, 0.37)
    jform = symplectic_form(ham_s.n_oscillators)
    yield ("symplecticity",
           float(np.max(np.abs(s_step @ jform @ s_step.T - jform))), 1e-10)
    z0 = np.zeros(ham_s.dim)
    z0[0] = 1.0
    z = z0.copy()
    for _ in range(20):
        z = s_step @ z
    z = flip_momenta(z)
    for _ in range(20):
        z = s_step @ z
    z = flip_momenta(z)
    yield "time-reversal", float(np.max(np.abs(z - z0))), 1e-8

    # noise statistics: bath sum vs band-limited kernel integral, plus
    # the classical white-noise limit at high temperature
    nb = discretize_bath(DrudeDamping(0.5, 4.0), 2000, system_mass=1.0)
    tn = np.linspace(0.0, 5.0, 21)
    s_sum = noise_correlation(nb, t1, tn)
    s_int = noise_correlation(nb, t1, tn, method="kernel_integral")
    yield ("noise-routes",
           float(np.max(np.abs(s_sum - s_int)) / abs(s_sum[0])), 1e-2)
    th_hot = ThermalParams(temperature=100.0 * 4.0)
    hot = noise_correlation(nb, th_hot, tn)
    classical = th_hot.temperature * damping_kernel(nb, tn)
    yield ("noise-classical-limit",
           float(np.max(np.abs(hot - classical)) / abs(classical[0])), 1e-2)

    # partition function: undamped closed form, the thermodynamic
    # derivative route to <q^2>, and the finite-bath sinh-product identity
    z_free = np.exp(log_partition(osc, OhmicDamping(0.0), t1))
    z_exact = 0.5 / np.sinh(0.5)
    yield "partition-undamped", abs(z_free - z_exact) / z_exact, 1e-10
    th7 = ThermalParams(temperature=0.7)
    q2_thermo = q2_from_partition(osc, drude, th7)
    q2_direct = position_variance(osc, drude, th7)
    yield "q2-routes", abs(q2_thermo - q2_direct) / q2_direct, 1e-6
    nb_small = discretize_bath(drude, 150, system_mass=1.0, grid="log",
                               omega_min=1e-3)
    ham_small = build_hamiltonian(osc, nb_small)
    freqs = normal_modes(ham_small).frequencies
    lnz_modes = (np.sum(_ln_2sinh(0.5 * nb_small.omega))
                 - np.sum(_ln_2sinh(0.5 * freqs)))
    lnz_mats = log_partition(osc, DiscreteBathDamping(nb_small), t1)
    yield "partition-bath-identity", abs(lnz_modes - lnz_mats), 1e-9

    # effective action: single-mode identity for both routes, and the
    # constant path
    th_act = t1
    beta_h = 1.0
    nu1 = 2.0 * np.pi / beta_h
    damp_act = DrudeDamping(0.5, 4.0)
    gh = float(np.real(damp_act.laplace(nu1 + 0j)))
    exact = beta_h * nu1 * gh * 0.8 ** 2 / 4.0
    grid = PathGrid.from_callable(beta_h, 64,
                                  lambda tau: 0.8 * np.cos(nu1 * tau))
    act = effective_action(grid, damp_act, th_act)
    yield "action-single-mode-fourier", abs(act.action - exact) / exact, 1e-6
    yield ("action-single-mode-quadrature",
           abs(act.quadrature - exact) / exact, 1e-6)
    const = effective_action(PathGrid.from_callable(
        beta_h, 16, lambda tau: np.full_like(tau, 0.7)), damp_act, th_act)
    yield "action-constant-path", abs(const.action), 0.0

    # crossover temperature: root finder vs the ohmic closed form
    pot = CubicPotentialSpec(mass=1.0, omega0=1.0, q0=1.0)
    dev = 0.0
    for gamma in (0.3, 1.0, 2.5):
        t_root = crossover_temperature(pot, OhmicDamping(gamma))
        t_closed = crossover_temperature_ohmic(pot, gamma)
        dev = max(dev, abs(t_root - t_closed) / t_closed)
    yield "crossover-root-vs-closed-form", dev, 1e-10


def _ln_2sinh(x):
    return x + np.log1p(-np.exp(-2.0 * x))


def cmd_validate(cfg, out_dir, gnuplot, quiet=False):
    rows = []
    failures = 0
    for name, dev, tol in _validation_checks(cfg):
        status = "pass" if dev <= tol else "fail"
        failures += status == "fail"
        rows.append([name, dev, tol, status])
    csv = out_dir / "validate.csv"
    with open(csv, "w", newline="\n") as fh:
        fh.write("# columns: check [name], deviation [relative or absolute "
                 "as defined per check], tolerance [same], status [pass/fail]\n")
        fh.write("check,deviation,tolerance,status\n")
        for name, dev, tol, status in rows:
            fh.write(f"{name},{format_number(dev)},{format_number(tol)},"
                     f"{status}\n")
    if not quiet:
        width = max(len(r[0]) for r in rows)
        print(f"{'check':<{width}}  {'deviation':>12}  {'tolerance':>12}  status")
        for name, dev, tol, status in rows:
            print(f"{name:<{width}}  {dev:>12.3e}  {tol:>12.3e}  {status}")
    passed = len(rows) - failures
    print(f"validation: {passed}/{len(rows)} checks passed")
    results = {"checks": len(rows), "passed": passed, "failed": failures,
               "table": {r[0]: {"deviation": r[1], "tolerance": r[2],
                                "status": r[3]} for r in rows}}
    tolerances = {r[0]: r[2] for r in rows}
    return csv, results, tolerances, None, failures


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

COMMAND_HELP = {
    "spectrum": "equilibrium power spectrum S(omega) (oscillator or circuit)",
    "correlation": "position autocorrelation S_qq(t)",
    "moments": "equilibrium second moments <q^2>, <p^2>",
    "density-matrix": "coordinate-space reduced density matrix rho(q, q')",
    "partition": "partition function and energies over a temperature sweep",
    "dos": "density of states by Bromwich inversion of Z(beta)",
    "noise": "quantum Langevin noise statistics of a discretized bath",
    "bath-export": "write the discretized bath modes (m, omega, c)",
    "simulate": "propagate system + bath exactly; trajectory statistics",
    "decay": "crossover temperature and barrier fluctuation mode",
    "action": "imaginary-time effective action of a periodic path",
    "validate": "run the cross-route oracle suite and print a pass/fail table",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbrownian",
        description="Equilibrium quantum Brownian motion: reproducible "
                    "CSV + JSON-manifest runs over one shared "
                    "configuration format.")
    parser.add_argument("--version", action="version",
                        version=f"qbrownian {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="flat key=value configuration file")
    common.add_argument("--out", metavar="DIR", default=".",
                        help="output directory (default: current)")
    common.add_argument("--set", metavar="KEY=VALUE", action="append",
                        default=[], dest="overrides",
                        help="override one configuration key (repeatable)")
    common.add_argument("--gnuplot", action="store_true",
                        help="also write a gnuplot companion script")
    common.add_argument("--quiet", action="store_true",
                        help="suppress progress chatter")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMAND_HELP[name])
    return parser


RUNNERS = {
    "spectrum": cmd_spectrum,
    "correlation": cmd_correlation,
    "moments": cmd_moments,
    "density-matrix": cmd_density_matrix,
    "partition": cmd_partition,
    "dos": cmd_dos,
    "noise": cmd_noise,
    "bath-export": cmd_bath_export,
    "simulate": cmd_simulate,
    "decay": cmd_decay,
    "action": cmd_action,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_pairs = {}
        origin = "(no config file)"
        if args.config:
            origin = args.config
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config!r}: {exc}")
            file_pairs = parse_config_text(text, origin)
        set_pairs = {}
        for item in args.overrides:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if key in set_pairs:
                raise ConfigError(f"--set: duplicate key {key!r}")
            set_pairs[key] = _parse_scalar(value)
        cfg = resolve_config(args.command, file_pairs, origin, set_pairs)
        out_dir = Path(args.out)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            probe = out_dir / ".write-probe"
            probe.touch()
            probe.unlink()
        except OSError as exc:
            raise ConfigError(f"output directory {args.out!r} is not "
                              f"writable: {exc}")

        if args.command == "validate":
            csv, results, tolerances, _, failures = cmd_validate(
                cfg, out_dir, args.gnuplot, quiet=args.quiet)
            resolved = cfg
            exit_code = EXIT_VALIDATION if failures else EXIT_OK
        else:
            outcome = RUNNERS[args.command](cfg, out_dir, args.gnuplot)
            csv, results, tolerances = outcome[0], outcome[1], outcome[2]
            resolved = outcome[3] if len(outcome) > 3 else cfg
            exit_code = EXIT_OK
        tolerances = dict(tolerances)
        tolerances.setdefault("summation_window_consistency", 1e-8)
        gp = csv.with_suffix(".gp")
        outputs = {"csv": csv.name,
                   "manifest": csv.stem + ".manifest.json",
                   "gnuplot": gp.name if gp.exists() and args.gnuplot
                   else None}
        write_manifest(out_dir / outputs["manifest"], args.command, resolved,
                       outputs, results, tolerances)
        if not args.quiet and args.command != "validate":
            wrote = [outputs["csv"], outputs["manifest"]]
            if outputs["gnuplot"]:
                wrote.append(outputs["gnuplot"])
            print(f"wrote {', '.join(wrote)} in {out_dir}")
        return exit_code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QBrownianError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
