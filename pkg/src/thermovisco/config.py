"""
Run configuration: strict INI parsing, defaults and validation.

Every accepted key is listed in :data:`DEFAULTS`; anything else is an error.
Values are parsed with :mod:`configparser` (``#`` and ``;`` start comments,
duplicate sections or keys are rejected, keys are case-sensitive).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

from . import eos as eos_mod
from .errors import DomainError, ParseError, ValidationError
from .params import MaterialParams

MODELS = ("maxwell", "kbkz")
EOS_FAMILIES = ("polytropic", "nasg")
ELASTIC_LAWS = ("hookean", "fenep")
PRESETS = ("uniform", "riemann", "smooth-wave", "heat-pulse")
BOUNDARIES = ("periodic", "transmissive")


def _vec3(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("expected three comma-separated numbers")
    return tuple(float(p) for p in parts)


# (section, key): (parser, default, description)
DEFAULTS: Dict[Tuple[str, str], Tuple[Any, Any, str]] = {
    ("model", "model"): (str, "maxwell", "maxwell or kbkz"),
    ("model", "eos"): (str, "polytropic", "polytropic or nasg"),
    ("model", "elastic"): (str, "hookean", "hookean or fenep (maxwell only)"),
    ("eos", "cv"): (float, 1.0, "specific heat at constant volume"),
    ("eos", "gamma"): (float, 1.4, "adiabatic exponent, > 1"),
    ("eos", "theta_ref"): (float, 1.0, "reference temperature"),
    ("eos", "rho_ref"): (float, 1.0, "reference density"),
    ("eos", "b"): (float, 0.0, "NASG covolume"),
    ("eos", "q"): (float, 0.0, "NASG energy offset"),
    ("eos", "p_inf"): (float, 0.0, "NASG stiffening pressure"),
    ("elastic", "K0"): (float, 0.5, "stiffness K(theta) = K0 + K1 theta"),
    ("elastic", "K1"): (float, 0.5, "stiffness slope"),
    ("elastic", "b_ext"): (float, 10.0, "FENE-P maximum extension"),
    ("elastic", "K0_2"): (float, 0.5, "K-BKZ second-family K0"),
    ("elastic", "K1_2"): (float, 0.5, "K-BKZ second-family K1"),
    ("material", "alpha"): (float, 1.0, "polymer number density per mass"),
    ("material", "k_B"): (float, 1.0, "Boltzmann-like constant"),
    ("material", "zeta"): (float, 4.0, "drag coefficient"),
    ("material", "tau0"): (float, 1.0, "heat-flux relaxation time"),
    ("material", "kappa"): (float, 1.0, "thermal conductivity"),
    ("material", "e_ref"): (float, 1.0, "reference energy of |Y|^2"),
    ("material", "rho_R"): (float, 1.0, "reference-configuration density"),
    ("material", "body_force"): (_vec3, (0.0, 0.0, 0.0), "specific body force"),
    ("grid", "N"): (int, 200, "number of cells, >= 4"),
    ("grid", "x0"): (float, 0.0, "left end"),
    ("grid", "x1"): (float, 1.0, "right end"),
    ("grid", "boundary"): (str, "periodic", "periodic or transmissive"),
    ("initial", "preset"): (str, "uniform", "uniform, riemann, smooth-wave or heat-pulse"),
    ("initial", "rho"): (float, 1.0, "background density"),
    ("initial", "theta"): (float, 1.0, "background temperature"),
    ("initial", "velocity"): (_vec3, (0.0, 0.0, 0.0), "background velocity"),
    ("initial", "heat_flux"): (_vec3, (0.0, 0.0, 0.0), "background heat flux"),
    ("initial", "strain"): (float, 1.0, "C = strain * (k_B theta / K) I"),
    ("initial", "amplitude"): (float, 0.01, "smooth-wave relative density amplitude"),
    ("initial", "wavenumber"): (int, 1, "smooth-wave periods per domain"),
    ("initial", "rho_left"): (float, 2.0, "riemann left density"),
    ("initial", "rho_right"): (float, 1.0, "riemann right density"),
    ("initial", "theta_left"): (float, 1.0, "riemann left temperature"),
    ("initial", "theta_right"): (float, 1.0, "riemann right temperature"),
    ("initial", "split"): (float, 0.5, "riemann interface as domain fraction"),
    ("initial", "pulse_amplitude"): (float, 0.1, "heat-pulse temperature bump"),
    ("initial", "pulse_width"): (float, 0.05, "heat-pulse half-width as domain fraction"),
    ("initial", "pulse_center"): (float, 0.5, "heat-pulse centre as domain fraction"),
    ("run", "cfl"): (float, 0.5, "CFL number in (0, 0.9]"),
    ("run", "t_end"): (float, 1.0, "final time"),
    ("run", "max_steps"): (int, 100000, "step limit"),
    ("run", "rng_seed"): (int, 0, "seed for any randomized step"),
    ("relax", "dt"): (float, 0.1, "output interval of the relax command"),
    ("relax", "t_end"): (float, 20.0, "final time of the relax command"),
    ("output", "directory"): (str, "output", "output directory"),
    ("output", "snapshot_every"): (int, 100, "snapshot interval in steps, 0 = final only"),
    ("output", "precision"): (int, 17, "significant digits in CSV output"),
}


def _attr(section, key):
    """Attribute name of a key; relax keys are prefixed to avoid clashes."""
    if section == "relax":
        return "relax_" + key
    if section == "output" and key == "directory":
        return "output_dir"
    return key


@dataclass
class RunConfig:
    """Parsed and validated configuration; attribute names follow :data:`DEFAULTS`."""

    values: Dict[str, Any] = field(default_factory=dict)
    sections: Dict[str, str] = field(default_factory=dict)

    def __getattr__(self, name):
        values = self.__dict__.get("values", {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    def material(self) -> MaterialParams:
        v = self.values
        if v["eos"] == "nasg":
            eos = eos_mod.NASG(v["cv"], v["gamma"], v["theta_ref"], v["rho_ref"],
                               b=v["b"], q=v["q"], p_inf=v["p_inf"])
        else:
            eos = eos_mod.PolytropicGas(v["cv"], v["gamma"], v["theta_ref"], v["rho_ref"])
        if v["elastic"] == "fenep":
            elastic = eos_mod.FENEP(v["K0"], v["K1"], v["b_ext"])
        else:
            elastic = eos_mod.Hookean(v["K0"], v["K1"])
        return MaterialParams(eos=eos, elastic=elastic, alpha=v["alpha"], k_B=v["k_B"],
                              zeta=v["zeta"], tau0=v["tau0"], kappa=v["kappa"],
                              e_ref=v["e_ref"], rho_R=v["rho_R"], body_force=v["body_force"])

    def kbkz_params(self):
        from .variants import KBKZParams

        v = self.values
        return KBKZParams(v["K0"], v["K1"], v["K0_2"], v["K1_2"])


def defaults_table():
    """Markdown table of every key, its default and meaning."""
    rows = ["| section | key | default | meaning |", "|---|---|---|---|"]
    for (sec, key), (_, default, doc) in DEFAULTS.items():
        if isinstance(default, tuple):
            default = ", ".join(str(x) for x in default)
        rows.append(f"| {sec} | {key} | {default} | {doc} |")
    return "\n".join(rows)


def _reader():
    cp = configparser.ConfigParser(
        strict=True, interpolation=None, comment_prefixes=("#", ";"),
        inline_comment_prefixes=("#",), empty_lines_in_values=False,
        default_section="\x00unused")
    cp.optionxform = str
    return cp


def _line_of(text, section, key):
    current = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
        elif current == section and "=" in line and line.split("=", 1)[0].strip() == key:
            return n
    return None


def parse_config(text) -> RunConfig:
    """Parse INI text into a validated :class:`RunConfig`.

    Raises
    ------
    ParseError
        Malformed syntax, duplicate sections or keys, unknown sections or keys.
    ValidationError
        A value of the wrong type or outside its admissible range.
    """
    cp = _reader()
    try:
        cp.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ParseError(exc.lineno, f"duplicate key {exc.option!r} in [{exc.section}]") from None
    except configparser.DuplicateSectionError as exc:
        raise ParseError(exc.lineno, f"duplicate section [{exc.section}]") from None
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError(exc.lineno, "key outside of a [section]") from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ParseError(line, "malformed line, expected 'key = value'") from None

    known_sections = {s for s, _ in DEFAULTS}
    values, sections = {}, {}
    for (sec, key), (_, default, _) in DEFAULTS.items():
        values[_attr(sec, key)] = default
        sections[_attr(sec, key)] = sec
    for sec in cp.sections():
        if sec not in known_sections:
            raise ParseError(_line_of_section(text, sec), f"unknown section [{sec}]")
        for key, raw in cp.items(sec):
            if (sec, key) not in DEFAULTS:
                raise ParseError(_line_of(text, sec, key), f"unknown key {key!r} in [{sec}]")
            conv = DEFAULTS[(sec, key)][0]
            try:
                values[_attr(sec, key)] = conv(raw.strip())
            except ValueError as exc:
                raise ValidationError(key, f"cannot parse {raw.strip()!r}: {exc}") from None
    cfg = RunConfig(values, sections)
    validate(cfg)
    return cfg


def _line_of_section(text, section):
    for n, raw in enumerate(text.splitlines(), 1):
        if raw.split("#", 1)[0].strip() == f"[{section}]":
            return n
    return None


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _require(cond, key, reason):
    if not cond:
        raise ValidationError(key, reason)


def validate(cfg: RunConfig):
    """Range checks; raises :class:`ValidationError` on the first violation."""
    v = cfg.values
    _require(v["model"] in MODELS, "model", f"must be one of {MODELS}")
    _require(v["eos"] in EOS_FAMILIES, "eos", f"must be one of {EOS_FAMILIES}")
    _require(v["elastic"] in ELASTIC_LAWS, "elastic", f"must be one of {ELASTIC_LAWS}")
    _require(not (v["model"] == "kbkz" and v["elastic"] == "fenep"), "elastic",
             "the kbkz model supports only the hookean law")
    _require(v["gamma"] > 1, "gamma", "gamma must exceed 1")
    for key in ("cv", "theta_ref", "rho_ref", "K0", "K1", "K0_2", "K1_2", "b_ext",
                "alpha", "k_B", "zeta", "tau0", "kappa", "rho_R"):
        _require(v[key] > 0, key, f"{key} must be positive")
    for key in ("b", "p_inf", "e_ref"):
        _require(v[key] >= 0, key, f"{key} must be non-negative")
    _require(v["N"] >= 4, "N", "N must be at least 4")
    _require(v["x1"] > v["x0"], "x1", "x1 must exceed x0")
    _require(v["boundary"] in BOUNDARIES, "boundary", f"must be one of {BOUNDARIES}")
    _require(v["preset"] in PRESETS, "preset", f"must be one of {PRESETS}")
    for key in ("rho", "theta", "strain", "rho_left", "rho_right", "theta_left", "theta_right",
                "pulse_width"):
        _require(v[key] > 0, key, f"{key} must be positive")
    _require(0 <= v["amplitude"] < 1, "amplitude", "amplitude must lie in [0, 1)")
    _require(v["wavenumber"] >= 1, "wavenumber", "wavenumber must be at least 1")
    _require(0 < v["split"] < 1, "split", "split must lie in (0, 1)")
    _require(0 < v["pulse_center"] < 1, "pulse_center", "pulse_center must lie in (0, 1)")
    _require(v["pulse_amplitude"] > -v["theta"], "pulse_amplitude",
             "pulse must keep the temperature positive")
    _require(0 < v["cfl"] <= 0.9, "cfl", "cfl must lie in (0, 0.9]")
    _require(v["t_end"] > 0, "t_end", "t_end must be positive")
    _require(v["max_steps"] >= 1, "max_steps", "max_steps must be at least 1")
    _require(v["snapshot_every"] >= 0, "snapshot_every", "snapshot_every must be >= 0")
    _require(1 <= v["precision"] <= 17, "precision", "precision must lie in [1, 17]")
    _require(v["relax_dt"] > 0, "dt", "dt must be positive")
    _require(v["relax_t_end"] > 0, "t_end", "relax t_end must be positive")
    if v["eos"] == "nasg":
        for key in ("rho", "rho_left", "rho_right"):
            _require(v[key] * v["b"] < 1, key, "density must stay below 1/b")
    try:
        cfg.material()
    except DomainError as exc:
        raise ValidationError("material", str(exc)) from None
    return cfg
