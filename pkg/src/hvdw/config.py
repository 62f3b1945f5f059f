"""Run configuration: key = value files, pair syntax and fingerprints.

Config file format: one ``key = value`` per line, ``#`` starts a comment,
blank lines are ignored. Recognised keys (defaults in brackets):

    fine_structure         fine-structure constant [7.2973525693e-3]
    lamb_shift_ghz         Lamb-shift splitting of the n manifold, GHz [1.0]
    basis_size             pseudo-states per channel [120]
    basis_scale            Sturmian scale lambda; "auto" means 1/n [auto]
    basis_size_l<k>        per-channel size override, e.g. basis_size_l3 = 150
    basis_scale_l<k>       per-channel scale override
    degenerate_threshold   |gap| below which a virtual state is intra-manifold [1e-9]
    wick_rtol              relative tolerance of the imaginary-axis integral [1e-10]
    symmetry               + (gerade) or - (ungerade) [+]
    averaging              projection-average | single-projection | fine-structure-average
    tolerance              relative tolerance of the table1 self-check [1e-6]
    workers                threads for curve rows [4]
    si_energy              J per Hartree used by --si [CODATA 2018]
    si_length              m per Bohr radius used by --si [CODATA 2018]
    output                 CSV path; "-" for stdout [-]

Command-line flags override file values.
"""

import hashlib
import json
import re
from dataclasses import asdict, dataclass, fields, replace

from .atomic import L_LETTERS, AveragingScheme, BoundState
from .constants import BOHR_M, DEFAULT_LAMB_SHIFT_GHZ, FINE_STRUCTURE, HARTREE_J, ghz_to_hartree
from .interaction import PairSpec
from .response import Settings


class ConfigError(ValueError):
    """Malformed configuration or pair specification (a usage error)."""


@dataclass(frozen=True)
class RunConfig:
    fine_structure: float = FINE_STRUCTURE
    lamb_shift_ghz: float = DEFAULT_LAMB_SHIFT_GHZ
    basis_size: int = 120
    basis_scale: float | None = None
    channel_sizes: tuple = ()
    channel_scales: tuple = ()
    degenerate_threshold: float = 1e-9
    wick_rtol: float = 1e-10
    symmetry: int = 1
    averaging: str = AveragingScheme.PROJECTION.value
    tolerance: float = 1e-6
    workers: int = 4
    si_energy: float = HARTREE_J
    si_length: float = BOHR_M
    output: str = "-"

    def __post_init__(self):
        for name in ("degenerate_threshold", "wick_rtol", "tolerance"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not self.lamb_shift_ghz > 0:
            raise ConfigError("lamb_shift_ghz must be positive")
        if not 0 < self.fine_structure < 1:
            raise ConfigError("fine_structure must lie in (0, 1)")
        if self.basis_size < 4:
            raise ConfigError("basis_size must be at least 4")
        if self.symmetry not in (1, -1):
            raise ConfigError("symmetry must be + or -")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        try:
            AveragingScheme(self.averaging)
        except ValueError:
            raise ConfigError(f"unknown averaging scheme {self.averaging!r}") from None

    def settings(self):
        return Settings(
            size=self.basis_size,
            scale=self.basis_scale,
            channel_sizes=self.channel_sizes,
            channel_scales=self.channel_scales,
            degenerate_threshold=self.degenerate_threshold,
            lamb_shift=ghz_to_hartree(self.lamb_shift_ghz),
            fine_structure=self.fine_structure,
            wick_rtol=self.wick_rtol,
        )

    def fingerprint(self):
        """Short SHA-256 of every field that can change a number in the output."""
        payload = {k: v for k, v in asdict(self).items() if k not in ("output", "workers")}
        blob = json.dumps(payload, sort_keys=True, default=repr).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def header_lines(self):
        lines = [f"config_fingerprint = {self.fingerprint()}"]
        for f in fields(self):
            if f.name in ("output", "workers"):
                continue
            lines.append(f"{f.name} = {format_value(getattr(self, f.name))}")
        return lines


def format_value(v):
    if v is None:
        return "auto"
    if isinstance(v, tuple):
        return ",".join(f"l{l}:{x}" for l, x in v) or "none"
    return repr(v) if isinstance(v, float) else str(v)


_SCALAR_KEYS = {
    "fine_structure": float,
    "lamb_shift_ghz": float,
    "basis_size": int,
    "degenerate_threshold": float,
    "wick_rtol": float,
    "tolerance": float,
    "workers": int,
    "si_energy": float,
    "si_length": float,
    "output": str,
    "averaging": str,
}
_CHANNEL_KEY = re.compile(r"basis_(size|scale)_l(\d+)$")


def _parse_symmetry(text):
    text = text.strip()
    if text in ("+", "+1", "1", "gerade"):
        return 1
    if text in ("-", "-1", "ungerade"):
        return -1
    raise ConfigError(f"symmetry must be + or -, got {text!r}")


def parse_config_text(text, base=None):
    """Apply ``key = value`` lines to ``base`` (default RunConfig())."""
    values = {}
    sizes = dict((base or RunConfig()).channel_sizes)
    scales = dict((base or RunConfig()).channel_scales)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key in _SCALAR_KEYS:
                values[key] = _SCALAR_KEYS[key](value)
            elif key == "basis_scale":
                values[key] = None if value == "auto" else float(value)
            elif key == "symmetry":
                values[key] = _parse_symmetry(value)
            elif m := _CHANNEL_KEY.match(key):
                target = sizes if m.group(1) == "size" else scales
                target[int(m.group(2))] = int(value) if m.group(1) == "size" else float(value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    values["channel_sizes"] = tuple(sorted(sizes.items()))
    values["channel_scales"] = tuple(sorted(scales.items()))
    return replace(base or RunConfig(), **values)


def load_config(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_config_text(text, base)


_STATE = re.compile(r"^(\d+)([A-Za-z])$")


def parse_state(text):
    m = _STATE.match(text.strip())
    if not m:
        raise ConfigError(f"bad state {text!r}; expected e.g. 12D or 1S")
    n, letter = int(m.group(1)), m.group(2).upper()
    if letter not in L_LETTERS:
        raise ConfigError(f"unknown orbital letter {letter!r}")
    try:
        return BoundState(n, L_LETTERS.index(letter))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_pair(text, config=None):
    """Parse ``<n><L>:<n'><L'>[:m=<int>][:sym=+|-]`` into a PairSpec.

    An explicit ``m`` selects single-projection averaging; otherwise the
    config's scheme applies.
    """
    config = config or RunConfig()
    parts = text.strip().split(":")
    if len(parts) < 2:
        raise ConfigError(f"bad pair {text!r}; expected e.g. 12D:1S")
    a, b = parse_state(parts[0]), parse_state(parts[1])
    m, symmetry = None, config.symmetry
    for opt in parts[2:]:
        key, _, value = opt.partition("=")
        if key == "m":
            try:
                m = int(value)
            except ValueError:
                raise ConfigError(f"bad projection in {opt!r}") from None
        elif key == "sym":
            symmetry = _parse_symmetry(value)
        else:
            raise ConfigError(f"unknown pair option {opt!r}")
    averaging = config.averaging
    if m is not None:
        if abs(m) > a.l:
            raise ConfigError(f"projection m={m} not allowed for {a.label}")
        averaging = AveragingScheme.SINGLE.value
    try:
        return PairSpec(
            state_a=a,
            state_b=b,
            identical=True,
            symmetry=symmetry,
            averaging=averaging,
            m=m or 0,
            settings=config.settings(),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
