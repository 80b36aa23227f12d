"""Experiment configuration files.

INI-style text read with :mod:`configparser`. Sections::

    [experiment]   schema = 1, name, expected_verdict
    [family]       kind = restricted_power | permutation | lamplighter | finitary_symmetric
    [endomorphism] kind = identity | shift_right | shift_left | inner | power | permute_coordinates
    [subgroup]     name = derived | center | base | alt | trivial | whole | coordinatewise | generated
    [exhaustion]   kind = windows | generating_set | generated | sets
    [restricted_exhaustion]  same keys as [exhaustion], optional
    [run]          depth, budget, seed, tolerance, member, n_max
    [witness]      n_min, n_max, ratio (optional growth witness)
    [props]        trials

Elements use each family's text format and are separated by ``;``; in
``members`` each line is one exhaustion member.
"""

from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import morphisms as mo
from .at_harness import GrowthSpec, Verdict
from .errors import ConfigError, EntropyLabError
from .groups import (DEFAULT_BUDGET, FinitarySymmetric, FiniteGroup, GroupFamily, Lamplighter,
                     NormalSubgroupSpec, PermutationGroup, RestrictedPower, alternating_group,
                     cyclic_group, dihedral_group, quaternion_group, subgroup_closure,
                     symmetric_group)

SCHEMA_VERSION = 1
BUDGET_ENV = "ENTROPYLAB_BUDGET"

_SECTIONS = {
    "experiment": {"schema", "name", "expected_verdict", "description"},
    "family": {"kind", "base", "p", "n", "index", "degree", "generators", "preset"},
    "endomorphism": {"kind", "element", "k", "mapping"},
    "subgroup": {"name", "values", "generators"},
    "exhaustion": {"kind", "widths", "start", "members", "values"},
    "restricted_exhaustion": {"kind", "widths", "start", "members", "values"},
    "run": {"depth", "budget", "seed", "tolerance", "member", "n_max"},
    "witness": {"n_min", "n_max", "ratio"},
    "props": {"trials"},
}


@dataclass
class ExperimentConfig:
    path: str
    name: str
    family: GroupFamily
    phi: mo.Endomorphism
    H: NormalSubgroupSpec | None
    exhaustion: list[frozenset]
    restricted_exhaustion: list[frozenset] | None
    depth: int
    budget: int
    budget_source: str
    seed: int
    tolerance: float
    member: int
    n_max: int
    growth: GrowthSpec | None
    expected_verdict: Verdict | None
    trials: int
    raw: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        """Every section with the values actually used."""
        out = {k: dict(v) for k, v in self.raw.items()}
        out["run"] = {"depth": self.depth, "budget": self.budget, "budget_source": self.budget_source,
                      "seed": self.seed, "tolerance": self.tolerance, "member": self.member,
                      "n_max": self.n_max}
        out.setdefault("experiment", {})["schema"] = SCHEMA_VERSION
        return out


class _Reader:
    """configparser plus the line number of every key, for diagnostics."""

    def __init__(self, text: str, path: str):
        self.path = path
        cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
        try:
            cp.read_string(text, source=path)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigError(str(exc).splitlines()[0], line=line) from None
        self.cp = cp
        self.lines: dict[tuple[str, str], int] = {}
        self.section_lines: dict[str, int] = {}
        section = None
        for no, raw in enumerate(text.splitlines(), start=1):
            m = re.match(r"\s*\[([^\]]+)\]", raw)
            if m:
                section = m.group(1).strip()
                self.section_lines[section] = no
                continue
            m = re.match(r"([A-Za-z_][\w-]*)\s*[=:]", raw)
            if m and section is not None:
                self.lines[(section, m.group(1).lower())] = no
        for sec in cp.sections():
            if sec not in _SECTIONS:
                raise ConfigError(f"unknown section [{sec}]", sec, self.section_lines.get(sec))
            for key in cp[sec]:
                if key not in _SECTIONS[sec]:
                    raise ConfigError("unknown key", f"{sec}.{key}", self.lines.get((sec, key)))

    def has(self, sec: str, key: str | None = None) -> bool:
        if key is None:
            return self.cp.has_section(sec)
        return self.cp.has_option(sec, key)

    def error(self, sec: str, key: str, msg: str) -> ConfigError:
        line = self.lines.get((sec, key), self.section_lines.get(sec))
        return ConfigError(msg, f"{sec}.{key}", line)

    def get(self, sec: str, key: str, default=None, required=False) -> str | None:
        if self.has(sec, key):
            return self.cp.get(sec, key).strip()
        if required:
            line = self.section_lines.get(sec)
            raise ConfigError("missing required field", f"{sec}.{key}", line)
        return default

    def integer(self, sec: str, key: str, default=None, positive=True, required=False) -> int | None:
        text = self.get(sec, key, None, required)
        if text is None:
            return default
        try:
            v = int(text.replace("_", ""))
        except ValueError:
            raise self.error(sec, key, f"expected an integer, got {text!r}") from None
        if positive and v <= 0:
            raise self.error(sec, key, f"must be positive, got {v}")
        return v

    def number(self, sec: str, key: str, default=None) -> float | None:
        text = self.get(sec, key)
        if text is None:
            return default
        try:
            v = float(text)
        except ValueError:
            raise self.error(sec, key, f"expected a number, got {text!r}") from None
        if not v > 0:
            raise self.error(sec, key, f"must be positive, got {v}")
        return v

    def int_list(self, sec: str, key: str, required=False) -> list[int]:
        text = self.get(sec, key, None, required) or ""
        try:
            vals = [int(t) for t in re.split(r"[,\s]+", text) if t]
        except ValueError:
            raise self.error(sec, key, f"expected integers, got {text!r}") from None
        return vals

    def items(self, sec: str) -> dict:
        return dict(self.cp[sec]) if self.has(sec) else {}


def _split_elements(text: str) -> list[str]:
    return [t.strip() for t in text.split(";") if t.strip()]


def _parse_elements(rd: _Reader, fam: GroupFamily, sec: str, key: str, text: str) -> list:
    out = []
    for tok in _split_elements(text):
        try:
            out.append(fam.parse_element(tok))
        except (EntropyLabError, ValueError) as exc:
            raise rd.error(sec, key, f"bad element {tok!r}: {exc}") from None
    return out


def _family(rd: _Reader) -> GroupFamily:
    sec = "family"
    kind = rd.get(sec, "kind", required=True)
    if kind == "restricted_power":
        base_kind = rd.get(sec, "base", required=True)
        if base_kind == "heisenberg":
            p = rd.integer(sec, "p", required=True)
            if p not in (2, 3, 5, 7):
                raise rd.error(sec, "p", f"unsupported prime {p}")
            base = FiniteGroup.heisenberg(p)
        elif base_kind == "cyclic":
            n = rd.integer(sec, "n", required=True)
            if n < 2:
                raise rd.error(sec, "n", "cyclic base needs n >= 2")
            base = FiniteGroup.cyclic(n)
        else:
            raise rd.error(sec, "base", f"unknown base group {base_kind!r}")
        index = rd.get(sec, "index", "N").upper()
        if index not in ("N", "Z"):
            raise rd.error(sec, "index", "index must be N or Z")
        return RestrictedPower(base, index)
    if kind == "permutation":
        preset = rd.get(sec, "preset")
        if preset:
            m = re.fullmatch(r"([SADZQ])(\d*)", preset)
            if not m:
                raise rd.error(sec, "preset", f"unknown preset {preset!r}")
            letter, num = m.group(1), int(m.group(2) or 0)
            if letter == "Q":
                return quaternion_group()
            if num < 2:
                raise rd.error(sec, "preset", f"bad degree in {preset!r}")
            if letter == "D":
                if num % 2:
                    raise rd.error(sec, "preset", "dihedral order must be even")
                return dihedral_group(num // 2)
            return {"S": symmetric_group, "A": alternating_group, "Z": cyclic_group}[letter](num)
        degree = rd.integer(sec, "degree", required=True)
        gens = [g for g in _split_elements(rd.get(sec, "generators", required=True)) if g]
        try:
            return PermutationGroup(gens, degree)
        except ValueError as exc:
            raise rd.error(sec, "generators", str(exc)) from None
    if kind == "lamplighter":
        return Lamplighter()
    if kind == "finitary_symmetric":
        return FinitarySymmetric()
    raise rd.error(sec, "kind", f"unknown family kind {kind!r}")


def _endomorphism(rd: _Reader, fam: GroupFamily, seed: int) -> mo.Endomorphism:
    sec = "endomorphism"
    kind = rd.get(sec, "kind", "identity")
    try:
        if kind == "identity":
            return mo.identity(fam)
        if kind == "shift_right":
            return mo.shift_right(fam, seed=seed)
        if kind == "shift_left":
            return mo.shift_left(fam, seed=seed)
        if kind == "inner":
            g = _parse_elements(rd, fam, sec, "element", rd.get(sec, "element", required=True))
            if len(g) != 1:
                raise rd.error(sec, "element", "inner needs exactly one element")
            return mo.inner(fam, g[0], seed=seed)
        if kind == "power":
            return mo.power(fam, rd.integer(sec, "k", required=True), seed=seed)
        if kind == "permute_coordinates":
            text = rd.get(sec, "mapping", required=True)
            pairs = {}
            for tok in re.split(r"[,\s]+", text):
                if tok:
                    a, _, b = tok.partition(":")
                    pairs[int(a)] = int(b)
            return mo.permute_coordinates(fam, pairs, seed=seed)
    except ConfigError:
        raise
    except (EntropyLabError, ValueError, TypeError) as exc:
        raise rd.error(sec, "kind", f"{kind}: {exc}") from None
    raise rd.error(sec, "kind", f"unknown endomorphism kind {kind!r}")


def _subgroup(rd: _Reader, fam: GroupFamily) -> NormalSubgroupSpec | None:
    sec = "subgroup"
    if not rd.has(sec):
        return None
    name = rd.get(sec, "name", required=True)
    try:
        if name == "derived":
            return fam.derived_spec()
        if name == "center":
            return fam.center_spec()
        if name == "trivial":
            return fam.trivial_spec()
        if name == "whole":
            return fam.whole_spec()
        if name == "base":
            if not isinstance(fam, Lamplighter):
                raise rd.error(sec, "name", "'base' needs the lamplighter family")
            return fam.base_spec()
        if name == "alt":
            if not isinstance(fam, FinitarySymmetric):
                raise rd.error(sec, "name", "'alt' needs the finitary symmetric family")
            return fam.alt_spec()
        if name == "coordinatewise":
            if not isinstance(fam, RestrictedPower):
                raise rd.error(sec, "name", "'coordinatewise' needs a restricted power")
            labels = [t for t in rd.get(sec, "values", required=True).split(";") if t.strip()]
            vals = {fam.base.parse_label(t.strip()) for t in labels} | {0}
            return fam.coordinatewise_spec(vals, "coordinatewise")
        if name == "generated":
            if not isinstance(fam, PermutationGroup):
                raise rd.error(sec, "name", "'generated' needs a permutation family")
            gens = _parse_elements(rd, fam, sec, "generators", rd.get(sec, "generators", required=True))
            sub = subgroup_closure(fam, gens)
            return fam.normal_subgroup_spec(sub.elements, "generated")
    except ConfigError:
        raise
    except (EntropyLabError, ValueError) as exc:
        raise rd.error(sec, "name", f"{name}: {exc}") from None
    raise rd.error(sec, "name", f"unknown subgroup {name!r}")


def _exhaustion(rd: _Reader, fam: GroupFamily, sec: str, budget: int) -> list[frozenset]:
    kind = rd.get(sec, "kind", required=True)
    if kind == "windows":
        widths = rd.int_list(sec, "widths", required=True)
        if not widths:
            raise rd.error(sec, "widths", "empty exhaustion list")
        if any(w <= 0 for w in widths):
            raise rd.error(sec, "widths", "window widths must be positive")
        start = int(rd.get(sec, "start", "0"))
        out = []
        for w in widths:
            if isinstance(fam, RestrictedPower):
                if fam.index_set == "N" and start < 0:
                    raise rd.error(sec, "start", "negative start on an N-indexed power")
                vals = None
                if rd.has(sec, "values"):
                    vals = {fam.base.parse_label(t.strip())
                            for t in rd.get(sec, "values").split(";") if t.strip()} | {0}
                out.append(fam.window(w, start, vals).elements)
            elif isinstance(fam, Lamplighter):
                out.append(fam.window(w, start).elements)
            elif isinstance(fam, FinitarySymmetric):
                out.append(fam.window(w).elements)
            else:
                raise rd.error(sec, "kind", f"windows are not defined on {fam.kind}")
        return out
    if kind == "generating_set":
        if isinstance(fam, Lamplighter):
            return [fam.generating_set()]
        if isinstance(fam, PermutationGroup):
            return [frozenset(fam.generators) | {fam.identity}]
        raise rd.error(sec, "kind", f"no generating set for {fam.kind}")
    if kind in ("sets", "generated"):
        text = rd.get(sec, "members", required=True)
        rows = [ln for ln in text.splitlines() if ln.strip()]
        if not rows:
            raise rd.error(sec, "members", "empty exhaustion list")
        out = []
        for row in rows:
            elems = _parse_elements(rd, fam, sec, "members", row)
            if kind == "generated":
                out.append(subgroup_closure(fam, elems, budget).elements)
            else:
                out.append(frozenset(elems))
        return out
    raise rd.error(sec, "kind", f"unknown exhaustion kind {kind!r}")


def resolve_budget(cli_budget: int | None, cfg_budget: int | None) -> tuple[int, str]:
    """Precedence: command line, config file, environment, built-in default."""
    if cli_budget is not None:
        return cli_budget, "command line"
    if cfg_budget is not None:
        return cfg_budget, "config"
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            v = int(env)
        except ValueError:
            raise ConfigError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
        if v <= 0:
            raise ConfigError(f"{BUDGET_ENV} must be positive")
        return v, "environment"
    return DEFAULT_BUDGET, "default"


def load_config(path: str | Path, *, seed: int | None = None, depth: int | None = None,
                budget: int | None = None) -> ExperimentConfig:
    path = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, path, seed=seed, depth=depth, budget=budget)


def parse_config(text: str, path: str = "<string>", *, seed: int | None = None,
                 depth: int | None = None, budget: int | None = None) -> ExperimentConfig:
    rd = _Reader(text, path)
    schema = rd.integer("experiment", "schema", required=True)
    if schema != SCHEMA_VERSION:
        raise rd.error("experiment", "schema", f"unsupported schema {schema}")
    for name, val in (("seed", seed), ("depth", depth), ("budget", budget)):
        if val is not None and (val < 0 or (name != "seed" and val == 0)):
            raise ConfigError(f"--{name} must be positive", name)
    expected = rd.get("experiment", "expected_verdict")
    if expected is not None:
        try:
            expected = Verdict(expected)
        except ValueError:
            raise rd.error("experiment", "expected_verdict", f"unknown verdict {expected!r}") from None

    run_seed = seed if seed is not None else rd.integer("run", "seed", 0, positive=False)
    if run_seed < 0:
        raise rd.error("run", "seed", "seed must be non-negative")
    run_depth = depth if depth is not None else rd.integer("run", "depth", 4)
    run_budget, source = resolve_budget(budget, rd.integer("run", "budget"))

    fam = _family(rd)
    phi = _endomorphism(rd, fam, run_seed)
    H = _subgroup(rd, fam)
    if not rd.has("exhaustion"):
        raise ConfigError("missing [exhaustion] section", "exhaustion")
    exhaustion = _exhaustion(rd, fam, "exhaustion", run_budget)
    restricted = None
    if rd.has("restricted_exhaustion"):
        restricted = _exhaustion(rd, fam, "restricted_exhaustion", run_budget)
    member = rd.integer("run", "member", 0, positive=False)
    if not 0 <= member < len(exhaustion):
        raise rd.error("run", "member", f"member {member} out of range 0..{len(exhaustion) - 1}")

    growth = None
    if rd.has("witness"):
        growth = GrowthSpec(rd.integer("witness", "n_min", 5), rd.integer("witness", "n_max", 14),
                            rd.number("witness", "ratio", 1.5))
        if growth.n_min > growth.n_max:
            raise rd.error("witness", "n_min", "n_min exceeds n_max")

    return ExperimentConfig(
        path=path, name=rd.get("experiment", "name", Path(path).stem), family=fam, phi=phi, H=H,
        exhaustion=exhaustion, restricted_exhaustion=restricted, depth=run_depth,
        budget=run_budget, budget_source=source, seed=run_seed,
        tolerance=rd.number("run", "tolerance", 1e-9), member=member,
        n_max=rd.integer("run", "n_max", max(2**run_depth, 3)), growth=growth,
        expected_verdict=expected, trials=rd.integer("props", "trials", 500, positive=False),
        raw={s: rd.items(s) for s in rd.cp.sections()})
