"""Scenario files: a sectioned key-value text format.

    # comment
    [grid]
    lambda0 = 1
    nz = 1600
    ny = 1
    dz = lambda0/20
    dt = dz/2
    steps = 3000

    [medium.1]
    eps = 1

    [interface.1]
    kind = uniform
    z0 = 400 dz
    beta = 0.2

Values are numbers, names, comma lists, or a fixed ratio grammar on the
reference lengths and times lambda0, period (= lambda0/c), dz, dy, dt:

    <number> | <ref> | <ref>/<number> | <number>*<ref> | <number> <ref>
    | <number>/<ref>

Lengths are in the file's length unit (c = 1, so times share it),
velocities are fractions of c (keys ``beta``, ``beta0``), angles carry a
``_deg`` suffix and a_prime is in c^2 per length unit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import (DirectionProbe, PointProbe, RowProbe, SnapshotProbe, SourceSpec,
                          make_source)
from .grid import (GridSpec, InterfaceTrajectory, MaterialMap, OverlappingTransitionRegions,
                   ValidationError, check_courant, classify_cells)


class ParseError(ValueError):
    def __init__(self, msg, line, col=1, path=None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: {msg}")
        self.line, self.col = line, col


_SECTION = re.compile(r"^\[([A-Za-z_][\w.\-]*)\]\s*$")
_KEY = re.compile(r"^([A-Za-z_][\w]*)\s*=\s*(.*?)\s*$")
_VALUE_START = re.compile(r"^\s*[A-Za-z_]\w*\s*=\s*")
_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
REFS = ("lambda0", "period", "dz", "dy", "dt")


@dataclass
class Entry:
    value: str
    line: int
    col: int


def parse_text(text, path=None):
    """Sections -> {key: Entry}; duplicate sections or keys are errors."""
    out: dict[str, dict[str, Entry]] = {}
    cur = None
    for ln, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].rstrip()
        if not s.strip():
            continue
        m = _SECTION.match(s.strip())
        if m:
            cur = m.group(1)
            if cur in out:
                raise ParseError(f"duplicate section [{cur}]", ln, 1, path)
            out[cur] = {}
            continue
        m = _KEY.match(s.strip())
        if not m:
            raise ParseError(f"expected 'key = value' or [section], got {s.strip()!r}", ln,
                             len(s) - len(s.lstrip()) + 1, path)
        if cur is None:
            raise ParseError("key outside any section", ln, 1, path)
        key, val = m.groups()
        if key in out[cur]:
            raise ParseError(f"duplicate key {key!r} in [{cur}]", ln, 1, path)
        out[cur][key] = Entry(val, ln, _VALUE_START.match(raw).end() + 1)
    return out


def eval_quantity(text, refs, line=0, col=1, path=None):
    """Evaluate the ratio grammar against known reference values."""
    t = text.strip()
    if re.fullmatch(_NUM, t):
        return float(t)
    if t in REFS:
        return _ref(t, refs, line, col, path)
    m = re.fullmatch(rf"([A-Za-z_]\w*)\s*/\s*({_NUM})", t)
    if m:
        return _ref(m.group(1), refs, line, col, path) / _nonzero(m.group(2), line, col, path)
    m = re.fullmatch(rf"({_NUM})\s*(?:\*\s*)?([A-Za-z_]\w*)", t)
    if m:
        return float(m.group(1)) * _ref(m.group(2), refs, line, col, path)
    m = re.fullmatch(rf"({_NUM})\s*/\s*([A-Za-z_]\w*)", t)
    if m:
        return float(m.group(1)) / _ref(m.group(2), refs, line, col, path)
    raise ParseError(f"cannot read quantity {text!r}", line, col, path)


def _nonzero(s, line, col, path):
    v = float(s)
    if v == 0:
        raise ParseError("division by zero", line, col, path)
    return v


def _ref(name, refs, line, col, path):
    if name not in REFS:
        raise ParseError(f"unknown reference {name!r} (known: {', '.join(REFS)})", line, col, path)
    if name not in refs:
        raise ParseError(f"{name} used before it is defined", line, col, path)
    return refs[name]


class _Section:
    """Typed access to one parsed section with position-aware errors."""

    def __init__(self, name, entries, refs, path):
        self.name, self.e, self.refs, self.path = name, entries, refs, path
        self.used = set()

    def has(self, key):
        return key in self.e

    def raw(self, key):
        self.used.add(key)
        return self.e[key]

    def num(self, key, default=None, required=False):
        if key not in self.e:
            if required:
                raise ValidationError(f"{self.name}.{key} required")
            return default
        en = self.raw(key)
        return eval_quantity(en.value, self.refs, en.line, en.col, self.path)

    def int(self, key, default=None, required=False):
        v = self.num(key, default, required)
        if v is None:
            return None
        if float(v) != int(v):
            en = self.e[key]
            raise ParseError(f"{self.name}.{key} must be an integer", en.line, en.col, self.path)
        return int(v)

    def str(self, key, default=None):
        return self.raw(key).value if key in self.e else default

    def bool(self, key, default=False):
        if key not in self.e:
            return default
        en = self.raw(key)
        v = en.value.lower()
        if v in ("true", "yes", "1", "on"):
            return True
        if v in ("false", "no", "0", "off"):
            return False
        raise ParseError(f"{self.name}.{key}: expected a boolean", en.line, en.col, self.path)

    def nums(self, key):
        if key not in self.e:
            return ()
        en = self.raw(key)
        return tuple(eval_quantity(p, self.refs, en.line, en.col, self.path)
                     for p in en.value.split(",") if p.strip())

    def finish(self):
        extra = set(self.e) - self.used
        if extra:
            k = sorted(extra, key=lambda x: self.e[x].line)[0]
            raise ParseError(f"unknown key {k!r} in [{self.name}]", self.e[k].line, 1, self.path)


@dataclass
class ProbeSpec:
    name: str
    kind: str = "point"   # point | direction | row | snapshot
    k: int = 0
    i: int = 0
    every: int = 1
    steps: tuple = ()

    def make(self):
        if self.kind == "point":
            return PointProbe(self.name, self.k, self.i)
        if self.kind == "direction":
            return DirectionProbe(self.name, self.k, self.i)
        if self.kind == "row":
            return RowProbe(self.name, self.i, self.every)
        if self.kind == "snapshot":
            return SnapshotProbe(self.name, self.steps)
        raise ValidationError(f"unknown probe kind {self.kind!r}")


@dataclass
class Scenario:
    grid: GridSpec
    materials: MaterialMap
    sources: list = field(default_factory=list)
    probes: list = field(default_factory=list)
    scheme: str = "local_hybrid"
    time_switch: str = "D"
    closure: str = "jump"
    band_half: int = 2
    unsafe_courant: bool = False
    snapshot_every: int = 0
    lambda0: float = 1.0
    name: str = ""
    s_max: float = np.nan

    def build(self, probes=None):
        from .hybrid import Simulation
        pr = [p.make() for p in self.probes] if probes is None else probes
        return Simulation(self.grid, self.materials, [make_source(s) for s in self.sources], pr,
                          scheme=self.scheme, time_switch=self.time_switch,
                          band_half=self.band_half, closure=self.closure)

    def manifest(self):
        g = self.grid
        rows = [("name", self.name), ("scheme", self.scheme), ("time_switch", self.time_switch),
                ("closure", self.closure), ("band_half", self.band_half),
                ("lambda0", self.lambda0), ("nz", g.nz), ("ny", g.ny), ("dz", g.dz), ("dy", g.dy),
                ("dt", g.dt), ("n_steps", g.n_steps), ("S", g.S), ("S_max", self.s_max),
                ("unsafe_courant", self.unsafe_courant), ("snapshot_every", self.snapshot_every)]
        for j, (eps, mu) in enumerate(self.materials.media, 1):
            rows += [(f"medium.{j}.eps", eps), (f"medium.{j}.mu", mu)]
        for j, tr in enumerate(self.materials.interfaces, 1):
            for k in ("kind", "z0", "beta", "a_prime", "beta0", "shape_coeffs", "segments", "y0"):
                rows.append((f"interface.{j}.{k}", getattr(tr, k)))
        for s in self.sources:
            for k, v in vars(s).items():
                rows.append((f"source.{k}", v))
        for p in self.probes:
            rows.append((f"probe.{p.name}", f"{p.kind} k={p.k} i={p.i} every={p.every}"))
        return rows


def _sections(doc, prefix):
    """Sections named prefix.<label>, ordered by label (numeric labels numerically)."""
    names = [n for n in doc if n.startswith(prefix + ".")]

    def key(n):
        lab = n[len(prefix) + 1:]
        return (0, int(lab), "") if lab.isdigit() else (1, 0, lab)
    return sorted(names, key=key)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ValidationError(f"cannot read scenario {path}: {e}") from None
    return loads_scenario(text, str(path), name=path.stem)


def loads_scenario(text, path=None, name="") -> Scenario:
    doc = parse_text(text, path)
    known = {"grid", "run"}
    for n in doc:
        if n not in known and not n.split(".")[0] in ("medium", "interface", "source", "probe"):
            first = min((e.line for e in doc[n].values()), default=1)
            raise ParseError(f"unknown section [{n}]", max(first - 1, 1), 1, path)
    if "grid" not in doc:
        raise ValidationError("grid section required")
    refs: dict[str, float] = {}
    g = _Section("grid", doc["grid"], refs, path)
    refs["lambda0"] = g.num("lambda0", 1.0)
    refs["period"] = refs["lambda0"]
    dz = g.num("dz", required=True)
    refs["dz"] = dz
    dy = g.num("dy", dz)
    refs["dy"] = dy
    dt = g.num("dt", required=True)
    refs["dt"] = dt
    nz = g.int("nz", required=True)
    ny = g.int("ny", 1)
    steps = g.int("steps", required=True)
    g.finish()
    if steps < 0:
        raise ValidationError("grid.steps must be >= 0")
    grid = GridSpec(nz, ny, dz, dy, dt, steps)

    r = _Section("run", doc.get("run", {}), refs, path)
    scheme = r.str("scheme", "local_hybrid")
    if scheme not in ("local_hybrid", "conventional_only"):
        raise ValidationError(f"run.scheme must be local_hybrid or conventional_only, not {scheme!r}")
    time_switch = r.str("time_switch", "D")
    if time_switch not in ("D", "E"):
        raise ValidationError("run.time_switch must be D or E")
    closure = r.str("closure", "jump")
    if closure not in ("jump", "none"):
        raise ValidationError("run.closure must be jump or none")
    band_half = r.int("band_half", 2)
    unsafe = r.bool("unsafe_courant", False)
    snap = r.int("snapshot_every", 0)
    r.finish()

    media = []
    for n in _sections(doc, "medium"):
        s = _Section(n, doc[n], refs, path)
        media.append((s.num("eps", 1.0), s.num("mu", 1.0)))
        s.finish()
    if not media:
        raise ValidationError("at least one [medium.N] section required")
    interfaces = []
    for n in _sections(doc, "interface"):
        s = _Section(n, doc[n], refs, path)
        segs = ()
        if s.has("segments"):
            en = s.raw("segments")
            segs = tuple(tuple(eval_quantity(x, refs, en.line, en.col, path) for x in p.split(":"))
                         for p in en.value.split(",") if p.strip())
            if any(len(p) != 2 for p in segs):
                raise ParseError("segments are t_start:beta pairs", en.line, en.col, path)
        interfaces.append(InterfaceTrajectory(
            kind=s.str("kind", "uniform"), z0=s.num("z0", 0.0), beta=s.num("beta", 0.0),
            a_prime=s.num("a_prime", 0.0), beta0=s.num("beta0", 0.0),
            shape_coeffs=s.nums("shape"), segments=segs, y0=s.num("y0", 0.0)))
        s.finish()
    mat = MaterialMap(media, interfaces)

    sources = []
    for n in _sections(doc, "source"):
        s = _Section(n, doc[n], refs, path)
        kind = s.str("kind", "line_time_pulse")
        if kind not in ("line_time_pulse", "spatial_initial_pulse"):
            raise ValidationError(f"{n}.kind must be line_time_pulse or spatial_initial_pulse")
        lam = s.num("carrier_wavelength", None)
        omega = 2 * np.pi / lam if lam else s.num("omega", 0.0)
        z = s.num("z", None)
        loc = int(round(z / dz)) if z is not None else s.int("location", 10)
        sources.append(SourceSpec(
            kind=kind, E0=s.num("amplitude", 1.0), omega=omega, tau=s.num("tau", 1.0),
            T0=s.num("delay", 0.0), location=loc, theta=np.radians(s.num("theta_deg", 0.0)),
            sigma_y=s.num("sigma_y", np.inf), sigma_z=s.num("sigma_z", None),
            y0=s.num("y0", 0.0), z0=s.num("z0", 0.0)))
        s.finish()

    probes = []
    for n in _sections(doc, "probe"):
        s = _Section(n, doc[n], refs, path)
        z = s.num("z", 0.0)
        y = s.num("y", 0.0)
        steps_at = tuple(int(v) for v in s.nums("steps"))
        probes.append(ProbeSpec(n.split(".", 1)[1], s.str("kind", "point"), int(round(z / dz)),
                                int(round(y / dy)), s.int("every", 1), steps_at))
        s.finish()

    sc = Scenario(grid, mat, sources, probes, scheme, time_switch, closure, band_half, unsafe, snap,
                  refs["lambda0"], name)
    validate_scenario(sc)
    return sc


def validate_scenario(sc: Scenario):
    """Whole-scenario checks before any field allocation."""
    g = sc.grid
    sc.s_max = check_courant(g, sc.materials, sc.unsafe_courant)
    if sc.scheme == "local_hybrid" and sc.materials.interfaces:
        try:
            classify_cells(sc.materials, g, 0, sc.band_half)
            if g.n_steps:
                classify_cells(sc.materials, g, g.n_steps, sc.band_half)
        except OverlappingTransitionRegions as e:
            raise ValidationError(f"transition band clearance: {e}") from None
    for s in sc.sources:
        if s.kind == "line_time_pulse" and not 2 <= s.location < g.nz - 2:
            raise ValidationError(f"source plane at node {s.location} outside the grid")
    for p in sc.probes:
        if not (0 <= p.k < g.nz and 0 <= p.i < g.ny):
            raise ValidationError(f"probe {p.name} outside the grid")
        if p.kind == "direction" and not 1 <= p.k < g.nz - 1:
            raise ValidationError(f"direction probe {p.name} needs an interior node")
    return sc
