"""Synthetic periodic test signals and ingestion of gridded files.

Generators expose their ground truth (exact jump lists, closed-form
derivatives) so tests can check the pipeline against something it did not
compute itself.  Piecewise signals are built from a smooth periodic base
plus localized periodic terms that carry exactly one declared
discontinuity each and nothing else:

* value jump of size ``s`` at ``c``: ``s * (1/2 - frac(x - c))``, a
  sawtooth that drops by ``s`` as ``x`` crosses ``c`` going left to right
  (net jump ``+s``) and is linear elsewhere;
* derivative jump of size ``s`` at ``c``: ``-s/2 * (frac(x - c) - 1/2)^2``,
  continuous with a slope break of ``+s`` at ``c`` and quadratic elsewhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import GridFormatError, InvalidInputError
from .spectral import Grid1D, Grid2D

# Smooth periodic formula catalog.  Each entry maps to a closed-form
# expression of x understood by sympy; sampling uses fast numpy lambdas.
FORMULAS: dict[str, str] = {
    "exp_sin": "exp(sin(2*pi*x))",
    "two_tone": "sin(2*pi*x) + 0.3*cos(4*pi*x)",
    # gentle tone plus a localized periodic bump (von Mises shape)
    "peaked": "sin(2*pi*x) + 5*exp(100*(cos(2*pi*(x - 0.5)) - 1))",
    # much narrower bump over a weak carrier, for noise studies
    "narrow_peak": "0.5*sin(2*pi*x) + 8*exp(900*(cos(2*pi*(x - 0.45)) - 1))",
}

HARMONIC_FIELDS: dict[str, list[tuple[int, int, float, float]]] = {
    # smooth doubly periodic combination dominated by a traveling wave,
    # whose collapsed derivative features are nearly flat in each dimension
    "traveling": [(1, 1, 1.0, 0.0), (2, -1, 0.03, 0.7)],
    "checker": [(1, 1, 1.0, 0.0), (1, -1, 1.0, 1.2)],
}


@lru_cache(maxsize=64)
def _lambdify(formula: str, q: int):
    import sympy as sp

    x = sp.symbols("x")
    expr = sp.sympify(formula, locals={"pi": sp.pi})
    return sp.lambdify(x, sp.diff(expr, x, q) if q else expr, "numpy")


def formula_values(name_or_expr: str, x: np.ndarray, q: int = 0) -> np.ndarray:
    """Evaluate a catalog formula (or raw expression) or its q-th derivative."""
    formula = FORMULAS.get(name_or_expr, name_or_expr)
    x = np.asarray(x, dtype=float)
    values = np.asarray(_lambdify(formula, int(q))(x), dtype=float)
    if values.ndim == 0:  # expression independent of x
        values = np.full(x.shape, float(values))
    return values


@dataclass(frozen=True)
class Jump:
    location: float
    kind: str  # "C0" or "C1"
    size: float

    def __post_init__(self):
        if not 0.0 < self.location < 1.0:
            raise InvalidInputError("jump locations must lie strictly inside (0, 1)")
        if self.kind not in ("C0", "C1"):
            raise InvalidInputError("jump kind must be 'C0' or 'C1'")

    def grid_index(self, m: int) -> int:
        """Sample index nearest the discontinuity for an m-point grid."""
        return int(round(self.location * m)) % m


@dataclass(frozen=True)
class SignalSpec:
    """Declarative description of a test signal.

    ``kind`` is one of ``smooth`` (1-D formula), ``piecewise`` (base formula
    plus jump list), ``noisy`` (base spec plus seeded Gaussian noise), or
    ``harmonic2d`` (sum of 2-D plane waves).
    """

    kind: str
    formula: str = "two_tone"
    jumps: tuple[Jump, ...] = ()
    base: "SignalSpec | None" = None
    noise_scale: float = 0.0
    seed: int | None = None
    modes: tuple[tuple[int, int, float, float], ...] = ()
    domain: tuple[float, float] = (0.0, 1.0)
    domain2: tuple[float, float] = (0.0, 1.0)
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("smooth", "piecewise", "noisy", "harmonic2d"):
            raise InvalidInputError(f"unknown signal kind {self.kind!r}")
        if self.kind == "noisy":
            if self.base is None:
                raise InvalidInputError("noisy specs need a base spec")
            if self.noise_scale < 0:
                raise InvalidInputError("noise_scale must be nonnegative")
            if self.seed is None:
                raise InvalidInputError("noisy specs must carry a seed")

    # -- constructors -------------------------------------------------
    @staticmethod
    def smooth(formula: str = "two_tone", domain=(0.0, 1.0)) -> "SignalSpec":
        return SignalSpec(kind="smooth", formula=formula, domain=domain)

    @staticmethod
    def piecewise(
        jumps: list[tuple[float, str, float]],
        base: str = "two_tone",
        domain=(0.0, 1.0),
    ) -> "SignalSpec":
        return SignalSpec(
            kind="piecewise",
            formula=base,
            jumps=tuple(Jump(*j) for j in jumps),
            domain=domain,
        )

    @staticmethod
    def noisy(base: "SignalSpec", scale: float, seed: int) -> "SignalSpec":
        return SignalSpec(kind="noisy", base=base, noise_scale=scale, seed=seed)

    @staticmethod
    def harmonic2d(modes=None, name: str | None = None) -> "SignalSpec":
        if name is not None:
            modes = HARMONIC_FIELDS[name]
        if not modes:
            raise InvalidInputError("harmonic2d specs need at least one mode")
        return SignalSpec(kind="harmonic2d", modes=tuple(tuple(m) for m in modes))

    # -- ground truth -------------------------------------------------
    def true_jumps(self) -> tuple[Jump, ...]:
        if self.kind == "piecewise":
            return self.jumps
        if self.kind == "noisy":
            return self.base.true_jumps()
        return ()

    def derivative(self, x: np.ndarray, q: int) -> np.ndarray:
        """Closed-form q-th derivative of the noise-free smooth signal."""
        if self.kind == "smooth":
            return formula_values(self.formula, x, q)
        if self.kind == "noisy":
            return self.base.derivative(x, q)
        raise InvalidInputError(f"no closed-form derivative for kind {self.kind!r}")

    # -- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        data: dict = {"schema_version": 1, "kind": self.kind}
        if self.kind in ("smooth", "piecewise"):
            data["formula"] = self.formula
            data["domain"] = list(self.domain)
        if self.kind == "piecewise":
            data["jumps"] = [
                {"location": j.location, "kind": j.kind, "size": j.size}
                for j in self.jumps
            ]
        if self.kind == "noisy":
            data["base"] = self.base.to_dict()
            data["noise_scale"] = self.noise_scale
            data["seed"] = self.seed
        if self.kind == "harmonic2d":
            data["modes"] = [list(m) for m in self.modes]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SignalSpec":
        kind = data["kind"]
        if kind == "smooth":
            return cls.smooth(data.get("formula", "two_tone"),
                              tuple(data.get("domain", (0.0, 1.0))))
        if kind == "piecewise":
            jumps = [(j["location"], j["kind"], j["size"]) for j in data.get("jumps", [])]
            return cls.piecewise(jumps, data.get("formula", "two_tone"),
                                 tuple(data.get("domain", (0.0, 1.0))))
        if kind == "noisy":
            return cls.noisy(cls.from_dict(data["base"]),
                             float(data["noise_scale"]), int(data["seed"]))
        if kind == "harmonic2d":
            return cls.harmonic2d(modes=[tuple(m) for m in data["modes"]])
        raise InvalidInputError(f"unknown signal kind {kind!r}")

    @classmethod
    def from_json(cls, text: str) -> "SignalSpec":
        return cls.from_dict(json.loads(text))


def _sawtooth_step(x: np.ndarray, location: float, size: float) -> np.ndarray:
    t = (x - location) % 1.0
    return size * (0.5 - t)


def _slope_break(x: np.ndarray, location: float, size: float) -> np.ndarray:
    t = (x - location) % 1.0
    return -0.5 * size * (t - 0.5) ** 2


def generate(spec: SignalSpec, m: int | tuple[int, int]) -> Grid1D | Grid2D:
    """Sample a signal spec on a uniform periodic grid.

    Deterministic for a given seed; piecewise signals are exactly periodic
    with the declared jumps and no others.
    """
    if spec.kind == "harmonic2d":
        if not (isinstance(m, tuple) and len(m) == 2):
            raise InvalidInputError("harmonic2d specs need a (m1, m2) shape")
        m1, m2 = m
        x = np.arange(m1) / m1
        y = np.arange(m2) / m2
        xx, yy = np.meshgrid(x, y, indexing="ij")
        f = np.zeros((m1, m2))
        for k1, k2, amp, phase in spec.modes:
            f += amp * np.sin(2 * np.pi * (k1 * xx + k2 * yy) + phase)
        return Grid2D(f, (spec.domain, spec.domain2))

    if not isinstance(m, int):
        raise InvalidInputError("1-D specs need an integer sample count")
    if spec.kind == "noisy":
        base = generate(spec.base, m)
        rng = np.random.default_rng(spec.seed)
        noise = spec.noise_scale * rng.standard_normal(m)
        return Grid1D(base.samples + noise, base.domain)

    a, b = spec.domain
    frac = np.arange(m) / m
    values = formula_values(spec.formula, frac)
    if spec.kind == "piecewise":
        for j in spec.jumps:
            if j.kind == "C0":
                values = values + _sawtooth_step(frac, j.location, j.size)
            else:
                values = values + _slope_break(frac, j.location, j.size)
    return Grid1D(values, (a, b))


# ---------------------------------------------------------------------------
# file ingestion

LAYOUTS = ("csv_xy", "csv_grid", "raw_rows")


def _parse_domain_header(path: Path) -> list[tuple[float, float]] | None:
    """Optional '# domain: a b [a2 b2]' comment on the first lines."""
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line.startswith("#"):
                break
            if line[1:].strip().lower().startswith("domain:"):
                parts = line.split(":", 1)[1].split()
                vals = [float(p) for p in parts]
                if len(vals) == 2:
                    return [(vals[0], vals[1])]
                if len(vals) == 4:
                    return [(vals[0], vals[1]), (vals[2], vals[3])]
                raise GridFormatError(f"malformed domain header in {path}: {line!r}")
    return None


def _check_finite(values: np.ndarray, path: Path) -> None:
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        cell = tuple(int(i) for i in bad[0])
        raise GridFormatError(f"non-finite value at cell {cell} in {path}")


def load_grid(
    path: str | Path,
    layout: str = "csv_grid",
    shape: tuple[int, int] | None = None,
    domain=None,
) -> Grid1D | Grid2D:
    """Load a gridded signal from a text file.

    ``csv_xy``: two comma-separated columns (uniform x, value) -> 1-D grid.
    ``csv_grid``: comma-separated matrix of values, rows = first dim -> 2-D.
    ``raw_rows``: whitespace-separated matrix with a declared ``shape``.
    Domain bounds come from an optional '# domain: ...' header line, the
    ``domain`` argument, or default to the unit interval(s).
    """
    path = Path(path)
    if layout not in LAYOUTS:
        raise GridFormatError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")
    if not path.exists():
        raise GridFormatError(f"input file not found: {path}")
    header_domain = _parse_domain_header(path)
    delim = "," if layout.startswith("csv") else None
    try:
        data = np.loadtxt(path, delimiter=delim, comments="#", ndmin=2)
    except ValueError as exc:
        raise GridFormatError(f"could not parse {path}: {exc}") from exc

    if layout == "csv_xy":
        if data.shape[1] != 2:
            raise GridFormatError(
                f"csv_xy expects 2 columns, found {data.shape[1]} in {path}"
            )
        x, values = data[:, 0], data[:, 1]
        _check_finite(data, path)
        if x.size < 2:
            raise GridFormatError(f"csv_xy needs at least 2 rows in {path}")
        steps = np.diff(x)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-6):
            raise GridFormatError(f"x column must be uniformly increasing in {path}")
        if domain is None and header_domain is None:
            # periodic convention: the file covers [x0, x_last + step)
            domain = (float(x[0]), float(x[-1] + steps[0]))
        dom = domain if domain is not None else header_domain[0]
        return Grid1D(values, dom)

    if layout == "raw_rows":
        if shape is None:
            raise GridFormatError("raw_rows needs an explicit (m1, m2) shape")
        if data.size != shape[0] * shape[1]:
            raise GridFormatError(
                f"{path} holds {data.size} values, expected {shape[0]}x{shape[1]}"
            )
        data = data.reshape(shape)

    _check_finite(data, path)
    if shape is not None and data.shape != tuple(shape):
        raise GridFormatError(
            f"{path} has shape {data.shape}, expected {tuple(shape)}"
        )
    if domain is not None:
        doms = domain
    elif header_domain is not None and len(header_domain) == 2:
        doms = header_domain
    else:
        doms = ((0.0, 1.0), (0.0, 1.0))
    return Grid2D(data, tuple(tuple(d) for d in doms))
