"""Seeded scenarios and the bound-versus-actual sweeps written to CSV.

Random draws use numpy's ``PCG64`` generator seeded with the scenario seed.
A matrix of Gaussian entries is drawn as one ``(n, n)`` block of real parts
followed by one ``(n, n)`` block of imaginary parts, each filled in
row-major order, so entry ``(i, j)`` always consumes the same stream
positions whatever is done with the rest of the matrix.
"""

import math
import os
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import __version__
from ._parallel import pmap
from .bounds import (
    block_subspace_residuals,
    hermitian_block_vec_bound,
    residual_ladder,
)
from .exceptions import InputError
from .jordan import jordan_block, jordan_coefficient
from .linalg import eigenvalues, spectral_gaps
from .tangent import BlockPartition, diagonal_commutator, solve_b_block

ORDERS = ("linear", "quadratic", "cubic")


class ScenarioKind(str, Enum):
    EQUISPACED_UNIF = "unif"
    SQRT_SPACED = "sqrroot"
    SQUARE_SPACED = "sqr"
    HERMITIAN_BLOCK = "herm-block"
    JORDAN_CIRCLE = "jordan"
    CUSTOM = "custom"


DEFAULTS = {
    ScenarioKind.EQUISPACED_UNIF: (200, 1e-3),
    ScenarioKind.SQRT_SPACED: (200, 1e-3),
    ScenarioKind.SQUARE_SPACED: (200, 0.3),
    ScenarioKind.HERMITIAN_BLOCK: (200, 1e-2),
    ScenarioKind.JORDAN_CIRCLE: (100, 1e-3),
    ScenarioKind.CUSTOM: (None, 1e-3),
}

FILE_SUFFIX = {
    ScenarioKind.EQUISPACED_UNIF: "equi",
    ScenarioKind.SQRT_SPACED: "sqrroot",
    ScenarioKind.SQUARE_SPACED: "pow2",
    ScenarioKind.CUSTOM: "custom",
}

RESIDUAL_KINDS = tuple(FILE_SUFFIX)


@dataclass(frozen=True)
class ScenarioConfig:
    """One reproducible experiment; ``seed`` fully determines ``E``.

    ``diag`` is only used by the custom kind and holds the diagonal of ``D``.
    """

    kind: ScenarioKind
    n: int
    norm_target: float
    seed: int = 0
    t: float = 1.0
    output_path: str = "."
    diag: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        kind = ScenarioKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ScenarioKind.CUSTOM:
            if self.diag is None:
                raise InputError("the custom scenario needs the diagonal of D")
            d = np.asarray(self.diag, dtype=complex).ravel()
            object.__setattr__(self, "diag", d)
            object.__setattr__(self, "n", int(d.shape[0]))
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise InputError(f"n must be an integer >= 2, got {self.n!r}")
        if kind is ScenarioKind.HERMITIAN_BLOCK and self.n < 3:
            raise InputError("the Hermitian block scenario needs n >= 3")
        if not (self.norm_target > 0 and math.isfinite(self.norm_target)):
            raise InputError("norm_target must be positive and finite")
        if not 0 <= int(self.seed) < 2**64:
            raise InputError("seed must fit in 64 unsigned bits")
        if not (self.t >= 0 and math.isfinite(self.t)):
            raise InputError("t must be nonnegative")

    @classmethod
    def default(cls, kind, **overrides):
        kind = ScenarioKind(kind)
        n, norm = DEFAULTS[kind]
        params = {"n": n, "norm_target": norm}
        params.update({k: v for k, v in overrides.items() if v is not None})
        if kind is ScenarioKind.CUSTOM and params.get("n") is None:
            params["n"] = 0
        return cls(kind=kind, **params)


@dataclass(frozen=True)
class Scenario:
    """Generated data. ``d`` is the diagonal of ``D`` (``None`` for Jordan)."""

    config: ScenarioConfig
    d: np.ndarray | None
    E: np.ndarray
    B: np.ndarray

    @property
    def D(self):
        if self.d is None:
            return jordan_block(self.config.n)
        return np.diag(self.d)


@dataclass(frozen=True)
class FigureResult:
    paths: list
    columns: tuple
    tables: dict
    metadata: dict


def base_diagonal(cfg):
    n = cfg.n
    k = np.arange(1, n + 1, dtype=float)
    if cfg.kind is ScenarioKind.EQUISPACED_UNIF:
        return k
    if cfg.kind is ScenarioKind.SQRT_SPACED:
        return np.sqrt(k)
    if cfg.kind is ScenarioKind.SQUARE_SPACED:
        return k**2
    if cfg.kind is ScenarioKind.HERMITIAN_BLOCK:
        m = n // 2
        return np.concatenate([np.ones(n - m), np.arange(2, m + 2, dtype=float)])
    if cfg.kind is ScenarioKind.CUSTOM:
        return cfg.diag.copy()
    return None


def gaussian_matrix(rng, n, complex_entries=True):
    re = rng.standard_normal((n, n))
    if not complex_entries:
        return re
    return re + 1j * rng.standard_normal((n, n))


def generate_scenario(cfg):
    """Build ``(D or J, E, B)`` with ``||E||_2 = cfg.norm_target``.

    ``B`` has a zero diagonal. The Hermitian block scenario uses a real
    ``B1`` in the upper-right block and ``B = [[0, B1], [-B1^T, 0]]``.
    """
    rng = np.random.Generator(np.random.PCG64(int(cfg.seed)))
    n = cfg.n
    d = base_diagonal(cfg)
    if cfg.kind is ScenarioKind.HERMITIAN_BLOCK:
        k = n - n // 2
        G = gaussian_matrix(rng, n, complex_entries=False)
        B = np.zeros((n, n), dtype=complex)
        B[:k, k:] = G[:k, k:]
        B[k:, :k] = -G[:k, k:].T
    else:
        B = gaussian_matrix(rng, n)
        np.fill_diagonal(B, 0)
    if d is None:
        J = jordan_block(n)
        E = J @ B - B @ J
    else:
        E = diagonal_commutator(d, B)
    scale = cfg.norm_target / np.linalg.norm(E, 2)
    B = B * scale
    if d is None:
        E = J @ B - B @ J
    else:
        E = diagonal_commutator(d, B)
    return Scenario(cfg, d, E, B)


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def write_csv(path, columns, rows, metadata):
    """Write ``#``-prefixed metadata lines, the header, then the rows."""
    lines = [f"# {key}: {value}" for key, value in metadata.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path):
    """Inverse of :func:`write_csv`: ``(metadata, columns, array)``."""
    meta = {}
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    body = []
    for ln in lines:
        if ln.startswith("#"):
            key, _, value = ln[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif ln:
            body.append(ln)
    columns = tuple(body[0].split(","))
    data = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]]).reshape(-1, len(columns))
    return meta, columns, data


def _metadata(cfg, extra):
    meta = {
        "kind": cfg.kind.value,
        "n": cfg.n,
        "norm_target": _fmt(cfg.norm_target),
        "seed": int(cfg.seed),
        "t": _fmt(cfg.t),
    }
    meta.update(extra)
    meta["version"] = __version__
    return meta


def _out_dir(cfg):
    os.makedirs(cfg.output_path, exist_ok=True)
    return cfg.output_path


def residual_tables(scenario):
    """Per-order arrays with columns ``n, err, bound, boundsharp`` (``-1`` if infeasible)."""
    cfg = scenario.config
    reports = residual_ladder(scenario.d, scenario.E, scenario.B, cfg.t)
    idx = np.arange(1, cfg.n + 1)
    tables = {}
    for k, name in enumerate(ORDERS):
        err = np.array([r.actual[k] for r in reports])
        coarse = np.array([r.bound_coarse[k] for r in reports])
        sharp = np.array([r.bound_sharp[k] for r in reports])
        coarse = np.where(np.isfinite(coarse), coarse, -1.0)
        sharp = np.where(np.isfinite(sharp), sharp, -1.0)
        tables[name] = np.column_stack([idx, err, coarse, sharp])
    return tables


def run_residual_figure(cfg, write=True):
    if cfg.kind not in RESIDUAL_KINDS:
        raise InputError(f"{cfg.kind.value} is not an eigenvector residual scenario")
    sc = generate_scenario(cfg)
    tables = residual_tables(sc)
    eta = spectral_gaps(sc.d)
    norm_e = float(np.linalg.norm(sc.E, 2))
    meta = _metadata(
        cfg,
        {
            "norm_E": _fmt(norm_e),
            "eta_min": _fmt(eta.min()),
            "eta_max": _fmt(eta.max()),
            "rho_min": _fmt(norm_e / eta.max()),
            "rho_max": _fmt(norm_e / eta.min()),
        },
    )
    columns = ("n", "err", "bound", "boundsharp")
    paths = []
    if write:
        out = _out_dir(cfg)
        for name in ORDERS:
            path = os.path.join(out, f"{name}{FILE_SUFFIX[cfg.kind]}.csv")
            rows = [(int(r[0]), r[1], r[2], r[3]) for r in tables[name]]
            write_csv(path, columns, rows, meta)
            paths.append(path)
    return FigureResult(paths, columns, tables, meta)


def hermitian_block_table(scenario):
    """Rows ``(n, err, bound)`` for the eigenvectors continued from the first block."""
    d = scenario.d
    k = scenario.config.n - scenario.config.n // 2
    part = BlockPartition.from_matrices(d, scenario.E, k)
    B1, B2 = solve_b_block(part)
    t = scenario.config.t
    err = block_subspace_residuals(part, B2, t)
    bound = hermitian_block_vec_bound(part, B1, t)
    idx = np.arange(1, k + 1)
    return part, np.column_stack([idx, err, np.full(k, bound)])


def run_hermitian_block_figure(cfg, write=True):
    if cfg.kind is not ScenarioKind.HERMITIAN_BLOCK:
        raise InputError("expected the herm-block scenario")
    sc = generate_scenario(cfg)
    part, table = hermitian_block_table(sc)
    meta = _metadata(
        cfg,
        {
            "block_size": part.k,
            "gap": _fmt(part.gap),
            "norm_E": _fmt(part.norm_E()),
            "reference": _fmt((part.norm_E() / part.gap) ** 3),
        },
    )
    columns = ("n", "err", "bound")
    paths = []
    if write:
        path = os.path.join(_out_dir(cfg), "blockequiherm.csv")
        write_csv(path, columns, [(int(r[0]), r[1], r[2]) for r in table], meta)
        paths.append(path)
    return FigureResult(paths, columns, {"block": table}, meta)


def jordan_radius(cfg):
    return cfg.norm_target ** (2.0 / cfg.n)


def run_jordan_figure(cfg, write=True):
    if cfg.kind is not ScenarioKind.JORDAN_CIRCLE:
        raise InputError("expected the jordan scenario")
    sc = generate_scenario(cfg)
    lam = eigenvalues(sc.D + cfg.t * sc.E)
    c = jordan_coefficient(sc.E)
    radius = jordan_radius(cfg)
    extra = {
        "radius": _fmt(radius),
        "coefficient_abs": _fmt(abs(c)),
        "predicted_radius": _fmt(abs(c) ** (1.0 / cfg.n) * cfg.t ** (2.0 / cfg.n)),
    }
    if abs(c) <= 1e-14 * cfg.norm_target**2:
        extra["warning"] = "coefficient is (nearly) zero; the order may be higher"
    meta = _metadata(cfg, extra)
    table = np.column_stack([lam.real, lam.imag])
    columns = ("real", "imag")
    paths = []
    if write:
        path = os.path.join(_out_dir(cfg), "jordan.csv")
        write_csv(path, columns, table, meta)
        paths.append(path)
    return FigureResult(paths, columns, {"eigenvalues": table}, meta)


def run_figure(cfg, write=True):
    if cfg.kind is ScenarioKind.HERMITIAN_BLOCK:
        return run_hermitian_block_figure(cfg, write)
    if cfg.kind is ScenarioKind.JORDAN_CIRCLE:
        return run_jordan_figure(cfg, write)
    return run_residual_figure(cfg, write)


def run_ensemble(cfg, seeds, write=True):
    """Run ``seeds`` consecutive seeds starting at ``cfg.seed``.

    With more than one seed each run writes into its own ``seed-<s>``
    subdirectory of ``cfg.output_path``.
    """
    if seeds < 1:
        raise InputError("seeds must be at least 1")
    if seeds == 1:
        return [run_figure(cfg, write)]
    cfgs = [
        replace(cfg, seed=cfg.seed + s, output_path=os.path.join(cfg.output_path, f"seed-{cfg.seed + s}"))
        for s in range(seeds)
    ]
    return pmap(lambda c: run_figure(c, write), cfgs)


def domination_summary(result):
    """Fraction of feasible rows where each bound column dominates ``err``."""
    summary = {}
    for name, table in result.tables.items():
        if table.shape[1] == 4:
            feasible = (table[:, 2] >= 0) & (table[:, 3] >= 0)
            rows = table[feasible]
            ok = (rows[:, 3] >= rows[:, 1]) & (rows[:, 2] >= rows[:, 3])
            summary[name] = (int(ok.sum()), int(feasible.sum()), int(table.shape[0]))
        elif table.shape[1] == 3:
            ok = table[:, 2] >= table[:, 1]
            summary[name] = (int(ok.sum()), int(table.shape[0]), int(table.shape[0]))
    return summary
