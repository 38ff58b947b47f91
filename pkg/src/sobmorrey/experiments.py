"""Seeded grid studies shared by the CLI and the acceptance tests.

Each ``run_*`` function takes a parameter set, a seed list and grid settings,
and returns plain rows (one per seed) so the results can go straight to CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Sequence

import numpy as np

from . import maxops
from .grid import GridField, SummandKind, TestFunctionSpec, random_field
from .maxops import WindowLattice
from .paramlab import ParamSet

DEFAULT_SEED = 42


@dataclass(frozen=True)
class GridSettings:
    dim: int = 2
    cells: int = 256
    padding: int = 32
    count: int = 3
    kind: SummandKind = SummandKind.GAUSSIAN
    signed: bool = False
    side: float = 1.0

    @property
    def box(self):
        return [(0.0, self.side)] * self.dim

    def spec(self, seed: int) -> TestFunctionSpec:
        return TestFunctionSpec(seed=seed, count=self.count, kind=self.kind, signed=self.signed)

    def field(self, seed: int) -> GridField:
        return random_field(self.spec(seed), self.dim, self.box, self.cells, self.padding)

    def refined(self) -> "GridSettings":
        return replace(self, cells=2 * self.cells, padding=2 * self.padding)


def seed_list(base: int = DEFAULT_SEED, count: int = 50) -> List[int]:
    return list(range(base, base + count))


LEMMA1_GRID = GridSettings(cells=256, padding=32)
HOLDER_GRID = GridSettings(cells=128, padding=16)
MAXIMAL_GRID = GridSettings(cells=64, padding=16, signed=True)
POINCARE_GRID = GridSettings(cells=128, padding=16)
FS_EXPONENT = 2.0


def run_lemma1(ps: ParamSet, seeds: Sequence[int], grid: GridSettings = LEMMA1_GRID):
    rows = []
    for seed in seeds:
        f = grid.field(seed)
        res = maxops.verify_lemma1(f, ps)
        scaled = maxops.verify_lemma1(f.scaled(2.0), ps)
        rows.append({"seed": seed, "lhs": res.lhs, "rhs_grad": res.rhs_grad,
                     "rhs_morrey": res.rhs_morrey, "ratio": res.ratio,
                     "ratio_scaled": scaled.ratio})
    return rows


def run_sobolev(ps: ParamSet, seeds: Sequence[int], grid: GridSettings = LEMMA1_GRID):
    rows = []
    for seed in seeds:
        f = grid.field(seed)
        rows.append({"seed": seed, "ratio": maxops.verify_sobolev(f, ps),
                     "ratio_scaled": maxops.verify_sobolev(f.scaled(2.0), ps)})
    return rows


def holder_sample_points(ps: ParamSet, count: int = 5):
    from fractions import Fraction

    lo, hi = ps.r_low, ps.sobolev_exp
    return [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]


def run_holder(ps: ParamSet, seeds: Sequence[int], r_list, grid: GridSettings = HOLDER_GRID):
    rows = []
    for seed in seeds:
        f = grid.field(seed)
        for r in r_list:
            res = maxops.verify_holder_chain(f, ps, r)
            rows.append({"seed": seed, "r": float(r), "lhs": res.lhs, "bound": res.bound,
                         "slack": res.slack, "weight": res.weight})
    return rows


def run_maximal(seeds: Sequence[int], grid: GridSettings = MAXIMAL_GRID, s: float = FS_EXPONENT):
    """Pointwise operator properties plus the four norm ratios per seed."""
    rows = []
    lattice = WindowLattice.dyadic(grid.padding)
    for seed in seeds:
        f = grid.field(seed)
        g = grid.field(seed + 10_000)
        mf = maxops.hl_maximal(f, lattice).values
        mg = maxops.hl_maximal(g, lattice).values
        msum = maxops.hl_maximal(f.with_values(f.values + g.values), lattice).values
        sf = maxops.sharp_maximal(f, lattice).values
        ratios = maxops.verify_fs_equivalence(f, s, lattice)
        rows.append({
            "seed": seed,
            "dominates": bool(np.all(mf >= np.abs(f.values))),
            "sublinear_gap": float(np.max(msum - mf - mg)),
            "sharp_over_2hl": float(np.max(sf - 2.0 * mf)),
            "r1": ratios.r1, "r2": ratios.r2, "r3": ratios.r3, "r4": ratios.r4,
        })
    return rows


def run_poincare(seeds: Sequence[int], grid: GridSettings = POINCARE_GRID, samples: int = 24,
                 radii=(1, 2, 4, 8)):
    """Empirical Poincare ratio on a grid and on its h/2 refinement.

    The fine grid uses doubled radii and the fine cell 2c + 1 next to each
    coarse sample centre c.
    """
    rows = []
    fine_grid = grid.refined()
    coarse_lat = WindowLattice(tuple(radii))
    fine_lat = WindowLattice(tuple(2 * k for k in radii))
    for seed in seeds:
        f = grid.field(seed)
        ff = fine_grid.field(seed)
        centres = maxops.sample_centres(f, samples, seed)
        coarse = maxops.poincare_ratio(f, coarse_lat, centres)
        fine = maxops.poincare_ratio(ff, fine_lat, 2 * centres + 1)
        rows.append({"seed": seed, "coarse": coarse, "fine": fine,
                     "change": fine / coarse - 1.0 if coarse else 0.0})
    return rows


def run_kernel_checks(seeds: Sequence[int], cells: int = 128, padding: int = 16):
    """Prefix-sum operators against brute-force scans on 1-D fields, plus the
    sharp maximal function of a constant plateau away from its edges."""
    grid = GridSettings(dim=1, cells=cells, padding=padding, signed=True)
    lattice = WindowLattice.dyadic(padding)
    rows = []
    for seed in seeds:
        f = grid.field(seed)
        hl = maxops.hl_maximal(f, lattice).values
        sh = maxops.sharp_maximal(f, lattice).values
        rows.append({
            "seed": seed,
            "hl_diff": float(np.max(np.abs(hl - maxops.hl_maximal_bruteforce(f, lattice)))),
            "sharp_diff": float(np.max(np.abs(sh - maxops.sharp_maximal_bruteforce(f, lattice)))),
        })
    return rows


def constant_plateau_sharp(dim: int = 2, cells: int = 64, padding: int = 8, level: float = 1.7) -> float:
    """max M# over cells whose largest window stays on a constant plateau."""
    vals = np.zeros((cells,) * dim)
    inner = tuple(slice(padding, cells - padding) for _ in range(dim))
    vals[inner] = level
    f = GridField(vals, 1.0 / cells, (0.0,) * dim, padding)
    lattice = WindowLattice.dyadic(padding)
    sharp = maxops.sharp_maximal(f, lattice).values
    deep = tuple(slice(2 * padding, cells - 2 * padding) for _ in range(dim))
    return float(np.max(sharp[deep]))
