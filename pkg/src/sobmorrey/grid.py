"""Uniform-grid fields on boxes in R^d (d = 1, 2, 3) with a zero margin.

Values live at cell centres. Every field carries ``padding`` cells of exact
zeros on each face, so windows of radius up to ``padding`` around any cell
of the support stay inside the box.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np

MIN_EXTENT = 8
_MAGIC = b"SMGF"


class UnsupportedDim(ValueError):
    pass


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridField:
    values: np.ndarray
    h: float
    lower: Tuple[float, ...]
    padding: int

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim not in (1, 2, 3):
            raise UnsupportedDim(f"dimension {vals.ndim} not in (1, 2, 3)")
        if min(vals.shape) < MIN_EXTENT:
            raise GridError(f"extents {vals.shape} below {MIN_EXTENT}")
        if not self.h > 0:
            raise GridError("cell size must be positive")
        lower = tuple(float(x) for x in np.broadcast_to(self.lower, (vals.ndim,)))
        pad = int(self.padding)
        if pad < 0 or 2 * pad >= min(vals.shape):
            raise GridError(f"padding {pad} does not fit extents {vals.shape}")
        if pad and _band_max(vals, pad) != 0.0:
            raise GridError("nonzero values inside the padding band")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "padding", pad)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def cells(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def box(self):
        return tuple((lo, lo + n * self.h) for lo, n in zip(self.lower, self.cells))

    @property
    def cell_volume(self) -> float:
        return self.h ** self.dim

    def axis_centres(self, axis: int) -> np.ndarray:
        return self.lower[axis] + (np.arange(self.cells[axis]) + 0.5) * self.h

    def coords(self):
        return np.meshgrid(*(self.axis_centres(a) for a in range(self.dim)), indexing="ij")

    def with_values(self, values) -> "GridField":
        return GridField(values, self.h, self.lower, self.padding)

    def scaled(self, c: float) -> "GridField":
        return self.with_values(c * self.values)


def _band_max(vals, pad):
    inner = tuple(slice(pad, n - pad) for n in vals.shape)
    masked = np.abs(vals).copy()
    masked[inner] = 0.0
    return float(masked.max())


def _grid_geometry(box, cells, dim):
    box = np.asarray(box, dtype=float).reshape(dim, 2)
    cells = tuple(int(c) for c in np.broadcast_to(cells, (dim,)))
    sizes = (box[:, 1] - box[:, 0]) / np.asarray(cells)
    if not np.allclose(sizes, sizes[0], rtol=1e-12, atol=0):
        raise GridError(f"non-uniform cell sizes {sizes}")
    return box, cells, float(sizes[0])


def sample_field(func: Callable, box, cells, padding: int) -> GridField:
    """Evaluate ``func(*coords)`` at cell centres and zero the padding band."""
    box = np.asarray(box, dtype=float)
    dim = box.size // 2
    if dim not in (1, 2, 3):
        raise UnsupportedDim(f"dimension {dim} not in (1, 2, 3)")
    box, cells, h = _grid_geometry(box, cells, dim)
    axes = [box[a, 0] + (np.arange(cells[a]) + 0.5) * h for a in range(dim)]
    coords = np.meshgrid(*axes, indexing="ij")
    vals = np.array(func(*coords), dtype=float)
    if padding:
        band = np.ones(cells, dtype=bool)
        band[tuple(slice(padding, n - padding) for n in cells)] = False
        vals[band] = 0.0
    return GridField(vals, h, tuple(box[:, 0]), padding)


class SummandKind(enum.Enum):
    GAUSSIAN = "gaussian"
    SCALED_BUMP = "bump"


def _smooth_step(s):
    """C-infinity step: 1 for s <= 0, 0 for s >= 1."""
    s = np.clip(s, 0.0, 1.0)

    def f(x):
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = np.exp(-1.0 / x[pos])
        return out

    a, b = f(1.0 - s), f(s)
    return a / (a + b)


def gaussian_profile(r2):
    """exp(-|x|^2/2), smoothly cut off between radius 4 and 6 (compact support)."""
    r = np.sqrt(r2)
    return np.exp(-0.5 * r2) * _smooth_step((r - 4.0) / 2.0)


def bump_profile(r2):
    """exp(1 - 1/(1 - |x|^2)) on the unit ball, 0 outside; peak value 1."""
    out = np.zeros_like(r2)
    inside = r2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
    return out


@dataclass(frozen=True)
class TestFunctionSpec:
    """Seeded family of sums of Gaussian-like or bump summands.

    Ranges are fractions of the inner box side (box minus padding).
    """

    __test__ = False  # keep pytest from collecting this

    seed: int = 42
    count: int = 3
    kind: SummandKind = SummandKind.GAUSSIAN
    centre_range: Tuple[float, float] = (0.35, 0.65)
    width_range: Tuple[float, float] = (0.03, 0.05)
    amplitude_range: Tuple[float, float] = (0.5, 1.5)
    signed: bool = False

    def summands(self, dim: int):
        rng = np.random.default_rng(self.seed)
        out = []
        for _ in range(self.count):
            centre = rng.uniform(*self.centre_range, size=dim)
            width = rng.uniform(*self.width_range)
            amp = rng.uniform(*self.amplitude_range)
            if self.signed and rng.uniform() < 0.5:
                amp = -amp
            out.append((centre, width, amp))
        return out

    def function(self, dim: int, inner_box) -> Callable:
        """Continuous function of physical coordinates (used for refinement studies)."""
        kind = SummandKind(self.kind)
        inner_box = np.asarray(inner_box, dtype=float).reshape(dim, 2)
        lo, side = inner_box[:, 0], inner_box[:, 1] - inner_box[:, 0]
        scale = float(side.min())
        terms = self.summands(dim)
        support = 6.0 if kind is SummandKind.GAUSSIAN else 1.0
        for centre, width, _ in terms:
            reach = support * width
            if np.any(centre - reach < 0) or np.any(centre + reach > 1):
                raise GridError("summand support leaves the inner box; narrow the ranges")
        prof = gaussian_profile if kind is SummandKind.GAUSSIAN else bump_profile

        def func(*coords):
            total = np.zeros(np.shape(coords[0]))
            for centre, width, amp in terms:
                r2 = sum(((x - (lo[a] + centre[a] * side[a])) / (width * scale)) ** 2
                         for a, x in enumerate(coords))
                total = total + amp * prof(r2)
            return total

        return func


def inner_box(box, cells, padding):
    box = np.asarray(box, dtype=float)
    dim = box.size // 2
    box, cells, h = _grid_geometry(box, cells, dim)
    return np.stack([box[:, 0] + padding * h, box[:, 1] - padding * h], axis=1)


def random_field(spec: TestFunctionSpec, dim: int, box, cells, padding: int) -> GridField:
    """Deterministic test field: same spec, same grid -> bit-identical values."""
    if dim not in (1, 2, 3):
        raise UnsupportedDim(f"dimension {dim} not in (1, 2, 3)")
    box = np.asarray(box, dtype=float).reshape(dim, 2)
    func = spec.function(dim, inner_box(box, cells, padding))
    return sample_field(func, box, cells, padding)


def lp_norm(f: GridField, s: float) -> float:
    """(sum |v|^s h^d)^(1/s), midpoint rule."""
    if not s >= 1:
        raise ValueError(f"SOutOfRange: need s >= 1, got {s}")
    return float(np.sum(np.abs(f.values) ** s) * f.cell_volume) ** (1.0 / s)


def lp_integral(values, cell_volume: float, s: float) -> float:
    return float(np.sum(np.abs(values) ** s) * cell_volume)


def gradient(f: GridField):
    """Per-axis central differences (one-sided on the outer faces)."""
    if f.dim == 1:
        return [np.gradient(f.values, f.h)]
    return list(np.gradient(f.values, f.h))


def gradient_magnitude(f: GridField) -> np.ndarray:
    # hypot avoids underflow when squaring tiny components
    comps = gradient(f)
    out = np.abs(comps[0])
    for c in comps[1:]:
        out = np.hypot(out, c)
    return out


# binary layout ------------------------------------------------------------
# header: magic, uint32 dim, dim x uint64 extents, float64 h, dim x (float64 lo, float64 hi)
# payload: row-major float64, all little-endian

def write_field(path, f: GridField) -> None:
    header = _MAGIC + struct.pack("<I", f.dim)
    header += struct.pack(f"<{f.dim}Q", *f.cells)
    header += struct.pack("<d", f.h)
    for lo, hi in f.box:
        header += struct.pack("<dd", lo, hi)
    payload = np.ascontiguousarray(f.values, dtype="<f8").tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(header + payload)


def read_field(path, padding=None) -> GridField:
    """Load a field; ``padding=None`` infers the zero margin from the data."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != _MAGIC:
        raise GridError("not a grid field file")
    off = 4
    (dim,) = struct.unpack_from("<I", raw, off)
    off += 4
    if dim not in (1, 2, 3):
        raise UnsupportedDim(f"dimension {dim} not in (1, 2, 3)")
    cells = struct.unpack_from(f"<{dim}Q", raw, off)
    off += 8 * dim
    (h,) = struct.unpack_from("<d", raw, off)
    off += 8
    box = np.array(struct.unpack_from(f"<{2 * dim}d", raw, off)).reshape(dim, 2)
    off += 16 * dim
    count = int(np.prod(cells))
    if len(raw) - off != 8 * count:
        raise GridError("payload size does not match header extents")
    vals = np.frombuffer(raw, dtype="<f8", count=count, offset=off).reshape(cells).astype(np.float64)
    if padding is None:
        padding = _infer_padding(vals)
    return GridField(vals, h, tuple(box[:, 0]), padding)


def _infer_padding(vals) -> int:
    nz = np.nonzero(vals)
    if not nz[0].size:
        return (min(vals.shape) - 1) // 2
    margins = []
    for axis, idx in enumerate(nz):
        margins.append(int(idx.min()))
        margins.append(int(vals.shape[axis] - 1 - idx.max()))
    return min(margins)
