"""Embeddings, interaction extraction, point density, grid tilings, and box subdivision."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .codes import SubsystemCode

DISTANCE_SLACK = 1e-12


@dataclass(frozen=True)
class Box:
    """Closed axis-parallel box [min_1, max_1] x ... x [min_D, max_D]."""

    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.mins) != len(self.maxs):
            raise ValueError("min and max corners have different dimensions")
        for lo, hi in zip(self.mins, self.maxs):
            if lo > hi:
                raise ValueError(f"box has min {lo} > max {hi}")

    @property
    def dimension(self) -> int:
        return len(self.mins)

    @property
    def side_lengths(self) -> tuple[float, ...]:
        return tuple(hi - lo for lo, hi in zip(self.mins, self.maxs))

    def contains(self, point: Sequence[float], half_open: bool = False) -> bool:
        """Closed membership by default; half_open uses [min, max) per axis."""
        if half_open:
            return all(lo <= x < hi for x, lo, hi in zip(point, self.mins, self.maxs))
        return all(lo <= x <= hi for x, lo, hi in zip(point, self.mins, self.maxs))

    @classmethod
    def cube(cls, center: Sequence[float], side: float) -> Box:
        half = side / 2.0
        return cls(tuple(c - half for c in center), tuple(c + half for c in center))

    def to_json(self) -> dict:
        return {"min": list(self.mins), "max": list(self.maxs)}

    @classmethod
    def from_json(cls, obj: dict) -> Box:
        return cls(tuple(float(v) for v in obj["min"]), tuple(float(v) for v in obj["max"]))


class Embedding:
    """Qubit coordinates in R^D; a valid embedding has pairwise distance >= 1."""

    def __init__(self, dimension: int, coordinates: Sequence[Sequence[float]]) -> None:
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        arr = np.asarray(coordinates, dtype=float)
        if arr.size == 0:
            arr = arr.reshape(0, dimension)
        if arr.ndim != 2 or arr.shape[1] != dimension:
            raise ValueError(f"coordinates must be n x {dimension}")
        self.coordinates = arr
        self.coordinates.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def point(self, i: int) -> tuple[float, ...]:
        return tuple(self.coordinates[i])

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.coordinates[i] - self.coordinates[j]))

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "coordinates": self.coordinates.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> Embedding:
        return cls(int(obj["dimension"]), obj["coordinates"])

    def __repr__(self) -> str:
        return f"Embedding(D={self.dimension}, n={self.n})"


def validate_embedding(e: Embedding) -> list[tuple[int, int, float]]:
    """All pairs at distance < 1 (allowing 1e-12 slack); empty list means valid."""
    coords = e.coordinates
    violations = []
    for i in range(e.n):
        diffs = coords[i + 1 :] - coords[i]
        if len(diffs) == 0:
            continue
        dists = np.linalg.norm(diffs, axis=1)
        for off in np.nonzero(dists < 1.0 - DISTANCE_SLACK)[0]:
            j = i + 1 + int(off)
            violations.append((i, j, float(dists[off])))
    return violations


@dataclass(frozen=True)
class InteractionSet:
    """Deduplicated qubit pairs with Euclidean lengths.

    ``pairs`` holds (i, j, length) with i < j, sorted; ``multiplicity``
    records in how many generators each pair co-occurs (metadata only --
    the bounds count pairs, not generator incidences).
    """

    n: int
    pairs: tuple[tuple[int, int, float], ...]
    multiplicity: Mapping[tuple[int, int], int]

    def lengths(self) -> list[float]:
        return [length for _, _, length in self.pairs]

    def max_length(self) -> float:
        return max((length for _, _, length in self.pairs), default=0.0)

    def bad_qubits(self, ell: float) -> frozenset[int]:
        """Qubits participating in an interaction of length >= ell."""
        out = set()
        for i, j, length in self.pairs:
            if length >= ell:
                out.add(i)
                out.add(j)
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pairs": [[i, j, length] for i, j, length in self.pairs],
        }


def extract_interactions(code: SubsystemCode, e: Embedding) -> InteractionSet:
    """Pairs from gauge-generator supports, with lengths from the embedding."""
    if e.n != code.n:
        raise ValueError(f"embedding has {e.n} points, code has {code.n} qubits")
    mult: dict[tuple[int, int], int] = {}
    for g in code.gauge_generators:
        for pair in itertools.combinations(sorted(g.support()), 2):
            mult[pair] = mult.get(pair, 0) + 1
    pairs = tuple(
        (i, j, e.distance(i, j)) for i, j in sorted(mult)
    )
    return InteractionSet(n=code.n, pairs=pairs, multiplicity=dict(mult))


def count_long(s: InteractionSet, ell: float) -> tuple[int, dict[int, int]]:
    """Number of interactions of length >= ell and the per-qubit counter f.

    The per-qubit values sum to exactly 2M since each long pair has two
    endpoints.
    """
    if ell <= 0:
        raise ValueError("ell must be positive")
    m = 0
    f: dict[int, int] = {q: 0 for q in range(s.n)}
    for i, j, length in s.pairs:
        if length >= ell:
            m += 1
            f[i] += 1
            f[j] += 1
    return m, f


def ball_volume(dim: int) -> float:
    """Volume of the unit ball in R^D."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


def packing_bound(b: Box) -> float:
    """Upper bound (2^D / vol(B_D)) * prod(1 + L_i) on embedded points in b."""
    d = b.dimension
    bound = 2.0**d / ball_volume(d)
    for length in b.side_lengths:
        bound *= 1.0 + length
    return bound


def points_in_box(e: Embedding, b: Box, half_open: bool = False) -> list[int]:
    return [i for i in range(e.n) if b.contains(e.coordinates[i], half_open=half_open)]


def check_density(b: Box, e: Embedding) -> bool:
    """Point-density check: embedded points inside b never exceed the bound."""
    return len(points_in_box(e, b)) <= packing_bound(b)


@dataclass(frozen=True)
class GridTiling:
    """Axis-aligned tiling of R^D by width-w hypercubes anchored at offset."""

    width: float
    offset: tuple[float, ...]

    @property
    def dimension(self) -> int:
        return len(self.offset)

    def cell_index(self, point: Sequence[float]) -> tuple[int, ...]:
        return tuple(
            int(math.floor((x - o) / self.width)) for x, o in zip(point, self.offset)
        )

    def cell_box(self, index: Sequence[int]) -> Box:
        mins = tuple(o + i * self.width for o, i in zip(self.offset, index))
        return Box(mins, tuple(lo + self.width for lo in mins))

    def near_face_coords(self, point: Sequence[float], margin: float) -> int:
        """Number of coordinates whose residue mod w is within margin of a grid plane."""
        count = 0
        for x, o in zip(point, self.offset):
            r = (x - o) % self.width
            if r <= margin or r >= self.width - margin:
                count += 1
        return count

    def to_json(self) -> dict:
        return {"width": self.width, "offset": list(self.offset)}

    @classmethod
    def from_json(cls, obj: dict) -> GridTiling:
        return cls(float(obj["width"]), tuple(float(v) for v in obj["offset"]))


def verify_tiling(
    tiling: GridTiling,
    x_points: Sequence[Sequence[float]],
    y_points: Sequence[Sequence[float]],
    ell: float,
) -> dict:
    """Independent enumeration check of the tiling fractions.

    Pure per-point loops, kept free of the sampler's vectorized code on
    purpose: counts X points within ell_inf distance 2*ell of a
    codimension-2 face and Y points within 2*ell of a codimension-1 face,
    and compares against the allowed fractions (4*ell*D/w)^2 and 8*ell*D/w.
    """
    w = tiling.width
    dim = tiling.dimension
    margin = 2.0 * ell
    x_bad = 0
    for p in x_points:
        if tiling.near_face_coords(p, margin) >= 2:
            x_bad += 1
    y_bad = 0
    for p in y_points:
        if tiling.near_face_coords(p, margin) >= 1:
            y_bad += 1
    x_fraction = x_bad / len(x_points) if x_points else 0.0
    y_fraction = y_bad / len(y_points) if y_points else 0.0
    x_allowed = (4.0 * ell * dim / w) ** 2
    y_allowed = 8.0 * ell * dim / w
    return {
        "x_bad": x_bad,
        "y_bad": y_bad,
        "x_fraction": x_fraction,
        "y_fraction": y_fraction,
        "x_allowed": x_allowed,
        "y_allowed": y_allowed,
        "ok": x_fraction <= x_allowed and y_fraction <= y_allowed,
    }


def _fractions_ok(
    offset: np.ndarray,
    xs: np.ndarray,
    ys: np.ndarray,
    w: float,
    ell: float,
    dim: int,
) -> bool:
    margin = 2.0 * ell
    x_allowed = (4.0 * ell * dim / w) ** 2
    y_allowed = 8.0 * ell * dim / w
    if len(xs):
        r = (xs - offset) % w
        bad = (r <= margin) | (r >= w - margin)
        if np.count_nonzero(bad.sum(axis=1) >= 2) > x_allowed * len(xs):
            return False
    if len(ys):
        r = (ys - offset) % w
        bad = (r <= margin) | (r >= w - margin)
        if np.count_nonzero(bad.any(axis=1)) > y_allowed * len(ys):
            return False
    return True


def _derandomized_offset(
    xs: np.ndarray, ys: np.ndarray, w: float, ell: float, dim: int
) -> np.ndarray:
    """Exact fallback by the method of conditional expectations.

    Processes coordinates one at a time over the finite set of critical
    offsets {p_i mod w, (p_i +/- 2*ell) mod w} plus interval midpoints; the
    conditional failure estimator is piecewise constant between critical
    values, and picking the minimizing candidate at each coordinate keeps
    the estimator below 1, so the final offset satisfies both fractions.
    """
    q = min(4.0 * ell / w, 1.0)
    tx = (4.0 * ell * dim / w) ** 2 * len(xs)
    ty = 8.0 * ell * dim / w * len(ys)
    margin = 2.0 * ell

    # x_state: 0/1/2+ bad coords so far; y_state: any bad coord so far
    x_bad_counts = np.zeros(len(xs), dtype=int)
    y_bad_any = np.zeros(len(ys), dtype=bool)
    offset = np.zeros(dim)

    def estimator(xb: np.ndarray, yb: np.ndarray, remaining: int) -> float:
        total = 0.0
        if len(xs) and tx > 0:
            keep = (1.0 - q) ** remaining
            one_more = remaining * q * (1.0 - q) ** (remaining - 1) if remaining else 0.0
            p2 = np.where(
                xb >= 2, 1.0, np.where(xb == 1, 1.0 - keep, 1.0 - keep - one_more)
            )
            total += p2.sum() / tx
        if len(ys) and ty > 0:
            keep = (1.0 - q) ** remaining
            p1 = np.where(yb, 1.0, 1.0 - keep)
            total += p1.sum() / ty
        return total

    all_points = np.concatenate([xs, ys]) if len(xs) or len(ys) else np.zeros((0, dim))
    for j in range(dim):
        if len(all_points) == 0:
            break
        coords = all_points[:, j]
        crit = np.concatenate([coords % w, (coords - margin) % w, (coords + margin) % w])
        crit = np.unique(np.concatenate([crit, np.array([0.0])]))
        mids = (crit + np.roll(crit, -1)) / 2.0
        mids[-1] = (crit[-1] + w) / 2.0 % w
        candidates = np.unique(np.concatenate([crit, mids]))
        best_val = None
        best_off = 0.0
        best_xb = best_yb = None
        remaining = dim - j - 1
        for o in candidates:
            if len(xs):
                r = (xs[:, j] - o) % w
                xb = x_bad_counts + ((r <= margin) | (r >= w - margin))
            else:
                xb = x_bad_counts
            if len(ys):
                r = (ys[:, j] - o) % w
                yb = y_bad_any | (r <= margin) | (r >= w - margin)
            else:
                yb = y_bad_any
            val = estimator(xb, yb, remaining)
            if best_val is None or val < best_val:
                best_val, best_off, best_xb, best_yb = val, float(o), xb, yb
        offset[j] = best_off
        x_bad_counts = best_xb
        y_bad_any = best_yb
    return offset


def find_tiling(
    x_points: Sequence[Sequence[float]],
    y_points: Sequence[Sequence[float]],
    w: float,
    ell: float,
    dim: int,
    seed: int,
    max_tries: int = 10_000,
) -> GridTiling:
    """Find a width-w tiling keeping X away from codim-2 and Y away from codim-1 faces.

    Rejection-samples uniform offsets (the probabilistic argument gives
    success probability > 0), then falls back to a complete derandomized
    search, so the operation is total for any w >= 4*ell.
    """
    if ell <= 0:
        raise ValueError("ell must be positive")
    if w < 4 * ell:
        raise ValueError(f"w = {w} violates the precondition w >= 4*ell = {4 * ell}")
    xs = np.asarray(x_points, dtype=float).reshape(-1, dim) if len(x_points) else np.zeros((0, dim))
    ys = np.asarray(y_points, dtype=float).reshape(-1, dim) if len(y_points) else np.zeros((0, dim))
    rng = random.Random(seed)
    for _ in range(max_tries):
        offset = np.array([rng.uniform(0.0, w) for _ in range(dim)])
        if _fractions_ok(offset, xs, ys, w, ell, dim):
            return GridTiling(width=w, offset=tuple(float(v) for v in offset))
    offset = _derandomized_offset(xs, ys, w, ell, dim)
    tiling = GridTiling(width=w, offset=tuple(float(v) for v in offset))
    if not _fractions_ok(offset, xs, ys, w, ell, dim):
        raise AssertionError("derandomized tiling search failed; this should be impossible")
    return tiling


MassMap = Sequence[tuple[Sequence[float], int]]


def _mass_in_interval(
    masses: list[tuple[float, int]], lo: float, hi: float, closed_hi: bool
) -> int:
    total = 0
    for x, m in masses:
        if lo <= x < hi or (closed_hi and x == hi):
            total += m
    return total


def subdivide(b: Box, f: MassMap, ell: float, d1: float) -> list[Box]:
    """Split b by hyperplanes orthogonal to x_1 into boxes that are light or short.

    Every output box has height >= 5*ell and satisfies mass <= d1 or
    height <= 10*ell; mass membership uses [lo, hi) half-open slabs except
    the topmost box, which is closed.  Greedy sweep: take the longest
    light prefix, or a short (<= 10*ell) slab swallowing the mass point
    that tips the prefix over d1; a final merge pass removes mergeable
    neighbors to keep the count low.
    """
    if ell <= 0:
        raise ValueError("ell must be positive")
    if d1 <= 0:
        raise ValueError("d1 must be positive")
    lo, hi = b.mins[0], b.maxs[0]
    height = hi - lo
    if height < 5 * ell:
        raise ValueError(f"box height {height} < 5*ell = {5 * ell}")
    masses = sorted(
        ((float(point[0]), int(m)) for point, m in f if b.contains(point)),
        key=lambda t: t[0],
    )

    cuts = [lo]
    cur = lo
    while True:
        rem_mass = _mass_in_interval(masses, cur, hi, closed_hi=True)
        rem_height = hi - cur
        if rem_mass <= d1 or rem_height <= 10 * ell:
            cuts.append(hi)
            break
        # longest light prefix: everything before the atom that tips over d1
        acc = 0
        tip = hi
        for x, m in masses:
            if x < cur:
                continue
            acc += m
            if acc > d1:
                tip = x
                break
        prefix = tip - cur
        cap = rem_height - 5 * ell
        if prefix < min(10 * ell, cap):
            step = min(10 * ell, cap)  # short heavy slab swallowing the tip
        else:
            step = min(prefix, cap)  # light prefix, capped to leave >= 5*ell
        cur += step
        cuts.append(cur)

    # merge pass: join neighbors whenever the union is still light or short
    def segment_ok(a: float, c: float) -> bool:
        mass = _mass_in_interval(masses, a, c, closed_hi=(c == hi))
        return mass <= d1 or (c - a) <= 10 * ell

    merged = True
    while merged and len(cuts) > 2:
        merged = False
        for i in range(1, len(cuts) - 1):
            if segment_ok(cuts[i - 1], cuts[i + 1]):
                del cuts[i]
                merged = True
                break

    boxes = []
    for a, c in zip(cuts, cuts[1:]):
        boxes.append(Box((a,) + b.mins[1:], (c,) + b.maxs[1:]))
    return boxes
