"""Built-in code families with local embeddings, subsystem concatenation,
and the dilated concatenated embedding recipe."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import projector_bounds, subsystem_bounds
from .codes import (
    DistanceResult,
    LogicalPair,
    SubsystemCode,
    distance,
    logical_representatives,
    parameters,
)
from .geometry import Embedding, extract_interactions, validate_embedding
from .pauli import PauliVector


@dataclass(frozen=True)
class EmbeddedCode:
    code: SubsystemCode
    embedding: Embedding
    family: str
    params: dict

    def __post_init__(self) -> None:
        if self.embedding.n != self.code.n:
            raise ValueError("embedding size does not match code size")
        violations = validate_embedding(self.embedding)
        if violations:
            raise ValueError(f"embedding violates pairwise distance >= 1: {violations[:3]}")


def _grid_lattice_points(n: int, dim: int) -> list[tuple[float, ...]]:
    """First n points of a row-major cubic lattice of side ceil(n^(1/D))."""
    side = max(1, math.ceil(n ** (1.0 / dim)))
    while side**dim < n:
        side += 1
    points = []
    for idx in range(n):
        rem = idx
        coord = []
        for _ in range(dim):
            coord.append(float(rem % side))
            rem //= side
        points.append(tuple(coord))
    return points


def bacon_shor(m: int) -> EmbeddedCode:
    """m x m Bacon-Shor code on the unit grid.

    Gauge generators are XX on vertically adjacent pairs and ZZ on
    horizontally adjacent pairs; qubit (row r, column c) sits at (c, r).
    """
    if m < 2:
        raise ValueError("Bacon-Shor needs m >= 2")
    n = m * m

    def idx(r: int, c: int) -> int:
        return r * m + c

    gens = []
    for r in range(m - 1):
        for c in range(m):
            x = (1 << idx(r, c)) | (1 << idx(r + 1, c))
            gens.append(PauliVector(n, x, 0))
    for r in range(m):
        for c in range(m - 1):
            z = (1 << idx(r, c)) | (1 << idx(r, c + 1))
            gens.append(PauliVector(n, 0, z))
    coords = [(float(c), float(r)) for r in range(m) for c in range(m)]
    return EmbeddedCode(
        code=SubsystemCode(n, gens),
        embedding=Embedding(2, coords),
        family="bacon_shor",
        params={"m": m},
    )


def surface_code(m: int) -> EmbeddedCode:
    """Planar (unrotated) surface code of distance m.

    Data qubits sit on grid points (r, c) with r + c even inside a
    (2m-1) x (2m-1) patch; X checks live at odd rows, Z checks at odd
    columns.  The gauge group is abelian, so this is a stabilizer code.
    """
    if m < 2:
        raise ValueError("surface code needs m >= 2")
    size = 2 * m - 1
    data = {}
    for r in range(size):
        for c in range(size):
            if (r + c) % 2 == 0:
                data[(r, c)] = len(data)
    n = len(data)

    def star(r: int, c: int) -> list[int]:
        out = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            q = data.get((r + dr, c + dc))
            if q is not None:
                out.append(q)
        return out

    gens = []
    for r in range(size):
        for c in range(size):
            if r % 2 == 1 and c % 2 == 0:
                x = sum(1 << q for q in star(r, c))
                gens.append(PauliVector(n, x, 0))
            elif r % 2 == 0 and c % 2 == 1:
                z = sum(1 << q for q in star(r, c))
                gens.append(PauliVector(n, 0, z))
    coords = [None] * n
    for (r, c), q in data.items():
        coords[q] = (float(c), float(r))
    return EmbeddedCode(
        code=SubsystemCode(n, gens),
        embedding=Embedding(2, coords),
        family="surface",
        params={"m": m},
    )


_FIVE_QUBIT_STABILIZERS = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]

_STEANE_H = [
    [1, 0, 0, 1, 0, 1, 1],
    [0, 1, 0, 1, 1, 0, 1],
    [0, 0, 1, 0, 1, 1, 1],
]


def small_inner_codes(name: str, r: int | None = None, dim: int = 2) -> EmbeddedCode:
    """Named small stabilizer codes on a cubic lattice patch.

    Stand-ins for good qLDPC inner codes: steane ([[7,1,3]]),
    five_one_three ([[5,1,3]]), and repetition(r) ([[r,1,1]]).
    """
    if name == "five_one_three":
        gens = [PauliVector.from_string(s) for s in _FIVE_QUBIT_STABILIZERS]
        n = 5
    elif name == "steane":
        n = 7
        gens = []
        for row in _STEANE_H:
            bits = sum(1 << i for i, v in enumerate(row) if v)
            gens.append(PauliVector(n, bits, 0))
        for row in _STEANE_H:
            bits = sum(1 << i for i, v in enumerate(row) if v)
            gens.append(PauliVector(n, 0, bits))
    elif name == "repetition":
        if r is None or r < 2:
            raise ValueError("repetition needs a length r >= 2")
        n = r
        gens = [PauliVector(n, 0, (1 << i) | (1 << (i + 1))) for i in range(n - 1)]
    else:
        raise ValueError(f"unknown code name {name!r}")
    return EmbeddedCode(
        code=SubsystemCode(n, gens),
        embedding=Embedding(dim, _grid_lattice_points(n, dim)),
        family=name if name != "repetition" else f"repetition({r})",
        params={"n": n},
    )


def _substitute(
    outer_pauli: PauliVector, logicals: list[list[LogicalPair]], n_total: int, copy: int
) -> PauliVector:
    """Replace each outer single-qubit Pauli with the matching bare logical.

    ``logicals[j]`` holds the inner logical pairs for block j; the outer
    qubit j of copy i maps to that block's i-th logical qubit.  X -> x_bar,
    Z -> z_bar, Y -> x_bar * z_bar (phase dropped).
    """
    out = PauliVector.identity(n_total)
    for j in range(outer_pauli.n):
        has_x = outer_pauli.x_bits >> j & 1
        has_z = outer_pauli.z_bits >> j & 1
        if not (has_x or has_z):
            continue
        pair = logicals[j][copy]
        if has_x:
            out = out * pair.x_bar
        if has_z:
            out = out * pair.z_bar
    return out


def concatenate(inner: SubsystemCode, outer: SubsystemCode) -> SubsystemCode:
    """Subsystem concatenation: n2 inner blocks carrying k1 outer copies.

    Gauge generators are (a) each inner gauge generator on each block, and
    (b) each outer gauge generator with every single-qubit Pauli replaced
    by the corresponding block's bare logical representative.  The result
    has n = n1*n2, k = k1*k2, g = k1*g2 + n2*g1 and d >= d1*d2.
    """
    p1 = parameters(inner)
    if p1.k < 1:
        raise ValueError("inner code must have k >= 1")
    n1, k1 = inner.n, p1.k
    n2 = outer.n
    n_total = n1 * n2
    inner_logicals = logical_representatives(inner)

    def lift(p: PauliVector, block: int) -> PauliVector:
        shift = block * n1
        return PauliVector(n_total, p.x_bits << shift, p.z_bits << shift)

    gens: list[PauliVector] = []
    for block in range(n2):
        for g in inner.gauge_generators:
            gens.append(lift(g, block))
    block_logicals = [
        [
            LogicalPair(
                index=pair.index,
                x_bar=lift(pair.x_bar, block),
                z_bar=lift(pair.z_bar, block),
            )
            for pair in inner_logicals
        ]
        for block in range(n2)
    ]
    for copy in range(k1):
        for g in outer.gauge_generators:
            gens.append(_substitute(g, block_logicals, n_total, copy))
    return SubsystemCode(n_total, gens)


@dataclass(frozen=True)
class ConcatPlan:
    """Inputs for the dilated concatenated embedding.

    ell_prime = 2*(sqrt(D) + ell2) with ell2 the outer code's interaction
    locality (measured from its embedding unless overridden); the outer
    embedding is dilated by ell_target / ell_prime.
    """

    inner: EmbeddedCode
    outer: EmbeddedCode
    ell_target: float
    ell2: float | None = None

    def outer_locality(self) -> float:
        if self.ell2 is not None:
            return self.ell2
        ints = extract_interactions(self.outer.code, self.outer.embedding)
        return ints.max_length()

    @property
    def dimension(self) -> int:
        return self.outer.embedding.dimension

    def ell_prime(self) -> float:
        return 2.0 * (math.sqrt(self.dimension) + self.outer_locality())

    def dilation(self) -> float:
        return self.ell_target / self.ell_prime()


def build_concat_embedding(plan: ConcatPlan) -> EmbeddedCode:
    """Concatenate and embed: inner lattice blocks centered at the dilated
    outer coordinates.

    Raises when ell_target < ell_prime or when the resulting point set
    fails the pairwise-distance validation (blocks would overlap).  The
    triangle bound dilation*ell2 + inner diameter is recorded in params and
    every measured interaction length must stay below ell_target.
    """
    if plan.inner.embedding.dimension != plan.outer.embedding.dimension:
        raise ValueError("inner and outer embeddings have different dimensions")
    ell_prime = plan.ell_prime()
    if plan.ell_target < ell_prime:
        raise ValueError(
            f"ell_target = {plan.ell_target:g} below ell_prime = {ell_prime:g}; "
            "blocks would overlap"
        )
    dilation = plan.dilation()
    dim = plan.dimension
    inner_coords = plan.inner.embedding.coordinates
    centroid = inner_coords.mean(axis=0) if len(inner_coords) else np.zeros(dim)
    centered = inner_coords - centroid
    outer_coords = plan.outer.embedding.coordinates

    code = concatenate(plan.inner.code, plan.outer.code)
    points = []
    for b in range(plan.outer.code.n):
        center = dilation * outer_coords[b]
        for row in centered:
            points.append(tuple(center + row))
    embedding = Embedding(dim, points)
    violations = validate_embedding(embedding)
    if violations:
        raise ValueError(
            f"dilation {dilation:g} leaves blocks too close: "
            f"{len(violations)} pairs under distance 1 (e.g. {violations[0]})"
        )
    inner_diameter = 0.0
    for i in range(len(centered)):
        for j in range(i + 1, len(centered)):
            inner_diameter = max(inner_diameter, float(np.linalg.norm(centered[i] - centered[j])))
    ints = extract_interactions(code, embedding)
    measured = ints.max_length()
    if measured >= plan.ell_target:
        raise AssertionError(
            f"interaction of length {measured:g} >= ell_target {plan.ell_target:g}"
        )
    return EmbeddedCode(
        code=code,
        embedding=embedding,
        family="concatenated",
        params={
            "inner": plan.inner.family,
            "outer": plan.outer.family,
            "ell_target": plan.ell_target,
            "ell_prime": ell_prime,
            "dilation": dilation,
            "ell2": plan.outer_locality(),
            "inner_diameter": inner_diameter,
            "triangle_bound": dilation * plan.outer_locality() + inner_diameter,
            "max_interaction_length": measured,
        },
    )


@dataclass(frozen=True)
class SaturationReport:
    n: int
    k: int
    d: str
    d_is_lower_bound: bool
    code_class: str
    ell_star: float
    max_interaction_length: float
    ratio: float

    def to_json(self) -> dict:
        return self.__dict__.copy()


def saturation_report(
    ec: EmbeddedCode, code_class: str = "subsystem", weight_cap: int | None = None
) -> SaturationReport:
    """Measured locality against the asymptotic ell* for the code's parameters.

    For the built-in saturating families the ratio L_max / ell* is O(1);
    a weight-capped distance search reports a lower bound instead of the
    exact d.
    """
    p = parameters(ec.code)
    dres: DistanceResult = distance(ec.code, weight_cap=weight_cap)
    d_eff = dres.value if dres.value is not None else dres.weight_cap + 1
    dim = ec.embedding.dimension
    if code_class == "subsystem":
        report = subsystem_bounds(ec.code.n, max(p.k, 1), d_eff, dim, mode="asymptotic")
    elif code_class == "projector":
        report = projector_bounds(ec.code.n, max(p.k, 1), d_eff, dim, mode="asymptotic")
    else:
        raise ValueError(f"unknown code class {code_class!r}")
    ints = extract_interactions(ec.code, ec.embedding)
    l_max = ints.max_length()
    ell_star = report.ell_star
    return SaturationReport(
        n=ec.code.n,
        k=p.k,
        d=dres.describe(),
        d_is_lower_bound=dres.is_lower_bound,
        code_class=code_class,
        ell_star=ell_star,
        max_interaction_length=l_max,
        ratio=l_max / ell_star if ell_star > 0 else math.inf,
    )
