"""Subsystem codes defined by gauge generators.

A subsystem code is given by a list of gauge generators (phase-free
Paulis).  The stabilizer group is recovered as the center of the gauge
span, parameters follow from GF(2) ranks, distance is found by region
enumeration, and canonical bare logical representatives come from a
symplectic Gram-Schmidt on the gauge centralizer.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .pauli import (
    BitMatrix,
    PauliVector,
    in_span,
    kernel_on_support,
    symplectic_product,
)


@dataclass(frozen=True)
class CodeParameters:
    """[[n, k, d, g]] data; d is None until computed on demand."""

    n: int
    k: int
    g: int
    s: int
    d: int | None = None


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of the weight-capped distance search.

    ``value`` is the exact distance when found; None means every region of
    size up to ``weight_cap`` is correctable, i.e. d > weight_cap.
    """

    weight_cap: int
    value: int | None

    @property
    def is_lower_bound(self) -> bool:
        return self.value is None

    def describe(self) -> str:
        if self.value is None:
            return f"> {self.weight_cap}"
        return str(self.value)


@dataclass(frozen=True)
class LogicalPair:
    index: int
    x_bar: PauliVector
    z_bar: PauliVector


class SubsystemCode:
    """Gauge generators plus lazily derived GF(2) structure.

    Immutable after construction; duplicate or dependent generators are
    allowed since all derived quantities use ranks.
    """

    def __init__(self, n: int, gauge_generators: Iterable[PauliVector]) -> None:
        self.n = n
        self.gauge_generators: tuple[PauliVector, ...] = tuple(gauge_generators)
        for g in self.gauge_generators:
            if g.n != n:
                raise ValueError(f"generator length {g.n} != code length {n}")
        self._gauge_matrix: BitMatrix | None = None
        self._gauge_basis: BitMatrix | None = None
        self._stabilizer_basis: BitMatrix | None = None
        self._parameters: CodeParameters | None = None
        self._interaction_pairs: frozenset[tuple[int, int]] | None = None
        self._abelian: bool | None = None

    @classmethod
    def from_strings(cls, generators: Iterable[str], n: int | None = None) -> SubsystemCode:
        paulis = [PauliVector.from_string(s) for s in generators]
        if n is None:
            if not paulis:
                raise ValueError("cannot infer n from an empty generator list")
            n = paulis[0].n
        return cls(n, paulis)

    @property
    def gauge_matrix(self) -> BitMatrix:
        """Generator rows verbatim (interactions are defined against these)."""
        if self._gauge_matrix is None:
            self._gauge_matrix = BitMatrix.from_paulis(self.gauge_generators, self.n)
        return self._gauge_matrix

    @property
    def gauge_basis(self) -> BitMatrix:
        """Deterministic RREF basis of the gauge span."""
        if self._gauge_basis is None:
            self._gauge_basis = self.gauge_matrix.row_basis()
        return self._gauge_basis

    @property
    def stabilizer_basis(self) -> BitMatrix:
        if self._stabilizer_basis is None:
            self._stabilizer_basis = derive_stabilizer(self)
        return self._stabilizer_basis

    def has_abelian_gauge(self) -> bool:
        if self._abelian is None:
            rows = [PauliVector.from_bits(self.n, b) for b in self.gauge_basis.rows]
            self._abelian = all(
                symplectic_product(a, b) == 0 for a, b in itertools.combinations(rows, 2)
            )
        return self._abelian

    def interaction_pairs(self) -> frozenset[tuple[int, int]]:
        """Unordered qubit pairs jointly covered by some gauge generator."""
        if self._interaction_pairs is None:
            pairs = set()
            for g in self.gauge_generators:
                supp = sorted(g.support())
                pairs.update(itertools.combinations(supp, 2))
            self._interaction_pairs = frozenset(pairs)
        return self._interaction_pairs

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gauge_generators": [g.to_string() for g in self.gauge_generators],
        }

    @classmethod
    def from_json(cls, obj: dict) -> SubsystemCode:
        try:
            n = int(obj["n"])
            gens = obj["gauge_generators"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed code object: {exc}") from None
        paulis = []
        for s in gens:
            p = PauliVector.from_string(s)
            if p.n != n:
                raise ValueError(f"generator {s!r} has length {p.n}, expected {n}")
            paulis.append(p)
        return cls(n, paulis)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self) -> str:
        return f"SubsystemCode(n={self.n}, generators={len(self.gauge_generators)})"


def derive_stabilizer(code: SubsystemCode) -> BitMatrix:
    """Basis of the center of the gauge span (the stabilizer group, mod phase)."""
    basis = code.gauge_basis
    r = len(basis.rows)
    if r == 0:
        return BitMatrix(2 * code.n)
    basis_paulis = [PauliVector.from_bits(code.n, b) for b in basis.rows]
    # Coefficient-space constraints: an element sum_j a_j b_j is central iff
    # sum_j a_j <b_j, b_i> = 0 for every basis row b_i.
    gram_rows = []
    for b_i in basis_paulis:
        row = 0
        for j, b_j in enumerate(basis_paulis):
            row |= symplectic_product(b_j, b_i) << j
        gram_rows.append(row)
    coeff_kernel = BitMatrix(r, gram_rows).nullspace()
    stab_rows = []
    for coeffs in coeff_kernel.rows:
        v = 0
        for j in range(r):
            if coeffs >> j & 1:
                v ^= basis.rows[j]
        stab_rows.append(v)
    return BitMatrix(2 * code.n, stab_rows).row_basis()


def parameters(code: SubsystemCode) -> CodeParameters:
    """(n, k, g, s) from the rank formulas; d left unset."""
    if code._parameters is None:
        r = code.gauge_basis.rank()
        s = code.stabilizer_basis.rank()
        assert (r - s) % 2 == 0, "symplectic form on the gauge span has odd rank"
        g = (r - s) // 2
        k = code.n - s - g
        code._parameters = CodeParameters(n=code.n, k=k, g=g, s=s)
    return code._parameters


def region_is_correctable(code: SubsystemCode, qubits: Iterable[int]) -> bool:
    """True iff every stabilizer-commuting Pauli on the region is pure gauge.

    The escape set is a coset structure, so the region is correctable iff
    the whole kernel lies in the gauge span.
    """
    kernel = kernel_on_support(qubits, code.stabilizer_basis)
    gauge = code.gauge_basis
    return all(gauge.contains(v) for v in kernel.rows)


def distance(code: SubsystemCode, weight_cap: int | None = None) -> DistanceResult:
    """Minimum weight of a dressed logical operator, via region enumeration.

    Searches for the smallest w such that some w-qubit region supports a
    stabilizer-commuting Pauli outside the gauge span.  Returns a
    "greater than weight_cap" result when no such region exists up to the
    cap (default cap: n).
    """
    p = parameters(code)
    if p.k == 0:
        raise ValueError("distance undefined for k = 0")
    cap = code.n if weight_cap is None else min(weight_cap, code.n)
    for w in range(1, cap + 1):
        for region in itertools.combinations(range(code.n), w):
            if not region_is_correctable(code, region):
                return DistanceResult(weight_cap=cap, value=w)
    return DistanceResult(weight_cap=cap, value=None)


def logical_representatives(code: SubsystemCode) -> list[LogicalPair]:
    """Canonical bare logical pairs via symplectic Gram-Schmidt.

    Works in the centralizer of the gauge span modulo the stabilizer;
    deterministic given the code because every intermediate basis comes
    from the cached RREF order.
    """
    p = parameters(code)
    if p.k == 0:
        raise ValueError("no logical qubits (k = 0)")
    n = code.n
    centralizer = kernel_on_support(range(n), code.gauge_basis)
    # Strip the stabilizer part: keep centralizer vectors independent mod S.
    mod_out = BitMatrix(2 * n, code.stabilizer_basis.rows)
    complement: list[int] = []
    for v in centralizer.row_basis().rows:
        red = mod_out.reduce_vector(v)
        if red != 0:
            complement.append(red)
            mod_out = mod_out.stack([red])
    assert len(complement) == 2 * p.k, "centralizer/stabilizer dimension mismatch"

    def sym(a: int, b: int) -> int:
        return symplectic_product(PauliVector.from_bits(n, a), PauliVector.from_bits(n, b))

    pairs = []
    pool = list(complement)
    while pool:
        u = pool.pop(0)
        partner_idx = next(i for i, v in enumerate(pool) if sym(u, v) == 1)
        v = pool.pop(partner_idx)
        pool = [w ^ (sym(w, v) * u) ^ (sym(w, u) * v) for w in pool]
        pairs.append((u, v))
    out = []
    for idx, (u, v) in enumerate(pairs):
        out.append(
            LogicalPair(
                index=idx,
                x_bar=PauliVector.from_bits(n, u),
                z_bar=PauliVector.from_bits(n, v),
            )
        )
    return out


def stabilizer_paulis(code: SubsystemCode) -> list[PauliVector]:
    return [PauliVector.from_bits(code.n, b) for b in code.stabilizer_basis.rows]
