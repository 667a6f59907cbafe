"""Region-level correctability, cleanability, and the correctable-set lemma checks.

Reports carry hypothesis flags separately from conclusions so property
tests can distinguish "vacuously true" from "substantively verified".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .codes import SubsystemCode, parameters, region_is_correctable
from .pauli import kernel_on_support

Region = frozenset


def region(qubits: Iterable[int]) -> frozenset[int]:
    return frozenset(qubits)


def validate_region(code: SubsystemCode, u: frozenset[int]) -> None:
    if u and (min(u) < 0 or max(u) >= code.n):
        raise ValueError(f"region {sorted(u)} outside qubit range [0, {code.n})")


def is_correctable(code: SubsystemCode, u: Iterable[int]) -> bool:
    """True iff no non-trivial dressed logical operator is supported on u."""
    u = frozenset(u)
    validate_region(code, u)
    return region_is_correctable(code, u)


def is_dressed_cleanable(code: SubsystemCode, u: Iterable[int]) -> bool:
    """True iff no non-trivial bare logical operator is supported on u."""
    u = frozenset(u)
    validate_region(code, u)
    kernel = kernel_on_support(u, code.gauge_basis)
    gauge = code.gauge_basis
    return all(gauge.contains(v) for v in kernel.rows)


def boundary(code: SubsystemCode, u: Iterable[int]) -> frozenset[int]:
    """Inner plus outer boundary of u under the code's interaction pairs."""
    u = frozenset(u)
    outer = set()
    inner = set()
    for i, j in code.interaction_pairs():
        if (i in u) != (j in u):
            if i in u:
                inner.add(i)
                outer.add(j)
            else:
                inner.add(j)
                outer.add(i)
    return frozenset(outer | inner)


def check_subset_closure(code: SubsystemCode, u: Iterable[int], w: Iterable[int]) -> bool:
    """Implication "u correctable => w correctable" for w inside u."""
    u, w = frozenset(u), frozenset(w)
    if not w <= u:
        raise ValueError("w must be a subset of u")
    return (not is_correctable(code, u)) or is_correctable(code, w)


@dataclass(frozen=True)
class UnionLemmaReport:
    mode: str
    decoupled: bool
    each_correctable: bool
    hypotheses_met: bool
    union_conclusion: bool
    holds: bool


def check_union_lemma(
    code: SubsystemCode, regions: Sequence[Iterable[int]], mode: str = "subsystem"
) -> UnionLemmaReport:
    """Union of decoupled correctable sets: dressed-cleanable (subsystem mode)
    or correctable (projector mode, abelian gauge group required)."""
    if mode not in ("subsystem", "projector"):
        raise ValueError(f"unknown mode {mode!r}")
    parts = [frozenset(r) for r in regions]
    for p in parts:
        validate_region(code, p)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if parts[i] & parts[j]:
                raise ValueError("regions must be pairwise disjoint")
    if mode == "projector" and not code.has_abelian_gauge():
        raise ValueError("projector mode requires an abelian gauge group")

    membership = {}
    for idx, p in enumerate(parts):
        for q in p:
            membership[q] = idx
    decoupled = True
    for i, j in code.interaction_pairs():
        a, b = membership.get(i), membership.get(j)
        if a is not None and b is not None and a != b:
            decoupled = False
            break
    each_correctable = all(is_correctable(code, p) for p in parts)
    hypotheses_met = decoupled and each_correctable
    union = frozenset().union(*parts) if parts else frozenset()
    if mode == "subsystem":
        conclusion = is_dressed_cleanable(code, union)
    else:
        conclusion = is_correctable(code, union)
    return UnionLemmaReport(
        mode=mode,
        decoupled=decoupled,
        each_correctable=each_correctable,
        hypotheses_met=hypotheses_met,
        union_conclusion=conclusion,
        holds=(not hypotheses_met) or conclusion,
    )


@dataclass(frozen=True)
class ExpansionLemmaReport:
    u_correctable: bool
    t_correctable: bool
    t_covers_boundary: bool
    hypotheses_met: bool
    union_correctable: bool
    holds: bool


def check_expansion_lemma(
    code: SubsystemCode, u: Iterable[int], t: Iterable[int]
) -> ExpansionLemmaReport:
    """If u and t are correctable and t covers the boundary of u, then
    u union t is correctable."""
    u, t = frozenset(u), frozenset(t)
    validate_region(code, u)
    validate_region(code, t)
    u_ok = is_correctable(code, u)
    t_ok = is_correctable(code, t)
    covers = boundary(code, u) <= t
    hyp = u_ok and t_ok and covers
    conclusion = is_correctable(code, u | t)
    return ExpansionLemmaReport(
        u_correctable=u_ok,
        t_correctable=t_ok,
        t_covers_boundary=covers,
        hypotheses_met=hyp,
        union_correctable=conclusion,
        holds=(not hyp) or conclusion,
    )


def _require_partition(code: SubsystemCode, parts: Sequence[frozenset[int]]) -> None:
    seen: set[int] = set()
    total = 0
    for p in parts:
        validate_region(code, p)
        total += len(p)
        seen |= p
    if total != code.n or seen != set(range(code.n)):
        raise ValueError("regions do not form a partition of all qubits")


@dataclass(frozen=True)
class AbReport:
    a_cleanable: bool
    k: int
    b_size: int
    hypotheses_met: bool
    bound_holds: bool | None
    holds: bool


def ab_bound_check(code: SubsystemCode, a: Iterable[int], b: Iterable[int]) -> AbReport:
    """If A is dressed-cleanable then k <= |B|."""
    a, b = frozenset(a), frozenset(b)
    _require_partition(code, [a, b])
    k = parameters(code).k
    cleanable = is_dressed_cleanable(code, a)
    bound = (k <= len(b)) if cleanable else None
    return AbReport(
        a_cleanable=cleanable,
        k=k,
        b_size=len(b),
        hypotheses_met=cleanable,
        bound_holds=bound,
        holds=(not cleanable) or bool(bound),
    )


@dataclass(frozen=True)
class AbcReport:
    a_correctable: bool
    b_correctable: bool
    k: int
    c_size: int
    hypotheses_met: bool
    bound_holds: bool | None
    holds: bool


def abc_bound_check(
    code: SubsystemCode, a: Iterable[int], b: Iterable[int], c: Iterable[int]
) -> AbcReport:
    """If A and B are correctable then k <= |C| (commuting projector codes)."""
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    _require_partition(code, [a, b, c])
    if not code.has_abelian_gauge():
        raise ValueError("ABC bound requires an abelian gauge group")
    k = parameters(code).k
    a_ok = is_correctable(code, a)
    b_ok = is_correctable(code, b)
    hyp = a_ok and b_ok
    bound = (k <= len(c)) if hyp else None
    return AbcReport(
        a_correctable=a_ok,
        b_correctable=b_ok,
        k=k,
        c_size=len(c),
        hypotheses_met=hyp,
        bound_holds=bound,
        holds=(not hyp) or bool(bound),
    )


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint regions covering all qubits."""

    parts: tuple[frozenset[int], ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, code: SubsystemCode, parts: Sequence[Iterable[int]]) -> Partition:
        fparts = tuple(frozenset(p) for p in parts)
        _require_partition(code, fparts)
        return cls(fparts)

    def to_json(self) -> dict:
        return {"parts": [sorted(p) for p in self.parts]}


def region_to_json(u: Iterable[int]) -> dict:
    return {"qubits": sorted(u)}


def region_from_json(obj: dict, embedding=None) -> frozenset[int]:
    """Load a region from {"qubits": [...]} or {"boxes": [...]} form.

    Box form needs an embedding to resolve which qubits fall inside
    (closed membership, any box).
    """
    if "qubits" in obj:
        return frozenset(int(q) for q in obj["qubits"])
    if "boxes" in obj:
        if embedding is None:
            raise ValueError("box-form region requires an embedding")
        from .geometry import Box

        boxes = [Box(tuple(b["min"]), tuple(b["max"])) for b in obj["boxes"]]
        qubits = set()
        for i, point in enumerate(embedding.coordinates):
            if any(box.contains(point) for box in boxes):
                qubits.add(i)
        return frozenset(qubits)
    raise ValueError("region object needs 'qubits' or 'boxes'")
