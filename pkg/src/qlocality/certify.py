"""Executable proof engines: holographic cube certification, the D-dimensional
expansion sweep, and the theorem partition builders.

Each engine runs in one of two modes.  Strict mode replays the counting
arguments with the paper-level constants: every accepted step carries a
boundary count that must stay below d.  Verified mode cross-checks each
intermediate region with the exact correctability oracle, which is the
ground truth on small codes and needs no hypotheses.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import holographic_base_width, holographic_box_width
from .codes import SubsystemCode, distance, parameters
from .geometry import (
    Box,
    Embedding,
    GridTiling,
    InteractionSet,
    count_long,
    extract_interactions,
    find_tiling,
    packing_bound,
    points_in_box,
    subdivide,
)
from .regions import (
    AbcReport,
    AbReport,
    Partition,
    ab_bound_check,
    abc_bound_check,
    is_correctable,
)

OUTCOME_CERTIFIED = "certified-correctable"
OUTCOME_CONTRADICTION = "contradiction-reached"
OUTCOME_STUCK = "stuck-at"
OUTCOME_VIOLATED = "hypothesis-violated"


@dataclass(frozen=True)
class CertificateStep:
    index: int
    rule: str
    region: str
    boundary: str
    boundary_count: int | None
    threshold: float | None
    verdict: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "rule": self.rule,
            "region": self.region,
            "boundary": self.boundary,
            "boundary_count": self.boundary_count,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "details": self.details,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CertificateStep:
        return cls(
            index=obj["index"],
            rule=obj["rule"],
            region=obj["region"],
            boundary=obj["boundary"],
            boundary_count=obj["boundary_count"],
            threshold=obj["threshold"],
            verdict=obj["verdict"],
            details=obj.get("details", {}),
        )


@dataclass
class Certificate:
    """Audit trail of a certification run, serializable as JSON lines."""

    kind: str
    mode: str
    outcome: str
    steps: list[CertificateStep] = field(default_factory=list)
    stuck_step: int | None = None
    reason: str | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.outcome in (OUTCOME_CERTIFIED, OUTCOME_CONTRADICTION)

    def to_json_lines(self) -> str:
        header = {
            "kind": self.kind,
            "mode": self.mode,
            "outcome": self.outcome,
            "stuck_step": self.stuck_step,
            "reason": self.reason,
            "metadata": self.metadata,
        }
        lines = [json.dumps({"header": header}, sort_keys=True)]
        lines.extend(json.dumps(step.to_json(), sort_keys=True) for step in self.steps)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json_lines(cls, text: str) -> Certificate:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty certificate")
        header = json.loads(lines[0])["header"]
        steps = [CertificateStep.from_json(json.loads(ln)) for ln in lines[1:]]
        return cls(
            kind=header["kind"],
            mode=header["mode"],
            outcome=header["outcome"],
            steps=steps,
            stuck_step=header.get("stuck_step"),
            reason=header.get("reason"),
            metadata=header.get("metadata", {}),
        )

    def trace(self) -> str:
        out = [f"{self.kind} certificate ({self.mode} mode): {self.outcome}"]
        if self.reason:
            out.append(f"  reason: {self.reason}")
        for step in self.steps:
            status = "ok" if step.verdict else "FAIL"
            count = "" if step.boundary_count is None else f" |F|={step.boundary_count}"
            bound = "" if step.threshold is None else f" < {step.threshold:g}"
            out.append(f"  [{step.index}] {step.rule}: {step.region}{count}{bound} {status}")
        return "\n".join(out)


# ---------------------------------------------------------------------------
# Holographic cube certification


def _cube_slab_counts(e: Embedding, outer: Box, thickness: float) -> int:
    """Qubits in the 2D face slabs of thickness ``thickness`` just inside outer.

    Overlapping corners are counted once per slab, matching the proof's
    cover bound, so the total over-counts the true shell population.
    """
    total = 0
    dim = outer.dimension
    for axis in range(dim):
        for side in (0, 1):
            mins = list(outer.mins)
            maxs = list(outer.maxs)
            if side == 0:
                maxs[axis] = outer.mins[axis] + thickness
            else:
                mins[axis] = outer.maxs[axis] - thickness
            total += len(points_in_box(e, Box(tuple(mins), tuple(maxs))))
    return total


def holographic_certify(
    code: SubsystemCode,
    e: Embedding,
    b: Box,
    ell: float,
    mode: str = "strict",
    d: int | None = None,
) -> Certificate:
    """Replay the holographic-principle induction for the qubits in box b.

    Strict mode checks the preconditions (ell small, sides <= w0,
    f_{>=ell}(V) <= d/10) and asserts the four boundary-type counts stay
    below d at every growth step.  Verified mode runs the same cube ladder
    but takes its verdicts from the exact correctability oracle.
    """
    if mode not in ("strict", "verified"):
        raise ValueError(f"unknown mode {mode!r}")
    dim = e.dimension
    if d is None:
        d = distance(code).value
        if d is None:
            raise ValueError("distance search failed; pass d explicitly")
    interactions = extract_interactions(code, e)
    _, f = count_long(interactions, ell)
    v_qubits = points_in_box(e, b)
    f_v = sum(f[q] for q in v_qubits)
    w0 = holographic_box_width(d, ell, dim)
    w_base = holographic_base_width(d, dim)
    ell_cap = d ** (1.0 / dim) / (8.0 * math.sqrt(dim))

    metadata = {
        "d": d,
        "ell": ell,
        "w0": w0,
        "base_width": w_base,
        "ell_cap": ell_cap,
        "f_box": f_v,
        "box": b.to_json(),
    }
    violations = []
    if ell > ell_cap:
        violations.append(f"ell = {ell:g} exceeds d^(1/D)/(8*sqrt(D)) = {ell_cap:g}")
    if max(b.side_lengths) > w0:
        violations.append(f"box side {max(b.side_lengths):g} exceeds w0 = {w0:g}")
    if f_v > d / 10.0:
        violations.append(f"f(box) = {f_v} exceeds d/10 = {d / 10.0:g}")
    if mode == "strict" and violations:
        return Certificate(
            kind="holographic",
            mode=mode,
            outcome=OUTCOME_VIOLATED,
            reason="; ".join(violations),
            metadata=metadata,
        )

    center = tuple((lo + hi) / 2.0 for lo, hi in zip(b.mins, b.maxs))
    w_final = max(b.side_lengths)
    if w_final <= w_base:
        ladder = [w_final]
    else:
        # descend from the final cube in 2*ell steps until the base-case
        # width; nominal sides may go nonpositive (empty cubes)
        n_steps = math.ceil((w_final - w_base) / (2.0 * ell))
        ladder = [w_final - 2.0 * ell * (n_steps - j) for j in range(n_steps + 1)]

    cert = Certificate(kind="holographic", mode=mode, outcome=OUTCOME_CERTIFIED, metadata=metadata)
    long_neighbors: dict[int, set[int]] = {}
    for i, j, length in interactions.pairs:
        if length >= ell:
            long_neighbors.setdefault(i, set()).add(j)
            long_neighbors.setdefault(j, set()).add(i)

    def cube_at(side: float) -> Box:
        return Box.cube(center, max(side, 0.0))

    base_cube = cube_at(ladder[0])
    base_qubits = points_in_box(e, base_cube)
    base_bound = packing_bound(base_cube)
    if mode == "strict":
        verdict = base_bound < d
    else:
        verdict = is_correctable(code, base_qubits)
    cert.steps.append(
        CertificateStep(
            index=0,
            rule="base-cube",
            region=f"cube side {ladder[0]:g}",
            boundary="packing bound" if mode == "strict" else "exact check",
            boundary_count=len(base_qubits),
            threshold=float(d),
            verdict=verdict,
            details={"packing_bound": base_bound},
        )
    )
    if not verdict:
        cert.outcome = OUTCOME_STUCK
        cert.stuck_step = 0
        cert.reason = "base cube not certified"
        return cert

    for step_idx in range(1, len(ladder)):
        w_cur = ladder[step_idx]
        inner = cube_at(ladder[step_idx - 1])
        grown = cube_at(w_cur)
        outer = cube_at(w_cur + 2.0 * ell)
        u = set(points_in_box(e, inner))
        # type (i): shell between the grown cube and the previous cube,
        # counted through the 2D thickness-ell slab cover
        type_i = _cube_slab_counts(e, grown, ell)
        # type (ii): shell just outside the grown cube
        type_ii = _cube_slab_counts(e, outer, ell)
        # types (iii)/(iv): long-interaction partners across the U boundary
        type_iii = len({q for p in u for q in long_neighbors.get(p, ()) if q not in u})
        type_iv = len({p for p in u for q in long_neighbors.get(p, ()) if q not in u})
        total = type_i + type_ii + type_iii + type_iv
        grown_qubits = points_in_box(e, grown)
        if mode == "strict":
            verdict = total < d
        else:
            verdict = is_correctable(code, grown_qubits)
        cert.steps.append(
            CertificateStep(
                index=step_idx,
                rule="grow-cube",
                region=f"cube side {w_cur:g}",
                boundary="types (i)-(iv)",
                boundary_count=total,
                threshold=float(d),
                verdict=verdict,
                details={
                    "type_i": type_i,
                    "type_ii": type_ii,
                    "type_iii": type_iii,
                    "type_iv": type_iv,
                    "qubits_in_cube": len(grown_qubits),
                },
            )
        )
        if not verdict:
            cert.outcome = OUTCOME_STUCK
            cert.stuck_step = step_idx
            cert.reason = (
                f"boundary count {total} >= d = {d}"
                if mode == "strict"
                else "grown cube region not correctable"
            )
            return cert
    return cert


# ---------------------------------------------------------------------------
# Expansion sweep (the four step rules)


@dataclass
class SweepState:
    """Frontier of the legal staircase region V[a_1..a_i]."""

    depth: int
    coords: list[float]
    nxts: list[float]
    tau: float
    ell: float
    gamma: float
    extent: float


def _bad_intervals(values: np.ndarray, ell: float, tau: float) -> list[tuple[float, float]]:
    """Maximal closed intervals of x where |{q : q_i in [x-ell, x+ell]}| > tau.

    The count function jumps up at q_i - ell and down just after q_i + ell,
    so it is piecewise constant between those critical points; intervals
    where it exceeds tau are closed on both sides.
    """
    if len(values) == 0:
        return []
    events = sorted(
        [(v - ell, 0, +1) for v in values] + [(v + ell, 1, -1) for v in values]
    )
    intervals: list[tuple[float, float]] = []
    count = 0
    start: float | None = None
    idx = 0
    while idx < len(events):
        pos = events[idx][0]
        # apply all +1 events at pos first (closed interval entry)
        while idx < len(events) and events[idx][0] == pos and events[idx][1] == 0:
            count += 1
            idx += 1
        if count > tau and start is None:
            start = pos
        while idx < len(events) and events[idx][0] == pos and events[idx][1] == 1:
            count -= 1
            idx += 1
        if count <= tau and start is not None:
            intervals.append((start, pos))
            start = None
    if start is not None:
        intervals.append((start, events[-1][0]))
    return intervals


def _interval_containing(intervals: list[tuple[float, float]], x: float) -> tuple[float, float] | None:
    for lo, hi in intervals:
        if lo <= x <= hi:
            return (lo, hi)
    return None


def expansion_sweep(
    e: Embedding,
    s: InteractionSet,
    ell: float,
    tau: float,
    d: int,
    mode: str = "strict",
    code: SubsystemCode | None = None,
) -> Certificate:
    """Grow a correctable staircase region across the embedding, one dimension
    at a time, exactly as the four step rules prescribe.

    Coordinates are translated so every qubit lies in [ell, A - ell]^D.  In
    strict mode each expansion's boundary superset F = B plus the 2i-1
    frontier slabs (plus the thin final box at depth D) must hold fewer
    than d qubits; verified mode additionally requires the grown region to
    pass the exact correctability oracle (the code argument is then
    mandatory).
    """
    if ell <= 0:
        raise ValueError("ell must be positive")
    if tau <= 0:
        raise ValueError("tau must be positive")
    if mode not in ("strict", "verified"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "verified" and code is None:
        raise ValueError("verified mode needs the code for exact checks")
    dim = e.dimension
    n = e.n
    k = parameters(code).k if code is not None else None

    if n == 0:
        return Certificate(
            kind="sweep",
            mode=mode,
            outcome=OUTCOME_CERTIFIED,
            metadata={"n": 0, "note": "no qubits"},
        )

    # translate so each dimension's minimum coordinate sits at exactly ell
    coords = e.coordinates - e.coordinates.min(axis=0) + ell
    spread = float((coords.max(axis=0) - coords.min(axis=0)).max())
    extent = spread + 2.0 * ell + 1.0

    diffs = set()
    for axis in range(dim):
        vals = np.unique(coords[:, axis])
        for a, b in itertools.combinations(vals, 2):
            delta = abs(b - a)
            diffs.add(delta)
            diffs.add(abs(delta - 2.0 * ell))
    nonzero = [v for v in diffs if v > 1e-12]
    gamma = min(nonzero) / 2.0 if nonzero else ell / 2.0

    bad_set = s.bad_qubits(ell)
    bad_intervals = [_bad_intervals(coords[:, axis], ell, tau) for axis in range(dim)]

    def is_good(axis: int, x: float) -> bool:
        if axis == dim - 1:
            return True
        return _interval_containing(bad_intervals[axis], x) is None

    def nxt(axis: int, x: float) -> float:
        interval = _interval_containing(bad_intervals[axis], x)
        assert interval is not None, "nxt is only defined at bad coordinates"
        return interval[1] + gamma

    def slab_qubits(axis: int, center: float) -> set[int]:
        sel = np.abs(coords[:, axis] - center) <= ell
        return set(np.nonzero(sel)[0].tolist())

    def region_qubits(a: list[float], nxts: list[float]) -> set[int]:
        members: set[int] = set()
        for q in range(n):
            qc = coords[q]
            inside = qc[0] <= a[0]
            for lvl in range(1, len(a)):
                prefix_ok = all(
                    a[j] <= qc[j] <= nxts[j] for j in range(lvl)
                )
                if prefix_ok and qc[lvl] <= a[lvl]:
                    inside = True
                    break
            if inside:
                members.add(q)
        return members

    state = SweepState(
        depth=1, coords=[0.0], nxts=[], tau=tau, ell=ell, gamma=gamma, extent=extent
    )
    cert = Certificate(
        kind="sweep",
        mode=mode,
        outcome=OUTCOME_CERTIFIED,
        metadata={
            "n": n,
            "dimension": dim,
            "ell": ell,
            "tau": tau,
            "d": d,
            "gamma": gamma,
            "extent": extent,
            "bad_qubits": sorted(bad_set),
        },
    )

    if not is_good(0, 0.0):
        cert.outcome = OUTCOME_VIOLATED
        cert.reason = (
            "coordinate 0 is 1-bad: more than tau qubits sit within ell of the minimum"
        )
        return cert

    nxt_gap_cap = 2.0 * n * ell / tau + 3.0 * ell + 2.0 * gamma + 2.0 * ell + 1e-9
    step_idx = 0
    prev_lex = tuple(state.coords)

    def record(rule: str, count: int | None, verdict: bool, boundary: str, details: dict) -> None:
        nonlocal step_idx
        step_idx += 1
        cert.steps.append(
            CertificateStep(
                index=step_idx,
                rule=rule,
                region="V[" + ", ".join(f"{c:g}" for c in state.coords) + "]",
                boundary=boundary,
                boundary_count=count,
                threshold=float(d) if count is not None else None,
                verdict=verdict,
                details=details,
            )
        )

    def frontier_slabs(depth_for_final: bool) -> set[int]:
        """Union of B with the frontier slabs of the current state."""
        members = set(bad_set)
        i = state.depth
        for j in range(i - 1):
            members |= slab_qubits(j, state.coords[j])
            members |= slab_qubits(j, state.nxts[j])
        if depth_for_final:
            final = [
                q
                for q in range(n)
                if all(
                    state.coords[j] <= coords[q][j] <= state.nxts[j]
                    for j in range(dim - 1)
                )
                and abs(coords[q][dim - 1] - state.coords[dim - 1]) <= ell
            ]
            members |= set(final)
        else:
            members |= slab_qubits(i - 1, state.coords[i - 1])
        return members

    def expansion_step(rule: str) -> bool:
        """Run one item-1 / item-3 expansion; returns False when stuck."""
        at_depth_d = state.depth == dim
        f_members = frontier_slabs(depth_for_final=at_depth_d)
        count = len(f_members)
        strict_ok = count < d
        details: dict = {"f_size": count, "strict_ok": strict_ok}
        if mode == "verified":
            new_coords = state.coords[:-1] + [state.coords[-1] + ell]
            grown = region_qubits(new_coords, state.nxts)
            exact = is_correctable(code, grown)
            details["region_qubits"] = sorted(grown)
            details["exact_correctable"] = exact
            verdict = exact
        else:
            verdict = strict_ok
        record(rule, count, verdict, "B + frontier slabs", details)
        if not verdict:
            cert.outcome = OUTCOME_STUCK
            cert.stuck_step = step_idx
            if mode == "strict":
                cert.reason = f"boundary count {count} >= d = {d}"
            else:
                cert.reason = f"step {step_idx}: grown region failed exact correctability"
            return False
        state.coords[-1] += ell
        return True

    max_iterations = int(10 * (extent / ell + 2) ** dim) + 1000
    for _ in range(max_iterations):
        i = state.depth
        a_i = state.coords[-1]
        if a_i >= extent:
            if i == 1:
                break  # full sweep completed
            # item 4: finish this dimension, get unstuck one level down;
            # the stored nxt value is exactly nxt_{i-1}(a_{i-1} + ell)
            new_val = state.nxts.pop()
            state.coords.pop()
            state.coords[-1] = new_val
            state.depth -= 1
            record(
                "finish-dimension",
                None,
                True,
                "relabel: V[.., nxt] equals the finished region",
                {"new_coord": new_val},
            )
        elif i == dim:
            if not expansion_step("expand-last-dimension"):
                return cert
        else:
            if is_good(i - 1, a_i + ell):
                if not expansion_step(f"expand-dimension-{i}"):
                    return cert
            else:
                # item 2: stuck here, open the next dimension
                if not is_good(state.depth, 0.0):
                    cert.outcome = OUTCOME_VIOLATED
                    cert.reason = (
                        f"coordinate 0 is {state.depth + 1}-bad: more than tau qubits "
                        "sit within ell of the minimum"
                    )
                    return cert
                nxt_val = nxt(i - 1, a_i + ell)
                gap = nxt_val - a_i
                if gap > nxt_gap_cap:
                    cert.outcome = OUTCOME_VIOLATED
                    cert.stuck_step = step_idx
                    cert.reason = (
                        f"nxt gap {gap:g} exceeds packed-slab bound {nxt_gap_cap:g}"
                    )
                    return cert
                state.nxts.append(nxt_val)
                state.coords.append(0.0)
                state.depth += 1
                record(
                    "start-next-dimension",
                    None,
                    True,
                    "relabel: V[.., a_i, 0] equals V[.., a_i]",
                    {"nxt": nxt_val, "gap": gap},
                )
        lex = tuple(state.coords)
        assert lex > prev_lex, "sweep failed to increase the lexicographic index"
        prev_lex = lex
    else:
        raise RuntimeError("sweep did not terminate within the iteration budget")

    if k is not None and k >= 1:
        cert.outcome = OUTCOME_CONTRADICTION
        cert.reason = f"full qubit set certified correctable while k = {k} >= 1"
    return cert


# ---------------------------------------------------------------------------
# Theorem partition builders


def _face_distance(point: np.ndarray, box: Box, fixed: dict[int, float]) -> float:
    """l_inf distance from point to the face of box with the given fixed axes."""
    dist = 0.0
    for axis in range(box.dimension):
        if axis in fixed:
            dist = max(dist, abs(point[axis] - fixed[axis]))
        else:
            dist = max(dist, box.mins[axis] - point[axis], point[axis] - box.maxs[axis], 0.0)
    return dist


def _near_codim1(point: np.ndarray, box: Box, margin: float) -> bool:
    for axis in range(box.dimension):
        for value in (box.mins[axis], box.maxs[axis]):
            if _face_distance(point, box, {axis: value}) <= margin:
                return True
    return False


def _near_codim2(point: np.ndarray, box: Box, margin: float) -> bool:
    dim = box.dimension
    for a1, a2 in itertools.combinations(range(dim), 2):
        for v1 in (box.mins[a1], box.maxs[a1]):
            for v2 in (box.mins[a2], box.maxs[a2]):
                if _face_distance(point, box, {a1: v1, a2: v2}) <= margin:
                    return True
    return False


@dataclass
class _Division:
    """Good cubes and bad boxes produced by tiling plus subdivision."""

    tiling: GridTiling
    good_cubes: list[Box]
    bad_boxes: list[Box]
    bad_cube_count: int
    flags: list[str]


def _divide_space(
    e: Embedding,
    f: dict[int, int],
    tiling: GridTiling,
    ell: float,
    d1: float,
) -> _Division:
    coords = e.coordinates
    cells = set()
    cell_members: dict[tuple[int, ...], list[int]] = {}
    for q in range(e.n):
        idx = tiling.cell_index(coords[q])
        cell_members.setdefault(idx, []).append(q)
        for delta in itertools.product((-1, 0, 1), repeat=e.dimension):
            cells.add(tuple(i + dlt for i, dlt in zip(idx, delta)))
    good_cubes: list[Box] = []
    bad_boxes: list[Box] = []
    flags: list[str] = []
    bad_cube_count = 0
    for cell in sorted(cells):
        cube = tiling.cell_box(cell)
        members = cell_members.get(cell, [])
        mass = sum(f[q] for q in members)
        if mass < d1:
            good_cubes.append(cube)
            continue
        bad_cube_count += 1
        w = tiling.width
        cell_masses = [(tuple(coords[q]), f[q]) for q in members if f[q] > 0]
        if w <= 10.0 * ell:
            # the whole cube is already short enough to stand as a bad box
            if w < 5.0 * ell:
                flags.append("cube side below 5*ell: subdivision lemma inapplicable")
            bad_boxes.append(cube)
        else:
            bad_boxes.extend(subdivide(cube, cell_masses, ell, d1))
    return _Division(
        tiling=tiling,
        good_cubes=good_cubes,
        bad_boxes=bad_boxes,
        bad_cube_count=bad_cube_count,
        flags=flags,
    )


def theorem_partition_builder(
    code: SubsystemCode,
    e: Embedding,
    ell: float,
    variant: str,
    seed: int = 0,
    verify: bool = True,
) -> tuple[Partition, Certificate]:
    """Materialize the qubit division a theorem proof constructs.

    variant "thm3_2" builds the dressed-cleanable/remainder split A | B;
    variants "thm5_1_case1" and "thm5_1_case2" build the A | B | C split for
    commuting projector codes.  The counting ledger evaluates each proof
    inequality on the instance; hypothesis failures are recorded, not
    asserted.  With verify=True the partition is fed to the matching
    AB/ABC bound check, which must hold whenever its hypotheses do.
    """
    if variant not in ("thm3_2", "thm5_1_case1", "thm5_1_case2"):
        raise ValueError(f"unknown variant {variant!r}")
    if e.n != code.n:
        raise ValueError("embedding size mismatch")
    dim = e.dimension
    p = parameters(code)
    if p.k < 1:
        raise ValueError("partition builders need k >= 1")
    d = distance(code).value
    interactions = extract_interactions(code, e)
    m_long, f = count_long(interactions, ell)
    bad_qubits = interactions.bad_qubits(ell)
    d1 = d / 10.0

    w0 = holographic_box_width(d, ell, dim)
    w = max(w0, 4.0 * ell)
    flags = []
    if w > w0:
        flags.append(f"w0 = {w0:g} below the tiling precondition; using w = 4*ell")

    points = [tuple(c) for c in e.coordinates]
    if variant == "thm3_2":
        x_pts: list[tuple[float, ...]] = []
        y_pts = list(points)
    else:
        x_pts = list(points)
        y_pts = [pt for q, pt in enumerate(points) for _ in range(f[q])]
    tiling = find_tiling(x_pts, y_pts, w, ell, dim, seed=seed)
    division = _divide_space(e, f, tiling, ell, d1)
    flags.extend(division.flags)
    all_boxes = division.good_cubes + division.bad_boxes

    coords = e.coordinates
    margin2 = 2.0 * ell

    def near_any_codim1(q: int, boxes: list[Box], margin: float) -> bool:
        return any(_near_codim1(coords[q], box, margin) for box in boxes)

    def near_any_codim2(q: int, boxes: list[Box], margin: float) -> bool:
        return any(_near_codim2(coords[q], box, margin) for box in boxes)

    ledger: list[dict] = []

    def entry(name: str, lhs: float, rhs: float) -> None:
        ledger.append({"name": name, "lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs)})

    cert = Certificate(
        kind="partition",
        mode=variant,
        outcome=OUTCOME_CERTIFIED,
        metadata={
            "n": code.n,
            "k": p.k,
            "d": d,
            "ell": ell,
            "w": w,
            "w0": w0,
            "long_interactions": m_long,
            "bad_qubits": len(bad_qubits),
            "good_cubes": len(division.good_cubes),
            "bad_cubes": division.bad_cube_count,
            "bad_boxes": len(division.bad_boxes),
            "flags": flags,
            "tiling": tiling.to_json(),
        },
    )

    if variant == "thm3_2":
        entry("bad boxes < k/(10d)", len(division.bad_boxes), p.k / (10.0 * d))
        in_b_region = {
            q
            for q in range(code.n)
            if near_any_codim1(q, all_boxes, margin2)
        }
        b_set = frozenset(in_b_region | bad_qubits)
        a_set = frozenset(range(code.n)) - b_set
        entry("|B| < k", len(b_set), p.k)
        partition = Partition.of(code, [a_set, b_set])
        check: AbReport | AbcReport | None = None
        if verify:
            check = ab_bound_check(code, a_set, b_set)
            cert.metadata["ab_check"] = check.__dict__
            if not check.holds:
                cert.outcome = OUTCOME_STUCK
                cert.reason = "AB bound violated on the built partition"
    else:
        in_c = {
            q
            for q in range(code.n)
            if near_any_codim2(q, all_boxes, margin2)
        }
        in_b = {
            q
            for q in range(code.n)
            if q not in in_c and near_any_codim1(q, all_boxes, ell)
        }
        in_b_prime = {
            q
            for q in range(code.n)
            if q not in in_c and near_any_codim1(q, division.good_cubes, margin2)
        }
        if variant == "thm5_1_case1":
            c_set = frozenset(in_c | bad_qubits)
            b_set = frozenset(in_b - c_set)
            a_set = frozenset(range(code.n)) - c_set - b_set
            entry("bad boxes < k/(10d)", len(division.bad_boxes), p.k / (10.0 * d))
            entry("|C| < k", len(c_set), p.k)
        else:
            if division.bad_boxes:
                flags.append("bad boxes present despite the d >= k case hypothesis")
            entry("bad boxes (case 2 expects 0) <= 1/10", len(division.bad_boxes), 0.1)
            # qubits with a long interaction touching B', including the bad
            # qubits residing in B' themselves
            partners = set()
            for i, j, length in interactions.pairs:
                if length >= ell and (i in in_b_prime or j in in_b_prime):
                    partners.add(i)
                    partners.add(j)
            c_set = frozenset(in_c | partners)
            b_set = frozenset((in_b - c_set) | (bad_qubits - c_set))
            a_set = frozenset(range(code.n)) - c_set - b_set
            entry("|C| < k", len(c_set), p.k)
        partition = Partition.of(code, [a_set, b_set, c_set])
        check = None
        if verify:
            check = abc_bound_check(code, a_set, b_set, c_set)
            cert.metadata["abc_check"] = check.__dict__
            if not check.holds:
                cert.outcome = OUTCOME_STUCK
                cert.reason = "ABC bound violated on the built partition"
    cert.metadata["ledger"] = ledger
    cert.metadata["flags"] = flags
    return partition, cert
