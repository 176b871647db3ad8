"""Exact discharging on faces and the resulting edge-density certificate.

Every face starts with ``|f| + v(f) - 4`` (summing to ``4n - 8`` on a
connected sphere drawing).  H* blocks are settled internally; the rest of
the charge moves in five simultaneous rounds.  If every face ends with at
least ``v(f)/3`` then ``2|E| = sum v(f) <= 3(4n - 8)``, i.e.
``|E| <= 6(n - 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from .drawing import Planarization, crossing_census
from .errors import ChainTooLongError, StageOrderError, TotalMismatchError
from .faces import FaceInfo, FaceTable, HStarBlock, classify, detect_hstar, vertex_neighbors, wedge
from .topomap import Diagnostic

__all__ = [
    "ChargeState",
    "CertificateReport",
    "initial_charges",
    "settle_hstar_blocks",
    "apply_step",
    "certify",
    "census_diagnostics",
    "STAGES",
]

NINTH = Fraction(1, 9)
EIGHTEENTH = Fraction(1, 18)
THIRD = Fraction(1, 3)
STAGES = ("ch0", "settled", "ch1", "ch2", "ch3", "ch4", "ch5")


def required(f: FaceInfo) -> Fraction:
    return Fraction(f.vcount, 3)


@dataclass(frozen=True)
class ChargeState:
    stage: int
    charge: Mapping[str, Fraction]
    block_faces: frozenset[str] = frozenset()
    settled: bool = False

    def total(self) -> Fraction:
        return sum(self.charge.values(), Fraction(0))

    def excess(self, table: FaceTable) -> dict[str, Fraction]:
        return {f.id: self.charge[f.id] - required(f) for f in table}


def _expected_total(table: FaceTable) -> int:
    return 4 * table.p.n - 8


def _check_total(table: FaceTable, state: ChargeState, label: str) -> None:
    total = state.total()
    if total != _expected_total(table):
        raise TotalMismatchError(f"{label}: total charge {total} != 4n-8 = {_expected_total(table)}")


def initial_charges(table: FaceTable) -> ChargeState:
    state = ChargeState(0, {f.id: Fraction(f.size + f.vcount - 4) for f in table})
    _check_total(table, state, "ch0")
    return state


def settle_hstar_blocks(
    table: FaceTable,
    state: ChargeState,
    blocks: list[HStarBlock],
    diagnostics: list[Diagnostic] | None = None,
) -> ChargeState:
    """Give every block face exactly ``v(f)/3``; the surplus stays on the center."""
    if state.stage != 0 or state.settled:
        raise StageOrderError("blocks are settled once, right after initial charges")
    diags = diagnostics if diagnostics is not None else []
    charge = dict(state.charge)
    members: set[str] = set()
    for b in blocks:
        if members & set(b.interior):
            raise StageOrderError(f"block {b.center} overlaps an earlier block")
        members |= set(b.interior)
        given = sum((charge[f] for f in b.interior), Fraction(0))
        needed = sum((required(table[f]) for f in b.interior), Fraction(0))
        if given < needed:
            diags.append(Diagnostic("BlockDeficit", b.center, f"block holds {given}, needs {needed}"))
            continue
        for f in b.interior:
            charge[f] = required(table[f])
        charge[b.center] += given - needed
    out = ChargeState(0, charge, frozenset(members), True)
    _check_total(table, out, "settled")
    return out


class _Neighborhood:
    """Per-face lookups shared by the five rounds."""

    def __init__(self, table: FaceTable):
        self.table = table
        self.one_sides: dict[str, list[int]] = {}
        for f in table:
            if f.is_(1, 3):
                self.one_sides[f.id] = [d for d in f.boundary if table.side_i(d) == 1]


def _step1(nb: _Neighborhood, ch: Mapping[str, Fraction], blocked: frozenset[str], delta: dict, diags: list) -> None:
    table = nb.table
    for fid, sides in nb.one_sides.items():
        if fid in blocked:
            continue
        nbrs = [table.across(d) for d in sides]
        kinds = {(g.vcount, g.size) for g in nbrs}
        mixed = kinds == {(2, 3), (1, 4)}
        for g in nbrs:
            if g.id in blocked:
                continue
            if g.is_(2, 3) or (g.is_(1, 4) and not mixed):
                delta[fid] = delta.get(fid, 0) + NINTH
                delta[g.id] = delta.get(g.id, 0) - NINTH


def _step2(nb: _Neighborhood, ch: Mapping[str, Fraction], blocked: frozenset[str], delta: dict, diags: list) -> None:
    table = nb.table
    for fid, sides in nb.one_sides.items():
        if fid in blocked:
            continue
        if not all(table.across(d).is_(1, 3) for d in sides):
            continue
        for d in sides:
            f1 = table.across(d)
            for d1 in nb.one_sides[f1.id]:
                if d1 == d ^ 1:
                    continue
                g = table.across(d1)
                if g.id in blocked:
                    continue
                if not g.is_(2, 3):
                    diags.append(Diagnostic("Step2Donor", g.id, f"{g.cls} gives 1/18 to {fid}; expected a 2-triangle"))
                delta[fid] = delta.get(fid, 0) + EIGHTEENTH
                delta[g.id] = delta.get(g.id, 0) - EIGHTEENTH


def _step3(nb: _Neighborhood, ch: Mapping[str, Fraction], blocked: frozenset[str], delta: dict, diags: list) -> None:
    table = nb.table
    for fid in nb.one_sides:
        if fid in blocked:
            continue
        amount = THIRD - ch[fid]
        if amount <= 0:
            continue
        try:
            w = wedge(table, fid)
        except ChainTooLongError as exc:
            diags.append(Diagnostic("ChainTooLong", fid, str(exc)))
            continue
        g = table[w.terminal]
        if g.id == fid or g.id in blocked:
            diags.append(Diagnostic("Step3Donor", g.id, f"wedge of {fid} ends at an unusable face"))
            continue
        if not (g.is_(1, 4) or (g.vcount == 0 and g.size >= 5)):
            diags.append(
                Diagnostic("Step3Donor", g.id, f"{g.cls} is the wedge-neighbour of {fid}; expected a "
                           "1-quadrilateral or a 0-face with at least five sides")
            )
        delta[fid] = delta.get(fid, 0) + amount
        delta[g.id] = delta.get(g.id, 0) - amount


def _step_excess(
    nb: _Neighborhood, ch: Mapping[str, Fraction], blocked: frozenset[str], delta: dict, diags: list
) -> None:
    table = nb.table
    for f in table:
        if f.id in blocked:
            continue
        excess = ch[f.id] - required(f)
        if excess <= 0:
            continue
        targets = []
        for vn in vertex_neighbors(table, f.id):
            g = table[vn.face]
            if not g.is_(0, 5) or g.id in blocked:
                continue
            if vn.degenerate:
                diags.append(Diagnostic("SelfVertexNeighbor", f.id, f"opposite corner at {vn.crossing} is the face itself"))
                continue
            targets.append(g.id)
        if not targets:
            continue
        share = excess / len(targets)
        delta[f.id] = delta.get(f.id, 0) - excess
        for gid in targets:
            delta[gid] = delta.get(gid, 0) + share


_RULES = {1: _step1, 2: _step2, 3: _step3, 4: _step_excess, 5: _step_excess}


def apply_step(
    table: FaceTable,
    state: ChargeState,
    k: int,
    diagnostics: list[Diagnostic] | None = None,
    _nb: _Neighborhood | None = None,
) -> ChargeState:
    """Run round ``k`` on the charges of round ``k - 1`` (all transfers at once)."""
    if k not in _RULES:
        raise StageOrderError(f"no step {k}")
    if state.stage != k - 1:
        raise StageOrderError(f"step {k} needs stage {k - 1}, state is at stage {state.stage}")
    diags = diagnostics if diagnostics is not None else []
    nb = _nb or _Neighborhood(table)
    delta: dict[str, Fraction] = {}
    _RULES[k](nb, state.charge, state.block_faces, delta, diags)
    charge = dict(state.charge)
    for fid, dv in delta.items():
        charge[fid] += dv
    out = replace(state, stage=k, charge=charge)
    _check_total(table, out, f"ch{k}")
    return out


_ALLOWED = {(1, 3), (2, 3), (3, 3), (0, 4), (1, 4)}


def census_diagnostics(table: FaceTable, block_faces: frozenset[str]) -> list[Diagnostic]:
    """Faces outside the classes an edge-maximal, crossing-minimal drawing can have."""
    out = []
    for f in table:
        if f.id in block_faces:
            continue
        if (f.vcount, f.size) in _ALLOWED or (f.vcount == 0 and f.size >= 4):
            continue
        out.append(Diagnostic("FaceCensus", f.id, f"{f.cls} cannot occur in a normalized drawing"))
    return out


@dataclass
class CertificateReport:
    verdict: str
    n: int
    m: int
    crossings: int
    stages: dict[str, dict[str, Fraction]]
    required: dict[str, Fraction]
    classes: dict[str, str]
    blocks: list[HStarBlock]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    deficient: list[str] = field(default_factory=list)
    sum_v: int = 0
    census_silent: bool = False
    sizes: dict[str, int] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    @property
    def expected_total(self) -> int:
        return 4 * self.n - 8

    def totals(self) -> dict[str, Fraction]:
        return {s: sum(ch.values(), Fraction(0)) for s, ch in self.stages.items()}

    def excess(self, stage: str) -> dict[str, Fraction]:
        return {f: c - self.required[f] for f, c in self.stages[stage].items()}

    @property
    def final(self) -> dict[str, Fraction]:
        return self.stages["ch5"]

    def bound_holds(self) -> bool:
        """``2|E| <= 3(4n-8)``, recomputed from integers."""
        return 2 * self.m <= 3 * self.expected_total

    def bound_line(self) -> str:
        rel = "<=" if 3 * sum(self.final.values(), Fraction(0)) >= self.sum_v else ">"
        return (
            f"2|E| = {2 * self.m} = sum v(f) = {self.sum_v} {rel} 3*sum ch5 = 3(4n-8) = {3 * self.expected_total}"
            f"; |E| = {self.m} vs 6(n-2) = {6 * (self.n - 2)}"
        )


def certify(p: Planarization) -> CertificateReport:
    """Full pipeline: charges, block settlement, five rounds, verdict."""
    diags: list[Diagnostic] = []
    if p.n < 3:
        diags.append(Diagnostic("SmallGraph", "drawing", f"n = {p.n} < 3"))
    cc = crossing_census(p)
    for e in cc.offenders():
        diags.append(Diagnostic("KPlanarity", e, f"edge {e} has {cc.counts[e]} > {cc.k} crossings"))

    table = classify(p)
    blocks = detect_hstar(table, diags)
    stages: dict[str, dict[str, Fraction]] = {}
    state = initial_charges(table)
    stages["ch0"] = dict(state.charge)
    state = settle_hstar_blocks(table, state, blocks, diags)
    stages["settled"] = dict(state.charge)
    census = census_diagnostics(table, state.block_faces)
    diags += census
    silent = not census and not any(d.rule == "PatternIncomplete" for d in diags)

    nb = _Neighborhood(table)
    step_diags: list[Diagnostic] = []
    for k in range(1, 6):
        state = apply_step(table, state, k, step_diags, nb)
        stages[f"ch{k}"] = dict(state.charge)
    diags += step_diags

    req = {f.id: required(f) for f in table}
    if silent:
        diags += _conditional_checks(table, stages, state.block_faces)

    final = stages["ch5"]
    deficient = [f.id for f in table if final[f.id] < req[f.id]]
    for fid in deficient:
        diags.append(Diagnostic("Deficient", fid, f"final charge {final[fid]} < v(f)/3 = {req[fid]}"))

    sum_v = table.vcount_total()
    ok = not deficient
    if ok:
        # independent recount of the inequality chain
        total = sum(final.values(), Fraction(0))
        if not (2 * p.m == sum_v and sum_v <= 3 * total and total == 4 * p.n - 8):
            raise TotalMismatchError("certificate chain does not close")
    return CertificateReport(
        "Certified" if ok else "Failed",
        p.n,
        p.m,
        len(p.spec.crossings),
        stages,
        req,
        {f.id: f.cls for f in table},
        blocks,
        diags,
        deficient,
        sum_v,
        silent,
        {f.id: f.size for f in table},
    )


def _conditional_checks(
    table: FaceTable, stages: dict[str, dict[str, Fraction]], blocked: frozenset[str]
) -> list[Diagnostic]:
    out = []
    ch2, ch3 = stages["ch2"], stages["ch3"]
    for f in table:
        if f.id in blocked:
            continue
        if f.is_(1, 3) and ch2[f.id] < NINTH:
            out.append(Diagnostic("OneTriangleFloor", f.id, f"ch2 = {ch2[f.id]} < 1/9"))
        if not f.is_(0, 5) and ch3[f.id] < required(f):
            out.append(Diagnostic("UnsatisfiedAfterStep3", f.id, f"{f.cls} has ch3 = {ch3[f.id]} < {required(f)}"))
        if f.vcount == 0 and f.size >= 6 and ch3[f.id] < Fraction(f.size, 9):
            out.append(Diagnostic("LargeFaceExcess", f.id, f"excess {ch3[f.id]} < |f|/9 = {Fraction(f.size, 9)}"))
    return out
