"""Plat-encoded fronts and their resolved Lagrangian diagrams.

A plat word is a left-to-right sequence of events: ``L k`` opens a cusp
inserting two strands at levels k, k+1 (1-based from the bottom; existing
strands at level >= k are pushed up by two), ``R k`` caps the strands at
levels k, k+1, and ``X k`` crosses them.  Events sit at x = 1, 2, ... so all
coordinates are exact.

Resolution replaces every right cusp by a crossing followed by a cap, so the
resolved diagram is again a plat-shaped 4-valent planar graph.  At a front
crossing the strand of lesser slope is kept in front; each right cusp
contributes one extra crossing whose east side is a one-cornered loop face.
Crossings are named b1, b2, ... (front origin) and a1, a2, ... (cusp origin)
in x order.

Every crossing carries an exact positive rational action, assigned so that
every bounded face of the diagram has positive signed corner area.  Disk
areas are then positive sums of face areas, which terminates enumeration in
`disks` and yields the strict action filtration of the differential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, ValidationError

# Ray names at a crossing, in counterclockwise order, per crossing origin.
# Quadrant q spans ccw from ray q to ray q+1; so 0=N, 1=W, 2=S, 3=E for both
# origins.  Quadrants W and E (indices 1 and 3) host positive disk corners.
RAYS_CCW = {
    "front": ("NE", "NW", "SW", "SE"),
    "cusp": ("NE", "topW", "botW", "SE"),
}
QUADRANT_NAMES = ("N", "W", "S", "E")
POSITIVE_QUADRANTS = (1, 3)


def ccw_next_ray(origin: str, ray: str) -> str:
    rays = RAYS_CCW[origin]
    return rays[(rays.index(ray) + 1) % 4]


def cw_next_ray(origin: str, ray: str) -> str:
    rays = RAYS_CCW[origin]
    return rays[(rays.index(ray) - 1) % 4]


def opposite_ray(origin: str, ray: str) -> str:
    """The other ray of the same strand passage."""
    if origin == "front":
        return {"NE": "SW", "SW": "NE", "NW": "SE", "SE": "NW"}[ray]
    return {"topW": "SE", "SE": "topW", "NE": "botW", "botW": "NE"}[ray]


def quadrant_rays(origin: str, quad: int) -> tuple:
    rays = RAYS_CCW[origin]
    return rays[quad], rays[(quad + 1) % 4]


# ---------------------------------------------------------------------------
# Plat words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlatEvent:
    kind: str  # 'L' | 'R' | 'X'
    level: int


@dataclass(frozen=True)
class PlatWord:
    events: tuple

    def __len__(self):
        return len(self.events)

    def crossing_count(self) -> int:
        return sum(1 for e in self.events if e.kind == "X")

    def right_cusp_count(self) -> int:
        return sum(1 for e in self.events if e.kind == "R")


def _validate_events(events, positions=None):
    if not events:
        raise InputError("empty plat word")
    count = 0
    for i, ev in enumerate(events):
        pos = positions[i] if positions else (None, None)
        if ev.kind == "L":
            if not 1 <= ev.level <= count + 1:
                raise InputError(
                    f"level {ev.level} out of range at event {i + 1} (strands: {count})",
                    line=pos[0], column=pos[1])
            count += 2
        elif ev.kind in ("R", "X"):
            if not 1 <= ev.level <= count - 1:
                raise InputError(
                    f"level {ev.level} out of range at event {i + 1} (strands: {count})",
                    line=pos[0], column=pos[1])
            if ev.kind == "R":
                count -= 2
        else:
            raise InputError(f"unknown event kind {ev.kind!r} at event {i + 1}",
                             line=pos[0], column=pos[1])
    if count != 0:
        raise InputError(f"front does not close up: {count} strands remain at the end")


def plat_word(events) -> PlatWord:
    evs = tuple(PlatEvent(k, lvl) for k, lvl in events)
    _validate_events(evs)
    return PlatWord(evs)


def parse_plat(text: str) -> PlatWord:
    """Parse the line-oriented plat format: one `L|R|X <k>` per line, # comments."""
    events = []
    positions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("L", "R", "X"):
            col = len(raw) - len(raw.lstrip()) + 1
            raise InputError(f"unknown token {line.strip()!r}", line=lineno, column=col)
        try:
            level = int(parts[1])
        except ValueError:
            raise InputError(f"bad level {parts[1]!r}", line=lineno,
                             column=raw.index(parts[1]) + 1) from None
        events.append(PlatEvent(parts[0], level))
        positions.append((lineno, raw.index(parts[0]) + 1))
    _validate_events(tuple(events), positions)
    return PlatWord(tuple(events))


def serialize_plat(p: PlatWord) -> str:
    return "\n".join(f"{e.kind} {e.level}" for e in p.events) + "\n"


# ---------------------------------------------------------------------------
# Front diagrams
# ---------------------------------------------------------------------------


@dataclass
class Strand:
    """A knot arc between its birth left cusp and its death right cusp."""

    sid: int
    birth: int  # plat event index (0-based) of the L event
    death: int = -1
    direction: int = 0  # +1 east, -1 west along the knot orientation


@dataclass
class FrontCrossing:
    x: int  # plat event position (1-based)
    level: int
    asc: int  # strand at level k just west of the event (it ascends)
    desc: int  # strand at level k+1 just west (descends; drawn in front)


@dataclass
class Cusp:
    x: int
    kind: str  # 'left' | 'right'
    lower: int
    upper: int
    level: int
    event: int = -1  # plat event index
    downward: bool = False  # knot moves from the upper branch to the lower one


@dataclass
class ClassicalInvariants:
    tb: int
    rot: int


class FrontDiagram:
    """A coordinatized generic front: strands, crossings, cusps, potentials."""

    def __init__(self, plat: PlatWord):
        self.plat = plat
        self.strands: dict[int, Strand] = {}
        self.crossings: list[FrontCrossing] = []
        self.cusps: list[Cusp] = []
        self._left_by_event: dict[int, Cusp] = {}
        self._right_by_event: dict[int, Cusp] = {}
        self._build()
        self._orient()
        self.rot = self._rotation()
        self.tb = self._thurston_bennequin()
        self.maslov = self._maslov_potentials()

    def _build(self):
        occ: list[int] = []
        next_id = 0
        for i, ev in enumerate(self.plat.events):
            x, k = i + 1, ev.level
            if ev.kind == "L":
                lo, up = next_id, next_id + 1
                next_id += 2
                self.strands[lo] = Strand(lo, birth=i)
                self.strands[up] = Strand(up, birth=i)
                occ[k - 1:k - 1] = [lo, up]
                cusp = Cusp(x, "left", lo, up, k, event=i)
                self.cusps.append(cusp)
                self._left_by_event[i] = cusp
            elif ev.kind == "X":
                asc, desc = occ[k - 1], occ[k]
                self.crossings.append(FrontCrossing(x, k, asc, desc))
                occ[k - 1], occ[k] = occ[k], occ[k - 1]
            else:
                lo, up = occ[k - 1], occ[k]
                cusp = Cusp(x, "right", lo, up, k, event=i)
                self.cusps.append(cusp)
                self._right_by_event[i] = cusp
                self.strands[lo].death = i
                self.strands[up].death = i
                del occ[k - 1:k + 1]
        # connectivity of the 2-regular strand/cusp cycle graph
        visited = {0}
        s, end = 0, "east"
        for _ in range(2 * len(self.strands) + 1):
            if end == "east":
                cusp = self._right_by_event[self.strands[s].death]
                s = cusp.upper if cusp.lower == s else cusp.lower
                end = "west"
            else:
                cusp = self._left_by_event[self.strands[s].birth]
                s = cusp.upper if cusp.lower == s else cusp.lower
                end = "east"
            if s == 0 and end == "east":
                break
            visited.add(s)
        if len(visited) != len(self.strands):
            raise ValidationError(
                f"front is disconnected: one component has {len(visited)} of "
                f"{len(self.strands)} strands (links are out of scope)")

    def _orient(self):
        order = []
        s, d = 0, +1
        while True:
            self.strands[s].direction = d
            order.append((s, d))
            if d == +1:
                cusp = self._right_by_event[self.strands[s].death]
                cusp.downward = (s == cusp.upper)
                s = cusp.upper if cusp.lower == s else cusp.lower
                d = -1
            else:
                cusp = self._left_by_event[self.strands[s].birth]
                cusp.downward = (s == cusp.upper)
                s = cusp.upper if cusp.lower == s else cusp.lower
                d = +1
            if (s, d) == order[0]:
                break
        self.traversal = order

    def _rotation(self) -> int:
        down = sum(1 for c in self.cusps if c.downward)
        up = len(self.cusps) - down
        return (down - up) // 2

    def _thurston_bennequin(self) -> int:
        # A crossing of co-oriented strands counts +1: pinned by tb = -2 for the
        # one-crossing kinked unknot and tb = +1 for the flat-plat trefoil.
        writhe = 0
        for c in self.crossings:
            writhe += self.strands[c.asc].direction * self.strands[c.desc].direction
        return writhe - self.plat.right_cusp_count()

    def _maslov_potentials(self) -> dict:
        """Locally constant potential per strand; residues mod 2|rot| if rot != 0."""
        modulus = 2 * abs(self.rot)
        mu: dict[int, int] = {}
        val = 0
        for s, d in self.traversal:
            if s not in mu:
                mu[s] = val % modulus if modulus else val
            else:
                want = val % modulus if modulus else val
                if mu[s] != want:
                    raise ValidationError("Maslov potential inconsistent (internal error)")
            cusp = (self._right_by_event[self.strands[s].death] if d == +1
                    else self._left_by_event[self.strands[s].birth])
            val += -1 if cusp.downward else +1
        return mu

    def classical_invariants(self) -> ClassicalInvariants:
        return ClassicalInvariants(tb=self.tb, rot=self.rot)


def elaborate_front(p: PlatWord) -> FrontDiagram:
    return FrontDiagram(p)


def classical_invariants(f: FrontDiagram) -> ClassicalInvariants:
    return f.classical_invariants()


# ---------------------------------------------------------------------------
# Resolved (Lagrangian) diagrams
# ---------------------------------------------------------------------------


@dataclass
class Crossing:
    name: str
    index: int
    origin: str  # 'front' | 'cusp'
    x: int  # resolved event position; distinct across crossings
    level: int  # the crossing sits between levels k, k+1 at its event
    grading: int = 0
    action: Fraction = Fraction(1)
    attach: dict = field(default_factory=dict)  # ray -> (edge id, 'tail'|'head')


@dataclass
class Edge:
    eid: int
    tail: tuple  # (crossing index, ray) at the start, in knot orientation
    head: tuple  # (crossing index, ray) at the end
    slots: tuple = ()  # ((resolved gap, level, direction +1 east / -1 west), ...)
    is_loop: bool = False


@dataclass
class ResolvedEvent:
    kind: str  # 'open' | 'cross' | 'close'
    level: int
    crossing: int | None = None


@dataclass
class Face:
    fid: int
    corners: tuple  # ((crossing index, quadrant index), ...)
    cycle: tuple  # directed edges ((eid, dir), ...) with the face on the left
    bounded: bool = True


class LagrangianDiagram:
    """The resolved diagram: 4-valent planar graph, faces, actions, gradings."""

    def __init__(self, front: FrontDiagram):
        self.front = front
        self.rot = front.rot
        self.crossings: list[Crossing] = []
        self.edges: list[Edge] = []
        self.events: list[ResolvedEvent] = []
        self.faces: list[Face] = []
        self._build_events()
        self._traverse_and_build_edges()
        self._trace_faces()
        self._assign_actions()
        self._assign_gradings()

    # -- lookups -----------------------------------------------------------------

    def by_name(self, name: str) -> Crossing:
        for c in self.crossings:
            if c.name == name:
                return c
        raise InputError(f"no crossing named {name!r}")

    def generator_names(self) -> list:
        return [c.name for c in self.crossings]

    def crossing_count(self) -> int:
        return len(self.crossings)

    def gradings(self) -> dict:
        return {c.name: c.grading for c in self.crossings}

    def actions(self) -> dict:
        return {c.name: c.action for c in self.crossings}

    # -- construction --------------------------------------------------------------

    def _build_events(self):
        nb = na = 0
        self.cusp_cross_pos: dict[int, int] = {}  # plat R-event index -> resolved pos
        self.front_cross_idx: list[int] = []  # i-th front crossing -> crossing index
        for i, ev in enumerate(self.front.plat.events):
            k = ev.level
            if ev.kind == "L":
                self.events.append(ResolvedEvent("open", k))
            elif ev.kind == "X":
                nb += 1
                idx = len(self.crossings)
                self.crossings.append(Crossing(f"b{nb}", idx, "front", len(self.events), k))
                self.events.append(ResolvedEvent("cross", k, idx))
                self.front_cross_idx.append(idx)
            else:
                na += 1
                idx = len(self.crossings)
                self.crossings.append(Crossing(f"a{na}", idx, "cusp", len(self.events), k))
                self.cusp_cross_pos[i] = len(self.events)
                self.events.append(ResolvedEvent("cross", k, idx))
                self.events.append(ResolvedEvent("close", k))
        # occupancy after each resolved event (strand ids, bottom-up)
        occ: list[int] = []
        self.gap_occ: list[tuple] = []
        newborn = []
        for i, ev in enumerate(self.front.plat.events):
            if ev.kind == "L":
                cusp = self.front._left_by_event[i]
                newborn.append((cusp.lower, cusp.upper))
        birth_iter = iter(newborn)
        for ev in self.events:
            k = ev.level
            if ev.kind == "open":
                lo, up = next(birth_iter)
                occ[k - 1:k - 1] = [lo, up]
            elif ev.kind == "cross":
                occ[k - 1], occ[k] = occ[k], occ[k - 1]
            else:
                del occ[k - 1:k + 1]
            self.gap_occ.append(tuple(occ))

    def _plat_pos_to_resolved(self, plat_index: int) -> int:
        pos = 0
        for i, ev in enumerate(self.front.plat.events):
            if i == plat_index:
                return pos
            pos += 2 if ev.kind == "R" else 1
        raise AssertionError

    def _traverse_and_build_edges(self):
        """One walk around the knot: passages, edges, and per-edge slot traces."""
        front = self.front
        # strand -> [(resolved pos, crossing idx, role)] for front crossings
        strand_passes: dict[int, list] = {s: [] for s in front.strands}
        fi = 0
        for pos, ev in enumerate(self.events):
            if ev.kind == "cross" and self.crossings[ev.crossing].origin == "front":
                fc = front.crossings[fi]
                strand_passes[fc.asc].append((pos, ev.crossing, "asc"))
                strand_passes[fc.desc].append((pos, ev.crossing, "desc"))
                fi += 1
        for lst in strand_passes.values():
            lst.sort()

        def slots_for(s, lo_pos, hi_pos, d):
            out = []
            for g in range(lo_pos, hi_pos):
                occ = self.gap_occ[g]
                if s in occ:
                    out.append((g, occ.index(s) + 1, d))
            if d == -1:
                out.reverse()
            return out

        passages = []  # (crossing idx, in_ray, out_ray)
        runs: list[list] = []  # runs[i] = interior slots of the edge ending at passage i+1
        current: list = []
        prelude: list | None = None

        def emit(passage, pre_run=None):
            nonlocal current, prelude
            if pre_run is not None:
                current = pre_run
            if passages:
                runs.append(current)
            else:
                prelude = current
            current = []
            passages.append(passage)

        for s, d in front.traversal:
            first_gap = self._plat_pos_to_resolved(front.strands[s].birth)
            cusp_pos = self.cusp_cross_pos[front.strands[s].death]
            passes = strand_passes[s] if d == +1 else list(reversed(strand_passes[s]))
            bounds = [p[0] for p in passes]
            if d == +1:
                cuts = [first_gap] + bounds + [cusp_pos]
                segs = [slots_for(s, cuts[j], cuts[j + 1], d) for j in range(len(cuts) - 1)]
            else:
                cuts = [cusp_pos] + bounds + [first_gap]
                segs = [slots_for(s, cuts[j + 1], cuts[j], d) for j in range(len(cuts) - 1)]
            for j, p in enumerate(passes):
                current.extend(segs[j])
                pos, cidx, role = p
                if role == "asc":
                    inr, outr = ("SW", "NE") if d == +1 else ("NE", "SW")
                else:
                    inr, outr = ("NW", "SE") if d == +1 else ("SE", "NW")
                emit((cidx, inr, outr))
            current.extend(segs[-1])
            if d == +1:
                cusp = front._right_by_event[front.strands[s].death]
                cidx = self.events[cusp_pos].crossing
                k = self.crossings[cidx].level
                g = cusp_pos  # the loop gap sits right after the cusp crossing
                if s == cusp.upper:
                    emit((cidx, "topW", "SE"))
                    emit((cidx, "NE", "botW"), pre_run=[(g, k, +1), (g, k + 1, -1)])
                else:
                    emit((cidx, "botW", "NE"))
                    emit((cidx, "SE", "topW"), pre_run=[(g, k + 1, +1), (g, k, -1)])
        runs.append(current + (prelude or []))

        self.passages = passages
        # record oriented passage rays per crossing: role -> (in_ray, out_ray)
        for cidx, inr, outr in passages:
            c = self.crossings[cidx]
            role = ("desc" if {inr, outr} == {"NW", "SE"} else "asc") \
                if c.origin == "front" else ("a" if {inr, outr} == {"topW", "SE"} else "b")
            c.attach  # noqa: touch to keep attribute order stable
            if not hasattr(c, "passage_rays"):
                c.passage_rays = {}
            c.passage_rays[role] = (inr, outr)
        n = len(passages)
        loop_after = set()
        for i, p in enumerate(passages):
            if p[1:] in (("topW", "SE"), ("botW", "NE")):
                loop_after.add(i)
        for i in range(n):
            j = (i + 1) % n
            tail = (passages[i][0], passages[i][2])
            head = (passages[j][0], passages[j][1])
            self.edges.append(Edge(len(self.edges), tail, head,
                                   slots=tuple(runs[i]), is_loop=i in loop_after))
        self.slot_edge: dict[tuple, tuple] = {}
        for e in self.edges:
            self.crossings[e.tail[0]].attach[e.tail[1]] = (e.eid, "tail")
            self.crossings[e.head[0]].attach[e.head[1]] = (e.eid, "head")
            for g, lvl, d in e.slots:
                self.slot_edge[(g, lvl)] = (e.eid, d)
        for c in self.crossings:
            if len(c.attach) != 4:
                raise AssertionError(f"crossing {c.name} has {len(c.attach)} attachments")
        # basepoint: the arc just west of the last right cusp, on its upper strand
        last_cusp = max((c for c in self.crossings if c.origin == "cusp"), key=lambda c: c.x)
        self.basepoint_edge = last_cusp.attach["topW"][0]
        self.last_cusp = last_cusp.index

    def _trace_faces(self):
        seen = set()
        for e in self.edges:
            for d in (+1, -1):
                if (e.eid, d) in seen:
                    continue
                cycle, corners = [], []
                cur = (e.eid, d)
                while cur not in seen:
                    seen.add(cur)
                    cycle.append(cur)
                    eid, dd = cur
                    edge = self.edges[eid]
                    cidx, ray = edge.head if dd == +1 else edge.tail
                    c = self.crossings[cidx]
                    out_ray = cw_next_ray(c.origin, ray)
                    corners.append((cidx, RAYS_CCW[c.origin].index(out_ray)))
                    neid, nend = c.attach[out_ray]
                    cur = (neid, +1 if nend == "tail" else -1)
                self.faces.append(Face(len(self.faces), tuple(corners), tuple(cycle)))
        # outer face: south of the bottommost strand in the first nonempty gap
        outer = None
        for g, occ in enumerate(self.gap_occ):
            if occ:
                eid, d = self.slot_edge[(g, 1)]
                west_dir = -d  # the directed edge heading west at this slot
                want = (eid, west_dir)
                outer = next(f for f in self.faces if want in f.cycle)
                break
        if outer is None:
            raise AssertionError("could not identify the outer face")
        outer.bounded = False
        self.outer_face = outer.fid
        self.quad_face: dict[tuple, int] = {}
        for f in self.faces:
            for cidx, q in f.corners:
                self.quad_face[(cidx, q)] = f.fid
        self.left_face: dict[tuple, int] = {}
        for f in self.faces:
            for h in f.cycle:
                self.left_face[h] = f.fid
        euler = len(self.crossings) - len(self.edges) + len(self.faces)
        if euler != 2:
            raise ValidationError(f"rotation system is not planar: V-E+F = {euler}")

    def _assign_actions(self):
        """Greedy exact actions making every bounded face positively signed."""
        anchored: dict[int, list] = {}
        for f in self.faces:
            if not f.bounded:
                continue
            pos = [c for c, q in f.corners if q in POSITIVE_QUADRANTS]
            if not pos:
                raise ValidationError("bounded face with no positive corner")
            anchor = max(pos, key=lambda c: self.crossings[c].x)
            anchored.setdefault(anchor, []).append(f)
        actions: dict[int, Fraction] = {}
        for c in sorted(self.crossings, key=lambda c: c.x):
            need = Fraction(1)
            for f in anchored.get(c.index, []):
                rest = Fraction(0)
                used_anchor = False
                for cidx, q in f.corners:
                    if cidx == c.index and q in POSITIVE_QUADRANTS and not used_anchor:
                        used_anchor = True
                        continue
                    a = actions.get(cidx)
                    if a is None:
                        raise ValidationError(
                            "face constraint references an unassigned crossing")
                    rest += a if q in POSITIVE_QUADRANTS else -a
                need = max(need, 1 - rest)
            actions[c.index] = need
        for c in self.crossings:
            c.action = actions[c.index]
        for f in self.faces:
            if f.bounded and self.face_area(f.fid) <= 0:
                raise ValidationError(f"face {f.fid} has non-positive area")

    def face_area(self, fid: int) -> Fraction:
        total = Fraction(0)
        for cidx, q in self.faces[fid].corners:
            a = self.crossings[cidx].action
            total += a if q in POSITIVE_QUADRANTS else -a
        return total

    def _assign_gradings(self):
        """Integer gradings from basepointed Maslov potentials.

        The potential walk starts at the basepoint strand (the upper strand of
        the last right cusp) and absorbs the 2*rot defect there, so front
        crossing gradings are honest integers and every right-cusp generator
        has grading exactly 1.
        """
        front = self.front
        last_cusp_plat = max(i for i, ev in enumerate(front.plat.events) if ev.kind == "R")
        start_strand = front._right_by_event[last_cusp_plat].upper
        order = front.traversal
        k0 = next(i for i, (s, _) in enumerate(order) if s == start_strand)
        if order[k0][1] == -1:
            walk = order[k0:] + order[:k0]
        else:
            rev = [(s, -d) for s, d in reversed(order)]
            k0 = next(i for i, (s, _) in enumerate(rev) if s == start_strand)
            walk = rev[k0:] + rev[:k0]
        mu: dict[int, int] = {}
        val = 0
        for s, d in walk:
            mu[s] = val
            cusp = (front._right_by_event[front.strands[s].death] if d == +1
                    else front._left_by_event[front.strands[s].birth])
            val += -1 if s == cusp.upper else +1
        self.potential = mu
        for c in self.crossings:
            if c.origin == "cusp":
                c.grading = 1
        for i, fc in enumerate(front.crossings):
            self.crossings[self.front_cross_idx[i]].grading = mu[fc.desc] - mu[fc.asc]


def resolve(f: FrontDiagram) -> LagrangianDiagram:
    return LagrangianDiagram(f)


def gradings(d: LagrangianDiagram) -> dict:
    """Crossing name -> grading, reduced mod 2|rot| when rot is nonzero."""
    modulus = 2 * abs(d.rot)
    if modulus:
        return {name: g % modulus for name, g in d.gradings().items()}
    return d.gradings()
