"""Full-information construction game between Alice and Bob.

Alice tries to make a target object appear in the position by issuing
requests; construction requests (line, circle, intersection) are
executed deterministically by the referee, while point requests name an
open region and are answered by Bob, whose answer is verified exactly
before it is admitted.  Adversaries include a benign seeded sampler and
a certificate player that answers only with members of a prescribed
dense closed set; `check_certificate` probes such a set for the
falsifiable consequences of being a valid negative certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .closure import ALL_OPS, Budget, expand_once
from .dsl.ast import (
    If,
    LetArbitrary,
    LetChoose,
    LetCircle,
    LetIntersect,
    LetLine,
    Program,
    While,
)
from .dsl.interp import bind_inputs, build_region, evaluate_test
from .geom import Circle, Line, Point, dist2, intersect, point
from .regions import Cell, Disk, inscribe_disk, sample_point

STRAIGHTEDGE_OPS = frozenset({"line", "intersect"})

DEFAULT_MAX_MOVES = 50


# ---------------------------------------------------------------------------
# Requests and outcomes.

@dataclass(frozen=True)
class RLine:
    p: Point
    q: Point


@dataclass(frozen=True)
class RCircle:
    """Circle centered at o with the distance from a to b as radius."""

    o: Point
    a: Point
    b: Point


@dataclass(frozen=True)
class RIntersect:
    g: object
    h: object


@dataclass(frozen=True)
class RPointInDisk:
    disk: Disk


@dataclass(frozen=True)
class RPointInCell:
    cell: Cell


Request = RLine | RCircle | RIntersect | RPointInDisk | RPointInCell


class _Stop:
    def __repr__(self) -> str:
        return "Stop"


STOP = _Stop()


@dataclass(frozen=True)
class AliceWins:
    moves: int


@dataclass(frozen=True)
class Timeout:
    move_budget: int


@dataclass(frozen=True)
class Aborted:
    reason: str
    message: str = ""


def _fmt(obj) -> str:
    if isinstance(obj, Point):
        return f"({obj.x!r}, {obj.y!r})"
    return repr(obj)


def _request_text(request) -> str:
    if isinstance(request, RLine):
        return f"line {_fmt(request.p)} {_fmt(request.q)}"
    if isinstance(request, RCircle):
        return (f"circle center {_fmt(request.o)} "
                f"radius |{_fmt(request.a)} {_fmt(request.b)}|")
    if isinstance(request, RIntersect):
        return f"intersect {_fmt(request.g)} with {_fmt(request.h)}"
    if isinstance(request, RPointInDisk):
        return f"point in {request.disk!r}"
    if isinstance(request, RPointInCell):
        return f"point in {request.cell!r}"
    return repr(request)


# ---------------------------------------------------------------------------
# Position and game record.

class Position:
    """Monotonically growing exact configuration, in arrival order."""

    def __init__(self, points=(), curves=()):
        self.points: list[Point] = []
        self.curves: list = []
        for p in points:
            self.add(p)
        for c in curves:
            self.add(c)

    @property
    def tower(self):
        for obj in self.points + self.curves:
            return obj.tower
        raise ValueError("empty position has no tower")

    def add(self, obj) -> bool:
        """Append if new; True when the position grew."""
        seq = self.points if isinstance(obj, Point) else self.curves
        if any(o == obj for o in seq):
            return False
        seq.append(obj)
        return True

    def contains(self, obj) -> bool:
        seq = self.points if isinstance(obj, Point) else self.curves
        return any(o == obj for o in seq)

    @property
    def size(self) -> int:
        return len(self.points) + len(self.curves)


@dataclass
class GameMove:
    index: int
    request: object
    answer: Point | None        # Bob's point for point requests
    added: tuple

    def text(self) -> str:
        bob = _fmt(self.answer) if self.answer is not None else "-"
        if self.request is STOP:
            alice = "stop"
        else:
            alice = _request_text(self.request)
        grew = "; ".join(_fmt(o) for o in self.added) or "nothing"
        return f"move {self.index}: ALICE {alice} / BOB {bob} / " \
               f"POSITION +{grew}"


@dataclass
class GameRecord:
    outcome: object
    moves: list[GameMove]
    position: Position

    def transcript(self) -> str:
        lines = [m.text() for m in self.moves]
        lines.append(f"outcome: {self.outcome}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Referee.

def _validate(request, position: Position) -> str | None:
    """A malformed-request message, or None when the request is valid."""
    if isinstance(request, RLine):
        for p in (request.p, request.q):
            if not position.contains(p):
                return f"line endpoint {_fmt(p)} is not in the position"
        if request.p == request.q:
            return "line through two identical points"
        return None
    if isinstance(request, RCircle):
        for p in (request.o, request.a, request.b):
            if not position.contains(p):
                return f"circle reference {_fmt(p)} is not in the position"
        if request.a == request.b:
            return "circle with zero radius"
        return None
    if isinstance(request, RIntersect):
        for c in (request.g, request.h):
            if not isinstance(c, (Line, Circle)) or not position.contains(c):
                return f"intersection operand {_fmt(c)} is not in the position"
        if request.g == request.h:
            return "intersection of a curve with itself"
        return None
    if isinstance(request, RPointInDisk):
        if not isinstance(request.disk, Disk):
            return "disk request without a disk"
        return None
    if isinstance(request, RPointInCell):
        if not isinstance(request.cell, Cell):
            return "cell request without a cell"
        for curve, _ in request.cell.conds:
            if not position.contains(curve):
                return f"cell condition on {_fmt(curve)} outside the position"
        return None
    return f"unknown request {request!r}"


def play(points, curves, target, alice, bob,
         max_moves: int = DEFAULT_MAX_MOVES) -> GameRecord:
    """Referee a game from the configuration (points, curves).

    Alice is a callable (position, moves_so_far) -> Request or STOP;
    Bob answers point requests via `answer(region, position)`.  The
    game ends with AliceWins when the target is in the position,
    Timeout at the move budget or when Alice stops, and Aborted on a
    malformed request or a misbehaving Bob.
    """
    position = Position(points, curves)
    record = GameRecord(None, [], position)
    if position.contains(target):
        record.outcome = AliceWins(0)
        return record
    for index in range(1, max_moves + 1):
        request = alice(position, record.moves)
        if request is STOP:
            record.moves.append(GameMove(index, STOP, None, ()))
            record.outcome = Timeout(max_moves)
            return record
        problem = _validate(request, position)
        if problem is not None:
            record.outcome = Aborted("malformed-request", problem)
            return record
        answer = None
        if isinstance(request, RLine):
            new = [Line.through(request.p, request.q)]
        elif isinstance(request, RCircle):
            new = [Circle(request.o, dist2(request.a, request.b))]
        elif isinstance(request, RIntersect):
            new = intersect(request.g, request.h)
        else:
            region = request.disk if isinstance(request, RPointInDisk) \
                else request.cell
            answer = bob.answer(region, position)
            if answer is None:
                record.outcome = Aborted(
                    "region-scan-exhausted",
                    "Bob found no point for the requested region")
                return record
            if not isinstance(answer, Point) \
                    or answer.tower is not position.tower \
                    or not region.contains(answer):
                record.outcome = Aborted(
                    "bob-violation",
                    f"answer {_fmt(answer)} is outside the requested region")
                return record
            new = [answer]
        added = tuple(obj for obj in new if position.add(obj))
        record.moves.append(GameMove(index, request, answer, added))
        if position.contains(target):
            record.outcome = AliceWins(index)
            return record
    record.outcome = Timeout(max_moves)
    return record


# ---------------------------------------------------------------------------
# Strategies.

class ScriptedAlice:
    """Plays a checked construction program as a request strategy.

    Construction statements become referee requests; choose, if, and
    while run privately on the strategy's own exact mirror of the
    position, which stays faithful because construction requests are
    deterministic.  Arbitrary-point statements read Bob's verified
    answer from the previous move's record.  When the script cannot
    continue (failed choose, empty intersection, exhausted budget) the
    strategy stops.
    """

    def __init__(self, program: Program, inputs):
        self.program = program
        self.env = bind_inputs(program, inputs)
        self._gen = None
        self._done = False

    def __call__(self, position, moves):
        if self._done:
            return STOP
        try:
            if self._gen is None:
                self._gen = self._walk(self.program.body)
                return next(self._gen)
            last = moves[-1]
            return self._gen.send(last.answer)
        except (StopIteration, _ScriptFailure):
            self._done = True
            return STOP

    def _tower(self):
        for value in self.env.values():
            return value.tower
        raise _ScriptFailure

    def _walk(self, block):
        for st in block:
            if isinstance(st, LetLine):
                p, q = self.env[st.p], self.env[st.q]
                if p == q:
                    raise _ScriptFailure
                yield RLine(p, q)
                self.env[st.name] = Line.through(p, q)
            elif isinstance(st, LetCircle):
                o = self.env[st.center]
                a, b = self.env[st.a], self.env[st.b]
                if a == b:
                    raise _ScriptFailure
                yield RCircle(o, a, b)
                self.env[st.name] = Circle(o, dist2(a, b))
            elif isinstance(st, LetIntersect):
                g, h = self.env[st.g], self.env[st.h]
                if g == h:
                    raise _ScriptFailure
                yield RIntersect(g, h)
                pts = intersect(g, h)
                if len(pts) != len(st.names):
                    raise _ScriptFailure
                for name, p in zip(st.names, pts):
                    self.env[name] = p
            elif isinstance(st, LetChoose):
                self.env[st.name] = self._choose(st)
            elif isinstance(st, LetArbitrary):
                region = build_region(self.env, self._tower(), st.region)
                if isinstance(region, Disk):
                    answer = yield RPointInDisk(region)
                else:
                    answer = yield RPointInCell(region)
                if answer is None:
                    raise _ScriptFailure
                self.env[st.name] = answer
            elif isinstance(st, If):
                branch = st.then if evaluate_test(self.env, st.test) \
                    else st.orelse
                yield from self._walk(branch)
            elif isinstance(st, While):
                count = 0
                while evaluate_test(self.env, st.test):
                    if count == st.budget:
                        raise _ScriptFailure
                    yield from self._walk(st.body)
                    count += 1

    def _choose(self, st):
        passing = []
        for cand in st.candidates:
            probe = dict(self.env)
            probe[st.name] = self.env[cand]
            if evaluate_test(probe, st.test):
                passing.append(self.env[cand])
        if len(passing) != 1:
            raise _ScriptFailure
        return passing[0]


class _ScriptFailure(Exception):
    pass


def scripted_alice(program: Program, inputs) -> ScriptedAlice:
    return ScriptedAlice(program, inputs)


def never_stop_alice(request_factory):
    """Strategy issuing `request_factory(position)` forever."""
    def strategy(position, moves):
        return request_factory(position)
    return strategy


class UniformView:
    """Predicate-only view of a position for uniform strategies.

    Objects are addressed by kind and arrival index; only exact test
    answers are exposed, never coordinates.
    """

    def __init__(self, position: Position):
        self._position = position

    def counts(self) -> tuple[int, int]:
        return len(self._position.points), len(self._position.curves)

    def _point(self, i: int) -> Point:
        return self._position.points[i]

    def _curve(self, i: int):
        return self._position.curves[i]

    def equal_points(self, i: int, j: int) -> bool:
        return self._point(i) == self._point(j)

    def on(self, i: int, j: int) -> bool:
        return self._curve(j).contains(self._point(i))

    def side(self, i: int, j: int) -> int:
        return self._curve(j).side(self._point(i))


# ---------------------------------------------------------------------------
# Bobs.

class SamplingBob:
    """Benign adversary answering with fresh dyadic-grid points."""

    def __init__(self, seed: int = 0, tries_per_stage: int = 64,
                 max_stage: int = 12):
        self.seed = seed
        self.tries_per_stage = tries_per_stage
        self.max_stage = max_stage
        self._rng = random.Random(seed)

    def answer(self, region, position: Position) -> Point | None:
        return sample_point(position.tower, region, self._rng,
                            avoid_points=position.points,
                            avoid_curves=position.curves,
                            tries_per_stage=self.tries_per_stage,
                            max_stage=self.max_stage)


def sampling_bob(seed: int = 0) -> SamplingBob:
    return SamplingBob(seed)


@dataclass(frozen=True)
class CertificateDescriptor:
    """A candidate dense closed superset excluding a target.

    `contains_point` and `contains_curve` decide membership exactly on
    tower objects; `enumerate_in_disk` returns a member point strictly
    inside any given disk, or None when it fails.
    """

    name: str
    contains_point: object
    contains_curve: object
    enumerate_in_disk: object

    def contains(self, obj) -> bool:
        if isinstance(obj, Point):
            return self.contains_point(obj)
        return self.contains_curve(obj)


def rational_certificate() -> CertificateDescriptor:
    """All objects with rational data: points, lines, and circles.

    Dense, closed under straightedge steps, but not under compass
    crossings, whose coordinates can need a square root.
    """
    def contains_point(p: Point) -> bool:
        return p.height == 0

    def contains_curve(c) -> bool:
        return c.height == 0

    def enumerate_in_disk(disk: Disk) -> Point | None:
        center = disk.center
        if center.height == 0:
            return center
        tower = center.tower
        for k in (4, 8, 16, 24, 32, 48, 64):
            lo_x, hi_x = center.x.approx(k)
            lo_y, hi_y = center.y.approx(k)
            p = point(tower, (lo_x + hi_x) / 2, (lo_y + hi_y) / 2)
            if disk.contains(p):
                return p
        return None

    return CertificateDescriptor("rational-plane", contains_point,
                                 contains_curve, enumerate_in_disk)


class CertificateBob:
    """Adversary answering every point request with a cert member.

    A disk inscribed in the requested region is found by seeded
    sampling, then the certificate's enumerator picks a member inside
    it; sub-disks are re-drawn until the member is new to the position.
    """

    def __init__(self, cert: CertificateDescriptor, seed: int = 0,
                 tries: int = 32):
        self.cert = cert
        self.seed = seed
        self.tries = tries
        self._rng = random.Random(seed)

    def answer(self, region, position: Position) -> Point | None:
        tower = position.tower
        for _ in range(self.tries):
            q = sample_point(tower, region, self._rng,
                             avoid_points=position.points,
                             avoid_curves=position.curves)
            if q is None:
                return None
            rho2 = inscribe_disk(region, q)
            if rho2 is None:
                continue
            p = self.cert.enumerate_in_disk(Disk(q, rho2))
            if p is None:
                continue
            if any(p == e for e in position.points):
                continue
            if any(c.contains(p) for c in position.curves):
                continue
            return p
        return None


def certificate_bob(cert: CertificateDescriptor, seed: int = 0) \
        -> CertificateBob:
    return CertificateBob(cert, seed)


# ---------------------------------------------------------------------------
# Certificate checking.

@dataclass(frozen=True)
class CertificateCheck:
    passed: bool
    condition: str | None       # failing condition when not passed
    witness: object
    samples: int

    def __repr__(self) -> str:
        if self.passed:
            return f"CertificateCheck(PASS, samples={self.samples})"
        return (f"CertificateCheck(FAIL, condition={self.condition!r}, "
                f"witness={self.witness!r})")


def _lattice_centers():
    """Small integer centers in a fixed order, origin then unit steps."""
    first = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]
    rest = sorted(((x, y) for x in range(-2, 3) for y in range(-2, 3)
                   if (x, y) not in first),
                  key=lambda c: (abs(c[0]) + abs(c[1]), c))
    return first + rest


def check_certificate(cert: CertificateDescriptor, points, curves, target,
                      ops=STRAIGHTEDGE_OPS, subset_samples: int = 4,
                      subset_size: int = 2, seed: int = 0,
                      tower=None) -> CertificateCheck:
    """Probe the falsifiable consequences of a negative certificate.

    Checks, in order: every configuration object is a member; the
    target is not; for sampled finite member sets, one closure round
    under `ops` stays inside the certificate; the enumerator hits a
    grid of small disks.  The first violation is returned as a witness;
    a PASS is sampled evidence, not a proof.
    """
    checked = 0
    for p in points:
        checked += 1
        if not cert.contains_point(p):
            return CertificateCheck(False, "input-not-member", p, checked)
    for c in curves:
        checked += 1
        if not cert.contains_curve(c):
            return CertificateCheck(False, "input-not-member", c, checked)
    checked += 1
    if cert.contains(target):
        return CertificateCheck(False, "target-member", target, checked)

    if tower is None:
        for obj in list(points) + list(curves) + [target]:
            tower = obj.tower
            break
    rng = random.Random(seed)
    centers = _lattice_centers()
    quarter = Fraction(1, 4)
    for trial in range(subset_samples):
        sample = []
        for slot in range(subset_size):
            cx, cy = centers[(trial + slot) % len(centers)]
            if trial > 0:
                cx = cx + Fraction(rng.randint(-2, 2), 4)
                cy = cy + Fraction(rng.randint(-2, 2), 4)
            disk = Disk(point(tower, cx, cy), tower.from_rational(quarter))
            member = cert.enumerate_in_disk(disk)
            if member is None:
                return CertificateCheck(False, "not-dense", disk, checked)
            sample.append(member)
        result = expand_once(sample, (), ops=ops,
                             budget=Budget(max_objects=20000))
        for obj in result.points + result.curves:
            checked += 1
            if not cert.contains(obj):
                return CertificateCheck(False, "closure-violation", obj,
                                        checked)
    small = tower.from_rational(Fraction(1, 64))
    for cx, cy in centers:
        checked += 1
        disk = Disk(point(tower, cx, cy), small)
        member = cert.enumerate_in_disk(disk)
        if member is None or not disk.contains(member) \
                or not cert.contains_point(member):
            return CertificateCheck(False, "not-dense", disk, checked)
    return CertificateCheck(True, None, None, checked)
