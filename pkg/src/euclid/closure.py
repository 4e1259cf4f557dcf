"""Saturation of a configuration under straightedge and compass steps.

One round first draws every line through two known points and every
circle centered at a known point with a known point-pair distance as
radius, then intersects every not-yet-processed pair among the enlarged
curve set.  `closure` runs rounds to a fixed point, `derivable` stops as
soon as a target point appears, `expand_once` runs a single round.

Duplicate detection buckets objects by coarse dyadic enclosures of
their coordinates and confirms candidates with exact sign tests, so it
is exact while only comparing near neighbours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from .errors import ResourceLimitError
from .geom import Circle, Curve, Line, Point, dist2, intersect

ALL_OPS = frozenset({"line", "circle", "intersect"})

_GRID = 16  # bucket size 2**-16


@dataclass
class Budget:
    max_rounds: int = 8
    max_objects: int = 5000


@dataclass
class TraceEntry:
    obj: Point | Curve
    round: int
    rule: str                   # "given" | "line" | "circle" | "intersect"
    parents: tuple = ()


@dataclass
class ClosureResult:
    points: list[Point]
    curves: list[Curve]
    rounds: int
    complete: bool
    trace: list[TraceEntry] = dc_field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.points) + len(self.curves)


@dataclass
class Derivability:
    derivable: bool
    rounds: int | None
    state: ClosureResult


def _mid_floor(x) -> int:
    lo, hi = x.approx(_GRID)
    return math.floor((lo + hi) * (1 << (_GRID - 1)))


class _Index:
    """Near-duplicate buckets with exact confirmation."""

    def __init__(self, dim: int):
        self.dim = dim
        self.buckets: dict[tuple[int, ...], list] = {}
        self.items: list = []
        self.offsets = tuple(product((-1, 0, 1), repeat=dim))

    def _coords(self, obj):
        if isinstance(obj, Point):
            return (obj.x, obj.y)
        if isinstance(obj, Line):
            return (obj.a, obj.b, obj.c)
        return (obj.center.x, obj.center.y, obj.r2)

    def find(self, obj):
        key = tuple(_mid_floor(c) for c in self._coords(obj))
        for off in self.offsets:
            cell = tuple(k + o for k, o in zip(key, off))
            for other in self.buckets.get(cell, ()):
                if other == obj:
                    return other
        return None

    def add(self, obj) -> bool:
        """True if obj was new; exact duplicates are dropped."""
        key = tuple(_mid_floor(c) for c in self._coords(obj))
        for off in self.offsets:
            cell = tuple(k + o for k, o in zip(key, off))
            for other in self.buckets.get(cell, ()):
                if other == obj:
                    return False
        self.buckets.setdefault(key, []).append(obj)
        self.items.append(obj)
        return True


class _Run:
    def __init__(self, points, curves, budget: Budget, ops,
                 target: Point | Curve | None):
        self.budget = budget
        self.ops = frozenset(ops)
        bad = self.ops - ALL_OPS
        if bad:
            raise ValueError(f"unknown closure ops: {sorted(bad)}")
        self.target = target
        self.points = _Index(2)
        self.lines = _Index(3)
        self.circles = _Index(3)
        self.curve_list: list[Curve] = []
        self.done_pairs: set[tuple[int, int]] = set()
        self.trace: list[TraceEntry] = []
        self.rounds = 0
        self.found_round: int | None = None
        for p in points:
            if self.points.add(p):
                self.trace.append(TraceEntry(p, 0, "given"))
        for c in curves:
            idx = self.lines if isinstance(c, Line) else self.circles
            if idx.add(c):
                self.curve_list.append(c)
                self.trace.append(TraceEntry(c, 0, "given"))
        if target is not None and self._find_target() is not None:
            self.found_round = 0

    def _find_target(self):
        t = self.target
        if isinstance(t, Point):
            return self.points.find(t)
        if isinstance(t, Line):
            return self.lines.find(t)
        return self.circles.find(t)

    @property
    def size(self) -> int:
        return len(self.points.items) + len(self.curve_list)

    def result(self, complete: bool) -> ClosureResult:
        return ClosureResult(list(self.points.items), list(self.curve_list),
                             self.rounds, complete, self.trace)

    def _check_budget(self):
        if self.size > self.budget.max_objects:
            raise ResourceLimitError(
                f"closure exceeded {self.budget.max_objects} objects",
                partial=self.result(False))

    def _add_point(self, p: Point, rule: str, parents: tuple) -> bool:
        if not self.points.add(p):
            return False
        self.trace.append(TraceEntry(p, self.rounds, rule, parents))
        self._check_budget()
        if (isinstance(self.target, Point) and self.found_round is None
                and p == self.target):
            self.found_round = self.rounds
        return True

    def _add_curve(self, c: Curve, rule: str, parents: tuple) -> bool:
        idx = self.lines if isinstance(c, Line) else self.circles
        if not idx.add(c):
            return False
        self.curve_list.append(c)
        self.trace.append(TraceEntry(c, self.rounds, rule, parents))
        self._check_budget()
        if (isinstance(self.target, (Line, Circle)) and self.found_round is None
                and c == self.target):
            self.found_round = self.rounds
        return True

    def round(self) -> bool:
        """One saturation round; returns True if anything new appeared."""
        self.rounds += 1
        grew = False
        pts = list(self.points.items)
        if "line" in self.ops:
            for j in range(len(pts)):
                for i in range(j):
                    grew |= self._add_curve(Line.through(pts[i], pts[j]),
                                            "line", (pts[i], pts[j]))
                    if self.found_round is not None:
                        return grew
        if "circle" in self.ops:
            radii = []
            for j in range(len(pts)):
                for i in range(j):
                    radii.append((dist2(pts[i], pts[j]), pts[i], pts[j]))
            for o in pts:
                for r2, a, b in radii:
                    grew |= self._add_curve(Circle(o, r2), "circle", (o, a, b))
                    if self.found_round is not None:
                        return grew
        if "intersect" in self.ops:
            n = len(self.curve_list)
            for j in range(n):
                for i in range(j):
                    if (i, j) in self.done_pairs:
                        continue
                    self.done_pairs.add((i, j))
                    u, v = self.curve_list[i], self.curve_list[j]
                    for p in intersect(u, v):
                        grew |= self._add_point(p, "intersect", (u, v))
                    if self.found_round is not None:
                        return grew
        return grew

    def run(self) -> bool:
        """Rounds until fixed point, target hit, or round budget; True
        means a fixed point was confirmed."""
        while self.rounds < self.budget.max_rounds:
            grew = self.round()
            if self.found_round is not None:
                return False
            if not grew:
                self.rounds -= 1     # the empty round does not count
                return True
        return False


def closure(points, curves=(), budget: Budget | None = None,
            ops=ALL_OPS) -> ClosureResult:
    """Saturate to a fixed point, or as far as the round budget allows.

    The result's `complete` flag records whether a fixed point was
    confirmed.  Exceeding `max_objects` raises ResourceLimitError with a
    `.partial` result.
    """
    run = _Run(points, curves, budget or Budget(), ops, None)
    complete = run.run()
    return run.result(complete)


def derivable(target: Point | Curve, points, curves=(),
              budget: Budget | None = None, ops=ALL_OPS) -> Derivability:
    """Whether target appears within the round budget, and at which round.

    A negative answer is always budget-relative: it reports that the
    target did not appear, never that it cannot.  The state's `complete`
    flag tells whether a fixed point happened to confirm more.
    """
    run = _Run(points, curves, budget or Budget(), ops, target)
    complete = False
    if run.found_round is None:
        complete = run.run()
    found = run.found_round
    return Derivability(found is not None, found, run.result(complete))


def expand_once(points, curves=(), ops=ALL_OPS,
                budget: Budget | None = None) -> ClosureResult:
    """A single saturation round over the given configuration."""
    run = _Run(points, curves, budget or Budget(), ops, None)
    grew = run.round()
    return run.result(not grew)
