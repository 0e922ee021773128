"""Iterated function systems of circle homeomorphisms and their Hutchinson
operators on arc unions: iteration, word maps, and dynamical probes
(invariance, orbit density, attractor convergence).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circle import (
    ArcSet,
    CirclePoint,
    _normalize_segments_flagged,
    coarsen,
    gap_radius,
    hausdorff,
    limit_denominators,
    normalize_segments,
    rational_str,
)
from .homeo import PLHomeo, Word


class ResourceCapError(RuntimeError):
    """Arc count exceeded the configured cap with coarsening disabled."""


@dataclass(frozen=True)
class IFS:
    """Finite ordered family of PL circle homeomorphisms."""

    generators: tuple[PLHomeo, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ValueError("an IFS needs at least one generator")

    def __len__(self) -> int:
        return len(self.generators)

    def to_obj(self) -> dict:
        return {
            "label": self.label,
            "generators": [g.to_obj() for g in self.generators],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "IFS":
        return cls(
            tuple(PLHomeo.from_obj(g) for g in obj["generators"]),
            obj.get("label", ""),
        )


def inverse_system(system: IFS) -> IFS:
    """The IFS of inverses, in the same generator order."""
    return IFS(
        tuple(g.invert() for g in system.generators),
        label=f"{system.label}-inverse" if system.label else "inverse",
    )


@dataclass(frozen=True)
class PrecisionPolicy:
    """Optional per-step precision and size controls for iteration.

    Exact arithmetic is the default (all fields off).  denominator_limit
    rounds endpoints to denominators <= D after each step; coarsen_eta fills
    gaps shorter than eta; arc_cap aborts (ResourceCapError) when a step
    produces more arcs than the cap while coarsening is off.
    """

    denominator_limit: int | None = None
    coarsen_eta: Fraction | None = None
    arc_cap: int = 100_000

    def apply(self, a: ArcSet) -> tuple[ArcSet, bool]:
        """Returns (processed set, whether coarsening changed it)."""
        if self.denominator_limit is not None:
            a = limit_denominators(a, self.denominator_limit)
        coarsened = False
        if self.coarsen_eta is not None:
            before = len(a.arcs)
            a = coarsen(a, self.coarsen_eta)
            coarsened = len(a.arcs) != before
        elif len(a.arcs) > self.arc_cap:
            raise ResourceCapError(
                f"arc count {len(a.arcs)} exceeds cap {self.arc_cap}"
            )
        return a, coarsened

    def to_obj(self) -> dict:
        return {
            "denominator_limit": self.denominator_limit,
            "coarsen": None if self.coarsen_eta is None else rational_str(self.coarsen_eta),
            "arc_cap": self.arc_cap,
        }


EXACT = PrecisionPolicy()

# Shipped default for probe runs on the finite-stage Denjoy systems, whose
# singleton orbits grow too fast for exact arithmetic at depth 32+.  The
# endpoint grid keeps rounding noise (<= 2^-16 per step) and the coarsening
# slack (2^-11) far below every probe tolerance in use.
PROBE_POLICY = PrecisionPolicy(
    denominator_limit=2**16, coarsen_eta=Fraction(1, 2**11)
)


def hutchinson(system: IFS, a: ArcSet) -> ArcSet:
    """F(A): the canonical union of generator images of A."""
    return normalize_segments(
        g.image_segment(piece) for g in system.generators for piece in a.arcs
    )


def hutchinson_step(
    system: IFS, a: ArcSet, policy: PrecisionPolicy
) -> tuple[ArcSet, bool]:
    """One Hutchinson step with the policy's rounding and coarsening applied
    in the same normalization pass; returns (F(A) processed, coarsened?)."""
    limit = policy.denominator_limit

    def segments():
        for g in system.generators:
            for piece in a.arcs:
                lo, hi = g.image_segment(piece)
                if limit is not None:
                    length = hi - lo
                    if lo.denominator > limit:
                        lo = lo.limit_denominator(limit)
                    if length == 0:
                        hi = lo
                    elif length == 1:
                        hi = lo + 1
                    else:
                        if hi.denominator > limit:
                            hi = hi.limit_denominator(limit)
                        if hi < lo:
                            hi = lo
                yield lo, hi

    out, coarse = _normalize_segments_flagged(segments(), policy.coarsen_eta)
    if policy.coarsen_eta is None and len(out.arcs) > policy.arc_cap:
        raise ResourceCapError(
            f"arc count {len(out.arcs)} exceeds cap {policy.arc_cap}"
        )
    return out, coarse


@dataclass(frozen=True)
class Trajectory:
    """The sets [A, F(A), ..., F^n(A)] with per-step bookkeeping."""

    sets: tuple[ArcSet, ...]
    arc_counts: tuple[int, ...]
    coarsened: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, i: int) -> ArcSet:
        return self.sets[i]


def iterate(
    system: IFS,
    a: ArcSet,
    n: int,
    policy: PrecisionPolicy = EXACT,
) -> Trajectory:
    """Iterate the Hutchinson operator n times, keeping the full history."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    current, coarse0 = policy.apply(a)
    sets = [current]
    coarsened = [coarse0]
    for _ in range(n):
        current, coarse = hutchinson_step(system, current, policy)
        sets.append(current)
        coarsened.append(coarse)
    return Trajectory(
        tuple(sets),
        tuple(len(s.arcs) for s in sets),
        tuple(coarsened),
    )


def word_map(system: IFS, word: Word | Sequence[int], x: CirclePoint) -> CirclePoint:
    """Apply f_{w_n} o ... o f_{w_1} to x (first symbol acts first)."""
    k = len(system.generators)
    for s in word:
        if not 1 <= s <= k:
            raise ValueError(f"word symbol {s} out of range 1..{k}")
        x = system.generators[s - 1](x)
    return x


@dataclass(frozen=True)
class MinimalityReport:
    """Result of a breadth-first orbit density probe."""

    base_point: CirclePoint
    depth: int
    epsilon: Fraction
    verdict: bool
    largest_gap: Fraction
    orbit_size: int

    def to_obj(self) -> dict:
        return {
            "base_point": rational_str(self.base_point.value),
            "depth": self.depth,
            "epsilon": rational_str(self.epsilon),
            "verdict": self.verdict,
            "largest_gap": rational_str(self.largest_gap),
            "orbit_size": self.orbit_size,
        }


def orbit_density_probe(
    system: IFS,
    x: CirclePoint,
    depth: int,
    epsilon: Fraction,
    max_points: int = 2_000_000,
) -> MinimalityReport:
    """Enumerate the semigroup orbit of x up to the given word length and
    check whether it forms an epsilon-net of the circle.

    BFS with exact-point deduplication: a point reached at word length m is
    expanded once there, which already enumerates every continuation a later
    revisit (at length > m) could contribute.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    visited = {x.value}
    frontier = [x]
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for g in system.generators:
                q = g(p)
                if q.value not in visited:
                    visited.add(q.value)
                    nxt.append(q)
        frontier = nxt
        if len(visited) > max_points:
            raise ResourceCapError(f"orbit exceeded {max_points} points")
        if not frontier:
            break
    pts = sorted(visited)
    largest = max(
        ((pts[(i + 1) % len(pts)] - pts[i]) % 1 for i in range(len(pts))),
        default=Fraction(1),
    )
    if len(pts) == 1:
        largest = Fraction(1)
    return MinimalityReport(
        base_point=x,
        depth=depth,
        epsilon=epsilon,
        verdict=largest < 2 * epsilon,
        largest_gap=largest,
        orbit_size=len(pts),
    )


@dataclass(frozen=True)
class InvarianceReport:
    """Per-generator Hausdorff displacement of a candidate invariant set."""

    tol: Fraction
    distances: tuple[Fraction, ...]
    ok: bool

    def to_obj(self) -> dict:
        return {
            "tol": rational_str(self.tol),
            "distances": [rational_str(d) for d in self.distances],
            "ok": self.ok,
        }


def invariance_check(system: IFS, k_set: ArcSet, tol: Fraction) -> InvarianceReport:
    """True iff max over generators of d_H(f(K), K) <= tol (tol = 0 demands
    exact invariance)."""
    distances = tuple(
        hausdorff(
            normalize_segments(g.image_segment(piece) for piece in k_set.arcs),
            k_set,
        )
        for g in system.generators
    )
    return InvarianceReport(tol=tol, distances=distances, ok=max(distances) <= tol)


VERDICT_CONVERGED = "converged-below-tol"
VERDICT_NOT_CONVERGED = "not-converged-within-budget"


@dataclass(frozen=True)
class ConvergenceReport:
    """gap_radius trajectory of F^n(K) against a convergence tolerance."""

    steps: tuple[tuple[int, Fraction], ...]
    arc_counts: tuple[int, ...]
    coarsened: tuple[bool, ...]
    tol: Fraction
    budget: int
    verdict: str
    converged_at: int | None

    def to_obj(self) -> dict:
        return {
            "tol": rational_str(self.tol),
            "budget": self.budget,
            "verdict": self.verdict,
            "converged_at": self.converged_at,
            "steps": [
                {
                    "n": n,
                    "gap_radius": rational_str(r),
                    "arc_count": self.arc_counts[i],
                    "coarsened": self.coarsened[i],
                }
                for i, (n, r) in enumerate(self.steps)
            ],
        }


def attractor_probe(
    system: IFS,
    k_set: ArcSet,
    budget: int,
    tol: Fraction,
    policy: PrecisionPolicy = EXACT,
) -> ConvergenceReport:
    """Iterate F on K recording gap_radius per step; converged when the
    radius falls to tol or below within the budget."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    current, coarse = policy.apply(k_set)
    steps = [(0, gap_radius(current))]
    arc_counts = [len(current.arcs)]
    coarsened = [coarse]
    converged_at = 0 if steps[0][1] <= tol else None
    n = 0
    while converged_at is None and n < budget:
        n += 1
        current, coarse = hutchinson_step(system, current, policy)
        radius = gap_radius(current)
        steps.append((n, radius))
        arc_counts.append(len(current.arcs))
        coarsened.append(coarse)
        if radius <= tol:
            converged_at = n
    return ConvergenceReport(
        steps=tuple(steps),
        arc_counts=tuple(arc_counts),
        coarsened=tuple(coarsened),
        tol=tol,
        budget=budget,
        verdict=VERDICT_CONVERGED if converged_at is not None else VERDICT_NOT_CONVERGED,
        converged_at=converged_at,
    )
