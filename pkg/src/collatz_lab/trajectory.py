"""Exact orbit computation: iteration, cycle detection, range censuses."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .maps import GeneralizedCollatzMap, u_map


class UndefinedStepError(ValueError):
    """Orbit reached a value where the map has no exact rule."""

    def __init__(self, value: int):
        super().__init__("map is undefined at %d" % value)
        self.value = value


@dataclass(frozen=True)
class IterationLimits:
    """Budgets that bound any orbit computation.

    max_steps caps map applications; max_bits caps the bit length of any
    produced value (an orbit passing it is reported, not truncated
    silently).
    """

    max_steps: int = 10**6
    max_bits: int = 10**5


DEFAULT_LIMITS = IterationLimits()


class Outcome(enum.Enum):
    REACHED_ONE = "reached-one"
    ENTERED_CYCLE = "entered-cycle"
    HIT_STEP_LIMIT = "step-limit"
    HIT_BIT_LIMIT = "bit-limit"
    HIT_UNDEFINED = "undefined"


@dataclass(frozen=True)
class Cycle:
    """A periodic orbit, stored rotated so the smallest member leads."""

    members: tuple[int, ...]

    @staticmethod
    def canonical(members) -> "Cycle":
        seq = list(members)
        i = seq.index(min(seq))
        return Cycle(tuple(seq[i:] + seq[:i]))

    @property
    def length(self) -> int:
        return len(self.members)

    @property
    def odd_count(self) -> int:
        return sum(1 for m in self.members if m % 2 == 1)


@dataclass(frozen=True)
class Trajectory:
    """One finite orbit segment together with how it ended.

    steps counts map applications, so the start is iterate zero.  peak is
    the largest value seen including the start; odd_count counts odd
    values among the iterates that were actually stepped from (the first
    `steps` of them).  values is None when aggregate-only mode was
    requested.
    """

    start: int
    outcome: Outcome
    steps: int
    final: int
    peak: int
    odd_count: int
    values: tuple[int, ...] | None = None
    cycle: Cycle | None = None


def _resolve_stop_at_one(map_: GeneralizedCollatzMap, stop_at_one: bool | None) -> bool:
    if stop_at_one is not None:
        return stop_at_one
    return map_.name in ("3x+1", "collatz")


def iterate(
    map_: GeneralizedCollatzMap,
    n: int,
    limits: IterationLimits = DEFAULT_LIMITS,
    stop_at_one: bool | None = None,
    store_values: bool = True,
    hash_budget: int = 1 << 26,
) -> Trajectory:
    """Run an orbit until 1, a cycle, a budget, or an undefined value.

    stop_at_one defaults to on for the maps named 3x+1 and collatz and
    off otherwise; pass an explicit flag to override.  Cycle detection
    hashes visited values until hash_budget total stored bits, so a
    divergent orbit costs stepping time but bounded memory; past the
    budget a doubling sentinel takes over, which still finds any cycle
    but may confirm it some steps after its first completion.
    """
    if n < 1:
        raise ValueError("iteration starts at positive integers, got %r" % (n,))
    stop = _resolve_stop_at_one(map_, stop_at_one)
    values = [n] if store_values else None
    seen: dict[int, int] = {}
    hashed_bits = 0
    sentinel = None
    anchor = 0
    interval = 1
    x = n
    steps = 0
    peak = n
    odd = 0
    while True:
        if stop and x == 1:
            return Trajectory(n, Outcome.REACHED_ONE, steps, x, peak,
                              odd, _freeze(values), None)
        prior = seen.get(x)
        if prior is not None:
            cyc = _walk_cycle(map_, x, steps - prior)
            return Trajectory(n, Outcome.ENTERED_CYCLE, steps, x, peak,
                              odd, _freeze(values), cyc)
        if sentinel is not None and x == sentinel:
            cyc = _walk_cycle(map_, x, steps - anchor)
            return Trajectory(n, Outcome.ENTERED_CYCLE, steps, x, peak,
                              odd, _freeze(values), cyc)
        if steps >= limits.max_steps:
            return Trajectory(n, Outcome.HIT_STEP_LIMIT, steps, x, peak,
                              odd, _freeze(values), None)
        if hashed_bits <= hash_budget:
            seen[x] = steps
            hashed_bits += x.bit_length()
        elif sentinel is None or steps - anchor == interval:
            if sentinel is not None:
                interval *= 2
            sentinel = x
            anchor = steps
        if x % 2 == 1:
            odd += 1
        nxt = map_.apply(x)
        if nxt is None or nxt < 1:
            return Trajectory(n, Outcome.HIT_UNDEFINED, steps, x, peak,
                              odd, _freeze(values), None)
        x = nxt
        steps += 1
        if store_values:
            values.append(x)
        if x > peak:
            peak = x
        if x.bit_length() > limits.max_bits:
            return Trajectory(n, Outcome.HIT_BIT_LIMIT, steps, x, peak,
                              odd, _freeze(values), None)


def _freeze(values) -> tuple[int, ...] | None:
    return tuple(values) if values is not None else None


def _walk_cycle(map_: GeneralizedCollatzMap, entry: int, length: int) -> Cycle:
    members = [entry]
    x = entry
    for _ in range(length - 1):
        x = map_.apply(x)
        members.append(x)
    return Cycle.canonical(members)


def _apply_checked(map_: GeneralizedCollatzMap, x: int) -> int:
    nxt = map_.apply(x)
    if nxt is None or nxt < 1:
        raise UndefinedStepError(x)
    return nxt


def find_cycle(
    map_: GeneralizedCollatzMap,
    n: int,
    limits: IterationLimits = DEFAULT_LIMITS,
    hash_budget: int = 1 << 26,
) -> Cycle | None:
    """Locate the cycle the orbit of n eventually enters, if budgets allow.

    Visited values are hashed until hash_budget total stored bits; past
    that the search continues with Brent's constant-memory algorithm.
    Both phases draw on one shared step budget.  Returns None when
    limits end the search first; raises UndefinedStepError if the orbit
    leaves the map's domain.
    """
    if n < 1:
        raise ValueError("orbits start at positive integers, got %r" % (n,))
    seen: dict[int, int] = {}
    hashed_bits = 0
    x = n
    steps = 0
    while steps < limits.max_steps and hashed_bits <= hash_budget:
        prior = seen.get(x)
        if prior is not None:
            return _walk_cycle(map_, x, steps - prior)
        seen[x] = steps
        hashed_bits += x.bit_length()
        x = _apply_checked(map_, x)
        steps += 1
        if x.bit_length() > limits.max_bits:
            return None
    if steps >= limits.max_steps:
        return None
    return _brent(map_, x, limits, steps)


def _brent(map_, x0: int, limits: IterationLimits, steps_used: int) -> Cycle | None:
    """Brent's teleporting-tortoise search from x0 under shared budgets."""
    budget = limits.max_steps - steps_used
    power = 1
    lam = 1
    tortoise = x0
    hare = _apply_checked(map_, x0)
    used = 1
    while tortoise != hare:
        if used >= budget:
            return None
        if hare.bit_length() > limits.max_bits:
            return None
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = _apply_checked(map_, hare)
        lam += 1
        used += 1
    # lam is the cycle length; walk lam ahead, then advance in lockstep
    # to the first repeated value, which must lie on the cycle.
    tortoise = hare = x0
    for _ in range(lam):
        hare = _apply_checked(map_, hare)
    while tortoise != hare:
        tortoise = _apply_checked(map_, tortoise)
        hare = _apply_checked(map_, hare)
    return _walk_cycle(map_, tortoise, lam)


@dataclass(frozen=True)
class CycleCensus:
    """Every cycle discovered from a start range, plus unresolved starts."""

    lo: int
    hi: int
    cycles: tuple[Cycle, ...]
    limit_starts: tuple[int, ...]
    undefined_starts: tuple[int, ...]


def cycle_census(
    map_: GeneralizedCollatzMap,
    lo: int,
    hi: int,
    limits: IterationLimits = DEFAULT_LIMITS,
    hash_budget: int = 1 << 26,
) -> CycleCensus:
    """Classify every start in [lo, hi]: which cycle it reaches, or why not.

    Starts are processed in increasing order and an orbit that dips below
    the current start inherits that smaller start's classification.  The
    inherited answer is exact: the tail of the orbit is literally the
    smaller start's orbit, and a budget the smaller start exhausted would
    be exhausted by the longer path as well.
    """
    if lo < 1 or hi < lo:
        raise ValueError("census range must satisfy 1 <= lo <= hi")
    cycles: dict[tuple[int, ...], Cycle] = {}
    memo: dict[int, tuple] = {}
    limit_starts = []
    undefined_starts = []
    for n in range(lo, hi + 1):
        x = n
        seen: dict[int, int] = {}
        hashed_bits = 0
        steps = 0
        verdict = None
        while True:
            if lo <= x < n:
                verdict = memo[x]
                break
            prior = seen.get(x)
            if prior is not None:
                cyc = _walk_cycle(map_, x, steps - prior)
                verdict = ("cycle", cyc.members)
                cycles.setdefault(cyc.members, cyc)
                break
            if steps >= limits.max_steps:
                verdict = ("limit",)
                break
            if hashed_bits > hash_budget:
                # hand the tail to the constant-memory search
                rest = IterationLimits(limits.max_steps - steps, limits.max_bits)
                try:
                    cyc = find_cycle(map_, x, rest, hash_budget=0)
                except UndefinedStepError:
                    verdict = ("undefined",)
                    break
                if cyc is None:
                    verdict = ("limit",)
                else:
                    verdict = ("cycle", cyc.members)
                    cycles.setdefault(cyc.members, cyc)
                break
            seen[x] = steps
            hashed_bits += x.bit_length()
            nxt = map_.apply(x)
            if nxt is None or nxt < 1:
                verdict = ("undefined",)
                break
            x = nxt
            steps += 1
            if x.bit_length() > limits.max_bits:
                verdict = ("limit",)
                break
        memo[n] = verdict
        if verdict[0] == "limit":
            limit_starts.append(n)
        elif verdict[0] == "undefined":
            undefined_starts.append(n)
    ordered = sorted(cycles.values(), key=lambda c: (c.members[0], c.length, c.members))
    return CycleCensus(lo, hi, tuple(ordered), tuple(limit_starts), tuple(undefined_starts))


def permutation_orbit(
    n: int,
    limits: IterationLimits = DEFAULT_LIMITS,
    store_values: bool = True,
) -> Trajectory:
    """Orbit of n under the permutation 2n -> 3n, 4n+1 -> 3n+1, 4n+3 -> 3n+2."""
    return iterate(u_map(), n, limits=limits, stop_at_one=False, store_values=store_values)
