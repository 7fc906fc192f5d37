"""Execute the caching scheme a grid induces: placement, delivery, decoding.

The mapping is the standard one.  Rows are subfiles, columns are users.  In
the placement phase user k caches subfile j of every file iff cell (j, k)
is a star.  In the delivery phase, after each user announces a demanded
file, the server sends one XOR broadcast per symbol x: the XOR over all
cells (j, k) = x of subfile j of file demands[k].  User k recovers its
missing subfile j from broadcast x = cell (j, k) by XOR-cancelling every
other term with cached copies; the star-corner property is exactly the
statement that those copies are cached.

Subfile contents are deterministic pseudo-random bytes derived from
(seed, file, subfile), so decoding is an end-to-end byte equality check on
actual XOR algebra, not index bookkeeping.  The measured rate is
S_used / F: symbols absent from the grid transmit nothing.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import PdaGrid, PdaUsageError

Placement = dict[int, frozenset[tuple[int, int]]]


@dataclass(frozen=True)
class CachingInstance:
    """One run of the scheme: library size, per-user demands, content seed.

    k_users and f_subfiles must match the grid this instance is used with;
    demands[k] is the file user k requests (repeats allowed).
    """

    n_files: int
    k_users: int
    f_subfiles: int
    demands: tuple[int, ...]
    seed: int = 0
    subfile_size: int = 16

    def __post_init__(self) -> None:
        if self.n_files < 1:
            raise PdaUsageError("need at least one file")
        if self.k_users < 0 or self.f_subfiles < 1:
            raise PdaUsageError("bad user or subfile count")
        if self.subfile_size < 1:
            raise PdaUsageError("subfile size must be at least one byte")
        if len(self.demands) != self.k_users:
            raise PdaUsageError("demands must list one file per user")
        for dem in self.demands:
            if not 0 <= dem < self.n_files:
                raise PdaUsageError(f"demand {dem} outside [0, {self.n_files})")

    @classmethod
    def for_grid(
        cls,
        grid: PdaGrid,
        n_files: int,
        demands: tuple[int, ...],
        seed: int = 0,
        subfile_size: int = 16,
    ) -> "CachingInstance":
        return cls(
            n_files=n_files,
            k_users=grid.k,
            f_subfiles=grid.f,
            demands=tuple(demands),
            seed=seed,
            subfile_size=subfile_size,
        )


@dataclass(frozen=True)
class Broadcast:
    """One XOR transmission: the symbol it serves, the (file, subfile) terms
    combined in column order, and the XOR payload as an integer."""

    symbol: int
    terms: tuple[tuple[int, int], ...]
    payload: int


@dataclass(frozen=True)
class CachingTranscript:
    placement: Placement
    broadcasts: dict[int, Broadcast]
    decoded: tuple[bool, ...]
    rate: Fraction


@lru_cache(maxsize=None)
def subfile_content(seed: int, file: int, subfile: int, size: int) -> int:
    """Deterministic pseudo-random content, as a size-byte big-endian int."""
    base = f"pda-sim:{seed}:{file}:{subfile}".encode()
    out = b""
    counter = 0
    while len(out) < size:
        out += hashlib.sha256(base + b":%d" % counter).digest()
        counter += 1
    return int.from_bytes(out[:size], "big")


def _check_dims(grid: PdaGrid, instance: CachingInstance) -> None:
    if instance.k_users != grid.k or instance.f_subfiles != grid.f:
        raise PdaUsageError(
            f"instance is {instance.k_users} users x {instance.f_subfiles} subfiles, "
            f"grid is {grid.k} x {grid.f}"
        )


def place(grid: PdaGrid, instance: CachingInstance) -> Placement:
    """Demand-oblivious placement: user k caches subfile j of every file
    exactly when cell (j, k) is a star."""
    _check_dims(grid, instance)
    placement: Placement = {}
    for k in range(grid.k):
        star_rows = [j for j in range(grid.f) if grid.cell(j, k) is None]
        placement[k] = frozenset(
            (file, j) for file in range(instance.n_files) for j in star_rows
        )
    return placement


def deliver(
    grid: PdaGrid, instance: CachingInstance, placement: Placement
) -> dict[int, Broadcast]:
    """One broadcast per symbol present in the grid, XOR over the demanded
    subfiles at that symbol's cells, in column order."""
    _check_dims(grid, instance)
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for k in range(grid.k):
        for j in range(grid.f):
            x = grid.cell(j, k)
            if x is not None:
                occurrences.setdefault(x, []).append((instance.demands[k], j))
    broadcasts: dict[int, Broadcast] = {}
    for x in sorted(occurrences):
        terms = tuple(occurrences[x])
        payload = 0
        for file, j in terms:
            payload ^= subfile_content(instance.seed, file, j, instance.subfile_size)
        broadcasts[x] = Broadcast(symbol=x, terms=terms, payload=payload)
    return broadcasts


def decode(
    grid: PdaGrid,
    instance: CachingInstance,
    placement: Placement,
    broadcasts: dict[int, Broadcast],
) -> tuple[bool, ...]:
    """Per-user verdict: can the user reassemble every subfile of its
    demanded file, byte-exactly, from its cache plus the broadcasts?

    A star cell reads from the cache; a symbol cell takes that broadcast
    and cancels every foreign term with cached content.  Any cache miss or
    byte mismatch makes the verdict False: on a valid grid that would be a
    bug, on an invalid grid it is the expected observable failure.
    """
    _check_dims(grid, instance)
    verdicts = []
    for k in range(grid.k):
        want = instance.demands[k]
        cache = placement.get(k, frozenset())
        ok = True
        for j in range(grid.f):
            x = grid.cell(j, k)
            if x is None:
                if (want, j) not in cache:
                    ok = False
                    break
                continue
            b = broadcasts.get(x)
            if b is None:
                ok = False
                break
            value = b.payload
            own_cancelled = False
            miss = False
            for file, sub in b.terms:
                if not own_cancelled and (file, sub) == (want, j):
                    own_cancelled = True
                    continue
                if (file, sub) in cache:
                    value ^= subfile_content(
                        instance.seed, file, sub, instance.subfile_size
                    )
                else:
                    miss = True
                    break
            if (
                miss
                or not own_cancelled
                or value != subfile_content(instance.seed, want, j, instance.subfile_size)
            ):
                ok = False
                break
        verdicts.append(ok)
    return tuple(verdicts)


def rate(grid: PdaGrid) -> Fraction:
    """Delivery rate S_used / F, exact and in lowest terms."""
    return Fraction(grid.s_used(), grid.f)


def simulate(grid: PdaGrid, instance: CachingInstance) -> CachingTranscript:
    """Full pipeline driver: place, deliver, decode, measure."""
    placement = place(grid, instance)
    broadcasts = deliver(grid, instance, placement)
    decoded = decode(grid, instance, placement, broadcasts)
    return CachingTranscript(
        placement=placement, broadcasts=broadcasts, decoded=decoded, rate=rate(grid)
    )
