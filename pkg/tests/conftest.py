"""Shared fixtures: one deterministic corpus of verified grids per session.

The corpus mixes every construction at small scale with seeded random
permutations, symbol duals, transposes, replications, concatenations, and
exhaustive-search witnesses.  Tests treat it as read-only; anything that
needs a mutated grid builds its own copy.
"""

import random

import pytest

import pdakit as pk


def _base_grids() -> list[tuple[str, pk.PdaGrid]]:
    grids: list[tuple[str, pk.PdaGrid]] = []
    for f in range(2, 9):
        for z in range(1, f):
            grids.append((f"mn({f},{z})", pk.mn_pda(f, z)))
    for f in range(2, 9):
        for s in range(1, 25):
            grids.append((f"opt2({f},{s})", pk.optimal_fz2(f, s)))
    for s in range(0, 25):
        grids.append((f"f2({s})", pk.f2_base(s)))
    return grids


def _witness_grids() -> list[tuple[str, pk.PdaGrid]]:
    cfg = pk.SearchConfig(time_budget=30.0)
    grids: list[tuple[str, pk.PdaGrid]] = []
    cells = [
        (2, 0, 4),
        (2, 0, 7),
        (3, 1, 3),
        (3, 1, 5),
        (3, 2, 4),
        (4, 2, 5),
        (4, 3, 6),
        (4, 1, 6),
        (5, 3, 5),
    ]
    for f, z, s in cells:
        out = pk.max_k(f, z, s, cfg)
        if out.witness is not None and out.witness.k > 0:
            grids.append((f"maxk({f},{z},{s})", out.witness))
    for k, f, z in [(3, 3, 1), (6, 4, 2), (4, 5, 3)]:
        out = pk.min_s(k, f, z, cfg)
        if out.witness is not None:
            grids.append((f"mins({k},{f},{z})", out.witness))
    return grids


def _random_perm(rng: random.Random, n: int) -> list[int]:
    p = list(range(n))
    rng.shuffle(p)
    return p


@pytest.fixture(scope="session")
def corpus() -> list[tuple[str, pk.PdaGrid]]:
    rng = random.Random(20260819)
    base = _base_grids() + _witness_grids()
    grids = list(base)
    for name, g in base:
        for t in range(2):
            grids.append(
                (
                    f"{name}/perm{t}",
                    pk.permute(
                        g,
                        row_perm=_random_perm(rng, g.f),
                        col_perm=_random_perm(rng, g.k),
                        sym_perm=_random_perm(rng, g.s),
                    ),
                )
            )
    for name, g in base:
        if g.s >= 1:
            grids.append((f"{name}/dual", pk.symbol_dual(g)))
        if g.k >= 1:
            grids.append((f"{name}/transpose", pk.transpose(g)))
    grids.append(("rep(mn(4,2),3)", pk.replicate(pk.mn_pda(4, 2), 3)))
    grids.append(("rep(f2(5),2)", pk.replicate(pk.f2_base(5), 2)))
    grids.append(("rep(opt2(5,7),2)", pk.replicate(pk.optimal_fz2(5, 7), 2)))
    grids.append(
        ("cat(mn(4,2),opt2(4,5))", pk.concat(pk.mn_pda(4, 2), pk.optimal_fz2(4, 5)))
    )
    grids.append(
        ("cat(opt2(3,4),mn(3,1))", pk.concat(pk.optimal_fz2(3, 4), pk.mn_pda(3, 1)))
    )
    grids.append(("cat(f2(4),f2(9))", pk.concat(pk.f2_base(4), pk.f2_base(9))))
    grids.append(
        ("cat(mn(7,5),opt2(7,24))", pk.concat(pk.mn_pda(7, 5), pk.optimal_fz2(7, 24)))
    )
    return grids


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(987123)
