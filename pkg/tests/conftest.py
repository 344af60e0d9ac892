"""Shared corpora and cached references for the test suite."""

from __future__ import annotations

import pytest

from mfdo.graph import (
    apsp_reference,
    generate_cycle,
    generate_grid,
    generate_path,
)


def unweighted_corpus_graphs():
    """Thirty seeded unweighted graphs: grids, paths, and cycles."""
    out = []
    dims = [(4, 4), (5, 4), (6, 6), (7, 5), (8, 8), (10, 10)]
    for seed in (0, 1):
        for w, h in dims:
            out.append((f"grid{w}x{h}-rand-s{seed}",
                        generate_grid(w, h, seed=seed, orientation="random")))
    for w, h in dims:
        out.append((f"grid{w}x{h}-bidi",
                    generate_grid(w, h, seed=0, orientation="bidirected")))
    for k in (5, 9, 17):
        out.append((f"path{k}-bidi", generate_path(k, bidirected=True)))
    for k in (6, 10, 13):
        out.append((f"cycle{k}-dir", generate_cycle(k, bidirected=False)))
        out.append((f"cycle{k}-bidi", generate_cycle(k, bidirected=True)))
    for w, h in ((5, 4), (6, 6), (8, 8)):
        out.append((f"grid{w}x{h}-rand-s2",
                    generate_grid(w, h, seed=2, orientation="random")))
    assert len(out) == 30
    return out


def weighted_corpus_graphs(count: int = 20):
    """Seeded weighted grids with dyadic quarter-integer weights."""
    out = []
    dims = [(5, 5), (6, 5), (6, 6), (7, 6), (8, 7)]
    for seed in (0, 1):
        for i, (w, h) in enumerate(dims):
            orient = "bidirected" if (seed + i) % 2 == 0 else "random"
            out.append((f"wgrid{w}x{h}-{orient}-s{seed}",
                        generate_grid(w, h, seed=seed, orientation=orient, weighted=True)))
    out.append(("wgrid10x10-bidi-s2",
                generate_grid(10, 10, seed=2, orientation="bidirected", weighted=True)))
    for seed in (3, 4, 5):
        out.append((f"wgrid6x6-rand-s{seed}",
                    generate_grid(6, 6, seed=seed, orientation="random", weighted=True)))
    for seed in (6, 7, 8):
        out.append((f"wgrid7x5-bidi-s{seed}",
                    generate_grid(7, 5, seed=seed, orientation="bidirected", weighted=True)))
    for seed in (9, 10, 11):
        out.append((f"wgrid5x4-rand-s{seed}",
                    generate_grid(5, 4, seed=seed, orientation="random", weighted=True)))
    assert len(out) == 20
    return out[:count]


_APSP_CACHE: dict[str, list[list[float]]] = {}


def cached_apsp(name, g):
    if name not in _APSP_CACHE:
        _APSP_CACHE[name] = apsp_reference(g)
    return _APSP_CACHE[name]


@pytest.fixture(scope="session")
def unweighted_corpus():
    return unweighted_corpus_graphs()


@pytest.fixture(scope="session")
def weighted_corpus():
    return weighted_corpus_graphs()
