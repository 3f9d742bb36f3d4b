"""Seeded random states, unitaries, and harness corpora.

Randomness contract: all draws use numpy's Generator over the PCG64 bit
generator. A run with seed s evaluates sample i on substream(s, i), which
is numpy's SeedSequence(entropy=s, spawn_key=(i,)). Substreams are
statistically independent, reproduce bitwise for a fixed seed, and do not
depend on evaluation order, so scans can be resumed or parallelized
without changing their output.
"""

from __future__ import annotations

import numpy as np

from .states import (
    ClassicalJoint,
    DensityMatrix,
    MarkovBlock,
    MarkovSpec,
    TripartiteState,
    classical_state,
    markov_state,
    tripartite,
    validate_density,
)


def substream(seed: int, index: int, *subkey: int) -> np.random.Generator:
    """Independent generator for sample `index` of a run seeded with `seed`.

    Extra integers extend the spawn key, giving further independent
    streams tied to the same sample (for example one for the state draw
    and one for auxiliary unitary draws).
    """
    key = (int(index),) + tuple(int(k) for k in subkey)
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt distributed density matrix: G G^dag normalized."""
    g = _ginibre(dim, rng)
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar distributed unitary.

    QR of a complex Gaussian matrix, with column phases fixed so the
    triangular factor has a positive real diagonal (which makes the
    distribution exactly Haar rather than QR-convention dependent).
    """
    q, r = np.linalg.qr(_ginibre(dim, rng))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Gaussian Hermitian matrix (g + g^dag) * scale / 2."""
    g = _ginibre(dim, rng)
    return scale * (g + g.conj().T) / 2.0


def random_tripartite(dims, rng: np.random.Generator) -> TripartiteState:
    dims = tuple(int(d) for d in dims)
    return TripartiteState(rho=random_density(dims[0] * dims[1] * dims[2], rng), dims=dims)


def random_classical(dims, rng: np.random.Generator) -> ClassicalJoint:
    """Joint distribution drawn uniformly from the probability simplex."""
    dims = tuple(int(d) for d in dims)
    cells = dims[0] * dims[1] * dims[2]
    return ClassicalJoint(p=rng.dirichlet(np.ones(cells)).reshape(dims))


def random_markov_spec(dims, rng: np.random.Generator) -> MarkovSpec:
    """Random block decomposition of B with Hilbert-Schmidt block factors.

    The decomposition is sampled greedily: while capacity remains, pick a
    (d_left, d_right) pair uniformly among those that still fit. Block
    weights are flat Dirichlet.
    """
    d_a, d_b, d_c = (int(d) for d in dims)
    shapes: list[tuple[int, int]] = []
    remaining = d_b
    while remaining > 0:
        pairs = [
            (dl, dr)
            for dl in range(1, remaining + 1)
            for dr in range(1, remaining // dl + 1)
        ]
        shapes.append(pairs[int(rng.integers(len(pairs)))])
        remaining -= shapes[-1][0] * shapes[-1][1]
    weights = rng.dirichlet(np.ones(len(shapes)))
    blocks = [
        MarkovBlock(
            weight=float(w),
            d_left=dl,
            d_right=dr,
            rho_al=random_density(d_a * dl, rng),
            rho_rc=random_density(dr * d_c, rng),
        )
        for w, (dl, dr) in zip(weights, shapes)
    ]
    return MarkovSpec(d_a=d_a, d_c=d_c, blocks=tuple(blocks))


def random_markov_state(dims, rng: np.random.Generator) -> TripartiteState:
    return markov_state(random_markov_spec(dims, rng))


def random_classical_state(dims, rng: np.random.Generator) -> TripartiteState:
    return classical_state(random_classical(dims, rng))


def near_markov_state(dims, rng: np.random.Generator, mix: float) -> TripartiteState:
    """Convex mixture (1 - mix) * markov + mix * random, for small mix."""
    base = random_markov_state(dims, rng)
    noise = random_density(base.dim, rng)
    return tripartite((1.0 - mix) * base.mat + mix * noise.mat, dims)
