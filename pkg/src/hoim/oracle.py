"""Brute-force and numerical ground truth, kept independent of the solver.

The exhaustive searches use only the discrete problem definitions (the
all-equal test on literal values, the all-same-label test on edges), never
the polynomial or cosine machinery, so agreement tests against the other
modules are meaningful.  Searches are deliberately naive and bounded to
stay fast at desk scale.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .instances import CnfInstance, Hypergraph
from .polynomial import InteractionPolynomial, _normalize_literals, make_polynomial

MAX_NAE_VARS = 24
MAX_CUT_STATES = 2**24
_CHUNK = 1 << 14


def brute_force_nae(instance: CnfInstance) -> tuple[int, np.ndarray]:
    """Scan all 2^N spin assignments; return (max satisfied, one argmax).

    Ties resolve to the lowest assignment index (all-(+1) first: bit b of
    the index flips variable b+1 to -1).
    """
    n = instance.num_vars
    if n > MAX_NAE_VARS:
        raise ValueError(f"{n} variables exceeds the exhaustive bound of {MAX_NAE_VARS}")
    variables = np.array([[abs(l) for l in c] for c in instance.clauses]) - 1
    signs = np.array([[1 if l > 0 else -1 for l in c] for c in instance.clauses])
    best = -1
    best_index = 0
    bits = np.arange(n)
    for start in range(0, 2**n, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, 2**n))
        spins = 1 - 2 * ((idx[:, None] >> bits) & 1)  # (B, N) in {-1,+1}
        values = signs * spins[:, variables]  # (B, M, K)
        all_equal = np.all(values == values[:, :, :1], axis=-1)
        satisfied = instance.num_clauses - all_equal.sum(axis=-1)
        arg = int(np.argmax(satisfied))
        if satisfied[arg] > best:
            best = int(satisfied[arg])
            best_index = int(idx[arg])
    assignment = 1 - 2 * ((best_index >> bits) & 1)
    return best, assignment


def brute_force_maxkcut(graph: Hypergraph, k: int) -> tuple[int, np.ndarray]:
    """Scan all K^N labelings; return (max cut, one argmax).

    Ties resolve to the lowest labeling index (mixed-radix little-endian:
    digit d of the index is node d+1's label).
    """
    if k < 2:
        raise ValueError("need at least 2 partitions")
    n = graph.num_nodes
    total = k**n
    if total > MAX_CUT_STATES:
        raise ValueError(f"{k}^{n} labelings exceeds the exhaustive bound of {MAX_CUT_STATES}")
    edge_idx = [np.array(e) - 1 for e in graph.hyperedges]
    powers = k ** np.arange(n)
    best = -1
    best_index = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        labels = (idx[:, None] // powers) % k  # (B, N)
        uncut = np.zeros(len(idx), dtype=int)
        for e in edge_idx:
            vals = labels[:, e]
            uncut += np.all(vals == vals[:, :1], axis=-1)
        cut = graph.num_edges - uncut
        arg = int(np.argmax(cut))
        if cut[arg] > best:
            best = int(cut[arg])
            best_index = int(idx[arg])
    assignment = (best_index // powers) % k
    return best, assignment


def truth_table_expand(literals) -> InteractionPolynomial:
    """Recover the clause indicator's multilinear coefficients by the exact
    parity (Walsh-Fourier) transform of its full truth table.

    Independent route to the same polynomial as ``expand_clause``: the
    all-equal indicator is tabulated on all 2^K assignments and each
    coefficient is the exact correlation with the corresponding parity.
    """
    lits = _normalize_literals(literals)
    lits.sort()
    k = len(lits)
    if k > 8:
        raise ValueError("truth table expansion supports up to 8 literals")
    n_rows = 2**k
    spins = 1 - 2 * ((np.arange(n_rows)[:, None] >> np.arange(k)) & 1)  # (2^K, K)
    signs = np.array([s for _, s in lits])
    values = signs * spins
    indicator = np.all(values == values[:, :1], axis=-1).astype(int)
    entries = []
    constant = Fraction(int(indicator.sum()), n_rows)
    for order in range(1, k + 1):
        for positions in combinations(range(k), order):
            parity = spins[:, positions].prod(axis=-1)
            coeff = Fraction(int((indicator * parity).sum()), n_rows)
            if coeff:
                entries.append((tuple(lits[p][0] for p in positions), coeff))
    return make_polynomial(entries, constant=constant)


def finite_diff_gradient(energy_fn, state, epsilon: float) -> np.ndarray:
    """Central-difference gradient of a scalar energy, one coordinate at a
    time: (E(x + eps e_i) - E(x - eps e_i)) / (2 eps)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    x = np.asarray(state, dtype=float)
    grad = np.zeros_like(x)
    for i in range(x.size):
        bump = np.zeros_like(x)
        bump[i] = epsilon
        grad[i] = (energy_fn(x + bump) - energy_fn(x - bump)) / (2.0 * epsilon)
    return grad
