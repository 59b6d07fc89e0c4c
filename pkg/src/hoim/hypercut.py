"""Phase dynamics for hypergraph Max-K-Cut with K-th-harmonic pinning.

Each node carries a phase; the K partition labels live at the lattice
points 2*pi*k/K.  A pair of phases is compared through

    pair_factor = 1 - (1 - cos(d + f(d))) / 2,      d = wrap(phi_i - phi_j)

where f is a narrow antisymmetric sum of Gaussian bumps: at lattice
separation 2*pi*k/K (k != 0) the bump shifts the cosine argument to an odd
multiple of pi so the factor reads 0, while equal labels give 1.  A
hyperedge's indicator is the product of its pair factors, hence 1 exactly
when the edge is uncut.  The energy

    E = A * sum_m indicator_m - (A_s/K) * sum_i cos(K * phi_i)

is minimized by maximizing the cut; the harmonic term confines phases to
the label lattice.  The drift treats f as locally constant (its slope is
dropped when differentiating), giving the leave-one-out form

    dphi_i/dt = (A/2) * sum_{edges m owning i} sum_{j in m, j != i}
                sin(d_ij + f(d_ij)) * prod of m's other pair factors
                - A_s * sin(K * phi_i)

which avoids the 0/0 of dividing the indicator by a vanishing factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import Hypergraph

_TUNED_CONSTANTS = {2: (15.0, 10.0), 3: (15.0, 10.0), 4: (10.0, 10.0)}
_FALLBACK_CONSTANTS = (10.0, 10.0)
DEFAULT_SIGMA = 1e-3


def default_constants(k: int) -> tuple[float, float, bool]:
    """(coupling A, harmonic strength A_s, whether tuned for this K)."""
    if k in _TUNED_CONSTANTS:
        return (*_TUNED_CONSTANTS[k], True)
    return (*_FALLBACK_CONSTANTS, False)


def wrap_angle(x):
    """Reduce an angle difference to the principal range (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)


def phase_penalty(delta, k: int, sigma: float):
    """Gaussian-bump phase shift f(delta) for K partitions.

    For each j in 1..K-1 a bump of amplitude (2j-1)*pi - 2*pi*j/K sits at
    +2*pi*j/K and its negation at -2*pi*j/K, each of width ``sigma``.
    ``delta`` is expected in the principal range (-pi, pi]; for K = 2 the
    amplitudes vanish identically.
    """
    if k < 2:
        raise ValueError("need at least 2 partitions")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = np.asarray(delta, dtype=float)[..., None]
    j = np.arange(1, k)
    centers = 2.0 * np.pi * j / k
    amplitudes = (2.0 * j - 1.0) * np.pi - centers
    bumps = np.exp(-((d - centers) ** 2) / (2.0 * sigma**2))
    bumps -= np.exp(-((d + centers) ** 2) / (2.0 * sigma**2))
    return (amplitudes * bumps).sum(axis=-1)


@dataclass(frozen=True)
class CutSystem:
    """Energy/drift evaluator for Max-K-Cut on one hypergraph."""

    hypergraph: Hypergraph
    k_partitions: int
    coupling: float
    harmonic: float
    sigma: float = DEFAULT_SIGMA

    def __post_init__(self):
        if self.k_partitions < 2:
            raise ValueError("need at least 2 partitions")
        if not (np.isfinite(self.coupling) and self.coupling > 0):
            raise ValueError("coupling must be positive and finite")
        if not (np.isfinite(self.harmonic) and self.harmonic >= 0):
            raise ValueError("harmonic strength must be non-negative and finite")
        if not 0 < self.sigma < 2.0 * np.pi / (8.0 * self.k_partitions):
            raise ValueError("sigma must be small relative to the lattice spacing 2*pi/K")
        # Pad per-edge pair lists to a rectangle so products and scatters
        # vectorize across edges; mask marks real pairs.
        edges = self.hypergraph.hyperedges
        n = self.hypergraph.num_nodes
        width = max(len(e) * (len(e) - 1) // 2 for e in edges)
        m = len(edges)
        pair_i = np.zeros((m, width), dtype=np.intp)
        pair_j = np.zeros((m, width), dtype=np.intp)
        mask = np.zeros((m, width), dtype=bool)
        for row, edge in enumerate(edges):
            col = 0
            for a in range(len(edge)):
                for b in range(a + 1, len(edge)):
                    pair_i[row, col] = edge[a] - 1
                    pair_j[row, col] = edge[b] - 1
                    mask[row, col] = True
                    col += 1
        scatter = np.zeros((m * width, n))
        rows = np.arange(m * width)
        flat_mask = mask.ravel()
        scatter[rows[flat_mask], pair_i.ravel()[flat_mask]] += 1.0
        scatter[rows[flat_mask], pair_j.ravel()[flat_mask]] -= 1.0
        object.__setattr__(self, "_pair_i", pair_i)
        object.__setattr__(self, "_pair_j", pair_j)
        object.__setattr__(self, "_mask", mask)
        object.__setattr__(self, "_scatter", scatter)

    @classmethod
    def from_hypergraph(cls, graph: Hypergraph, k: int, coupling: float | None = None,
                        harmonic: float | None = None, sigma: float = DEFAULT_SIGMA) -> "CutSystem":
        a_default, as_default, _ = default_constants(k)
        return cls(
            hypergraph=graph,
            k_partitions=k,
            coupling=coupling if coupling is not None else a_default,
            harmonic=harmonic if harmonic is not None else as_default,
            sigma=sigma,
        )

    @property
    def num_nodes(self) -> int:
        return self.hypergraph.num_nodes

    def _pair_geometry(self, phases, penalties=None):
        """Wrapped differences, penalties, and pair factors, shape (..., M, W)."""
        phi = np.asarray(phases, dtype=float)
        deltas = wrap_angle(phi[..., self._pair_i] - phi[..., self._pair_j])
        if penalties is None:
            penalties = phase_penalty(deltas, self.k_partitions, self.sigma)
        factors = 0.5 * (1.0 + np.cos(deltas + penalties))
        factors = np.where(self._mask, factors, 1.0)
        return deltas, penalties, factors

    def pair_penalties(self, phases) -> np.ndarray:
        """Penalty values f(d_ij) at the current state (frozen-f helper)."""
        _, penalties, _ = self._pair_geometry(phases)
        return penalties

    def energy(self, phases, penalties=None) -> float | np.ndarray:
        """Edge indicators summed, plus the K-th-harmonic pinning term.

        Pass ``penalties`` (from :meth:`pair_penalties` at a reference
        state) to evaluate the energy with f frozen.
        """
        phi = np.asarray(phases, dtype=float)
        _, _, factors = self._pair_geometry(phi, penalties)
        indicators = factors.prod(axis=-1)
        pinning = (self.harmonic / self.k_partitions) * np.cos(self.k_partitions * phi).sum(axis=-1)
        out = self.coupling * indicators.sum(axis=-1) - pinning
        return float(out) if out.ndim == 0 else out

    def drift(self, phases) -> np.ndarray:
        """dphi/dt with f treated as locally constant (leave-one-out form)."""
        phi = np.asarray(phases, dtype=float)
        deltas, penalties, factors = self._pair_geometry(phi)
        # prod of the edge's other pair factors, via exclusive prefix/suffix
        ones = np.ones_like(factors[..., :1])
        prefix = np.concatenate([ones, np.cumprod(factors, axis=-1)[..., :-1]], axis=-1)
        rev = np.cumprod(factors[..., ::-1], axis=-1)[..., ::-1]
        suffix = np.concatenate([rev[..., 1:], ones], axis=-1)
        gain = 0.5 * self.coupling * np.sin(deltas + penalties) * prefix * suffix
        gain = np.where(self._mask, gain, 0.0)
        flat = gain.reshape(*gain.shape[:-2], -1)
        return flat @ self._scatter - self.harmonic * np.sin(self.k_partitions * phi)

    def hyperedge_indicator(self, edge, phases) -> float:
        """Product of pair factors inside one hyperedge (1 = uncut)."""
        phi = np.asarray(phases, dtype=float)
        nodes = tuple(edge)
        value = 1.0
        for a in range(len(nodes)):
            for b in range(a + 1, len(nodes)):
                value *= pair_factor(phi[nodes[a] - 1], phi[nodes[b] - 1], self)
        return value


def pair_factor(phi_i: float, phi_j: float, sys: CutSystem) -> float:
    """1 for phases at the same lattice label, 0 at different labels
    (up to smoothing error of order sigma)."""
    delta = wrap_angle(phi_i - phi_j)
    shift = phase_penalty(delta, sys.k_partitions, sys.sigma)
    return float(0.5 * (1.0 + np.cos(delta + shift)))


def count_cut(graph: Hypergraph, labels) -> int | np.ndarray:
    """Number of hyperedges whose nodes span at least two labels.

    ``labels`` may carry leading batch dimensions.
    """
    lab = np.asarray(labels)
    uncut = 0
    for edge in graph.hyperedges:
        idx = np.array(edge) - 1
        values = lab[..., idx]
        uncut = uncut + np.all(values == values[..., :1], axis=-1)
    cut = graph.num_edges - uncut
    if np.ndim(cut) == 0:
        return int(cut)
    return cut


def snap_to_labels(phases, k: int) -> np.ndarray:
    """Round each phase to the nearest lattice point 2*pi*j/K and return
    labels in 0..K-1; exact ties go to the smaller label."""
    phi = np.mod(np.asarray(phases, dtype=float), 2.0 * np.pi)
    labels = np.ceil(k * phi / (2.0 * np.pi) - 0.5).astype(int)
    return np.mod(labels, k)
