"""Adjacency spectra, conductance and vertex expansion of small graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Union

import numpy as np

from .core import ExplicitGraph, SizeLimitError

DEFAULT_MAX_ENUM = 24
MAX_JACOBI_ORDER = 2000
CLUSTER_GAP = 1e-6

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicities, sorted by decreasing eigenvalue."""

    pairs: tuple[tuple[Number, int], ...]

    @classmethod
    def from_counts(cls, counts: dict) -> "Spectrum":
        return cls(tuple(sorted(((v, m) for v, m in counts.items() if m), key=lambda p: -p[0])))

    @property
    def order(self) -> int:
        return sum(m for _, m in self.pairs)

    @property
    def trace(self) -> Number:
        return sum(v * m for v, m in self.pairs)

    @property
    def energy(self) -> Number:
        """Sum of squared eigenvalues, i.e. twice the edge count."""
        return sum(v * v * m for v, m in self.pairs)

    def values(self) -> list[Number]:
        return [v for v, m in self.pairs for _ in range(m)]

    def top_two(self) -> tuple[Number, Number]:
        """Largest and second-largest eigenvalue, counted with multiplicity."""
        if not self.pairs:
            raise ValueError("empty spectrum")
        top, mult = self.pairs[0]
        if mult > 1:
            return top, top
        if len(self.pairs) == 1:
            raise ValueError("spectrum has a single eigenvalue")
        return top, self.pairs[1][0]

    def matches(self, other: "Spectrum", tol: float = 1e-8) -> bool:
        """Same multiplicities and eigenvalues within ``tol``."""
        if len(self.pairs) != len(other.pairs):
            return False
        return all(
            m1 == m2 and abs(float(v1) - float(v2)) <= tol
            for (v1, m1), (v2, m2) in zip(self.pairs, other.pairs)
        )

    def lines(self) -> list[str]:
        return [f"{_fmt(v)} {m}" for v, m in self.pairs]

    def as_json(self) -> list[list]:
        return [[_json_number(v), m] for v, m in self.pairs]


def _fmt(v: Number) -> str:
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    if isinstance(v, float):
        r = round(v)
        if abs(v - r) < 1e-9:
            return str(int(r))
        return f"{v:.12g}"
    return str(v)


def _json_number(v: Number):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(v)
    return v


def adjacency_matrix(graph: ExplicitGraph) -> np.ndarray:
    a = np.zeros((graph.vertex_count, graph.vertex_count), dtype=np.float64)
    if graph.edge_count:
        e = graph.edges
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
    return a


def jacobi_eigenvalues(m: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps over every off-diagonal pair until the off-diagonal Frobenius norm
    drops below ``tol`` times the Frobenius norm of the input.
    """
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    size = a.shape[0]
    if size > MAX_JACOBI_ORDER:
        raise SizeLimitError(f"order {size} above the Jacobi limit {MAX_JACOBI_ORDER}")
    scale = np.linalg.norm(a)
    if size < 2 or scale == 0.0:
        return np.diag(a).copy()
    threshold = tol * scale

    upper = np.triu_indices(size, 1)
    negligible = 1e-20 * scale

    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(a[upper] ** 2)))
        if off < threshold:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if abs(apq) <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(a).copy()


def cluster(values: Iterable[float], gap: float = CLUSTER_GAP) -> Spectrum:
    """Group sorted eigenvalues whose neighbours lie within ``gap``."""
    vals = sorted(values, reverse=True)
    groups: list[list[float]] = []
    for v in vals:
        if groups and groups[-1][-1] - v < gap:
            groups[-1].append(v)
        else:
            groups.append([v])
    return Spectrum(tuple((float(np.mean(g)), len(g)) for g in groups))


def eigenvalues_numeric(m: np.ndarray, tol: float = 1e-10, gap: float = CLUSTER_GAP) -> Spectrum:
    return cluster(jacobi_eigenvalues(m, tol=tol), gap=gap)


def spectrum_matching_closed(n: int, k: int) -> Spectrum:
    """Spectrum of G^k for (K_n, loop matching): -k + j n with multiplicity C(k,j)(n-1)^(k-j)."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    return Spectrum.from_counts({-k + j * n: comb(k, j) * (n - 1) ** (k - j) for j in range(k + 1)})


# Each rule maps an eigenvalue mu of level k-1 to (child, multiplicity factor) pairs.
LevelRule = Callable[[Number, int], list[tuple[Number, int]]]


def _matching_rule(mu: Number, n: int) -> list[tuple[Number, int]]:
    # Diagonal blocks A(G^(k-1)), off-diagonal blocks I.
    return [(mu - 1, n - 1), (mu - 1 + n, 1)]


def _jstar_rule(mu: Number, n: int) -> list[tuple[Number, int]]:
    # Diagonal blocks 0, off-diagonal blocks A(G^(k-1)) + I.
    return [(-(mu + 1), n - 1), ((n - 1) * (mu + 1), 1)]


LEVEL_RULES: dict[str, LevelRule] = {
    "matching": _matching_rule,
    "jstar-corrected": _jstar_rule,
}


def complete_spectrum(n: int) -> Spectrum:
    return Spectrum.from_counts({n - 1: 1, -1: n - 1})


def spectrum_block_recursion(base: Spectrum, n: int, k: int, rule: str) -> Spectrum:
    """Lift a level-1 spectrum to level k through a block determinant rule.

    With n x n blocks, diagonal D and off-diagonal E that commute, the
    characteristic polynomial factors as det(D - E)^(n-1) det(D + (n-1)E).
    """
    if rule not in LEVEL_RULES:
        raise ValueError(f"unsupported rule {rule!r}; choose from {sorted(LEVEL_RULES)}")
    if k < 1:
        raise ValueError("k must be at least 1")
    step = LEVEL_RULES[rule]
    counts: dict = {v: m for v, m in base.pairs}
    for _ in range(k - 1):
        nxt: dict = {}
        for mu, mult in counts.items():
            for child, factor in step(mu, n):
                nxt[child] = nxt.get(child, 0) + mult * factor
        counts = nxt
    return Spectrum.from_counts(counts)


def jstar_alternating_sequence(n: int, k: int) -> list[int]:
    """The alternating list (-1)^i (n-1)^(k-i), i = 0..k.

    It does not give the spectrum of (K_n, J*); the CLI shows it next to the
    block recursion for comparison.
    """
    return [(-1) ** i * (n - 1) ** (k - i) for i in range(k + 1)]


def cheeger_bounds(spectrum: Spectrum, degree: int) -> tuple[float, float]:
    """(lambda1 - lambda2)/2 <= conductance <= 2 sqrt(d (lambda1 - lambda2)) for d-regular graphs."""
    if not spectrum.pairs:
        raise ValueError("empty spectrum")
    l1, l2 = spectrum.top_two()
    gap = l1 - l2
    if isinstance(gap, float) and abs(gap) < CLUSTER_GAP:
        gap = 0.0
    lower = gap / 2 if isinstance(gap, float) else Fraction(gap) / 2
    upper = 2.0 * math.sqrt(degree * max(float(gap), 0.0))
    return lower, upper


@dataclass(frozen=True)
class CutReport:
    conductance: Fraction
    witness: tuple[int, ...]
    cut_edges: int
    cheeger_lower: Number | None = None
    cheeger_upper: float | None = None
    vertex_expansion: Fraction | None = None
    vertex_witness: tuple[int, ...] | None = None

    def within_cheeger(self, tol: float = 1e-9) -> bool | None:
        """Sandwich check; ``tol`` absorbs round-off in numerically computed bounds."""
        if self.cheeger_lower is None:
            return None
        phi = float(self.conductance)
        return float(self.cheeger_lower) - tol <= phi <= self.cheeger_upper + tol

    def as_json(self) -> dict:
        out = {
            "conductance": str(self.conductance),
            "conductance_float": float(self.conductance),
            "witness": list(self.witness),
            "cut_edges": self.cut_edges,
            "cheeger_lower": None if self.cheeger_lower is None else float(self.cheeger_lower),
            "cheeger_upper": self.cheeger_upper,
        }
        if self.vertex_expansion is not None:
            out["vertex_expansion"] = str(self.vertex_expansion)
            out["vertex_expansion_float"] = float(self.vertex_expansion)
            out["vertex_witness"] = list(self.vertex_witness)
        return out


def _mask_to_set(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _enumerate_cuts(graph: ExplicitGraph, max_vertices: int, vertex_mode: bool):
    """Walk every subset in Gray-code order and track the best ratio.

    ``vertex_mode`` scores a set by its outer vertex boundary instead of the
    number of edges leaving it.  Returns (best ratio, witness set).
    """
    size = graph.vertex_count
    if size > max_vertices:
        raise SizeLimitError(f"subset enumeration refused: {size} vertices > limit {max_vertices}")
    if size < 2:
        raise ValueError("need at least two vertices")
    rows = graph.rows
    nbrs = graph.neighbors
    deg = [len(x) for x in nbrs]
    half = size // 2

    mask = 0
    count = 0
    score = 0
    hits = [0] * size  # neighbours of each vertex inside the set
    best_num, best_den, best_set = None, 1, None

    for i in range(1, 1 << size):
        v = (i & -i).bit_length() - 1
        bit = 1 << v
        if mask & bit:
            mask ^= bit
            count -= 1
            if vertex_mode:
                if hits[v]:
                    score += 1
                for w in nbrs[v]:
                    hits[w] -= 1
                    if not hits[w] and not mask >> w & 1:
                        score -= 1
            else:
                score -= deg[v] - 2 * bin(rows[v] & mask).count("1")
        else:
            if vertex_mode:
                for w in nbrs[v]:
                    hits[w] += 1
                    if hits[w] == 1 and not mask >> w & 1:
                        score += 1
                if hits[v]:
                    score -= 1
            else:
                score += deg[v] - 2 * bin(rows[v] & mask).count("1")
            mask |= bit
            count += 1
        if count > half:
            continue
        if best_num is None or score * best_den < best_num * count:
            best_num, best_den, best_set = score, count, _mask_to_set(mask)
        elif score * best_den == best_num * count:
            cand = _mask_to_set(mask)
            if cand < best_set:
                best_set = cand
    return Fraction(best_num, best_den), best_set


def conductance_exact(
    graph: ExplicitGraph, max_vertices: int = DEFAULT_MAX_ENUM, with_cheeger: bool = True
) -> CutReport:
    """Minimum of edges-leaving(S)/|S| over 1 <= |S| <= |V|/2, by full enumeration.

    Ties are broken by the lexicographically least vertex set.  Cheeger
    bounds are attached when the graph is regular.
    """
    phi, witness = _enumerate_cuts(graph, max_vertices, vertex_mode=False)
    lower = upper = None
    d = graph.regular_degree()
    if with_cheeger and d is not None:
        spec = eigenvalues_numeric(adjacency_matrix(graph))
        lower, upper = cheeger_bounds(spec, d)
    return CutReport(phi, witness, cut_size(graph, witness), lower, upper)


def cut_size(graph: ExplicitGraph, subset: Iterable[int]) -> int:
    inside = set(subset)
    return sum((a in inside) != (b in inside) for a, b in graph.edge_list())


def vertex_expansion_exact(
    graph: ExplicitGraph, max_vertices: int = DEFAULT_MAX_ENUM
) -> tuple[Fraction, tuple[int, ...]]:
    """Minimum over small S of |outside vertices adjacent to S| / |S| (regular graphs)."""
    if graph.regular_degree() is None:
        raise ValueError("vertex expansion is defined here for regular graphs only")
    return _enumerate_cuts(graph, max_vertices, vertex_mode=True)
