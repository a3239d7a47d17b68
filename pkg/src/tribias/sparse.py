"""Sparse random graphs: Erdos-Renyi and the configuration model.

Provides seeded samplers, exact finite-size expectations of the average
triangle bias, small-instance enumeration oracles, and the large-size
limit curves.  Expectations are exact rationals whenever the inputs are
exact (``Fraction`` or ``int``); float inputs take a numerically stable
floating-point path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, GraphInputError
from .graphs import Multigraph, total_triangle_bias

__all__ = [
    "as_generator",
    "sample_erdos_renyi",
    "erdos_renyi_mean_bias",
    "erdos_renyi_mean_bias_enumerated",
    "zeta_er",
    "DegreeSequence",
    "sample_configuration_model",
    "configuration_model_mean_bias",
    "configuration_model_mean_bias_enumerated",
    "zeta_cm",
    "er_triangle_free_limit",
    "cm_triangle_free_limit",
]


def as_generator(seed) -> np.random.Generator:
    """Accept a Generator, a SeedSequence, or an integer seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


# -- Erdos-Renyi ---------------------------------------------------------------


def _check_probability(p) -> None:
    if not (0 <= p <= 1):
        raise DomainError(f"edge probability must lie in [0, 1], got {p}")


def sample_erdos_renyi(n: int, p, seed) -> Multigraph:
    """Simple graph on ``n`` vertices, each pair kept independently with
    probability ``p``.  ``p`` may be given as ``lam / n``."""
    if n < 1:
        raise GraphInputError(f"need at least one vertex, got n={n}")
    _check_probability(p)
    rng = as_generator(seed)
    pf = float(p)
    m = n * (n - 1) // 2
    if pf == 1.0:
        return Multigraph.complete(n)
    if pf == 0.0 or m == 0:
        return Multigraph(n)
    if m <= 65536 or pf >= 0.25:
        iu, ju = np.triu_indices(n, k=1)
        mask = rng.random(m) < pf
        pairs = zip(iu[mask].tolist(), ju[mask].tolist())
    else:
        # sparse path: draw the binomial edge count, then a uniform subset
        count = int(rng.binomial(m, pf))
        idx = rng.choice(m, size=count, replace=False)
        idx.sort()
        rows = np.arange(n, dtype=np.int64)
        row_start = rows * (2 * n - rows - 1) // 2  # first linear index of row u
        u = np.searchsorted(row_start, idx, side="right") - 1
        v = idx - row_start[u] + u + 1
        pairs = zip(u.tolist(), v.tolist())
    return Multigraph(n, [(a, b) for a, b in pairs])


def erdos_renyi_mean_bias(n: int, p):
    """Expected average triangle bias of the n-vertex model, exactly.

    Exact ``Fraction`` for exact ``p``; for float ``p`` the decaying factor
    ``(1-p)**(n-1)`` is evaluated through ``exp((n-1) * log1p(-p))`` so
    small probabilities do not lose precision.
    """
    if n < 3:
        raise DomainError(f"formula requires n >= 3, got n={n}")
    _check_probability(p)
    if isinstance(p, (Fraction, int)):
        p = Fraction(p)
        q_pow = (1 - p) ** (n - 1)
        half = Fraction(1, 2)
    else:
        p = float(p)
        q_pow = 0.0 if p == 1.0 else math.exp((n - 1) * math.log1p(-p))
        half = 0.5
    return (
        half * (n - 2) * (n - 3) * p**3 * (1 - q_pow)
        + (n - 1) * p**2
        - p
        + p * q_pow
        - half * (n - 1) * (n - 2) * p**3
    )


@lru_cache(maxsize=8)
def _er_bias_by_edge_count(n: int) -> tuple[Fraction, ...]:
    """Sum of the average triangle bias over all labelled graphs with a
    given number of edges (index = edge count)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = len(pairs)
    buckets = [Fraction(0)] * (m + 1)
    for mask in range(1 << m):
        edges = [pairs[b] for b in range(m) if mask >> b & 1]
        g = Multigraph(n, edges)
        buckets[len(edges)] += total_triangle_bias(g) / n
    return tuple(buckets)


def erdos_renyi_mean_bias_enumerated(n: int, p):
    """Independent oracle: expectation by weighted enumeration of all
    2^C(n,2) labelled graphs.  Exact in rational arithmetic for exact p."""
    if n > 5:
        raise DomainError("enumeration oracle is limited to n <= 5")
    if n < 1:
        raise GraphInputError(f"need at least one vertex, got n={n}")
    _check_probability(p)
    as_float = not isinstance(p, (Fraction, int))
    pq = Fraction(p)
    buckets = _er_bias_by_edge_count(n)
    m = len(buckets) - 1
    total = Fraction(0)
    for e, b in enumerate(buckets):
        if b:
            total += b * pq**e * (1 - pq) ** (m - e)
    return float(total) if as_float else total


_ZETA_SERIES_TERMS = 40


def zeta_er(lam: float) -> float:
    """Large-size limit of n times the expected average triangle bias of
    the Erdos-Renyi model with mean degree ``lam``.

    Closed form ``lam^2 - lam + (lam - lam^3/2) * exp(-lam)``; a power
    series is used below ``lam = 0.5`` where the closed form cancels
    catastrophically (the curve behaves like ``lam^4 / 3`` at zero).
    """
    lam = float(lam)
    if lam <= 0:
        raise DomainError(f"mean degree must be positive, got {lam}")
    if lam < 0.5:
        total = 0.0
        for mm in range(_ZETA_SERIES_TERMS, 3, -1):
            sign = 1.0 if (mm - 1) % 2 == 0 else -1.0
            coeff = sign * (
                1.0 / math.factorial(mm - 1) - 0.5 / math.factorial(mm - 3)
            )
            total = total * lam + coeff
        return total * lam**4
    return lam * lam - lam + (lam - 0.5 * lam**3) * math.exp(-lam)


def er_triangle_free_limit(lam: float) -> float:
    """Limiting probability that the sparse model has no triangles."""
    if lam < 0:
        raise DomainError(f"mean degree must be non-negative, got {lam}")
    return math.exp(-(lam**3) / 6.0)


# -- configuration model -------------------------------------------------------


@dataclass(frozen=True)
class DegreeSequence:
    """Prescribed degrees, all at least 1."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        if not self.degrees:
            raise GraphInputError("degree sequence must be non-empty")
        if any(d < 1 or d != int(d) for d in self.degrees):
            raise GraphInputError("degrees must be positive integers")
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))

    @property
    def n(self) -> int:
        return len(self.degrees)

    def moment(self, k: int) -> int:
        """m_k, the sum of the k-th powers of the degrees."""
        return sum(d**k for d in self.degrees)

    def normalized_moment(self, k: int) -> Fraction:
        return Fraction(self.moment(k), self.n)

    @classmethod
    def regular(cls, n: int, d: int) -> "DegreeSequence":
        return cls((d,) * n)

    @classmethod
    def two_point(cls, n: int, a: int, b: int, frac_a) -> "DegreeSequence":
        """n degrees, a share ``frac_a`` of them equal to ``a``, rest ``b``."""
        na = round(n * float(frac_a))
        return cls((a,) * na + (b,) * (n - na))

    @classmethod
    def parse_distribution(cls, text: str, n: int) -> "DegreeSequence":
        """Named forms for the CLI: ``regular:d`` and ``two-point:a,b,frac``."""
        kind, _, args = text.partition(":")
        if kind == "regular":
            return cls.regular(n, int(args))
        if kind == "two-point":
            try:
                a_s, b_s, f_s = args.split(",")
            except ValueError:
                raise GraphInputError(
                    f"two-point distribution needs a,b,frac, got {args!r}"
                ) from None
            return cls.two_point(n, int(a_s), int(b_s), float(f_s))
        raise GraphInputError(f"unknown degree distribution {text!r}")

    @classmethod
    def from_text(cls, text: str) -> "DegreeSequence":
        degs = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                degs.append(int(line))
            except ValueError:
                raise GraphInputError(
                    f"line {lineno}: expected one integer degree, got {line!r}"
                ) from None
        return cls(tuple(degs))


def sample_configuration_model(ds: DegreeSequence, seed) -> Multigraph:
    """Uniform pairing of half-edges; the result is a multigraph whose
    degree at vertex i is exactly ``degrees[i]`` (loops counting twice)."""
    m1 = ds.moment(1)
    if m1 % 2:
        raise GraphInputError(f"total degree must be even, got m1={m1}")
    rng = as_generator(seed)
    stubs = np.repeat(np.arange(ds.n), ds.degrees)
    rng.shuffle(stubs)
    us = stubs[0::2].tolist()
    vs = stubs[1::2].tolist()
    return Multigraph(ds.n, list(zip(us, vs)))


def configuration_model_mean_bias(ds: DegreeSequence) -> Fraction:
    """Exact expected average triangle bias of the pairing model.

    Computed from the degree moments m_1..m_7; valid only when m_1 > 7
    (the pairing denominators (m_1-1)(m_1-3)(m_1-5)(m_1-7) must stay
    positive).  Multigraph conventions apply: multiplicities weight the
    triangle counts and a vertex's loops feed its own bias sum.
    """
    m1 = ds.moment(1)
    if m1 <= 7:
        raise DomainError(f"formula requires m1 > 7, got m1={m1}")
    n = ds.n
    m2, m3, m4, m5, m6, m7 = (ds.moment(k) for k in range(2, 8))
    a1 = 6 * m1 * m3 - 18 * m1 * m4 + 14 * m1 * m5 - 2 * m1 * m6 + 4 * m2 * m3 - 8 * m2 * m4 + 4 * m3**2
    a2 = (
        -14 * m1 * m2 * m3
        + 3 * m1 * m2 * m4
        - 9 * m1**2 * m2
        + 18 * m1**2 * m3
        - 5 * m1**2 * m4
        + 3 * m1 * m2**2
        + 4 * m2**3
    )
    a3 = -7 * m1**3 * m2 - m1 * m2**3 + 5 * m1**2 * m2**2 + 3 * m1**4
    b1 = 2 * m7 - 10 * m6 + 14 * m5 - 6 * m4
    b2 = (
        6 * m1 * m3
        - 8 * m1 * m4
        + 2 * m1 * m5
        - 13 * m2 * m3
        + 11 * m2 * m4
        - 2 * m2 * m5
        - m3 * m4
        + 3 * m2**2
        + 2 * m3**2
    )
    b3 = (
        -2 * m1 * m2 * m3
        - 3 * m1**2 * m2
        + m1**2 * m3
        + 6 * m1 * m2**2
        + m2**2 * m3
        - 3 * m2**3
    )
    denom = 2 * (m1 - 1) * (m1 - 3) * (m1 - 5) * (m1 - 7)
    return (Fraction(a1 + a2 + a3, n) + (b1 + b2 + b3)) / denom


def _matchings(stubs: tuple[int, ...]):
    """Yield every perfect matching of the stub index list as vertex pairs."""
    if not stubs:
        yield []
        return
    first, rest = stubs[0], stubs[1:]
    for i in range(len(rest)):
        partner = rest[i]
        for tail in _matchings(rest[:i] + rest[i + 1 :]):
            yield [(first, partner)] + tail


def configuration_model_mean_bias_enumerated(ds: DegreeSequence) -> Fraction:
    """Independent oracle: exact average of the triangle bias over all
    (m1-1)!! equally likely pairings.  Limited to m1 <= 12."""
    m1 = ds.moment(1)
    if m1 % 2:
        raise GraphInputError(f"total degree must be even, got m1={m1}")
    if m1 > 12:
        raise DomainError("matching enumeration is limited to m1 <= 12")
    stubs = tuple(
        v for v, d in enumerate(ds.degrees) for _ in range(d)
    )
    total = Fraction(0)
    count = 0
    for pairs in _matchings(stubs):
        g = Multigraph(ds.n, pairs)
        total += total_triangle_bias(g)
        count += 1
    return total / (count * ds.n)


def zeta_cm(c1, c2, c3):
    """Large-size limit of n times the expected average triangle bias of
    the configuration model with normalized degree moments c1, c2, c3.

    Non-negative whenever the moments come from a positive integer random
    degree, and zero exactly in the regular case c2 = c1^2.
    """
    if c1 <= 0:
        raise DomainError(f"first moment must be positive, got {c1}")
    if isinstance(c1, (Fraction, int)) and isinstance(c2, (Fraction, int)) and isinstance(c3, (Fraction, int)):
        c1 = Fraction(c1)
        half = Fraction(1, 2)
    else:
        c1, c2, c3 = float(c1), float(c2), float(c3)
        half = 0.5
    return half * (c2 - c1) ** 2 / c1**4 * ((c3 - c1 * c2) - 3 * (c2 - c1**2))


def cm_triangle_free_limit(c1, c2) -> float:
    """Limiting probability that the configuration model has no triangles."""
    if c1 <= 0:
        raise DomainError(f"first moment must be positive, got {c1}")
    nu = (float(c2) - float(c1)) / float(c1)
    return math.exp(-(nu**3) / 6.0)
