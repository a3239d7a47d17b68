"""Dense-limit kernels: degree and triangle densities, the limiting
scaled triangle bias, closed forms for rank-1 and two-block kernels, and
samplers for inhomogeneous dense random graphs.

Every kernel this module ships (constant, two-block, general block, grid,
gridded rank-1) is piecewise constant, so densities and the limit
functional are evaluated exactly by block sums; a callable rank-1 profile
falls back to Gauss-Legendre moments.  A generic composite-midpoint
quadrature path exists alongside the closed forms so the two can be
cross-checked.

Normalisation note: :func:`triangle_density` carries the conventional
one-half (each triangle counted once), while :func:`dense_bias_limit`
feeds the *unhalved* triangle kernel through the limit functional.  The
latter matches the factorised two-block closed form and the rank-1 moment
formula exactly; the empirical large-n limit of ``n^-2`` times the
sampled average triangle bias is one half of it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, GraphInputError
from .graphs import Multigraph

__all__ = [
    "Graphon",
    "ConstantGraphon",
    "TwoBlockGraphon",
    "BlockGraphon",
    "GridGraphon",
    "RankOneGraphon",
    "degree_density",
    "triangle_density",
    "dense_bias_limit",
    "dense_bias_limit_quadrature",
    "TwoBlockFactors",
    "two_block_factors",
    "rank_one_bias_limit",
    "profile_moments",
    "sample_graph",
    "graphon_from_json",
    "graphon_to_json",
]

_GL_NODES = 64  # Gauss-Legendre order for callable rank-1 profiles


def _check_unit(name: str, value: float) -> float:
    v = float(value)
    if not (0.0 <= v <= 1.0):
        raise GraphInputError(f"{name} must lie in [0, 1], got {value}")
    return v


class Graphon:
    """Symmetric measurable kernel on the unit square with values in [0, 1]."""

    def value(self, x: float, y: float) -> float:
        raise NotImplementedError

    def matrix_at(self, xs: np.ndarray) -> np.ndarray:
        """Kernel evaluated on the grid ``xs`` x ``xs``."""
        xs = np.asarray(xs, dtype=float)
        return np.array([[self.value(x, y) for y in xs] for x in xs])

    def block_form(self) -> tuple[np.ndarray, np.ndarray] | None:
        """``(sizes, matrix)`` when the kernel is piecewise constant on a
        product partition of [0, 1]; ``None`` otherwise."""
        return None

    def boundaries(self) -> tuple[float, ...]:
        """Interior cell boundaries (quadrature grids align to these)."""
        form = self.block_form()
        if form is None:
            return ()
        sizes = form[0]
        return tuple(float(b) for b in np.cumsum(sizes)[:-1])


@dataclass(frozen=True)
class ConstantGraphon(Graphon):
    p: float

    def __post_init__(self):
        _check_unit("p", self.p)

    def value(self, x, y):
        return self.p

    def matrix_at(self, xs):
        n = len(xs)
        return np.full((n, n), self.p)

    def block_form(self):
        return np.array([1.0]), np.array([[self.p]])


@dataclass(frozen=True)
class BlockGraphon(Graphon):
    """Piecewise-constant kernel: ``sizes`` are the block widths (must sum
    to 1) and ``matrix`` the symmetric block-to-block values."""

    sizes: tuple[float, ...]
    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        sizes = tuple(float(s) for s in self.sizes)
        if not sizes or any(s <= 0 for s in sizes):
            raise GraphInputError("block sizes must be positive")
        if abs(sum(sizes) - 1.0) > 1e-12:
            raise GraphInputError(f"block sizes must sum to 1, got {sum(sizes)}")
        mat = tuple(tuple(_check_unit("block value", v) for v in row) for row in self.matrix)
        k = len(sizes)
        if len(mat) != k or any(len(row) != k for row in mat):
            raise GraphInputError("block matrix shape does not match sizes")
        for i in range(k):
            for j in range(k):
                if mat[i][j] != mat[j][i]:
                    raise GraphInputError("block matrix must be symmetric")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "matrix", mat)

    def _block_of(self, x: float) -> int:
        acc = 0.0
        for b, s in enumerate(self.sizes):
            acc += s
            if x < acc:
                return b
        return len(self.sizes) - 1

    def value(self, x, y):
        return self.matrix[self._block_of(x)][self._block_of(y)]

    def matrix_at(self, xs):
        idx = np.array([self._block_of(float(x)) for x in xs])
        m = np.array(self.matrix)
        return m[np.ix_(idx, idx)]

    def block_form(self):
        return np.array(self.sizes), np.array(self.matrix)


@dataclass(frozen=True)
class TwoBlockGraphon(Graphon):
    """Within-block probabilities ``alpha`` (first block, width ``p``) and
    ``beta`` (second block), cross probability ``gamma``."""

    alpha: float
    beta: float
    gamma: float
    p: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            _check_unit(name, getattr(self, name))
        if not (0.0 < self.p < 1.0):
            raise GraphInputError(f"block split p must lie in (0, 1), got {self.p}")

    def _as_block(self) -> BlockGraphon:
        return BlockGraphon(
            (self.p, 1.0 - self.p),
            ((self.alpha, self.gamma), (self.gamma, self.beta)),
        )

    def value(self, x, y):
        return self._as_block().value(x, y)

    def matrix_at(self, xs):
        return self._as_block().matrix_at(xs)

    def block_form(self):
        return self._as_block().block_form()


@dataclass(frozen=True)
class GridGraphon(Graphon):
    """Equal-width cells with a symmetric matrix of cell values; the same
    thing as a BlockGraphon with uniform sizes."""

    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        mat = tuple(tuple(_check_unit("grid value", v) for v in row) for row in self.matrix)
        k = len(mat)
        if k == 0 or any(len(row) != k for row in mat):
            raise GraphInputError("grid matrix must be square and non-empty")
        for i in range(k):
            for j in range(k):
                if mat[i][j] != mat[j][i]:
                    raise GraphInputError("grid matrix must be symmetric")
        object.__setattr__(self, "matrix", mat)

    def _as_block(self) -> BlockGraphon:
        k = len(self.matrix)
        return BlockGraphon((1.0 / k,) * k, self.matrix)

    def value(self, x, y):
        return self._as_block().value(x, y)

    def matrix_at(self, xs):
        return self._as_block().matrix_at(xs)

    def block_form(self):
        k = len(self.matrix)
        return np.full(k, 1.0 / k), np.array(self.matrix)


@dataclass(frozen=True)
class RankOneGraphon(Graphon):
    """Kernel ``nu(x) * nu(y)`` for a profile with values in [0, 1].

    The profile is either a sequence of cell values (gridded, equal-width
    cells) or a callable on [0, 1].
    """

    profile: object

    def __post_init__(self):
        if not callable(self.profile):
            vals = tuple(_check_unit("profile value", v) for v in self.profile)
            if not vals:
                raise GraphInputError("gridded profile must be non-empty")
            object.__setattr__(self, "profile", vals)

    def profile_at(self, x) -> float:
        if callable(self.profile):
            return _check_unit("profile value", self.profile(x))
        k = len(self.profile)
        return self.profile[min(int(x * k), k - 1)]

    def value(self, x, y):
        return self.profile_at(x) * self.profile_at(y)

    def matrix_at(self, xs):
        v = np.array([self.profile_at(float(x)) for x in xs])
        return np.outer(v, v)

    def block_form(self):
        if callable(self.profile):
            return None
        v = np.array(self.profile)
        return np.full(len(v), 1.0 / len(v)), np.outer(v, v)


# -- densities and the limit functional ---------------------------------------


def profile_moments(kernel: RankOneGraphon) -> tuple[float, float, float]:
    """First three moments of a rank-1 profile (exact for gridded profiles,
    Gauss-Legendre otherwise, which is exact for polynomial profiles)."""
    if callable(kernel.profile):
        nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
        xs = 0.5 * (nodes + 1.0)
        vals = np.array([kernel.profile_at(float(x)) for x in xs])
        w = 0.5 * weights
        return tuple(float(np.sum(w * vals**k)) for k in (1, 2, 3))
    v = np.array(kernel.profile)
    return tuple(float(np.mean(v**k)) for k in (1, 2, 3))


def degree_density(kernel: Graphon, x: float) -> float:
    """Integral of the kernel over the second coordinate, at ``x``."""
    if isinstance(kernel, RankOneGraphon) and callable(kernel.profile):
        m1, _, _ = profile_moments(kernel)
        return kernel.profile_at(x) * m1
    sizes, matrix = kernel.block_form()
    b = int(np.searchsorted(np.cumsum(sizes), x, side="right"))
    b = min(b, len(sizes) - 1)
    return float(matrix[b] @ sizes)


def triangle_density(kernel: Graphon, x: float) -> float:
    """Half the double integral of kappa(x,y) kappa(y,z) kappa(z,x)."""
    if isinstance(kernel, RankOneGraphon) and callable(kernel.profile):
        _, m2, _ = profile_moments(kernel)
        return 0.5 * kernel.profile_at(x) ** 2 * m2**2
    sizes, matrix = kernel.block_form()
    b = int(np.searchsorted(np.cumsum(sizes), x, side="right"))
    b = min(b, len(sizes) - 1)
    weighted = matrix * sizes[None, :]
    return 0.5 * float((weighted @ weighted @ matrix)[b, b])


def _block_limit(sizes: np.ndarray, matrix: np.ndarray) -> float:
    d = matrix @ sizes
    if np.min(d) <= 0.0:
        raise DomainError("degree density vanishes on a block")
    weighted = matrix * sizes[None, :]
    t_unhalved = np.diagonal(weighted @ weighted @ matrix).copy()
    return float(sizes @ ((weighted @ t_unhalved) / d - t_unhalved))


def dense_bias_limit(kernel: Graphon, cells: int = 256) -> float:
    """Limiting scaled triangle bias of graphs sampled from the kernel.

    Exact (block sums) for every piecewise-constant kernel; callable
    rank-1 profiles go through :func:`rank_one_bias_limit` with
    Gauss-Legendre moments.  ``cells`` only matters for kernels without a
    block form.  See the module docstring for the factor-two convention
    shared with :func:`two_block_factors`.
    """
    form = kernel.block_form()
    if form is not None:
        return _block_limit(*form)
    if isinstance(kernel, RankOneGraphon):
        return rank_one_bias_limit(profile_moments(kernel))
    return dense_bias_limit_quadrature(kernel, cells=cells, refine=True)


def _aligned_cells(kernel: Graphon, cells: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoints and widths of a mesh with about ``cells`` cells that
    never straddles a kernel block boundary."""
    edges = sorted({0.0, 1.0, *kernel.boundaries()})
    mids, widths = [], []
    for a, b in zip(edges, edges[1:]):
        k = max(1, round((b - a) * cells))
        step = (b - a) / k
        for i in range(k):
            mids.append(a + (i + 0.5) * step)
            widths.append(step)
    return np.array(mids), np.array(widths)


def dense_bias_limit_quadrature(
    kernel: Graphon, cells: int = 256, refine: bool = False, refine_tol: float = 1e-9
) -> float:
    """Generic composite-midpoint evaluation of the limit functional.

    Cell boundaries align to the kernel's blocks, which makes the result
    exact for piecewise-constant kernels.  With ``refine=True`` the cell
    count doubles until two successive values differ by ``refine_tol``.
    """
    def one_pass(c: int) -> float:
        mids, w = _aligned_cells(kernel, c)
        k = kernel.matrix_at(mids)
        d = k @ w
        if np.min(d) <= 0.0:
            raise DomainError("degree density vanishes on a quadrature cell")
        kw = k * w[None, :]
        t_unhalved = np.diagonal(kw @ kw @ k).copy()
        return float(w @ ((kw @ t_unhalved) / d - t_unhalved))

    out = one_pass(cells)
    if refine:
        while cells < 8192:
            cells *= 2
            nxt = one_pass(cells)
            if abs(nxt - out) < refine_tol:
                return nxt
            out = nxt
    return out


@dataclass(frozen=True)
class TwoBlockFactors:
    """Factorised closed form of the two-block limit: a non-negative
    prefactor, the degree-density gap between the blocks, and a cubic
    term; the limit is their product."""

    prefactor: float
    degree_gap: float
    cubic_term: float

    @property
    def product(self) -> float:
        return self.prefactor * self.degree_gap * self.cubic_term


def two_block_factors(alpha, beta, gamma, p) -> TwoBlockFactors:
    for name, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        _check_unit(name, v)
    if not (0.0 < p < 1.0):
        raise GraphInputError(f"block split p must lie in (0, 1), got {p}")
    if alpha == 0.0 and beta == 0.0 and gamma == 0.0:
        raise GraphInputError("alpha, beta, gamma must not all vanish")
    d1 = p * alpha + (1.0 - p) * gamma
    d2 = p * gamma + (1.0 - p) * beta
    if d1 <= 0.0 or d2 <= 0.0:
        raise DomainError("degree density vanishes on a block")
    prefactor = p * (1.0 - p) * gamma / (d2 * d1)
    degree_gap = p * (gamma - alpha) + (1.0 - p) * (beta - gamma)
    cubic = (
        p ** 2 * alpha * (gamma ** 2 - alpha ** 2)
        + 2.0 * p * (1.0 - p) * gamma ** 2 * (beta - alpha)
        + (1.0 - p) ** 2 * beta * (beta ** 2 - gamma ** 2)
    )
    return TwoBlockFactors(prefactor, degree_gap, cubic)


def rank_one_bias_limit(moments: Sequence[float]) -> float:
    """Limit for a rank-1 kernel from the profile moments (m1, m2, m3):
    ``m2^2 / m1 * (m3 - m1 m2)``; non-negative, zero only for constant
    profiles."""
    m1, m2, m3 = (float(m) for m in moments)
    if m1 <= 0:
        raise DomainError(f"first profile moment must be positive, got {m1}")
    return m2**2 / m1 * (m3 - m1 * m2)


# -- sampling ------------------------------------------------------------------


def sample_graph(n: int, kernel: Graphon, seed) -> Multigraph:
    """Simple graph where vertices are the n cell midpoints and each pair
    connects independently with the kernel value."""
    from .sparse import as_generator

    if n < 1:
        raise GraphInputError(f"need at least one vertex, got n={n}")
    rng = as_generator(seed)
    xs = (np.arange(n) + 0.5) / n
    probs = kernel.matrix_at(xs)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < probs[iu, ju]
    return Multigraph(n, list(zip(iu[mask].tolist(), ju[mask].tolist())))


# -- JSON descriptions ---------------------------------------------------------


def graphon_from_json(data) -> Graphon:
    """Build a kernel from its JSON description (dict or JSON text)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise GraphInputError(f"bad graphon JSON: {exc}") from None
    if not isinstance(data, dict) or "kind" not in data:
        raise GraphInputError("graphon description must be an object with a 'kind'")
    kind = data["kind"]
    try:
        if kind == "constant":
            return ConstantGraphon(data["p"])
        if kind == "two_block":
            return TwoBlockGraphon(data["alpha"], data["beta"], data["gamma"], data["p"])
        if kind == "rank1":
            return RankOneGraphon(tuple(data["profile"]))
        if kind == "block":
            return BlockGraphon(tuple(data["sizes"]), tuple(map(tuple, data["matrix"])))
        if kind == "grid":
            return GridGraphon(tuple(map(tuple, data["matrix"])))
    except KeyError as exc:
        raise GraphInputError(f"graphon kind {kind!r} is missing field {exc}") from None
    raise GraphInputError(f"unknown graphon kind {kind!r}")


def graphon_to_json(kernel: Graphon) -> dict:
    if isinstance(kernel, ConstantGraphon):
        return {"kind": "constant", "p": kernel.p}
    if isinstance(kernel, TwoBlockGraphon):
        return {
            "kind": "two_block",
            "alpha": kernel.alpha,
            "beta": kernel.beta,
            "gamma": kernel.gamma,
            "p": kernel.p,
        }
    if isinstance(kernel, RankOneGraphon) and not callable(kernel.profile):
        return {"kind": "rank1", "profile": list(kernel.profile)}
    if isinstance(kernel, GridGraphon):
        return {"kind": "grid", "matrix": [list(r) for r in kernel.matrix]}
    if isinstance(kernel, BlockGraphon):
        return {"kind": "block", "sizes": list(kernel.sizes), "matrix": [list(r) for r in kernel.matrix]}
    raise GraphInputError(f"cannot serialise graphon {kernel!r}")
