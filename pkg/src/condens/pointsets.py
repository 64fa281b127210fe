"""Monte Carlo and randomized quasi-Monte Carlo point sets.

All point sets expose a column-oriented view: ``column(j)`` returns
coordinate ``j`` of every point as one vector, which is what vectorized
simulators consume.  Lattice and Monte Carlo sets may have unbounded
dimension (columns are materialized lazily), which is required for
simulations whose input dimension is random, such as a queue over a day.

Available kinds
---------------
mc                  independent uniform points
lattice             rank-1 lattice, unrandomized (Korobov or explicit z)
lattice+shift       random shift modulo 1
lattice+shift+baker shift followed by the tent (baker) transformation
sobol+lms+shift     Sobol' net, left matrix scramble + digital shift
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .rng import UniformStream

__all__ = [
    "RandomizedPointSet",
    "mc_points",
    "rank1_lattice",
    "random_shift",
    "baker_transform",
    "sobol_raw",
    "sobol_lms_shift",
    "SOBOL_MAX_DIM",
    "SOBOL_BITS",
]

SOBOL_BITS = 31  # output precision of the digital net


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class RandomizedPointSet:
    """Base class: ``n`` points in [0,1)^s with a column view.

    ``dim`` is the nominal dimension, or ``None`` when coordinates can be
    extended indefinitely (recurrence-based constructions).
    """

    kind = "abstract"

    def __init__(self, n: int, dim: int | None):
        self.n = int(n)
        self.dim = dim

    def column(self, j: int) -> np.ndarray:
        raise NotImplementedError

    def matrix(self, s: int | None = None) -> np.ndarray:
        """The points as an (n, s) array."""
        if s is None:
            s = self.dim
        if s is None:
            raise ValueError("unbounded point set: an explicit dimension is required")
        return np.column_stack([self.column(j) for j in range(s)])

    def realized_dim(self) -> int:
        """Number of coordinates materialized so far (== dim when bounded)."""
        return self.dim if self.dim is not None else self._realized

    def __repr__(self) -> str:  # pragma: no cover
        return f"<{type(self).__name__} kind={self.kind} n={self.n} dim={self.dim}>"


class _MonteCarloPoints(RandomizedPointSet):
    kind = "mc"

    def __init__(self, n: int, s: int | None, stream: UniformStream):
        super().__init__(n, s)
        self._stream = stream
        self._cols: list[np.ndarray] = []
        self._realized = 0

    def column(self, j: int) -> np.ndarray:
        if self.dim is not None and j >= self.dim:
            raise IndexError(f"coordinate {j} out of range for dimension {self.dim}")
        while len(self._cols) <= j:
            self._cols.append(self._stream.uniforms(self.n))
        self._realized = len(self._cols)
        return self._cols[j]


def mc_points(n: int, s: int | None, stream: UniformStream) -> RandomizedPointSet:
    """n independent uniform points in [0,1)^s (s=None: unbounded)."""
    if n < 1 or (s is not None and s < 1):
        raise ValueError("mc_points requires n >= 1 and s >= 1")
    return _MonteCarloPoints(n, s, stream)


class _LatticePoints(RandomizedPointSet):
    """Unrandomized rank-1 lattice: point i, coordinate j is {i z_j / n}.

    A Korobov generator ``a`` extends the vector lazily as
    z = (1, a, a^2 mod n, ...), which supplies unbounded dimension.
    """

    kind = "lattice"

    def __init__(self, n: int, z: list[int] | None, a: int | None, s: int | None):
        super().__init__(n, s if z is None else len(z) if s is None else s)
        self._a = a
        self._z = list(z) if z is not None else [1]
        self._i = np.arange(n, dtype=np.int64)
        self._realized = 0

    def _gen_z(self, j: int) -> int:
        while len(self._z) <= j:
            if self._a is None:
                raise IndexError("explicit generating vector exhausted; no Korobov parameter")
            self._z.append((self._z[-1] * self._a) % self.n)
        return self._z[j]

    def column(self, j: int) -> np.ndarray:
        if self.dim is not None and j >= self.dim:
            raise IndexError(f"coordinate {j} out of range for dimension {self.dim}")
        z_j = self._gen_z(j)
        self._realized = max(self._realized, j + 1)
        return ((self._i * z_j) % self.n) / self.n

    def generating_vector(self, s: int) -> list[int]:
        self._gen_z(s - 1)
        return self._z[:s]


def rank1_lattice(
    n: int,
    z: list[int] | None = None,
    s: int | None = None,
    a: int | None = None,
) -> RandomizedPointSet:
    """Unrandomized rank-1 lattice with explicit z or Korobov parameter a.

    With a Korobov parameter the vector is extended lazily to any requested
    dimension; pass ``s=None`` for an unbounded set.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if z is None and a is None:
        raise ValueError("either z or a Korobov parameter a is required")
    if z is not None:
        if any(zj <= 0 for zj in z):
            raise ValueError("generating vector entries must be positive")
        if any(zj >= n for zj in z):
            raise ValueError("generating vector entries must be < n")
    if a is not None and not (0 < a < n):
        raise ValueError("Korobov parameter must satisfy 0 < a < n")
    return _LatticePoints(n, z, a, s)


class _ShiftedPoints(RandomizedPointSet):
    """Coordinate-wise (u + shift) mod 1; shift coordinates drawn lazily."""

    def __init__(self, base: RandomizedPointSet, stream: UniformStream):
        super().__init__(base.n, base.dim)
        self.kind = base.kind + "+shift"
        self.base = base
        self._stream = stream
        self.shift: list[float] = []

    def _shift_coord(self, j: int) -> float:
        while len(self.shift) <= j:
            self.shift.append(float(self._stream.uniforms()))
        return self.shift[j]

    def column(self, j: int) -> np.ndarray:
        return (self.base.column(j) + self._shift_coord(j)) % 1.0

    def realized_dim(self) -> int:
        return self.base.realized_dim()


def random_shift(pts: RandomizedPointSet, stream: UniformStream) -> RandomizedPointSet:
    """Randomly shift a point set modulo 1, coordinate-wise."""
    return _ShiftedPoints(pts, stream)


class _BakerPoints(RandomizedPointSet):
    """Tent transformation u -> 2u if u < 1/2 else 2 - 2u (output in [0,1])."""

    def __init__(self, base: RandomizedPointSet):
        super().__init__(base.n, base.dim)
        self.kind = base.kind + "+baker"
        self.base = base

    def column(self, j: int) -> np.ndarray:
        u = self.base.column(j)
        return np.where(u < 0.5, 2.0 * u, 2.0 - 2.0 * u)

    def realized_dim(self) -> int:
        return self.base.realized_dim()


def baker_transform(pts: RandomizedPointSet) -> RandomizedPointSet:
    """Apply the baker (tent) transformation, periodizing the integrand."""
    return _BakerPoints(pts)


# ---------------------------------------------------------------------------
# Sobol' nets
# ---------------------------------------------------------------------------

def _load_direction_data() -> list[tuple[int, int, list[int]]]:
    """(degree, coefficient code, initial m values) per dimension >= 2."""
    text = resources.files("condens.data").joinpath("sobol_directions.txt").read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [int(x) for x in line.split()]
        d, s, a, m = parts[0], parts[1], parts[2], parts[3:]
        assert len(m) == s, f"malformed direction row for dimension {d}"
        rows.append((s, a, m))
    return rows


_DIRECTION_DATA = _load_direction_data()
SOBOL_MAX_DIM = len(_DIRECTION_DATA) + 1


def _direction_integers(dim_index: int, nbits: int = SOBOL_BITS) -> np.ndarray:
    """Direction integers v_1..v_nbits (scaled by 2^nbits) for one dimension."""
    v = np.zeros(nbits + 1, dtype=np.int64)
    if dim_index == 0:  # van der Corput
        for k in range(1, nbits + 1):
            v[k] = 1 << (nbits - k)
        return v[1:]
    s, a, m = _DIRECTION_DATA[dim_index - 1]
    for k in range(1, min(s, nbits) + 1):
        v[k] = m[k - 1] << (nbits - k)
    for k in range(s + 1, nbits + 1):
        v[k] = v[k - s] ^ (v[k - s] >> s)
        for i in range(1, s):
            if (a >> (s - 1 - i)) & 1:
                v[k] ^= v[k - i]
    return v[1:]


def _sobol_int_matrix(n: int, s: int, directions: list[np.ndarray]) -> np.ndarray:
    """First n Sobol' points (Gray-code order) as integers in [0, 2^SOBOL_BITS)."""
    ii = np.arange(n, dtype=np.int64)
    gray = ii ^ (ii >> 1)
    nbits = max(int(n - 1).bit_length(), 1)
    out = np.zeros((n, s), dtype=np.int64)
    for j in range(s):
        v = directions[j]
        acc = np.zeros(n, dtype=np.int64)
        for k in range(nbits):
            acc ^= np.where((gray >> k) & 1 == 1, v[k], 0)
        out[:, j] = acc
    return out


def _lms_mask_rows(stream: UniformStream, nbits: int = SOBOL_BITS) -> list[int]:
    """Random non-singular lower-triangular binary matrix, one int mask per row.

    Row r (1-based, MSB-first) has a unit diagonal at bit place nbits-r and
    random entries strictly below it.
    """
    rows = []
    for r in range(1, nbits + 1):
        diag = 1 << (nbits - r)
        if r == 1:
            rows.append(diag)
            continue
        rand = int(stream.integers(0, 1 << (r - 1)))
        below = rand << (nbits - r + 1)
        rows.append(diag | below)
    return rows


def _scramble_direction(v: np.ndarray, rows: list[int], nbits: int = SOBOL_BITS) -> np.ndarray:
    out = np.zeros_like(v)
    for idx in range(len(v)):
        vi = int(v[idx])
        w = 0
        for r, mask in enumerate(rows, start=1):
            if bin(mask & vi).count("1") & 1:
                w |= 1 << (nbits - r)
        out[idx] = w
    return out


class _SobolPoints(RandomizedPointSet):
    """Sobol' net, optionally left-matrix-scrambled and digitally shifted."""

    def __init__(self, n: int, s: int, scramble_rows, shifts, kind: str):
        super().__init__(n, s)
        self.kind = kind
        directions = [_direction_integers(j) for j in range(s)]
        if scramble_rows is not None:
            directions = [
                _scramble_direction(v, rows) for v, rows in zip(directions, scramble_rows)
            ]
        ints = _sobol_int_matrix(n, s, directions)
        if shifts is not None:
            ints ^= np.asarray(shifts, dtype=np.int64)[None, :]
        self.scramble_rows = scramble_rows
        self.shifts = shifts
        self._pts = ints / float(1 << SOBOL_BITS)

    def column(self, j: int) -> np.ndarray:
        if j >= self.dim:
            raise IndexError(f"coordinate {j} out of range for dimension {self.dim}")
        return self._pts[:, j]

    def matrix(self, s: int | None = None) -> np.ndarray:
        if s is None or s == self.dim:
            return self._pts
        return super().matrix(s)


def _check_sobol_args(n: int, s: int) -> None:
    if not _is_pow2(n):
        raise ValueError(f"n must be a power of 2, got {n}")
    if not (1 <= s <= SOBOL_MAX_DIM):
        raise ValueError(f"dimension {s} outside the bundled table (1..{SOBOL_MAX_DIM})")


def sobol_raw(n: int, s: int) -> RandomizedPointSet:
    """First n unscrambled, unshifted Sobol' points (Gray-code order)."""
    _check_sobol_args(n, s)
    return _SobolPoints(n, s, None, None, "sobol")


def sobol_lms_shift(
    n: int,
    s: int,
    stream: UniformStream,
    scramble_rows=None,
    shifts=None,
) -> RandomizedPointSet:
    """Sobol' points with left matrix scramble and random digital shift.

    ``scramble_rows`` and ``shifts`` may be supplied explicitly (e.g. identity
    matrices and zero shift reproduce the raw net); by default both are drawn
    from ``stream``.
    """
    _check_sobol_args(n, s)
    if scramble_rows is None:
        scramble_rows = [_lms_mask_rows(stream) for _ in range(s)]
    if shifts is None:
        shifts = [int(stream.integers(0, 1 << SOBOL_BITS)) for _ in range(s)]
    return _SobolPoints(n, s, scramble_rows, shifts, "sobol+lms+shift")
