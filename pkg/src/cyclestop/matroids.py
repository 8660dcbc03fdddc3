"""Matroids by rank oracle: flats, Moebius values, characteristic
polynomials, and the matroid form of the stopping-time identities.

A matroid is a ground set plus a rank function; closure, flats, loops and
contraction all derive from rank.  The flat lattice carries the Moebius
function and the characteristic polynomial; the stopping-time checks tie
the lattice quantities to definition-level subset counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import limits
from .exactnum import binomial
from .graphs import Graph, UnionFind

__all__ = [
    "Matroid",
    "FlatLattice",
    "IntPolynomial",
    "MatrixParseError",
    "uniform",
    "graphic",
    "linear_gf",
    "parse_linear_text",
    "load_linear",
    "gf_rank",
    "enumerate_flats",
    "closure",
    "contract",
    "char_poly",
    "char_poly_deriv_at_1",
    "beta_invariant",
    "prop_mu_intermediate",
    "prop_mu_contraction",
    "prop_mu_prank",
    "d_matroid",
    "lemma_flat_sum",
    "expected_stop_matroid",
    "theorem_avg_matroid",
]


class Matroid:
    """Ground set with a memoized rank oracle.

    ``elements`` are hashable labels; ``rank_fn`` maps a bitmask over the
    element order to an integer rank.  The rank axioms are the caller's
    responsibility (the constructors here satisfy them; the tests check).
    """

    def __init__(self, elements, rank_fn, name: str = "", graph: Graph | None = None):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("ground set labels must be distinct")
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._rank_fn = rank_fn
        self._rank_memo: dict[int, int] = {0: 0}
        self.name = name or f"matroid(|E|={len(self.elements)})"
        self.graph = graph
        self._lattice: FlatLattice | None = None
        self._d_rows: dict[int, tuple[int, ...]] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, e) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise ValueError(f"element {e!r} not in ground set") from None

    def mask_of(self, subset) -> int:
        mask = 0
        for e in subset:
            mask |= 1 << self.index_of(e)
        return mask

    def elements_of(self, mask: int) -> tuple:
        return tuple(e for i, e in enumerate(self.elements) if (mask >> i) & 1)

    def rank_mask(self, mask: int) -> int:
        memo = self._rank_memo
        r = memo.get(mask)
        if r is None:
            r = self._rank_fn(mask)
            memo[mask] = r
        return r

    def rank(self, subset) -> int:
        return self.rank_mask(self.mask_of(subset))

    @property
    def full_rank(self) -> int:
        return self.rank_mask((1 << len(self.elements)) - 1)

    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        out = mask
        for i in range(len(self.elements)):
            bit = 1 << i
            if not mask & bit and self.rank_mask(mask | bit) == r:
                out |= bit
        return out

    def closure(self, subset) -> frozenset:
        return frozenset(self.elements_of(self.closure_mask(self.mask_of(subset))))

    def is_flat(self, subset) -> bool:
        mask = self.mask_of(subset)
        return self.closure_mask(mask) == mask

    def loops(self) -> frozenset:
        return frozenset(self.elements_of(self.closure_mask(0)))

    @property
    def is_loopless(self) -> bool:
        return self.closure_mask(0) == 0

    def contract(self, flat_subset) -> "Matroid":
        """Contraction M/A by a flat A; never introduces loops."""
        amask = self.mask_of(flat_subset)
        if self.closure_mask(amask) != amask:
            raise ValueError(f"can only contract by a flat, {set(flat_subset)!r} is not one")
        ra = self.rank_mask(amask)
        kept = [i for i in range(len(self.elements)) if not (amask >> i) & 1]
        labels = tuple(self.elements[i] for i in kept)

        def rank_fn(mask: int, _kept=kept, _amask=amask, _ra=ra, _parent=self) -> int:
            full = _amask
            mm = mask
            j = 0
            while mm:
                if mm & 1:
                    full |= 1 << _kept[j]
                mm >>= 1
                j += 1
            return _parent.rank_mask(full) - _ra

        contracted = len(self.elements) - len(labels)
        return Matroid(labels, rank_fn, name=f"{self.name}/{contracted}el")

    def lattice(self) -> "FlatLattice":
        if self._lattice is None:
            if len(self.elements) > limits.LATTICE_ELEMENT_CAP:
                raise ValueError(
                    f"flat enumeration capped at |E| <= {limits.LATTICE_ELEMENT_CAP}, "
                    f"got |E|={len(self.elements)}")
            self._lattice = FlatLattice(self)
        return self._lattice


class FlatLattice:
    """The flats of a matroid ordered by containment.

    Flats are generated rank by rank: the rank-(r+1) flats are exactly the
    closures cl(F + x) for rank-r flats F and elements x outside F.  The
    Moebius function of the containment order is memoized per pair.
    """

    def __init__(self, matroid: Matroid):
        self.matroid = matroid
        by_rank: list[set[int]] = [{matroid.closure_mask(0)}]
        full = (1 << len(matroid.elements)) - 1
        for _ in range(matroid.full_rank):
            nxt: set[int] = set()
            for fmask in by_rank[-1]:
                rest = full & ~fmask
                i = 0
                mm = rest
                while mm:
                    if mm & 1:
                        nxt.add(matroid.closure_mask(fmask | (1 << i)))
                    mm >>= 1
                    i += 1
            by_rank.append(nxt)
        flats: list[int] = []
        ranks: list[int] = []
        for r, group in enumerate(by_rank):
            for fmask in sorted(group):
                flats.append(fmask)
                ranks.append(r)
        self.flats = tuple(flats)
        self.ranks = tuple(ranks)
        self._pos = {fmask: i for i, fmask in enumerate(flats)}
        self._mob: dict[tuple[int, int], int] = {}
        self._pprime: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.flats)

    def flat_sets(self) -> list[frozenset]:
        return [frozenset(self.matroid.elements_of(f)) for f in self.flats]

    def index_of(self, subset) -> int:
        mask = self.matroid.mask_of(subset)
        try:
            return self._pos[mask]
        except KeyError:
            raise ValueError(f"{set(subset)!r} is not a flat") from None

    def mobius_idx(self, i: int, j: int) -> int:
        """Moebius value between flats by index; 0 unless flats[i] <= flats[j]."""
        fi, fj = self.flats[i], self.flats[j]
        if fi & ~fj:
            return 0
        if i == j:
            return 1
        key = (i, j)
        cached = self._mob.get(key)
        if cached is not None:
            return cached
        total = 0
        for k in range(i, j):
            fk = self.flats[k]
            if not (fi & ~fk) and not (fk & ~fj):
                total += self.mobius_idx(i, k)
        value = -total
        self._mob[key] = value
        return value

    def mobius(self, lower, upper) -> int:
        """Moebius function mu(A, B) of the flat order (0 if A is not below B)."""
        return self.mobius_idx(self.index_of(lower), self.index_of(upper))

    def char_poly(self) -> "IntPolynomial":
        """Characteristic polynomial, for loopless matroids only."""
        matroid = self.matroid
        if not matroid.is_loopless:
            raise ValueError("characteristic polynomial requires a loopless matroid")
        r = matroid.full_rank
        coeffs = [0] * (r + 1)
        for j in range(len(self.flats)):
            coeffs[r - self.ranks[j]] += self.mobius_idx(0, j)
        return IntPolynomial.from_coeffs(coeffs)

    def deriv_at_1_from(self, i: int) -> int:
        """Derivative at 1 of the characteristic polynomial of M/flats[i],
        evaluated inside this lattice: sum over flats B >= A of
        mu(A, B) * (rank(E) - rank(B)).

        Equivalent to building the contraction and differentiating its own
        characteristic polynomial (the tests compare both routes); staying
        in the parent lattice avoids re-enumerating flats per contraction.
        """
        r = self.matroid.full_rank
        fi = self.flats[i]
        total = 0
        for j in range(i, len(self.flats)):
            if not (fi & ~self.flats[j]):
                mu = self.mobius_idx(i, j)
                if mu:
                    total += mu * (r - self.ranks[j])
        return total

    def deriv_at_1_all(self) -> tuple[int, ...]:
        if self._pprime is None:
            self._pprime = tuple(
                self.deriv_at_1_from(i) for i in range(len(self.flats)))
        return self._pprime


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree order."""

    coeffs: tuple[int, ...]

    @classmethod
    def from_coeffs(cls, coeffs) -> "IntPolynomial":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial.from_coeffs(
            [i * c for i, c in enumerate(self.coeffs)][1:])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}x" if i == 1 else f"{mag}x^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# constructors

def uniform(k: int, n: int) -> Matroid:
    """Uniform matroid U_{k,n} on ground set 0..n-1."""
    if not 0 <= k <= n:
        raise ValueError(f"uniform needs 0 <= k <= n, got k={k}, n={n}")
    return Matroid(range(n), lambda mask: min(mask.bit_count(), k),
                   name=f"U({k},{n})")


def graphic(graph: Graph) -> Matroid:
    """Graphic matroid of a graph; elements are the edge tuples and the
    rank of an edge set is n minus its number of components."""
    edges = graph.edges
    n = graph.n
    ends = [(u - 1, v - 1) for u, v in edges]

    def rank_fn(mask: int) -> int:
        uf = UnionFind(n)
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                uf.union(*ends[i])
            mm >>= 1
            i += 1
        return n - uf.count

    return Matroid(edges, rank_fn, name=f"graphic(n={n},m={len(edges)})",
                   graph=graph)


def gf_rank(rows, p: int) -> int:
    """Rank over GF(p) of a list of equal-length integer vectors."""
    work = [[x % p for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [(x * inv) % p for x in work[rank]]
        for r in range(rank + 1, len(work)):
            f = work[r][col]
            if f:
                work[r] = [(a - f * b) % p for a, b in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def linear_gf(p: int, rows) -> Matroid:
    """Linear matroid of a matrix over GF(p); elements are column indices.

    ``rows`` is a rectangular list of integer rows; entries are reduced
    mod p.  Zero columns become loops.
    """
    if not _is_prime(p):
        raise ValueError(f"field order must be prime, got {p}")
    mat = [tuple(x % p for x in row) for row in rows]
    if not mat:
        raise ValueError("matrix needs at least one row")
    width = len(mat[0])
    if any(len(row) != width for row in mat):
        raise ValueError("matrix rows must all have the same length")
    if width == 0:
        raise ValueError("matrix needs at least one column")
    cols = [tuple(row[j] for row in mat) for j in range(width)]

    def rank_fn(mask: int) -> int:
        picked = [cols[i] for i in range(width) if (mask >> i) & 1]
        return gf_rank(picked, p)

    return Matroid(range(width), rank_fn,
                   name=f"gf({p})[{len(mat)}x{width}]")


class MatrixParseError(ValueError):
    """Raised for malformed matrix files; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_linear_text(text: str) -> Matroid:
    """Parse the matrix format: a header "p r m" (field order, rows,
    columns) followed by r lines of m integers, yielding the linear
    matroid of the columns over GF(p)."""
    lines = text.splitlines()
    pos = 0

    def next_content_line():
        nonlocal pos
        while pos < len(lines):
            pos += 1
            stripped = lines[pos - 1].strip()
            if stripped:
                return pos, stripped
        return pos, None

    lineno, header = next_content_line()
    if header is None:
        raise MatrixParseError(max(lineno, 1), "missing header line 'p r m'")
    parts = header.split()
    if len(parts) != 3:
        raise MatrixParseError(lineno, f"header must be 'p r m', got {header!r}")
    try:
        p, r, m = (int(x) for x in parts)
    except ValueError:
        raise MatrixParseError(lineno, f"header must be three integers, got {header!r}") from None
    if not _is_prime(p):
        raise MatrixParseError(lineno, f"field order must be prime, got {p}")
    if r < 1 or m < 1:
        raise MatrixParseError(lineno, f"need r >= 1 rows and m >= 1 columns, got r={r}, m={m}")
    rows = []
    for _ in range(r):
        lineno, line = next_content_line()
        if line is None:
            raise MatrixParseError(lineno, f"expected {r} matrix rows, found {len(rows)}")
        parts = line.split()
        if len(parts) != m:
            raise MatrixParseError(lineno, f"row must have {m} entries, got {len(parts)}")
        try:
            rows.append([int(x) for x in parts])
        except ValueError:
            raise MatrixParseError(lineno, f"matrix entries must be integers, got {line!r}") from None
    lineno, extra = next_content_line()
    if extra is not None:
        raise MatrixParseError(lineno, f"unexpected content after {r} rows: {extra!r}")
    return linear_gf(p, rows)


def load_linear(path_: str) -> Matroid:
    with open(path_, "r", encoding="utf-8") as fh:
        return parse_linear_text(fh.read())


# ---------------------------------------------------------------------------
# lattice identities

def enumerate_flats(matroid: Matroid) -> FlatLattice:
    return matroid.lattice()


def closure(matroid: Matroid, subset) -> frozenset:
    return matroid.closure(subset)


def contract(matroid: Matroid, flat_subset) -> Matroid:
    return matroid.contract(flat_subset)


def char_poly(matroid: Matroid) -> IntPolynomial:
    return matroid.lattice().char_poly()


def char_poly_deriv_at_1(matroid: Matroid) -> int:
    """p'(1) for the characteristic polynomial of the matroid."""
    return char_poly(matroid).derivative().evaluate(1)


def beta_invariant(matroid: Matroid) -> int:
    """Crapo beta invariant (-1)^(r-1) p'(1); nonnegative, and positive
    exactly when the matroid is connected (for |E| >= 2)."""
    r = matroid.full_rank
    return (-1) ** (r - 1) * char_poly_deriv_at_1(matroid)


def _require_loopless(matroid: Matroid, what: str):
    if not matroid.is_loopless:
        loops = sorted(map(repr, matroid.loops()))
        raise ValueError(f"{what} requires a loopless matroid; loops: {loops}")


def prop_mu_intermediate(matroid: Matroid) -> int:
    """Double Moebius sum over flat pairs A <= B of
    mu(A, B) * (|E| - |A|) * (r(E) - r(B)); evaluates to |E| for loopless
    matroids of positive rank."""
    _require_loopless(matroid, "prop_mu_intermediate")
    lat = matroid.lattice()
    r = matroid.full_rank
    m = len(matroid)
    total = 0
    for i, fi in enumerate(lat.flats):
        weight_a = m - fi.bit_count()
        if weight_a == 0:
            continue
        for j in range(i, len(lat.flats)):
            if not (fi & ~lat.flats[j]):
                mu = lat.mobius_idx(i, j)
                if mu:
                    total += mu * weight_a * (r - lat.ranks[j])
    return total


def prop_mu_contraction(matroid: Matroid, flat_subset) -> int:
    """Sum over flats A containing the given flat H of
    (|E| - |A|) * p'_{M/A}(1); evaluates to |E| - |H|."""
    lat = matroid.lattice()
    h = lat.index_of(flat_subset)
    fh = lat.flats[h]
    m = len(matroid)
    deriv = lat.deriv_at_1_all()
    total = 0
    for i, fi in enumerate(lat.flats):
        if not (fh & ~fi):
            total += (m - fi.bit_count()) * deriv[i]
    return total


def prop_mu_prank(matroid: Matroid) -> int:
    """Sum of p'_{M/A}(1) over all flats A; evaluates to r(E) for loopless
    matroids."""
    _require_loopless(matroid, "prop_mu_prank")
    return sum(matroid.lattice().deriv_at_1_all())


# ---------------------------------------------------------------------------
# stopping-time quantities

def _d_vector(matroid: Matroid, e) -> tuple[int, ...]:
    """d(e, t) for t = 0..|E|-1: subsets of E - e of size t whose closure
    misses e.  Definition-level subset scan, cached per element."""
    ei = matroid.index_of(e)
    cached = matroid._d_rows.get(ei)
    if cached is not None:
        return cached
    m = len(matroid)
    cap = limits.brute_force_cap()
    if m > cap:
        raise ValueError(
            f"d-vector scan needs |E| <= {cap} (2^|E| subsets), got |E|={m}")
    ebit = 1 << ei
    rank = matroid.rank_mask
    counts = [0] * m
    # iterate over subsets of the other elements by splicing the mask
    low = ebit - 1
    for sub in range(1 << (m - 1)):
        mask = (sub & low) | ((sub & ~low) << 1)
        if rank(mask | ebit) > rank(mask):
            counts[mask.bit_count()] += 1
    row = tuple(counts)
    matroid._d_rows[ei] = row
    return row


def d_matroid(matroid: Matroid, e, t: int) -> int:
    """Number of t-subsets of E - e spanning a closure that excludes e."""
    if not 0 <= t <= len(matroid) - 1:
        raise ValueError(f"t must be in [0, {len(matroid) - 1}], got {t}")
    return _d_vector(matroid, e)[t]


def lemma_flat_sum(matroid: Matroid, t: int) -> int:
    """Sum of d(e, t) over the ground set, via the flat lattice:

        sum_e d(e, t) = sum_{flats A} C(|A|, t) * (|E| - |A|) * p'_{M/A}(1)

    An independent route to the same totals as summing :func:`d_matroid`.
    """
    m = len(matroid)
    if not 0 <= t <= max(m - 1, 0):
        raise ValueError(f"t must be in [0, {max(m - 1, 0)}], got {t}")
    lat = matroid.lattice()
    deriv = lat.deriv_at_1_all()
    total = 0
    for i, fi in enumerate(lat.flats):
        a = fi.bit_count()
        term = binomial(a, t) * (m - a)
        if term:
            total += term * deriv[i]
    return total


def expected_stop_matroid(matroid: Matroid, e) -> Fraction:
    """Exact E[T_e]: insert the other elements in uniform random order and
    stop when the closure of the prefix captures e (|E| if it never does)."""
    m = len(matroid)
    row = _d_vector(matroid, e)
    return sum(
        (Fraction(row[t], binomial(m - 1, t)) for t in range(m)),
        start=Fraction(0),
    )


def theorem_avg_matroid(matroid: Matroid) -> Fraction:
    """Average of E[T_e] over the ground set; equals the rank of the
    matroid.  Loopless matroids with at least one element only."""
    m = len(matroid)
    if m == 0:
        raise ValueError("average stopping time needs a nonempty ground set")
    _require_loopless(matroid, "theorem_avg_matroid")
    total = Fraction(0)
    for e in matroid.elements:
        total += expected_stop_matroid(matroid, e)
    return total / m
