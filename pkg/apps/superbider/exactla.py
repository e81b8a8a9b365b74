# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import re

import numpy as np

# Residues are multiplied inside int64 arrays, so p * p must stay below 2^63
MAX_PRIME = 2**31 - 1


class FieldError(ValueError):
    """
    Raised for fields outside the supported set (Q and F_p with p an odd prime)
    """


class FieldMismatchError(ValueError):
    """
    Raised when values from two different fields meet
    """


class DimensionMismatchError(ValueError):
    """
    Raised when a vector or subspace lives in the wrong ambient space
    """


def is_prime(n):
    """
    Trial division primality test, fine for the small primes used here
    """
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Residue:
    """
    An element of the prime field F_p stored as a residue in [0, p)
    """

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise FieldMismatchError("Can not combine residues modulo {} and {}".format(self.p, other.p))
            return other.value
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, (int, np.integer)):
            return int(other) % self.p
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError("Denominator of {} vanishes modulo {}".format(other, self.p))
            return (other.numerator * pow(other.denominator, -1, self.p)) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("Division by zero in F {}".format(self.p))
        return Residue(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.value == 0:
            raise ZeroDivisionError("Division by zero in F {}".format(self.p))
        return Residue(o * pow(self.value, -1, self.p), self.p)

    def __pow__(self, exponent):
        if self.value == 0 and exponent < 0:
            raise ZeroDivisionError("Division by zero in F {}".format(self.p))
        return Residue(pow(self.value, exponent, self.p), self.p)

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return "Residue({}, {})".format(self.value, self.p)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class FieldDescriptor:
    """
    Names the ground field: characteristic 0 is Q, otherwise F_p for an odd prime p
    """

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p == 0:
            return
        if p == 2:
            raise FieldError("Characteristic 2 is not allowed, the field must have characteristic different from 2")
        if p < 0 or not is_prime(p):
            raise FieldError("F {} is not a prime field".format(p))
        if p > MAX_PRIME:
            raise FieldError("Prime {} is larger than the supported maximum {}".format(p, MAX_PRIME))

    @classmethod
    def rationals(cls):
        return cls(0)

    @classmethod
    def prime(cls, p):
        return cls(int(p))

    @classmethod
    def parse(cls, token):
        """
        Parse Q, F5, F_5 or 'F 5'
        """
        text = str(token).strip()
        if text.upper() == "Q":
            return cls.rationals()
        res = re.fullmatch(r"[Ff][\s_]*([0-9]+)", text)
        if not res:
            raise FieldError("Unknown field '{}', expected Q or F<p>".format(text))
        return cls.prime(int(res.group(1)))

    @property
    def is_rational(self):
        return self.characteristic == 0

    @property
    def p(self):
        return self.characteristic

    def name(self):
        """
        Canonical text form used in files and reports
        """
        if self.is_rational:
            return "Q"
        return "F {}".format(self.characteristic)

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def element(self, value):
        """
        Convert an int, Fraction, 'a/b' string or residue into a scalar of this field
        """
        if self.is_rational:
            if isinstance(value, Residue):
                raise FieldMismatchError("Residue modulo {} is not a rational".format(value.p))
            if isinstance(value, Fraction):
                return value
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Residue):
            if value.p != p:
                raise FieldMismatchError("Residue modulo {} used in F {}".format(value.p, p))
            return value
        if isinstance(value, (int, np.integer)):
            return Residue(int(value), p)
        value = Fraction(value)
        if value.denominator % p == 0:
            raise FieldError("Value {} has a denominator divisible by {}".format(value, p))
        return Residue(value.numerator * pow(value.denominator, -1, p), p)

    def raw(self, value):
        """
        Internal representation used by the eliminators: Fraction for Q, int residue for F_p
        """
        if self.is_rational:
            return self.element(value)
        return self.element(value).value

    def from_raw(self, value):
        if self.is_rational:
            return value if isinstance(value, Fraction) else Fraction(value)
        return Residue(int(value), self.characteristic)

    def format(self, value):
        """
        Canonical text for a scalar: integer or a/b for Q, residue in [0, p) for F_p
        """
        value = self.element(value)
        if self.is_rational and value.denominator != 1:
            return "{}/{}".format(value.numerator, value.denominator)
        if self.is_rational:
            return str(value.numerator)
        return str(value.value)


def _content_divided(ints):
    """
    Divide an integer row by the gcd of its entries
    """
    g = 0
    for v in ints:
        if v:
            g = gcd(g, v)
            if g == 1:
                return ints
    if g > 1:
        return [v // g for v in ints]
    return ints


def _primitive(row):
    """
    Scale a rational row to a primitive integer row spanning the same line
    """
    den = 1
    for x in row:
        if x:
            d = Fraction(x).denominator
            den = den * d // gcd(den, d)
    ints = []
    for x in row:
        x = Fraction(x)
        ints.append(x.numerator * (den // x.denominator))
    return _content_divided(ints)


def _leading(row, start=0):
    for c in range(start, len(row)):
        if row[c]:
            return c
    return None


def _rref_rational(rows, cols):
    """
    Fraction-free Gauss-Jordan elimination over Q

    Rows are kept as primitive integer vectors, cross multiplied to clear a
    column and divided by their content; division by the pivot is deferred
    to the final normalization. Returns (rows as Fractions, pivot columns).
    """
    a = [_primitive(row) for row in rows]
    a = [row for row in a if any(row)]
    pivots = []
    r = 0
    for c in range(cols):
        if r >= len(a):
            break
        found = None
        for i in range(r, len(a)):
            if a[i][c]:
                found = i
                break
        if found is None:
            continue
        a[r], a[found] = a[found], a[r]
        prow = a[r]
        pv = prow[c]
        for i in range(len(a)):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if not f:
                continue
            a[i] = _content_divided([pv * x - f * y for x, y in zip(row, prow)])
        pivots.append(c)
        r += 1
    result = []
    for i, c in enumerate(pivots):
        pv = a[i][c]
        result.append([Fraction(x, pv) for x in a[i]])
    return result, pivots


def _rref_prime(rows, cols, p):
    """
    Gauss-Jordan elimination modulo p on an int64 array

    Only rows with a nonzero entry in the pivot column are touched.
    Returns (array of the nonzero rref rows, pivot columns).
    """
    a = np.array(rows, dtype=np.int64).reshape(-1, cols) % p
    if a.shape[0]:
        a = a[np.any(a != 0, axis=1)]
    nrows = a.shape[0]
    pivots = []
    r = 0
    for c in range(cols):
        if r >= nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def reduce_raw(field, rows, cols):
    """
    Reduced row echelon form of raw rows (see FieldDescriptor.raw)

    Returns (rows, pivots) where rows is a list of Fraction lists over Q
    and an int64 array over F_p.
    """
    if field.is_rational:
        if cols == 0:
            return [], []
        return _rref_rational(rows, cols)
    if len(rows) == 0 or cols == 0:
        return np.zeros((0, cols), dtype=np.int64), []
    return _rref_prime(rows, cols, field.characteristic)


def _raw_rows_to_scalars(field, rows):
    if field.is_rational:
        return [tuple(row) for row in rows]
    p = field.characteristic
    return [tuple(Residue(int(x), p) for x in row) for row in rows]


class Matrix:
    """
    Dense matrix of exact scalars over one field
    """

    def __init__(self, field, rows, cols=None):
        self.field = field
        self.entries = [tuple(field.element(x) for x in row) for row in rows]
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != cols:
                raise DimensionMismatchError("Matrix row has {} entries, expected {}".format(len(row), cols))
        self.cols = cols

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, [[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def rows(self):
        return len(self.entries)

    def __getitem__(self, index):
        r, c = index
        return self.entries[r][c]

    def row(self, r):
        return list(self.entries[r])

    def column(self, c):
        return [row[c] for row in self.entries]

    def to_lists(self):
        return [list(row) for row in self.entries]

    def apply(self, vector):
        """
        Matrix times column vector
        """
        vector = coerce_vector(self.field, vector, self.cols)
        zero = self.field.zero
        out = []
        for row in self.entries:
            total = zero
            for x, y in zip(row, vector):
                if x and y:
                    total = total + x * y
            out.append(total)
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.cols == other.cols and self.entries == other.entries

    def __repr__(self):
        return "Matrix({}x{} over {})".format(self.rows, self.cols, self.field.name())


def coerce_vector(field, vector, length):
    """
    Convert a vector to field scalars, checking its length
    """
    if len(vector) != length:
        raise DimensionMismatchError("Vector has length {}, expected {}".format(len(vector), length))
    return [field.element(x) for x in vector]


@dataclass(frozen=True)
class Subspace:
    """
    Subspace held by its canonical (reduced row echelon) basis
    """

    field: FieldDescriptor
    ambient_dim: int
    basis: tuple = ()

    @property
    def dim(self):
        return len(self.basis)

    def vectors(self):
        return [list(v) for v in self.basis]

    def pivots(self):
        pivots = []
        for v in self.basis:
            for c, x in enumerate(v):
                if x:
                    pivots.append(c)
                    break
        return pivots

    def contains(self, vector):
        return membership(self, vector)

    def is_subspace_of(self, other):
        _check_compatible(self, other)
        return all(membership(other, v) for v in self.basis)

    def is_zero(self):
        return not self.basis

    def is_full(self):
        return self.dim == self.ambient_dim


def zero_subspace(field, ambient_dim):
    return Subspace(field, ambient_dim, ())


def full_space(field, ambient_dim):
    return Subspace(field, ambient_dim, tuple(tuple(field.one if i == j else field.zero for j in range(ambient_dim)) for i in range(ambient_dim)))


def _check_compatible(a, b):
    if a.field != b.field:
        raise FieldMismatchError("Subspaces over {} and {}".format(a.field.name(), b.field.name()))
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError("Subspaces of ambient dimension {} and {}".format(a.ambient_dim, b.ambient_dim))


def rref(m):
    """
    Unique reduced row echelon form of m padded with zero rows, and its rank
    """
    field = m.field
    raw = [[field.raw(x) for x in row] for row in m.entries]
    rows, pivots = reduce_raw(field, raw, m.cols)
    out = _raw_rows_to_scalars(field, rows)
    rank = len(pivots)
    out.extend([tuple([field.zero] * m.cols) for _ in range(m.rows - rank)])
    return Matrix(field, out, m.cols), rank


def span(field, ambient_dim, vectors):
    """
    Canonical subspace spanned by a list of vectors
    """
    raw = [[field.raw(x) for x in coerce_vector(field, v, ambient_dim)] for v in vectors]
    rows, pivots = reduce_raw(field, raw, ambient_dim)
    return Subspace(field, ambient_dim, tuple(_raw_rows_to_scalars(field, rows)))


def _nullspace_from_rref(field, rows, pivots, cols):
    """
    Nullspace of a system already in reduced row echelon form
    """
    pivot_set = set(pivots)
    vectors = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [field.zero] * cols
        v[f] = field.one
        for r, c in enumerate(pivots):
            entry = field.from_raw(rows[r][f])
            if entry:
                v[c] = -entry
        vectors.append(v)
    return span(field, cols, vectors)


def nullspace(m):
    """
    Canonical basis of {v : m v = 0}
    """
    field = m.field
    raw = [[field.raw(x) for x in row] for row in m.entries]
    rows, pivots = reduce_raw(field, raw, m.cols)
    return _nullspace_from_rref(field, rows, pivots, m.cols)


def membership(s, vector):
    """
    Decide whether vector lies in the span of s, exactly
    """
    v = coerce_vector(s.field, vector, s.ambient_dim)
    for basis_vector, c in zip(s.basis, s.pivots()):
        f = v[c]
        if f:
            v = [x - f * y for x, y in zip(v, basis_vector)]
    return not any(v)


def subspace_sum(a, b):
    """
    Canonical basis of span(a union b)
    """
    _check_compatible(a, b)
    return span(a.field, a.ambient_dim, list(a.basis) + list(b.basis))


def solve(m, rhs):
    """
    One solution of m x = rhs with free variables set to zero, or None when inconsistent
    """
    field = m.field
    rhs = coerce_vector(field, rhs, m.rows)
    raw = [[field.raw(x) for x in row] + [field.raw(b)] for row, b in zip(m.entries, rhs)]
    rows, pivots = reduce_raw(field, raw, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [field.zero] * m.cols
    for r, c in enumerate(pivots):
        x[c] = field.from_raw(rows[r][m.cols])
    return x


def coordinates(field, vectors, target):
    """
    Coefficients expressing target in the span of linearly independent vectors, or None
    """
    if not vectors:
        return [] if not any(field.element(x) for x in target) else None
    n = len(target)
    m = Matrix(field, [[vectors[j][i] for j in range(len(vectors))] for i in range(n)], len(vectors))
    return solve(m, target)


class RowReducer:
    """
    Incremental elimination of a linear system fed in blocks of equations

    Over Q the echelon basis is a set of primitive integer rows keyed by their
    leading column, each new row is cross multiplied down against it and the
    reduced form is only produced on request. Over F_p the basis is kept in
    reduced form as an int64 array and every block is merged in.
    """

    def __init__(self, field, cols):
        self.field = field
        self.cols = cols
        self.echelon = {}
        self.pivots = []
        self.basis = np.zeros((0, cols), dtype=np.int64)

    @property
    def rank(self):
        if self.field.is_rational:
            return len(self.echelon)
        return len(self.pivots)

    def add_sparse_rows(self, rows):
        """
        Add equations given as {column: scalar} dictionaries
        """
        rows = [row for row in rows if row]
        if not rows:
            return
        field = self.field
        if field.is_rational:
            for row in rows:
                dense = [0] * self.cols
                for c, value in row.items():
                    dense[c] = field.element(value)
                self._insert_rational(dense)
            return
        block = np.zeros((len(rows), self.cols), dtype=np.int64)
        for r, row in enumerate(rows):
            for c, value in row.items():
                block[r, c] = field.raw(value)
        self._merge_prime(block)

    def add_raw_block(self, block):
        """
        Add equations already in raw form (int residues over F_p, Fractions over Q)
        """
        if self.field.is_rational:
            for row in block:
                self._insert_rational(list(row))
            return
        block = np.asarray(block, dtype=np.int64).reshape(-1, self.cols)
        self._merge_prime(block)

    def add_rows(self, rows):
        """
        Add dense equations
        """
        sparse = []
        for row in rows:
            row = coerce_vector(self.field, row, self.cols)
            sparse.append({c: x for c, x in enumerate(row) if x})
        self.add_sparse_rows(sparse)

    def _insert_rational(self, row):
        row = _primitive(row)
        lead = _leading(row)
        while lead is not None:
            base = self.echelon.get(lead)
            if base is None:
                if row[lead] < 0:
                    row = [-v for v in row]
                self.echelon[lead] = row
                return
            a = base[lead]
            b = row[lead]
            row = _content_divided([a * x - b * y for x, y in zip(row, base)])
            lead = _leading(row, lead + 1)

    def _reduced_rational(self):
        """
        Reduced rows as {pivot: Fraction list} by back substitution from the highest pivot
        """
        reduced = {}
        for c in sorted(self.echelon, reverse=True):
            row = self.echelon[c]
            out = [Fraction(v, row[c]) for v in row]
            for col in sorted(reduced):
                f = out[col]
                if f:
                    out = [x - f * y for x, y in zip(out, reduced[col])]
            reduced[c] = out
        return reduced

    def _merge_prime(self, block):
        p = self.field.characteristic
        block = block % p
        if self.pivots:
            block = (block - _matmul_mod(block[:, self.pivots], self.basis, p)) % p
        block = block[np.any(block != 0, axis=1)]
        if block.shape[0] == 0:
            return
        new_rows, new_pivots = _rref_prime(block, self.cols, p)
        if not new_pivots:
            return
        basis = self.basis
        if basis.shape[0]:
            basis = (basis - _matmul_mod(basis[:, new_pivots], new_rows, p)) % p
        stacked = np.vstack([basis, new_rows])
        pivots = self.pivots + list(new_pivots)
        order = np.argsort(pivots, kind="stable")
        self.basis = stacked[order]
        self.pivots = [pivots[i] for i in order]

    def rows(self):
        """
        Reduced row echelon rows of everything added so far
        """
        if self.field.is_rational:
            reduced = self._reduced_rational()
            return [reduced[c] for c in sorted(reduced)]
        return [list(row) for row in _raw_rows_to_scalars(self.field, self.basis)]

    def nullspace(self):
        field = self.field
        if not field.is_rational:
            return _nullspace_from_rref(field, self.basis, self.pivots, self.cols)
        reduced = self._reduced_rational()
        vectors = []
        for f in range(self.cols):
            if f in reduced:
                continue
            v = [field.zero] * self.cols
            v[f] = field.one
            for c, row in reduced.items():
                if row[f]:
                    v[c] = -row[f]
            vectors.append(v)
        return span(field, self.cols, vectors)


def _matmul_mod(a, b, p):
    """
    a @ b modulo p without int64 overflow
    """
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, (2**63 - 1) // ((p - 1) * (p - 1) + 1) - 1)
    if inner <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for start in range(0, inner, step):
        out = (out + (a[:, start : start + step] @ b[start : start + step]) % p) % p
    return out
