# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

from exactla import FieldDescriptor, FieldError, FieldMismatchError, DimensionMismatchError, Matrix, coerce_vector, nullspace
from utils import launch

EVEN = 0
ODD = 1


class SuperAlgebraError(ValueError):
    """
    Base class for errors raised by the algebra model
    """


class ConstraintError(SuperAlgebraError):
    """
    A structure constant table breaks one of the storage rules
    """

    def __init__(self, rule, message, witness=None):
        self.rule = rule
        self.witness = witness
        super().__init__("{}: {}".format(rule, message))


class GradingError(SuperAlgebraError):
    """
    A map has an entry its degree does not allow
    """


class HomogeneityError(SuperAlgebraError):
    """
    A vector is not supported on basis vectors of a single parity
    """


def sign(exponent):
    """
    (-1)^exponent
    """
    return -1 if exponent % 2 else 1


class SuperAlgebra:
    """
    Finite dimensional Lie superalgebra given by structure constants on a homogeneous basis

    constants maps (i, j, k) with i <= j (0-based) to the coefficient of e_k
    in [e_i, e_j]. The j < i half is derived from super skew-symmetry.
    """

    def __init__(self, name, field, parity, constants=None, check=True):
        self.name = str(name)
        self.field = field
        self.parity = tuple(int(b) for b in parity)
        self.dim = len(self.parity)
        if self.dim < 1:
            raise ConstraintError("dimension", "an algebra needs at least one basis vector")
        for index, b in enumerate(self.parity):
            if b not in (EVEN, ODD):
                raise ConstraintError("parity", "parity of e_{} is {}, expected 0 or 1".format(index + 1, b), (index,))

        n = self.dim
        self.constants = {}
        for key, value in (constants or {}).items():
            i, j, k = key
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise ConstraintError("range", "index ({}, {}, {}) outside 1..{}".format(i + 1, j + 1, k + 1, n), key)
            if i > j:
                raise ConstraintError("order", "c {} {} {} has j < i, only i <= j is stored".format(i + 1, j + 1, k + 1), key)
            value = field.element(value)
            if not value:
                continue
            if check:
                if self.parity[k] != (self.parity[i] + self.parity[j]) % 2:
                    raise ConstraintError("grading", "c {} {} {} is nonzero but parity of e_{} is not the sum of the parities of e_{} and e_{}".format(i + 1, j + 1, k + 1, k + 1, i + 1, j + 1), key)
                if i == j and self.parity[i] == EVEN:
                    raise ConstraintError("even_square", "c {} {} {} is nonzero but e_{} is even so [e_{}, e_{}] must vanish".format(i + 1, j + 1, k + 1, i + 1, i + 1, i + 1), key)
            self.constants[(i, j, k)] = value
        self._build_table()

    def _build_table(self):
        n = self.dim
        self.table = [[{} for _ in range(n)] for _ in range(n)]
        for (i, j, k), value in self.constants.items():
            self.table[i][j][k] = value
            if i != j:
                self.table[j][i][k] = -value * sign(self.parity[i] * self.parity[j])

    @property
    def even_dim(self):
        return self.parity.count(EVEN)

    @property
    def odd_dim(self):
        return self.parity.count(ODD)

    def is_abelian(self):
        return not self.constants

    def bracket_basis(self, i, j):
        """
        [e_i, e_j] as a sparse {k: coefficient} dictionary
        """
        return self.table[i][j]

    def basis_vector(self, i):
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def homogeneous_parity(self, vector):
        """
        Parity of a homogeneous vector, 0 for the zero vector and None when mixed
        """
        found = None
        for index, x in enumerate(vector):
            if x:
                if found is None:
                    found = self.parity[index]
                elif found != self.parity[index]:
                    return None
        return EVEN if found is None else found

    def denominators(self):
        """
        Denominators of the structure constants (all 1 for integer tables)
        """
        if not self.field.is_rational:
            return set()
        return set(value.denominator for value in self.constants.values())

    def reduce_mod(self, p):
        """
        The same structure constants read in F_p
        """
        target = FieldDescriptor.prime(p)
        if not self.field.is_rational:
            if self.field == target:
                return self
            raise FieldMismatchError("Can not reduce an algebra over {} modulo {}".format(self.field.name(), p))
        constants = {}
        for key, value in self.constants.items():
            try:
                constants[key] = target.element(value)
            except FieldError:
                raise ConstraintError("reduction", "c {} {} {} = {} has a denominator divisible by {}".format(key[0] + 1, key[1] + 1, key[2] + 1, value, p), key)
        return SuperAlgebra(self.name, target, self.parity, constants, check=False)

    def over_field(self, field):
        if field == self.field:
            return self
        return self.reduce_mod(field.characteristic)

    def __eq__(self, other):
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return self.name == other.name and self.field == other.field and self.parity == other.parity and self.constants == other.constants

    def __repr__(self):
        return "SuperAlgebra({}, {} over {})".format(self.name, self.dim, self.field.name())


def bracket_sparse(algebra, x, y):
    """
    Bracket of two sparse {index: coefficient} vectors
    """
    out = {}
    for i, xi in x.items():
        for j, yj in y.items():
            coeff = xi * yj
            for k, c in algebra.table[i][j].items():
                value = out.get(k, 0) + coeff * c
                if value:
                    out[k] = value
                elif k in out:
                    del out[k]
    return out


def to_sparse(vector):
    return {index: x for index, x in enumerate(vector) if x}


def to_dense(algebra, sparse):
    v = [algebra.field.zero] * algebra.dim
    for k, x in sparse.items():
        v[k] = algebra.field.element(x)
    return v


def bracket(algebra, x, y):
    """
    Bilinear extension of the structure constants
    """
    x = coerce_vector(algebra.field, x, algebra.dim)
    y = coerce_vector(algebra.field, y, algebra.dim)
    return to_dense(algebra, bracket_sparse(algebra, to_sparse(x), to_sparse(y)))


def matmul(field, a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    zero = field.zero
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        row = a[i]
        for l, x in enumerate(row):
            if not x:
                continue
            brow = b[l]
            for j in range(m):
                if brow[j]:
                    out[i][j] = out[i][j] + x * brow[j]
    return out


class GradedLinearMap:
    """
    Homogeneous linear map L -> L, column j of the matrix is the image of e_j
    """

    def __init__(self, algebra, matrix, degree, check=True):
        self.algebra = algebra
        self.field = algebra.field
        n = algebra.dim
        if not isinstance(matrix, Matrix):
            matrix = Matrix(self.field, matrix, n)
        if matrix.field != self.field:
            raise FieldMismatchError("Map over {} for an algebra over {}".format(matrix.field.name(), self.field.name()))
        if matrix.rows != n or matrix.cols != n:
            raise DimensionMismatchError("Map matrix is {}x{}, expected {}x{}".format(matrix.rows, matrix.cols, n, n))
        self.matrix = matrix
        self.degree = int(degree) % 2
        if check:
            parity = algebra.parity
            for k in range(n):
                for j in range(n):
                    if matrix[k, j] and parity[k] != (parity[j] + self.degree) % 2:
                        raise GradingError("Entry ({}, {}) of a degree {} map sends e_{} to the wrong parity".format(k + 1, j + 1, self.degree, j + 1))

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, Matrix.identity(algebra.field, algebra.dim), EVEN)

    @classmethod
    def zero(cls, algebra, degree=EVEN):
        return cls(algebra, Matrix.zero(algebra.field, algebra.dim, algebra.dim), degree)

    def entry(self, k, j):
        return self.matrix[k, j]

    def image(self, j):
        """
        f(e_j)
        """
        return self.matrix.column(j)

    def apply(self, vector):
        return self.matrix.apply(vector)

    def entries(self):
        return self.matrix.to_lists()

    def is_zero(self):
        return not any(any(row) for row in self.matrix.entries)

    def compose(self, other):
        """
        self after other, of degree |self| + |other|
        """
        product = matmul(self.field, self.matrix.entries, other.matrix.entries)
        return GradedLinearMap(self.algebra, product, self.degree + other.degree)

    def scale(self, scalar):
        scalar = self.field.element(scalar)
        return GradedLinearMap(self.algebra, [[scalar * x for x in row] for row in self.matrix.entries], self.degree, check=False)

    def __add__(self, other):
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise GradingError("Can not add maps of degree {} and {}".format(self.degree, other.degree))
        degree = other.degree if self.is_zero() else self.degree
        rows = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.matrix.entries, other.matrix.entries)]
        return GradedLinearMap(self.algebra, rows, degree)

    def __sub__(self, other):
        return self + other.scale(-1)

    def supercommutator(self, other):
        """
        [f, g] = f g - (-1)^(|f||g|) g f
        """
        fg = self.compose(other)
        gf = other.compose(self)
        return fg - gf.scale(sign(self.degree * other.degree))

    def scalar_value(self):
        """
        lambda when the map is lambda times the identity, else None
        """
        n = self.algebra.dim
        if self.is_zero():
            return self.field.zero
        if self.degree != EVEN:
            return None
        value = self.matrix[0, 0]
        for k in range(n):
            for j in range(n):
                expected = value if k == j else self.field.zero
                if self.matrix[k, j] != expected:
                    return None
        return value

    def kernel(self):
        return nullspace(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, GradedLinearMap):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.matrix == other.matrix

    def __repr__(self):
        return "GradedLinearMap(degree {}, {})".format(self.degree, [[str(x) for x in row] for row in self.matrix.entries])


class GradedBilinearMap:
    """
    Homogeneous bilinear map L x L -> L, t[(i, j, k)] is the coefficient of e_k in b(e_i, e_j)

    Only nonzero entries are stored.
    """

    def __init__(self, algebra, tensor, degree, check=True):
        self.algebra = algebra
        self.field = algebra.field
        self.degree = int(degree) % 2
        n = algebra.dim
        self.tensor = {}
        for (i, j, k), value in _tensor_items(tensor):
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise DimensionMismatchError("Tensor index ({}, {}, {}) outside 1..{}".format(i + 1, j + 1, k + 1, n))
            value = self.field.element(value)
            if not value:
                continue
            if check and algebra.parity[k] != (algebra.parity[i] + algebra.parity[j] + self.degree) % 2:
                raise GradingError("Entry ({}, {}, {}) of a degree {} bilinear map has the wrong parity".format(i + 1, j + 1, k + 1, self.degree))
            self.tensor[(i, j, k)] = value

    @classmethod
    def bracket_tensor(cls, algebra):
        return cls(algebra, dict(algebra_items(algebra)), EVEN)

    @classmethod
    def zero(cls, algebra, degree=EVEN):
        return cls(algebra, {}, degree)

    def entry(self, i, j, k):
        return self.tensor.get((i, j, k), self.field.zero)

    def apply_basis(self, i, j):
        """
        b(e_i, e_j) as a dense vector
        """
        v = [self.field.zero] * self.algebra.dim
        for k in range(self.algebra.dim):
            value = self.tensor.get((i, j, k))
            if value:
                v[k] = value
        return v

    def evaluate(self, x, y):
        n = self.algebra.dim
        x = coerce_vector(self.field, x, n)
        y = coerce_vector(self.field, y, n)
        out = [self.field.zero] * n
        for (i, j, k), value in self.tensor.items():
            if x[i] and y[j]:
                out[k] = out[k] + x[i] * y[j] * value
        return out

    def is_zero(self):
        return not self.tensor

    def scale(self, scalar):
        scalar = self.field.element(scalar)
        return GradedBilinearMap(self.algebra, {key: value * scalar for key, value in self.tensor.items()}, self.degree, check=False)

    def __add__(self, other):
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise GradingError("Can not add bilinear maps of degree {} and {}".format(self.degree, other.degree))
        degree = other.degree if self.is_zero() else self.degree
        total = dict(self.tensor)
        for key, value in other.tensor.items():
            total[key] = total.get(key, self.field.zero) + value
        return GradedBilinearMap(self.algebra, total, degree)

    def __sub__(self, other):
        return self + other.scale(-1)

    def flip(self):
        """
        (x, y) -> -(-1)^(|x||y|) b(y, x), equal to b itself when b is skew-supersymmetric
        """
        parity = self.algebra.parity
        flipped = {}
        for (i, j, k), value in self.tensor.items():
            flipped[(j, i, k)] = -value * sign(parity[i] * parity[j])
        return GradedBilinearMap(self.algebra, flipped, self.degree, check=False)

    def __eq__(self, other):
        if not isinstance(other, GradedBilinearMap):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.tensor == other.tensor

    def __repr__(self):
        return "GradedBilinearMap(degree {}, {} nonzero entries)".format(self.degree, len(self.tensor))


def algebra_items(algebra):
    """
    Every nonzero (i, j, k) entry of the bracket, including the derived j < i half
    """
    n = algebra.dim
    for i in range(n):
        for j in range(n):
            for k, value in algebra.table[i][j].items():
                yield (i, j, k), value


def _tensor_items(tensor):
    if isinstance(tensor, dict):
        return list(tensor.items())
    items = []
    for i, plane in enumerate(tensor):
        for j, row in enumerate(plane):
            for k, value in enumerate(row):
                items.append(((i, j, k), value))
    return items


def ad(algebra, x):
    """
    Adjoint operator y -> [x, y] of a homogeneous vector
    """
    x = coerce_vector(algebra.field, x, algebra.dim)
    degree = algebra.homogeneous_parity(x)
    if degree is None:
        raise HomogeneityError("ad needs a homogeneous vector, got one with both even and odd components")
    n = algebra.dim
    rows = [[algebra.field.zero] * n for _ in range(n)]
    xs = to_sparse(x)
    for j in range(n):
        for k, value in bracket_sparse(algebra, xs, {j: algebra.field.one}).items():
            rows[k][j] = value
    return GradedLinearMap(algebra, rows, degree)


def homogeneous_components(algebra, tensor):
    """
    Split a raw coefficient tensor into its even and odd parts

    Returns (even map, odd map, residue) where residue holds the entries no
    degree can carry (indices outside the n x n x n box).
    """
    n = algebra.dim
    parity = algebra.parity
    parts = [{}, {}]
    residue = {}
    for (i, j, k), value in _tensor_items(tensor):
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            if value:
                residue[(i, j, k)] = value
            continue
        degree = (parity[k] - parity[i] - parity[j]) % 2
        parts[degree][(i, j, k)] = value
    return GradedBilinearMap(algebra, parts[EVEN], EVEN), GradedBilinearMap(algebra, parts[ODD], ODD), residue


class Violation:
    """
    One failed axiom with its witness triple (0-based)
    """

    def __init__(self, kind, witness, detail):
        self.kind = kind
        self.witness = tuple(witness)
        self.detail = detail

    def line(self):
        return "{} {} {}".format(self.kind, " ".join(str(i + 1) for i in self.witness), self.detail)

    def __repr__(self):
        return "Violation({})".format(self.line())


VIOLATION_ORDER = {"grading": 0, "even_square": 1, "jacobi": 2}


class ValidationReport:
    """
    Every violation of the superalgebra axioms, sorted by witness triple
    """

    def __init__(self, name, violations):
        self.name = name
        self.violations = sorted(violations, key=lambda v: (v.witness, VIOLATION_ORDER.get(v.kind, 3)))

    @property
    def is_valid(self):
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def lines(self):
        return [violation.line() for violation in self.violations]


def _format_sparse(algebra, vector):
    parts = []
    for k in sorted(vector):
        parts.append("{}*e{}".format(algebra.field.format(vector[k]), k + 1))
    return " + ".join(parts) if parts else "0"


def jacobi_violations_block(algebra, i):
    """
    Super Jacobi identity in ad-derivation form for all triples with first index i

    [e_i,[e_j,e_k]] = [[e_i,e_j],e_k] + (-1)^(p_i p_j)[e_j,[e_i,e_k]]
    """
    n = algebra.dim
    parity = algebra.parity
    one = algebra.field.one
    violations = []
    ei = {i: one}
    for j in range(n):
        ej = {j: one}
        eij = bracket_sparse(algebra, ei, ej)
        s = sign(parity[i] * parity[j])
        for k in range(n):
            ek = {k: one}
            lhs = bracket_sparse(algebra, ei, bracket_sparse(algebra, ej, ek))
            first = bracket_sparse(algebra, eij, ek)
            second = bracket_sparse(algebra, ej, bracket_sparse(algebra, ei, ek))
            diff = dict(lhs)
            for key, value in first.items():
                diff[key] = diff.get(key, 0) - value
            for key, value in second.items():
                diff[key] = diff.get(key, 0) - s * value
            diff = {key: value for key, value in diff.items() if value}
            if diff:
                violations.append(Violation("jacobi", (i, j, k), "jacobiator {}".format(_format_sparse(algebra, diff))))
    return violations


def wrapped_jacobi_block(algebra, i):
    return jacobi_violations_block(algebra, i)


def validate(algebra, pool=None):
    """
    Check grading, vanishing even squares and the super Jacobi identity
    """
    parity = algebra.parity
    violations = []
    for (i, j, k), value in algebra.constants.items():
        if parity[k] != (parity[i] + parity[j]) % 2:
            violations.append(Violation("grading", (i, j, k), "c = {} but parity {} + {} != {}".format(algebra.field.format(value), parity[i], parity[j], parity[k])))
        if i == j and parity[i] == EVEN:
            violations.append(Violation("even_square", (i, j, k), "c = {} on an even square".format(algebra.field.format(value))))
    handles = [launch(pool, wrapped_jacobi_block, (algebra, i)) for i in range(algebra.dim)]
    for han in handles:
        violations.extend(han.get())
    return ValidationReport(algebra.name, violations)
