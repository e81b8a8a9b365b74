# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

from exactla import Matrix, RowReducer, solve, span, DimensionMismatchError
from core import EVEN, SuperAlgebraError, GradingError, GradedLinearMap, GradedBilinearMap, ad, algebra_items, bracket_sparse, sign, to_sparse, validate
from structure import center, derived_subalgebra
from utils import launch

CENTROID = "centroid"
SUPERDERIVATION = "superderivation"
BIDERIVATION = "biderivation"
COMMUTING = "commuting"

KINDS = [CENTROID, SUPERDERIVATION, BIDERIVATION, COMMUTING]

# (kind, degree) pairs computed for a full analysis
SPACE_JOBS = [(CENTROID, 0), (CENTROID, 1), (SUPERDERIVATION, 0), (SUPERDERIVATION, 1), (BIDERIVATION, 0), (BIDERIVATION, 1), (COMMUTING, 0)]


class InvalidAlgebraError(SuperAlgebraError):
    """
    The structure constants do not define a Lie superalgebra
    """


class NotPerfectError(SuperAlgebraError):
    """
    Centroid factorization needs [A, A] = A
    """


class NoFactorizationError(SuperAlgebraError):
    """
    A biderivation is not of the form f([x, y]) with f in the centroid
    """


class NotCommutingError(SuperAlgebraError):
    """
    The map is not a linear super-commuting map
    """


def _check_degree(degree):
    if degree not in (0, 1):
        raise ValueError("Degree must be 0 or 1, got {}".format(degree))
    return degree


def map_coordinates(algebra, degree):
    """
    Grading compatible (k, j) matrix positions of a degree d map, lexicographic
    """
    n = algebra.dim
    parity = algebra.parity
    return [(k, j) for k in range(n) for j in range(n) if parity[k] == (parity[j] + degree) % 2]


def tensor_coordinates(algebra, degree):
    """
    Grading compatible (i, j, k) positions of a degree d bilinear map, lexicographic
    """
    n = algebra.dim
    parity = algebra.parity
    return [(i, j, k) for i in range(n) for j in range(n) for k in range(n) if parity[k] == (parity[i] + parity[j] + degree) % 2]


class InnerCertificate:
    """
    phi = lam * bracket, checked entry by entry
    """

    def __init__(self, lam):
        self.lam = lam

    def __repr__(self):
        return "InnerCertificate({})".format(self.lam)


class ScalarVerdict:
    """
    Whether every element of a map space is a multiple of the identity
    """

    def __init__(self, all_scalar, lam=None, witness=None):
        self.all_scalar = all_scalar
        self.lam = lam
        self.witness = witness

    def __repr__(self):
        return "ScalarVerdict(all_scalar={}, lambda={})".format(self.all_scalar, self.lam)


class MapSpace:
    """
    Solution space of one of the defining systems, over grading compatible coordinates
    """

    def __init__(self, algebra, kind, degree, space):
        self.algebra = algebra
        self.kind = kind
        self.degree = degree
        self.space = space
        if kind == BIDERIVATION:
            self.coordinates = tensor_coordinates(algebra, degree)
        else:
            self.coordinates = map_coordinates(algebra, degree)
        self.index = {c: pos for pos, c in enumerate(self.coordinates)}

    @property
    def dim(self):
        return self.space.dim

    @property
    def is_bilinear(self):
        return self.kind == BIDERIVATION

    def unflatten(self, vector):
        algebra = self.algebra
        if len(vector) != len(self.coordinates):
            raise DimensionMismatchError("Vector of length {} for {} coordinates".format(len(vector), len(self.coordinates)))
        if self.is_bilinear:
            return GradedBilinearMap(algebra, {c: x for c, x in zip(self.coordinates, vector) if x}, self.degree)
        n = algebra.dim
        rows = [[algebra.field.zero] * n for _ in range(n)]
        for (k, j), x in zip(self.coordinates, vector):
            rows[k][j] = x
        return GradedLinearMap(algebra, rows, self.degree)

    def flatten(self, element):
        """
        Coordinates of a map, GradingError when it has entries outside them
        """
        field = self.algebra.field
        vector = [field.zero] * len(self.coordinates)
        if self.is_bilinear:
            entries = element.tensor.items()
        else:
            entries = [((k, j), element.matrix[k, j]) for k in range(self.algebra.dim) for j in range(self.algebra.dim) if element.matrix[k, j]]
        for position, value in entries:
            pos = self.index.get(position)
            if pos is None:
                raise GradingError("Entry {} is not a coordinate of a degree {} {}".format(tuple(i + 1 for i in position), self.degree, self.kind))
            vector[pos] = value
        return vector

    def elements(self):
        return [self.unflatten(v) for v in self.space.basis]

    def contains(self, element):
        try:
            vector = self.flatten(element)
        except GradingError:
            return False
        return self.space.contains(vector)

    def __repr__(self):
        return "MapSpace({} degree {}, dim {})".format(self.kind, self.degree, self.dim)


def _add(row, col, value):
    if col is None or not value:
        return
    row[col] = row.get(col, 0) + value


def _clean(row):
    return {c: v for c, v in row.items() if v}


def _targets(algebra):
    """
    into[i][k] lists (m, c) with c the coefficient of e_k in [e_i, e_m]
    """
    n = algebra.dim
    into = [[[] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for m in range(n):
            for k, value in algebra.table[i][m].items():
                into[i][k].append((m, value))
    return into


def _sources(algebra):
    """
    left[j][k] lists (m, c) with c the coefficient of e_k in [e_m, e_j]
    """
    n = algebra.dim
    left = [[[] for _ in range(n)] for _ in range(n)]
    for m in range(n):
        for j in range(n):
            for k, value in algebra.table[m][j].items():
                left[j][k].append((m, value))
    return left


def centroid_rows(algebra, degree, i, index, into):
    """
    f([e_i,e_j]) - (-1)^(d p_i)[e_i, f(e_j)] = 0, one row per (j, k)
    """
    n = algebra.dim
    s = sign(degree * algebra.parity[i])
    rows = []
    for j in range(n):
        for k in range(n):
            row = {}
            for l, c in algebra.table[i][j].items():
                _add(row, index.get((k, l)), c)
            for m, c in into[i][k]:
                _add(row, index.get((m, j)), -s * c)
            rows.append(_clean(row))
    return rows


def superderivation_rows(algebra, degree, i, index, into, left):
    """
    D([e_i,e_j]) - [D(e_i),e_j] - (-1)^(d p_i)[e_i,D(e_j)] = 0
    """
    n = algebra.dim
    s = sign(degree * algebra.parity[i])
    rows = []
    for j in range(n):
        for k in range(n):
            row = {}
            for l, c in algebra.table[i][j].items():
                _add(row, index.get((k, l)), c)
            for m, c in left[j][k]:
                _add(row, index.get((m, i)), -c)
            for m, c in into[i][k]:
                _add(row, index.get((m, j)), -s * c)
            rows.append(_clean(row))
    return rows


def commuting_rows(algebra, i, index, into, left):
    """
    [f(e_i),e_j] - [e_i,f(e_j)] = 0
    """
    n = algebra.dim
    rows = []
    for j in range(n):
        for k in range(n):
            row = {}
            for m, c in left[j][k]:
                _add(row, index.get((m, i)), c)
            for m, c in into[i][k]:
                _add(row, index.get((m, j)), -c)
            rows.append(_clean(row))
    return rows


def _solve_map_system(algebra, kind, degree):
    coordinates = map_coordinates(algebra, degree)
    index = {c: pos for pos, c in enumerate(coordinates)}
    into = _targets(algebra)
    left = _sources(algebra)
    reducer = RowReducer(algebra.field, len(coordinates))
    for i in range(algebra.dim):
        if kind == CENTROID:
            rows = centroid_rows(algebra, degree, i, index, into)
        elif kind == SUPERDERIVATION:
            rows = superderivation_rows(algebra, degree, i, index, into, left)
        else:
            rows = commuting_rows(algebra, i, index, into, left)
        reducer.add_sparse_rows(rows)
    return MapSpace(algebra, kind, degree, reducer.nullspace())


def centroid_space(algebra, degree):
    """
    Degree d part of the centroid
    """
    return _solve_map_system(algebra, CENTROID, _check_degree(degree))


def superderivation_space(algebra, degree):
    return _solve_map_system(algebra, SUPERDERIVATION, _check_degree(degree))


def commuting_map_space(algebra):
    """
    Linear super-commuting maps, which are even
    """
    return _solve_map_system(algebra, COMMUTING, EVEN)


def leibniz_rows(algebra, degree, i, local, into, left):
    """
    phi(e_i,[e_j,e_k]) - [phi(e_i,e_j),e_k] - (-1)^((d+p_i)p_j)[e_j,phi(e_i,e_k)] = 0 for fixed i

    Only the unknowns phi(e_i, ., .) appear, indexed by local[(j, l)].
    """
    n = algebra.dim
    parity = algebra.parity
    rows = []
    for j in range(n):
        t = sign((degree + parity[i]) * parity[j])
        for k in range(n):
            for m in range(n):
                row = {}
                for l, c in algebra.table[j][k].items():
                    _add(row, local.get((l, m)), c)
                for l, c in left[k][m]:
                    _add(row, local.get((j, l)), -c)
                for l, c in into[j][m]:
                    _add(row, local.get((k, l)), -t * c)
                rows.append(_clean(row))
    return rows


def biderivation_space(algebra, degree):
    """
    Skew-supersymmetric super-biderivations of degree d

    The Leibniz rows with first index i only involve phi(e_i, ., .), so each
    block is solved on its own and the skew rows then glue the block
    solutions together.
    """
    degree = _check_degree(degree)
    field = algebra.field
    n = algebra.dim
    parity = algebra.parity
    into = _targets(algebra)
    left = _sources(algebra)

    blocks = []
    for i in range(n):
        local_coordinates = [(j, k) for j in range(n) for k in range(n) if parity[k] == (parity[i] + parity[j] + degree) % 2]
        local = {c: pos for pos, c in enumerate(local_coordinates)}
        reducer = RowReducer(field, len(local_coordinates))
        reducer.add_sparse_rows(leibniz_rows(algebra, degree, i, local, into, left))
        blocks.append((local, reducer.nullspace()))

    offsets = []
    total = 0
    for _, solutions in blocks:
        offsets.append(total)
        total += solutions.dim

    glue = RowReducer(field, total)
    for i in range(n):
        local_i, solutions_i = blocks[i]
        for j in range(i, n):
            local_j, solutions_j = blocks[j]
            s = sign(parity[i] * parity[j])
            for k in range(n):
                pos_i = local_i.get((j, k))
                if pos_i is None:
                    continue
                pos_j = local_j[(i, k)]
                row = {}
                for t, vector in enumerate(solutions_i.basis):
                    _add(row, offsets[i] + t, vector[pos_i])
                for t, vector in enumerate(solutions_j.basis):
                    _add(row, offsets[j] + t, s * vector[pos_j])
                glue.add_sparse_rows([_clean(row)])

    coordinates = tensor_coordinates(algebra, degree)
    index = {c: pos for pos, c in enumerate(coordinates)}
    vectors = []
    for params in glue.nullspace().basis:
        v = [field.zero] * len(coordinates)
        for i in range(n):
            local_i, solutions_i = blocks[i]
            for t, vector in enumerate(solutions_i.basis):
                a = params[offsets[i] + t]
                if not a:
                    continue
                for (j, k), pos in local_i.items():
                    if vector[pos]:
                        col = index[(i, j, k)]
                        v[col] = v[col] + a * vector[pos]
        vectors.append(v)
    return MapSpace(algebra, BIDERIVATION, degree, span(field, len(coordinates), vectors))


def compute_space(algebra, kind, degree):
    if kind == CENTROID:
        return centroid_space(algebra, degree)
    if kind == SUPERDERIVATION:
        return superderivation_space(algebra, degree)
    if kind == BIDERIVATION:
        return biderivation_space(algebra, degree)
    if kind == COMMUTING:
        if degree != EVEN:
            raise ValueError("Linear super-commuting maps are even")
        return commuting_map_space(algebra)
    raise ValueError("Unknown space kind {}".format(kind))


def wrapped_compute_space(algebra, kind, degree):
    return compute_space(algebra, kind, degree)


def require_valid(algebra, pool=None):
    report = validate(algebra, pool)
    if not report.is_valid:
        raise InvalidAlgebraError("{} is not a Lie superalgebra: {}".format(algebra.name, report.lines()[0]))


def compute_spaces(algebra, pool=None, check=True):
    """
    Every space of SPACE_JOBS, the jobs dispatched to the pool

    Returns {(kind, degree): MapSpace}.
    """
    if check:
        require_valid(algebra, pool)
    handles = [(job, launch(pool, wrapped_compute_space, (algebra, job[0], job[1]))) for job in SPACE_JOBS]
    return {job: han.get() for job, han in handles}


def inner_certificate(algebra, phi):
    """
    lam with phi = lam * bracket, or None

    lam is read from the first nonzero bracket entry and then checked on every entry.
    """
    field = algebra.field
    if phi.is_zero():
        return InnerCertificate(field.zero)
    brackets = dict(algebra_items(algebra))
    if not brackets:
        return None
    first = min(brackets)
    lam = phi.entry(*first) / brackets[first]
    for key in set(brackets) | set(phi.tensor):
        if phi.entry(*key) != lam * brackets.get(key, field.zero):
            return None
    return InnerCertificate(lam)


def centroid_factorization(algebra, phi):
    """
    The centroid element f with phi(x, y) = f([x, y])
    """
    n = algebra.dim
    field = algebra.field
    if not derived_subalgebra(algebra).is_full():
        raise NotPerfectError("{} is not perfect, [A, A] != A".format(algebra.name))
    degree = phi.degree
    coordinates = map_coordinates(algebra, degree)
    index = {c: pos for pos, c in enumerate(coordinates)}
    rows = []
    rhs = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = [field.zero] * len(coordinates)
                for l, c in algebra.table[i][j].items():
                    pos = index.get((k, l))
                    if pos is not None:
                        row[pos] = row[pos] + c
                rows.append(row)
                rhs.append(phi.entry(i, j, k))
    x = solve(Matrix(field, rows, len(coordinates)), rhs)
    if x is None:
        raise NoFactorizationError("No linear map f of degree {} with phi(x, y) = f([x, y])".format(degree))
    space = centroid_space(algebra, degree)
    f = space.unflatten(x)
    if not space.contains(f):
        raise NoFactorizationError("phi factors through a map that is not in the centroid")
    return f


def _dense(algebra, sparse):
    v = [algebra.field.zero] * algebra.dim
    for k, value in sparse.items():
        v[k] = value
    return v


def _column(f, j):
    return to_sparse(f.image(j))


def commuting_defects(algebra, f):
    """
    Pairs (i, j) where [f(e_i), e_j] != [e_i, f(e_j)]
    """
    n = algebra.dim
    one = algebra.field.one
    out = []
    for i in range(n):
        for j in range(n):
            lhs = bracket_sparse(algebra, _column(f, i), {j: one})
            rhs = bracket_sparse(algebra, {i: one}, _column(f, j))
            if _dense(algebra, lhs) != _dense(algebra, rhs):
                out.append((i, j))
    return out


def biderivation_from_commuting(algebra, f):
    """
    phi_f(x, y) = [f(x), y] for a linear super-commuting map f
    """
    if f.degree != EVEN and not f.is_zero():
        raise NotCommutingError("Linear super-commuting maps are even, got degree {}".format(f.degree))
    bad = commuting_defects(algebra, f)
    if bad:
        raise NotCommutingError("[f(e_{}), e_{}] != [e_{}, f(e_{})]".format(bad[0][0] + 1, bad[0][1] + 1, bad[0][0] + 1, bad[0][1] + 1))
    n = algebra.dim
    one = algebra.field.one
    tensor = {}
    for i in range(n):
        fi = _column(f, i)
        for j in range(n):
            for k, value in bracket_sparse(algebra, fi, {j: one}).items():
                tensor[(i, j, k)] = value
    phi = GradedBilinearMap(algebra, tensor, EVEN)
    failures = defects(algebra, BIDERIVATION, phi)
    if failures:
        raise SuperAlgebraError("phi_f fails {} at {}".format(failures[0][0], tuple(i + 1 for i in failures[0][1])))
    return phi


def scalar_certificate(algebra, space):
    """
    ScalarVerdict for a space of linear maps
    """
    if space.dim == 0:
        return ScalarVerdict(True)
    elements = space.elements()
    if space.dim == 1:
        lam = elements[0].scalar_value()
        if lam is not None:
            return ScalarVerdict(True, lam)
        return ScalarVerdict(False, witness=elements[0])
    for element in elements:
        if element.scalar_value() is None:
            return ScalarVerdict(False, witness=element)
    return ScalarVerdict(False, witness=elements[0])


def inner_superderivations(algebra, degree):
    """
    Span of ad(e_i) over basis vectors of parity d, in superderivation coordinates
    """
    degree = _check_degree(degree)
    coordinates = map_coordinates(algebra, degree)
    index = {c: pos for pos, c in enumerate(coordinates)}
    vectors = []
    for i in range(algebra.dim):
        if algebra.parity[i] != degree:
            continue
        f = ad(algebra, algebra.basis_vector(i))
        v = [algebra.field.zero] * len(coordinates)
        for (k, j), pos in index.items():
            v[pos] = f.matrix[k, j]
        vectors.append(v)
    return span(algebra.field, len(coordinates), vectors)


def outer_dimension(algebra, degree, space=None):
    """
    dim Der_d - dim ad(A_d)
    """
    if space is None:
        space = superderivation_space(algebra, degree)
    return space.dim - inner_superderivations(algebra, degree).dim


def commuting_scalar(algebra, f):
    """
    lam such that f - lam*Id maps A into the center, found through phi_f, or None
    """
    phi = biderivation_from_commuting(algebra, f)
    cert = inner_certificate(algebra, phi)
    if cert is None:
        return None
    difference = f - GradedLinearMap.identity(algebra).scale(cert.lam)
    z = center(algebra)
    for j in range(algebra.dim):
        if not z.contains(difference.image(j)):
            return None
    return cert.lam


def centroid_kernel(algebra, f):
    """
    Kernel of a centroid element, always an ideal
    """
    if f.algebra.dim != algebra.dim:
        raise DimensionMismatchError("Map on a {} dimensional algebra, expected {}".format(f.algebra.dim, algebra.dim))
    return f.kernel()


def defects(algebra, kind, element):
    """
    Direct substitution of element into the identity defining kind

    Returns a list of (identity, witness) pairs, empty when element satisfies it.
    """
    n = algebra.dim
    field = algebra.field
    parity = algebra.parity
    one = field.one
    d = element.degree
    out = []
    if kind == BIDERIVATION:
        phi = element
        if phi.flip() != phi:
            for i in range(n):
                for j in range(n):
                    a = phi.apply_basis(i, j)
                    b = phi.apply_basis(j, i)
                    s = sign(parity[i] * parity[j])
                    if any(x + s * y for x, y in zip(a, b)):
                        out.append(("skew", (i, j)))
        for i in range(n):
            for j in range(n):
                t = sign((d + parity[i]) * parity[j])
                phi_ij = to_sparse(phi.apply_basis(i, j))
                for k in range(n):
                    lhs = to_sparse(phi.evaluate(algebra.basis_vector(i), _dense(algebra, algebra.table[j][k])))
                    first = bracket_sparse(algebra, phi_ij, {k: one})
                    second = bracket_sparse(algebra, {j: one}, to_sparse(phi.apply_basis(i, k)))
                    diff = [lhs.get(m, 0) - first.get(m, 0) - t * second.get(m, 0) for m in range(n)]
                    if any(diff):
                        out.append(("leibniz", (i, j, k)))
        return out
    f = element
    for i in range(n):
        s = sign(d * parity[i])
        fi = _column(f, i)
        for j in range(n):
            fj = _column(f, j)
            eij = _dense(algebra, algebra.table[i][j])
            if kind == CENTROID:
                lhs = f.apply(eij)
                rhs = _dense(algebra, bracket_sparse(algebra, {i: one}, fj))
                diff = [x - s * y for x, y in zip(lhs, rhs)]
            elif kind == SUPERDERIVATION:
                lhs = f.apply(eij)
                first = _dense(algebra, bracket_sparse(algebra, fi, {j: one}))
                second = _dense(algebra, bracket_sparse(algebra, {i: one}, fj))
                diff = [x - y - s * z for x, y, z in zip(lhs, first, second)]
            else:
                first = _dense(algebra, bracket_sparse(algebra, fi, {j: one}))
                second = _dense(algebra, bracket_sparse(algebra, {i: one}, fj))
                diff = [x - y for x, y in zip(first, second)]
            if any(diff):
                out.append((kind, (i, j)))
    return out


def verify_space(algebra, space):
    """
    Substitute every basis element of a computed space back into its identity

    Returns a list of (basis index, identity, witness), empty on success.
    """
    failures = []
    for number, element in enumerate(space.elements()):
        for identity, witness in defects(algebra, space.kind, element):
            failures.append((number, identity, witness))
    return failures


def field_invariance(algebra, primes):
    """
    Compare every space dimension with the same computation modulo each prime

    Returns a list of (kind, degree, p, dim over the algebra's field, dim mod p).
    """
    base = {job: compute_space(algebra, job[0], job[1]).dim for job in SPACE_JOBS}
    mismatches = []
    for p in primes:
        reduced = algebra.reduce_mod(p)
        for job in SPACE_JOBS:
            dim = compute_space(reduced, job[0], job[1]).dim
            if dim != base[job]:
                mismatches.append((job[0], job[1], p, base[job], dim))
    return mismatches
