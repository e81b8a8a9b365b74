# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

import re

from exactla import FieldDescriptor, FieldMismatchError, coordinates
from core import EVEN, ODD, SuperAlgebra, matmul, sign

KNOWN_SIMPLE = ["yes", "no", "unknown"]


class CatalogError(ValueError):
    """
    Unknown or malformed catalog key
    """


class CatalogEntry:
    """
    One algebra of the test bed with what is known about it
    """

    def __init__(self, key, known_simple, expected_witness_dim=None, description="", budget_bound=False):
        self.key = key
        self.known_simple = known_simple
        self.expected_witness_dim = expected_witness_dim
        self.description = description
        # Reduction needs more lines than the default enumeration budget
        self.budget_bound = budget_bound

    def build(self, field=None):
        return lookup(self.key, field)

    def __repr__(self):
        return "CatalogEntry({}, {})".format(self.key, self.known_simple)


def _elementary(size, r, c):
    m = [[0] * size for _ in range(size)]
    m[r][c] = 1
    return m


def algebra_from_matrices(name, field, matrices, parities):
    """
    Structure constants of the span of homogeneous supermatrices under the supercommutator

    matrices must be linearly independent and closed under [X, Y] = XY - (-1)^(|X||Y|) YX.
    """
    if len(matrices) != len(parities):
        raise CatalogError("{} matrices but {} parities".format(len(matrices), len(parities)))
    mats = [[[field.element(x) for x in row] for row in m] for m in matrices]
    flat = [[x for row in m for x in row] for m in mats]
    constants = {}
    n = len(mats)
    for i in range(n):
        for j in range(i, n):
            xy = matmul(field, mats[i], mats[j])
            yx = matmul(field, mats[j], mats[i])
            s = sign(parities[i] * parities[j])
            commutator = [x - s * y for row_xy, row_yx in zip(xy, yx) for x, y in zip(row_xy, row_yx)]
            if not any(commutator):
                continue
            coeffs = coordinates(field, flat, commutator)
            if coeffs is None:
                raise CatalogError("{}: the bracket of basis elements {} and {} leaves the span".format(name, i + 1, j + 1))
            for k, value in enumerate(coeffs):
                if value:
                    constants[(i, j, k)] = value
    return SuperAlgebra(name, field, parities, constants)


def _gl_basis(m, n, diagonal):
    """
    Homogeneous basis of the (m|n) matrices: even first then odd, diagonal part before off-diagonal
    """
    size = m + n
    block = [EVEN if r < m else ODD for r in range(size)]
    even = list(diagonal)
    odd = []
    for r in range(size):
        for c in range(size):
            if r == c:
                continue
            if block[r] == block[c]:
                even.append(_elementary(size, r, c))
            else:
                odd.append(_elementary(size, r, c))
    return even + odd, [EVEN] * len(even) + [ODD] * len(odd)


def make_gl(m, n, field=None):
    field = field or FieldDescriptor.rationals()
    size = m + n
    if size < 1:
        raise CatalogError("gl({}|{}) is zero dimensional".format(m, n))
    diagonal = [_elementary(size, r, r) for r in range(size)]
    matrices, parities = _gl_basis(m, n, diagonal)
    return algebra_from_matrices("gl({}|{})".format(m, n), field, matrices, parities)


def make_sl(m, n, field=None):
    """
    Supertrace zero (m|n) matrices, h_a = E_aa - E_a+1,a+1 within a block and E_aa + E_a+1,a+1 across it
    """
    field = field or FieldDescriptor.rationals()
    size = m + n
    if size < 2:
        raise CatalogError("sl({}|{}) is zero dimensional".format(m, n))
    diagonal = []
    for a in range(size - 1):
        h = [[0] * size for _ in range(size)]
        h[a][a] = 1
        h[a + 1][a + 1] = 1 if a == m - 1 else -1
        diagonal.append(h)
    matrices, parities = _gl_basis(m, n, diagonal)
    name = "sl({})".format(m) if n == 0 else "sl({}|{})".format(m, n)
    return algebra_from_matrices(name, field, matrices, parities)


def make_osp_1_2(field=None):
    """
    osp(1|2) inside gl(1|2), index 0 is the even block
    """
    field = field or FieldDescriptor.rationals()
    h = [[0, 0, 0], [0, 1, 0], [0, 0, -1]]
    e = _elementary(3, 1, 2)
    f = _elementary(3, 2, 1)
    u = [[0, 0, 1], [1, 0, 0], [0, 0, 0]]
    v = [[0, 1, 0], [0, 0, 0], [-1, 0, 0]]
    return algebra_from_matrices("osp(1|2)", field, [h, e, f, u, v], [EVEN, EVEN, EVEN, ODD, ODD])


def make_heisenberg(q, field=None):
    """
    Central even z and odd u_1..u_q with [u_i, u_i] = z
    """
    field = field or FieldDescriptor.rationals()
    if q < 1:
        raise CatalogError("heis({}) needs at least one odd generator".format(q))
    constants = {(i, i, 0): 1 for i in range(1, q + 1)}
    return SuperAlgebra("heis({})".format(q), field, [EVEN] + [ODD] * q, constants)


def make_abelian(p, q, field=None):
    field = field or FieldDescriptor.rationals()
    if p + q < 1:
        raise CatalogError("abelian({},{}) is zero dimensional".format(p, q))
    return SuperAlgebra("abelian({},{})".format(p, q), field, [EVEN] * p + [ODD] * q, {})


def direct_sum(a, b):
    """
    A + B with zero cross brackets, the basis of A followed by the basis of B
    """
    if a.field != b.field:
        raise FieldMismatchError("Direct sum of algebras over {} and {}".format(a.field.name(), b.field.name()))
    shift = a.dim
    constants = dict(a.constants)
    for (i, j, k), value in b.constants.items():
        constants[(i + shift, j + shift, k + shift)] = value
    return SuperAlgebra("sum({},{})".format(a.name, b.name), a.field, a.parity + b.parity, constants)


def _split_args(text):
    """
    Split on top level commas
    """
    parts = []
    depth = 0
    current = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise CatalogError("Unbalanced parentheses in '{}'".format(text))
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    if depth != 0:
        raise CatalogError("Unbalanced parentheses in '{}'".format(text))
    parts.append(current)
    return [p.strip() for p in parts]


def _build(key):
    key = key.strip().replace(" ", "")
    res = re.fullmatch(r"([a-z]+)\((.*)\)", key)
    if not res:
        raise CatalogError("Unknown catalog key '{}'".format(key))
    kind, inner = res.group(1), res.group(2)
    if kind == "sum":
        args = _split_args(inner)
        if len(args) != 2:
            raise CatalogError("sum takes two keys, got '{}'".format(inner))
        return direct_sum(_build(args[0]), _build(args[1]))
    pair = re.fullmatch(r"([0-9]+)\|([0-9]+)", inner)
    comma = re.fullmatch(r"([0-9]+),([0-9]+)", inner)
    single = re.fullmatch(r"([0-9]+)", inner)
    if kind == "sl" and pair:
        return make_sl(int(pair.group(1)), int(pair.group(2)))
    if kind == "sl" and single:
        return make_sl(int(single.group(1)), 0)
    if kind == "gl" and pair:
        return make_gl(int(pair.group(1)), int(pair.group(2)))
    if kind == "gl" and single:
        return make_gl(int(single.group(1)), 0)
    if kind == "osp" and inner == "1|2":
        return make_osp_1_2()
    if kind == "heis" and single:
        return make_heisenberg(int(single.group(1)))
    if kind == "abelian" and comma:
        return make_abelian(int(comma.group(1)), int(comma.group(2)))
    raise CatalogError("Unknown catalog key '{}'".format(key))


def lookup(key, field=None):
    """
    Build a catalog algebra from its key, over Q or reduced to a prime field
    """
    algebra = _build(key)
    if field is not None and not field.is_rational:
        algebra = algebra.reduce_mod(field.characteristic)
    return algebra


def catalog_entries():
    """
    The fixed test bed
    """
    return [
        CatalogEntry("sl(2)", "yes", description="sl(2) = sl(2|0), h e f"),
        CatalogEntry("sl(3)", "yes", description="sl(3), dimension 8"),
        CatalogEntry("sl(2|1)", "yes", description="dimension 8, 4 even + 4 odd"),
        CatalogEntry("sl(3|1)", "yes", description="dimension 15, 9 even + 6 odd, 7174453 lines modulo 3", budget_bound=True),
        CatalogEntry("osp(1|2)", "yes", description="dimension 5, 3 even + 2 odd"),
        CatalogEntry("sl(1|1)", "no", 1, description="[e, f] = h, h central"),
        CatalogEntry("sl(2|2)", "no", 1, description="contains the identity as center"),
        CatalogEntry("gl(1|1)", "no", 1, description="center spanned by the identity"),
        CatalogEntry("heis(1)", "no", 1, description="z even, one odd generator"),
        CatalogEntry("heis(2)", "no", 1, description="z even, two odd generators"),
        CatalogEntry("abelian(1,1)", "no", 1, description="one even and one odd basis vector"),
        CatalogEntry("abelian(2,1)", "no", 1, description="two even and one odd basis vectors"),
        CatalogEntry("sum(sl(2),sl(2))", "no", 3, description="two copies of sl(2)"),
        CatalogEntry("sum(sl(2|1),abelian(0,1))", "no", 1, description="sl(2|1) plus an odd line"),
        CatalogEntry("sum(osp(1|2),heis(1))", "no", 1, description="osp(1|2) plus heis(1)"),
    ]
