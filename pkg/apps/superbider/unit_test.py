# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long
# pylint: disable=attribute-defined-outside-init

import io
import os
import sys
import tempfile
import time
from fractions import Fraction

import numpy as np

from superbider import SuperBider
from config import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_PARSE, REPORT_KEYS
from exactla import FieldDescriptor, FieldError, FieldMismatchError, Matrix, Residue, RowReducer, coordinates, full_space, membership, nullspace, rref, solve, span, subspace_sum, zero_subspace
from core import ConstraintError, GradedBilinearMap, GradedLinearMap, GradingError, HomogeneityError, SuperAlgebra, ad, bracket, homogeneous_components, validate
from spaces import (
    NoFactorizationError,
    NotCommutingError,
    NotPerfectError,
    biderivation_from_commuting,
    biderivation_space,
    centroid_factorization,
    centroid_kernel,
    centroid_space,
    commuting_map_space,
    commuting_scalar,
    field_invariance,
    inner_certificate,
    inner_superderivations,
    outer_dimension,
    scalar_certificate,
    superderivation_space,
    tensor_coordinates,
    verify_space,
)
from structure import NOT_SIMPLE, SIMPLE, UNKNOWN, PolicyError, center, derived_subalgebra, good_prime, good_prime_list, ideal_closure, is_graded, is_ideal, simplicity_check
from catalog import CatalogError, catalog_entries, direct_sum, lookup, make_abelian, make_gl, make_heisenberg, make_osp_1_2, make_sl
from cli import ParseError, main as cli_main, parse_algebra, serialize_algebra

Q = FieldDescriptor.rationals()
F5 = FieldDescriptor.prime(5)
F7 = FieldDescriptor.prime(7)


def check(name, expected, actual):
    """
    Compare and print an error on mismatch, returns True when failed
    """
    if expected != actual:
        print("ERROR: {} expected {} but got {}".format(name, expected, actual))
        return True
    return False


def expect_raise(name, exception, function, *args, **kwargs):
    try:
        function(*args, **kwargs)
    except exception:
        return False
    except Exception as e:
        print("ERROR: {} expected {} but got {}".format(name, exception.__name__, repr(e)))
        return True
    print("ERROR: {} expected {} but nothing was raised".format(name, exception.__name__))
    return True


def random_matrix(rng, field, rows, cols):
    return Matrix(field, [[int(x) for x in rng.integers(-3, 4, size=cols)] for _ in range(rows)], cols)


def transpose(m):
    return Matrix(m.field, [m.column(c) for c in range(m.cols)], m.rows)


def run_field_tests(my_app):
    print("**** Running field arithmetic tests ****")
    failed = False
    rng = np.random.default_rng(11)

    for field in [Q, F5, F7]:
        for _ in range(50):
            a, b, c = (field.element(Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 4)) if field.is_rational else 1)) for _ in range(3))
            failed |= check("assoc {}".format(field.name()), (a + b) + c, a + (b + c))
            failed |= check("distrib {}".format(field.name()), a * (b + c), a * b + a * c)
            failed |= check("neg {}".format(field.name()), field.zero, a + (-a))
            if a:
                failed |= check("inverse {}".format(field.name()), field.one, a * (field.one / a))

    failed |= expect_raise("char 2", FieldError, FieldDescriptor.prime, 2)
    failed |= expect_raise("composite", FieldError, FieldDescriptor.prime, 9)
    failed |= expect_raise("mixed residues", FieldMismatchError, lambda: Residue(1, 5) + Residue(1, 7))
    failed |= expect_raise("divide by zero F5", ZeroDivisionError, lambda: F5.one / F5.zero)
    failed |= expect_raise("divide by zero Q", ZeroDivisionError, lambda: Q.one / Q.zero)
    failed |= expect_raise("denominator 5 in F5", FieldError, F5.element, Fraction(1, 5))
    failed |= check("parse F_7", F7, FieldDescriptor.parse("F_7"))
    failed |= check("parse F 5", F5, FieldDescriptor.parse("F 5"))
    failed |= check("format 1/2 in F5", "3", F5.format(Fraction(1, 2)))
    failed |= check("format -3/6 in Q", "-1/2", Q.format(Fraction(-3, 6)))
    return failed


def run_linear_algebra_tests(my_app):
    print("**** Running exact linear algebra tests ****")
    failed = False

    ident = Matrix.identity(Q, 3)
    failed |= check("rref identity", (ident, 3), rref(ident))
    reduced, rank = rref(Matrix(Q, [[2, 4], [1, 2]]))
    failed |= check("rref [[2,4],[1,2]]", [[1, 2], [0, 0]], reduced.to_lists())
    failed |= check("rank [[2,4],[1,2]]", 1, rank)
    failed |= check("nullspace zero 3x3", 3, nullspace(Matrix.zero(Q, 3, 3)).dim)
    failed |= check("nullspace [[1,1]]", 1, nullspace(Matrix(Q, [[1, 1]])).dim)

    line = span(Q, 2, [[1, 0]])
    failed |= check("membership basis", True, membership(line, [3, 0]))
    failed |= check("membership zero", True, membership(line, [0, 0]))
    failed |= check("membership off line", False, membership(line, [0, 1]))
    plane = subspace_sum(line, span(Q, 2, [[0, 1]]))
    failed |= check("sum plane", full_space(Q, 2), plane)
    failed |= check("sum with zero", line, subspace_sum(line, zero_subspace(Q, 2)))
    failed |= check("sum with itself", line, subspace_sum(line, line))
    failed |= expect_raise("sum field mismatch", FieldMismatchError, subspace_sum, line, span(F5, 2, [[1, 0]]))
    failed |= check("same span twice", span(Q, 3, [[1, 2, 3], [2, 4, 7]]), span(Q, 3, [[0, 0, 1], [1, 2, 0]]))

    failed |= check("solve", [Fraction(1), Fraction(2)], solve(Matrix(Q, [[1, 0], [0, 1], [1, 1]]), [1, 2, 3]))
    failed |= check("solve inconsistent", None, solve(Matrix(Q, [[1, 0], [1, 0]]), [1, 2]))
    failed |= check("coordinates", [Fraction(2), Fraction(-1)], coordinates(Q, [[1, 0, 1], [0, 1, 1]], [2, -1, 1]))

    rng = np.random.default_rng(7)
    for count in range(200):
        field = Q if count % 2 == 0 else F5
        rows = int(rng.integers(1, 7))
        cols = int(rng.integers(1, 7))
        m = random_matrix(rng, field, rows, cols)
        reduced, rank = rref(m)
        if rref(reduced) != (reduced, rank):
            print("ERROR: rref not idempotent on {}".format(m.to_lists()))
            failed = True
        kernel = nullspace(m)
        if rank + kernel.dim != cols:
            print("ERROR: rank {} + nullity {} != {} for {}".format(rank, kernel.dim, cols, m.to_lists()))
            failed = True
        for v in kernel.basis:
            if any(m.apply(v)):
                print("ERROR: nullspace vector {} not annihilated by {}".format(v, m.to_lists()))
                failed = True
        if rref(transpose(m))[1] != rank:
            print("ERROR: row rank and column rank differ for {}".format(m.to_lists()))
            failed = True

    big = random_matrix(rng, F5, 40, 25)
    failed |= check("40x25 F5 rank", rref(transpose(big))[1], rref(big)[1])

    for field in [Q, F5]:
        m = random_matrix(rng, field, 30, 12)
        reducer = RowReducer(field, 12)
        for start in range(0, 30, 7):
            reducer.add_rows([m.row(r) for r in range(start, min(30, start + 7))])
        failed |= check("row reducer nullspace {}".format(field.name()), nullspace(m), reducer.nullspace())
        failed |= check("row reducer rank {}".format(field.name()), rref(m)[1], reducer.rank)
        failed |= check("row reducer rows {}".format(field.name()), [list(r) for r in rref(m)[0].entries[: reducer.rank]], reducer.rows())
    return failed


def run_core_tests(my_app):
    print("**** Running superalgebra model tests ****")
    failed = False
    sl2 = make_sl(2, 0)
    h, e, f = ([1, 0, 0], [0, 1, 0], [0, 0, 1])
    failed |= check("sl(2) [e, f]", [1, 0, 0], bracket(sl2, e, f))
    failed |= check("sl(2) [h, e]", [0, 2, 0], bracket(sl2, h, e))
    failed |= check("sl(2) [f, e] derived", [-1, 0, 0], bracket(sl2, f, e))
    failed |= check("sl(2) ad h", [[0, 0, 0], [0, 2, 0], [0, 0, -2]], ad(sl2, h).entries())
    failed |= check("ad zero", True, ad(sl2, [0, 0, 0]).is_zero())
    failed |= check("abelian bracket", [0, 0], bracket(make_abelian(1, 1), [1, 1], [1, 1]))
    failed |= expect_raise("bracket length", ValueError, bracket, sl2, [1, 0], e)

    osp = make_osp_1_2()
    u = [0, 0, 0, 1, 0]
    v = [0, 0, 0, 0, 1]
    failed |= check("osp [u, u]", [0, 2, 0, 0, 0], bracket(osp, u, u))
    failed |= check("osp [v, v]", [0, 0, -2, 0, 0], bracket(osp, v, v))
    failed |= check("osp [u, v]", [1, 0, 0, 0, 0], bracket(osp, u, v))
    failed |= check("osp [h, u]", u, bracket(osp, [1, 0, 0, 0, 0], u))
    failed |= check("osp [e, v]", [0, 0, 0, -1, 0], bracket(osp, [0, 1, 0, 0, 0], v))
    failed |= expect_raise("ad of mixed vector", HomogeneityError, ad, osp, [1, 0, 0, 1, 0])

    sl11 = make_sl(1, 1)
    failed |= check("sl(1|1) [e, f]", [1, 0, 0], bracket(sl11, [0, 1, 0], [0, 0, 1]))
    failed |= check("sl(1|1) [f, e] symmetric", [1, 0, 0], bracket(sl11, [0, 0, 1], [0, 1, 0]))
    gl11 = make_gl(1, 1)
    failed |= check("gl(1|1) [E12, E21]", [1, 1, 0, 0], bracket(gl11, [0, 0, 1, 0], [0, 0, 0, 1]))
    failed |= check("gl(1|0) abelian", True, make_gl(1, 0).is_abelian())
    failed |= check("sl(2|1) dims", (8, 4, 4), (make_sl(2, 1).dim, make_sl(2, 1).even_dim, make_sl(2, 1).odd_dim))
    failed |= check("sl(3|1) dim", 15, make_sl(3, 1).dim)

    failed |= expect_raise("grading rule", ConstraintError, SuperAlgebra, "bad", Q, [0, 1], {(0, 0, 1): 1})
    failed |= expect_raise("even square", ConstraintError, SuperAlgebra, "bad", Q, [0, 0], {(0, 0, 1): 1})
    failed |= expect_raise("order rule", ConstraintError, SuperAlgebra, "bad", Q, [0, 0], {(1, 0, 0): 1})
    failed |= expect_raise("range rule", ConstraintError, SuperAlgebra, "bad", Q, [0, 0], {(0, 1, 2): 1})
    failed |= check("zero entries dropped", {}, SuperAlgebra("z", Q, [0, 0], {(0, 1, 0): 0}).constants)
    failed |= expect_raise("reduce denominator", ConstraintError, SuperAlgebra("half", Q, [0, 0, 0], {(0, 1, 2): Fraction(1, 5)}).reduce_mod, 5)
    failed |= check("reduce_mod", F5, make_sl(2, 1).reduce_mod(5).field)

    failed |= expect_raise("map grading", GradingError, GradedLinearMap, sl11, [[0, 1, 0], [0, 0, 0], [0, 0, 0]], 0)
    failed |= expect_raise("bilinear grading", GradingError, GradedBilinearMap, sl11, {(0, 0, 1): 1}, 0)
    adh = ad(sl2, h)
    ade = ad(sl2, e)
    failed |= check("supercommutator of ad maps", ad(sl2, [0, 2, 0]), adh.supercommutator(ade))
    failed |= check("scalar value", Fraction(3), GradedLinearMap.identity(sl2).scale(3).scalar_value())
    failed |= check("scalar value of ad h", None, adh.scalar_value())
    bt = GradedBilinearMap.bracket_tensor(osp)
    failed |= check("bracket tensor skew", bt, bt.flip())
    failed |= check("bracket tensor evaluate", bracket(osp, u, v), bt.evaluate(u, v))

    raw = {(0, 0, 0): 0, (1, 1, 0): 5, (0, 1, 1): 2, (0, 1, 0): 3, (4, 0, 0): 1}
    even, odd, residue = homogeneous_components(sl11, raw)
    failed |= check("components even", {(0, 1, 1): Fraction(2), (1, 1, 0): Fraction(5)}, even.tensor)
    failed |= check("components odd", {(0, 1, 0): Fraction(3)}, odd.tensor)
    failed |= check("components residue", {(4, 0, 0): 1}, residue)

    for name in ["sl(2)", "sl(2|1)", "osp(1|2)", "heis(2)", "gl(1|1)", "sum(sl(2),heis(1))"]:
        algebra = lookup(name)
        failed |= check("validate {}".format(name), [], validate(algebra).lines())
        derivations = [superderivation_space(algebra, d) for d in (0, 1)]
        for i in range(algebra.dim):
            if not derivations[algebra.parity[i]].contains(ad(algebra, algebra.basis_vector(i))):
                print("ERROR: ad(e_{}) is not a superderivation of {}".format(i + 1, name))
                failed = True

    rng = np.random.default_rng(3)
    for name in ["sl(2|1)", "osp(1|2)", "heis(2)"]:
        algebra = lookup(name)
        for _ in range(10):
            x, x2, y = ([Fraction(int(v)) for v in rng.integers(-3, 4, size=algebra.dim)] for _ in range(3))
            alpha = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
            mixed = [alpha * a + b for a, b in zip(x, x2)]
            expected = [alpha * a + b for a, b in zip(bracket(algebra, x, y), bracket(algebra, x2, y))]
            failed |= check("{} bracket linear in x".format(name), expected, bracket(algebra, mixed, y))
            expected = [alpha * a + b for a, b in zip(bracket(algebra, y, x), bracket(algebra, y, x2))]
            failed |= check("{} bracket linear in y".format(name), expected, bracket(algebra, y, mixed))

    bad = SuperAlgebra("bad", Q, [0, 1], {(0, 0, 1): 1}, check=False)
    lines = validate(bad).lines()
    failed |= check("unchecked grading violation", True, len(lines) > 0 and lines[0].startswith("grading 1 1 2"))
    return failed


def oracle_table(algebra):
    """
    Dense bracket table built directly from the stored constants
    """
    n = algebra.dim
    zero = algebra.field.zero
    t = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), value in algebra.constants.items():
        t[i][j][k] = value
        if i != j:
            t[j][i][k] = value if algebra.parity[i] * algebra.parity[j] else -value
    return t


def oracle_bracket(t, x, y):
    n = len(x)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            if x[i] and y[j]:
                for k in range(n):
                    out[k] = out[k] + x[i] * y[j] * t[i][j][k]
    return out


def oracle_jacobi_holds(algebra):
    """
    Cyclic form of the super Jacobi identity over every basis triple
    """
    n = algebra.dim
    p = algebra.parity
    t = oracle_table(algebra)
    basis = [algebra.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a = oracle_bracket(t, basis[i], oracle_bracket(t, basis[j], basis[k]))
                b = oracle_bracket(t, basis[j], oracle_bracket(t, basis[k], basis[i]))
                c = oracle_bracket(t, basis[k], oracle_bracket(t, basis[i], basis[j]))
                sa = -1 if p[i] * p[k] else 1
                sb = -1 if p[j] * p[i] else 1
                sc = -1 if p[k] * p[j] else 1
                if any(sa * x + sb * y + sc * z for x, y, z in zip(a, b, c)):
                    return False
    return True


def oracle_biderivation_dim(algebra, degree):
    """
    Dimension of the biderivation space from residuals of unit tensors

    Column u of the system is the vector of every skew and Leibniz residual of
    the bilinear map with a single 1 at coordinate u.
    """
    n = algebra.dim
    p = algebra.parity
    coords = tensor_coordinates(algebra, degree)
    basis = [algebra.basis_vector(i) for i in range(n)]
    columns = []
    for coord in coords:
        phi = GradedBilinearMap(algebra, {coord: 1}, degree)
        residual = []
        for i in range(n):
            for j in range(n):
                s = -1 if p[i] * p[j] else 1
                residual.extend(x + s * y for x, y in zip(phi.evaluate(basis[i], basis[j]), phi.evaluate(basis[j], basis[i])))
                for k in range(n):
                    lhs = phi.evaluate(basis[i], bracket(algebra, basis[j], basis[k]))
                    first = bracket(algebra, phi.evaluate(basis[i], basis[j]), basis[k])
                    second = bracket(algebra, basis[j], phi.evaluate(basis[i], basis[k]))
                    sign = -1 if ((degree + p[i]) * p[j]) % 2 else 1
                    residual.extend(x - y - sign * z for x, y, z in zip(lhs, first, second))
        columns.append(residual)
    if not columns:
        return 0
    rows = [[columns[c][r] for c in range(len(columns))] for r in range(len(columns[0]))]
    return nullspace(Matrix(algebra.field, rows, len(columns))).dim


def run_validation_oracle_tests(my_app):
    print("**** Running Jacobi mutation tests ****")
    failed = False
    sl21 = make_sl(2, 1)
    keys = sorted(sl21.constants)[:20]
    if len(keys) < 20:
        print("ERROR: sl(2|1) has only {} structure constants".format(len(keys)))
        failed = True
    for key in keys:
        constants = dict(sl21.constants)
        constants[key] = constants[key] + 1 if constants[key] != -1 else Fraction(2)
        mutant = SuperAlgebra("mutant", Q, sl21.parity, constants, check=False)
        valid = validate(mutant).is_valid
        oracle = oracle_jacobi_holds(mutant)
        if valid != oracle:
            print("ERROR: mutation at {} judged valid={} by validate but {} by the cyclic oracle".format(key, valid, oracle))
            failed = True
    failed |= check("oracle on sl(2|1)", True, oracle_jacobi_holds(sl21))
    return failed


def run_space_tests(my_app):
    print("**** Running space tests ****")
    failed = False

    for name in ["sl(2|1)", "osp(1|2)", "sl(2)"]:
        algebra = lookup(name)
        identity = GradedLinearMap.identity(algebra)

        bider = [biderivation_space(algebra, d) for d in (0, 1)]
        failed |= check("{} biderivation dims".format(name), (1, 0), (bider[0].dim, bider[1].dim))
        cert = inner_certificate(algebra, bider[0].elements()[0])
        failed |= check("{} biderivation inner".format(name), True, cert is not None)
        failed |= check("{} bracket is a biderivation".format(name), True, bider[0].contains(GradedBilinearMap.bracket_tensor(algebra)))

        centroid = [centroid_space(algebra, d) for d in (0, 1)]
        failed |= check("{} centroid dims".format(name), (1, 0), (centroid[0].dim, centroid[1].dim))
        failed |= check("{} centroid basis".format(name), identity, centroid[0].elements()[0])

        commuting = commuting_map_space(algebra)
        failed |= check("{} commuting dim".format(name), 1, commuting.dim)
        failed |= check("{} commuting basis".format(name), identity, commuting.elements()[0])
        verdict = scalar_certificate(algebra, commuting)
        failed |= check("{} commuting all scalar".format(name), True, verdict.all_scalar)
        failed |= check("{} commuting lambda".format(name), Fraction(1), verdict.lam)
        failed |= check("{} commuting scalar route".format(name), Fraction(1), commuting_scalar(algebra, identity))

        for space in bider + centroid + [commuting]:
            failed |= check("{} verify {} {}".format(name, space.kind, space.degree), [], verify_space(algebra, space))

    sl21 = lookup("sl(2|1)")
    bt = GradedBilinearMap.bracket_tensor(sl21)
    identity = GradedLinearMap.identity(sl21)
    failed |= check("factor bracket", identity, centroid_factorization(sl21, bt))
    failed |= check("factor 3 bracket", identity.scale(3), centroid_factorization(sl21, bt.scale(3)))
    failed |= expect_raise("factor non biderivation", NoFactorizationError, centroid_factorization, sl21, GradedBilinearMap(sl21, {(0, 0, 0): 1}, 0))
    failed |= check("inner certificate lambda", Fraction(3), inner_certificate(sl21, bt.scale(3)).lam)
    failed |= check("inner certificate zero", Fraction(0), inner_certificate(sl21, GradedBilinearMap.zero(sl21)).lam)
    failed |= check("sl(2|1) centroid kernel of Id", 0, centroid_kernel(sl21, identity).dim)

    sl2 = lookup("sl(2)")
    failed |= check("sl(2) superderivations", 3, superderivation_space(sl2, 0).dim)
    failed |= check("sl(2) outer", 0, outer_dimension(sl2, 0))
    failed |= check("sl(2) inner superderivations", 3, inner_superderivations(sl2, 0).dim)
    failed |= check("abelian(2,1) superderivations", 5, superderivation_space(make_abelian(2, 1), 0).dim)

    sl11 = lookup("sl(1|1)")
    b = biderivation_space(sl11, 0)
    failed |= check("sl(1|1) bider at least 2", True, b.dim >= 2)
    failed |= check("sl(1|1) bider independent assembly", oracle_biderivation_dim(sl11, 0), b.dim)
    failed |= check("sl(1|1) bider not all inner", True, any(inner_certificate(sl11, phi) is None for phi in b.elements()))
    failed |= expect_raise("heis(2) not perfect", NotPerfectError, centroid_factorization, lookup("heis(2)"), GradedBilinearMap.bracket_tensor(lookup("heis(2)")))

    heis = lookup("heis(2)")
    failed |= check("heis(2) centroid odd", 2, centroid_space(heis, 1).dim)
    commuting = commuting_map_space(heis)
    failed |= check("heis(2) commuting", 4, commuting.dim)
    failed |= check("heis(2) not all scalar", False, scalar_certificate(heis, commuting).all_scalar)
    failed |= check("heis(2) bider independent assembly", oracle_biderivation_dim(heis, 1), biderivation_space(heis, 1).dim)

    ab = make_abelian(1, 1)
    failed |= check("abelian(1,1) bider even", 2, biderivation_space(ab, 0).dim)
    failed |= check("abelian(1,1) commuting", 2, commuting_map_space(ab).dim)
    failed |= check("abelian(1,1) centroid even", 2, centroid_space(ab, 0).dim)
    failed |= check("abelian(1,1) inner certificate", None, inner_certificate(ab, biderivation_space(ab, 0).elements()[0]))
    failed |= check("osp(1|2) bider independent assembly", oracle_biderivation_dim(lookup("osp(1|2)"), 0), 1)

    not_commuting = ad(sl2, [1, 0, 0])
    failed |= expect_raise("not commuting", NotCommutingError, biderivation_from_commuting, sl2, not_commuting)

    # Skew symmetry turns the second argument rule into the first argument rule
    # phi([x, y], z) = (-1)^{|y||z|} [phi(x, z), y] + (-1)^{|phi||x|} [x, phi(y, z)]
    for name in ["sl(1|1)", "gl(1|1)", "heis(2)", "sl(2|1)"]:
        algebra = lookup(name)
        p = algebra.parity
        basis = [algebra.basis_vector(i) for i in range(algebra.dim)]
        for degree in (0, 1):
            for phi in biderivation_space(algebra, degree).elements():
                for i in range(algebra.dim):
                    for j in range(algebra.dim):
                        lhs_xy = bracket(algebra, basis[i], basis[j])
                        for k in range(algebra.dim):
                            lhs = phi.evaluate(lhs_xy, basis[k])
                            first = bracket(algebra, phi.evaluate(basis[i], basis[k]), basis[j])
                            second = bracket(algebra, basis[i], phi.evaluate(basis[j], basis[k]))
                            s1 = -1 if p[j] * p[k] else 1
                            s2 = -1 if degree * p[i] else 1
                            if any(a - s1 * b - s2 * c for a, b, c in zip(lhs, first, second)):
                                print("ERROR: {} biderivation of degree {} fails the first argument rule at {}".format(name, degree, (i + 1, j + 1, k + 1)))
                                failed = True

    for name in ["sl(2|1)", "osp(1|2)", "heis(2)"]:
        algebra = lookup(name)
        identity = GradedLinearMap.identity(algebra)
        bt = GradedBilinearMap.bracket_tensor(algebra)
        failed |= check("{} phi of Id".format(name), bt, biderivation_from_commuting(algebra, identity))
        failed |= check("{} phi of 3/2 Id".format(name), bt.scale(Fraction(3, 2)), biderivation_from_commuting(algebra, identity.scale(Fraction(3, 2))))

    # Composition closure of the even centroid
    for name in ["heis(2)", "sum(sl(2),sl(2))"]:
        algebra = lookup(name)
        c0 = centroid_space(algebra, 0)
        elements = c0.elements()
        for a in elements:
            for b2 in elements:
                if not c0.contains(a.compose(b2)):
                    print("ERROR: centroid of {} not closed under composition".format(name))
                    failed = True

    # f([x, y]) = [f(x), y] follows from the centroid condition
    for name in ["heis(2)", "abelian(1,1)", "sl(2|1)"]:
        algebra = lookup(name)
        basis = [algebra.basis_vector(i) for i in range(algebra.dim)]
        for degree in (0, 1):
            for f in centroid_space(algebra, degree).elements():
                for x in basis:
                    for y in basis:
                        if f.apply(bracket(algebra, x, y)) != bracket(algebra, f.apply(x), y):
                            print("ERROR: centroid of {} degree {} fails f([x, y]) = [f(x), y]".format(name, degree))
                            failed = True
    return failed


def run_commuting_map_tests(my_app):
    print("**** Running commuting map tests ****")
    failed = False
    keys = ["sl(2)", "sl(2|1)", "osp(1|2)", "sl(1|1)", "gl(1|1)", "heis(1)", "heis(2)", "abelian(1,1)", "abelian(2,1)", "sum(sl(2),sl(2))", "sum(osp(1|2),heis(1))"]
    for key in keys:
        algebra = lookup(key)
        bider = biderivation_space(algebra, 0)
        for f in commuting_map_space(algebra).elements():
            try:
                phi = biderivation_from_commuting(algebra, f)
            except Exception as e:
                print("ERROR: {} phi_f failed with {}".format(key, e))
                failed = True
                continue
            if not bider.contains(phi):
                print("ERROR: {} phi_f is not in the computed biderivation space".format(key))
                failed = True
    return failed


def run_field_invariance_tests(my_app):
    print("**** Running field invariance tests ****")
    failed = False
    for name in ["sl(2|1)", "osp(1|2)", "sl(2)"]:
        failed |= check("{} invariance".format(name), [], field_invariance(lookup(name), [5, 7]))
    return failed


def run_structure_tests(my_app):
    print("**** Running structure tests ****")
    failed = False
    failed |= check("abelian(2,1) center", 3, center(make_abelian(2, 1)).dim)
    failed |= check("sl(2|1) center", 0, center(lookup("sl(2|1)")).dim)
    heis = make_heisenberg(2)
    z = span(Q, 3, [[1, 0, 0]])
    failed |= check("heis center", z, center(heis))
    failed |= check("heis derived", z, derived_subalgebra(heis))
    failed |= check("abelian derived", 0, derived_subalgebra(make_abelian(1, 1)).dim)
    failed |= check("sl(2|1) derived", 8, derived_subalgebra(lookup("sl(2|1)")).dim)
    failed |= check("closure of zero", 0, ideal_closure(heis, zero_subspace(Q, 3)).dim)
    failed |= check("closure of z", z, ideal_closure(heis, z))
    failed |= check("closure of e in sl(2)", 3, ideal_closure(lookup("sl(2)"), [[0, 1, 0]]).dim)
    failed |= check("center is ideal", True, is_ideal(heis, center(heis)))

    for key in ["sl(2|1)", "osp(1|2)"]:
        verdict = simplicity_check(lookup(key), prime=5)
        failed |= check("{} simple".format(key), SIMPLE, verdict.status)
        failed |= check("{} method".format(key), "reduction", verdict.method)
        failed |= check("{} prime".format(key), 5, verdict.prime)
    failed |= check("osp(1|2) F5 exhaustive", SIMPLE, simplicity_check(lookup("osp(1|2)", F5)).status)

    for key in ["sl(1|1)", "heis(2)", "sum(sl(2),sl(2))"]:
        algebra = lookup(key)
        verdict = simplicity_check(algebra, prime=5)
        failed |= check("{} not simple".format(key), NOT_SIMPLE, verdict.status)
        w = verdict.witness
        failed |= check("{} witness proper".format(key), True, w is not None and 0 < w.dim < algebra.dim)
        failed |= check("{} witness ideal".format(key), True, w is not None and is_ideal(algebra, w))
        failed |= check("{} witness graded flag".format(key), is_graded(algebra, w), verdict.witness_graded)

    sum_f5 = lookup("sum(sl(2),sl(2))", F5)
    verdict = simplicity_check(sum_f5)
    failed |= check("sum F5 exhaustive", "exhaustive", verdict.method)
    failed |= check("sum F5 witness", 3, verdict.witness.dim if verdict.witness else None)

    failed |= check("dimension one", NOT_SIMPLE, simplicity_check(make_abelian(1, 0)).status)
    failed |= check("dimension one witness", None, simplicity_check(make_abelian(1, 0)).witness)
    failed |= check("abelian witness", 1, simplicity_check(make_abelian(1, 1)).witness.dim)
    failed |= check("budget", UNKNOWN, simplicity_check(lookup("sl(2|1)"), budget=100, prime=5).status)
    failed |= expect_raise("exhaustive over Q", PolicyError, simplicity_check, lookup("sl(2)"), policy="exhaustive")
    failed |= expect_raise("heuristic over F5", PolicyError, simplicity_check, lookup("sl(2)", F5), policy="heuristic")

    # Reduction soundness: sl(1|1) stays non-simple modulo 5
    failed |= check("sl(1|1) mod 5", NOT_SIMPLE, simplicity_check(lookup("sl(1|1)", F5)).status)

    for entry in catalog_entries():
        if entry.known_simple == "no" and entry.expected_witness_dim is not None:
            verdict = simplicity_check(entry.build(), prime=5)
            failed |= check("{} catalog verdict".format(entry.key), NOT_SIMPLE, verdict.status)
            failed |= check("{} catalog witness".format(entry.key), entry.expected_witness_dim, verdict.witness.dim if verdict.witness else None)

    for entry in catalog_entries():
        if entry.known_simple == "yes":
            verdict = simplicity_check(entry.build())
            if entry.budget_bound:
                failed |= check("{} over budget".format(entry.key), (UNKNOWN, "budget"), (verdict.status, verdict.method))
            else:
                failed |= check("{} catalog simple".format(entry.key), SIMPLE, verdict.status)

    thirds = SuperAlgebra("thirds", Q, [0, 0, 0], {(0, 1, 2): Fraction(1, 3)})
    failed |= check("good prime skips denominators", 5, good_prime(thirds, [3, 5, 7]))
    failed |= check("good primes skip denominators", [5, 7], good_prime_list(thirds, [7, 3, 5]))
    failed |= check("no good prime", None, good_prime(thirds, [3]))
    failed |= check("good prime of a prime field", [7], good_prime_list(lookup("sl(2)", F7), [3, 5]))

    # sl(3) modulo 3 has the identity as center, the next good prime settles it
    verdict = simplicity_check(lookup("sl(3)"))
    failed |= check("sl(3) falls through to 5", (SIMPLE, "reduction", 5), (verdict.status, verdict.method, verdict.prime))
    verdict = simplicity_check(lookup("sl(3)"), prime=3)
    failed |= check("sl(3) forced prime 3", (UNKNOWN, "reduction"), (verdict.status, verdict.method))

    rng = np.random.default_rng(5)
    for key in ["sl(1|1)", "gl(1|1)", "heis(2)", "sum(sl(2),heis(1))", "sum(sl(2),sl(2))", "sum(osp(1|2),heis(1))"]:
        algebra = lookup(key)
        for _ in range(6):
            vectors = [[int(x) for x in rng.integers(-2, 3, size=algebra.dim)] for _ in range(int(rng.integers(1, 3)))]
            s = span(Q, algebra.dim, vectors)
            closure = ideal_closure(algebra, s)
            failed |= check("{} closure contains S".format(key), True, s.is_subspace_of(closure))
            failed |= check("{} closure idempotent".format(key), closure, ideal_closure(algebra, closure))
            failed |= check("{} closure is ideal".format(key), True, is_ideal(algebra, closure))
    return failed


def run_catalog_tests(my_app):
    print("**** Running catalog tests ****")
    failed = False
    failed |= check("direct sum dim", 6, direct_sum(lookup("sl(2)"), lookup("sl(2)")).dim)
    failed |= check("nested sum", 8, lookup("sum(sum(sl(2),heis(1)),sl(1|1))").dim)
    failed |= check("sl(2) name", "sl(2)", lookup("sl(2|0)").name)
    failed |= check("gl(1|1) dim", 4, lookup("gl(1|1)").dim)
    failed |= expect_raise("unknown key", CatalogError, lookup, "so(3)")
    failed |= expect_raise("bad sum", CatalogError, lookup, "sum(sl(2))")
    failed |= expect_raise("sum field mismatch", FieldMismatchError, direct_sum, lookup("sl(2)"), lookup("sl(2)", F5))
    for entry in catalog_entries():
        algebra = entry.build()
        failed |= check("{} valid".format(entry.key), True, validate(algebra).is_valid)
    return failed


SL11_FILE = """superalgebra v1
# sl(1|1)
name sl11
field Q
dim 3
parity 0 1 1
c 2 3 1 1
"""

# [x, y] = x, [x, z] = x, [y, z] = y breaks the Jacobi identity
NOT_JACOBI_FILE = """superalgebra v1
name notjacobi
field Q
dim 3
parity 0 0 0
c 1 2 1 1
c 1 3 1 1
c 2 3 2 1
"""


def run_file_format_tests(my_app):
    print("**** Running file format tests ****")
    failed = False
    algebra = parse_algebra(SL11_FILE)
    failed |= check("parse dim", 3, algebra.dim)
    failed |= check("parse bracket", [1, 0, 0], bracket(algebra, [0, 0, 1], [0, 1, 0]))
    for key in ["sl(2|1)", "osp(1|2)", "heis(2)"]:
        for field in [Q, F7]:
            original = lookup(key, field)
            failed |= check("serialize {} {}".format(key, field.name()), original, parse_algebra(serialize_algebra(original)))
    failed |= check("rational output", "c 1 2 3 1/2", serialize_algebra(SuperAlgebra("r", Q, [0, 0, 0], {(0, 1, 2): Fraction(1, 2)})).splitlines()[-1])

    try:
        parse_algebra("name x\n")
        print("ERROR: missing header accepted")
        failed = True
    except ParseError as e:
        failed |= check("parse error line", 1, e.line)
    failed |= expect_raise("bad keyword", ParseError, parse_algebra, SL11_FILE + "q 1\n")
    failed |= expect_raise("bad field token", ParseError, parse_algebra, SL11_FILE.replace("field Q", "field R"))
    failed |= expect_raise("char 2", ConstraintError, parse_algebra, SL11_FILE.replace("field Q", "field F 2"))
    failed |= expect_raise("composite", ConstraintError, parse_algebra, SL11_FILE.replace("field Q", "field F 9"))
    failed |= expect_raise("j < i", ConstraintError, parse_algebra, SL11_FILE + "c 3 2 1 1\n")
    failed |= expect_raise("duplicate", ConstraintError, parse_algebra, SL11_FILE + "c 2 3 1 2\n")
    failed |= expect_raise("grading", ConstraintError, parse_algebra, SL11_FILE + "c 1 2 1 1\n")
    failed |= expect_raise("even square", ConstraintError, parse_algebra, SL11_FILE.replace("parity 0 1 1", "parity 0 0 0").replace("c 2 3 1 1", "c 1 1 2 1"))
    failed |= expect_raise("bad parity count", ParseError, parse_algebra, SL11_FILE.replace("parity 0 1 1", "parity 0 1"))
    for token in ["1.5", "1e3", "0x2", "1/2/3", "/2"]:
        failed |= expect_raise("coefficient {}".format(token), ParseError, parse_algebra, SL11_FILE.replace("c 2 3 1 1", "c 2 3 1 {}".format(token)))
    failed |= expect_raise("coefficient 1/0", ParseError, parse_algebra, SL11_FILE.replace("c 2 3 1 1", "c 2 3 1 1/0"))
    failed |= check("coefficient -3/6", {(1, 2, 0): Fraction(-1, 2)}, parse_algebra(SL11_FILE.replace("c 2 3 1 1", "c 2 3 1 -3/6")).constants)
    return failed


def run_cli(argv):
    out = io.StringIO()
    code = cli_main(argv, out=out, stream=io.StringIO())
    return code, out.getvalue()


def run_cli_tests(my_app):
    print("**** Running command line tests ****")
    failed = False

    code, text = run_cli(["--threads", "0", "catalog", "list"])
    failed |= check("catalog list code", EXIT_OK, code)
    failed |= check("catalog list count", len(catalog_entries()), len(text.splitlines()))
    code, text = run_cli(["catalog", "emit", "sl(1|1)"])
    failed |= check("catalog emit", lookup("sl(1|1)"), parse_algebra(text))
    failed |= check("catalog emit unknown", EXIT_PARSE, run_cli(["catalog", "emit", "nope(1)"])[0])

    code, text = run_cli(["--threads", "0", "analyze", "catalog:sl(2)"])
    failed |= check("analyze code", EXIT_OK, code)
    keys = [line.split(" ", 1)[0] for line in text.splitlines()]
    failed |= check("report keys", REPORT_KEYS, keys)
    report = dict(line.split(" ", 1) for line in text.splitlines())
    failed |= check("report bider", "1", report["bider_even_dim"])
    failed |= check("report bider inner", "true", report["bider_inner"])
    sl2_lambda = inner_certificate(lookup("sl(2)"), biderivation_space(lookup("sl(2)"), 0).elements()[0]).lam
    failed |= check("report bider lambda", "1/2", report["bider_lambda"])
    failed |= check("report bider lambda matches certificate", Q.format(sl2_lambda), report["bider_lambda"])
    failed |= check("report commuting", "true", report["commuting_scalar"])
    failed |= check("report simplicity", "Simple", report["simplicity"])

    code, heis_text = run_cli(["--threads", "0", "analyze", "catalog:heis(2)"])
    report = dict(line.split(" ", 1) for line in heis_text.splitlines())
    failed |= check("heis(2) analyze code", EXIT_OK, code)
    failed |= check("heis(2) bider inner", "false", report["bider_inner"])
    failed |= check("heis(2) centroid odd", "2", report["centroid_odd_dim"])
    failed |= check("heis(2) commuting", "4", report["commuting_dim"])
    failed |= check("heis(2) commuting scalar", "false", report["commuting_scalar"])

    code, text2 = run_cli(["--threads", "2", "analyze", "catalog:sl(2)"])
    failed |= check("report identical across thread counts", text, text2)

    code, text = run_cli(["--threads", "0", "analyze", "catalog:sl(2)", "--budget", "5"])
    failed |= check("budget exit", EXIT_BUDGET, code)
    failed |= check("budget report printed", True, "simplicity Unknown" in text)

    code, text = run_cli(["--threads", "0", "analyze", "catalog:heis(2)", "--field", "F5"])
    report = dict(line.split(" ", 1) for line in text.splitlines())
    failed |= check("heis F5 field", "F 5", report["field"])
    failed |= check("heis F5 commuting", "4", report["commuting_dim"])
    failed |= check("heis F5 not simple", "NotSimple", report["simplicity"])
    failed |= check("bad field exit", EXIT_PARSE, run_cli(["--threads", "0", "analyze", "catalog:sl(2)", "--field", "F4"])[0])

    code, text = run_cli(["spaces", "catalog:heis(2)", "--which", "centroid", "--degree", "1", "--basis"])
    failed |= check("spaces code", EXIT_OK, code)
    failed |= check("spaces dim", True, "dim 2" in text.splitlines())
    failed |= check("spaces basis lines", 2, sum(1 for line in text.splitlines() if line.startswith("basis ")))

    with tempfile.TemporaryDirectory() as tmp:
        good = os.path.join(tmp, "sl11.txt")
        with open(good, "w", encoding="utf-8") as han:
            han.write(SL11_FILE)
        bad = os.path.join(tmp, "bad.txt")
        with open(bad, "w", encoding="utf-8") as han:
            han.write(SL11_FILE + "c 1 2 1 1\n")
        broken = os.path.join(tmp, "broken.txt")
        with open(broken, "w", encoding="utf-8") as han:
            han.write("superalgebra v2\n")
        code, text = run_cli(["--threads", "0", "validate", good])
        failed |= check("validate good", (EXIT_OK, "valid true\n"), (code, text))
        code, text = run_cli(["--threads", "0", "validate", bad])
        failed |= check("validate bad code", EXIT_INVALID, code)
        failed |= check("validate bad lists grading", True, "grading 1 2 1" in text)
        failed |= check("validate broken", EXIT_PARSE, run_cli(["--threads", "0", "validate", broken])[0])
        failed |= check("validate missing file", EXIT_PARSE, run_cli(["--threads", "0", "validate", os.path.join(tmp, "missing.txt")])[0])

        jacobi = os.path.join(tmp, "jacobi.txt")
        with open(jacobi, "w", encoding="utf-8") as han:
            han.write(NOT_JACOBI_FILE)
        code, text = run_cli(["--threads", "0", "analyze", jacobi])
        lines = text.splitlines()
        failed |= check("analyze broken code", EXIT_INVALID, code)
        failed |= check("analyze broken valid", True, "valid false" in lines)
        failed |= check("analyze broken violations listed", True, any(line.startswith("violation jacobi ") for line in lines))
        failed |= check("analyze broken spaces skipped", True, "bider_even_dim -" in lines)

        config = os.path.join(tmp, "superbider.yaml")
        with open(config, "w", encoding="utf-8") as han:
            han.write("superbider:\n  threads: 0\n  enumeration_budget: 5\n")
        failed |= check("budget from config", EXIT_BUDGET, run_cli(["--config", config, "analyze", "catalog:sl(2)"])[0])
    return failed


def run_config_tests(my_app):
    print("**** Running configuration tests ****")
    failed = False
    failed |= check("default budget", 10**6, my_app.get_arg("enumeration_budget"))
    failed |= check("default primes", [3, 5, 7, 11, 13], my_app.get_arg("good_primes"))
    app = SuperBider(args={"enumeration_budget": "lots", "verify_results": "off", "simplicity_policy": "magic", "random_samples": "4"}, stream=io.StringIO())
    failed |= check("bad int falls back", 10**6, app.get_arg("enumeration_budget"))
    failed |= check("had errors", True, app.had_errors)
    failed |= check("bool from string", False, app.get_arg("verify_results"))
    failed |= check("bad option falls back", "auto", app.get_arg("simplicity_policy"))
    failed |= check("int from string", 4, app.get_arg("random_samples"))
    app = SuperBider(args={"prime": 5}, overrides={"prime": 7}, stream=io.StringIO())
    failed |= check("override wins", 7, app.get_arg("prime"))
    stream = io.StringIO()
    app = SuperBider(args={}, stream=stream)
    app.record_status("Warn: testing", had_errors=True)
    failed |= check("status", "Warn: testing", app.current_status)
    failed |= check("status logged", True, "Info: record_status Warn: testing" in stream.getvalue())
    return failed


def run_perf_test(my_app):
    print("**** Running Performance tests ****")
    failed = False
    algebra = lookup("sl(3|1)", F7)
    start_time = time.time()
    dims = (biderivation_space(algebra, 0).dim, biderivation_space(algebra, 1).dim)
    end_time = time.time()
    failed |= check("sl(3|1) over F7 biderivation dims", (1, 0), dims)
    print("Performance test took {} seconds for sl(3|1) over F 7".format(round(end_time - start_time, 2)))
    return failed


def main():
    print("**** Starting Superbider tests ****")
    my_app = SuperBider(args={}, stream=io.StringIO())

    print("**** Testing Superbider ****")
    failed = False
    if not failed:
        failed |= run_field_tests(my_app)
    if not failed:
        failed |= run_linear_algebra_tests(my_app)
    if not failed:
        failed |= run_core_tests(my_app)
    if not failed:
        failed |= run_validation_oracle_tests(my_app)
    if not failed:
        failed |= run_catalog_tests(my_app)
    if not failed:
        failed |= run_structure_tests(my_app)
    if not failed:
        failed |= run_space_tests(my_app)
    if not failed:
        failed |= run_commuting_map_tests(my_app)
    if not failed:
        failed |= run_field_invariance_tests(my_app)
    if not failed:
        failed |= run_file_format_tests(my_app)
    if not failed:
        failed |= run_config_tests(my_app)
    if not failed:
        failed |= run_cli_tests(my_app)
    if not failed and "--perf" in sys.argv:
        failed |= run_perf_test(my_app)

    if failed:
        print("**** ERROR: Some tests failed ****")
        sys.exit(1)
    print("**** Tests passed ****")
    sys.exit(0)


if __name__ == "__main__":
    main()
