# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

import numpy as np

from exactla import FieldDescriptor, RowReducer, Subspace, span, subspace_sum
from core import EVEN, bracket_sparse, to_sparse
from utils import launch, partition_range

SIMPLE = "Simple"
NOT_SIMPLE = "NotSimple"
UNKNOWN = "Unknown"

POLICIES = ["auto", "exhaustive", "heuristic"]

# Lines handled per vectorized rank computation
LINE_BATCH = 2048


class PolicyError(ValueError):
    """
    The requested simplicity policy does not apply to the algebra's field
    """


class SimplicityVerdict:
    """
    Outcome of a simplicity check with the evidence behind it
    """

    def __init__(self, status, method, reason, witness=None, witness_graded=None, prime=None, lines_checked=0):
        self.status = status
        self.method = method
        self.reason = reason
        self.witness = witness
        self.witness_graded = witness_graded
        self.prime = prime
        self.lines_checked = lines_checked

    def certificate(self):
        """
        One line summary used in reports
        """
        text = self.method
        if self.prime:
            text += " p={}".format(self.prime)
        if self.lines_checked:
            text += " lines={}".format(self.lines_checked)
        if self.witness is not None:
            text += " witness_dim={}".format(self.witness.dim)
            text += " graded={}".format("true" if self.witness_graded else "false")
        return text

    def __repr__(self):
        return "SimplicityVerdict({}, {})".format(self.status, self.certificate())


def center(algebra):
    """
    {x : [x, e_j] = 0 for all j}
    """
    n = algebra.dim
    reducer = RowReducer(algebra.field, n)
    for j in range(n):
        rows = [{} for _ in range(n)]
        for i in range(n):
            for k, value in algebra.table[i][j].items():
                rows[k][i] = value
        reducer.add_sparse_rows(rows)
    return reducer.nullspace()


def derived_subalgebra(algebra):
    """
    Span of all brackets [e_i, e_j]
    """
    vectors = []
    for i in range(algebra.dim):
        for j in range(i, algebra.dim):
            image = algebra.table[i][j]
            if image:
                v = [algebra.field.zero] * algebra.dim
                for k, value in image.items():
                    v[k] = value
                vectors.append(v)
    return span(algebra.field, algebra.dim, vectors)


def _as_subspace(algebra, s):
    if isinstance(s, Subspace):
        return s
    return span(algebra.field, algebra.dim, s)


def _images(algebra, subspace):
    """
    Brackets of every basis vector of subspace with every e_j
    """
    one = algebra.field.one
    out = []
    for v in subspace.basis:
        sv = to_sparse(v)
        for j in range(algebra.dim):
            image = bracket_sparse(algebra, sv, {j: one})
            if image:
                w = [algebra.field.zero] * algebra.dim
                for k, value in image.items():
                    w[k] = value
                out.append(w)
    return out


def ideal_closure(algebra, s):
    """
    Least ideal containing s, by fixed point iteration
    """
    current = _as_subspace(algebra, s)
    for _ in range(algebra.dim + 1):
        grown = subspace_sum(current, span(algebra.field, algebra.dim, _images(algebra, current)))
        if grown.dim == current.dim:
            return grown
        current = grown
    return current


def is_ideal(algebra, s):
    s = _as_subspace(algebra, s)
    return all(s.contains(w) for w in _images(algebra, s))


def is_graded(algebra, s):
    """
    True when s is the sum of its even and odd parts
    """
    s = _as_subspace(algebra, s)
    zero = algebra.field.zero
    for v in s.basis:
        even = [x if algebra.parity[k] == EVEN else zero for k, x in enumerate(v)]
        if not s.contains(even):
            return False
    return True


def good_prime_list(algebra, primes):
    """
    Primes from primes, smallest first, dividing no structure constant denominator
    """
    if not algebra.field.is_rational:
        return [algebra.field.characteristic]
    denominators = algebra.denominators()
    found = []
    for p in sorted(primes):
        try:
            FieldDescriptor.prime(p)
        except ValueError:
            continue
        if all(d % p for d in denominators):
            found.append(p)
    return found


def good_prime(algebra, primes):
    """
    Smallest prime in primes dividing no structure constant denominator
    """
    found = good_prime_list(algebra, primes)
    return found[0] if found else None


def line_count(p, n):
    return (p**n - 1) // (p - 1)


def line_vectors(p, n, start, end):
    """
    Lines start..end-1 of F_p^n, each as the vector with first nonzero coordinate 1

    Lines are ordered by the base p value of their vector, so e_n comes first.
    """
    index = np.arange(start, end, dtype=np.int64)
    starts = np.array([line_count(p, g) for g in range(n + 1)], dtype=np.int64)
    group = np.searchsorted(starts, index, side="right") - 1
    powers = np.array([p**g for g in range(n)], dtype=np.int64)
    value = index - starts[group] + powers[group]
    out = np.zeros((len(index), n), dtype=np.int64)
    for position in range(n - 1, -1, -1):
        out[:, position] = value % p
        value = value // p
    return out


def envelope_basis(algebra):
    """
    Basis of the unital associative algebra generated by the ad(e_j) over F_p, as a (T, n, n) array

    The ideal generated by v is exactly {M v : M in this algebra}.
    """
    field = algebra.field
    p = field.characteristic
    n = algebra.dim
    ads = np.zeros((n, n, n), dtype=np.int64)
    for j in range(n):
        for i in range(n):
            for k, value in algebra.table[j][i].items():
                ads[j, k, i] = field.raw(value)
    reducer = RowReducer(field, n * n)
    queue = [np.identity(n, dtype=np.int64)]
    reducer.add_raw_block(queue[0].reshape(1, n * n))
    while queue:
        m = queue.pop()
        for j in range(n):
            product = (m @ ads[j]) % p
            rank = reducer.rank
            reducer.add_raw_block(product.reshape(1, n * n))
            if reducer.rank > rank:
                queue.append(product)
    return reducer.basis.reshape(-1, n, n)


def _inverse_table(p):
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def batched_rank(x, p, inverse):
    """
    Rank modulo p of each matrix in a (B, T, n) stack, eliminating all of them at once
    """
    x = x % p
    count, height, n = x.shape
    rank = np.zeros(count, dtype=np.int64)
    used = np.zeros((count, height), dtype=bool)
    batch = np.arange(count)
    for c in range(n):
        candidates = (x[:, :, c] != 0) & ~used
        has = candidates.any(axis=1)
        if not has.any():
            continue
        b = batch[has]
        pivot = np.argmax(candidates[has], axis=1)
        prow = x[b, pivot]
        prow = (prow * inverse[prow[:, c]][:, None]) % p
        factors = x[b, :, c]
        x[b] = (x[b] - factors[:, :, None] * prow[:, None, :]) % p
        x[b, pivot] = prow
        used[b, pivot] = True
        rank[b] += 1
    return rank


def first_proper_line(envelope, p, n, start, end):
    """
    Index of the first line in start..end-1 whose ideal closure is not everything, or None
    """
    inverse = _inverse_table(p)
    for chunk in range(start, end, LINE_BATCH):
        stop = min(end, chunk + LINE_BATCH)
        vectors = line_vectors(p, n, chunk, stop)
        images = np.einsum("tij,bj->bti", envelope, vectors) % p
        ranks = batched_rank(images, p, inverse)
        bad = np.flatnonzero(ranks < n)
        if bad.size:
            return chunk + int(bad[0])
    return None


def wrapped_first_proper_line(envelope, p, n, start, end):
    return first_proper_line(envelope, p, n, start, end)


def _not_simple(algebra, method, reason, witness, prime=None, lines=0):
    return SimplicityVerdict(NOT_SIMPLE, method, reason, witness=witness, witness_graded=is_graded(algebra, witness), prime=prime, lines_checked=lines)


def exhaustive_check(algebra, budget, pool=None, parts=1):
    """
    Enumerate every line of a prime field algebra and close it to an ideal

    Returns (index of the first proper line or None, number of lines checked),
    or None when the line count exceeds the budget.
    """
    p = algebra.field.characteristic
    n = algebra.dim
    total = line_count(p, n)
    if total > budget:
        return None
    envelope = envelope_basis(algebra)
    if envelope.shape[0] < n:
        # Fewer than n operators can never map a line onto the whole space
        return 0, 1
    handles = [launch(pool, wrapped_first_proper_line, (envelope, p, n, start, end)) for start, end in partition_range(total, parts)]
    failures = [han.get() for han in handles]
    failures = [f for f in failures if f is not None]
    if failures:
        first = min(failures)
        return first, first + 1
    return None, total


def line_witness(algebra, index):
    p = algebra.field.characteristic
    vector = line_vectors(p, algebra.dim, index, index + 1)[0]
    return ideal_closure(algebra, [[int(x) for x in vector]])


def simplicity_check(algebra, policy="auto", budget=10**6, prime=0, samples=8, seed=1, pool=None, parts=1, good_primes=(3, 5, 7, 11, 13)):
    """
    Decide whether the algebra is simple, with a certificate

    Structural tests run first (dimension one, center, derived algebra).
    Prime field algebras are then settled by enumerating every line, rational
    ones by closures of sample vectors followed by enumeration modulo each
    good prime in turn until one reduction is simple.
    """
    if policy not in POLICIES:
        raise PolicyError("Unknown simplicity policy {}, expected one of {}".format(policy, POLICIES))
    field = algebra.field
    if policy == "exhaustive" and field.is_rational:
        raise PolicyError("Exhaustive line enumeration needs a prime field, the algebra is over Q")
    if policy == "heuristic" and not field.is_rational:
        raise PolicyError("The heuristic policy is for algebras over Q, the algebra is over {}".format(field.name()))

    n = algebra.dim
    if n == 1:
        return SimplicityVerdict(NOT_SIMPLE, "dimension", "one dimensional algebras are not simple by convention")
    if algebra.is_abelian():
        witness = span(field, n, [algebra.basis_vector(0)])
        return _not_simple(algebra, "derived", "abelian, every subspace is an ideal", witness)
    z = center(algebra)
    if not z.is_zero():
        return _not_simple(algebra, "center", "nonzero center of dimension {}".format(z.dim), z)
    derived = derived_subalgebra(algebra)
    if not derived.is_full():
        return _not_simple(algebra, "derived", "derived algebra has dimension {} < {}".format(derived.dim, n), derived)

    if not field.is_rational:
        result = exhaustive_check(algebra, budget, pool, parts)
        if result is None:
            return SimplicityVerdict(UNKNOWN, "budget", "{} lines exceed the enumeration budget {}".format(line_count(field.characteristic, n), budget), prime=field.characteristic)
        first, checked = result
        if first is None:
            return SimplicityVerdict(SIMPLE, "exhaustive", "every line generates the whole algebra", prime=field.characteristic, lines_checked=checked)
        return _not_simple(algebra, "exhaustive", "line {} generates a proper ideal".format(first), line_witness(algebra, first), prime=field.characteristic, lines=checked)

    rng = np.random.default_rng(seed)
    candidates = [algebra.basis_vector(i) for i in range(n)]
    for _ in range(samples):
        candidates.append([int(x) for x in rng.integers(-3, 4, size=n)])
    for vector in candidates:
        if not any(vector):
            continue
        closure = ideal_closure(algebra, [vector])
        if not closure.is_full():
            return _not_simple(algebra, "closure", "a sample vector generates a proper ideal of dimension {}".format(closure.dim), closure)

    primes = [prime] if prime else good_prime_list(algebra, good_primes)
    if not primes:
        return SimplicityVerdict(UNKNOWN, "reduction", "no good prime among {}".format(list(good_primes)))
    checked_total = 0
    for p in primes:
        reduced = algebra.reduce_mod(p)
        result = exhaustive_check(reduced, budget, pool, parts)
        if result is None:
            # Larger primes only have more lines
            return SimplicityVerdict(UNKNOWN, "budget", "{} lines modulo {} exceed the enumeration budget {}".format(line_count(p, n), p, budget), prime=p, lines_checked=checked_total)
        first, checked = result
        checked_total += checked
        if first is None:
            return SimplicityVerdict(SIMPLE, "reduction", "simple modulo {}, so simple over Q".format(p), prime=p, lines_checked=checked_total)
    return SimplicityVerdict(
        UNKNOWN, "reduction", "the reductions modulo {} all have a proper ideal, no conclusion over Q".format(", ".join(str(p) for p in primes)), prime=primes[-1], lines_checked=checked_total
    )
