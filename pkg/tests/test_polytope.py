"""Unit tests for base-polytope queries and face machinery."""

import itertools
import random
from fractions import Fraction

import pytest

from corpus import ground, k3, part11, random_table, tiny_instances, u12, u23, u24
from polybase import (
    UniformRank,
    UsageError,
    bounding_box,
    dimension,
    enumerate_base_points,
    face_structure,
    greedy_vertex,
    in_base_polytope,
    in_extended_polymatroid,
    minimal_face_of_point,
    point_tight_family,
    tight_sets,
)


class TestMembership:
    def test_extended_polymatroid(self):
        f = u12()
        assert in_extended_polymatroid(f, (1, 0)) == (True, None)
        ok, viol = in_extended_polymatroid(f, (1, 1))
        assert not ok and viol == 0b11

    def test_base_polytope(self):
        f = u23()
        assert in_base_polytope(f, (1, 1, 0))
        assert not in_base_polytope(f, (2, 0, 0))
        assert not in_base_polytope(f, (1, 0, 0))  # wrong level

    def test_spanning_tree_vector(self):
        assert in_base_polytope(k3(), (1, 1, 0))
        assert not in_base_polytope(k3(), (1, 1, 1))


class TestBoundingBox:
    def test_uniform(self):
        assert bounding_box(u23()) == ((0, 0, 0), (1, 1, 1))

    def test_shift_translates(self):
        f = u12().shift((5, 5))
        assert bounding_box(f) == ((5, 5), (6, 6))

    def test_dual_negates(self):
        assert bounding_box(u23().dual()) == ((-1, -1, -1), (0, 0, 0))


class TestGreedy:
    def test_rank_increments(self):
        f = u23()
        assert greedy_vertex(f, (0, 1, 2)) == (1, 1, 0)
        assert greedy_vertex(f, (2, 1, 0)) == (0, 1, 1)

    def test_soundness_all_orders(self):
        for _, f in tiny_instances():
            n = f.ground.n
            if n > 4:
                continue
            for order in itertools.permutations(range(n)):
                assert in_base_polytope(f, greedy_vertex(f, order))

    def test_rejects_non_permutation(self):
        with pytest.raises(UsageError):
            greedy_vertex(u12(), (0, 0))


def definitional_tight_sets(f):
    """Oracle: subsets with x(U) = f(U) on every greedy vertex."""
    n = f.ground.n
    vertices = {
        greedy_vertex(f, order) for order in itertools.permutations(range(n))
    }
    out = []
    for mask in f.ground.subsets():
        if all(sum(v[i] for i in range(n) if mask >> i & 1) == f(mask) for v in vertices):
            out.append(mask)
    return out


class TestTightSets:
    def test_uniform_trivial_family(self):
        f = u24()
        assert tight_sets(f) == [0, 0b1111]

    def test_partition_blocks_are_tight(self):
        assert tight_sets(part11()) == [0, 0b0011, 0b1100, 0b1111]

    def test_criterion_matches_definitional_oracle(self):
        for _, f in tiny_instances():
            if f.ground.n > 4:
                continue
            assert tight_sets(f) == definitional_tight_sets(f)

    def test_lattice_closure(self):
        for _, f in tiny_instances():
            family = set(tight_sets(f))
            for a in family:
                for b in family:
                    assert (a | b) in family and (a & b) in family

    def test_all_maximal_chains_have_equal_length(self):
        for _, f in tiny_instances():
            if f.ground.n > 4:
                continue
            family = set(tight_sets(f))
            full = f.ground.full_mask

            def successors(a):
                ups = [s for s in family if s != a and s & a == a]
                return [s for s in ups if not any(t != a and t != s and t & a == a and s & t == t for t in ups)]

            lengths = set()

            def walk(a, depth):
                if a == full:
                    lengths.add(depth)
                    return
                for s in successors(a):
                    walk(s, depth + 1)

            walk(0, 0)
            assert len(lengths) == 1


class TestDimension:
    def test_examples(self):
        assert dimension(u24()) == 3
        assert dimension(part11()) == 2
        assert dimension(UniformRank(ground(1), 1)) == 0


class TestFaceStructure:
    def test_partition_factors(self):
        fs = face_structure(part11())
        assert fs.chain == (0, 0b0011, 0b1111)
        assert fs.blocks == (0b0011, 0b1100)
        for block_fn in fs.block_fns:
            # each block behaves like a rank-1 uniform matroid on 2 points
            assert [block_fn(m) for m in block_fn.ground.subsets()] == [0, 1, 1, 1]

    def test_full_dimensional_single_block(self):
        fs = face_structure(u23())
        assert fs.t == 1
        assert [fs.block_fns[0](m) for m in range(8)] == [u23()(m) for m in range(8)]

    def test_direct_sum_reconstruction(self):
        for _, f in tiny_instances():
            if f.ground.n > 4:
                continue
            fs = face_structure(f)
            whole = set(enumerate_base_points(f))
            block_points = [enumerate_base_points(fn) for fn in fs.block_fns]
            combined = {
                fs.scatter(combo)
                for combo in itertools.product(*block_points)
            }
            assert combined == whole


class TestMinimalFace:
    def test_vertex_has_zero_dimensional_face(self):
        fs = minimal_face_of_point(u23(), (1, 1, 0))
        assert fs.dim == 0
        assert len(fs.chain) == 4

    def test_u24_vertex(self):
        fs = minimal_face_of_point(u24(), (1, 1, 0, 0))
        assert fs.dim == 0

    def test_scaled_midpoint_sits_on_bigger_face(self):
        f = u23().scale(2)
        x = (2, 1, 1)
        fs = minimal_face_of_point(f, x)
        assert fs.dim >= 1
        # x restricted to each block lies in that block's base polytope
        for i, fn in enumerate(fs.block_fns):
            assert in_base_polytope(fn, fs.restrict_vector(x, i))

    def test_precondition_enforced(self):
        with pytest.raises(UsageError):
            minimal_face_of_point(u23(), (2, 0, 0))

    def test_point_tight_family_closed(self):
        rng = random.Random(31)
        f = random_table(ground(4), rng)
        x = greedy_vertex(f)
        family = set(point_tight_family(f, x))
        for a in family:
            for b in family:
                assert (a | b) in family and (a & b) in family


def hrep_vertices(f):
    """Oracle: vertices by solving all candidate tight systems exactly."""
    n = f.ground.n
    full = f.ground.full_mask
    masks = [m for m in range(1, full)]  # proper nonempty subsets
    found = set()
    for combo in itertools.combinations(masks, n - 1):
        rows = [[Fraction(1)] * n]  # x(E) = f(E)
        rhs = [Fraction(f(full))]
        for m in combo:
            rows.append([Fraction(1 if m >> i & 1 else 0) for i in range(n)])
            rhs.append(Fraction(f(m)))
        x = _solve_or_none(rows, rhs)
        if x is None:
            continue
        sums = {
            mask: sum(x[i] for i in range(n) if mask >> i & 1)
            for mask in range(1 << n)
        }
        if all(sums[mask] <= f(mask) for mask in range(1 << n)):
            found.add(tuple(x))
    return found


def _solve_or_none(rows, rhs):
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


class TestVertexCover:
    def test_greedy_set_equals_hrep_enumeration(self):
        for _, f in tiny_instances():
            if f.ground.n > 4:
                continue
            greedy = {
                tuple(Fraction(v) for v in greedy_vertex(f, order))
                for order in itertools.permutations(range(f.ground.n))
            }
            assert greedy == hrep_vertices(f)
