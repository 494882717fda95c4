import itertools
import json

import numpy as np
import pytest

from comvar import pointcount as pc
from comvar.bounds import Composition, nt_bound, vmpq_report
from comvar.exactalg import FieldMatrix, commutator
from oracles import block_positions, brute_count, brute_pairs, brute_vmpq, commutes, rank, strict_upper


class TestSystems:
    def test_nt_equation_count(self):
        for n in range(1, 8):
            assert len(pc.nt_system(n).equations) == (n - 1) * (n - 2) // 2

    def test_ct_equation_count(self):
        for n in range(1, 7):
            assert len(pc.ct_system(n).equations) == n * (n - 1) // 2

    def test_free_variables(self):
        sys4 = pc.nt_system(4)
        assert [sys4.names[v] for v in sys4.free_vars] == ["x14", "y14"]
        assert len(pc.nt_system(2).free_vars) == 2

    def test_residuals_agree_with_commutator_and_determinant_form(self):
        # three membership tests on every candidate of small NT_n
        for n, q in [(3, 2), (3, 3), (4, 2)]:
            system = pc.nt_system(n)
            for x, y in brute_pairs(n, strict_upper(n), q):
                fx, fy = FieldMatrix.from_rows(x, q), FieldMatrix.from_rows(y, q)
                values = [x[i][j] for i, j in strict_upper(n)] + [y[i][j] for i, j in strict_upper(n)]
                by_system = not any(system.residuals(values, q))
                by_commutator = commutator(fx, fy).is_zero()
                by_determinants = not any(pc.determinant_residuals(fx, fy).values())
                assert by_system == by_commutator == by_determinants


class TestCountNT:
    @pytest.mark.parametrize("q", [2, 3, 5, 7])
    def test_nt2(self, q):
        assert pc.count_nt(2, q) == q * q

    def test_nt3_f2(self):
        assert pc.count_nt(3, 2) == 40

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_nt3_matches_brute_force(self, q):
        assert pc.count_nt(3, q) == brute_count(3, strict_upper(3), q)

    def test_nt4_f2_matches_brute_force(self):
        assert pc.count_nt(4, 2) == brute_count(4, strict_upper(4), 2)

    def test_factoring_soundness(self):
        # same system with the free coordinates forced into the enumeration
        for q in (2, 3):
            system = pc.nt_system(3)
            pinned = pc.BilinearSystem(system.names, system.equations + (((0, 1, 4),),))
            assert pinned.free_vars == ()
            assert pc.count_solutions(pinned, q) == pc.count_solutions(system, q)

    def test_threads_agree(self, monkeypatch):
        monkeypatch.setattr(pc, "_CHUNK", 1000)
        assert pc.count_nt(4, 3, threads=4) == pc.count_nt(4, 3, threads=1)

    def test_ct2_brute_force(self):
        upper = [(i, j) for i in range(2) for j in range(i, 2)]
        for q in (2, 3):
            assert pc.count_ct(2, q) == brute_count(2, upper, q)

    def test_budget(self):
        with pytest.raises(pc.BudgetExceeded) as info:
            pc.count_nt(5, 3, budget=1000)
        assert info.value.required == 3**18

    def test_env_budget(self, monkeypatch):
        monkeypatch.setenv("COMVAR_BUDGET", "10")
        with pytest.raises(pc.BudgetExceeded):
            pc.count_nt(3, 2)


class TestCountComposition:
    def test_single_block(self):
        for q in (2, 3):
            assert pc.count_nt_composition(Composition((4,)), q) == 1

    def test_two_singletons(self):
        assert pc.count_nt_composition(Composition((1, 1)), 3) == 9

    def test_three_singletons_f2(self):
        j = Composition((1, 1, 1))
        count = pc.count_nt_composition(j, 2)
        assert count == brute_count(3, block_positions(j.blocks), 2) == 40
        assert count >= 2 ** nt_bound(j)

    @pytest.mark.parametrize("blocks", [(1, 2, 1), (2, 1, 2), (1, 1, 2), (2, 2)])
    def test_against_brute_force(self, blocks):
        j = Composition(blocks)
        assert pc.count_nt_composition(j, 2) == brute_count(j.n, block_positions(blocks), 2)

    def test_count_respects_lower_bound(self):
        for blocks in [(1, 2, 1), (1, 1, 1, 1), (2, 1, 2), (1, 3, 1)]:
            j = Composition(blocks)
            for q in (2, 3):
                assert pc.count_nt_composition(j, q) >= q ** nt_bound(j)


class TestVmpq:
    def test_111(self):
        assert pc.count_vmpq(1, 1, 1, 2) == 3

    @pytest.mark.parametrize("dims", list(itertools.product([1, 2], repeat=3)))
    def test_against_brute_force(self, dims):
        m, p, q = dims
        assert pc.count_vmpq(m, p, q, 3) == brute_vmpq(m, p, q, 3)
        for a, b, _ in vmpq_report(m, p, q).components:
            assert pc.count_vmpq(m, p, q, 2, a, b) == brute_vmpq(m, p, q, 2, a, b)

    @pytest.mark.parametrize("dims", list(itertools.product([1, 2], repeat=3)) + [(1, 3, 2), (2, 3, 1)])
    def test_rank_cells_partition_total(self, dims):
        for field in (2, 3):
            cells = pc.vmpq_rank_cells(*dims, field)
            assert sum(cells.values()) == pc.count_vmpq(*dims, field)

    def test_slopes(self):
        assert pc.estimate_dimension(pc.vmpq_table(1, 1, 1, [2, 3, 5])).estimated_dim == 1
        assert pc.estimate_dimension(pc.vmpq_table(1, 2, 1, [2, 3, 5])).estimated_dim == 3


class TestEstimate:
    def test_exact_square(self):
        e = pc.estimate_dimension(pc.PointCountTable({}, {2: 4, 3: 9, 5: 25}, 0))
        assert (e.estimated_dim, e.consistent) == (2, True)

    def test_point(self):
        assert pc.estimate_dimension(pc.PointCountTable({}, {2: 1, 3: 1}, 0)).estimated_dim == 0

    def test_nt3(self):
        e = pc.estimate_dimension(pc.nt_table(3, [2, 3, 5]))
        assert (e.estimated_dim, e.consistent) == (5, True)

    def test_inconsistent_uses_median(self):
        e = pc.estimate_dimension(pc.PointCountTable({}, {2: 4, 3: 27, 5: 25}, 0))
        assert not e.consistent

    def test_errors(self):
        with pytest.raises(ValueError):
            pc.estimate_dimension(pc.PointCountTable({}, {2: 4}, 0))
        with pytest.raises(ValueError):
            pc.estimate_dimension(pc.PointCountTable({}, {2: 0, 3: 1}, 0))

    def test_table_json_roundtrip(self):
        table = pc.nt_table(3, [2, 3])
        data = json.loads(json.dumps(table.to_dict()))
        assert data["counts"] == {"2": "40", "3": "297"}
        assert data["free"] == 2
        assert pc.PointCountTable.from_dict(data).counts == table.counts

    def test_counts_bounded_by_ambient(self):
        table = pc.nt_table(4, [2, 3])
        for q, c in table.counts.items():
            assert c <= q ** pc.nt_system(4).n_vars


def _oracle_example_a(q):
    in1 = in0 = both = unc = total = 0
    for x, y in brute_pairs(4, strict_upper(4), q):
        if not commutes(x, y, q):
            continue
        total += 1
        a = x[1][2] == 0 and y[1][2] == 0
        b = rank([[x[0][1], x[1][2], x[2][3]], [y[0][1], y[1][2], y[2][3]]], q) <= 1
        in1 += a
        in0 += b
        both += a and b
        unc += not (a or b)
    return total, in1, in0, both, unc


class TestExampleA:
    def test_f2_matches_oracle(self):
        r = pc.verify_example_a(2)
        assert r.total == 4096
        assert (r.nt4_points, r.in_nt4_1, r.in_nt4_0, r.in_both, r.uncovered) == _oracle_example_a(2)

    def test_f3(self):
        r = pc.verify_example_a(3)
        assert r.total == 531441 and r.uncovered == 0
        assert r.in_nt4_1 + r.in_nt4_0 - r.in_both == r.nt4_points == pc.count_nt(4, 3)

    def test_zero_pair_in_both(self):
        # the zero pair and its q^2 shifts along the free corner entries lie in both loci
        for q in (2, 3):
            assert pc.verify_example_a(q).in_both >= q * q


class TestInvolution:
    def test_permutation_is_involution(self):
        for n in range(2, 6):
            system = pc.nt_system(n)
            perm = pc.involution_permutation(system, n)
            assert [perm[perm[k]] for k in range(len(perm))] == list(range(len(perm)))

    def test_zero_pair_fixed(self):
        z = FieldMatrix.zeros(4, 4, 3)
        assert pc.anti_transpose(z) == z

    def test_exhaustive(self):
        assert pc.verify_involution(3, 2)
        assert pc.verify_involution(4, 3)

    def test_random(self):
        assert pc.verify_involution(6, 7, samples=50, seed=3)

    def test_detects_broken_map(self, monkeypatch):
        # a non-involution permutation must be caught
        monkeypatch.setattr(pc, "involution_permutation", lambda system, n: list(np.roll(range(system.n_vars), 1)))
        assert not pc.verify_involution(4, 2)

    def test_all_points_expanded(self):
        pts = pc.all_points(pc.nt_system(3), 2)
        assert pts.shape == (40, 6)
        assert len({tuple(r) for r in pts}) == 40
