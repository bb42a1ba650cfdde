import numpy as np
import pytest

from xsec import RankDeficientError, codim_profile, dim_profile, make_subspace, to_dilation
from xsec.section_model import as_dilation


def random_subspace(rng, n, d, given_as="H"):
    rows = rng.normal(size=(d if given_as == "H" else n - d, n))
    return make_subspace(n, given_as, rows)


class TestMakeSubspace:
    def test_line(self):
        assert make_subspace(2, "basis_of_H", [[1, 1]]).dim_H == 1

    def test_complement(self):
        assert make_subspace(3, "basis_of_complement", [[1, 1, 1]]).dim_H == 2

    def test_dependent_rows(self):
        with pytest.raises(RankDeficientError):
            make_subspace(2, "H", [[1, 0], [2, 0]])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="expected n=3"):
            make_subspace(3, "H", [[1, 0]])

    def test_bad_tag(self):
        with pytest.raises(ValueError):
            make_subspace(2, "span", [[1, 0]])

    def test_rows_stored_unmodified(self):
        s = make_subspace(3, "H", [[2.0, 0.0, 1.0]])
        np.testing.assert_array_equal(s.basis.rows, [[2.0, 0.0, 1.0]])


class TestProfiles:
    def test_codim_of_diagonal(self, diagonal_line):
        p = codim_profile(diagonal_line)
        assert p.mode == "codim" and p.k == 1
        np.testing.assert_allclose(p.matrix, [[2**-0.5, -(2**-0.5)]], rtol=1e-14)

    def test_codim_from_complement(self, hexagon_plane):
        p = codim_profile(hexagon_plane)
        np.testing.assert_allclose(p.matrix, np.full((1, 3), 3**-0.5), rtol=1e-14)

    def test_codim_of_full_space_raises(self):
        with pytest.raises(ValueError):
            codim_profile(make_subspace(2, "H", np.eye(2)))

    def test_dim_reads_off_rows(self):
        p = dim_profile(make_subspace(2, "H", [[1.0, 1.0]]))
        np.testing.assert_array_equal(p.columns, [[1.0], [1.0]])
        p = dim_profile(make_subspace(3, "H", [[1, -1, 0], [1, 1, -2]]))
        np.testing.assert_array_equal(p.columns, [[1, 1], [-1, 1], [0, -2]])

    def test_dim_from_complement_spans_H(self, hexagon_plane):
        p = dim_profile(hexagon_plane)
        assert p.k == 2
        np.testing.assert_allclose(p.matrix.sum(axis=1), 0.0, atol=1e-14)

    def test_dim_orthonormal_flag(self):
        p = dim_profile(make_subspace(2, "H", [[2.0, 2.0]]), orthonormal=True)
        np.testing.assert_allclose(p.matrix, [[2**-0.5, 2**-0.5]])

    @pytest.mark.parametrize("seed", range(20))
    def test_outer_sums(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        d = int(rng.integers(1, n))
        s = random_subspace(rng, n, d, rng.choice(["H", "complement"]))
        pc = codim_profile(s)
        assert pc.k == n - d
        assert np.abs(pc.outer_sum() - np.eye(n - d)).max() <= 1e-9
        pd = dim_profile(s)
        assert pd.k == d
        assert np.abs(pd.outer_sum() - s.basis_of_H().gram()).max() <= 1e-10

    def test_permutation_permutes_columns(self, rng):
        s = random_subspace(rng, 5, 2)
        perm = rng.permutation(5)
        sp = s.permuted(perm)
        np.testing.assert_array_equal(dim_profile(sp).columns, dim_profile(s).columns[perm])
        # the codim basis may rotate, but the projector onto H-perp permutes
        P = codim_profile(s).matrix.T @ codim_profile(s).matrix
        Pp = codim_profile(sp).matrix.T @ codim_profile(sp).matrix
        np.testing.assert_allclose(Pp, P[np.ix_(perm, perm)], atol=1e-12)


class TestDilation:
    def test_zero(self):
        np.testing.assert_array_equal(to_dilation([0.0, 0.0, 0.0]), [1.0, 1.0, 1.0])

    def test_logs(self):
        np.testing.assert_allclose(to_dilation([np.log(2), np.log(3)]), [2.0, 3.0], rtol=1e-15)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            to_dilation([1000.0])

    def test_positive(self):
        with pytest.raises(ValueError, match="positive"):
            as_dilation([1.0, 0.0, 1.0])
        with pytest.raises(ValueError):
            as_dilation([1.0, 2.0], n=3)
