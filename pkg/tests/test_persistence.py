import numpy as np
import pytest

from oracles import bars_alive, betti_numbers, random_filtered_complex
from patchtopo.errors import DataError
from patchtopo.persistence import (Barcode, FilteredComplex, barcode_entropy,
                                   compute_persistence)


def _bars(barcodes, dim):
    return barcodes[dim].canonical().tolist()


class TestComputePersistence:
    def test_single_vertex(self):
        fc = FilteredComplex.from_cells([(0, 0, 0.0, [])])
        b = compute_persistence(fc)
        assert _bars(b, 0) == [[0.0, np.inf]]
        assert b[1].n_bars == 0 and b[2].n_bars == 0

    def test_edge_merge(self):
        fc = FilteredComplex.from_cells(
            [(0, 0, 0.0, []), (1, 0, 0.0, []), (2, 1, 1.0, [0, 1])])
        assert _bars(compute_persistence(fc), 0) == [[0.0, 1.0], [0.0, np.inf]]

    def test_filtered_triangle_boundary(self):
        fc = FilteredComplex.from_cells([
            (0, 0, 0.0, []), (1, 0, 0.0, []), (2, 0, 0.0, []),
            (3, 1, 1.0, [0, 1]), (4, 1, 1.0, [1, 2]), (5, 1, 1.0, [0, 2]),
        ])
        b = compute_persistence(fc)
        assert _bars(b, 0) == [[0.0, 1.0], [0.0, 1.0], [0.0, np.inf]]
        assert _bars(b, 1) == [[1.0, np.inf]]

    def test_zero_persistence_bars_dropped(self):
        fc = FilteredComplex.from_cells(
            [(0, 0, 0.0, []), (1, 0, 0.0, []), (2, 1, 0.0, [0, 1])])
        b = compute_persistence(fc)
        assert _bars(b, 0) == [[0.0, np.inf]]

    def test_matches_betti_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            fc = random_filtered_complex(rng)
            assert fc.n_cells <= 200
            barcodes = compute_persistence(fc, 2)
            for t in np.unique(fc.values):
                assert bars_alive(barcodes, t) == betti_numbers(fc, t, 2)

    def test_one_infinite_h0_per_component(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            fc = random_filtered_complex(rng)
            barcodes = compute_persistence(fc, 2)
            n_inf = int(np.isinf(barcodes[0].bars[:, 1]).sum())
            # compare against union-find on the final 1-skeleton
            parent = list(range(fc.n_cells))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for j in range(fc.n_cells):
                if fc.dims[j] == 1:
                    u, v = fc.indices[fc.indptr[j]:fc.indptr[j + 1]]
                    parent[find(int(u))] = find(int(v))
            comps = {find(i) for i in range(fc.n_cells) if fc.dims[i] == 0}
            assert n_inf == len(comps)

    def test_tiebreak_invariance(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            fc = random_filtered_complex(rng)
            base = compute_persistence(fc, 2)
            # rebuild with shuffled ids: equal (value, dim) cells reorder
            perm = rng.permutation(fc.n_cells)
            cells = []
            for i in range(fc.n_cells):
                faces = [int(perm[f]) for f in fc.indices[fc.indptr[i]:fc.indptr[i + 1]]]
                cells.append((int(perm[i]), int(fc.dims[i]), float(fc.values[i]), faces))
            shuffled = compute_persistence(FilteredComplex.from_cells(cells), 2)
            for d in range(3):
                assert np.array_equal(base[d].canonical(), shuffled[d].canonical())


class TestValidation:
    def test_face_value_above_coface(self):
        # via from_cells the value violation surfaces as an ordering breach
        with pytest.raises(DataError, match="precede"):
            FilteredComplex.from_cells(
                [(0, 0, 2.0, []), (1, 0, 0.0, []), (2, 1, 1.0, [0, 1])])
        # direct construction with unsorted values is rejected outright
        with pytest.raises(DataError, match="not sorted"):
            FilteredComplex(
                dims=np.array([0, 0, 1], dtype=np.int8),
                values=np.array([0.0, 2.0, 1.0]),
                indptr=np.array([0, 0, 0, 2], dtype=np.int64),
                indices=np.array([0, 1], dtype=np.int64),
            )

    def test_unknown_face(self):
        with pytest.raises(DataError, match="unknown cell id"):
            FilteredComplex.from_cells([(0, 0, 0.0, []), (2, 1, 1.0, [0, 7])])

    def test_wrong_face_dimension(self):
        with pytest.raises(DataError, match="one dimension lower"):
            FilteredComplex.from_cells(
                [(0, 0, 0.0, []), (1, 0, 0.0, []), (2, 1, 1.0, [0, 1]),
                 (3, 1, 1.0, [0, 1]), (4, 1, 2.0, [0, 2])])

    def test_empty_boundary_above_dim0(self):
        with pytest.raises(DataError, match="empty boundary"):
            FilteredComplex.from_cells([(0, 0, 0.0, []), (1, 1, 1.0, [])])

    def test_duplicate_ids(self):
        with pytest.raises(DataError, match="duplicate"):
            FilteredComplex.from_cells([(0, 0, 0.0, []), (0, 0, 1.0, [])])


class TestBarcodeEntropy:
    def test_single_bar(self):
        assert barcode_entropy(Barcode(dim=0, bars=[(0.0, 1.0)])) == 0.0

    def test_uniform_bars(self):
        for n in (2, 5, 11):
            bc = Barcode(dim=0, bars=[(0.0, 3.0)] * n)
            assert abs(barcode_entropy(bc) - np.log(n)) < 1e-12

    def test_quarter_three_quarter(self):
        bc = Barcode(dim=0, bars=[(0.0, 1.0), (0.0, 3.0)])
        expect = -(0.25 * np.log(0.25) + 0.75 * np.log(0.75))
        assert abs(barcode_entropy(bc) - expect) < 1e-12
        assert abs(barcode_entropy(bc) - 0.5623351446) < 1e-9

    def test_infinite_excluded_and_empty(self):
        assert barcode_entropy(Barcode(dim=0)) == 0.0
        assert barcode_entropy(Barcode(dim=0, bars=[(0.0, np.inf)])) == 0.0
        mixed = Barcode(dim=0, bars=[(0.0, 1.0), (0.0, np.inf)])
        assert barcode_entropy(mixed) == 0.0  # one finite bar

    def test_scale_invariance(self):
        rng = np.random.default_rng(3)
        births = rng.random(12)
        bars = np.column_stack([births, births + rng.random(12)])
        e1 = barcode_entropy(Barcode(dim=1, bars=bars))
        e2 = barcode_entropy(Barcode(dim=1, bars=7.5 * bars))
        assert abs(e1 - e2) < 1e-12
