"""Sensing records and the append-only dataset with incremental cell sums."""

import numpy as np
import pytest

from activesearch.errors import InvalidCell, NonPositiveConfidence
from activesearch.grid import GridSpec
from activesearch.sensing import RecordKind, SensingDataset, SensingRecord


def make_record(cell, y=1.0, c=1.0, robot=0, kind=RecordKind.SELF_POSITION):
    return SensingRecord(cell_index=cell, observation_y=y, confidence_c=c, source_robot=robot, kind=kind)


def test_record_kind_values():
    assert RecordKind.SELF_POSITION.value == "SelfPosition"
    assert RecordKind.SELF_DETECTION.value == "SelfDetection"
    assert RecordKind.PEER_POSITION.value == "PeerPosition"
    assert RecordKind.PEER_GOAL_CELL.value == "PeerGoalCell"
    assert RecordKind.PEER_DETECTION.value == "PeerDetection"


def test_record_rejects_nonpositive_confidence():
    with pytest.raises(NonPositiveConfidence):
        make_record(0, c=0.0)
    with pytest.raises(NonPositiveConfidence):
        make_record(0, c=-0.5)


def test_record_is_immutable():
    rec = make_record(0)
    with pytest.raises(Exception):
        rec.observation_y = 2.0


def test_empty_dataset():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    assert len(ds) == 0
    assert ds.records == ()
    assert ds.known_cells() == set()
    assert not ds.touched_mask().any()
    np.testing.assert_array_equal(ds.weight_sums(), np.zeros(4))
    np.testing.assert_array_equal(ds.weighted_observations(), np.zeros(4))


def test_append_updates_sums():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    ds.append(make_record(0, y=1.0, c=1.0))
    ds.append(make_record(0, y=0.0, c=0.5))
    ds.append(make_record(3, y=1.0, c=0.2))
    assert len(ds) == 3
    np.testing.assert_allclose(ds.weight_sums(), [1.5, 0.0, 0.0, 0.2])
    np.testing.assert_allclose(ds.weighted_observations(), [1.0, 0.0, 0.0, 0.2])
    assert ds.known_cells() == {0, 3}


def test_sums_match_design_matrix_route():
    grid = GridSpec(width_cells=3, height_cells=3, cell_size=1.0)
    rng = np.random.default_rng(5)
    ds = SensingDataset(grid)
    for _ in range(40):
        ds.append(
            make_record(
                int(rng.integers(0, 9)),
                y=float(rng.uniform(-1, 2)),
                c=float(rng.uniform(0.01, 2.0)),
            )
        )
    X, y, c = ds.design_matrices()
    assert X.shape == (40, 9)
    np.testing.assert_allclose(ds.weight_sums(), X.T @ c, rtol=1e-12)
    np.testing.assert_allclose(ds.weighted_observations(), X.T @ (c * y), rtol=1e-12)
    assert (X.sum(axis=1) == 1.0).all()


def test_append_rejects_bad_cell():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    with pytest.raises(InvalidCell):
        ds.append(make_record(4))
    with pytest.raises(InvalidCell):
        ds.append(make_record(-1))


def test_extend_and_iteration_order():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    recs = [make_record(0), make_record(1), make_record(2)]
    ds.extend(recs)
    assert list(ds) == recs
    assert ds.records == tuple(recs)


def test_copy_is_independent():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    ds.append(make_record(0))
    dup = ds.copy()
    dup.append(make_record(1))
    assert len(ds) == 1
    assert len(dup) == 2
    assert ds.known_cells() == {0}
    assert dup.known_cells() == {0, 1}


def test_constructor_seeds_from_records():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid, records=[make_record(1, y=1.0, c=0.4)])
    assert len(ds) == 1
    assert ds.weight_sums()[1] == pytest.approx(0.4)
