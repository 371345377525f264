"""Channel model and peer-message fusion into sensing datasets."""

import numpy as np
import pytest

from activesearch.belief import em_posterior
from activesearch.comms import (
    ChannelConfig,
    FusionConfig,
    MessageKind,
    MessageQueue,
    PeerMessage,
    deliver,
    fuse_message,
)
from activesearch.errors import InvalidCell
from activesearch.grid import GridSpec
from activesearch.sensing import RecordKind, SensingDataset


def pose_msg(cell, sender=1, t=0.0):
    return PeerMessage(kind=MessageKind.POSE, sender=sender, timestamp=t, cell_index=cell)


def goal_msg(cells, sender=1, t=0.0):
    return PeerMessage(kind=MessageKind.GOAL, sender=sender, timestamp=t, cells=tuple(cells))


def track_msg(cell, y, c, sender=1, t=0.0):
    return PeerMessage(
        kind=MessageKind.TRACK, sender=sender, timestamp=t, cell_index=cell, observation_y=y, confidence_c=c
    )


# ---------------------------------------------------------------------------
# message validation
# ---------------------------------------------------------------------------


def test_pose_needs_cell():
    with pytest.raises(ValueError):
        PeerMessage(kind=MessageKind.POSE, sender=0, timestamp=0.0)


def test_goal_needs_cells():
    with pytest.raises(ValueError):
        PeerMessage(kind=MessageKind.GOAL, sender=0, timestamp=0.0, cells=())


def test_track_needs_positive_confidence():
    with pytest.raises(ValueError):
        PeerMessage(kind=MessageKind.TRACK, sender=0, timestamp=0.0, cell_index=1, observation_y=1.0)
    with pytest.raises(ValueError):
        track_msg(1, 1.0, 0.0)


def test_negative_timestamp_rejected():
    with pytest.raises(ValueError):
        pose_msg(0, t=-1.0)


def test_channel_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(enabled=True, drop_probability=1.5)
    with pytest.raises(ValueError):
        ChannelConfig(enabled=True, latency=-0.1)
    with pytest.raises(ValueError):
        FusionConfig(c_goal=0.0)


# ---------------------------------------------------------------------------
# fuse_message
# ---------------------------------------------------------------------------


def test_fuse_pose_appends_one_row():
    grid = GridSpec(width_cells=3, height_cells=3, cell_size=1.0)
    ds = SensingDataset(grid)
    fuse_message(ds, pose_msg(4, sender=2))
    assert len(ds) == 1
    rec = ds.records[0]
    assert rec.cell_index == 4
    assert rec.observation_y == 0.0
    assert rec.confidence_c == 1.0
    assert rec.source_robot == 2
    assert rec.kind == RecordKind.PEER_POSITION


def test_fuse_goal_appends_row_per_cell_in_order():
    grid = GridSpec(width_cells=3, height_cells=3, cell_size=1.0)
    ds = SensingDataset(grid)
    fuse_message(ds, goal_msg([2, 5, 8], sender=3))
    assert len(ds) == 3
    assert [r.cell_index for r in ds.records] == [2, 5, 8]
    for rec in ds.records:
        assert rec.kind == RecordKind.PEER_GOAL_CELL
        assert rec.observation_y == 0.0
        assert rec.confidence_c == 0.5
        assert rec.source_robot == 3


def test_fuse_track_carries_sender_values():
    grid = GridSpec(width_cells=3, height_cells=3, cell_size=1.0)
    ds = SensingDataset(grid)
    fuse_message(ds, track_msg(5, 1.0, 0.005, sender=1))
    rec = ds.records[0]
    assert rec.kind == RecordKind.PEER_DETECTION
    assert rec.observation_y == 1.0
    assert rec.confidence_c == 0.005


def test_fuse_respects_custom_config():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    cfg = FusionConfig(c_peer_pose=0.8, c_goal=0.3, y_empty=0.1)
    fuse_message(ds, pose_msg(0), cfg)
    fuse_message(ds, goal_msg([1]), cfg)
    assert ds.records[0].confidence_c == 0.8
    assert ds.records[0].observation_y == 0.1
    assert ds.records[1].confidence_c == 0.3


def test_fuse_preserves_existing_records():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    fuse_message(ds, pose_msg(0, t=0.0))
    fuse_message(ds, goal_msg([1, 2], t=1.0))
    kinds = [r.kind for r in ds.records]
    assert kinds == [RecordKind.PEER_POSITION, RecordKind.PEER_GOAL_CELL, RecordKind.PEER_GOAL_CELL]


def test_fuse_rejects_out_of_grid_cell():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    with pytest.raises(InvalidCell):
        fuse_message(ds, pose_msg(4))


def test_low_confidence_track_leaves_high_uncertainty():
    # the same detection fused at c=0.005 vs c=1 leaves much more posterior
    # variance on the cell
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    low = SensingDataset(grid)
    fuse_message(low, track_msg(1, 1.0, 0.005))
    high = SensingDataset(grid)
    fuse_message(high, track_msg(1, 1.0, 1.0))
    post_low = em_posterior(low, grid)
    post_high = em_posterior(high, grid)
    assert post_low.covariance[1, 1] > post_high.covariance[1, 1]
    assert post_low.covariance[1, 1] > 5.0


def test_goal_fusion_reduces_variance_below_untouched():
    grid = GridSpec(width_cells=2, height_cells=2, cell_size=1.0)
    ds = SensingDataset(grid)
    fuse_message(ds, goal_msg([0]))
    post = em_posterior(ds, grid)
    assert post.covariance[0, 0] < post.covariance[1, 1]


def test_arrival_order_invariance_of_fused_posterior():
    # the same delivered batch fused in sorted order produces one dataset;
    # shuffling the batch before the sort-based delivery must not matter
    grid = GridSpec(width_cells=3, height_cells=3, cell_size=1.0)
    batch = [
        pose_msg(0, sender=2, t=0.3),
        track_msg(4, 1.0, 0.2, sender=1, t=0.1),
        goal_msg([7, 8], sender=3, t=0.2),
    ]
    cfg = ChannelConfig(enabled=True, drop_probability=0.0, latency=0.0)
    orders = [batch, list(reversed(batch)), [batch[1], batch[0], batch[2]]]
    posts = []
    for msgs in orders:
        delivered = deliver(list(msgs), cfg, now=1.0, rng=np.random.default_rng(0))
        ds = SensingDataset(grid)
        for msg in delivered:
            fuse_message(ds, msg)
        posts.append(em_posterior(ds, grid))
    for post in posts[1:]:
        np.testing.assert_array_equal(posts[0].mean, post.mean)
        np.testing.assert_array_equal(posts[0].covariance, post.covariance)


# ---------------------------------------------------------------------------
# deliver and MessageQueue
# ---------------------------------------------------------------------------


def test_disabled_channel_delivers_nothing():
    cfg = ChannelConfig(enabled=False)
    msgs = [pose_msg(0, t=0.0), goal_msg([1], t=0.0)]
    assert deliver(msgs, cfg, now=10.0, rng=np.random.default_rng(0)) == []


def test_perfect_channel_delivers_all_sorted():
    cfg = ChannelConfig(enabled=True, drop_probability=0.0, latency=0.0)
    msgs = [pose_msg(0, sender=2, t=0.2), pose_msg(1, sender=1, t=0.1), pose_msg(2, sender=1, t=0.2)]
    out = deliver(msgs, cfg, now=1.0, rng=np.random.default_rng(0))
    assert [(m.timestamp, m.sender) for m in out] == [(0.1, 1), (0.2, 1), (0.2, 2)]


def test_total_drop_delivers_none():
    cfg = ChannelConfig(enabled=True, drop_probability=1.0, latency=0.0)
    msgs = [pose_msg(i, t=0.0) for i in range(5)]
    assert deliver(msgs, cfg, now=1.0, rng=np.random.default_rng(0)) == []


def test_drop_rate_monte_carlo():
    cfg = ChannelConfig(enabled=True, drop_probability=0.5, latency=0.0)
    msgs = [pose_msg(0, t=0.0) for _ in range(10_000)]
    out = deliver(msgs, cfg, now=1.0, rng=np.random.default_rng(7))
    assert abs(len(out) / 10_000 - 0.5) < 0.02


def test_latency_holds_messages_back():
    cfg = ChannelConfig(enabled=True, drop_probability=0.0, latency=0.5)
    msgs = [pose_msg(0, t=0.0), pose_msg(1, t=0.4)]
    early = deliver(list(msgs), cfg, now=0.6, rng=np.random.default_rng(0))
    assert [m.cell_index for m in early] == [0]
    late = deliver(list(msgs), cfg, now=0.9, rng=np.random.default_rng(0))
    assert [m.cell_index for m in late] == [0, 1]


def test_queue_draws_drop_at_push_time():
    # two queues see the same RNG stream; polling one of them twice as often
    # must not change what gets delivered
    cfg = ChannelConfig(enabled=True, drop_probability=0.5, latency=0.0)
    msgs = [pose_msg(i % 4, t=0.1 * i) for i in range(100)]

    q1 = MessageQueue(cfg, np.random.default_rng(42))
    for m in msgs:
        q1.push(m)
    got1 = q1.deliver(now=100.0)

    q2 = MessageQueue(cfg, np.random.default_rng(42))
    got2 = []
    for i, m in enumerate(msgs):
        q2.push(m)
        if i % 2 == 0:
            got2.extend(q2.deliver(now=100.0))
    got2.extend(q2.deliver(now=100.0))

    assert [(m.timestamp, m.cell_index) for m in got1] == sorted(
        (m.timestamp, m.cell_index) for m in got2
    )


def test_queue_push_reports_drop():
    cfg = ChannelConfig(enabled=True, drop_probability=1.0)
    q = MessageQueue(cfg, np.random.default_rng(0))
    assert q.push(pose_msg(0)) is False
    cfg_ok = ChannelConfig(enabled=True, drop_probability=0.0)
    q_ok = MessageQueue(cfg_ok, np.random.default_rng(0))
    assert q_ok.push(pose_msg(0)) is True


def test_disabled_queue_consumes_no_rng():
    cfg = ChannelConfig(enabled=False)
    rng = np.random.default_rng(5)
    q = MessageQueue(cfg, rng)
    for i in range(10):
        assert q.push(pose_msg(i % 3, t=float(i))) is False
    assert q.deliver(now=100.0) == []
    # the generator state is untouched: it produces the same first draw as a
    # fresh generator with the same seed
    assert rng.random() == np.random.default_rng(5).random()


def test_queue_latency_and_order():
    cfg = ChannelConfig(enabled=True, drop_probability=0.0, latency=1.0)
    q = MessageQueue(cfg, np.random.default_rng(0))
    q.push(pose_msg(0, sender=2, t=0.0))
    q.push(pose_msg(1, sender=1, t=0.0))
    q.push(pose_msg(2, sender=1, t=5.0))
    first = q.deliver(now=1.0)
    assert [(m.sender, m.cell_index) for m in first] == [(1, 1), (2, 0)]
    assert q.deliver(now=1.0) == []
    second = q.deliver(now=6.0)
    assert [(m.sender, m.cell_index) for m in second] == [(1, 2)]
