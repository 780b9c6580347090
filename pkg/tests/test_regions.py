import numpy as np
import pytest
from hypothesis import given, strategies as st

from grasplab.cachesim import AbrPair, RegionMap, ReuseHint, classify, classify_many
from grasplab.trace import build_layout


@pytest.fixture
def one_array():
    return RegionMap.from_abrs([AbrPair(0x10000, 0x50000)], 0x8000)


@pytest.mark.parametrize("addr, hint", [
    (0x12000, ReuseHint.HIGH), (0x10000, ReuseHint.HIGH), (0x17fff, ReuseHint.HIGH),
    (0x18000, ReuseHint.MODERATE), (0x19000, ReuseHint.MODERATE),
    (0x20000, ReuseHint.LOW), (0x30000, ReuseHint.LOW), (0x90000, ReuseHint.LOW),
    (0x0, ReuseHint.LOW),
])
def test_classify_boundaries(one_array, addr, hint):
    assert classify(addr, one_array) is hint


def test_no_abrs_means_default():
    for a in (0, 0x12000, 2**40):
        assert classify(a, None) is ReuseHint.DEFAULT
    assert (classify_many(np.array([1, 2, 3]), None) == ReuseHint.DEFAULT).all()


def test_two_arrays_split_capacity():
    r = RegionMap.from_abrs([AbrPair(0x100000, 0x200000), AbrPair(0x300000, 0x400000)], 0x8000)
    assert r.region_bytes == 0x4000
    assert [h.end - h.start for h in r.high] == [0x4000, 0x4000]
    assert classify(0x300000 + 0x4000, r) is ReuseHint.MODERATE
    assert classify(0x100000 + 0x8000, r) is ReuseHint.LOW


def test_moderate_clips_at_array_end():
    r = RegionMap.from_abrs([AbrPair(0x1000, 0x1000 + 0x6000)], 0x4000)
    assert (r.high[0].start, r.high[0].end) == (0x1000, 0x5000)
    assert (r.moderate[0].start, r.moderate[0].end) == (0x5000, 0x7000)


def test_small_array_is_all_high():
    r = RegionMap.from_abrs([AbrPair(0, 0x100)], 0x4000)
    assert r.high[0].end == 0x100 and r.moderate[0].start == r.moderate[0].end
    assert classify(0xff, r) is ReuseHint.HIGH


def test_abr_validation():
    with pytest.raises(ValueError):
        AbrPair(5, 5)
    with pytest.raises(ValueError):
        RegionMap.from_abrs([AbrPair(0, 100), AbrPair(50, 200)], 64)
    with pytest.raises(ValueError):
        RegionMap.from_abrs([], 64)


def test_from_layout_uses_property_arrays():
    lay = build_layout(100_000, 10, 2)
    r = RegionMap.from_layout(lay, 1 << 16)
    assert [h.start for h in r.high] == [a.base for a in lay.property_arrays]
    assert r.region_bytes == 1 << 15


@given(st.lists(st.integers(0, 0x80000), min_size=1, max_size=200),
       st.integers(1, 3), st.sampled_from([0x1000, 0x4000, 0x8000]))
def test_vectorised_matches_scalar(addrs, n_arrays, llc):
    abrs = [AbrPair(0x10000 + i * 0x20000, 0x10000 + i * 0x20000 + 0x18000)
            for i in range(n_arrays)]
    r = RegionMap.from_abrs(abrs, llc)
    vec = classify_many(np.array(addrs, dtype=np.int64), r)
    assert vec.tolist() == [int(classify(a, r)) for a in addrs]
    for h, m in zip(r.high, r.moderate):
        assert h.end <= m.start or m.start == m.end
