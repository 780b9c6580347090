import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grasplab.cachesim import (BYPASS, DRRIP, GRASP, HIT, LRU, MISS, OPT, SHIP, CacheConfig,
                               LlcCache, Policy, PolicyKind, ReuseHint, precompute_next_use)
from grasplab.cachesim import engine

H, M, L, D = ReuseHint.HIGH, ReuseHint.MODERATE, ReuseHint.LOW, ReuseHint.DEFAULT


def geometry(sets=1, ways=2):
    return CacheConfig(llc_sets=sets, llc_ways=ways, l1_enabled=False)


def way_of(cache, block):
    s = block & (cache.config.llc_sets - 1)
    return int(np.flatnonzero(cache.tags[s] == block)[0])


def rrpv_of(cache, block):
    s = block & (cache.config.llc_sets - 1)
    return int(cache.rrpv[s, way_of(cache, block)])


def resident(cache):
    return set(cache.tags[cache.tags != -1].tolist())


def test_grasp_high_survives_low_stream():
    c = LlcCache(geometry(), GRASP)
    assert c.access(10, H) == MISS and rrpv_of(c, 10) == 0
    assert c.access(11, L) == MISS and rrpv_of(c, 11) == 7
    assert c.access(12, L) == MISS
    assert resident(c) == {10, 12}


def test_grasp_insertion_table():
    c = LlcCache(geometry(1, 4), GRASP)
    for b, h in [(1, H), (2, M), (3, L)]:
        c.access(b, h)
    assert [rrpv_of(c, b) for b in (1, 2, 3)] == [0, 6, 7]


def test_grasp_low_hit_decrements():
    c = LlcCache(geometry(), GRASP)
    c.access(5, L)
    assert c.access(5, L) == HIT and rrpv_of(c, 5) == 6
    c.access(5, M)
    assert rrpv_of(c, 5) == 5


def test_grasp_hit_at_zero_stays_zero():
    c = LlcCache(geometry(), GRASP)
    c.access(5, H)
    c.access(5, L)
    assert rrpv_of(c, 5) == 0


@pytest.mark.parametrize("hint", [H, D])
def test_grasp_high_and_default_hits_promote_fully(hint):
    c = LlcCache(geometry(), GRASP)
    c.access(5, L)
    c.access(5, hint)
    assert rrpv_of(c, 5) == 0


def test_drrip_srrip_leader_aging():
    c = LlcCache(geometry(), DRRIP)
    assert c.leader[0] == engine.SRRIP_LEADER
    c.access(1)
    c.access(2)
    assert (rrpv_of(c, 1), rrpv_of(c, 2)) == (6, 6)
    assert c.access(1) == HIT and rrpv_of(c, 1) == 0
    c.access(3)
    assert resident(c) == {1, 3}
    assert rrpv_of(c, 1) == 1  # aged once while Y climbed from 6 to 7


def test_victim_tie_lowest_way():
    c = LlcCache(geometry(1, 4), GRASP)
    for b in (1, 2, 3, 4):
        c.access(b, L)
    c.access(5, L)
    assert c.tags[0, 0] == 5


def test_drrip_psel_moves_with_leader_misses():
    cfg = geometry(sets=128, ways=2)
    c = LlcCache(cfg, DRRIP)
    srrip = int(np.flatnonzero(c.leader == engine.SRRIP_LEADER)[0])
    brrip = int(np.flatnonzero(c.leader == engine.BRRIP_LEADER)[0])
    before = int(c.ctr[engine.C_PSEL])
    c.access(srrip)
    assert c.ctr[engine.C_PSEL] == before + 1
    c.access(brrip)
    c.access(brrip + 128)
    assert c.ctr[engine.C_PSEL] == before - 1


def test_brrip_inserts_mostly_distant():
    c = LlcCache(geometry(sets=2, ways=1), DRRIP)
    assert c.leader[1] == engine.BRRIP_LEADER
    rr = []
    for i in range(64):
        c.access(2 * i + 1)
        rr.append(int(c.rrpv[1, 0]))
    assert rr.count(6) == 2 and rr.count(7) == 62


@pytest.mark.parametrize("n_sets", [1, 2, 4, 64, 1024, 4096])
def test_leader_sets(n_sets):
    roles = engine.leader_sets(n_sets)
    n_sr = int((roles == engine.SRRIP_LEADER).sum())
    n_br = int((roles == engine.BRRIP_LEADER).sum())
    if n_sets == 1:
        assert (n_sr, n_br) == (1, 0)
    else:
        assert n_sr == n_br == min(32, n_sets // 2)


def test_lru_evicts_oldest():
    c = LlcCache(geometry(1, 3), LRU)
    for b in (1, 2, 3, 1):
        c.access(b)
    c.access(4)
    assert resident(c) == {1, 3, 4}


def test_ship_learns_dead_region():
    cfg = geometry(1, 2)
    c = LlcCache(cfg, SHIP)
    region = lambda b: (b * cfg.block_size) >> 14
    # stream through one 16KB region without reuse: counter drains to 0
    blocks = list(range(0, 256))
    for b in blocks:
        c.access(b)
    assert c.shct[region(0)] == 0
    c.access(1000)
    assert rrpv_of(c, 1000) == 6  # untouched region keeps its initial counter
    c.access(200)  # drained region -> distant insertion
    assert rrpv_of(c, 200) == 7


def test_ship_hit_trains_up():
    c = LlcCache(geometry(1, 2), SHIP)
    c.access(0)
    for _ in range(10):
        c.access(0)
    assert c.shct[0] == engine.SHCT_MAX
    assert rrpv_of(c, 0) == 0


def test_pin_high_blocks_until_budget():
    cfg = geometry(1, 4)
    c = LlcCache(cfg, Policy(PolicyKind.PIN, 50))
    assert c.pin_budget == 2
    for b in (1, 2, 3):
        c.access(b, H)
    assert c.pinned_count == 2
    assert c.pinned[0, way_of(c, 1)] and c.pinned[0, way_of(c, 2)]
    assert not c.pinned[0, way_of(c, 3)]
    for b in range(10, 30):
        c.access(b, L)
    assert {1, 2} <= resident(c)


def test_pin100_bypasses_when_set_full():
    c = LlcCache(geometry(1, 2), Policy(PolicyKind.PIN, 100))
    c.access(1, H)
    c.access(2, H)
    assert c.access(3, L) == BYPASS
    assert resident(c) == {1, 2}
    assert c.access(1, L) == HIT


def test_opt_requires_next_use():
    c = LlcCache(geometry(), OPT)
    with pytest.raises(ValueError):
        c.access(1)
    with pytest.raises(ValueError):
        c.run(np.array([1, 2]), np.zeros(2, np.int8))


def misses(policy, blocks, cfg=None):
    cfg = cfg or geometry()
    blocks = np.asarray(blocks, dtype=np.int64)
    out = LlcCache(cfg, policy).run(blocks, np.full(len(blocks), D, np.int8),
                                    precompute_next_use(blocks))
    return int((out != HIT).sum())


def test_single_line_cache_all_policies():
    cfg = geometry(1, 1)
    for pol in (LRU, DRRIP, GRASP, SHIP, OPT, Policy(PolicyKind.PIN, 25),
                Policy(PolicyKind.OPT, opt_bypass=False)):
        assert misses(pol, [7, 7], cfg) == 1


def test_abcab_opt_vs_lru():
    seq = [0, 1, 2, 0, 1]
    assert misses(Policy(PolicyKind.OPT, opt_bypass=False), seq) == 4
    assert misses(LRU, seq) == 5
    assert misses(OPT, seq) == 3  # C left uncached


def test_policy_parse():
    assert Policy.parse("pin75") == Policy(PolicyKind.PIN, 75)
    assert Policy.parse("ship") == SHIP and Policy.parse("rrip") == DRRIP
    assert str(Policy.parse("opt-nobypass")) == "opt-nobypass"
    with pytest.raises(ValueError):
        Policy.parse("hawkeye")
    with pytest.raises(ValueError):
        Policy(PolicyKind.PIN, 0)


def test_cache_config_validation():
    assert CacheConfig().llc_bytes == 1 << 20 and CacheConfig().l1_bytes == 32 << 10
    with pytest.raises(ValueError):
        CacheConfig(llc_sets=3)
    with pytest.raises(ValueError):
        CacheConfig(llc_sets=8, llc_ways=2)  # L1 larger than LLC
    assert CacheConfig.from_llc_bytes(256 << 10).llc_sets == 256
    with pytest.raises(ValueError):
        CacheConfig.from_llc_bytes(3 << 10)


# --- randomised invariants ----------------------------------------------------

ALL_ONLINE = [LRU, DRRIP, GRASP, SHIP] + [Policy(PolicyKind.PIN, p) for p in (25, 50, 75, 100)]

fuzz = st.tuples(
    st.sampled_from([(1, 1), (1, 2), (2, 4), (4, 3), (8, 16)]),
    st.lists(st.tuples(st.integers(0, 63), st.sampled_from(list(ReuseHint))),
             min_size=1, max_size=300),
)


@given(fuzz, st.sampled_from([DRRIP, GRASP, SHIP, Policy(PolicyKind.PIN, 50),
                              Policy(PolicyKind.PIN, 100)]))
def test_rrpv_bounds_every_step(case, policy):
    (sets, ways), refs = case
    c = LlcCache(geometry(sets, ways), policy)
    for b, h in refs:
        c.access(b, h)
        r = c.valid_rrpvs()
        assert ((r >= 0) & (r <= 7)).all()
        assert (c.shct >= 0).all() and (c.shct <= 7).all()


@given(fuzz, st.sampled_from([25, 50, 75, 100]))
def test_pin_budget_and_permanence(case, pct):
    (sets, ways), refs = case
    c = LlcCache(geometry(sets, ways), Policy(PolicyKind.PIN, pct))
    pinned_blocks = set()
    for b, h in refs:
        c.access(b, h)
        assert int(c.pinned.sum()) == c.pinned_count <= c.pin_budget
        assert not (c.pinned & (c.tags == -1)).any()
        now = set(c.tags[c.pinned].tolist())
        assert pinned_blocks <= now  # pinned blocks are never evicted
        pinned_blocks = now


@given(fuzz)
def test_at_most_one_copy_per_block(case):
    (sets, ways), refs = case
    for pol in ALL_ONLINE:
        c = LlcCache(geometry(sets, ways), pol)
        for b, h in refs:
            c.access(b, h)
        valid = c.tags[c.tags != -1]
        assert len(valid) == len(set(valid.tolist()))


@settings(max_examples=100)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=16), st.integers(0, 31))
def test_grasp_and_drrip_pick_same_victim(ways_rrpv, incoming):
    """Eviction ignores the hint: identical (rrpv, way) contents -> identical victim."""
    ways = len(ways_rrpv)
    victims = []
    for pol, hint in [(DRRIP, D), (GRASP, H), (GRASP, M), (GRASP, L)]:
        c = LlcCache(geometry(1, ways), pol)
        c.tags[0, :] = np.arange(100, 100 + ways)
        c.rrpv[0, :] = ways_rrpv
        c.access(incoming, hint)
        victims.append(set(range(100, 100 + ways)) - resident(c))
        assert len(victims[-1]) == 1
    assert all(v == victims[0] for v in victims)


def test_aging_terminates_within_seven_rounds():
    c = LlcCache(geometry(1, 4), GRASP)
    c.tags[0, :] = [1, 2, 3, 4]
    c.rrpv[0, :] = 0
    c.access(9, L)
    assert 9 in resident(c) and 1 not in resident(c)
    assert c.rrpv[0, 1:].tolist() == [7, 7, 7]
