"""numba kernels for the set-associative caches.

State is held in plain arrays so one compiled kernel serves every policy:

    tags[s, w]    block address, -1 when invalid
    rrpv[s, w]    3-bit re-reference prediction value
    stamp[s, w]   last-touch time (LRU)
    pinned[s, w]  pin bit (PinX)
    sig[s, w]     16KB region of the filled block (SHiP-MEM)
    reused[s, w]  hit since fill (SHiP-MEM)
    nxt[s, w]     position of the block's next reference (OPT)
    ctr           scalar counters, see C_* below
"""
import numpy as np
from numba import njit

LRU, DRRIP, GRASP, SHIP, PIN, OPT = range(6)
HIGH, MODERATE, LOW, DEFAULT = range(4)
MISS, HIT, BYPASS = 0, 1, 2

RRPV_MAX = 7
RRPV_LONG = 6
PSEL_MAX = 1023
PSEL_INIT = 512
BRRIP_PERIOD = 32  # one in 32 BRRIP fills gets the long (6) prediction
SHCT_MAX = 7
SHCT_INIT = 3
SHIP_REGION_BITS = 14  # 16KB regions

FOLLOWER, SRRIP_LEADER, BRRIP_LEADER = 0, 1, 2

C_CLOCK, C_PSEL, C_BRRIP, C_PINNED, C_PINNED_PEAK, C_EVICT, C_BYPASS = range(7)
N_COUNTERS = 7

NEVER = np.iinfo(np.int64).max


def leader_sets(num_sets: int, leaders_per_policy: int = 32) -> np.ndarray:
    """Set-dueling roles: one SRRIP and one BRRIP leader per constituency of sets.

    The leader's offset inside constituency ``c`` rotates with ``c`` so leaders
    are spread over low-order set-index bits.
    """
    roles = np.zeros(num_sets, dtype=np.int8)
    if num_sets == 1:
        roles[0] = SRRIP_LEADER
        return roles
    n_const = min(leaders_per_policy, num_sets // 2)
    size = num_sets // n_const
    for c in range(n_const):
        roles[c * size + c % size] = SRRIP_LEADER
        roles[c * size + (c + 1) % size] = BRRIP_LEADER
    return roles


@njit(cache=True)
def _rrip_victim(rrpv, pinned, s, ways, skip_pinned):
    """First way at RRPV_MAX; ages eligible lines until one exists. -1 if none eligible."""
    while True:
        oldest = -1
        for w in range(ways):
            if skip_pinned and pinned[s, w]:
                continue
            r = rrpv[s, w]
            if r == RRPV_MAX:
                return w
            if r > oldest:
                oldest = r
        if oldest < 0:
            return -1
        step = RRPV_MAX - oldest
        for w in range(ways):
            if not (skip_pinned and pinned[s, w]):
                rrpv[s, w] += step


@njit(cache=True)
def _drrip_insert(leader, ctr, s):
    """RRPV for a DRRIP fill in set ``s``; updates PSEL on leader-set misses."""
    role = leader[s]
    if role == SRRIP_LEADER:
        if ctr[C_PSEL] < PSEL_MAX:
            ctr[C_PSEL] += 1
        use_brrip = False
    elif role == BRRIP_LEADER:
        if ctr[C_PSEL] > 0:
            ctr[C_PSEL] -= 1
        use_brrip = True
    else:
        use_brrip = ctr[C_PSEL] >= PSEL_INIT
    if not use_brrip:
        return RRPV_LONG
    ctr[C_BRRIP] += 1
    if ctr[C_BRRIP] % BRRIP_PERIOD == 0:
        return RRPV_LONG
    return RRPV_MAX


@njit(cache=True)
def llc_access(tags, rrpv, stamp, pinned, sig, reused, nxt, leader, shct, ctr,
               policy, ways, pin_budget, block_bits, opt_bypass,
               block, hint, next_use):
    num_sets = tags.shape[0]
    s = block & (num_sets - 1)
    ctr[C_CLOCK] += 1

    for w in range(ways):
        if tags[s, w] == block:
            if policy == LRU:
                stamp[s, w] = ctr[C_CLOCK]
            elif policy == GRASP:
                if hint == HIGH or hint == DEFAULT:
                    rrpv[s, w] = 0
                elif rrpv[s, w] > 0:
                    rrpv[s, w] -= 1
            elif policy == SHIP:
                rrpv[s, w] = 0
                reused[s, w] = True
                r = sig[s, w]
                if shct[r] < SHCT_MAX:
                    shct[r] += 1
            elif policy == OPT:
                nxt[s, w] = next_use
            else:  # DRRIP, PIN
                rrpv[s, w] = 0
            return HIT

    victim = -1
    for w in range(ways):
        if tags[s, w] == -1:
            victim = w
            break

    if victim == -1:
        if policy == LRU:
            victim = 0
            for w in range(1, ways):
                if stamp[s, w] < stamp[s, victim]:
                    victim = w
        elif policy == OPT:
            victim = 0
            for w in range(1, ways):
                if nxt[s, w] > nxt[s, victim]:
                    victim = w
            if opt_bypass and next_use >= nxt[s, victim]:
                ctr[C_BYPASS] += 1
                return BYPASS
        else:
            victim = _rrip_victim(rrpv, pinned, s, ways, policy == PIN)
            if victim == -1:
                ctr[C_BYPASS] += 1
                return BYPASS
        if policy == SHIP and not reused[s, victim]:
            r = sig[s, victim]
            if shct[r] > 0:
                shct[r] -= 1
        ctr[C_EVICT] += 1

    tags[s, victim] = block
    reused[s, victim] = False
    pinned[s, victim] = False
    if policy == LRU:
        stamp[s, victim] = ctr[C_CLOCK]
    elif policy == DRRIP:
        rrpv[s, victim] = _drrip_insert(leader, ctr, s)
    elif policy == GRASP:
        if hint == HIGH:
            rrpv[s, victim] = 0
        elif hint == MODERATE:
            rrpv[s, victim] = RRPV_LONG
        elif hint == LOW:
            rrpv[s, victim] = RRPV_MAX
        else:
            rrpv[s, victim] = _drrip_insert(leader, ctr, s)
    elif policy == SHIP:
        r = (block << block_bits) >> SHIP_REGION_BITS
        sig[s, victim] = r
        rrpv[s, victim] = RRPV_MAX if shct[r] == 0 else RRPV_LONG
    elif policy == PIN:
        if hint == HIGH and ctr[C_PINNED] < pin_budget:
            rrpv[s, victim] = 0
            pinned[s, victim] = True
            ctr[C_PINNED] += 1
            if ctr[C_PINNED] > ctr[C_PINNED_PEAK]:
                ctr[C_PINNED_PEAK] = ctr[C_PINNED]
        else:
            rrpv[s, victim] = _drrip_insert(leader, ctr, s)
    else:  # OPT
        nxt[s, victim] = next_use
    return MISS


@njit(cache=True)
def llc_run(tags, rrpv, stamp, pinned, sig, reused, nxt, leader, shct, ctr,
            policy, ways, pin_budget, block_bits, opt_bypass,
            blocks, hints, next_use, outcome):
    use_next = len(next_use) > 0
    for i in range(len(blocks)):
        nu = next_use[i] if use_next else NEVER
        outcome[i] = llc_access(tags, rrpv, stamp, pinned, sig, reused, nxt, leader,
                                shct, ctr, policy, ways, pin_budget, block_bits,
                                opt_bypass, blocks[i], hints[i], nu)


@njit(cache=True)
def lru_filter(blocks, num_sets, ways):
    """Replay ``blocks`` through an LRU write-allocate cache; True where it misses."""
    tags = np.full((num_sets, ways), -1, dtype=np.int64)
    stamp = np.zeros((num_sets, ways), dtype=np.int64)
    miss = np.zeros(len(blocks), dtype=np.bool_)
    mask = num_sets - 1
    for i in range(len(blocks)):
        b = blocks[i]
        s = b & mask
        hit = False
        victim = 0
        for w in range(ways):
            if tags[s, w] == b:
                stamp[s, w] = i + 1
                hit = True
                break
            if stamp[s, w] < stamp[s, victim]:
                victim = w
        if not hit:
            miss[i] = True
            tags[s, victim] = b
            stamp[s, victim] = i + 1
    return miss
