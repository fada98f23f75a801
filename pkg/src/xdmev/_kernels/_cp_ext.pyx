# cython: language_level=3
"""Compiled constant-product kernels.

Bit-identical twin of ``xdmev._kernels.pure``: operands stay Python ints
(reserve products exceed 128 bits, so no machine-word fast path exists);
the win is C-level loop control and call elimination in the grid scan.
"""

BPS_DENOM = 10_000


cdef object _swap_out(object reserve_in, object reserve_out, object amount_in, int fee_bps):
    if amount_in <= 0:
        return 0
    cdef object amount_eff = amount_in * (10_000 - fee_bps) // 10_000
    if amount_eff <= 0:
        return 0
    cdef object k = reserve_in * reserve_out
    cdef object denom = reserve_in + amount_eff
    cdef object kept = -(-k // denom)
    cdef object out = reserve_out - kept
    return out if out > 0 else 0


cdef object _round_trip(object buy_rin, object buy_rout, object sell_rin, object sell_rout,
                        int buy_fee_bps, int sell_fee_bps, object amount_in):
    cdef object mid = _swap_out(buy_rin, buy_rout, amount_in, buy_fee_bps)
    if mid <= 0:
        return -amount_in
    cdef object back = _swap_out(sell_rin, sell_rout, mid, sell_fee_bps)
    return back - amount_in


def swap_out(reserve_in, reserve_out, amount_in, fee_bps):
    return _swap_out(reserve_in, reserve_out, amount_in, fee_bps)


def round_trip_profit(buy_rin, buy_rout, sell_rin, sell_rout, buy_fee_bps, sell_fee_bps, amount_in):
    return _round_trip(buy_rin, buy_rout, sell_rin, sell_rout, buy_fee_bps, sell_fee_bps, amount_in)


def grid_scan(buy_rin, buy_rout, sell_rin, sell_rout, buy_fee_bps, sell_fee_bps, lo, hi, points):
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    if hi <= lo:
        raise ValueError("grid interval is empty")
    cdef object span = hi - lo
    cdef object steps = points - 1
    cdef object best_amount = lo
    cdef object best_profit = _round_trip(
        buy_rin, buy_rout, sell_rin, sell_rout, buy_fee_bps, sell_fee_bps, lo
    )
    cdef long long k
    cdef long long n = points
    cdef object numerator, amount, rem, twice, profit
    cdef int bfee = buy_fee_bps
    cdef int sfee = sell_fee_bps
    for k in range(1, n):
        numerator = lo * steps + span * k
        amount = numerator // steps
        rem = numerator - amount * steps
        twice = 2 * rem
        if twice > steps or (twice == steps and amount % 2):
            amount += 1
        profit = _round_trip(buy_rin, buy_rout, sell_rin, sell_rout, bfee, sfee, amount)
        if profit > best_profit:
            best_profit = profit
            best_amount = amount
    return best_amount, best_profit
