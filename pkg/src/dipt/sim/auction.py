"""Sealed-bid task allocation: lowest cost wins, ties go to the lowest id."""


class EmptyAuction(Exception):
    """An auction needs at least one bid."""


def run_auction(bids: list[tuple[int, float]]) -> int:
    """Winner uav_id among (uav_id, cost) bids."""
    if not bids:
        raise EmptyAuction("no bids")
    return min(bids, key=lambda b: (b[1], b[0]))[0]
