"""Hill-climb for near-equality cases and replay the witnesses."""

from buzano_lab.inequalities import InequalityId, evaluate, tightness_search

for id_ in (
    InequalityId.CAUCHY_SCHWARZ,
    InequalityId.BUZANO,
    InequalityId.GRAM_BUZANO,
    InequalityId.OMEGA_SQUARE,
    InequalityId.NORM_MINUS_OMEGA,
    InequalityId.OMEGA_POLAR,
):
    ratio, w = tightness_search(id_, 3, restarts=16, seed=1)
    again = evaluate(id_, w).ratio
    print(f"{id_.value:<20} best lhs/rhs {ratio:.9f}   replayed {again:.9f}")
