#!/usr/bin/env python3
"""How the qutrit model manifests Kochen-Specker contextuality.

Fix a central element lam0 and consider every complete measurement that
contains it: the other two elements can be rotated freely around lam0.
An ontic state is *faithful* to lam0 when it answers lam0 in all of those
contexts; analytically that is exactly overlap(lam, lam0) > 1/2.  States
that answer lam0 in one context but flip in a rotated one are where the
contextuality lives -- and a preparation centered on lam0 with cutoff
delta >= 1/2 never produces them, which is why repeated measurement stays
certain.
"""

import numpy as np

import ontolab as ol
from ontolab.measurement import base_context_containing

ctx = base_context_containing(ol.make_pure_state([1, 0, 0]))

haar = ol.unfaithful_fraction(ctx, "haar", 20_000, 1_000, seed=4)
print("Haar-random ontic states:")
print(f"  flip under some rotated context: {haar.sampled.mean:.4f} +/- {haar.sampled.std_error:.4f}")
print(f"  analytic rule (outcome 0, overlap <= 1/2): {haar.analytic.mean:.4f}")
print(f"  geometry says P(outcome 0) - P(overlap > 1/2) = 1/3 - 1/4 = {1/3 - 1/4:.4f}")

law = ol.EpistemicState(ol.ModelSpec("linear-trace", 3, 3, 0.5), ctx.elements[0])
prepared = ol.unfaithful_fraction(ctx, law, 20_000, 200, seed=5)
print("\nStates prepared in the distribution centered on lam0 (delta = 1/2):")
print(f"  flip fraction: {prepared.sampled.mean}")
print(f"  analytic fraction: {prepared.analytic.mean}")
print("  The support is exactly the faithful set: contextual flips never surface.")

rng = np.random.default_rng(6)
lam = ol.haar_state(3, rng)
print("\nSpot check, one Haar state:")
print(f"  overlap with lam0 = {ol.overlap(lam, ctx.elements[0]):.4f}")
print(f"  faithful_analytic: {ol.faithful_analytic(lam, ctx.elements[0])}")
print(f"  faithful_sampled (1000 contexts): {ol.faithful_sampled(lam, ctx.elements[0], 1000, rng)}")
