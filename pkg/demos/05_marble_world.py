#!/usr/bin/env python3
"""Marble world: a qubit as a marble rolling on a real sphere.

The marble's position is the complete physical state; an observer only
ever holds the density 2(lam.n)^2 - 1 on the polar cap lam.n >= 1/sqrt(2).
Colored lights shine from an axis m and the marble scatters green or red.
Doubling polar angles about the reference pole maps the sphere 2:1 onto
the qubit state space (antipodal marbles are the same qubit), and under
that map the cap density becomes the qubit model's weight and the light
response becomes the qubit response -- so the green light scatters with
probability cos^2(alpha) for lights at angle alpha, exactly the qubit
Born rule at Bloch angle 2*alpha.
"""

import numpy as np

import ontolab as ol
from ontolab import marble
from ontolab.engine import marble_green_run

print("green-scatter probability vs light angle:")
sweep = marble_green_run(np.linspace(0, np.pi / 2, 7), 100_000, seed=10)
for row in sweep.rows:
    if row.outcome == 0:
        print(f"  alpha = {row.theta:5.3f}: om = {row.om_estimate.mean:.4f}   cos^2 = {row.qm_prob:.4f}")

rng = np.random.default_rng(11)
lams = marble.sample_conditional_matrix(marble.POLE, 50_000, rng)
print("\nsampled marble positions, polar-cap check:")
print(f"  min lam.n = {np.min(lams @ marble.POLE.vector):.4f}  (support boundary 1/sqrt(2) = {1/np.sqrt(2):.4f})")

alpha = np.pi / 5
qubit = ol.estimate_outcome_probs(
    ol.make_model("ks-qubit"),
    ol.make_pure_state([np.cos(alpha), np.sin(alpha)]),
    ol.computational_context(2, 2),
    50_000, seed=12,
)
green = marble.outcomes_matrix(lams, marble.sphere_point(alpha)).mean()
print(f"\nangle doubling at alpha = pi/5:")
print(f"  marble green frequency:        {green:.4f}")
print(f"  qubit model outcome-0 frequency: {qubit[0].mean:.4f}")
print("  One story, two coordinate systems.")
