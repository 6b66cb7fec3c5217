"""gkdvlab: pseudospectral generalized-KdV laboratory.

Simulates u_t + u_xxx + mu u^k u_x = 0 on a periodic box with spectral
accuracy, tracks Gevrey-weighted energies and the radius of spatial
analyticity along solutions, probes space-time norm inequalities with seeded
wave-packet ensembles, and evaluates the radius-decay schedule that the
weighted-energy machinery predicts for defocusing even-k dynamics.
"""

__version__ = "0.1.0"
