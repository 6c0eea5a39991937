"""qfoundry: a numerical laboratory for quantum foundations experiments.

Measurement and collapse rules, Bell-type inequalities, decoherence,
thought-experiment state chains, Gaussian and holographic entanglement
entropy, black-hole thermodynamics, Page curves, emergent clock time, and
pilot-wave dynamics, with a reproducible CLI experiment driver.
"""

__version__ = "0.1.0"
