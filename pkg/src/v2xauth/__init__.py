"""Anonymous handover authentication with chameleon-hash credentials for
vehicular networks: crypto primitives, wire formats, a simulated
ledger, the four protocol roles, and a deterministic network
simulation with benchmarks.
"""

__version__ = "0.1.0"
