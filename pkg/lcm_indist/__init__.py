"""
lcm_indist - input-output equations and permutation indistinguishability
for linear compartmental models, computed from graph structure
"""

__version__ = "0.1.0"
