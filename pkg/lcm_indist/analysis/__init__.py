"""
Analysis layer: input-output equations, indistinguishability, simulation
"""
