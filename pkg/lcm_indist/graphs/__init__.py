"""
Graph algorithms over augmented model graphs
"""
