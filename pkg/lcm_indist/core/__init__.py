"""
Core value types: parameter labels, polynomials and compartmental models
"""
