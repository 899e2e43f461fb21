"""Harmonic Maass form with shadow Θ³: coefficients, closed forms and identity checks"""
