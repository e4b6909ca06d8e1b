"""
spacetime_duality

Space-time duality, periodic-orbit action spectra and spectral form factors
for kicked spin chains and coupled cat maps.
"""

__version__ = "0.1.0"
