"""Spectra of antisymmetric pairing matrices and prime-periodic gauge scans."""

__version__ = "0.1.0"
