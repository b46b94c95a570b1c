"""Deformation families of Krichever-Novikov type current algebras."""
