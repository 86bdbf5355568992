"""Kneser p-neighbors, genus enumeration and Hecke operators for integral lattices."""
