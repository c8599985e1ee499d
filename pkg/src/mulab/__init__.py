"""Combinatorial μ-numbers, homology and lower-bound verification for simplicial complexes."""
