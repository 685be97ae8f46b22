"""Approximation of Exact Matching on red/blue edge-colored bipartite graphs."""
