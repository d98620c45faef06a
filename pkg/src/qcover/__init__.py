"""Exact decisions for the Q-covering problem and Q-matricity (n <= 3)."""
