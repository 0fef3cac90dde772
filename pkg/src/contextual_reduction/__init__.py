"""Contextual Reduction - contextual linear bandits solved through linear bandit reductions."""
