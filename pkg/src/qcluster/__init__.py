"""Quantum cluster mutation, basic quivers and reduced word graphs."""
