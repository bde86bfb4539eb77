"""Planner, world model and simulation services."""
