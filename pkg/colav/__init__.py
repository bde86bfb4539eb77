"""Short-term collision avoidance planning for autonomous surface vehicles."""
