"""Closed-form channel models: transport relations, photolysis rate, impulse responses."""
