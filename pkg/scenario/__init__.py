"""Scenario model: physical and numerical parameters of one experiment."""
