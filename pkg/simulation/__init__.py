"""Monte Carlo particle simulator of the impulse response."""
