from hypothesis import HealthCheck, settings

# field solves and CPB diagonalizations blow past the default deadline on
# loaded CI boxes; wall-time limits belong to the acceptance tests instead
settings.register_profile(
    "flipkit",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("flipkit")
