from hypothesis import settings

# property tests draw from a fixed corpus so suite runs are repeatable
settings.register_profile("repeatable", derandomize=True, deadline=None)
settings.load_profile("repeatable")
