# Fixtures are loaded via conftest.py pytest_plugins
# No need to import them here to avoid PytestAssertRewriteWarning
