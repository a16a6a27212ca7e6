"""Version information for nckit."""

__version__ = "0.3.0"
__version_info__ = (0, 3, 0)

# Release information
__title__ = "nckit"
__description__ = "Model checking, bisimulation and proof checking for strong noncontingency logic"
__author__ = "Tyler Zervas"
__email__ = "tz-dev@vectorweight.com"
__license__ = "MIT"
__copyright__ = "Copyright 2025 Tyler Zervas"

# Build metadata
__status__ = "Alpha"

MIN_PYTHON_VERSION = (3, 10)
