"""
Handle app settings in a central place
"""
import os

from typing import Optional

from cartan_vmrt.exceptions import ImproperlyConfigured


def _int_setting(name: str, default: int, minimum: int) -> int:
    """
    Read an integer setting from the environment.

    :param name: The environment variable
    :param default: The value to use when the variable is not set
    :param minimum: The smallest acceptable value
    :return: The validated value
    """
    raw = os.environ.get(name)
    if raw is None or raw == '':
        return default

    try:
        value = int(raw)
    except ValueError:
        raise ImproperlyConfigured("{} must be an integer, not {!r}".format(name, raw))

    if value < minimum:
        raise ImproperlyConfigured("{} must be at least {}".format(name, minimum))

    return value


def seed_override() -> Optional[int]:
    """
    The seed from CARTAN_VMRT_SEED at the time of the call, which takes precedence over command line seeds.

    :return: The seed or None when the variable isn't set
    """
    if not os.environ.get('CARTAN_VMRT_SEED'):
        return None
    return _int_setting('CARTAN_VMRT_SEED', 0, 0)


# Seed for the randomized structure constants
DEFAULT_SEED = _int_setting('CARTAN_VMRT_SEED', 1, 0)

# Rank bound for sweeps over the whole catalog
MAX_RANK = _int_setting('CARTAN_VMRT_MAX_RANK', 12, 7)

# Rank bound of the classification atlas
ATLAS_RANK = _int_setting('CARTAN_VMRT_ATLAS_RANK', 8, 7)

# Node expansions allowed in a single root map search
SEARCH_BUDGET = _int_setting('CARTAN_VMRT_SEARCH_BUDGET', 10 ** 7, 1)

# Independent trials of the randomized kernel oracle
ORACLE_TRIALS = _int_setting('CARTAN_VMRT_ORACLE_TRIALS', 3, 1)

# Sampled points per nonrigidity witness check
WITNESS_SAMPLES = _int_setting('CARTAN_VMRT_WITNESS_SAMPLES', 20, 1)
