from .decision import *  # noqa: F401,F403
from .handles import *  # noqa: F401,F403
from .profile import *  # noqa: F401,F403
from .tower import *  # noqa: F401,F403
from .sequences import *  # noqa: F401,F403
from .census import *  # noqa: F401,F403


def clear_caches() -> None:
    """Drop every memo table so unreferenced theories can be freed."""
    from .handles import clear_theory_caches
    from .profile import clear_profile_caches
    from .tower import clear_tower_caches
    clear_theory_caches()
    clear_profile_caches()
    clear_tower_caches()
