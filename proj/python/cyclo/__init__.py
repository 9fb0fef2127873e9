try:
    from ._cyclo import *  # noqa: F401,F403
    from ._cyclo import __version__  # noqa: F401
except ImportError:  # test layout: extension on PYTHONPATH next to the package
    from _cyclo import *  # noqa: F401,F403
    from _cyclo import __version__  # noqa: F401
