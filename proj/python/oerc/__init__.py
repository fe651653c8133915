"""Opto-electronic reservoir computer with an analogue readout."""

try:
    from ._oerc import *  # noqa: F401,F403
    from ._oerc import __version__
except ImportError:
    from _oerc import *  # noqa: F401,F403
    from _oerc import __version__
