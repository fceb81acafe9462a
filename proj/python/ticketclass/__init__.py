"""Bug / non-bug issue ticket classification toolkit.

Thin Python wrapper over the compiled `_ticketclass` extension: n-gram TF-IDF
vectorization, chi-square feature selection, a from-scratch MLP classifier,
k-fold evaluation and genetic architecture search.
"""

try:
    # Installed wheel: the extension lives inside the package.
    from ._ticketclass import *  # noqa: F401,F403
    from ._ticketclass import __version__  # noqa: F401
except ImportError:
    # Build tree: the extension sits next to the package on sys.path.
    from _ticketclass import *  # noqa: F401,F403
    from _ticketclass import __version__  # noqa: F401
