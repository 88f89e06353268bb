from wn_align._version import __version__


__all__ = ["__version__"]
