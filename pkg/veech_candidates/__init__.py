from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("veech-candidates")
except PackageNotFoundError:
    __version__ = "0+unknown"

del PackageNotFoundError, version
