__version__ = "0.1.0"

from .loader import SnapshotError, load_snapshot, load_timeseries

__all__ = ["SnapshotError", "load_snapshot", "load_timeseries", "__version__"]
