from .common import DataPacket, LinkMonitor, LinkStatus, RouteEntry, forward_data
from .dsdv import DsdvAgent, DsdvUpdate
from .fsr import FsrAgent, FsrUpdate
from .mpr import select_mprs
from .olsr import Hello, OlsrAgent, TcMessage

__all__ = [
    "DataPacket", "DsdvAgent", "DsdvUpdate", "FsrAgent", "FsrUpdate", "Hello", "LinkMonitor",
    "LinkStatus", "OlsrAgent", "RouteEntry", "TcMessage", "forward_data", "select_mprs",
]
