"""Functional economics: supply/demand in time cost, bid decomposition,
industrialisation externalities, market dynamics and probability weighting."""

from . import behavior, bid_engine, birkhoff, dynamics, exchange, industrialization, valuation
from .errors import DomainError, FuncEconError, RangeError

__all__ = [
    "behavior",
    "bid_engine",
    "birkhoff",
    "dynamics",
    "exchange",
    "industrialization",
    "valuation",
    "DomainError",
    "FuncEconError",
    "RangeError",
]

__version__ = "0.1.0"
