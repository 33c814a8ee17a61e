"""
业务逻辑服务层
"""

from lsnkit.services.bittide_service import BittideService
from lsnkit.services.equivalence_service import EquivalenceService
from lsnkit.services.graph_service import GraphService
from lsnkit.services.lsn_service import LsnService
from lsnkit.services.multiclock_service import MulticlockService

__all__ = ["BittideService", "EquivalenceService", "GraphService", "LsnService", "MulticlockService"]
