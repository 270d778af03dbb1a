from src.application.services.certify_service import CertificationService
from src.application.services.napoleon_service import NapoleonService
from src.application.services.sweep_service import SweepService

__all__ = ["NapoleonService", "CertificationService", "SweepService"]
