from src.infrastructure.files.artifact_uow import ArtifactUnitOfWork

__all__ = ["ArtifactUnitOfWork"]
