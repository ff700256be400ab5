from prft.utils.exceptions.PolicyError import PolicyError
from prft.utils.exceptions.ServiceError import ServiceError
from prft.utils.exceptions.ToleranceError import ToleranceError

__all__ = ["PolicyError", "ServiceError", "ToleranceError"]
