from prft.utils.exceptions.ServiceError import ServiceError


class ToleranceError(ServiceError):
    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant
