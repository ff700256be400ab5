class ServiceError(Exception):
    """Scenario orchestration failed; `task` names the task that was running."""

    def __init__(self, message: str, task: str = None):
        super().__init__(message)
        self.task = task
