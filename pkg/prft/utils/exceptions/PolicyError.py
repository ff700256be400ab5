class PolicyError(Exception):
    """Input document violates validation rules; `violations` lists every finding."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = list(violations) if violations else [message]
