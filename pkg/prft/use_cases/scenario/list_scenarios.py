from typing import List, Tuple


class ListScenariosUseCase:
    """Bundled scenario names with their one-line descriptions."""

    def __init__(self, unit_of_work):
        self.uow = unit_of_work

    def execute(self) -> List[Tuple[str, str]]:
        return [(name, self.uow.scenarios.describe(name)) for name in self.uow.scenarios.list_names()]
