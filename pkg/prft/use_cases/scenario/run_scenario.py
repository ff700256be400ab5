import logging
import os
import platform
import time
from typing import Optional

import msgspec
import numpy as np
import scipy

import prft
from prft.config import ApplicationConfig
from prft.domain.policies.p_ScenarioPolicy import ScenarioPolicy
from prft.schemas.scenario import APPLICATION_TASKS, PHYSICS_TASKS, RunManifest
from prft.use_cases.scenario.application_tasks import ApplicationTasks
from prft.use_cases.scenario.context import ScenarioContext
from prft.use_cases.scenario.physics_tasks import PhysicsTasks

logger = logging.getLogger(__name__)


class RunScenarioUseCase:
    """Orchestrates one scenario run (load -> validate -> tasks -> outputs)

    The use-case expects repositories to be provided via a UnitOfWork instance
    that exposes `scenarios` and `results` and stages outputs in
    `transaction(output_dir)`.
    """

    def __init__(self, unit_of_work):
        self.uow = unit_of_work
        self.policy = ScenarioPolicy()

    def execute(self, key: str, out: Optional[str] = None, threads: Optional[int] = None,
                seed: Optional[int] = None) -> dict:
        document = self.uow.scenarios.get(key)
        scenario = self.policy.decode(document.data)
        overrides = {}
        if seed is not None:
            overrides["seed"] = seed
        if threads is not None:
            overrides["threads"] = threads
        if overrides:
            scenario = msgspec.structs.replace(scenario, **overrides)
        self.policy.validate_or_raise(scenario)

        threads = scenario.threads or ApplicationConfig.threads()
        output_dir = out or scenario.output or os.path.join(ApplicationConfig.output_dir(), scenario.name)
        timings = {}
        summary = {"scenario": scenario.name}
        invariants = {}

        started = time.perf_counter()
        context = None
        if any(task in PHYSICS_TASKS for task in scenario.tasks):
            context = ScenarioContext(
                scenario,
                threads=threads,
                steps_per_period=ApplicationConfig.steps_per_period(),
                counting_points=ApplicationConfig.counting_points(),
            )
        timings["setup"] = time.perf_counter() - started

        with self.uow.transaction(output_dir) as uow:
            physics = PhysicsTasks(context, uow.results, summary, invariants) if context is not None else None
            applications = None
            if any(task in APPLICATION_TASKS for task in scenario.tasks):
                applications = ApplicationTasks(scenario.applications, summary, invariants,
                                                seed=scenario.seed, threads=threads)

            for task in scenario.tasks:
                started = time.perf_counter()
                if task in PHYSICS_TASKS:
                    physics.run(task)
                else:
                    applications.run(task)
                timings[task] = time.perf_counter() - started

            uow.results.write_summary(summary)
            outputs = uow.results.written() + ["manifest.json"]
            manifest = RunManifest(
                scenario=scenario.name,
                source=document.source,
                inputs=msgspec.to_builtins(scenario),
                versions={
                    "prft": prft.__version__,
                    "numpy": np.__version__,
                    "scipy": scipy.__version__,
                    "msgspec": msgspec.__version__,
                    "python": platform.python_version(),
                },
                timings=timings,
                outputs=outputs,
                invariants=invariants,
            )
            uow.results.write_manifest(manifest)

        logger.info("scenario %s finished: %s", scenario.name, ", ".join(outputs))
        return {"output_dir": output_dir, "outputs": outputs, "summary": summary, "invariants": invariants}
