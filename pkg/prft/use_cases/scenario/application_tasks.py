"""Application tasks: coherence times, transfer rate and the remote-entanglement protocol"""
import logging
import math

from prft.domain.entities import PhysicalUnits
from prft.domain.services import CommunicationCalculator, DecoherenceCalculator
from prft.schemas.scenario import ApplicationSettings
from prft.utils.exceptions.ToleranceError import ToleranceError

logger = logging.getLogger(__name__)

SELF_CONSISTENCY_TOLERANCE = 1e-9


def build_units(settings: ApplicationSettings, convention: str = None) -> PhysicalUnits:
    return PhysicalUnits(
        photon_frequency=settings.photon_frequency,
        rabi_frequency=settings.rabi_frequency,
        power=settings.power,
        field=settings.field,
        volume=settings.volume,
        loss_rate=settings.loss_rate,
        distance=settings.distance,
        pulse_duration=settings.pulse_duration,
        n_atoms=settings.n_atoms,
        convention=convention or settings.convention,
    )


class ApplicationTasks:
    def __init__(self, settings: ApplicationSettings, summary: dict, invariants: dict, *, seed: int, threads: int):
        self.settings = settings
        self.units = build_units(settings)
        self.summary = summary
        self.invariants = invariants
        self.seed = seed
        self.threads = threads

    def coherence_time(self):
        report = DecoherenceCalculator.coherence_report(self.units)
        declared = report[self.units.convention]
        self.summary["coherence_time"] = {
            "convention": self.units.convention,
            "traveling": declared.get("traveling", {}).get("coherence_time"),
            "closed": declared.get("closed", {}).get("coherence_time"),
            "report": report,
        }

    def transfer_rate(self):
        rates = {
            convention: CommunicationCalculator.transfer_rate(self.units.with_convention(convention))
            for convention in sorted(PhysicalUnits.VALID_CONVENTIONS)
        }
        rate = rates[self.units.convention]
        entry = {
            "convention": self.units.convention,
            "transfer_rate": rate,
            "by_convention": rates,
            "peak_separation": CommunicationCalculator.peak_separation(self.units),
            "peak_broadening": CommunicationCalculator.peak_broadening(self.units),
        }
        if math.isfinite(rate):
            at_rate = build_units(self.settings)
            at_rate.pulse_duration = 1.0 / rate
            separation = CommunicationCalculator.peak_separation(at_rate)
            broadening = CommunicationCalculator.peak_broadening(at_rate)
            defect = abs(separation - broadening) / max(separation, broadening)
            name = "separation = broadening at t_p = 1/f"
            self.invariants[name] = {"value": defect, "tolerance": SELF_CONSISTENCY_TOLERANCE,
                                     "ok": defect <= SELF_CONSISTENCY_TOLERANCE}
            if defect > SELF_CONSISTENCY_TOLERANCE:
                raise ToleranceError(name, f"relative defect {defect:.3e}")
            entry["separation_at_rate"] = separation
        else:
            logger.warning("lossless link: the transfer rate is unbounded")
        self.summary["transfer_rate"] = entry

    def protocol(self):
        result = CommunicationCalculator.protocol_simulate(
            self.units,
            self.settings.trials,
            self.seed,
            initial_width=self.settings.initial_width,
            window=self.settings.window,
            threads=self.threads,
        )
        self.summary["protocol"] = result

    def run(self, task: str):
        logger.info("running task %s", task)
        getattr(self, task)()
