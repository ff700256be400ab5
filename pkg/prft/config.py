import os
from dotenv import load_dotenv

from prft.utils.exceptions.PolicyError import PolicyError

load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ApplicationConfig:
    THREADS = os.getenv('PRFT_THREADS', '1')
    STEPS_PER_PERIOD = os.getenv('PRFT_STEPS_PER_PERIOD', '2000')
    COUNTING_POINTS = os.getenv('PRFT_COUNTING_POINTS', '256')
    LOG_LEVEL = os.getenv('PRFT_LOG_LEVEL', 'WARNING')
    OUTPUT_DIR = os.getenv('PRFT_OUTPUT_DIR', 'prft-output')

    @staticmethod
    def _positive_int(raw: str, variable: str) -> int:
        try:
            value = int(str(raw).strip())
        except ValueError:
            raise PolicyError(f"{variable} must be an integer, got '{raw}'")
        if value < 1:
            raise PolicyError(f"{variable} must be >= 1, got {value}")
        return value

    @classmethod
    def threads(cls) -> int:
        return cls._positive_int(cls.THREADS, 'PRFT_THREADS')

    @classmethod
    def steps_per_period(cls) -> int:
        return cls._positive_int(cls.STEPS_PER_PERIOD, 'PRFT_STEPS_PER_PERIOD')

    @classmethod
    def counting_points(cls) -> int:
        points = cls._positive_int(cls.COUNTING_POINTS, 'PRFT_COUNTING_POINTS')
        if points < 2 or points & (points - 1):
            raise PolicyError(f"PRFT_COUNTING_POINTS must be a power of two, got {points}")
        return points

    @classmethod
    def log_level(cls) -> str:
        level = str(cls.LOG_LEVEL).strip().upper()
        if level not in LOG_LEVELS:
            raise PolicyError(f"PRFT_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got '{cls.LOG_LEVEL}'")
        return level

    @classmethod
    def output_dir(cls) -> str:
        return str(cls.OUTPUT_DIR).strip() or 'prft-output'
