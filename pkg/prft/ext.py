import logging

from colorama import Fore, Style, just_fix_windows_console

LEVEL_COLORS = {
    logging.DEBUG: Fore.CYAN,
    logging.INFO: Fore.GREEN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.RED + Style.BRIGHT,
}


class ColoredLevelFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        color = LEVEL_COLORS.get(record.levelno, "")
        original = record.levelname
        record.levelname = f"{color}{original}{Style.RESET_ALL}"
        try:
            return super().format(record)
        finally:
            record.levelname = original


def init_logging(level: str = "WARNING") -> logging.Logger:
    """Install the single colored stream handler on the `prft` logger (idempotent)."""
    just_fix_windows_console()
    logger = logging.getLogger("prft")
    logger.setLevel(level)
    if not any(getattr(handler, "_prft_handler", False) for handler in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(ColoredLevelFormatter("%(levelname)s %(name)s: %(message)s"))
        handler._prft_handler = True
        logger.addHandler(handler)
    return logger
