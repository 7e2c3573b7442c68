import logging
from typing import Union

LOG_FORMAT = "%(asctime)s [%(name)s] %(levelname)s %(message)s"

_configured = False


def configure_logging(level: Union[int, str] = logging.WARNING) -> None:
    """Configures root logging once; later calls only adjust the level."""
    global _configured
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    if not _configured:
        logging.basicConfig(level=level, format=LOG_FORMAT)
        _configured = True
    logging.getLogger().setLevel(level)
