import os
import time
import logging
from contextlib import contextmanager

logger = logging.getLogger("fansqueeze")
handler = logging.StreamHandler()  # stderr: la salida CSV/JSON queda limpia
formatter = logging.Formatter("[%(asctime)s] [%(levelname)s] %(message)s")
handler.setFormatter(formatter)
logger.addHandler(handler)
logger.setLevel(os.getenv("FANSQ_LOG_LEVEL", "WARNING").upper())


def set_level(level: str) -> None:
    logger.setLevel(level.upper())


@contextmanager
def span(name: str):
    t0 = time.perf_counter()
    logger.info(f"▶️  {name} START")
    try:
        yield
    finally:
        dt = time.perf_counter() - t0
        logger.info(f"✅ {name} END ({dt:.3f}s)")
