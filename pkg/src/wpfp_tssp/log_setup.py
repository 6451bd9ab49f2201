import logging
import os
from typing import Optional

from . import settings


def setup_logging(level: Optional[str] = None):
    log_dir = settings.log_dir()
    os.makedirs(log_dir, exist_ok=True)
    logging.basicConfig(
        level=(level or settings.log_level()).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(os.path.join(log_dir, 'wpfp_tssp.log'), encoding='utf-8'),
            logging.StreamHandler()
        ],
        force=True,
    )
