import logging

import numpy as np

from .exceptions import NumericalError


def create_logger(log_file=None, log_level=logging.INFO, name='MetaAct'):
    logger = logging.getLogger(name)
    logger.setLevel(log_level)
    # one set of handlers per logger
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    formatter = logging.Formatter('%(asctime)s  %(levelname)5s  %(message)s')
    console = logging.StreamHandler()
    console.setLevel(log_level)
    console.setFormatter(formatter)
    logger.addHandler(console)
    if log_file is not None:
        file_handler = logging.FileHandler(filename=str(log_file))
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    return logger


def interval_overlap(a0, a1, b0, b1):
    """Length of the intersection of [a0, a1] and [b0, b1] (broadcasts)."""
    return np.clip(np.minimum(a1, b1) - np.maximum(a0, b0), 0.0, None)


def check_finite(name, value):
    if not np.all(np.isfinite(value)):
        raise NumericalError('non-finite %s' % name)
    return value
