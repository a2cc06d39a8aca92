# logger_config.py - Конфигурация системы логирования.
# Комментарии на русском. Поддержка UTF-8.

import logging
import sys
from logging.handlers import RotatingFileHandler

from paths import LOG_FILE, get_log_dir


def setup_logging(level=logging.WARNING, log_to_file=True):
    """
    Настраивает конфигурацию логирования для всего приложения.

    Args:
        level: Уровень логирования (по умолчанию WARNING для production)
               Используйте logging.DEBUG для отладки интегратора и прореживания
        log_to_file: Писать ли журнал в файл в пользовательской директории
    """
    logger = logging.getLogger()
    logger.setLevel(min(level, logging.INFO) if log_to_file else level)

    if logger.hasHandlers():
        logger.handlers.clear()

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # Файловый handler
    if log_to_file:
        file_handler = RotatingFileHandler(
            get_log_dir() / LOG_FILE.name,
            maxBytes=5 * 1024 * 1024,
            backupCount=3,
            encoding="utf-8",
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(min(level, logging.INFO))  # В файл пишем INFO и выше
        logger.addHandler(file_handler)

    # Консоль - stderr, stdout занят CSV и отчетами
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    stream_handler.setLevel(level)
    logger.addHandler(stream_handler)

    if level <= logging.INFO:
        logging.info("Система логирования инициализирована с уровнем %s", logging.getLevelName(level))
