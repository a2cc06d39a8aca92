# paths.py
"""
Централизованное управление путями к файлам приложения.
Директории создаются лениво, при первом обращении.
"""
from pathlib import Path
import logging

# Директория для пользовательских данных
USER_DATA_DIR = Path.home() / ".spike_premium"

# Журналы
LOG_DIR = USER_DATA_DIR / "logs"
LOG_FILE = LOG_DIR / "spike_premium.log"


def ensure_directory(path):
    """
    Создает директорию если она не существует.

    Args:
        path: Path объект директории
    """
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logging.error("Не удалось создать директорию %s: %s", path, e)


def get_log_dir():
    """Возвращает директорию журналов, создавая её при необходимости."""
    ensure_directory(LOG_DIR)
    return LOG_DIR


if __name__ == "__main__":
    print(f"[INFO] Пользовательские данные: {USER_DATA_DIR}")
    print(f"[INFO] Файл логов: {LOG_FILE}")
