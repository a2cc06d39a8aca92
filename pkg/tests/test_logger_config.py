# tests/test_logger_config.py
"""
Тесты настройки журнала.
"""
import logging
from logging.handlers import RotatingFileHandler

import paths
from logger_config import setup_logging


class TestSetupLogging:
    """Тесты setup_logging."""

    def setup_method(self):
        self.root = logging.getLogger()
        self.saved_handlers = list(self.root.handlers)
        self.saved_level = self.root.level

    def teardown_method(self):
        for handler in self.root.handlers:
            handler.close()
        self.root.handlers[:] = self.saved_handlers
        self.root.setLevel(self.saved_level)

    def test_console_only(self):
        setup_logging(logging.WARNING, log_to_file=False)
        assert len(self.root.handlers) == 1
        assert self.root.handlers[0].level == logging.WARNING

    def test_file_handler(self, tmp_path, monkeypatch):
        monkeypatch.setattr(paths, "LOG_DIR", tmp_path / "logs")
        setup_logging(logging.INFO)
        file_handlers = [h for h in self.root.handlers if isinstance(h, RotatingFileHandler)]
        assert len(file_handlers) == 1
        logging.getLogger("calculations").info("проверка журнала")
        file_handlers[0].flush()
        assert "проверка журнала" in (tmp_path / "logs" / "spike_premium.log").read_text(encoding="utf-8")
