# main.py
import sys
import os

# Настройка пути проекта
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from cli.commands import run


def main(argv=None):
    # Логирование настраивается после разбора --log-level
    sys.exit(run(sys.argv[1:] if argv is None else argv, configure_logging=True))


if __name__ == "__main__":
    main()
