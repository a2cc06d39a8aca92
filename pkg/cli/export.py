# cli/export.py
"""
Экспорт таблиц и кривых: CSV (основной формат), SVG-график и Excel.

CSV начинается со строки-комментария со схемой и метаданными; числа
пишутся в формате CSV_FLOAT_FORMAT, поэтому вывод побайтово стабилен.
"""
import io
import logging
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd

from config import APP_NAME, APP_VERSION, CSV_FLOAT_FORMAT, CSV_SCHEMA_VERSION
from calculations.arithmetic_pricing import CurveResult

logger = logging.getLogger(__name__)

# Фиксированная соль идентификаторов SVG
SVG_HASH_SALT = "spike-premium"


def curve_frame(curve: CurveResult) -> pd.DataFrame:
    """Таблица кривой: tau_days и столбцы в порядке вывода."""
    return pd.DataFrame(curve.rows(), columns=curve.column_names)


def table_frame(columns: Sequence[str], rows) -> pd.DataFrame:
    return pd.DataFrame(np.asarray(rows, dtype=float), columns=list(columns))


def _header_line(meta: Optional[Dict] = None) -> str:
    parts = [f"# schema v{CSV_SCHEMA_VERSION}"]
    for key, value in (meta or {}).items():
        if isinstance(value, float):
            value = format(value, CSV_FLOAT_FORMAT)
        parts.append(f"{key}={value}")
    return " ".join(parts) + "\n"


def write_csv(frame: pd.DataFrame, target, meta: Optional[Dict] = None) -> None:
    """
    Записать таблицу в CSV.

    Args:
        frame: Таблица
        target: Путь или текстовый поток (stdout)
        meta: Метаданные для строки-комментария заголовка
    """
    text = _header_line(meta) + frame.to_csv(index=False, float_format="%" + CSV_FLOAT_FORMAT, lineterminator="\n")
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("CSV записан: %s (%d строк)", path, len(frame))
    else:
        target.write(text)


def csv_text(frame: pd.DataFrame, meta: Optional[Dict] = None) -> str:
    buffer = io.StringIO()
    write_csv(frame, buffer, meta)
    return buffer.getvalue()


def write_svg(curve: CurveResult, path, title: str = "") -> Path:
    """
    Линейный график всех столбцов кривой по τ в SVG.
    Дата и случайные идентификаторы в файл не пишутся.
    """
    # Ленивый импорт matplotlib только когда нужно
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.0))
        try:
            for name, values in curve.columns.items():
                ax.plot(curve.taus, values, label=name, linewidth=1.2)
            ax.axhline(0.0, color="grey", linewidth=0.6)
            ax.set_xlabel("τ, дни")
            ax.set_title(title)
            ax.legend(loc="best", fontsize=8)
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    logger.info("SVG записан: %s", path)
    return path


def write_xlsx(frame: pd.DataFrame, path, title: str = "", meta: Optional[Dict] = None) -> Path:
    """Экспорт таблицы в Excel с оформленной строкой заголовка."""
    import openpyxl
    from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
    from openpyxl.utils import get_column_letter

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "Кривая"

    # Стили
    header_font = Font(bold=True, size=12, color="FFFFFF")
    header_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    header_alignment = Alignment(horizontal="center", vertical="center", wrap_text=True)
    thin_border = Border(
        left=Side(style='thin'),
        right=Side(style='thin'),
        top=Side(style='thin'),
        bottom=Side(style='thin')
    )

    ws['A1'] = title or f"{APP_NAME} {APP_VERSION}"
    ws['A1'].font = Font(bold=True, size=14, color="1F4E78")
    row = 2
    for key, value in (meta or {}).items():
        ws.cell(row=row, column=1, value=str(key))
        ws.cell(row=row, column=2, value=value if isinstance(value, (int, float)) else str(value))
        row += 1
    row += 1

    for col, name in enumerate(frame.columns, start=1):
        cell = ws.cell(row=row, column=col, value=name)
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = header_alignment
        cell.border = thin_border
        ws.column_dimensions[get_column_letter(col)].width = 18
    for values in frame.itertuples(index=False):
        row += 1
        for col, value in enumerate(values, start=1):
            cell = ws.cell(row=row, column=col, value=float(value))
            cell.border = thin_border
            cell.number_format = "0.000000000"

    wb.save(path)
    logger.info("Excel записан: %s", path)
    return path
