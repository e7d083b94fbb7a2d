import csv
import io
from pathlib import Path

from src.core.errors import CsvFormatError
from src.core.models.sample import Sample

HEADER = ("x", "y")


def parse_pairs(text: str) -> Sample:
    """Пары счётчиков из CSV: две колонки x,y, необязательный заголовок "x,y",
    пустые строки пропускаются; в ошибках: номер строки (с 1).
    """
    pairs: list[tuple[int, int]] = []
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        line = reader.line_num
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells):
            continue
        if not pairs and tuple(c.lower() for c in cells) == HEADER:
            continue
        if len(cells) != 2:
            raise CsvFormatError(f"ожидалось 2 колонки, получено {len(cells)}", line)
        values = []
        for name, cell in zip(HEADER, cells):
            try:
                value = int(cell)
            except ValueError:
                raise CsvFormatError(f"{name} = {cell!r} не целое число", line) from None
            if value < 0:
                raise CsvFormatError(f"{name} = {value} < 0: счётчик должен быть неотрицательным", line)
            values.append(value)
        pairs.append((values[0], values[1]))
    if not pairs:
        raise CsvFormatError("в файле нет ни одной пары x,y")
    return Sample.from_pairs(pairs)


class CsvCountSource:
    """Файл парных счётчиков (x и y) в UTF-8."""

    def __init__(self, path: Path):
        self._path = Path(path)

    @property
    def path(self) -> Path:
        return self._path

    def read_sample(self) -> Sample:
        if not self._path.is_file():
            raise FileNotFoundError(f"Файл не найден: {self._path}")
        try:
            text = self._path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise CsvFormatError(f"файл не в кодировке UTF-8: {e.reason}") from None
        return parse_pairs(text)

    def write_sample(self, sample: Sample) -> None:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(HEADER)
            writer.writerows(sample.pairs)
