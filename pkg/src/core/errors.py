"""Иерархия ошибок библиотеки оценивания."""
from __future__ import annotations


class EstimationError(ValueError):
    """Базовая ошибка: все ошибки входных данных и вычислений наследуются от неё."""


class InputValidationError(EstimationError):
    """Нарушено ограничение на входные данные."""


class InfeasibleMomentsError(EstimationError):
    """Моменты не соответствуют ни одной допустимой тройке γ."""

    def __init__(self, message: str, bound: str):
        super().__init__(message)
        self.bound = bound


class SingularDenominatorError(EstimationError):
    """Знаменатель формулы обратился в ноль."""

    def __init__(self, term: str):
        super().__init__(f"Нулевой знаменатель: {term}")
        self.term = term


class InsufficientDataError(EstimationError):
    """Недостаточно наблюдений для запрошенной статистики."""


class DegenerateFormError(EstimationError):
    """Квадратичная форма MSE не положительно определена (AB - C² <= 0)."""


class UnresolvedParameterError(EstimationError):
    """Свободный параметр оценки не разрешён до вычисления."""


class UnknownMemberError(EstimationError):
    """Неизвестный идентификатор члена семейства."""


class CsvFormatError(EstimationError):
    """Ошибка формата CSV; line: номер строки (с 1)."""

    def __init__(self, message: str, line: int | None = None):
        prefix = f"строка {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class ConfigError(EstimationError):
    """Конфигурационный файл не прошёл проверку схемы."""


class AllReplicatesFailedError(EstimationError):
    """Ни одна реплика Монте-Карло не дала значения оценки."""


class SimulationQualityError(EstimationError):
    """Доля неудачных реплик превышает допустимый порог."""

    def __init__(self, failed: int, replicates: int, threshold: float):
        super().__init__(
            f"Неудачных реплик {failed} из {replicates} "
            f"(порог {threshold:.3%}): MSE не публикуется"
        )
        self.failed = failed
        self.replicates = replicates
        self.threshold = threshold
