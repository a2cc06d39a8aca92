"""Модуль расчетов: модель спот-цены, смена меры, форварды и премии за риск."""
