"""Командная строка: сценарии, кривые, проверки Монте-Карло, экспорт."""
