# tests/__init__.py
"""
Пакет с модульными и интеграционными тестами для Spike Premium.
"""
