# config.py - Глобальные константы и настройки приложения.
# Комментарии на русском. Поддержка UTF-8.
"""
Централизованные константы модели спотовой цены электроэнергии.
Параметры модели, допуски численных методов и настройки Монте-Карло
собраны здесь для единообразия.
"""
import math

# ==================== ПАРАМЕТРЫ МОДЕЛИ (БАЗОВЫЙ НАБОР) ====================
# Скорости возврата к среднему, 1/день.
# Период полураспада: 7 дней для базовой компоненты, 2 дня для выбросов
BASE_ALPHA_X = 0.099
BASE_ALPHA_Y = 0.3466

# Волатильность базовой компоненты (годовая ~30% в геометрической модели)
BASE_SIGMA_X = 0.0158

# Мера Леви c·exp(-λz): средний размер скачка 1/λ = 0.5, частота c/λ = 0.2 в день
BASE_LEVY_C = 0.4
BASE_LEVY_LAMBDA = 2.0

# Горизонт графиков премии за риск, дни
FIGURE_TAU_MAX = 360.0
FIGURE_N_POINTS = 361

# ==================== МАТЕМАТИЧЕСКИЕ КОНСТАНТЫ ====================
# Постоянная Эйлера-Маскерони (20 знаков)
EULER_GAMMA = 0.57721566490153286061

# Знак бесконечности для Θ_L (модель Дирака)
THETA_INFINITY = math.inf

# ==================== ДОПУСКИ ЧИСЛЕННЫХ МЕТОДОВ ====================
# Порог перехода eta(x) = (1 - e^{-x})/x на ряд Тейлора
ETA_SERIES_THRESHOLD = 1e-4

# Корень u* векового поля Λ₁
U_STAR_TOLERANCE = 1e-12
# Случай 2 (u* = 1) распознается с этим допуском
CASE2_TOLERANCE = 1e-10
# Отступ от D_L^g по умолчанию: θ₂ ∈ D_L^g(δ)
DEFAULT_DELTA = 1e-6

# Интегратор Рунге-Кутты-Фельберга 4(5)
RICCATI_TOLERANCE = 1e-10
RICCATI_GUARD = 1e-6  # доля (Θ_L - θ₂), не достигаемая решением Ψ¹
RICCATI_MAX_STEP = 0.5  # дни
RICCATI_MAX_STEPS = 1_000_000
# Уровень отсечения Ψ¹ при Θ_L = ∞ (экспонента переполняется раньше)
RICCATI_INFINITE_CAP = 50.0
# Порог, ниже которого Ψ¹ считается затухшим (хвост берется аналитически)
RICCATI_DECAY_FLOOR = 1e-12

# Квадратуры
SWAP_QUAD_RELTOL = 1e-9
QUAD_RELTOL = 1e-10
QUAD_LIMIT = 200

# ==================== МОНТЕ-КАРЛО ====================
MC_DEFAULT_PATHS = 100_000
MC_BLOCK_SIZE = 4096  # пути в одном блоке; блок = независимый поток ГСЧ
MC_DEFAULT_SEED = 20240501
MC_DEFAULT_DT = 1.0  # шаг обновления огибающей прореживания, дни
MC_EULER_DT = 1e-2  # шаг Эйлера для плотности 𝓔(G̃), дни
MC_MAX_DT_HALVINGS = 20
MC_DENSITY_MAX_HORIZON = 90.0  # дни, контроль дисперсии плотности
MC_Z_FAIL = 4.0  # |z| выше этого порога - провал проверки в CLI

# Переменная окружения, переопределяющая seed сценария
SEED_ENV_VAR = "SPIKE_PREMIUM_SEED"

# ==================== КОДЫ ВОЗВРАТА CLI ====================
EXIT_OK = 0
EXIT_MC_FAILED = 1
EXIT_VALIDATION = 2
EXIT_REFUSED = 3

# ==================== НАСТРОЙКИ ПРИЛОЖЕНИЯ ====================
APP_NAME = "Spike Premium"
APP_VERSION = "1.0.0"

# Версия схемы CSV, пишется в строку-комментарий заголовка
CSV_SCHEMA_VERSION = 1
# Формат чисел в CSV (побайтово стабилен между запусками)
CSV_FLOAT_FORMAT = ".12g"

# Версия формата файла сценария
SCENARIO_VERSION = "1.0"
