"""Constants used across the h2gov application"""

PA_PER_BAR = 1e5
W_PER_KW = 1e3
KELVIN_OFFSET = 273.15
SECONDS_PER_HOUR = 3600.0

# Molar volume of an ideal gas at 0 °C and 101325 Pa, m³/mol
NORMAL_MOLAR_VOLUME = 0.022414

GOVERNOR_CHOICES = ("pg", "lpf", "none")

PARAMS_FORMAT = "h2gov-params"
PARAMS_VERSION = 1

SCENARIO_FORMAT = "h2gov-scenario"
SCENARIO_VERSION = 1

ADMISSIBLE_SET_FORMAT = "h2gov-admissible-set"
ADMISSIBLE_SET_VERSION = 1

CSV_COLUMNS = (
    "t",
    "P_req_kW",
    "P_app_kW",
    "pH2_bar",
    "pO2_bar",
    "WH2out_Nm3h",
    "WH2gen_Nm3h",
    "u_exh",
)
CSV_KAPPA_COLUMN = "kappa"

# Row count reported for the 0.1 s, ±1 bar pressure governor set
REFERENCE_ROW_COUNT = 190
