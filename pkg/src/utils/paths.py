"""Path utilities for the h2gov app"""

from pathlib import Path

from appdirs import user_data_dir

app_name = "H2Gov"
app_data_dir = user_data_dir(app_name)
Path(app_data_dir).mkdir(parents=True, exist_ok=True)

mas_cache = Path(app_data_dir) / "admissible_set.json"
