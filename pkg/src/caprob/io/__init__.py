from .config import RunConfig, parse_config
from .featuredump import FeatureDump, read_feature_dump, write_feature_dump
from .report import (
    CSV_SCHEMA,
    markdown_table,
    prepare_run_dir,
    run_id_for,
    write_cells_csv,
    write_flat_csv,
    write_summary,
)

__all__ = [
    "RunConfig",
    "parse_config",
    "FeatureDump",
    "read_feature_dump",
    "write_feature_dump",
    "CSV_SCHEMA",
    "markdown_table",
    "prepare_run_dir",
    "run_id_for",
    "write_cells_csv",
    "write_flat_csv",
    "write_summary",
]
