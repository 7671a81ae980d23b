"""Raw meter CSV to training tensors, plus the synthetic-data simulator."""

from loadgen.datapipe.clock import dst_bounds_utc, local_epochs, utc_to_local
from loadgen.datapipe.units import SCALE_KW, energy_to_power, scale_power, unscale_power
from loadgen.datapipe.records import IngestReport, MeterRecords, RawMeterRecord, ingest_csv
from loadgen.datapipe.days import AssemblyReport, DayProfileSet, assemble_days
from loadgen.datapipe.features import (
    IntensityTable,
    compute_intensities,
    month_condition,
    rank_intensity,
    user_intensity,
)
from loadgen.datapipe.split import SplitAssignment, week_block_split
from loadgen.datapipe.prepared import (
    INTENSITY_LIMIT_KW,
    PreparedDataset,
    filter_and_scale,
    load_prepared,
    save_prepared,
)
from loadgen.datapipe.simulator import SimulatorConfig, simulate_dataset

__all__ = [
    "AssemblyReport",
    "DayProfileSet",
    "INTENSITY_LIMIT_KW",
    "IngestReport",
    "IntensityTable",
    "MeterRecords",
    "PreparedDataset",
    "RawMeterRecord",
    "SCALE_KW",
    "SimulatorConfig",
    "SplitAssignment",
    "assemble_days",
    "compute_intensities",
    "dst_bounds_utc",
    "energy_to_power",
    "filter_and_scale",
    "ingest_csv",
    "load_prepared",
    "local_epochs",
    "month_condition",
    "rank_intensity",
    "save_prepared",
    "scale_power",
    "simulate_dataset",
    "unscale_power",
    "user_intensity",
    "utc_to_local",
    "week_block_split",
]
