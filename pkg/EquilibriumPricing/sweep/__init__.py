from .conventions import DEFAULT_CANDIDATES, ConventionFit, ConventionReport, convention_search
from .discrepancy import Discrepancy, compare_to_reference, render_discrepancy_report
from .grid import SweepAxis, SweepGrid, SweepRecord, market_and_contract
from .reference import ReferenceTable, available_reference_tables, load_reference_table
from .scans import COMPOSITION_PRESETS, preset_grid, scan_compositions
from .surface import SURFACE_TAGS, SurfaceResult, make_surface
from .tables import SignTest, TableResult, make_table, reference_strike_axis
