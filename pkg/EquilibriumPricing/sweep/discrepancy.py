"""
Comparison of a generated table against its published counterpart, rendered as a plain-text report.
"""

from dataclasses import dataclass
from logging import getLogger
from pathlib import Path
from typing import List, Optional, Tuple

from .conventions import ConventionReport
from .reference import ReferenceTable
from .tables import SignTest, TableResult

logger = getLogger('eqp')

TEMPLATE_DIRECTORY = Path(__file__).parent / 'templates'


@dataclass(frozen=True)
class Discrepancy:
    target_p: float
    compared_cells: int
    pattern_mismatches: Tuple[Tuple[float, float, str, Optional[float]], ...]
    max_residual: Optional[float]
    worst_cell: Optional[Tuple[float, float]]
    bs_row_residual: float
    cells_equal_to_bs: Tuple[Tuple[float, float], ...]
    sign_test: SignTest

    def as_dict(self) -> dict:
        return {
            'target_p': self.target_p,
            'compared_cells': self.compared_cells,
            'pattern_mismatches': [
                {'mu': mu, 'K': strike, 'status': status, 'printed': printed}
                for mu, strike, status, printed in self.pattern_mismatches
            ],
            'max_residual': self.max_residual,
            'worst_cell': list(self.worst_cell) if self.worst_cell else None,
            'bs_row_residual': self.bs_row_residual,
            'cells_equal_to_bs': [list(cell) for cell in self.cells_equal_to_bs],
            'sign_test': self.sign_test.as_dict()
        }


def compare_to_reference(table: TableResult, reference: ReferenceTable) -> Discrepancy:
    """
    Compares every cell the two tables share.

    Feasibility mismatches list (mu, K, our status, printed value). Residuals are taken over cells numeric in both.
    """

    mismatches: List[Tuple[float, float, str, Optional[float]]] = []
    residuals: List[Tuple[float, Tuple[float, float]]] = []
    compared = 0

    for mu, records in table.rows():
        if mu not in reference.rows:
            continue

        for record in records:
            strike = record.inputs['K']

            if strike not in reference.strikes:
                continue

            compared += 1
            printed = reference.cell(mu, strike)
            quote = record.eq_quote

            if quote.is_feasible != (printed is not None):
                mismatches.append((mu, strike, quote.status.value, printed))

            elif printed is not None:
                residuals.append((abs(quote.value - printed), (mu, strike)))

    bs_residuals = [
        abs(value - printed)
        for strike, value in zip(table.strikes, table.bs_row)
        if strike in reference.strikes
        for printed in [reference.bs_row[reference.strikes.index(strike)]]
    ]

    worst = max(residuals, default=None)

    return Discrepancy(target_p=table.target_p,
                       compared_cells=compared,
                       pattern_mismatches=tuple(mismatches),
                       max_residual=worst[0] if worst else None,
                       worst_cell=worst[1] if worst else None,
                       bs_row_residual=max(bs_residuals, default=0.0),
                       cells_equal_to_bs=tuple(reference.cells_equal_to_bs()),
                       sign_test=table.sign_test())


def render_discrepancy_report(discrepancy: Discrepancy, conventions: ConventionReport, day_count: int,
                              T_days: float) -> str:
    """
    Renders the discrepancy report with the Jinja2 template `discrepancy.txt.j2`.
    """

    from jinja2 import Environment, FileSystemLoader, StrictUndefined

    environment = Environment(loader=FileSystemLoader(TEMPLATE_DIRECTORY),
                              undefined=StrictUndefined,
                              keep_trailing_newline=True,
                              trim_blocks=True,
                              lstrip_blocks=True)

    return environment.get_template('discrepancy.txt.j2').render(discrepancy=discrepancy,
                                                                 conventions=conventions,
                                                                 day_count=day_count,
                                                                 T_days=T_days)
