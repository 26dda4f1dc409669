import os
import json
import logging
import argparse
from typing import List, Sequence

import pandas as pd

from ..core.data_models import VerificationReport
from ..core.exceptions import ValidationError

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ['theorem', 'samples', 'worst_margin', 'passed', 'seed', 'bound']
EXPORT_SUFFIXES = ('.csv', '.json', '.dot')


def export_targets(output_dir: str, filenames: Sequence[str]) -> List[str]:
    """Paths of the export files under output_dir; ValidationError for an unknown file type
    or a target that cannot be written"""
    output_dir = output_dir or os.getcwd()
    if not os.path.isdir(output_dir):
        raise ValidationError(f"Export directory '{output_dir}' does not exist")
    if not os.access(output_dir, os.W_OK):
        raise ValidationError(f"Export directory '{output_dir}' is not writable")

    paths = []
    for name in filenames:
        if os.path.splitext(name)[1] not in EXPORT_SUFFIXES:
            raise ValidationError(f"'{name}' is not a {', '.join(EXPORT_SUFFIXES)} export")
        path = os.path.join(output_dir, name)
        if os.path.exists(path):
            if not os.path.isfile(path) or not os.access(path, os.W_OK):
                raise ValidationError(f"'{path}' exists and cannot be overwritten")
            logger.debug(f"Overwriting {path}")
        paths.append(path)
    return paths


def reports_to_frame(reports: Sequence[VerificationReport]) -> pd.DataFrame:
    """One row per report; witness coordinates and details are flattened into columns"""
    rows = []
    for report in reports:
        row = {column: getattr(report, column) for column in REPORT_COLUMNS}
        for name, (re_part, im_part) in report.witness.items():
            row[f'witness_{name}_re'] = re_part
            row[f'witness_{name}_im'] = im_part
        for name, value in report.details.items():
            row[f'detail_{name}'] = value
        rows.append(row)
    frame = pd.DataFrame(rows)
    if frame.empty:
        return pd.DataFrame(columns=REPORT_COLUMNS)
    return frame


def export_reports(reports: Sequence[VerificationReport], output_dir: str) -> List[str]:
    """Write reports.csv (summary table) and reports.json (one record per report) into output_dir"""
    os.makedirs(output_dir, exist_ok=True)
    csv_path, json_path = export_targets(output_dir, ['reports.csv', 'reports.json'])

    reports_to_frame(reports).to_csv(csv_path, index=False)
    with open(json_path, 'w') as f:
        json.dump([json.loads(r.to_json()) for r in reports], f, indent=2)
    logger.info(f"{len(reports)} reports exported to {output_dir}")
    return [csv_path, json_path]


def write_text(text: str, output_path: str) -> None:
    [output_path] = export_targets(os.path.dirname(output_path), [os.path.basename(output_path)])
    with open(output_path, 'w') as f:
        f.write(text)
    logger.info(f"Written {output_path}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Summarize exported verification reports (reports.json) as a table."
    )
    parser.add_argument("reports_json", help="Path of a reports.json written by export_reports.")
    args = parser.parse_args()

    with open(args.reports_json) as f:
        loaded = [VerificationReport(**record) for record in json.load(f)]
    print(reports_to_frame(loaded).to_string(index=False))
