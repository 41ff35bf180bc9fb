import argparse
import glob
import json
import os
import sys

import pandas as pd

if __name__ == "__main__":
    sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

SCALAR_TYPES = (int, float, str, bool)


def load_report_list(parent_dir):
    return sorted(glob.glob(f"{parent_dir}/**/report.json", recursive=True))


def flatten_results(results, prefix=""):
    """
    nested results -> {"a.b": scalar}; lists are summarized by their length.
    """
    flat = {}
    for key, value in results.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_results(value, prefix=f"{name}."))
        elif isinstance(value, list):
            flat[f"{name}.len"] = len(value)
        elif value is None or isinstance(value, SCALAR_TYPES):
            flat[name] = value
    return flat


def report_to_row(path):
    with open(path) as stream:
        report = json.load(stream)
    row = {
        "report": path,
        "subcommand": report.get("subcommand"),
        "tool_version": report.get("tool_version"),
        "wall_time": report.get("wall_time"),
    }
    row.update(flatten_results(report.get("results", {}), prefix="results."))
    return row


def summarize(parent_dir, export_path=None, float_format=None):
    report_list = load_report_list(parent_dir)
    if not report_list:
        print(f"no report.json under {parent_dir}")
        return None
    df = pd.DataFrame([report_to_row(path) for path in report_list]).set_index("report")
    export_path = export_path or f"{parent_dir}/reports_summary.csv"
    df.to_csv(export_path, float_format=float_format)
    print(f"export summarize results -> {export_path}")
    print(df.groupby("subcommand")["wall_time"].describe())
    return df


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
            description='Summarize report.json files into one CSV')
    parser.add_argument("parent_dir", type=str)
    parser.add_argument("--export_path", type=str, default=None)
    parser.add_argument("--float_format", type=str, default=None)
    args = parser.parse_args()

    summarize(parent_dir=args.parent_dir, export_path=args.export_path, float_format=args.float_format)
