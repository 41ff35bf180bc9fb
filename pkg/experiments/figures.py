"""
Reference figure rendering and the hash baseline over its outputs.

Every figure is written twice: a P6 image (depends on the palette) and a
class CSV (does not). The manifest maps file names to sha256 digests.
"""
import json
from pathlib import Path

import fasteners
import pandas as pd
from tqdm import tqdm

# original lib
import common as com
from errors import ConfigError
from experiments.base_experiment import BaseExperiment, dump_json, map_from_entry
from planes.escape import render_escape
from planes.window import Window
from planes.yoccoz import yoccoz_disks_figure
from tools.image_io import content_hash, write_grid_csv, write_ppm

MANIFEST = "manifest.json"
MIN_SIDE = 8


def load_figures(path=None):
    path = path or com.FIGURES_YAML
    try:
        figures = com.yaml_load(path).get("figures", [])
    except FileNotFoundError as e:
        raise ConfigError(f"figure list not found: {path}") from e
    if not figures:
        raise ConfigError(f"{path} lists no figures")
    return figures


def scaled_window(entry, scale):
    cols, rows = entry.get("size", [512, 512])
    size = (max(MIN_SIDE, int(round(cols * scale))), max(MIN_SIDE, int(round(rows * scale))))
    return Window.from_args(entry["window"], size)


def render_figure(entry, scale, presets, chunk_rows=64):
    """
    entry : one item of figures.yaml
    """
    window = scaled_window(entry, scale)
    kind = entry.get("kind", "julia")
    if kind == "julia":
        maps = presets.get("maps", {})
        if entry["map"] not in maps:
            raise ConfigError(f"figure '{entry['name']}' uses unknown map '{entry['map']}'")
        f = map_from_entry(entry["map"], maps[entry["map"]])
        return render_escape(f, window, int(entry.get("max_iter", 500)), chunk_rows)
    if kind == "yoccoz":
        return yoccoz_disks_figure(int(entry.get("q_max", 12)), window)
    raise ConfigError(f"figure '{entry['name']}': unknown kind '{kind}'")


class FigureSet(BaseExperiment):
    def render_all(self, scale):
        """
        return : list of dict(file, kind, sha256)
        """
        presets = com.load_presets()
        rows = []
        for entry in tqdm(load_figures(), desc="figures"):
            grid = render_figure(entry, scale, presets, self.args.chunk_rows)
            image = write_ppm(self.result_dir / f"{entry['name']}.ppm", grid.to_rgb(self.palette))
            table = write_grid_csv(self.result_dir / f"{entry['name']}.csv", grid)
            rows.append({"file": image.name, "kind": "image", "sha256": content_hash(image)})
            rows.append({"file": table.name, "kind": "csv", "sha256": content_hash(table)})
            com.logger.info(f"figure {entry['name']}: {grid.summary()}")
        return rows

    def manifest_lock(self, baseline_dir):
        return fasteners.InterProcessReaderWriterLock(str(baseline_dir / f".{MANIFEST}.lock"))


class PaperFiguresExperiment(FigureSet):
    name = "paper-figures"

    def run(self):
        rows = self.render_all(self.args.figure_scale)
        results = {"figure_scale": self.args.figure_scale, "files": rows, "manifest": None}
        if self.args.update_baseline:
            baseline_dir = Path(self.args.baseline_dir)
            baseline_dir.mkdir(parents=True, exist_ok=True)
            manifest_path = baseline_dir / MANIFEST
            lock = self.manifest_lock(baseline_dir)
            with lock.write_lock():
                dump_json(manifest_path, {"tool_version": com.__versions__, "figure_scale": self.args.figure_scale,
                                          "files": {row["file"]: row["sha256"] for row in rows}})
            print(f"save manifest -> {manifest_path}")
            results["manifest"] = manifest_path
        return results


class BaselineCheckExperiment(FigureSet):
    name = "baseline-check"

    def run(self):
        baseline_dir = Path(self.args.baseline_dir)
        manifest_path = baseline_dir / MANIFEST
        if not manifest_path.is_file():
            raise ConfigError(f"baseline manifest not found: {manifest_path}")
        with self.manifest_lock(baseline_dir).read_lock():
            with open(manifest_path) as stream:
                manifest = json.load(stream)
        expected = manifest.get("files", {})
        rows = self.render_all(float(manifest.get("figure_scale", 1.0)))
        table = pd.DataFrame(rows).rename(columns={"sha256": "actual"})
        table["expected"] = table["file"].map(expected)
        table["status"] = (table["actual"] == table["expected"]).map({True: "pass", False: "fail"})
        missing = sorted(set(expected) - set(table["file"]))
        if missing:
            extra = pd.DataFrame({"file": missing, "kind": None, "actual": None,
                                  "expected": [expected[m] for m in missing], "status": "fail"})
            table = pd.concat([table, extra], ignore_index=True)
        path = self.output_path("csv", stem="baseline_check")
        table.to_csv(path, index=False)
        print(table[["file", "kind", "status"]].to_string(index=False))
        print(f"save table -> {path}")
        return {"passed": bool((table["status"] == "pass").all()), "table": table.to_dict(orient="records"),
                "output": path}

    def status(self, results):
        return 0 if results["passed"] else 1
