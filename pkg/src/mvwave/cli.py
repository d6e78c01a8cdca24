"""``mvwave`` command line: synth, analyze, cwt, kernels, selftest.

Every command writes a JSON manifest next to its outputs. The manifest is
serialized with sorted keys and two-space indentation, so the timestamp
is the only line that changes between identical runs.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    DEFAULT_FRACTION,
    correlate_direct,
    correlate_separable,
    cwt_argmax,
    cwt_cell,
    cwt_plane,
    depth_map,
    detect_all_detections,
    paper_units,
    threshold_value,
)
from .errors import ArgumentError, FormatError, MvwaveError
from .pgm import read_pgm, write_pgm, write_pgm_array
from .reffun import DisplayConfig, check_plane, raster_1d, raster_1d_haar_form, raster_2d
from .scene import VoxelSet, cube_diagonals, from_edge_list, read_object, tetrahedron_edges
from .synth import add_noise, render
from .wavelet import admissibility, has_center_zero, wavelet_1d, wavelet_2d

BUILTIN_OBJECTS = ("cube8", "tetra")


def _config(args) -> DisplayConfig:
    return DisplayConfig(args.pitch, args.levels, args.max_plane)


def _out_dir(args) -> Path:
    out = Path(args.out_dir or os.environ.get("MVWAVE_OUT") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fraction(text: str):
    from fractions import Fraction

    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < f <= 1:
        raise argparse.ArgumentTypeError(f"fraction must lie in (0, 1], got {text}")
    return f


def _plane_tag(n: int) -> str:
    return f"{n:+d}".replace("+", "p").replace("-", "m")


def write_manifest(path: Path, command: str, args, cfg: DisplayConfig | None, inputs, outputs, **extra) -> Path:
    manifest = {
        "tool": "mvwave",
        "version": __version__,
        "command": command,
        "argv": [a for a in getattr(args, "argv", [])],
        "config": cfg.as_dict() if cfg else None,
        "plane_ladder": cfg.planes() if cfg else None,
        "inputs": [str(p) for p in inputs],
        "outputs": sorted(str(p) for p in [*outputs, path]),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **extra,
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def write_voxels_csv(voxels: VoxelSet, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cx", "cy", "k"])
        for x, y, k in sorted(voxels.voxels, key=lambda v: (v[1], v[0], v[2])):
            w.writerow([x, y, k])
    return path


def read_voxels_csv(path) -> VoxelSet:
    points = []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, [])
        if header[:3] != ["cx", "cy", "k"]:
            raise FormatError(f"{path}: expected header cx,cy,k, got {header}")
        for lineno, row in enumerate(rows, 2):
            try:
                points.append(tuple(int(c) for c in row[:3]))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-integer field in {row}") from None
    return VoxelSet.from_points(points)


def write_matrix_csv(a, path: Path) -> Path:
    a = np.asarray(a)
    if a.ndim == 1:
        a = a[None, :]
    with open(path, "w") as fh:
        for row in a:
            fh.write(",".join(map(str, row.tolist())))
            fh.write("\n")
    return path


def load_object(source: str, cfg: DisplayConfig) -> VoxelSet:
    if source == "cube8":
        return cube_diagonals(8, cfg)
    if source == "tetra":
        return tetrahedron_edges(cfg)
    path = Path(source)
    if not path.is_file():
        raise ArgumentError(f"unknown object {source!r}: expected one of {BUILTIN_OBJECTS} or an object file")
    return from_edge_list(read_object(path))


def cmd_synth(args) -> int:
    cfg = _config(args)
    voxels = load_object(args.object, cfg)
    img = render(voxels, cfg)
    if args.noise:
        img = add_noise(img, args.noise, args.seed)
    out = _out_dir(args)
    stem = args.name or Path(args.object).stem
    pgm = write_pgm(img, out / f"{stem}.pgm")
    vox = write_voxels_csv(voxels, out / f"{stem}.voxels.csv")
    write_manifest(
        out / f"{stem}.synth.json", "synth", args, cfg,
        inputs=[] if args.object in BUILTIN_OBJECTS else [args.object],
        outputs=[pgm, vox],
        object=args.object,
        seed=args.seed,
        noise={"model": "uniform-additive", "amplitude": args.noise},
        image={"width_px": img.width_px, "height_px": img.height_px, **img.manifest},
        skipped_screen_plane_steps=voxels.skipped_screen_plane,
        normalization="patterns stamped at full scale (gray_levels - 1), saturating-max composition",
    )
    print(f"{pgm}: {img.width_px}x{img.height_px}, {len(voxels)} voxels")
    return 0


def cmd_analyze(args) -> int:
    cfg = _config(args)
    img = read_pgm(args.image, cfg)
    detections = detect_all_detections(img, cfg, args.fraction)
    voxels = VoxelSet(frozenset(d.voxel for d in detections), img.cells)
    depth = depth_map(detections, img.cells, cfg)
    out = _out_dir(args)
    stem = Path(args.image).stem
    det_csv = out / f"{stem}.detections.csv"
    with open(det_csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cx", "cy", "k", "score"])
        for d in detections:
            w.writerow([d.cx, d.cy, d.k, d.score])
    depth_pgm = write_pgm_array(depth.pixels, out / f"{stem}.depth.pgm")
    extra = {}
    inputs = [args.image]
    if args.truth:
        truth = read_voxels_csv(args.truth)
        tp = len(voxels.voxels & truth.voxels)
        extra["scores_vs_truth"] = {
            "true_positives": tp,
            "recall": tp / len(truth) if len(truth) else 1.0,
            "precision": tp / len(voxels) if len(voxels) else 1.0,
        }
        inputs.append(args.truth)
    write_manifest(
        out / f"{stem}.analyze.json", "analyze", args, cfg, inputs=inputs, outputs=[det_csv, depth_pgm],
        fraction=str(args.fraction),
        threshold={"peak": threshold_value(cfg), "paper_units": str(paper_units(cfg))},
        detections=len(detections),
        depth_legend={str(k): v for k, v in depth.legend.items()},
        depth_background=depth.background,
        normalization="unit-amplitude kernels; peak = (gray_levels - 1) * cell_pitch^2",
        **extra,
    )
    print(f"{det_csv}: {len(detections)} detections")
    for key, value in extra.get("scores_vs_truth", {}).items():
        print(f"  {key}: {value}")
    return 0


def cmd_cwt(args) -> int:
    cfg = _config(args)
    n = check_plane(args.plane, cfg)
    img = read_pgm(args.image, cfg)
    r = cwt_plane(img, n, cfg)
    u, v, score = cwt_argmax(r)
    out = _out_dir(args)
    stem = f"{Path(args.image).stem}.cwt_{_plane_tag(n)}"
    resp_csv = write_matrix_csv(r.scores, out / f"{stem}.csv")
    lo, hi = int(r.scores.min()), int(r.scores.max())
    if hi > lo:
        preview = ((r.scores - lo) * 255) // (hi - lo)
    else:
        preview = np.zeros_like(r.scores)
    prev_pgm = write_pgm_array(preview, out / f"{stem}.pgm")
    write_manifest(
        out / f"{stem}.json", "cwt", args, cfg, inputs=[args.image], outputs=[resp_csv, prev_pgm],
        plane=n,
        valid_region=list(r.valid_region),
        argmax={"u": u, "v": v, "score": score, "cell": list(cwt_cell(u, v, n, cfg))},
        preview_normalization={"min": lo, "max": hi, "formula": "(s - min) * 255 // (max - min)"},
        center_zero_split=has_center_zero(n, cfg),
    )
    print(f"{resp_csv}: argmax u={u} v={v} score={score} cell={cwt_cell(u, v, n, cfg)}")
    return 0


def cmd_kernels(args) -> int:
    cfg = _config(args)
    n = check_plane(args.plane, cfg)
    out = _out_dir(args)
    stem = f"kernels_{_plane_tag(n)}"
    files = [
        write_matrix_csv(raster_1d(n, cfg).values, out / f"{stem}.ref1d.csv"),
        write_matrix_csv(raster_2d(n, cfg).values, out / f"{stem}.ref2d.csv"),
        write_matrix_csv(wavelet_1d(n, cfg).values, out / f"{stem}.wav1d.csv"),
        write_matrix_csv(wavelet_2d(n, cfg).values, out / f"{stem}.wav2d.csv"),
    ]
    center_zero = has_center_zero(n, cfg)
    write_manifest(
        out / f"{stem}.json", "kernels", args, cfg, inputs=[], outputs=files,
        plane=n,
        center_zero_split=center_zero,
        wavelet_coefficients=["1", "-1"],
        normalization="unit amplitude, no sqrt(2) factor",
    )
    for f in files:
        print(f)
    if center_zero:
        print(f"note: pulse width {cfg.cell_pitch // abs(n)} is odd; wavelet lobes split with one zero sample")
    return 0


def selftest(cfg: DisplayConfig) -> list[tuple[str, bool]]:
    """Fast exact checks of the core invariants, one ``(label, ok)`` per check."""
    results = []
    p = cfg.cell_pitch
    usable = [k for k in cfg.planes() if p % abs(k) == 0]
    for k in usable:
        ref = raster_1d(k, cfg).values
        n_anchor = 3 * abs(k)
        line = np.zeros((n_anchor + abs(k)) * p, dtype=np.int64)
        for a in range(n_anchor):
            line[a * p:a * p + len(ref)] += ref
        interior = line[(abs(k) - 1) * p:n_anchor * p]
        results.append((f"partition of unity k={k:+d}", bool(np.all(interior == 1))))
        results.append((f"haar form k={k:+d}", bool(np.array_equal(ref, raster_1d_haar_form(k, cfg).values))))
        if p // abs(k) >= 2:
            ok = admissibility(wavelet_1d(k, cfg)) == 0 and admissibility(wavelet_2d(k, cfg)) == 0
            results.append((f"wavelet zero mean k={k:+d}", ok))
        img = render(VoxelSet.from_points([(0, 0, k)]), cfg)
        peak = int(correlate_separable(img, ref, ref).scores.max())
        results.append((f"constant peak k={k:+d}", peak == threshold_value(cfg)))
    rng = np.random.default_rng(0)
    k = usable[-1] if usable else 1
    img = rng.integers(0, cfg.gray_levels, size=((abs(k) + 1) * p, (abs(k) + 1) * p))
    ref = raster_1d(k, cfg)
    same = np.array_equal(correlate_separable(img, ref, ref).scores, correlate_direct(img, raster_2d(k, cfg)))
    results.append((f"separable == direct k={k:+d}", same))
    return results


def cmd_selftest(args) -> int:
    cfg = _config(args)
    results = selftest(cfg)
    for label, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {label}")
    failed = sum(not ok for _, ok in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pitch", type=int, default=60, help="pixels per cell side (default 60)")
    common.add_argument("--levels", type=int, default=256, help="gray levels (default 256)")
    common.add_argument("--max-plane", type=int, default=6, help="largest |k| (default 6)")
    common.add_argument("--out-dir", default=None, help="output directory (default $MVWAVE_OUT or .)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="mvwave", description="Multiview image synthesis and wavelet analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="render a multiview image of a wireframe object")
    p.add_argument("object", help="cube8, tetra, or an object file (v/e records)")
    p.add_argument("--noise", type=int, default=0, help="uniform noise amplitude in gray levels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default=None, help="output file stem")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("analyze", parents=[common], help="detect voxels by thresholded correlation")
    p.add_argument("image")
    p.add_argument("--fraction", type=_fraction, default=DEFAULT_FRACTION,
                   help="threshold as a fraction of the lone-voxel peak (default 0.7)")
    p.add_argument("--truth", default=None, help="voxels CSV to score recall and precision against")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cwt", parents=[common], help="continuous wavelet transform for one plane")
    p.add_argument("image")
    p.add_argument("--plane", type=int, required=True)
    p.set_defaults(func=cmd_cwt)

    p = sub.add_parser("kernels", parents=[common], help="dump reference and wavelet rasters as CSV")
    p.add_argument("--plane", type=int, required=True)
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("selftest", parents=[common], help="run the exact invariant checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except MvwaveError as exc:
        print(f"mvwave: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
