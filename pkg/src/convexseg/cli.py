"""Command line front end: ``segment``, ``synth`` and ``check``.

Exit codes: 0 success, 1 ``check`` found a nonconvex shape, 2 bad input or
configuration, 3 the iteration produced non-finite values.
"""

import argparse
import csv
import dataclasses
import logging
import os
import sys

import numpy as np

from . import io
from .admm import DIAGNOSTIC_COLUMNS, MODELS, AdmmConfig, dice, run_segmentation
from .convexity import convexity_report
from .exceptions import ConvexSegError, NonFiniteStateError
from .forces import ForceConfig, LabelSet
from .sdf import circle_mask, rect_mask, sdf_from_mask
from .synth import SHAPES, boundary_landmarks, default_scribbles, make_image

logger = logging.getLogger("convexseg")

EXIT_OK, EXIT_NONCONVEX, EXIT_USAGE, EXIT_NONFINITE = 0, 1, 2, 3

ADMM_FIELDS = {f.name: f.type for f in dataclasses.fields(AdmmConfig)}
FORCE_FIELDS = {f.name: f.type for f in dataclasses.fields(ForceConfig)}
PATH_KEYS = ("image", "out", "init", "init_mask", "landmarks", "scribbles", "truth")


class UsageError(Exception):
    """Bad arguments or configuration; maps to exit status 2."""


def _convert(key, value):
    if key in PATH_KEYS or key == "model":
        return value
    if key in ("early_stop",):
        if isinstance(value, bool):
            return value
        low = str(value).lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{key}: expected a boolean, got {value!r}")
    try:
        if key in ("num_iters", "inner_steps", "stop_patience"):
            return int(value)
        return float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{key}: expected a number, got {value!r}") from None


def resolve_config(args):
    """Merge the config file (if any) with explicit command line values."""
    settings = {}
    if args.config:
        try:
            raw = io.read_config(args.config)
        except (OSError, io.FormatError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        known = set(ADMM_FIELDS) | set(FORCE_FIELDS) | set(PATH_KEYS)
        for key, value in raw.items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r}")
            settings[key] = _convert(key, value)
    for key in set(ADMM_FIELDS) | set(FORCE_FIELDS) | set(PATH_KEYS):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = _convert(key, value)
    model = settings.get("model", "GMMC")
    if model not in MODELS:
        raise UsageError(f"unknown model {model!r}; expected one of {', '.join(MODELS)}")
    try:
        admm_cfg = AdmmConfig(**{k: v for k, v in settings.items() if k in ADMM_FIELDS})
        force_cfg = ForceConfig(**{k: v for k, v in settings.items() if k in FORCE_FIELDS})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    paths = {k: settings.get(k) for k in PATH_KEYS}
    return admm_cfg, force_cfg, paths


def parse_init(spec, shape):
    """``circle:cx,cy,r`` or ``rect:x0,y0,x1,y1`` (pixel units) to a 0/1 mask."""
    N, M = shape
    if spec is None:
        return circle_mask(shape, (M - 1) / 2.0, (N - 1) / 2.0, 0.25 * min(M, N))
    kind, _, rest = spec.partition(":")
    try:
        vals = [float(v) for v in rest.split(",")]
    except ValueError:
        raise UsageError(f"init: cannot parse numbers in {spec!r}") from None
    if kind == "circle" and len(vals) == 3:
        if vals[2] <= 0:
            raise UsageError("init: circle radius must be positive")
        mask = circle_mask(shape, *vals)
    elif kind == "rect" and len(vals) == 4:
        mask = rect_mask(shape, *(int(round(v)) for v in vals))
    else:
        raise UsageError(f"init: expected circle:cx,cy,r or rect:x0,y0,x1,y1, got {spec!r}")
    if (mask == 1).all():
        raise UsageError("init: shape contains no pixel of the image")
    if (mask == 0).all():
        raise UsageError("init: shape covers the whole image")
    return mask


def _read(reader, path, what):
    try:
        return reader(path)
    except (OSError, io.FormatError) as exc:
        raise UsageError(f"cannot read {what}: {exc}") from None


def load_inputs(admm_cfg, paths):
    if not paths["image"]:
        raise UsageError("missing field 'image'")
    img = _read(io.read_pnm, paths["image"], "image")
    shape = img.shape[:2]
    if paths["init_mask"]:
        init = _read(io.read_mask, paths["init_mask"], "init_mask")
        if init.shape != shape:
            raise UsageError(f"init_mask shape {init.shape} != image shape {shape}")
    else:
        init = parse_init(paths["init"], shape)
    labels = LabelSet()
    if admm_cfg.uses_landmarks:
        if not paths["landmarks"]:
            raise UsageError(f"model {admm_cfg.model} needs field 'landmarks'")
        labels.landmarks = _read(io.read_landmarks, paths["landmarks"], "landmarks")
        if len(labels.landmarks) == 0:
            raise UsageError("field 'landmarks': file lists no points")
    if admm_cfg.model.startswith("RP"):
        if not paths["scribbles"]:
            raise UsageError(f"model {admm_cfg.model} needs field 'scribbles'")
        labels.ob, labels.bg = _read(io.read_scribbles, paths["scribbles"], "scribbles")
    try:
        labels.validate(shape)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    truth = None
    if paths["truth"]:
        truth = _read(io.read_mask, paths["truth"], "truth")
        if truth.shape != shape:
            raise UsageError(f"truth shape {truth.shape} != image shape {shape}")
    return img, init, labels, truth


def write_diagnostics(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DIAGNOSTIC_COLUMNS)
        for r in rows:
            out = []
            for col in DIAGNOSTIC_COLUMNS:
                v = r[col]
                out.append("" if v is None else (v if col == "iter" else repr(float(v))))
            w.writerow(out)


def cmd_segment(args):
    admm_cfg, force_cfg, paths = resolve_config(args)
    img, init, labels, truth = load_inputs(admm_cfg, paths)
    out = paths["out"] or "."
    os.makedirs(out, exist_ok=True)
    try:
        res = run_segmentation(img, init, labels, admm_cfg, force_cfg, truth=truth)
    except NonFiniteStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except ConvexSegError as exc:
        raise UsageError(str(exc)) from None
    io.write_pnm(os.path.join(out, "mask.pgm"), io.mask_to_u8(res.mask))
    io.write_pnm(os.path.join(out, "overlay.ppm"), io.overlay(img, res.phi))
    io.write_phi(os.path.join(out, "phi.f64"), res.phi)
    write_diagnostics(os.path.join(out, "diagnostics.csv"), res.diagnostics)
    report = convexity_report(res.phi)
    with open(os.path.join(out, "report.txt"), "w") as fh:
        fh.write(f"model = {admm_cfg.model}\n")
        fh.write(f"iterations = {res.iterations}\n")
        if truth is not None:
            fh.write(f"dice = {dice(res.mask, truth):.6f}\n")
        fh.write(report.to_text())
    logger.info("wrote results to %s", out)
    return EXIT_OK


def parse_size(text):
    try:
        M, N = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"size: expected M,N, got {text!r}") from None
    if M < 8 or N < 8:
        raise UsageError("size: both sides must be at least 8")
    return M, N


def cmd_synth(args):
    if args.shape not in SHAPES:
        raise UsageError(f"unknown shape {args.shape!r}; expected one of {', '.join(SHAPES)}")
    size = parse_size(args.size)
    if args.sigma < 0:
        raise UsageError("sigma must be nonnegative")
    img, truth = make_image(args.shape, size, args.sigma, args.seed)
    os.makedirs(args.out, exist_ok=True)
    io.write_pnm(os.path.join(args.out, "image.pgm"), io.to_u8(img))
    io.write_pnm(os.path.join(args.out, "truth.pgm"), io.mask_to_u8(truth))
    if args.shape == "corrupted-disk":
        io.write_landmarks(os.path.join(args.out, "landmarks.txt"), boundary_landmarks(size))
    if args.shape == "occluded-disk":
        ob, bg = default_scribbles(size)
        io.write_pnm(os.path.join(args.out, "scribbles.pgm"), io.scribbles_to_u8(ob, bg))
    return EXIT_OK


def cmd_check(args):
    path = args.file
    try:
        with open(path, "rb") as fh:
            head = fh.read(4)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if head == io.PHI_MAGIC:
        phi = _read(io.read_phi, path, "phi file")
    else:
        mask = _read(io.read_mask, path, "mask")
        try:
            phi = sdf_from_mask(mask)
        except ConvexSegError as exc:
            raise UsageError(str(exc)) from None
    if not np.isfinite(phi).all():
        raise UsageError(f"{path}: non-finite values")
    if not (phi <= 0).any():
        raise UsageError(f"{path}: no object pixels")
    report = convexity_report(phi, tol_px=args.tol)
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.mask_convex else EXIT_NONCONVEX


def build_parser():
    p = argparse.ArgumentParser(prog="convexseg", description="Level-set segmentation with a convex shape prior.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("segment", help="segment an image")
    s.add_argument("image", nargs="?", help="input P5/P6 image")
    s.add_argument("--config", help="'key = value' file; command line values override it")
    s.add_argument("--out", help="output directory (default: current)")
    s.add_argument("--init", help="initial curve: circle:cx,cy,r or rect:x0,y0,x1,y1")
    s.add_argument("--init-mask", dest="init_mask", help="initial curve as a PGM mask (dark = object)")
    s.add_argument("--landmarks", help="text file with one 'm n' pixel pair per line")
    s.add_argument("--scribbles", help="PGM with 255 = object, 128 = background")
    s.add_argument("--truth", help="ground-truth PGM mask for the dice column")
    s.add_argument("--model", help=f"one of {', '.join(MODELS)} (default GMMC)")
    for name in list(ADMM_FIELDS) + list(FORCE_FIELDS):
        if name == "model":
            continue
        s.add_argument(f"--{name.replace('_', '-')}", dest=name, metavar="V")
    s.set_defaults(func=cmd_segment)

    y = sub.add_parser("synth", help="generate a synthetic test image")
    y.add_argument("shape", help=f"one of {', '.join(SHAPES)}")
    y.add_argument("--size", default="128,128", help="M,N (width,height)")
    y.add_argument("--sigma", type=float, default=0.05, help="noise standard deviation")
    y.add_argument("--seed", type=int, default=0)
    y.add_argument("--out", default=".")
    y.set_defaults(func=cmd_synth)

    c = sub.add_parser("check", help="report the convexity of a phi.f64 file or a PGM mask")
    c.add_argument("file")
    c.add_argument("--tol", type=float, default=1.0, help="hull tolerance in pixels")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
