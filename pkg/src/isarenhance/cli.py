"""Command-line pipeline: simulate -> rdimage -> enhance / sweep -> metrics.

Every command writes a JSON sidecar holding its fully resolved options next to
its outputs; ``isarenhance rerun SIDECAR`` replays it.

Exit codes: 0 ok, 2 usage, 3 format, 4 domain, 5 numeric.
"""

import argparse
import json
import math
import os
import sys

from . import __version__, formats
from .enhancer import TrainConfig, train
from .errors import DomainError, FormatError, NumericError, ShapeError
from .metrics import image_metrics
from .radar_sim import (
    DEFAULT_BANDWIDTH_HZ,
    DEFAULT_CARRIER_HZ,
    DEFAULT_N_PULSE,
    DEFAULT_N_RANGE,
    DEFAULT_PULSE_INTERVAL_S,
    DEFAULT_ROTATION_RATE_RAD_S,
    RadarParams,
    add_noise,
    simulate_echo,
)
from .rd_imaging import is_power_of_two, magnitude_normalize, rd_image

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4, 5

PATH_OPTIONS = {"scene", "in_", "out", "out_pgm", "out_cf64", "out_loss_csv",
                "out_dir", "out_csv", "mask", "reference"}


class UsageError(Exception):
    pass


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer: {text}")
    return value


def _lambdas(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad lambda list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("lambda list is empty")
    if any(not v >= 0 for v in values):
        raise argparse.ArgumentTypeError(f"every lambda must be >= 0: {text!r}")
    return values


def _nonneg(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text}")
    return value


def _sidecar(path, command, args, artifacts):
    options = {}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "func"):
            continue
        if isinstance(value, float) and not math.isfinite(value):
            value = repr(value)
        options[key] = value
    formats.write_json(path, {
        "command": command,
        "options": options,
        "artifacts": [os.path.abspath(a) for a in artifacts],
        "seed": getattr(args, "seed", None),
        "version": __version__,
    })


def _abspaths(args):
    for key in PATH_OPTIONS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(args, key, os.path.abspath(value))


def _read_image(path):
    """Magnitude image in [0, 1] from a CF64 (normalised modulus) or PGM file."""
    if formats.is_cf64(path):
        return magnitude_normalize(formats.read_cf64(path))
    return formats.read_pgm(path)


# -- commands ----------------------------------------------------------------

def cmd_simulate(args):
    params = RadarParams(args.carrier_hz, args.bandwidth_hz, args.n_range, args.n_pulse,
                         args.rotation_rate, args.pulse_interval)
    if not (is_power_of_two(params.n_range) and is_power_of_two(params.n_pulse)):
        raise DomainError(f"dimensions must be powers of two, got {params.n_range}x{params.n_pulse}")
    scene = formats.read_scene(args.scene)
    if not scene and not args.allow_empty:
        raise DomainError(f"{args.scene}: scene has no scatterers (pass --allow-empty to permit)")
    echo = add_noise(simulate_echo(scene, params), args.snr_db, args.seed)
    formats.write_cf64(args.out, echo)
    _sidecar(args.out + ".json", "simulate", args, [args.out])


def cmd_rdimage(args):
    if not (args.out_pgm or args.out_cf64):
        raise UsageError("rdimage needs --out-pgm and/or --out-cf64")
    img = rd_image(formats.read_cf64(args.in_), window=args.window)
    mag = magnitude_normalize(img)
    outputs = []
    if args.out_cf64:
        formats.write_cf64(args.out_cf64, img)
        outputs.append(args.out_cf64)
    if args.out_pgm:
        formats.write_pgm(args.out_pgm, formats.display_levels(mag, db=args.db))
        outputs.append(args.out_pgm)
    _sidecar(outputs[0] + ".json", "rdimage", args, outputs)


def enhance_image(y, lam, lr, epochs, seed, out_pgm, out_loss_csv, db=False):
    enhanced, report = train(y, TrainConfig(lam=lam, learning_rate=lr, epochs=epochs, seed=seed))
    outputs = []
    if out_pgm:
        formats.write_pgm(out_pgm, formats.display_levels(enhanced, db=db))
        outputs.append(out_pgm)
    if out_loss_csv:
        rows = zip(range(epochs), report.loss_history, report.fidelity_history, report.sparsity_history)
        formats.write_csv(out_loss_csv, ("epoch", "total", "fidelity", "sparsity"), rows)
        outputs.append(out_loss_csv)
    return enhanced, report, outputs


def cmd_enhance(args):
    if not (args.out_pgm or args.out_loss_csv):
        raise UsageError("enhance needs --out-pgm and/or --out-loss-csv")
    y = magnitude_normalize(formats.read_cf64(args.in_))
    _, _, outputs = enhance_image(y, args.lam, args.lr, args.epochs, args.seed,
                                  args.out_pgm, args.out_loss_csv, args.db)
    _sidecar(outputs[0] + ".json", "enhance", args, outputs)


def cmd_sweep(args):
    y = magnitude_normalize(formats.read_cf64(args.in_))
    mask = formats.read_pgm(args.mask) > 0 if args.mask else None
    if mask is not None and mask.shape != y.shape:
        raise ShapeError(f"mask shape {mask.shape} does not match image {y.shape}")
    os.makedirs(args.out_dir, exist_ok=True)
    header = ["lambda", "entropy", "contrast", "l1_mean"] + (["tbr"] if mask is not None else [])
    rows, artifacts = [], []
    for lam in args.lambdas:
        sub = os.path.join(args.out_dir, f"lambda_{lam!r}")
        os.makedirs(sub, exist_ok=True)
        pgm = os.path.join(sub, "enhanced.pgm")
        csv = os.path.join(sub, "loss.csv")
        enhanced, _, outputs = enhance_image(y, lam, args.lr, args.epochs, args.seed, pgm, csv, args.db)
        sub_args = argparse.Namespace(in_=args.in_, lam=lam, lr=args.lr, epochs=args.epochs,
                                      seed=args.seed, out_pgm=pgm, out_loss_csv=csv, db=args.db)
        _sidecar(pgm + ".json", "enhance", sub_args, outputs)
        artifacts += outputs
        values = {m.name: m.value for m in image_metrics(enhanced, mask=mask)}
        rows.append([lam] + [values[h] for h in header[1:]])
    summary = os.path.join(args.out_dir, "summary.csv")
    formats.write_csv(summary, header, rows)
    artifacts.append(summary)
    _sidecar(os.path.join(args.out_dir, "run_config.json"), "sweep", args, artifacts)


def cmd_metrics(args):
    img = _read_image(args.in_)
    reference = _read_image(args.reference) if args.reference else None
    mask = formats.read_pgm(args.mask) > 0 if args.mask else None
    for other, name in ((reference, "reference"), (mask, "mask")):
        if other is not None and other.shape != img.shape:
            raise ShapeError(f"{name} shape {other.shape} does not match image {img.shape}")
    rows = [(m.name, m.value) for m in image_metrics(img, mask=mask, reference=reference)]
    formats.write_csv(args.out_csv, ("metric", "value"), rows)
    _sidecar(args.out_csv + ".json", "metrics", args, [args.out_csv])


# -- parser ------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="isarenhance", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}

    p = sub.add_parser("simulate", help="simulate a point-scatterer phase history")
    p.add_argument("scene", help="scene file: range_m,cross_range_m,reflectivity per line")
    p.add_argument("--carrier-hz", type=float, default=DEFAULT_CARRIER_HZ)
    p.add_argument("--bandwidth-hz", type=float, default=DEFAULT_BANDWIDTH_HZ)
    p.add_argument("--n-range", type=int, default=DEFAULT_N_RANGE)
    p.add_argument("--n-pulse", type=int, default=DEFAULT_N_PULSE)
    p.add_argument("--rotation-rate", type=float, default=DEFAULT_ROTATION_RATE_RAD_S, help="rad/s")
    p.add_argument("--pulse-interval", type=float, default=DEFAULT_PULSE_INTERVAL_S, help="seconds")
    p.add_argument("--snr-db", type=float, default=math.inf, help="inf (default) adds no noise")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-empty", action="store_true")
    p.set_defaults(func=cmd_simulate)
    commands["simulate"] = p

    p = sub.add_parser("rdimage", help="range-Doppler image from a CF64 phase history")
    p.add_argument("--in", dest="in_", required=True)
    p.add_argument("--out-pgm")
    p.add_argument("--out-cf64")
    p.add_argument("--window", action="store_true", help="Hamming taper across frequency")
    p.add_argument("--db", action="store_true", help="display in dB (60 dB range)")
    p.set_defaults(func=cmd_rdimage)
    commands["rdimage"] = p

    def training_options(p):
        p.add_argument("--lr", type=float, default=1e-4)
        p.add_argument("--epochs", type=int, default=100)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--db", action="store_true", help="display in dB (60 dB range)")

    p = sub.add_parser("enhance", help="train the enhancer on one CF64 RD image")
    p.add_argument("--in", dest="in_", required=True)
    p.add_argument("--lambda", dest="lam", type=_nonneg, default=0.1)
    training_options(p)
    p.add_argument("--out-pgm")
    p.add_argument("--out-loss-csv")
    p.set_defaults(func=cmd_enhance)
    commands["enhance"] = p

    p = sub.add_parser("sweep", help="enhance once per lambda and summarise")
    p.add_argument("--in", dest="in_", required=True)
    p.add_argument("--lambdas", type=_lambdas, default=[0.1, 0.2, 0.3])
    training_options(p)
    p.add_argument("--mask", help="PGM, nonzero pixels mark the target (adds a tbr column)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_sweep)
    commands["sweep"] = p

    p = sub.add_parser("metrics", help="image-quality metrics of a PGM or CF64 image")
    p.add_argument("--in", dest="in_", required=True)
    p.add_argument("--reference")
    p.add_argument("--mask")
    p.add_argument("--out-csv", required=True)
    p.set_defaults(func=cmd_metrics)
    commands["metrics"] = p

    p = sub.add_parser("rerun", help="replay a command from its JSON sidecar")
    p.add_argument("sidecar")
    commands["rerun"] = p
    return parser, commands


def sidecar_argv(sidecar: dict, commands) -> list:
    """Rebuild a command line from a sidecar's resolved options."""
    name = sidecar["command"]
    options = sidecar["options"]
    argv = [name]
    for action in commands[name]._actions:
        if action.dest == "help" or action.dest not in options:
            continue
        value = options[action.dest]
        if isinstance(value, list):
            value = ",".join(repr(v) for v in value)
        if not action.option_strings:
            argv.append(str(value))
        elif isinstance(action, argparse._StoreTrueAction):
            if value:
                argv.append(action.option_strings[0])
        elif value is not None:
            argv += [action.option_strings[0], str(value)]
    return argv


def run(argv=None) -> int:
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rerun":
            with open(args.sidecar, encoding="utf-8") as fh:
                return run(sidecar_argv(json.load(fh), commands))
        _abspaths(args)
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (FormatError, OSError) as exc:
        print(f"isarenhance: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (DomainError, ShapeError) as exc:
        print(f"isarenhance: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"isarenhance: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
