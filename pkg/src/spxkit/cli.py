"""Command-line frontend.

Subcommands: superpixel, msp-apply, refine, metrics, spx-eval,
gradcheck. Results go to stdout as JSON; diagnostics go to stderr.
Exit codes: 0 success, 1 bad arguments, 2 I/O or file-format errors,
3 algorithm failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .color import srgb_to_lab
from .core import AlgorithmError, MspConfig, relabel_contiguous, validate_partition
from .io import FormatError, read_mspt, read_ppm, render_overlay, write_mspt, write_ppm
from .metrics import evaluate_segmentation, spx_boundary_recall, undersegmentation_error
from .msgpass import cascade_forward, gradient_check, refine_probabilities
from .quickshift import QuickShiftParams, quickshift_match_scale, quickshift_segment
from .slic import SlicParams, slic_segment

__all__ = ["entry", "main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2; bad args are exit 1
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_scales(text: str) -> tuple[int, ...]:
    try:
        scales = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"scales must be a comma-separated integer list, got {text!r}")
    return scales


def _add_superpixel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--algo", choices=("slic", "quickshift"), default="slic",
        help="superpixel algorithm (default: slic)",
    )
    parser.add_argument(
        "--compactness", type=float, default=10.0,
        help="SLIC compactness m (default: 10)",
    )
    parser.add_argument(
        "--sigma", type=float, default=5.0,
        help="Quick Shift kernel bandwidth in pixels (default: 5)",
    )
    parser.add_argument(
        "--tau", type=float, default=10.0,
        help="Quick Shift maximum link distance in pixels (default: 10)",
    )
    parser.add_argument(
        "--ratio", type=float, default=0.5,
        help="Quick Shift color weight relative to position (default: 0.5)",
    )


def _build_config(args, scales: tuple[int, ...]) -> MspConfig:
    return MspConfig(
        alpha=args.alpha,
        scales=scales,
        algorithm=args.algo,
        compactness=args.compactness,
        sigma=args.sigma,
        tau=args.tau,
        color_ratio=args.ratio,
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="spxkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superpixel", help="segment an image into superpixels")
    _add_superpixel_flags(p)
    p.add_argument("--lambda", dest="num_superpixels", type=int, default=None,
                   help="target block count (required for slic)")
    p.add_argument("input", help="input image (binary PPM)")
    p.add_argument("-o", "--output", required=True,
                   help="output label map (MSPT u32 [H,W])")
    p.add_argument("--vis", default=None, help="optional overlay PPM path")
    p.add_argument("--vis-mode", choices=("boundaries", "mean-color"),
                   default="boundaries")
    p.set_defaults(handler=_cmd_superpixel)

    p = sub.add_parser("msp-apply",
                       help="apply the multiscale message-passing cascade")
    _add_superpixel_flags(p)
    p.add_argument("--image", required=True, help="guidance image (binary PPM)")
    p.add_argument("--features", required=True, help="feature map (MSPT f32 [C,H,W])")
    p.add_argument("--scales", default="200,300,400",
                   help="comma-separated block counts, strictly increasing")
    p.add_argument("--alpha", type=float, default=0.1,
                   help="message weight (default: 0.1)")
    p.add_argument("-o", "--output", required=True,
                   help="output feature map (MSPT f32 [C,H,W])")
    p.set_defaults(handler=_cmd_msp_apply)

    p = sub.add_parser("refine",
                       help="smooth class probabilities and write the argmax labels")
    _add_superpixel_flags(p)
    p.add_argument("--image", required=True, help="guidance image (binary PPM)")
    p.add_argument("--probs", required=True,
                   help="class probabilities (MSPT f32 [C,H,W])")
    p.add_argument("--scales", default="200,300,400",
                   help="comma-separated block counts, strictly increasing")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("-o", "--output", required=True,
                   help="output label map (MSPT u32 [H,W])")
    p.set_defaults(handler=_cmd_refine)

    p = sub.add_parser("metrics", help="compare predicted labels to ground truth")
    p.add_argument("--pred", required=True, help="predicted labels (MSPT u32 [H,W])")
    p.add_argument("--gt", required=True, help="ground-truth labels (MSPT u32 [H,W])")
    p.add_argument("--classes", type=int, required=True, help="number of classes")
    p.add_argument("--ignore", type=int, default=255,
                   help="gt label to skip (default: 255)")
    p.add_argument("--boundary-tol", type=int, default=2,
                   help="boundary match tolerance in pixels (default: 2)")
    p.set_defaults(handler=_cmd_metrics)

    p = sub.add_parser("spx-eval",
                       help="score a superpixel partition against ground truth")
    p.add_argument("--labels", required=True,
                   help="superpixel labels (MSPT u32 [H,W])")
    p.add_argument("--gt", required=True, help="ground-truth labels (MSPT u32 [H,W])")
    p.add_argument("--tol", type=int, default=2,
                   help="boundary recall tolerance in pixels (default: 2)")
    p.set_defaults(handler=_cmd_spx_eval)

    p = sub.add_parser("gradcheck",
                       help="verify the analytic backward pass on a seeded fixture")
    p.add_argument("--channels", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--scales", type=int, default=1,
                   help="number of cascade stages (default: 1)")
    p.set_defaults(handler=_cmd_gradcheck)

    return parser


def _cmd_superpixel(args) -> int:
    image = read_ppm(args.input)
    lab = srgb_to_lab(image)
    if args.algo == "slic":
        if args.num_superpixels is None:
            raise ValueError("--lambda is required with --algo slic")
        params = SlicParams(
            num_superpixels=args.num_superpixels, compactness=args.compactness
        )
        partition = slic_segment(lab, params)
    else:
        qs = QuickShiftParams(
            sigma=args.sigma, tau=args.tau, color_ratio=args.ratio
        )
        if args.num_superpixels is not None:
            partition = quickshift_match_scale(lab, qs, args.num_superpixels)
        else:
            partition = quickshift_segment(lab, qs)
    verdict = validate_partition(partition)
    if not verdict:
        raise AlgorithmError(f"invalid partition produced: {verdict.reason}")
    write_mspt(partition.labels.astype(np.uint32), args.output)
    if args.vis is not None:
        write_ppm(render_overlay(image, partition, args.vis_mode), args.vis)
    print(json.dumps({"num_blocks": partition.num_blocks}))
    return 0


def _read_feature_file(path: str) -> np.ndarray:
    arr = read_mspt(path)
    if arr.ndim != 3 or arr.dtype != np.float32:
        raise FormatError(
            f"{path}: expected a float32 [C,H,W] tensor, got {arr.dtype} {arr.shape}"
        )
    return arr


def _read_label_file(path: str) -> np.ndarray:
    arr = read_mspt(path)
    if arr.ndim != 2 or arr.dtype != np.uint32:
        raise FormatError(
            f"{path}: expected a uint32 [H,W] tensor, got {arr.dtype} {arr.shape}"
        )
    return arr


def _cmd_msp_apply(args) -> int:
    config = _build_config(args, _parse_scales(args.scales))
    image = read_ppm(args.image)
    features = _read_feature_file(args.features)
    out, _ = cascade_forward(features, image, config)
    write_mspt(out.astype(np.float32), args.output)
    return 0


def _cmd_refine(args) -> int:
    config = _build_config(args, _parse_scales(args.scales))
    image = read_ppm(args.image)
    probs = _read_feature_file(args.probs)
    labels = refine_probabilities(probs, image, config)
    write_mspt(labels, args.output)
    return 0


def _cmd_metrics(args) -> int:
    pred = _read_label_file(args.pred).astype(np.int64)
    gt = _read_label_file(args.gt).astype(np.int64)
    report = evaluate_segmentation(
        pred, gt, args.classes, args.ignore, args.boundary_tol
    )
    print(json.dumps(report.to_dict()))
    return 0


def _cmd_spx_eval(args) -> int:
    labels = _read_label_file(args.labels).astype(np.int64)
    gt = _read_label_file(args.gt).astype(np.int64)
    partition = relabel_contiguous(labels)
    report_args = {
        "undersegmentation_error": undersegmentation_error(partition, gt),
        "boundary_recall": spx_boundary_recall(partition, gt, args.tol),
        "num_blocks": partition.num_blocks,
    }
    print(json.dumps(report_args))
    return 0


def _cmd_gradcheck(args) -> int:
    result = gradient_check(
        channels=args.channels,
        height=args.height,
        width=args.width,
        blocks=args.blocks,
        seed=args.seed,
        alpha=args.alpha,
        stages=args.scales,
    )
    print(json.dumps(result))
    if not result["pass"]:
        raise AlgorithmError(
            f"gradient check failed: max_rel_err={result['max_rel_err']:.3e}, "
            f"adjoint_err={result['adjoint_err']:.3e}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except AlgorithmError as exc:
        print(f"algorithm error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())
