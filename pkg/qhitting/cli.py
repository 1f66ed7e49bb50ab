import argparse
import itertools
import logging
import math
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .channel import assumption_one_holds, validate
from .core import ChannelSpec, load_channel_spec, report
from .core.types import MethodResultType
from .ginverse import group_inverse, hunter_ginverse, ksmh_ginverse
from .ksmh import kernel_limit_study, tau_channel
from .qmc import QMC
from .utils import (
    EIG_TOL,
    DimensionError,
    NoGroupInverseError,
    NumericalError,
    ParameterError,
    PreconditionError,
    QHittingError,
    ReducibleError,
    SpecError,
    SpectralObstructionError,
    ValidationError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_METHOD = 3
EXIT_NUMERICAL = 4

METHODS = {
    "series": "series",
    "analytic": "analytic-K",
    "ksmh-g": "ksmh-ginverse",
    "ksmh-group": "ksmh-group",
}


def _indices(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated indices, got {text!r}")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhitting",
        description="Mean hitting times of quantum channels through generalized inverses",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="channel spec file (JSON)")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--tol", type=float, default=EIG_TOL, help="spectral comparison tolerance")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="channel diagnostics")

    hitting = sub.add_parser("hitting", parents=[common], help="mean hitting time of the goal subspace")
    hitting.add_argument("--method", choices=[*METHODS, "all"], default="all")
    hitting.add_argument("--dump-intermediates", action="store_true")

    ginv = sub.add_parser("ginverse", parents=[common], help="g-inverse of I - Phi")
    ginv.add_argument("--kind", choices=["group", "hunter"], default="group")
    ginv.add_argument("--target", choices=["induced", "channel"], default="induced",
                      help="induced two-site QMC or the channel itself")
    for name in ("t", "u", "f", "g"):
        ginv.add_argument(f"--{name}", type=_indices, default=None,
                          help=f"|{name}> as a sum of basis vectors, given by 0-based indices")

    sweep = sub.add_parser("sweep", parents=[common], help="kernel limit study over the mixing weight")
    sweep.add_argument("--param", default="p", choices=["p"])
    sweep.add_argument("--values", type=_floats, required=True)
    sweep.add_argument("--f", type=_indices, default=None,
                       help="|f> of the g-inverse family as 0-based indices")
    return parser


def _header(command: str, args: argparse.Namespace, spec: ChannelSpec) -> Dict[str, Any]:
    return {"command": command, "input": str(args.spec), "kind": spec.kind, "dim": spec.dim}


def _require(spec: ChannelSpec, *fields: str) -> None:
    for name in fields:
        if getattr(spec, name) is None:
            raise SpecError(f"missing field {name!r}")


def _ensure_valid(spec: ChannelSpec, tol: float) -> None:
    diag = validate(spec.channel, tol=tol)
    if not diag.is_valid:
        raise ValidationError(
            f"not a channel: trace deviation {diag.trace_deviation:.3e}, "
            f"completely positive {diag.is_completely_positive}"
        )


def cmd_validate(args: argparse.Namespace, spec: ChannelSpec) -> int:
    diag = validate(spec.channel, tol=args.tol)
    out = _header("validate", args, spec)
    out["diagnostics"] = report.diagnostics(diag, spec.dim)
    if spec.subspace is not None:
        out["assumption_I"] = report.assumption(assumption_one_holds(spec.superop, spec.subspace, args.tol))
    out["valid"] = diag.is_valid
    _emit(out, args)
    return EXIT_OK if diag.is_valid else EXIT_VALIDATION


def _route(spec: ChannelSpec, method: str, args: argparse.Namespace) -> MethodResultType:
    entry: MethodResultType = {"method": method}
    try:
        result = tau_channel(
            spec.superop, spec.subspace, spec.initial_state, method,
            dump=args.dump_intermediates, tol=args.tol,
        )
    except PreconditionError as e:
        entry.update({"ok": False, "precondition": e.precondition, "error": e.message})
        if e.precondition == "divergent-series":
            entry["tau"] = math.inf
        return entry
    except NumericalError as e:
        entry.update({"ok": False, "numerical": True, "error": e.message})
        return entry
    except QHittingError as e:
        entry.update({"ok": False, "error": e.message})
        return entry
    entry.update({"ok": True, "tau": result.tau, "preconditions": dict(result.preconditions)})
    if result.notes:
        entry["notes"] = list(result.notes)
    if args.dump_intermediates:
        entry["intermediates"] = {
            k: v for k, v in sorted(result.artifacts.items()) if isinstance(v, np.ndarray)
        }
    return entry


def cmd_hitting(args: argparse.Namespace, spec: ChannelSpec) -> int:
    _require(spec, "subspace", "initial_state")
    _ensure_valid(spec, args.tol)
    chosen = list(METHODS) if args.method == "all" else [args.method]
    out = _header("hitting", args, spec)
    out["assumption_I"] = report.assumption(assumption_one_holds(spec.superop, spec.subspace, args.tol))
    results = [_route(spec, METHODS[name], args) for name in chosen]
    out["methods"] = results

    succeeded = [r for r in results if r["ok"]]
    if len(chosen) > 1:
        out["agreement"] = {
            f"{a['method']}/{b['method']}": abs(a["tau"] - b["tau"])
            for a, b in itertools.combinations(succeeded, 2)
        }
    _emit(out, args)
    if succeeded:
        return EXIT_OK
    return EXIT_NUMERICAL if any(r.get("numerical") for r in results) else EXIT_NO_METHOD


def _unit_sum(indices: Optional[Sequence[int]], order: int, name: str) -> Optional[np.ndarray]:
    if indices is None:
        return None
    vector = np.zeros(order, dtype=complex)
    for i in indices:
        if not 0 <= i < order:
            raise ParameterError(f"--{name} index {i} outside 0..{order - 1}")
        vector[i] += 1
    return vector


def cmd_ginverse(args: argparse.Namespace, spec: ChannelSpec) -> int:
    _ensure_valid(spec, args.tol)
    if args.target == "induced":
        _require(spec, "subspace")
        q = QMC.induce(spec.superop, spec.subspace)
    else:
        q = QMC(spec.superop.mat, 1, spec.dim)
    order = q.rep.shape[0]
    a = np.eye(order) - q.rep

    out = _header("ginverse", args, spec)
    out.update({"target": args.target, "ginverse_kind": args.kind, "order": order})
    if args.kind == "group":
        gi = group_inverse(a, args.tol)
        out["index"] = gi.index
        out["residuals"] = gi.axiom_residuals()
        out["matrix"] = gi.asharp
    else:
        params = {name: _unit_sum(getattr(args, name), order, name) for name in ("t", "u", "f", "g")}
        if all(v is None for v in params.values()):
            gi = ksmh_ginverse(q, tol=args.tol)
        else:
            first = _unit_sum([0], order, "t")
            gi = hunter_ginverse(
                q,
                t=first if params["t"] is None else params["t"],
                u=q.e_i if params["u"] is None else params["u"],
                f=params["f"],
                g=params["g"],
                tol=args.tol,
            )
        out["residuals"] = {"AGA=A": gi.residual}
        out["matrix"] = gi.g
    _emit(out, args)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, spec: ChannelSpec) -> int:
    if spec.kind != "randomization":
        raise SpecError("sweep needs a randomization spec", "$.kind")
    _require(spec, "subspace", "initial_state")
    _ensure_valid(spec, args.tol)
    mix = spec.raw["mix"]
    left = ChannelSpec(mix["left"], "$.mix.left")
    right = ChannelSpec(mix["right"], "$.mix.right")
    f_vec = _unit_sum(args.f, 2 * spec.dim ** 2, "f")
    study = kernel_limit_study(left.superop, right.superop, spec.subspace, args.values, spec.initial_state, f_vec=f_vec)

    out = _header("sweep", args, spec)
    out["param"] = args.param
    out["rows"] = [
        {"p": p, "tau": tau, "g_norm": norm}
        for p, tau, norm in zip(study.p_values, study.taus, study.g_norms)
    ]
    out["extrapolated"] = {"p": 0.0, "tau": study.tau_extrapolated}
    out["direct"] = {"p": 0.0, "tau": study.tau_direct, "assumption_I": study.assumption_one_at_zero}
    out["g_diverges"] = study.g_diverges
    out["h_converges"] = study.h_converges
    _emit(out, args)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "hitting": cmd_hitting,
    "ginverse": cmd_ginverse,
    "sweep": cmd_sweep,
}


def _emit(out: Dict[str, Any], args: argparse.Namespace) -> None:
    print(report.to_json(out) if args.json else report.to_text(out))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)
    try:
        spec = load_channel_spec(args.spec)
        return COMMANDS[args.command](args, spec)
    except (SpecError, ValidationError, DimensionError, ParameterError) as e:
        logger.error("%s", e)
        return EXIT_VALIDATION
    except (PreconditionError, SpectralObstructionError, ReducibleError) as e:
        logger.error("%s", e)
        return EXIT_NO_METHOD
    except (NumericalError, NoGroupInverseError) as e:
        logger.error("%s", e)
        return EXIT_NUMERICAL
    except QHittingError as e:
        logger.error("%s", e)
        return EXIT_NUMERICAL
