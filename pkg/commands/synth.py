"""
Sub-comando `synth`: multitud sintética con verdad conocida
"""
import logging
from pathlib import Path

from data.synth import diag_dominant_spec, generate, heterogeneous_spec
from data_loader import write_responses, write_spec, write_truth
from utils.exceptions import NumericDomainError, PreconditionError

logger = logging.getLogger(__name__)


def parse_float_list(value, what):
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise PreconditionError(f"{what} inválido: {value}") from None


def register_synth(subparsers):
    parser = subparsers.add_parser('synth', help='Genera respuestas y verdad bajo el modelo de Dawid-Skene')
    parser.add_argument('--n-items', type=int, required=True)
    parser.add_argument('--n-annotators', type=int)
    parser.add_argument('--n-classes', type=int, required=True)
    accuracy = parser.add_mutually_exclusive_group(required=True)
    accuracy.add_argument('--diag', type=float, help='Probabilidad de acierto común a los anotadores')
    accuracy.add_argument('--diags', help='Probabilidad de acierto por anotador, separada por comas')
    parser.add_argument('--mu', type=float, default=1.0, help='Probabilidad de responder')
    parser.add_argument('--pi-star', help='Prior de clases separado por comas (uniforme por defecto)')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out-dir', required=True)
    parser.set_defaults(handler=run_synth)
    return parser


def build_spec(args):
    diags = parse_float_list(args.diags, 'diags')
    if diags is None:
        if args.n_annotators is None:
            raise PreconditionError("--diag requiere --n-annotators")
        return diag_dominant_spec(args.n_items, args.n_annotators, args.n_classes, args.diag,
                                  seed=args.seed, mu=args.mu,
                                  pi_star=parse_float_list(args.pi_star, 'pi_star'))
    if args.n_annotators is not None and args.n_annotators != len(diags):
        raise PreconditionError(f"--diags tiene {len(diags)} valores y --n-annotators es {args.n_annotators}")
    return heterogeneous_spec(args.n_items, args.n_classes, diags, seed=args.seed, mu=args.mu,
                              pi_star=parse_float_list(args.pi_star, 'pi_star'))


def run_synth(args):
    try:
        spec = build_spec(args)
    except NumericDomainError as exc:
        raise PreconditionError(f"especificación inválida: {exc}") from exc

    responses, truth = generate(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_responses(out_dir / 'responses.csv', responses)
    write_truth(out_dir / 'truth.csv', truth, responses.item_ids)
    write_spec(out_dir / 'spec.json', spec)
    logger.info("multitud sintética escrita en %s (%d respuestas)", out_dir, responses.n_responses)
    return 0
