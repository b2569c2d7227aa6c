"""
Command-line front end for emforge

Commands:
    pi          homotopy groups of K(A,n)
    verify      identity suites, cross-checks and harnesses
    cohomology  group and secondary cohomology

Exit codes: 0 pass, 1 verification failures, 2 usage or parse error,
3 enumeration cap exceeded.
"""
import argparse
import logging
import sys
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

from .. import __version__
from ..algebra.fin_ab import group_from_spec
from ..algebra.table_group import table_group_from_spec
from ..hopf.algebra import (
    HopfAlgebraStructure, ModularPair, algebra_from_spec, load_hopf_algebra, verify_hopf_axioms,
)
from ..hopf.cyclic import (
    ConnesMoscoviciModule, SecondaryModule, verify_kg1_linearization, verify_linearization,
)
from ..simplicial.cohomology import (
    CohomologyResult, bar_complex_cohomology, cohomology_over_prime_field, group_cohomology,
    secondary_cohomology,
)
from ..simplicial.core import (
    Exhaustive, Sampled, SimplicialFamily, VerificationReport, brute_force_homotopy, homotopy_groups,
    run_mutation_harness, verify_cyclic, verify_simplicial, verify_symmetric,
)
from ..simplicial.em_construct import (
    KAn, KG1, TABLE_DEGENERACIES, TABLE_FACES, crosscheck_specializations,
)
from ..utils.config import get_config
from ..utils.errors import CapExceededError, EmforgeError, InvalidInputError
from ..utils.helpers import Stopwatch, dump_json, render_table, setup_logging

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_CAP = 3

VERIFY_TARGETS = (
    'simplicial', 'cyclic', 'symmetric', 'hopf-axioms', 'crosscheck', 'linearization',
    'mutation', 'modular-pair',
)
CONSTRUCTIONS = ('kg1', 'kan', 'ka2', 'ka3', 'cm', 'sk')


@dataclass
class RunConfig:
    """Everything a command needs; recorded verbatim in the report"""
    command: str
    target: Optional[str] = None
    construction: Optional[str] = None
    group: Optional[str] = None
    algebra: Optional[str] = None
    algebra_file: Optional[str] = None
    coeff: Optional[str] = None
    n: int = 2
    q_max: int = 4
    n_max: int = 4
    samples: Optional[int] = None
    seed: int = 0
    cap: Optional[int] = None
    mutations: int = 50
    delta: Optional[str] = None
    sigma: Optional[str] = None
    oracle: bool = False
    output_format: str = 'json'
    out: Optional[str] = None
    timing: bool = True

    def parameters(self) -> Dict[str, Any]:
        """Report parameters without output plumbing"""
        values = asdict(self)
        for key in ('output_format', 'out', 'timing'):
            values.pop(key)
        return {k: v for k, v in values.items() if v is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='emforge', description='Eilenberg-MacLane simplicial groups, '
                                     'their cohomology and Hopf cyclic modules')
    parser.add_argument('--version', action='version', version=f'emforge {__version__}')
    parser.add_argument('--verbose', action='store_true', help='log at DEBUG level')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', dest='output_format', choices=('json', 'text'), default='json')
    common.add_argument('--out', help='write the report to this file instead of stdout')
    common.add_argument('--cap', type=int, help='largest level that may be enumerated')
    common.add_argument('--no-timing', dest='timing', action='store_false',
                        help='omit wall-clock time from the report')

    commands = parser.add_subparsers(dest='command', required=True)

    pi = commands.add_parser('pi', parents=[common], help='homotopy groups of K(A,n)')
    pi.add_argument('--group', required=True, help='abelian group, e.g. "Z/2 x Z/4"')
    pi.add_argument('--n', type=int, default=2)
    pi.add_argument('--qmax', dest='q_max', type=int, default=4)
    pi.add_argument('--oracle', action='store_true', help='also count cosets by enumeration')

    verify = commands.add_parser('verify', parents=[common], help='run a verification suite')
    verify.add_argument('target', choices=VERIFY_TARGETS)
    verify.add_argument('--construction', choices=CONSTRUCTIONS, default='kan')
    verify.add_argument('--group', help='group spec (abelian spec, S3, D4, Q8 or C<n>)')
    verify.add_argument('--algebra', help='k[G], F<p>[G] or O(G)')
    verify.add_argument('--algebra-file', help='Hopf algebra JSON file')
    verify.add_argument('--n', type=int, default=2)
    verify.add_argument('--qmax', dest='q_max', type=int, default=4)
    verify.add_argument('--samples', type=int, help='sampled strategy with this many points per level')
    verify.add_argument('--seed', type=int, default=get_config().DEFAULT_SEED)
    verify.add_argument('--mutations', type=int, default=50)
    verify.add_argument('--delta', help='character as label=value pairs separated by commas')
    verify.add_argument('--sigma', help='group-like label, or label=value pairs')

    cohomology = commands.add_parser('cohomology', parents=[common], help='cochains on K(G,1) or K(A,2)')
    cohomology.add_argument('target', choices=('group', 'secondary'))
    cohomology.add_argument('--g', '--a', '--group', dest='group', required=True)
    cohomology.add_argument('--coeff', required=True, help='coefficient group B')
    cohomology.add_argument('--nmax', dest='n_max', type=int, default=4)
    cohomology.add_argument('--oracle', action='store_true',
                            help='recompute by the bar complex (group) or over F_p (secondary)')
    return parser


def parse_run_config(argv: List[str]) -> Tuple[RunConfig, bool]:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**values), args.verbose


def _pairs(text: Optional[str]) -> Dict[str, str]:
    if not text:
        return {}
    pairs = {}
    for item in text.split(','):
        label, _, value = item.partition('=')
        if not value:
            raise InvalidInputError(f"Expected label=value, got '{item}'")
        pairs[label.strip()] = value.strip()
    return pairs


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise InvalidInputError(f"{flag} is required here")
    return value


def _algebra(config: RunConfig) -> HopfAlgebraStructure:
    if config.algebra_file:
        return load_hopf_algebra(config.algebra_file)
    return algebra_from_spec(_require(config.algebra, '--algebra'))


def _modular_pair(config: RunConfig, algebra: HopfAlgebraStructure, validate: bool = True) -> ModularPair:
    delta = _pairs(config.delta) if config.delta else None
    sigma = config.sigma
    if sigma and '=' in sigma:
        sigma = _pairs(sigma)
    return ModularPair.from_labels(algebra, delta, sigma, validate=validate)


def build_family(config: RunConfig) -> SimplicialFamily:
    """The simplicial family named by --construction"""
    kind = config.construction
    if kind == 'kg1':
        return KG1(table_group_from_spec(_require(config.group, '--group')))
    if kind in ('cm', 'sk'):
        algebra = _algebra(config)
        if kind == 'sk':
            return SecondaryModule(algebra)
        return ConnesMoscoviciModule(algebra, _modular_pair(config, algebra))
    group = group_from_spec(_require(config.group, '--group'))
    if kind == 'kan':
        return KAn(group, config.n)
    n = 2 if kind == 'ka2' else 3
    return KAn(group, n,
               face_rows_fn=lambda i, q, _: TABLE_FACES[n](i, q),
               degeneracy_rows_fn=lambda i, q, _: TABLE_DEGENERACIES[n](i, q))


def _strategy(config: RunConfig):
    if config.samples:
        return Sampled(samples=config.samples, seed=config.seed)
    return Exhaustive(cap=config.cap)


def cmd_pi(config: RunConfig) -> Tuple[int, Dict[str, Any], str]:
    """pi_0..pi_qmax of K(A,n) in canonical form"""
    group = group_from_spec(config.group)
    family = KAn(group, config.n)
    groups = homotopy_groups(family, config.q_max)
    body = {
        'construction': family.name,
        'groups': [g.to_list() for g in groups],
        'groups_text': [str(g) for g in groups],
    }
    rows = [{'q': q, 'pi_q': str(g)} for q, g in enumerate(groups)]
    status = EXIT_PASS
    if config.oracle:
        cap = config.cap or get_config().ENUMERATION_CAP
        described = brute_force_homotopy(family, config.q_max, cap)
        agree = all(d.order == g.order and (d.structure is None or d.structure.is_isomorphic(g))
                    for d, g in zip(described, groups))
        body['oracle'] = {'groups': [d.to_dict() for d in described], 'agree': agree}
        for row, d in zip(rows, described):
            row['oracle order'] = d.order
        status = EXIT_PASS if agree else EXIT_FAILURES
    return status, body, render_table(rows, list(rows[0]))


def _verification_text(report: VerificationReport) -> str:
    lines = [f"{report.suite}: {report.verdict} ({report.relations_checked} checks)"]
    if report.counts:
        lines.append(render_table([{'family': k, 'checked': v} for k, v in report.counts.items()],
                                  ['family', 'checked']))
    if report.failures:
        lines.append(render_table(
            [{'relation': f.relation, 'family': f.family, 'q': f.q, 'witness': f.witness}
             for f in report.failures],
            ['relation', 'family', 'q', 'witness'],
        ))
    return '\n'.join(lines)


def cmd_verify(config: RunConfig) -> Tuple[int, Dict[str, Any], str]:
    """Dispatch a verification target; exit 0 iff nothing failed"""
    target = config.target
    if target == 'hopf-axioms':
        report = verify_hopf_axioms(_algebra(config))
    elif target == 'crosscheck':
        report = crosscheck_specializations(group_from_spec(_require(config.group, '--group')), config.q_max)
    elif target == 'linearization':
        if config.construction in ('kg1', 'cm'):
            report = verify_kg1_linearization(table_group_from_spec(_require(config.group, '--group')),
                                              config.q_max)
        else:
            report = verify_linearization(group_from_spec(_require(config.group, '--group')), config.q_max)
    elif target == 'mutation':
        family = build_family(config)
        if family.kind != 'abelian':
            raise InvalidInputError("The mutation harness needs a matrix construction (kan, ka2, ka3)")
        mutation = run_mutation_harness(family, config.q_max, config.mutations, config.seed)
        body = dict(mutation.to_dict(), construction=family.name,
                    verdict='pass' if mutation.passed else 'fail')
        text = f"mutation: {mutation.killed}/{mutation.trials} killed (rate {mutation.kill_rate:.3f})"
        return (EXIT_PASS if mutation.passed else EXIT_FAILURES), body, text
    elif target == 'modular-pair':
        algebra = _algebra(config)
        violations = _modular_pair(config, algebra, validate=False).violations()
        body = {
            'construction': algebra.name,
            'verdict': 'fail' if violations else 'pass',
            'violations': [{'condition': c, 'witness': w} for c, w in violations],
        }
        text = 'modular pair in involution: ' + ('no' if violations else 'yes')
        for condition, witness in violations:
            text += f"\n  {condition}: {witness}"
        return (EXIT_FAILURES if violations else EXIT_PASS), body, text
    else:
        family = build_family(config)
        strategy = _strategy(config)
        suites = {'simplicial': verify_simplicial, 'cyclic': verify_cyclic, 'symmetric': verify_symmetric}
        report = suites[target](family, config.q_max, strategy)
    body = report.to_dict()
    return (EXIT_PASS if report.passed else EXIT_FAILURES), body, _verification_text(report)


def _cohomology_rows(result: CohomologyResult) -> List[Dict[str, Any]]:
    return [{'n': n, 'H^n': str(g), 'cochains': d} for n, (g, d) in enumerate(zip(result.groups, result.dims))]


def cmd_cohomology(config: RunConfig) -> Tuple[int, Dict[str, Any], str]:
    """H^0..H^nmax of Map(K(G,1), B) or Map(K(A,2), B)"""
    coefficients = group_from_spec(config.coeff)
    if config.target == 'group':
        if _is_abelian_spec(config.group):
            group = group_from_spec(config.group)
        else:
            group = table_group_from_spec(config.group)
        result = group_cohomology(group, coefficients, config.n_max, config.cap)
    else:
        group = group_from_spec(config.group)
        result = secondary_cohomology(group, coefficients, config.n_max, config.cap)
    body = result.to_dict(include_timing=False)
    rows = _cohomology_rows(result)
    status = EXIT_PASS
    if config.oracle:
        if config.target == 'group':
            oracle = bar_complex_cohomology(group, coefficients, config.n_max, config.cap)
        else:
            oracle = cohomology_over_prime_field(KAn(group, 2), coefficients, config.n_max, config.cap)
        agree = all(a.is_isomorphic(b) for a, b in zip(result.groups, oracle.groups))
        body['oracle'] = dict(oracle.to_dict(include_timing=False), agree=agree)
        for row, g in zip(rows, oracle.groups):
            row[oracle.method] = str(g)
        status = EXIT_PASS if agree else EXIT_FAILURES
    return status, body, render_table(rows, list(rows[0]))


def _is_abelian_spec(text: str) -> bool:
    try:
        group_from_spec(text)
    except EmforgeError:
        return False
    return True


COMMANDS = {'pi': cmd_pi, 'verify': cmd_verify, 'cohomology': cmd_cohomology}


def report_document(config: RunConfig, body: Dict[str, Any], seconds: float) -> Dict[str, Any]:
    """Wrap a command result with schema, version, parameters and (optionally) timing"""
    settings = get_config()
    document = {
        'schema': settings.REPORT_SCHEMA,
        'tool': 'emforge',
        'version': __version__,
        'command': config.command,
        'parameters': config.parameters(),
        'result': body,
    }
    if config.timing and settings.REPORT_TIMING:
        document['seconds'] = round(seconds, 6)
    return document


def run(config: RunConfig) -> int:
    """
    Execute one command and emit its report

    Args:
        config: Parsed run configuration

    Returns:
        Process exit code
    """
    try:
        with Stopwatch() as watch:
            status, body, text = COMMANDS[config.command](config)
    except CapExceededError as exc:
        logger.error("%s (size %d, cap %d)", exc, exc.size, exc.cap)
        return EXIT_CAP
    except (InvalidInputError, EmforgeError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    document = report_document(config, body, watch.elapsed)
    if config.output_format == 'json':
        output = dump_json(document, config.out)
    else:
        output = text + '\n'
        if config.out:
            with open(config.out, 'w', encoding='utf-8') as handle:
                handle.write(output)
    if not config.out:
        sys.stdout.write(output)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, configure logging and run"""
    try:
        config, verbose = parse_run_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code in (0, None) else EXIT_USAGE
    settings = get_config()
    setup_logging('DEBUG' if verbose else settings.LOG_LEVEL, settings.LOG_FILE)
    return run(config)
