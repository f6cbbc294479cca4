"""
Command line interface to the root combinatorics, kernels, classification and verification
"""
import json
import logging
import re
import sys
from argparse import ArgumentDefaultsHelpFormatter, ArgumentParser
from collections import OrderedDict

from typing import List, Tuple

from cartan_vmrt import __version__, app_settings
from cartan_vmrt.chss import MarkedSpace, abstract_vmrt, aliases, hc_partition, iso_key, max_linear_dim, \
    parse_space, perp_set, perp_stats, vmrt_chain
from cartan_vmrt.classify import classify_all, classify_pair, compare_with_expected, degenerate_linear_exceptions, \
    group_by_category
from cartan_vmrt.correspond import RootMap, builtin_map, deletion_map, search_root_map, verify_root_map
from cartan_vmrt.exceptions import CartanVmrtError, InvalidMap, LinearSpace, NegativeResult, NoBuiltin, \
    NotDeletionType, ProductUnsupported, UsageError
from cartan_vmrt.matching import deletion_match
from cartan_vmrt.matmodel import ChernPoly, MatrixPoint, chern_factor_search, embed_grass_into_skew, \
    embed_sym_into_grass, kernel_matrix_model, model_shape, vmrt_rank_membership
from cartan_vmrt.rootsys import DynkinDiagram, build_diagram, generate_root_system, reflection_orbit
from cartan_vmrt.utils import format_root, parse_matrix, parse_root, render_report, set_verbosity_logger
from cartan_vmrt.verify import verify_all
from cartan_vmrt.vmrt import build_sff_pattern, kernel_root_level, nonrigidity_witness, randomized_kernel_oracle, \
    sub_tangent_roots

logger = logging.getLogger()

diagram_re = re.compile(r'^\s*(?:(E6|E7)|([ABCD])\s*(\d+))\s*$')

Result = Tuple[object, int]


def _diagram(text: str) -> DynkinDiagram:
    """
    Read a diagram like E7 or B4, or take the diagram of a space.

    :param text: The diagram or space name
    :return: The diagram
    """
    match = diagram_re.match(text)
    if match:
        exceptional, family, rank = match.groups()
        return build_diagram(exceptional, int(exceptional[1])) if exceptional else build_diagram(family, int(rank))

    space = parse_space(text)
    if space.is_product:
        raise ProductUnsupported("{} has no Dynkin diagram".format(space))
    return space.diagram


def _seed(options: dict) -> int:
    override = app_settings.seed_override()
    if override is not None:
        return override
    return app_settings.DEFAULT_SEED if options.get('seed') is None else options['seed']


def _max_rank(options: dict) -> int:
    max_rank = options.get('max_rank')
    if max_rank is None:
        return app_settings.ATLAS_RANK
    if not 7 <= max_rank <= app_settings.MAX_RANK:
        raise UsageError("--max-rank must be between 7 and {}, got {}".format(app_settings.MAX_RANK, max_rank))
    return max_rank


def _split(text: str, size: int = None) -> List[int]:
    try:
        values = [int(part) for part in text.split(',')]
    except ValueError:
        raise UsageError("Cannot parse {!r}, expected integers separated by commas".format(text))
    if size is not None and len(values) != size:
        raise UsageError("Expected {} integers in {!r}".format(size, text))
    return values


def find_root_map(source: MarkedSpace, target: MarkedSpace, budget: int = None) -> RootMap:
    """
    A root map for the pair: the tabulated one, the deletion construction or the first one the search finds.

    :param source: The smaller space
    :param target: The bigger space
    :param budget: The search budget
    :return: The map
    """
    try:
        return builtin_map(source, target)
    except NoBuiltin:
        pass

    try:
        return deletion_map(source, target)
    except NotDeletionType:
        pass

    found = search_root_map(source, target, budget)
    if found is None:
        raise InvalidMap("({}, {}) has no root map".format(source, target))
    return found


class BaseCommand:
    """
    A single verb of the command line
    """
    help = ''

    def add_arguments(self, parser: ArgumentParser):
        """
        Set up command line arguments

        :param parser: The command line parser
        """

    def handle(self, *args, **options) -> Result:
        """
        Run the command

        :param args: Command line args, should be empty
        :param options: The command line options
        :return: The report and the exit code
        """
        raise NotImplementedError


class SpaceCommand(BaseCommand):
    """
    A command about one space
    """

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument('space', metavar='SPACE', help='The space, like G(2,3), GII(5), Q(7), V or VI')


class PairCommand(BaseCommand):
    """
    A command about a smaller and a bigger space
    """

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument('source', metavar='SOURCE', help='The smaller space')
        parser.add_argument('target', metavar='TARGET', help='The bigger space')

    @staticmethod
    def spaces(options: dict) -> Tuple[MarkedSpace, MarkedSpace]:
        """
        Parse both spaces

        :param options: The command line options
        :return: Source and target
        """
        return parse_space(options['source'], ambient=False), parse_space(options['target'])


class RootsCommand(BaseCommand):
    help = 'List the positive roots of a diagram'

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument('diagram', metavar='DIAGRAM', help='A diagram like E7 or B4, or a space')

    def handle(self, *args, **options) -> Result:
        diagram = _diagram(options['diagram'])
        rs = generate_root_system(diagram)
        report = rs.as_dict()
        report['orbit_agrees'] = reflection_orbit(diagram) == rs.roots
        return report, 0 if report['orbit_agrees'] else 1


class PartitionCommand(SpaceCommand):
    help = 'Split the noncompact positive roots into the marked root, tangent and normal roots'

    def handle(self, *args, **options) -> Result:
        return hc_partition(parse_space(options['space'])).as_dict(), 0


class PerpCommand(SpaceCommand):
    help = 'Show a perp set, or the sizes of all perp sets'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--root', metavar='EXPR', help='A noncompact positive root like a6+2a5+2a4+a3+a2')

    def handle(self, *args, **options) -> Result:
        space = parse_space(options['space'])
        if not options.get('root'):
            return perp_stats(space), 0

        beta = parse_root(options['root'], space.rank)
        found = perp_set(space, beta)
        return OrderedDict([
            ('space', space.name),
            ('root', format_root(beta)),
            ('size', len(found)),
            ('perp', [format_root(root) for root in found]),
        ]), 0


class CheckMapCommand(PairCommand):
    help = 'Check a root map, from a file or the tabulated one'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--map', metavar='FILE',
                            help='A root map as JSON with source, target and assignments, or a saved report of '
                                 'check-map, search-map or deletion-map')

    def handle(self, *args, **options) -> Result:
        source, target = self.spaces(options)
        if options.get('map'):
            root_map = self.load_map(options['map'], source, target)
        else:
            root_map = builtin_map(source, target)

        report = verify_root_map(root_map)
        return report.as_dict(), 0 if report.valid else 1

    @staticmethod
    def load_map(filename: str, source: MarkedSpace, target: MarkedSpace) -> RootMap:
        """
        Read a root map from a JSON file.

        :param filename: The file with the map or a saved report containing one
        :param source: The source to assume when the file doesn't name one
        :param target: The target to assume when the file doesn't name one
        :return: The root map
        """
        with open(filename) as map_file:
            try:
                data = json.load(map_file)
            except ValueError as e:
                raise UsageError("{} is not valid JSON: {}".format(filename, e))

        if isinstance(data, dict) and 'map' in data:
            data = data['map']
        if not isinstance(data, dict) or 'assignments' not in data:
            raise UsageError("{} holds no root map".format(filename))

        data.setdefault('source', source.name)
        data.setdefault('target', target.name)
        try:
            return RootMap.from_dict(data)
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError("{} holds a malformed root map: {}".format(filename, e))


class SearchMapCommand(PairCommand):
    help = 'Search for a root map by backtracking'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--budget', type=int, default=app_settings.SEARCH_BUDGET,
                            help='The maximum number of candidates to try')

    def handle(self, *args, **options) -> Result:
        source, target = self.spaces(options)
        found = search_root_map(source, target, options['budget'])
        return OrderedDict([
            ('source', source.name),
            ('target', target.name),
            ('found', found is not None),
            ('map', found.as_dict() if found else None),
        ]), 0


class DeletionMapCommand(PairCommand):
    help = 'Build the root map of a pair of deletion type'

    def handle(self, *args, **options) -> Result:
        source, target = self.spaces(options)
        root_map = deletion_map(source, target)
        return OrderedDict([
            ('match', deletion_match(source, target).as_dict()),
            ('map', root_map.as_dict()),
        ]), 0


class KernelCommand(PairCommand):
    help = 'Compute the kernel of the second fundamental form on root vectors'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--trials', type=int, default=app_settings.ORACLE_TRIALS,
                            help='Draws of random structure constants for the cross-check')
        parser.add_argument('--budget', type=int, default=app_settings.SEARCH_BUDGET,
                            help='The maximum number of candidates to try when searching for a map')

    def handle(self, *args, **options) -> Result:
        source, target = self.spaces(options)
        root_map = find_root_map(source, target, options['budget'])
        kernel = kernel_root_level(root_map)

        sub = sub_tangent_roots(root_map)
        domain = [root for root in hc_partition(target).h_set if root not in set(sub)]
        oracle = randomized_kernel_oracle(build_sff_pattern(target), sub, trials=options['trials'],
                                          seed=_seed(options), domain=domain)

        report = kernel.as_dict()
        report['oracle'] = oracle.as_dict()
        agrees = all(found == len(kernel.kernel_basis) for found in oracle.trial_dimensions)
        return report, 0 if agrees else 1


class WitnessCommand(PairCommand):
    help = 'Build and check the germ showing that a degenerate pair is not rigid'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--samples', type=int, default=app_settings.WITNESS_SAMPLES,
                            help='The number of random points to check')

    def handle(self, *args, **options) -> Result:
        source, target = self.spaces(options)
        report = nonrigidity_witness(find_root_map(source, target), seed=_seed(options), samples=options['samples'])
        return report.as_dict(), 0 if report.verified else 1


class RankCheckCommand(SpaceCommand):
    help = 'Decide whether a matrix is on the VMRT cone of a classical space'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--matrix', required=True, help='Rows separated by ";", entries by ","')

    def handle(self, *args, **options) -> Result:
        space = parse_space(options['space'])
        shape, size = model_shape(space)
        point = MatrixPoint(shape, parse_matrix(options['matrix']))
        return OrderedDict([
            ('space', space.name),
            ('shape', shape),
            ('rank', point.rank),
            ('on_cone', vmrt_rank_membership(space, point)),
        ]), 0


class EmbedCommand(PairCommand):
    help = 'Push a tangent matrix through a coordinate embedding'

    def add_arguments(self, parser: ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--matrix', required=True, help='Rows separated by ";", entries by ","')

    def handle(self, *args, **options) -> Result:
        source, target = self.spaces(options)
        source_shape, source_size = model_shape(source)
        point = MatrixPoint(source_shape, parse_matrix(options['matrix']))

        if source.family == 'GIII' and target.family == 'G':
            image = embed_sym_into_grass(source.params[0], target.params[0], target.params[1], point)
        elif source.family == 'G' and target.family == 'GII':
            image = embed_grass_into_skew(source.params[0], source.params[1], target.params[0], point)
        else:
            raise UsageError("({}, {}) has no coordinate embedding, expected GIII(n) in G(r,s) "
                             "or G(r,s) in GII(n)".format(source, target))

        on_cone = not point.is_zero and vmrt_rank_membership(source, point)
        image_on_cone = not image.is_zero and vmrt_rank_membership(target, image)
        return OrderedDict([
            ('source', source.name),
            ('target', target.name),
            ('point', point.as_dict()),
            ('image', image.as_dict()),
            ('ranks', [point.rank, image.rank]),
            ('on_cone', [on_cone, image_on_cone]),
        ]), 0 if on_cone == image_on_cone else 1


class ModelKernelCommand(PairCommand):
    help = 'Compute the kernel in a matrix or quadric model'

    def handle(self, *args, **options) -> Result:
        return kernel_matrix_model(*self.spaces(options)).as_dict(), 0


class ChernCommand(BaseCommand):
    help = 'Factor a total Chern class into two classes of bounded degree'

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument('--target', default='1,1,1,1,1',
                            help='Coefficients of the class, constant term first')
        parser.add_argument('--split', default='2,2', help='The degree bounds of the two factors')

    def handle(self, *args, **options) -> Result:
        target = ChernPoly(_split(options['target']))
        split = tuple(_split(options['split'], 2))
        found = chern_factor_search(target, split)
        return OrderedDict([
            ('target', list(target.coeffs)),
            ('class', str(target)),
            ('split', list(split)),
            ('factors', [list(factor) for factor in found] if found else None),
        ]), 0


class ClassifyCommand(PairCommand):
    help = 'Find the categories, degeneracy and rigidity of a pair'

    def handle(self, *args, **options) -> Result:
        return classify_pair(*self.spaces(options)).as_dict(), 0


class AtlasCommand(BaseCommand):
    help = 'Classify all pairs of catalog spaces up to a rank bound'

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument('--max-rank', type=int, default=None,
                            help='The rank bound, {} when not given'.format(app_settings.ATLAS_RANK))
        parser.add_argument('--workers', type=int, default=1, help='Threads for the pass over all pairs')

    def handle(self, *args, **options) -> Result:
        atlas = classify_all(_max_rank(options), workers=max(1, options['workers']))
        problems = compare_with_expected(atlas)
        failed = any(problems.values())
        if options.get('json'):
            return [record.as_dict() for record in atlas.admissible()], 1 if failed else 0

        report = group_by_category(atlas.admissible())
        report['differences'] = OrderedDict((key, messages) for key, messages in problems.items() if messages)
        return report, 1 if failed else 0


class VerifyCommand(BaseCommand):
    help = 'Check every claim against the golden values'

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument('--max-rank', type=int, default=None,
                            help='The rank bound of the atlas, {} when not given'.format(app_settings.ATLAS_RANK))

    def handle(self, *args, **options) -> Result:
        report = verify_all(seed=_seed(options), max_rank=_max_rank(options))
        return report.as_dict(), 0 if report.passed else 1


class InfoCommand(SpaceCommand):
    help = 'Show basic facts about a space'

    def handle(self, *args, **options) -> Result:
        space = parse_space(options['space'], ambient=False)
        report = OrderedDict([
            ('space', space.name),
            ('dimension', space.dimension),
            ('diagram', space.diagram.name if space.diagram else None),
            ('marked', space.marked),
            ('iso_key', list(iso_key(space))),
            ('aliases', aliases(space)),
        ])
        try:
            report['max_linear_dim'] = sorted(max_linear_dim(space))
        except ProductUnsupported:
            report['max_linear_dim'] = None
        try:
            report['vmrt'] = abstract_vmrt(space).as_dict()
            report['vmrt_chain'] = [vmrt.as_dict() for vmrt in vmrt_chain(space)]
        except (LinearSpace, ProductUnsupported):
            report['vmrt'] = None
            report['vmrt_chain'] = []
        return report, 0


class PatternCommand(SpaceCommand):
    help = 'Tabulate where the second fundamental form of two tangent roots points'

    def handle(self, *args, **options) -> Result:
        return build_sff_pattern(parse_space(options['space'])).as_dict(), 0


class ExceptionsCommand(BaseCommand):
    help = 'List the standard embeddings that do not come from a root map'

    def handle(self, *args, **options) -> Result:
        return degenerate_linear_exceptions(), 0


COMMANDS = OrderedDict([
    ('roots', RootsCommand),
    ('partition', PartitionCommand),
    ('perp', PerpCommand),
    ('check-map', CheckMapCommand),
    ('search-map', SearchMapCommand),
    ('deletion-map', DeletionMapCommand),
    ('kernel', KernelCommand),
    ('witness', WitnessCommand),
    ('rank-check', RankCheckCommand),
    ('embed', EmbedCommand),
    ('model-kernel', ModelKernelCommand),
    ('chern', ChernCommand),
    ('classify', ClassifyCommand),
    ('atlas', AtlasCommand),
    ('verify-paper', VerifyCommand),
    ('info', InfoCommand),
    ('pattern', PatternCommand),
    ('exceptions', ExceptionsCommand),
])

# Shorter spellings of verbs
ALIASES = {
    'verify-paper': ['verify'],
}


def build_parser() -> ArgumentParser:
    """
    The parser with one sub-command per verb.

    :return: The parser
    """
    parser = ArgumentParser(prog='cartan-vmrt', description='Root combinatorics of Hermitian symmetric spaces and '
                                                            'their admissible pairs',
                            formatter_class=ArgumentDefaultsHelpFormatter)
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))

    subparsers = parser.add_subparsers(dest='verb', metavar='VERB')
    subparsers.required = True
    for verb, command_class in COMMANDS.items():
        command = command_class()
        subparser = subparsers.add_parser(verb, aliases=ALIASES.get(verb, []), help=command.help,
                                          description=command.help, formatter_class=ArgumentDefaultsHelpFormatter)
        command.add_arguments(subparser)
        subparser.add_argument('--json', action='store_true', help='Emit JSON instead of YAML')
        subparser.add_argument('--seed', type=int, default=None,
                               help='Seed for random checks, CARTAN_VMRT_SEED takes precedence')
        subparser.add_argument('-v', '--verbosity', type=int, choices=[0, 1, 2, 3], default=1,
                               help='Verbosity level, 0 is quiet and 3 shows debug messages')
        subparser.set_defaults(command=command)

    return parser


def run(argv: List[str] = None, stdout=None, stderr=None) -> int:
    """
    Parse the arguments, run the command and write its report.

    :param argv: The arguments without the program name
    :param stdout: Where the report goes
    :param stderr: Where errors go
    :return: The exit code: 0 when done, 1 when a check failed or the answer is no, 2 for usage errors
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    try:
        options = vars(build_parser().parse_args(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    set_verbosity_logger(logger, options['verbosity'])
    command = options.pop('command')

    try:
        report, code = command.handle(**options)
    except NegativeResult as e:
        logger.debug("Command {} answered no".format(options['verb']), exc_info=True)
        print('{}: {}'.format(e.__class__.__name__, e), file=stderr)
        return 1
    except CartanVmrtError as e:
        logger.debug("Command {} failed".format(options['verb']), exc_info=True)
        print('{}: {}'.format(e.__class__.__name__, e), file=stderr)
        return 2
    except OSError as e:
        print('{}: {}'.format(e.__class__.__name__, e), file=stderr)
        return 2

    print(render_report(report, as_json=options['json']), file=stdout)
    return code


def main() -> int:
    """
    Entry point of the console script
    """
    return run(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
