import logging
import sys

from _config.app_config import get_config
from cli.commands import build_parser
from manifold.errors import ElasticaError


def run(argv: list = None) -> int:
    """
    Parse argv, dispatch to the command and write its artifact.

    :return: 0 on success, 1 on a domain or file error, 2 on a usage error.
    """
    config = get_config()
    logging.basicConfig(level=config.get_log_level(), format=config.get_logging_config().get("format"))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        args.handler(args)
    except (ElasticaError, OSError) as e:
        logging.error(f"elastica {args.command}: {e}")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
