"""Command-line entry point: ``iflab <experiment> [flags]``.

Exit codes: 0 success, 2 configuration error, 3 infeasible or degenerate
scenario, 4 I/O error.
"""

import argparse
import sys

from .errors import ConfigError, IflabError, IoError
from .harness import emit_csv, emit_svg, load_config, render_csv, run


def _add_common(parser):
    parser.add_argument("--config", help="flat key/value YAML config file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials")
    parser.add_argument("--workers", type=int, help="parallel workers (default 1)")
    parser.add_argument("--out", help="output CSV path (stdout if omitted)")
    parser.add_argument("--svg", action="store_true", default=None,
                        help="also write an SVG plot next to the CSV")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="iflab",
        description="Interference-as-a-resource experiments: rate regimes, "
        "alignment, constructive-interference precoding, SWIPT, and secrecy.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)

    p = sub.add_parser("gic", help="2-user G-IC rates, bounds, and regimes")
    _add_common(p)
    p.add_argument("--p-grid-db", dest="p_grid_db", help="power grid in dB")
    p.add_argument("--p-grid", dest="p_grid", help="power grid, linear (overrides dB grid)")
    p.add_argument("--a-grid", dest="a_grid", help="cross-gain grid")

    p = sub.add_parser("alignment", help="interference/signal alignment residuals")
    _add_common(p)
    p.add_argument("--pairs", type=int, help="two-way relay pairs (= relay antennas)")
    p.add_argument("--source-antennas", dest="source_antennas", type=int,
                   help="antennas per relay-pair source")

    p = sub.add_parser("ci-ser", help="SER of CI vs ZF downlink precoding")
    _add_common(p)
    p.add_argument("--k", type=int, help="number of users")
    p.add_argument("--nt", type=int, help="transmit antennas (default K)")
    p.add_argument("--psk-order", dest="psk_order", type=int, help="PSK order")
    p.add_argument("--snr-grid-db", dest="snr_grid_db", help="SNR grid in dB")
    p.add_argument("--precoder", choices=["both", "zf", "ci"], help="which precoder(s)")
    p.add_argument("--target-ser", dest="target_ser", type=float,
                   help="SER level for the SNR-at-target readout")

    p = sub.add_parser("swipt", help="SWIPT ZF-vs-optimal power ratio table")
    _add_common(p)
    p.add_argument("--k", type=int, help="transmitter/receiver pairs")
    p.add_argument("--gamma-grid-db", dest="gamma_grid_db", help="SINR thresholds in dB")
    p.add_argument("--epsilon-grid", dest="epsilon_grid", help="harvesting thresholds")
    p.add_argument("--sigma2", type=float, help="antenna noise power")
    p.add_argument("--sigmac2", type=float, help="processing noise power")

    p = sub.add_parser("secrecy", help="secrecy-rate curves (HD vs FD jamming)")
    _add_common(p)
    p.add_argument("--scheme", choices=["all", "hd", "fd_mrc_eve", "fd_mmse_eve"],
                   help="scheme(s) to simulate")
    p.add_argument("--antennas", choices=["single", "multi"], help="antenna configuration")
    p.add_argument("--kli", type=float, help="residual loop-interference fraction")
    p.add_argument("--pj-ratio", dest="pj_ratio", type=float, help="jamming/transmit power ratio")

    return parser


def _emit(results, config):
    if config.out is None:
        for result in results:
            sys.stdout.write(render_csv(result))
        return
    for i, result in enumerate(results):
        path = config.out
        if len(results) > 1:
            stem, dot, ext = path.rpartition(".")
            path = f"{stem}-{i}{dot}{ext}" if dot else f"{path}-{i}"
        emit_csv(result, path)
        if config.svg:
            stem, dot, ext = path.rpartition(".")
            svg_path = f"{stem}.svg" if dot else f"{path}.svg"
            emit_svg(result, svg_path)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    try:
        config = load_config(args.config, overrides)
        results = run(config)
        _emit(results, config)
    except ConfigError as exc:
        print(f"iflab: config error: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"iflab: i/o error: {exc}", file=sys.stderr)
        return 4
    except (IflabError, ValueError) as exc:
        print(f"iflab: infeasible or degenerate scenario: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"iflab: i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
