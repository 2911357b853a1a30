"""Command-line front end.

Verbs: ``mine`` (context file -> concept store), ``index`` (store -> index
file), ``query`` / ``repl`` (one-shot and interactive search), ``bench``
(timing comparison of both engines), ``validate`` (oracle suite) and
``serve`` (start the HTTP service). ``query`` and ``repl`` can also act as
thin clients of a running service via ``--server``.

Exit codes: 0 success, 1 usage error, 2 data or file error, 3 validation
failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .baseline import baseline_query, build_baseline
from .bench import run_benchmark
from .context import load_context
from .errors import (
    BruteForceCapError,
    DataFormatError,
    IndexFileError,
    TrisearchError,
    ValidationFailure,
)
from .index import build_index, load_index, save_index
from .miner import context_from_concepts, mine_concepts, read_store, write_store
from .query import concept_record, hit_record, parse_query, search
from .validate import run_validation

_MODES = ("contains", "exact")
_SCOPES = ("total", "per_dimension")
_ENGINES = ("ours", "baseline")


@click.group()
def cli():
    """Mine, index and query closed tri-sets of ternary contexts."""


@cli.command("mine")
@click.argument("input_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["auto", "triples", "table"]),
              default="auto", show_default=True, help="Input context format.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Concept store path (default: input with .tcs suffix).")
def cmd_mine(input_path, fmt, output):
    """Mine all closed tri-sets of a context into a concept store."""
    ctx = load_context(input_path, fmt)
    concepts = mine_concepts(ctx)
    out = Path(output) if output else Path(input_path).with_suffix(".tcs")
    write_store(out, concepts)
    click.echo(f"{len(concepts)} concepts -> {out}")


@cli.command("index")
@click.argument("store_path", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Index path (default: store with .tix suffix).")
def cmd_index(store_path, output):
    """Build the inverted index of a concept store and save it."""
    concepts = read_store(store_path)
    index = build_index(concepts)
    out = Path(output) if output else Path(store_path).with_suffix(".tix")
    save_index(index, out)
    click.echo(f"{index.posting_total()} postings over {len(concepts)} concepts -> {out}")


def _load_engine_inputs(index_path, store_path):
    if store_path is None:
        raise click.UsageError("--store is required (or use --server)")
    concepts = read_store(store_path)
    if index_path is None:
        index = build_index(concepts)
    else:
        index = load_index(index_path)
        if index.concept_count != len(concepts):
            raise DataFormatError(
                f"index covers {index.concept_count} concepts, store has {len(concepts)}"
            )
        if index.element_counts() != tuple(len(d) for d in concepts.dictionaries):
            raise DataFormatError("index element counts do not match the store")
        index.concepts = concepts
    return concepts, index


def _run_local(concepts, index, baseline_engine, text, theta, k, mode, scope, engine, sep):
    q = parse_query(
        text, concepts.dictionaries, theta=theta, mode=mode, k=k,
        label_separator=sep, theta_scope=scope,
    )
    if engine == "baseline":
        return [json.dumps(concept_record(c, concepts)) for c in baseline_query(baseline_engine, q)]
    hits = search(index, concepts, q)
    return [json.dumps(hit_record(h, rank, concepts)) for rank, h in enumerate(hits, 1)]


def _run_remote(server, workspace, text, theta, k, mode, scope, engine, sep):
    import httpx

    if not workspace:
        raise click.UsageError("--workspace is required with --server")
    payload = {
        "query": text,
        "theta": theta,
        "mode": mode,
        "theta_scope": scope,
        "engine": engine,
    }
    if k is not None:
        payload["k"] = k
    if sep is not None:
        payload["label_separator"] = sep
    response = httpx.post(
        f"{server.rstrip('/')}/workspaces/{workspace}/search", json=payload, timeout=60.0
    )
    if response.status_code != 200:
        detail = response.json().get("detail", response.text)
        raise DataFormatError(f"server rejected query: {detail}")
    return [json.dumps(hit) for hit in response.json()["hits"]]


def _query_options(f):
    options = [
        click.option("--index", "index_path", type=click.Path(dir_okay=False),
                     default=None, help="Inverted index file."),
        click.option("--store", "store_path", type=click.Path(dir_okay=False),
                     default=None, help="Concept store file."),
        click.option("--theta", default=0, show_default=True,
                     help="How many query elements a hit may miss."),
        click.option("--k", type=int, default=None, help="Result cutoff."),
        click.option("--mode", type=click.Choice(_MODES), default="contains", show_default=True),
        click.option("--theta-scope", "scope", type=click.Choice(_SCOPES), default="total",
                     show_default=True, help="Count tolerance over the whole query "
                     "or per dimension."),
        click.option("--engine", type=click.Choice(_ENGINES), default="ours", show_default=True),
        click.option("--label-sep", "sep", default=None,
                     help="Label separator inside query fields (default: one character "
                     "per label)."),
        click.option("--server", default=None, help="Base URL of a running service."),
        click.option("--workspace", default=None, help="Workspace name on the service."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


@cli.command("query")
@click.argument("query_text")
@_query_options
def cmd_query(query_text, index_path, store_path, theta, k, mode, scope, engine, sep,
              server, workspace):
    """Answer one query; hits are printed as JSON lines."""
    if server:
        lines = _run_remote(server, workspace, query_text, theta, k, mode, scope, engine, sep)
    else:
        concepts, index = _load_engine_inputs(index_path, store_path)
        baseline_engine = None
        if engine == "baseline":
            ctx = context_from_concepts(concepts)
            baseline_engine = build_baseline(ctx, concepts)
        lines = _run_local(
            concepts, index, baseline_engine, query_text, theta, k, mode, scope, engine, sep
        )
    for line in lines:
        click.echo(line)


@cli.command("repl")
@_query_options
def cmd_repl(index_path, store_path, theta, k, mode, scope, engine, sep, server, workspace):
    """Interactive session; one query per line.

    Directives: :theta N, :k N (or :k none), :mode contains|exact,
    :scope total|per_dimension, :engine ours|baseline, :quit. Parse errors
    and unknown directives warn on stderr and the session continues.
    """
    concepts = index = baseline_engine = None
    if not server:
        concepts, index = _load_engine_inputs(index_path, store_path)
    state = {"theta": theta, "k": k, "mode": mode, "scope": scope, "engine": engine}
    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            click.echo("> ", err=True, nl=False)
        raw = sys.stdin.readline()
        if not raw:
            break
        line = raw.strip()
        if not line:
            continue
        if line.startswith(":"):
            if line == ":quit":
                break
            if not _apply_directive(state, line):
                click.echo(f"warning: unknown directive {line!r}", err=True)
            continue
        try:
            if server:
                lines = _run_remote(
                    server, workspace, line, state["theta"], state["k"], state["mode"],
                    state["scope"], state["engine"], sep,
                )
            else:
                if state["engine"] == "baseline" and baseline_engine is None:
                    baseline_engine = build_baseline(context_from_concepts(concepts), concepts)
                lines = _run_local(
                    concepts, index, baseline_engine, line, state["theta"], state["k"],
                    state["mode"], state["scope"], state["engine"], sep,
                )
        except TrisearchError as err:
            click.echo(f"error: {err}", err=True)
            continue
        for out in lines:
            click.echo(out)


def _apply_directive(state, line) -> bool:
    pieces = line[1:].split()
    if not pieces:
        return False
    name, args = pieces[0], pieces[1:]
    if name == "theta" and len(args) == 1 and args[0].isdigit():
        state["theta"] = int(args[0])
        return True
    if name == "k" and len(args) == 1:
        if args[0].lower() == "none":
            state["k"] = None
            return True
        if args[0].isdigit() and int(args[0]) >= 1:
            state["k"] = int(args[0])
            return True
        return False
    if name == "mode" and len(args) == 1 and args[0] in _MODES:
        state["mode"] = args[0]
        return True
    if name == "scope" and len(args) == 1 and args[0] in _SCOPES:
        state["scope"] = args[0]
        return True
    if name == "engine" and len(args) == 1 and args[0] in _ENGINES:
        state["engine"] = args[0]
        return True
    return False


@cli.command("bench")
@click.argument("input_path", type=click.Path(dir_okay=False), required=False)
@click.option("--format", "fmt", type=click.Choice(["auto", "triples", "table"]),
              default="auto", show_default=True)
@click.option("--synthetic", type=click.Choice(["mushroom", "groceries"]), default=None,
              help="Benchmark a generated context instead of a file.")
@click.option("--density", type=float, default=0.3, show_default=True,
              help="Cell density for the synthetic profile generator.")
@click.option("--reps", default=3, show_default=True, help="Samples per timing cell (min 3).")
@click.option("--samples", default=3, show_default=True, help="Random queries per shape.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the report as JSON.")
def cmd_bench(input_path, fmt, synthetic, density, reps, samples, seed, out_path):
    """Compare structure build time and query latency across engines."""
    if (input_path is None) == (synthetic is None):
        raise click.UsageError("provide exactly one of INPUT_PATH or --synthetic")
    if synthetic == "mushroom":
        from .synthetic import mushroom_shaped

        ctx = mushroom_shaped(seed=seed, cell_density=density)
    elif synthetic == "groceries":
        from .synthetic import groceries_shaped

        ctx = groceries_shaped(seed=seed)
    else:
        ctx = load_context(input_path, fmt)
    report = run_benchmark(ctx, repetitions=reps, sample_size=samples, seed=seed)
    click.echo(report.format_table())
    if out_path:
        Path(out_path).write_text(report.to_json() + "\n", encoding="utf-8")
        click.echo(f"report -> {out_path}")


@cli.command("validate")
@click.argument("input_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["auto", "triples", "table"]),
              default="auto", show_default=True)
@click.option("--store", "store_path", type=click.Path(dir_okay=False),
              default=None, help="Concept store to cross-check against the context.")
@click.option("--queries", default=50, show_default=True, help="Random queries to sample.")
@click.option("--seed", default=0, show_default=True)
def cmd_validate(input_path, fmt, store_path, queries, seed):
    """Run the oracle suite; exits 3 if any invariant fails."""
    ctx = load_context(input_path, fmt)
    store = read_store(store_path) if store_path else None
    report = run_validation(ctx, store=store, query_samples=queries, seed=seed)
    for line in report.format_lines():
        click.echo(line)
    if not report.passed:
        raise ValidationFailure("validation failed")
    click.echo("all checks passed")


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--load", "loads", multiple=True, metavar="NAME=STORE[:INDEX]",
              help="Preload a workspace from a concept store (repeatable).")
def cmd_serve(host, port, loads):
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app, workspace_from_store

    preload = []
    for spec_text in loads:
        name, _, paths = spec_text.partition("=")
        if not name or not paths:
            raise click.UsageError(f"--load expects NAME=STORE[:INDEX], got {spec_text!r}")
        store_path, _, index_path = paths.partition(":")
        preload.append(workspace_from_store(name, store_path, index_path or None))
    app = create_app(preload=preload)
    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as err:
        return err.exit_code
    except click.Abort:
        return 130
    except click.ClickException as err:
        err.show()
        return 1
    except ValidationFailure as err:
        click.echo(f"error: {err}", err=True)
        return 3
    except (DataFormatError, IndexFileError, BruteForceCapError) as err:
        click.echo(f"error: {err}", err=True)
        return 2
    except OSError as err:
        click.echo(f"error: {err}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
