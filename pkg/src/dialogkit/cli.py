"""Command line entry points: a typed REPL, the HTTP server, and transcript
replay verification."""
from __future__ import annotations

import logging

import click

from .service import DialogService, discover_packs, replay_transcript


@click.group()
def main():
    """Dialogue framework for information-access tasks."""


@main.command()
@click.option("--domain", default="flights", show_default=True)
@click.option("--backend", type=click.Choice(["local", "cgi"]), default="local", show_default=True)
@click.option("--cgi-url", default=None, help="Base URL of the form site; omit to run the bundled site in-process.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--few-threshold", default=5, show_default=True, type=int)
@click.option("--vary-prompts", is_flag=True, help="Enable seeded prompt variation.")
@click.option("--dataset", "dataset_path", default=None, help="Override the pack's dataset file.")
@click.option("--debug", is_flag=True, help="Print the state decision after each turn.")
def repl(domain, backend, cgi_url, seed, few_threshold, vary_prompts, dataset_path, debug):
    """Interactive typed dialogue."""
    logging.basicConfig(level=logging.WARNING)
    service = DialogService(few_threshold=few_threshold, cgi_url=cgi_url, dataset_path=dataset_path)
    session = service.create_session(domain, backend=backend, seed=seed, vary=vary_prompts)
    click.echo(session.transcript[0].reply)
    while not session.closed:
        try:
            text = click.prompt("you", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, KeyboardInterrupt, click.Abort):
            break
        response = service.step(session.id, text)
        click.echo(response.reply)
        if debug:
            click.echo(
                f"  [state={response.state}"
                + (f"/{response.sub_state}" if response.sub_state else "")
                + f" cause={response.debug.get('cause')}"
                + f" queries={response.debug.get('query_count')}"
                + f" probes={response.debug.get('probe_count')}"
                + f" bindings={response.bindings}]"
            )


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--packs", "packs_dir", default=None, help="Extra domain pack directory.")
@click.option("--few-threshold", default=5, show_default=True, type=int)
@click.option("--cgi-url", default=None)
@click.option("--persist-dir", default=None, help="Write one transcript file per session here.")
@click.option("--ui", "ui_dir", default=None, help="Serve a built chat UI directory at /.")
def serve(port, packs_dir, few_threshold, cgi_url, persist_dir, ui_dir):
    """Run the HTTP API (optionally hosting the chat UI)."""
    import uvicorn

    from .http_api import create_app

    logging.basicConfig(level=logging.INFO)
    service = DialogService(
        packs=discover_packs(packs_dir),
        few_threshold=few_threshold,
        cgi_url=cgi_url,
        persist_dir=persist_dir,
    )
    app = create_app(service)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host="127.0.0.1", port=port)


@main.command()
@click.argument("transcript_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--few-threshold", default=5, show_default=True, type=int)
def replay(transcript_file, few_threshold):
    """Re-run a recorded transcript and verify every reply byte-for-byte."""
    service = DialogService(few_threshold=few_threshold)
    ok, mismatches = replay_transcript(transcript_file, service)
    if ok:
        click.echo("replay ok: every reply matched")
        return
    for m in mismatches:
        click.echo(f"turn {m.turn}: {m.utterance!r}")
        click.echo(f"  expected: {m.expected!r}")
        click.echo(f"  actual:   {m.actual!r}")
    raise SystemExit(1)


if __name__ == "__main__":
    main()
