"""Operator entry points: ingest, query, serve, chat, microscope-sim.

Option values resolve as flags > environment > config file (TOML, via
--config) > built-in default; --verbose reports where each effective value
came from. Exit codes: 0 success, 1 operational error, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys

import click

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

ENV_TOKEN = "AGENTKIT_TOKEN"


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise click.ClickException(f"config file {path!r} not found")
    except tomllib.TOMLDecodeError as exc:
        raise click.ClickException(f"config file {path!r} is not valid TOML: {exc}")


class Resolver:
    """Implements the flag > env > config > default precedence."""

    def __init__(self, config: dict, section: str, verbose: bool):
        self.section = config.get(section, {})
        self.verbose = verbose

    def get(self, key: str, flag_value, default=None, env: str | None = None):
        if flag_value is not None:
            value, origin = flag_value, "flag"
        elif env and os.environ.get(env) not in (None, ""):
            value, origin = os.environ[env], f"env {env}"
        elif key in self.section:
            value, origin = self.section[key], "config"
        else:
            value, origin = default, "default"
        if self.verbose:
            click.echo(f"# {key} = {value!r} (from {origin})", err=True)
        return value


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="TOML config file mirroring the flags.")
@click.option("--verbose", is_flag=True, help="Trace where option values come from.")
@click.pass_context
def cli(ctx, config_path, verbose):
    """Retrieval-augmented agent engine."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = _load_config(config_path)
    ctx.obj["verbose"] = verbose


def _make_embedder(kind: str, dim: int):
    from agentkit.embed import HashEmbedder, RemoteEmbedder

    if kind == "hash":
        return HashEmbedder(dim)
    if kind == "remote":
        return RemoteEmbedder.from_env()
    raise click.ClickException(f"unknown embedder {kind!r} (expected hash or remote)")


@cli.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--embedder", "embedder_kind", type=click.Choice(["hash", "remote"]), default=None)
@click.option("--dim", type=int, default=None, help="Hash embedder dimension.")
@click.option("--chunk-size", type=int, default=None)
@click.option("--overlap", type=int, default=None)
@click.pass_context
def ingest(ctx, manifest_path, out_path, embedder_kind, dim, chunk_size, overlap):
    """Build a knowledge-base artifact from a manifest."""
    from agentkit.ingest import HttpFetcher, parse_manifest
    from agentkit.ingest.build import build_knowledge_base
    from agentkit.ingest.chunking import ChunkPolicy
    from agentkit.errors import AgentKitError
    from agentkit.vexidx import save_artifact
    import hashlib

    r = Resolver(ctx.obj["config"], "ingest", ctx.obj["verbose"])
    embedder_kind = r.get("embedder", embedder_kind, "hash")
    dim = int(r.get("dim", dim, 256))
    chunk_size = int(r.get("chunk_size", chunk_size, 1000))
    overlap = int(r.get("overlap", overlap, 200))

    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest_text = fh.read()
    except OSError as exc:
        raise click.ClickException(
            f"cannot read manifest: {exc} (see 'agentkit ingest --help')"
        )
    base_dir = os.path.dirname(os.path.abspath(manifest_path))
    try:
        policy = ChunkPolicy(chunk_size=chunk_size, overlap=overlap)
        sources = parse_manifest(manifest_text, base_dir=base_dir)
        kb = build_knowledge_base(
            sources,
            HttpFetcher(base_dir=base_dir),
            _make_embedder(embedder_kind, dim),
            policy,
            manifest_digest=hashlib.sha256(manifest_text.encode("utf-8")).hexdigest(),
        )
        digest = save_artifact(kb, out_path)
    except (AgentKitError, ValueError) as exc:
        raise click.ClickException(str(exc))

    for warning in kb.build_warnings:
        click.echo(f"warning: {warning}", err=True)
    for source_id, count in sorted(kb.per_source_counts.items()):
        click.echo(f"{source_id}: {count} chunks")
    click.echo(f"total: {len(kb)} chunks, dim {kb.dim}")
    click.echo(f"digest: {digest}")


@cli.command()
@click.option("--kb", "kb_path", required=True, type=click.Path())
@click.option("--query", "query_text", required=True)
@click.option("--k", type=int, default=None)
@click.option("--embedder", "embedder_kind", type=click.Choice(["hash", "remote"]), default=None)
@click.pass_context
def query(ctx, kb_path, query_text, k, embedder_kind):
    """Search a knowledge-base artifact and print ranked hits."""
    from agentkit.errors import AgentKitError
    from agentkit.vexidx import load_artifact

    r = Resolver(ctx.obj["config"], "query", ctx.obj["verbose"])
    k = int(r.get("k", k, 5))
    embedder_kind = r.get("embedder", embedder_kind, "hash")

    try:
        kb = load_artifact(kb_path)
        embedder = _make_embedder(embedder_kind, kb.dim if len(kb) else 256)
        hits = kb.search(embedder.embed_one(query_text), k) if len(kb) else []
    except (AgentKitError, OSError) as exc:
        raise click.ClickException(str(exc))

    lookup = {c.chunk_id: c for c in kb.chunks}
    for hit in hits:
        preview = lookup[hit.chunk_id].text[:80].replace("\n", " ")
        click.echo(f"{hit.rank}\t{hit.score:.6f}\t{hit.chunk_id}\t{preview}")


def _load_assistants(path: str | None) -> dict:
    from agentkit.gateway import AssistantSpec

    if not path:
        return {"default": AssistantSpec(name="default")}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    specs = data if isinstance(data, list) else data.get("assistants", [data])
    assistants = {}
    for entry in specs:
        spec = AssistantSpec.from_dict(entry)
        assistants[spec.name] = spec
    if "default" not in assistants and assistants:
        first = next(iter(assistants.values()))
        assistants["default"] = first
    return assistants


@cli.command()
@click.option("--kb", "kb_paths", multiple=True, type=click.Path())
@click.option("--port", type=int, default=None)
@click.option("--host", default=None)
@click.option("--assistant", "assistant_path", type=click.Path(), default=None,
              help="JSON assistant definitions (may include a scripted provider).")
@click.option("--embedder", "embedder_kind", type=click.Choice(["hash", "remote"]), default=None)
@click.option("--coderun", is_flag=True, help="Expose the run_code tool.")
@click.option("--websearch", is_flag=True, help="Expose the web_search tool.")
@click.option("--token", default=None, help="Bearer token for session/extension endpoints.")
@click.pass_context
def serve(ctx, kb_paths, port, host, assistant_path, embedder_kind, coderun, websearch, token):
    """Run the gateway with knowledge bases mounted as docs tools."""
    from agentkit.errors import AgentKitError
    from agentkit.extensions import make_docs_tool
    from agentkit.gateway import GatewayState, serve_blocking
    from agentkit.toolreg import ToolRegistry
    from agentkit.vexidx import load_artifact

    r = Resolver(ctx.obj["config"], "serve", ctx.obj["verbose"])
    port = int(r.get("port", port, 8420))
    host = r.get("host", host, "127.0.0.1")
    embedder_kind = r.get("embedder", embedder_kind, "hash")
    token = r.get("token", token, None, env=ENV_TOKEN)

    registry = ToolRegistry()
    try:
        for kb_path in kb_paths:
            kb = load_artifact(kb_path)
            kb.embedder = _make_embedder(embedder_kind, kb.dim if len(kb) else 256)
            for source_id in sorted(kb.per_source_counts):
                descriptor, handler = make_docs_tool(kb, source_id=source_id)
                registry.register(descriptor, handler)
        if coderun:
            from agentkit.extensions import ProcessRunner, make_coderun_tool

            descriptor, handler = make_coderun_tool(ProcessRunner())
            registry.register(descriptor, handler)
        if websearch:
            from agentkit.extensions import DuckDuckGoProvider, make_websearch_tool
            from agentkit.embed import HashEmbedder
            from agentkit.ingest.fetch import HttpFetcher

            descriptor, handler = make_websearch_tool(
                DuckDuckGoProvider(), HttpFetcher(timeout=10.0), HashEmbedder(256)
            )
            registry.register(descriptor, handler)
        assistants = _load_assistants(assistant_path)
    except (AgentKitError, OSError, ValueError) as exc:
        raise click.ClickException(str(exc))

    state = GatewayState(registry, assistants, token=token)
    click.echo(f"gateway listening on http://{host}:{port}", err=True)
    try:
        serve_blocking(state, host, port)
    except OSError as exc:
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}")


def _print_event(event: dict) -> None:
    kind = event.get("type")
    style = sys.stdout.isatty()

    def dim(text):
        return f"\033[2m{text}\033[0m" if style else text

    def bold(text):
        return f"\033[1m{text}\033[0m" if style else text

    if kind == "turn_started":
        click.echo(dim("-- turn started --"))
    elif kind == "reasoning":
        click.echo(dim(f"[reasoning] {event.get('text', '')}"))
    elif kind == "tool_call_issued":
        call = event.get("call", {})
        click.echo(f"-> {call.get('tool')} {json.dumps(call.get('args', {}))}")
    elif kind == "observation_received":
        obs = event.get("observation", {})
        rendered = json.dumps(obs, ensure_ascii=False)
        if len(rendered) > 400:
            rendered = rendered[:400] + "..."
        click.echo(f"    <- {rendered}")
    elif kind == "final_answer":
        click.echo(bold(event.get("text", "")))
    elif kind == "action_summary":
        click.echo(dim(f"[summary] {event.get('text', '')}"))
    elif kind == "turn_failed":
        click.echo(bold(f"turn failed: {event.get('reason')}: {event.get('message')}"))
    else:
        click.echo(dim(json.dumps(event)))


@cli.command()
@click.option("--gateway", "gateway_url", required=True)
@click.option("--assistant", default=None)
@click.option("--profile", default=None)
@click.option("--token", default=None)
@click.option("--message", "one_shot", default=None,
              help="Send one message, print the turn, and exit.")
@click.pass_context
def chat(ctx, gateway_url, assistant, profile, token, one_shot):
    """Terminal chat REPL against a running gateway."""
    import requests

    r = Resolver(ctx.obj["config"], "chat", ctx.obj["verbose"])
    assistant = r.get("assistant", assistant, "default")
    token = r.get("token", token, None, env=ENV_TOKEN)
    headers = {"Authorization": f"Bearer {token}"} if token else {}

    gateway_url = gateway_url.rstrip("/")
    try:
        resp = requests.post(
            f"{gateway_url}/sessions",
            json={"assistant": assistant, "profile": profile},
            headers=headers,
            timeout=5,
        )
    except requests.RequestException as exc:
        raise click.ClickException(f"gateway unreachable: {exc}")
    if resp.status_code != 200:
        raise click.ClickException(f"session creation failed: {resp.text}")
    session_id = resp.json()["session_id"]
    click.echo(f"session {session_id}", err=True)
    last_seq = -1

    def run_one_turn(text: str) -> None:
        nonlocal last_seq
        post = requests.post(
            f"{gateway_url}/sessions/{session_id}/messages",
            json={"text": text},
            headers=headers,
            timeout=5,
        )
        if post.status_code != 202:
            raise click.ClickException(f"message rejected: {post.text}")
        stream = requests.get(
            f"{gateway_url}/sessions/{session_id}/events",
            headers={
                **headers,
                "Accept": "text/event-stream",
                "Last-Event-ID": str(last_seq),
            },
            stream=True,
            timeout=(5, 300),
        )
        try:
            event_id, done = None, False
            for line in stream.iter_lines(decode_unicode=True):
                if line is None:
                    continue
                if line.startswith("id: "):
                    event_id = int(line[4:])
                    continue
                if not line.startswith("data: "):
                    continue
                event = json.loads(line[len("data: "):])
                if event_id is not None:
                    last_seq = event_id
                _print_event(event)
                kind = event.get("type")
                if kind == "turn_failed":
                    break
                if kind == "final_answer":
                    done = True  # summary trails by one event
                elif done and kind == "action_summary":
                    break
        finally:
            stream.close()

    if one_shot is not None:
        run_one_turn(one_shot)
        return
    click.echo("type a message, or /quit to leave", err=True)
    while True:
        try:
            text = input("> ").strip()
        except (EOFError, KeyboardInterrupt):
            break
        if not text:
            continue
        if text in ("/quit", "/exit"):
            break
        run_one_turn(text)


@cli.command("microscope-sim")
@click.option("--gateway", "gateway_url", required=True)
@click.option("--service-id", default=None)
@click.option("--seed", type=int, default=None)
@click.option("--token", default=None)
@click.pass_context
def microscope_sim(ctx, gateway_url, service_id, seed, token):
    """Serve the simulated microscope as a remote extension."""
    from agentkit.extensions import MicroscopeSimulator
    from agentkit.gateway import ExtensionServer, RegistrationRejected

    r = Resolver(ctx.obj["config"], "microscope-sim", ctx.obj["verbose"])
    service_id = r.get("service_id", service_id, "microscope-sim")
    seed = int(r.get("seed", seed, 1234))
    token = r.get("token", token, None, env=ENV_TOKEN)

    sim = MicroscopeSimulator(world_seed=seed)
    server = ExtensionServer(
        gateway_url, service_id, sim.get_schema(), sim.tool_handlers(), token=token
    )
    try:
        tools = server.connect()
    except RegistrationRejected as exc:
        raise click.ClickException(f"registration rejected: {exc}")
    except Exception as exc:
        raise click.ClickException(f"cannot reach gateway: {exc}")
    click.echo(f"registered tools: {', '.join(tools)}", err=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.close()


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
