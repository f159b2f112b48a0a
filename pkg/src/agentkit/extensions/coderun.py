"""Code execution tool: isolated subprocess runs with captured output.

ProcessRunner executes model-generated source with a configured interpreter
in a fresh working directory: environment scrubbed to an allowlist, the
process tree killed at the deadline, stdout/stderr tail-capped, and files
the run produced collected as artifacts. For Python interpreters a guard
module installs an audit hook that refuses writes outside the workdir.
"""

from __future__ import annotations

import base64
import hashlib
import mimetypes
import os
import shutil
import signal
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field

from agentkit.errors import RunnerUnavailable, WorkdirDenied
from agentkit.toolreg import ToolDescriptor

ENV_RUNNER_CMD = "AGENTKIT_RUNNER_CMD"
ENV_RUNNER_ROOT = "AGENTKIT_RUNNER_ROOT"

OUTPUT_CAP_BYTES = 64 * 1024
ARTIFACT_CAP_BYTES = 1024 * 1024
STDERR_TAIL_LINES = 40
MIN_TIMEOUT_S = 1
MAX_TIMEOUT_S = 300

ENV_ALLOWLIST = ("PATH", "LANG", "LC_ALL", "PYTHONPATH")

# Bootstrap executed ahead of the user script: confines file writes to the
# working directory via an audit hook, then runs the script as __main__.
_GUARD_SOURCE = """\
import os, runpy, sys

_ROOT = os.path.realpath(os.getcwd())
_WRITE_FLAGS = os.O_WRONLY | os.O_RDWR | os.O_APPEND | os.O_CREAT | os.O_TRUNC


def _inside(path):
    real = os.path.realpath(os.fsdecode(path))
    return real == _ROOT or real.startswith(_ROOT + os.sep)


def _deny(path):
    raise PermissionError(f"write outside workdir denied: {os.fsdecode(path)}")


def _hook(event, args):
    if event == "open":
        path, mode, flags = args
        if isinstance(path, int) or path is None:
            return
        writing = ("w" in (mode or "") or "a" in (mode or "") or "x" in (mode or "")
                   or "+" in (mode or "")) if mode else bool(flags & _WRITE_FLAGS)
        if writing and not _inside(path):
            _deny(path)
    elif event in ("os.remove", "os.rename", "os.mkdir", "os.rmdir", "os.link",
                   "os.symlink"):
        if args and not isinstance(args[0], int) and not _inside(args[0]):
            _deny(args[0])


sys.addaudithook(_hook)
script = sys.argv[1]
sys.argv = sys.argv[1:]
runpy.run_path(script, run_name="__main__")
"""


@dataclass(frozen=True)
class RunArtifact:
    path: str
    media_type: str
    data: bytes

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "media_type": self.media_type,
            "size": len(self.data),
            "data_b64": base64.b64encode(self.data).decode("ascii"),
        }


@dataclass
class ExecutionResult:
    exit_status: int | None
    timed_out: bool
    stdout: str
    stderr: str
    wall_time: float
    artifacts: list[RunArtifact] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.timed_out or self.exit_status != 0

    def to_dict(self) -> dict:
        return {
            "exit_status": self.exit_status,
            "timed_out": self.timed_out,
            "stdout": self.stdout,
            "stderr": self.stderr,
            "wall_time": self.wall_time,
            "artifacts": [a.to_dict() for a in self.artifacts],
        }


def _cap_tail(data: bytes, cap: int = OUTPUT_CAP_BYTES) -> str:
    if len(data) > cap:
        data = data[-cap:]
    return data.decode("utf-8", errors="replace")


def source_digest(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


class MockRunner:
    """Scripted runner: maps source digests to canned results."""

    def __init__(self, scripts: dict[str, ExecutionResult]):
        self.scripts = dict(scripts)
        self.runs: list[str] = []

    def run(self, source: str, timeout: float = 60, workdir=None) -> ExecutionResult:
        digest = source_digest(source)
        self.runs.append(digest)
        if digest not in self.scripts:
            raise RunnerUnavailable(f"no scripted result for source digest {digest[:12]}")
        return self.scripts[digest]


def _sniff_media_type(path: str, data: bytes) -> str:
    if data.startswith(b"\x89PNG\r\n\x1a\n"):
        return "image/png"
    if data.startswith(b"\xff\xd8\xff"):
        return "image/jpeg"
    guessed, _ = mimetypes.guess_type(path)
    return guessed or "application/octet-stream"


class ProcessRunner:
    """Runs source files with a configured interpreter, one workdir per run."""

    def __init__(self, interpreter: str | None = None, root: str | None = None):
        self.interpreter = interpreter or os.environ.get(ENV_RUNNER_CMD) or sys.executable
        self.root = root or os.environ.get(ENV_RUNNER_ROOT)
        base = os.path.basename(self.interpreter)
        self._use_guard = base.startswith("python")

    def new_workdir(self) -> str:
        if self.root:
            os.makedirs(self.root, exist_ok=True)
        return tempfile.mkdtemp(prefix="run-", dir=self.root)

    def run(self, source: str, timeout: float = 60, workdir: str | None = None) -> ExecutionResult:
        if not MIN_TIMEOUT_S <= timeout <= MAX_TIMEOUT_S:
            raise ValueError(
                f"timeout must be in [{MIN_TIMEOUT_S}, {MAX_TIMEOUT_S}] s, got {timeout}"
            )
        if workdir is None:
            workdir = self.new_workdir()
        else:
            workdir = os.path.realpath(workdir)
            if self.root and not workdir.startswith(os.path.realpath(self.root) + os.sep):
                raise WorkdirDenied(
                    f"workdir {workdir!r} is outside the runner root {self.root!r}"
                )
            if not os.path.isdir(workdir):
                raise WorkdirDenied(f"workdir {workdir!r} does not exist")

        script_path = os.path.join(workdir, "main.py")
        with open(script_path, "w", encoding="utf-8") as fh:
            fh.write(source)
        internal = {"main.py"}
        if self._use_guard:
            guard_path = os.path.join(workdir, "_guard.py")
            with open(guard_path, "w", encoding="utf-8") as fh:
                fh.write(_GUARD_SOURCE)
            internal.add("_guard.py")
            cmd = [self.interpreter, guard_path, script_path]
        else:
            cmd = [self.interpreter, script_path]

        before = self._snapshot(workdir)
        env = {key: os.environ[key] for key in ENV_ALLOWLIST if key in os.environ}
        env.update(
            HOME=workdir,
            TMPDIR=workdir,
            MPLCONFIGDIR=workdir,
            PYTHONDONTWRITEBYTECODE="1",
        )

        start = time.monotonic()
        try:
            proc = subprocess.Popen(
                cmd,
                cwd=workdir,
                env=env,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                start_new_session=True,
            )
        except FileNotFoundError as exc:
            raise RunnerUnavailable(
                f"interpreter {self.interpreter!r} not found"
            ) from exc

        timed_out = False
        try:
            stdout, stderr = proc.communicate(timeout=timeout)
            exit_status: int | None = proc.returncode
        except subprocess.TimeoutExpired:
            timed_out = True
            exit_status = None
            try:
                os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
            except (ProcessLookupError, PermissionError):
                proc.kill()
            stdout, stderr = proc.communicate()
        wall_time = time.monotonic() - start

        artifacts = self._collect_artifacts(workdir, before, internal)
        return ExecutionResult(
            exit_status=exit_status,
            timed_out=timed_out,
            stdout=_cap_tail(stdout),
            stderr=_cap_tail(stderr),
            wall_time=wall_time,
            artifacts=artifacts,
        )

    @staticmethod
    def _snapshot(workdir: str) -> dict[str, tuple[int, int]]:
        seen = {}
        for dirpath, _, filenames in os.walk(workdir):
            for name in filenames:
                full = os.path.join(dirpath, name)
                try:
                    st = os.stat(full)
                except OSError:
                    continue
                seen[os.path.relpath(full, workdir)] = (st.st_mtime_ns, st.st_size)
        return seen

    def _collect_artifacts(
        self, workdir: str, before: dict, internal: set[str]
    ) -> list[RunArtifact]:
        artifacts = []
        for rel, stamp in sorted(self._snapshot(workdir).items()):
            if rel in internal or before.get(rel) == stamp:
                continue
            full = os.path.join(workdir, rel)
            try:
                with open(full, "rb") as fh:
                    data = fh.read(ARTIFACT_CAP_BYTES + 1)
            except OSError:
                continue
            if len(data) > ARTIFACT_CAP_BYTES:
                continue  # oversized outputs stay on disk, not in observations
            artifacts.append(
                RunArtifact(path=rel, media_type=_sniff_media_type(rel, data), data=data)
            )
        return artifacts

    def cleanup(self, workdir: str) -> None:
        shutil.rmtree(workdir, ignore_errors=True)


def run_code(runner, source: str, timeout: float = 60, workdir=None) -> ExecutionResult:
    return runner.run(source, timeout=timeout, workdir=workdir)


def format_error_observation(result: ExecutionResult) -> str:
    """Render a failed run for the agent: status, stack-trace tail, nudge."""
    if not result.failed:
        raise ValueError("format_error_observation expects a failed result")
    if result.timed_out:
        status = f"Execution timed out after {result.wall_time:.1f} s and was killed."
    else:
        status = f"Execution failed with exit status {result.exit_status}."
    tail = result.stderr.splitlines()[-STDERR_TAIL_LINES:]
    parts = [status]
    if tail:
        parts.append("\n".join(tail))
    parts.append(
        "The code did not succeed. Inspect the stack trace above and reply "
        "with a corrected version."
    )
    return "\n".join(parts)


def make_coderun_tool(runner, default_timeout: float = 60):
    descriptor = ToolDescriptor(
        name="run_code",
        description="Execute a Python script in an isolated working directory "
        "and return its output, errors, and produced files.",
        input_schema={
            "type": "object",
            "properties": {
                "code": {"type": "string", "description": "Source code to run"},
                "timeout_s": {
                    "type": "integer",
                    "description": "Wall-clock limit in seconds",
                    "default": 60,
                },
            },
            "required": ["code"],
        },
    )

    def handler(args: dict) -> dict:
        result = run_code(
            runner, args["code"], timeout=args.get("timeout_s", default_timeout)
        )
        payload = result.to_dict()
        if result.failed:
            payload["error_observation"] = format_error_observation(result)
        return payload

    return descriptor, handler
