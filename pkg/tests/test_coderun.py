import sys

import pytest

from agentkit.errors import RunnerUnavailable, WorkdirDenied
from agentkit.agent import (
    AssistantConfig,
    FinalAnswer,
    ScriptedProvider,
    Session,
    ToolCallRequest,
    ToolCalls,
    run_turn,
)
from agentkit.extensions import (
    ExecutionResult,
    MockRunner,
    ProcessRunner,
    format_error_observation,
    make_coderun_tool,
    run_code,
    source_digest,
)
from agentkit.toolreg import ToolRegistry


@pytest.fixture
def runner(tmp_path):
    return ProcessRunner(interpreter=sys.executable, root=str(tmp_path))


class TestMockRunner:
    def test_scripted_result(self):
        src = "print(42)"
        canned = ExecutionResult(
            exit_status=0, timed_out=False, stdout="42\n", stderr="", wall_time=0.01
        )
        mock = MockRunner({source_digest(src): canned})
        assert run_code(mock, src) is canned

    def test_unscripted_source(self):
        with pytest.raises(RunnerUnavailable):
            MockRunner({}).run("print('?')")


class TestProcessRunner:
    def test_stdout_captured(self, runner):
        result = runner.run("print('hello world')", timeout=30)
        assert result.exit_status == 0
        assert result.stdout == "hello world\n"
        assert not result.timed_out

    def test_nonzero_exit_and_stderr(self, runner):
        result = runner.run("raise ValueError('broken thing')", timeout=30)
        assert result.exit_status != 0
        assert "ValueError: broken thing" in result.stderr

    def test_timeout_kills_process_tree(self, runner):
        result = runner.run(
            "import time\nwhile True: time.sleep(0.1)", timeout=2
        )
        assert result.timed_out
        assert result.exit_status is None
        assert result.wall_time >= 2.0

    def test_artifact_collection(self, runner):
        png = b"\x89PNG\r\n\x1a\n" + b"fakepixels"
        source = f"open('out.png','wb').write({png!r})\nprint('done')"
        result = runner.run(source, timeout=30)
        assert result.exit_status == 0
        assert [a.path for a in result.artifacts] == ["out.png"]
        assert result.artifacts[0].media_type == "image/png"
        assert result.artifacts[0].data == png

    def test_hermetic_reruns(self, runner):
        source = "import os\nprint(sorted(os.listdir('.')))\nprint('stable')"
        first = runner.run(source, timeout=30)
        second = runner.run(source, timeout=30)
        assert first.stdout == second.stdout
        assert first.exit_status == second.exit_status == 0

    def test_escape_write_refused(self, runner, tmp_path):
        outside = tmp_path.parent / "escape-marker.txt"
        result = runner.run(
            f"open({str(outside)!r}, 'w').write('leak')", timeout=30
        )
        assert result.exit_status != 0
        assert "denied" in result.stderr.lower()
        assert not outside.exists()

    def test_env_scrubbed(self, runner, monkeypatch):
        monkeypatch.setenv("SECRET_TOKEN", "hunter2")
        result = runner.run(
            "import os\nprint(os.environ.get('SECRET_TOKEN'))", timeout=30
        )
        assert result.stdout == "None\n"

    def test_workdir_outside_root_denied(self, runner, tmp_path):
        with pytest.raises(WorkdirDenied):
            runner.run("print(1)", timeout=5, workdir="/")

    def test_timeout_bounds(self, runner):
        with pytest.raises(ValueError):
            runner.run("print(1)", timeout=0.5)
        with pytest.raises(ValueError):
            runner.run("print(1)", timeout=301)

    def test_missing_interpreter(self, tmp_path):
        bad = ProcessRunner(interpreter="/no/such/interp", root=str(tmp_path))
        with pytest.raises(RunnerUnavailable):
            bad.run("print(1)", timeout=5)

    def test_output_cap_keeps_tail(self, runner):
        source = "import sys\nsys.stdout.write('x' * 200000 + 'THE-END')"
        result = runner.run(source, timeout=30)
        assert len(result.stdout.encode()) <= 64 * 1024
        assert result.stdout.endswith("THE-END")


class TestFormatErrorObservation:
    def test_tail_of_40_lines(self):
        stderr = "\n".join(f"line {i}" for i in range(100))
        result = ExecutionResult(
            exit_status=1, timed_out=False, stdout="", stderr=stderr, wall_time=0.1
        )
        text = format_error_observation(result)
        assert "line 99" in text and "line 60" in text
        assert "line 59" not in text
        assert text.startswith("Execution failed with exit status 1.")

    def test_timeout_message(self):
        result = ExecutionResult(
            exit_status=None, timed_out=True, stdout="", stderr="", wall_time=2.3
        )
        text = format_error_observation(result)
        assert "timed out" in text and "2.3" in text

    def test_success_rejected(self):
        ok = ExecutionResult(
            exit_status=0, timed_out=False, stdout="", stderr="", wall_time=0.1
        )
        with pytest.raises(ValueError):
            format_error_observation(ok)


class TestErrorFixCycle:
    def test_two_observations_then_success(self):
        bad = "print(undefined_name)"
        good = "print(6)"
        mock = MockRunner(
            {
                source_digest(bad): ExecutionResult(
                    exit_status=1,
                    timed_out=False,
                    stdout="",
                    stderr="Traceback (most recent call last):\n"
                    "  File 'main.py', line 1, in <module>\n"
                    "NameError: name 'undefined_name' is not defined",
                    wall_time=0.05,
                ),
                source_digest(good): ExecutionResult(
                    exit_status=0, timed_out=False, stdout="6\n", stderr="", wall_time=0.04
                ),
            }
        )
        registry = ToolRegistry()
        descriptor, handler = make_coderun_tool(mock)
        registry.register(descriptor, handler)
        provider = ScriptedProvider(
            [
                ToolCalls(calls=(ToolCallRequest("run_code", {"code": bad}),)),
                ToolCalls(calls=(ToolCallRequest("run_code", {"code": good}),)),
                FinalAnswer("The result is 6."),
            ]
        )
        session = Session(
            "fix", AssistantConfig(name="coder", instructions="i", tool_names=["run_code"])
        )
        events: list = []
        terminal = run_turn(session, "compute", provider, registry, events.append)
        assert terminal.type == "final_answer"
        observations = [e for e in events if e.type == "observation_received"]
        assert len(observations) == 2
        first, second = (o.data["observation"] for o in observations)
        assert first["ok"] and first["value"]["exit_status"] == 1
        assert "NameError" in first["value"]["error_observation"]
        assert second["value"]["exit_status"] == 0
        assert second["value"]["stdout"] == "6\n"
