import io

import pytest

from main import EXIT_OK, main
from src.domain.benchmark import PruningBenchmark
from src.domain.resolution import Outcome
from src.tests.validation.conftest import program_path


@pytest.fixture
def properties(tmp_path):
    path = tmp_path / "benchmark.properties"
    path.write_text("\n".join([
        "# benchmark reduzido",
        f"bench.program={program_path('pu.qlp')}",
        "bench.domain=u",
        "bench.goal=cruel(X)#W | W >= {threshold}",
        "bench.thresholds=0.3,0.5",
        "bench.repetitions=2",
        "bench.unprunedStepBudget=200",
        f"bench.plotPath={tmp_path / 'plots' / 'steps.png'}",
        f"log.dir={tmp_path / 'logs'}",
        "log.verbose=false",
    ]) + "\n", encoding="utf-8")
    return path


def test_cycles(properties, tmp_path):
    cycles = PruningBenchmark(str(properties)).run()
    assert [str(c.threshold) for c in cycles] == ["3/10", "1/2"]
    for cycle in cycles:
        assert cycle.unpruned_outcome is Outcome.TRUNCATED
        assert cycle.unpruned_steps == 200
        assert cycle.mean_ms >= 0
    assert cycles[0].pruned_steps > cycles[1].pruned_steps > 0
    assert cycles[0].answers >= cycles[1].answers
    assert (tmp_path / "plots" / "steps.png").exists()
    assert "Resultados Finais do Benchmark" in (tmp_path / "logs" / "PruningBenchmark.log").read_text(encoding="utf-8")


def test_threshold_text(properties):
    bench = PruningBenchmark(str(properties))
    assert bench.threshold_text(bench.thresholds[0]) == "0.3"
    bench.stop_engine()


def test_missing_key(tmp_path):
    path = tmp_path / "vazio.properties"
    path.write_text("bench.domain=u\n", encoding="utf-8")
    with pytest.raises(KeyError):
        PruningBenchmark(str(path))


def test_bench_command(properties):
    out = io.StringIO()
    assert main(["bench", str(properties)], out=out) == EXIT_OK
    lines = out.getvalue().splitlines()
    assert lines[0].startswith("threshold\tpruned_steps")
    assert lines[1].split("\t")[3] == "truncated"
    assert len(lines) == 3
