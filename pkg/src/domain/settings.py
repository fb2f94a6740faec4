import os
from dataclasses import dataclass, replace

from src.domain.qualification_domain import DomainDescriptor, parse_domain_flag
from src.domain.resolution import SearchConfig
from src.domain.utils import parse_bool, parse_optional_int, read_properties_file

DEFAULT_CONFIG_PATH = os.path.join("config", "engine.properties")


@dataclass(frozen=True)
class EngineSettings:
    """
    Configuração efetiva de uma execução: padrões embutidos, depois o arquivo
    .properties, depois as opções da linha de comando (via `with_overrides`).
    """
    domain: DomainDescriptor = parse_domain_flag("u")
    select: str = "leftmost"
    max_depth: int | None = 10000
    max_steps: int | None = None
    max_answers: int | None = None
    pruning: bool = True
    oracle_depth: int = 6
    model_depth: int = 2
    model_iters: int = 10
    dialect: str = "generic"
    log_dir: str = "logs"
    log_enabled: bool = False
    log_verbose: bool = False

    @classmethod
    def from_properties(cls, path: str | None = None) -> "EngineSettings":
        """
            Lê as chaves `engine.*`, `oracle.*`, `model.*`, `translate.*` e `log.*`.

            Raises:
                FileNotFoundError: Se um caminho explícito não existir. O arquivo
                    padrão ausente apenas mantém os valores embutidos.
                ValueError: Se algum valor não puder ser convertido.
        """
        if path is None:
            if not os.path.exists(DEFAULT_CONFIG_PATH):
                return cls()
            path = DEFAULT_CONFIG_PATH
        props = read_properties_file(path)
        defaults = cls()

        def text(key: str, default: str) -> str:
            value = props.get(key, "").strip()
            return value or default

        max_depth = props.get("engine.maxDepth")
        return cls(
            domain=parse_domain_flag(text("engine.domain", str(defaults.domain))),
            select=text("engine.select", defaults.select),
            max_depth=parse_optional_int(max_depth) if max_depth is not None else defaults.max_depth,
            max_steps=parse_optional_int(props.get("engine.maxSteps")),
            max_answers=parse_optional_int(props.get("engine.maxAnswers")),
            pruning=parse_bool(props.get("engine.pruning"), defaults.pruning),
            oracle_depth=int(text("oracle.depth", str(defaults.oracle_depth))),
            model_depth=int(text("model.depth", str(defaults.model_depth))),
            model_iters=int(text("model.iters", str(defaults.model_iters))),
            dialect=text("translate.dialect", defaults.dialect),
            log_dir=text("log.dir", defaults.log_dir),
            log_enabled=parse_bool(props.get("log.enabled"), defaults.log_enabled),
            log_verbose=parse_bool(props.get("log.verbose"), defaults.log_verbose),
        )

    def with_overrides(self, **overrides) -> "EngineSettings":
        """Aplica opções da linha de comando; valores None são ignorados."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def search_config(self, trace: bool = False) -> SearchConfig:
        return SearchConfig(selection=self.select, max_depth=self.max_depth, max_steps=self.max_steps,
                            max_answers=self.max_answers, trace=trace, pruning=self.pruning)

    @property
    def effective_log_dir(self) -> str | None:
        return self.log_dir if self.log_enabled else None
