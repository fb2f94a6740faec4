import os
import sys

from src.domain.utils import get_current_millis


class AbstractEngine:
    """
    Classe base para todos os componentes executáveis do motor (SldEngine,
    TranslatedEngine, PruningBenchmark).
    Cuida do arquivo de log do componente; a saída padrão fica reservada para
    a saída determinística dos comandos.
    """

    def __init__(self, engine_name: str, log_dir: str | None = None, verbose: bool = False):
        self.engine_name = engine_name
        self.log_dir = log_dir
        self.verbose = verbose

        self.is_running = True
        self.log_writer = None
        self._log_writer_closed = False

        if self.log_dir:
            self.init_log_file()

    def init_log_file(self):
        if not os.path.exists(self.log_dir):
            os.makedirs(self.log_dir)
        log_file_path = os.path.join(self.log_dir, f"{self.engine_name}.log")
        self.log_writer = open(log_file_path, "a", encoding='utf-8')
        self.log(f"Log iniciado para {self.engine_name}")

    def log(self, message: str):
        log_entry = f"[{get_current_millis()}] {message}\n"
        if self.verbose:
            sys.stderr.write(log_entry)

        if self.log_writer is not None:
            try:
                if not self.log_writer.closed and not self._log_writer_closed:
                    self.log_writer.write(log_entry)
                    self.log_writer.flush()
            except ValueError as e:
                sys.stderr.write(f"[{get_current_millis()}] ERRO ao escrever no arquivo de log para {self.engine_name}: {e} - Mensagem: {message}\n")

    def engine_parameters(self) -> dict:
        """
            Parâmetros efetivos do componente, exibidos no início da execução.

            Returns:
                dict: Nome do parâmetro -> valor.
        """
        return {}

    def print_engine_parameters(self):
        self.log("======================================")
        self.log(f"Parâmetros de {self.engine_name}:")
        for name, value in self.engine_parameters().items():
            self.log(f"{name}: {value}")
        self.log("======================================")

    def stop_engine(self):
        if self._log_writer_closed:
            return

        self.is_running = False
        self.log(f"[{self.engine_name}] Sinal de parada recebido.")

        if self.log_writer is not None:
            try:
                if not self.log_writer.closed:
                    self.log_writer.close()
            except OSError as e:
                sys.stderr.write(f"[{self.engine_name}] ERRO ao fechar log_writer: {e}\n")
            finally:
                self.log_writer = None
        self._log_writer_closed = True

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.stop_engine()
        return False

    def run(self, *args, **kwargs):
        """
        Método abstrato de execução. Cada subclasse fornece sua própria implementação.
        """
        raise NotImplementedError(f"Método 'run' deve ser implementado pela subclasse {self.__class__.__name__}.")
