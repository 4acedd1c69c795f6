"""Dynamic approximate Steiner trees over a fixed weighted graph."""

try:
    from . import _dynst as _impl  # wheel layout: extension inside the package
except ImportError:  # pragma: no cover - in-tree builds put it on sys.path
    import _dynst as _impl

DynstError = _impl.DynstError
Graph = _impl.Graph
Oracle = _impl.Oracle
Engine = _impl.Engine
Emulator = _impl.Emulator
EmulatorEngine = _impl.EmulatorEngine
build_oracle = _impl.build_oracle
build_emulator = _impl.build_emulator
generate_instance = _impl.generate_instance
query_steiner = _impl.query_steiner
run_scenario = _impl.run_scenario
verify_oracle = _impl.verify_oracle

__all__ = [
    "DynstError",
    "Emulator",
    "EmulatorEngine",
    "Engine",
    "Graph",
    "Oracle",
    "build_emulator",
    "build_oracle",
    "generate_instance",
    "query_steiner",
    "run_scenario",
    "verify_oracle",
]
