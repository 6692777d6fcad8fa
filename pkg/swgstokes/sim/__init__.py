from .run_config import ConfigError, CaseName, SystemMode, RunConfig
from .solve_task import Problem, make_problem, RunResult, solve_on_mesh, build_mesh, SolveTask
from .study_runner import StudyRunner
