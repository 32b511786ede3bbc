"""ARC solving with chat-LLM expert agents.

The pieces, bottom up: task loading and grid encodings (taskmodel), the
primitive grid/object function library (gridops, objects), the text
abstraction views and context budget filter (views), a sandboxed
interpreter for model-written transform programs (translang), prompt
assembly and reply parsing (prompting), chat backends with record/replay
(gateway), the sampling and feedback orchestration loop (orchestrator)
and run reporting (reporting).
"""

from .taskmodel import (
    Grid,
    CharGrid,
    MalformedTask,
    Task,
    TestPair,
    TrainPair,
    UnknownSymbol,
    chars_to_grid,
    grid_to_chars,
    load_task,
    load_task_dir,
    load_task_file,
)
from .gridops import (
    ArcObject,
    Coord,
    GridOpError,
    change_object_color,
    combine_object,
    crop_grid,
    empty_grid,
    fill_between_coords,
    fill_col,
    fill_object,
    fill_rect,
    fill_row,
    fill_value,
    get_object_color,
    get_size,
    horizontal_flip,
    object_contains_color,
    on_same_line,
    replace,
    rotate_clockwise,
    tight_fit,
    vertical_flip,
)
from .objects import (
    ObjectViewConfig,
    all_object_view_configs,
    get_objects,
    get_objects_by_config,
    get_pixel_coords,
)
from .views import (
    AgentConfig,
    ViewBundle,
    build_view_bundle,
    eligible_agents,
    estimate_tokens,
    render_grid_view,
    render_object_view,
    render_pixel_view,
    standard_agent_configs,
    task_is_eligible,
)
from .translang import (
    ExecError,
    ExecLimits,
    Program,
    execute_program,
    parse_program,
    run_program,
)
from .prompting import (
    BudgetExceeded,
    CotResponse,
    FeedbackState,
    PromptBundle,
    ResponseUnparseable,
    build_prompt_bundle,
    build_system_prompt,
    build_user_prompt,
    parse_cot_response,
)
from .gateway import (
    Cassette,
    CassetteMiss,
    ChatParams,
    Gateway,
    LiveBackend,
    ReplayBackend,
    ScriptedBackend,
    TransportError,
)
from .orchestrator import (
    AttemptRecord,
    Candidate,
    RunConfig,
    TaskResult,
    enumerate_agents,
    evaluate_candidate,
    evaluate_chain,
    run_sample,
    run_task,
)
from .reporting import RunSummary, UnknownFormat, render_report, summarize_run

__version__ = "0.1.0"
