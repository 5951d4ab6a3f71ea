# Fill loops: exemplar (patch transfer) and Perona-Malik diffusion
from .diffusion_flow import DiffusionResult, pm_conductance, pm_inpaint, run_diffusion
from .exemplar_flow import (
    ExemplarFlow,
    FillRecord,
    FillState,
    InpaintReport,
    Snapshot,
    candidate_centers,
    confidence_term,
    data_term,
    front_priorities,
    inpaint,
    priority,
    search_best,
    select_target,
    target_frame,
    transfer,
)

__all__ = [
    "DiffusionResult",
    "ExemplarFlow",
    "FillRecord",
    "FillState",
    "InpaintReport",
    "Snapshot",
    "candidate_centers",
    "confidence_term",
    "data_term",
    "front_priorities",
    "inpaint",
    "pm_conductance",
    "pm_inpaint",
    "priority",
    "run_diffusion",
    "search_best",
    "select_target",
    "target_frame",
    "transfer",
]
