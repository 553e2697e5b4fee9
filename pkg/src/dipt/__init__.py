"""dipt: a simulation-based test-and-evaluation workbench for autonomous UAVs.

Infers a vehicle's internal behavior state and environmental perception from
externally observable telemetry only, compares the inferences against
simulator ground truth, and replays the comparison for a human tester.
"""

__version__ = "0.1.0"

from dipt._kernels import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]
