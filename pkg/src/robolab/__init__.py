"""robolab: three interactive ML experiments on a robot device gateway.

Layers, bottom up:

* ``mlcore``   pure algorithms (KNN, least squares, tabular Q-learning)
* ``devices``  wire protocol + simulator / external robot backends
* ``sessions`` per-experiment state machines emitting ordered events
* ``service``  REST + WebSocket server with file-backed persistence
* ``cli``      serve / batch-train / scripted scenarios / csv utilities
"""

__version__ = "0.1.0"
