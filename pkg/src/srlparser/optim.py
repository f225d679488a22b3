"""Adam with global-norm gradient clipping and multiplicative LR decay."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autodiff import Parameter


@dataclass
class OptimizerConfig:
    lr0: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.9
    decay: float = 0.75
    clip: float = 5.0
    epsilon: float = 1e-8

    def validate(self) -> None:
        if min(self.lr0, self.decay, self.clip, self.epsilon) <= 0:
            raise ValueError("optimizer constants must be positive")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ValueError("beta1 and beta2 must lie in (0, 1)")


def clip_global_norm(params: list[Parameter], max_norm: float) -> float:
    """Scale all gradients so their joint L2 norm is at most `max_norm`.

    Returns the pre-clip norm.
    """
    total = 0.0
    for p in params:
        if p.grad is not None:
            total += float(np.sum(p.grad * p.grad))
    norm = float(np.sqrt(total))
    if norm > max_norm and norm > 0.0:
        factor = max_norm / norm
        for p in params:
            if p.grad is not None:
                p.tensor.grad *= factor
    return norm


class Adam:
    """Bias-corrected Adam over a fixed parameter list.

    The current learning rate starts at lr0; `decay_lr()` multiplies it
    by the configured decay factor (the training loop decides when).
    """

    def __init__(self, params: list[Parameter], config: OptimizerConfig | None = None):
        self.params = params
        self.config = config or OptimizerConfig()
        self.config.validate()
        self.lr = self.config.lr0
        self.t = 0

    def decay_lr(self) -> float:
        self.lr *= self.config.decay
        return self.lr

    def step(self) -> None:
        """Apply one update from the accumulated gradients (clip first)."""
        cfg = self.config
        clip_global_norm(self.params, cfg.clip)
        self.t += 1
        bias1 = 1.0 - cfg.beta1 ** self.t
        bias2 = 1.0 - cfg.beta2 ** self.t
        for p in self.params:
            g = p.grad if p.grad is not None else np.zeros_like(p.data)
            p.m *= cfg.beta1
            p.m += (1.0 - cfg.beta1) * g
            p.v *= cfg.beta2
            p.v += (1.0 - cfg.beta2) * (g * g)
            p.tensor.data -= self.lr * (p.m / bias1) / (np.sqrt(p.v / bias2) + cfg.epsilon)

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()
