"""Skip-gram-with-negative-sampling primitives.

One (center, context) sample with k negatives has loss

    L = -log sigma(u_o . v_c) - sum_i log sigma(-u_i . v_c)

where v_c is the center (or document) vector, u_o the context word's
output vector and u_i the negatives' output vectors.  Both the word2vec
and the PV-DBOW trainers reduce to this objective; PV-DBOW substitutes
the document vector for v_c.

``sgns_loss``/``sgns_grads`` implement the per-sample math exactly and
are what the finite-difference checks exercise.  Training applies the
same gradients batched per center position: all contexts of one center
and their negatives form a single step, evaluated at the pre-update
parameters and then applied at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _log_sigmoid(x):
    # log sigma(x) = -log(1 + exp(-x)), stable for large |x|
    return -np.logaddexp(0.0, -x)


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def sgns_loss(center: np.ndarray, context_out: np.ndarray, neg_out: np.ndarray) -> float:
    """Loss of one sample; ``neg_out`` has shape (k, d)."""
    pos = float(_log_sigmoid(np.dot(context_out, center)))
    neg = float(np.sum(_log_sigmoid(-(neg_out @ center))))
    return -(pos + neg)


def sgns_grads(center: np.ndarray, context_out: np.ndarray, neg_out: np.ndarray):
    """Analytic gradients of sgns_loss w.r.t. (center, context_out, neg_out)."""
    s_pos = sigmoid(np.dot(context_out, center))
    s_neg = sigmoid(neg_out @ center)  # (k,)
    g_center = -(1.0 - s_pos) * context_out + neg_out.T @ s_neg
    g_context = -(1.0 - s_pos) * center
    g_neg = np.outer(s_neg, center)
    return g_center, g_context, g_neg


@dataclass
class NegativeSampler:
    """Unigram^{3/4} sampler over vocabulary indices."""

    cumulative: np.ndarray

    @classmethod
    def from_frequencies(cls, corpus_freq, power: float = 0.75) -> "NegativeSampler":
        w = np.asarray(corpus_freq, dtype=np.float64) ** power
        c = np.cumsum(w)
        return cls(cumulative=c / c[-1])

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        return np.searchsorted(self.cumulative, rng.random(shape), side="right")


def center_step(
    center_vec: np.ndarray,
    out_matrix: np.ndarray,
    contexts: np.ndarray,
    negatives: np.ndarray,
    lr: float,
    update_out: bool = True,
) -> float:
    """One SGD step for a single center position, batched over its contexts.

    ``contexts`` holds the m positive output indices, ``negatives`` is
    (m, k) drawn from the unigram^{3/4} table; negatives that collide
    with their own positive are dropped (the slot is skipped, as in the
    reference word2vec implementation).  Gradients are evaluated at the
    pre-update parameters, then applied to ``center_vec`` (in place) and
    to the touched rows of ``out_matrix`` (duplicates accumulate).

    Returns the summed sample loss at the pre-update parameters.
    """
    m, k = negatives.shape
    keep = negatives != contexts[:, None]
    flat_neg = negatives[keep]
    targets = np.concatenate([contexts, flat_neg])
    labels = np.concatenate([np.ones(m), np.zeros(flat_neg.shape[0])])

    rows = out_matrix[targets]
    scores = rows @ center_vec
    p = sigmoid(scores)
    # loss: positives -log sigma(s), negatives -log sigma(-s)
    loss = float(-np.sum(labels * _log_sigmoid(scores) + (1.0 - labels) * _log_sigmoid(-scores)))

    g = (p - labels).astype(out_matrix.dtype)
    g_center = rows.T @ g
    if update_out:
        np.add.at(out_matrix, targets, np.outer(-lr * g, center_vec))
    center_vec -= (lr * g_center).astype(center_vec.dtype)
    return loss
