"""Symbol-level multiuser detection toolkit.

Conventions: a received block is an (m_rx, n_sym) complex ndarray (rows are
receive antennas, columns symbol periods), a channel matrix is (m_rx, k),
and a symbol block is (k, n_sym) with entries from a finite alphabet.
Alphabets are named ("bpsk", "qpsk") or given as an explicit 1-D array of
unit-power constellation points.

Blind separation solves min_{H,X} ||Y - HX||_F^2 with X constrained to the
alphabet.  Eliminating H gives an objective in X alone, which `exhaustive`
minimizes globally and `ilsp` attacks by alternating least squares with
per-step quantization from a deterministic bank of starting points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

_SQRT2 = math.sqrt(2.0)

ALPHABETS = {
    "bpsk": np.array([1.0, -1.0], dtype=complex),
    "qpsk": np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=complex) / _SQRT2,
}

EXHAUSTIVE_LIMIT = 1 << 20


class CapabilityExceededError(ValueError):
    """More detected sources than the receiver has sequences for."""


def resolve_alphabet(alphabet) -> tuple[np.ndarray, bool]:
    """(constellation points, all-real flag) for a name or explicit array."""
    if isinstance(alphabet, str):
        try:
            values = ALPHABETS[alphabet]
        except KeyError:
            raise ValueError(f"unknown alphabet {alphabet!r}") from None
    else:
        values = np.asarray(alphabet, dtype=complex).ravel()
        if values.size < 2:
            raise ValueError("alphabet needs at least two points")
    return values, bool(np.all(values.imag == 0))


def quantize(z: np.ndarray, alphabet="bpsk") -> np.ndarray:
    """Nearest constellation point, elementwise; ties resolve toward +1.

    For the two named alphabets the decision is the sign of the real (and
    for qpsk also the imaginary) part, with 0 mapping to +1.
    """
    z = np.asarray(z)
    if isinstance(alphabet, str) and alphabet == "bpsk":
        return np.where(z.real >= 0, 1.0, -1.0).astype(complex)
    if isinstance(alphabet, str) and alphabet == "qpsk":
        re = np.where(z.real >= 0, 1.0, -1.0)
        im = np.where(z.imag >= 0, 1.0, -1.0)
        return (re + 1j * im) / _SQRT2
    values, _ = resolve_alphabet(alphabet)
    dist = np.abs(z[..., None] - values)
    return values[np.argmin(dist, axis=-1)]


def random_channel(m_rx: int, k: int, rng) -> np.ndarray:
    """Channel with iid unit-variance circular complex Gaussian entries."""
    rng = np.random.default_rng(rng)
    return (rng.standard_normal((m_rx, k))
            + 1j * rng.standard_normal((m_rx, k))) / _SQRT2


def random_symbols(k: int, n_sym: int, alphabet="bpsk", rng=None) -> np.ndarray:
    """Uniform iid symbol block over the alphabet."""
    values, _ = resolve_alphabet(alphabet)
    rng = np.random.default_rng(rng)
    return values[rng.integers(0, values.size, size=(k, n_sym))]


def simulate_uplink(h: np.ndarray, x: np.ndarray, noise_var: float,
                    rng=None) -> np.ndarray:
    """Received block Y = HX + W, W circular complex Gaussian.

    Per-entry noise variance is noise_var; noise_var = 0 returns HX exactly.
    """
    h = np.asarray(h, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if h.ndim != 2 or x.ndim != 2 or h.shape[1] != x.shape[0]:
        raise ValueError("channel and symbol block are not conformable")
    if noise_var < 0:
        raise ValueError("noise_var must be >= 0")
    y = h @ x
    if noise_var > 0:
        rng = np.random.default_rng(rng)
        w = (rng.standard_normal(y.shape)
             + 1j * rng.standard_normal(y.shape)) * math.sqrt(noise_var / 2.0)
        y = y + w
    return y


def snr_to_noise_var(snr_db: float) -> float:
    """Per-entry noise variance for unit-power symbols at a given SNR."""
    return 10.0 ** (-snr_db / 10.0)


def zf_detect(y: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Soft estimates H^+ Y; requires full column rank."""
    y = np.asarray(y, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if h.shape[0] != y.shape[0]:
        raise ValueError("antenna dimensions disagree")
    if np.linalg.matrix_rank(h) < h.shape[1]:
        raise np.linalg.LinAlgError("channel matrix is rank deficient")
    return np.linalg.pinv(h) @ y


def mmse_detect(y: np.ndarray, h: np.ndarray, noise_var: float) -> np.ndarray:
    """Soft estimates (H^H H + eta I)^-1 H^H Y."""
    y = np.asarray(y, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if h.shape[0] != y.shape[0]:
        raise ValueError("antenna dimensions disagree")
    if noise_var <= 0:
        raise ValueError("noise_var must be > 0")
    k = h.shape[1]
    gram = h.conj().T @ h + noise_var * np.eye(k)
    return np.linalg.solve(gram, h.conj().T @ y)


@dataclass(frozen=True)
class SingularValuePolicy:
    """Accept singular values above max(eps_abs, ratio * sigma_1)."""

    eps_abs: float
    ratio: float = 0.1

    def __post_init__(self):
        if self.eps_abs < 0 or not 0 <= self.ratio < 1:
            raise ValueError("need eps_abs >= 0 and 0 <= ratio < 1")

    @staticmethod
    def noise_edge(noise_var: float, m_rx: int, n_sym: int,
                   margin: float = 2.0) -> "SingularValuePolicy":
        """Default rule: threshold at margin times the noise singular-value
        edge sqrt(eta) * (sqrt(m_rx) + sqrt(n_sym)), which the largest
        singular value of an iid noise block does not exceed w.h.p."""
        edge = math.sqrt(noise_var) * (math.sqrt(m_rx) + math.sqrt(n_sym))
        return SingularValuePolicy(margin * edge)

    @staticmethod
    def scaled(noise_var: float, n_sym: int,
               factor: float = 10.0) -> "SingularValuePolicy":
        """Simpler absolute rule factor * sqrt(eta * n_sym); looser at the
        operating points where m_rx is not small relative to n_sym."""
        return SingularValuePolicy(factor * math.sqrt(noise_var * n_sym))


def estimate_num_sources(y: np.ndarray, policy: SingularValuePolicy) -> int:
    """Number of singular values of Y the policy accepts."""
    s = np.linalg.svd(np.asarray(y, dtype=complex), compute_uv=False)
    threshold = max(policy.eps_abs, policy.ratio * float(s[0]))
    return int(np.sum(s > threshold))


@dataclass(frozen=True)
class DetectionReport:
    """Outcome of one blind separation.

    residual is ||Y - h_hat @ x_hat||_F^2 recomputed exactly from the
    reported factors.  ambiguity, when filled by the scoring helper, is the
    (row permutation, per-row alphabet-preserving factor) pair that maps
    x_hat onto a reference block.
    """

    k_hat: int
    h_hat: np.ndarray
    x_hat: np.ndarray
    residual: float
    method: str
    converged: bool
    iterations: int
    ambiguity: tuple | None = None


def ls_channel(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Least-squares channel Y X^H (X X^H)^-1 for a fixed symbol block."""
    g = x @ x.conj().T
    if abs(np.linalg.det(g)) < 1e-9:
        raise np.linalg.LinAlgError("symbol block is rank deficient")
    return y @ x.conj().T @ np.linalg.inv(g)


def residual_fro2(y: np.ndarray, h: np.ndarray, x: np.ndarray) -> float:
    return float(np.linalg.norm(y - h @ x) ** 2)


def _report(y, x, method, converged, iterations):
    x = np.asarray(x)
    h_hat = ls_channel(y, x)
    return DetectionReport(
        k_hat=x.shape[0], h_hat=h_hat, x_hat=x,
        residual=residual_fro2(y, h_hat, x),
        method=method, converged=converged, iterations=iterations)


# ---------------------------------------------------------------------------
# exhaustive search


def _exhaustive_bpsk_k2(y: np.ndarray):
    """All (2^n)^2 ordered BPSK row pairs at once.

    With rows u, v the eliminated-H objective depends only on ||Yu||^2,
    ||Yv||^2, u.v and u^T Y^H Y v, so one n x n Gram pass covers the whole
    search space.  Proportional pairs (|u.v| = n) are degenerate and skipped.
    """
    n = y.shape[1]
    count = 1 << n
    bits = (np.arange(count)[:, None] >> np.arange(n)[None, :]) & 1
    v = np.where(bits == 1, 1.0, -1.0)
    c = y.conj().T @ y
    q = v @ c @ v.T
    d = np.real(np.diag(q))
    gram = v @ v.T
    den = float(n) ** 2 - gram ** 2
    num = n * (d[:, None] + d[None, :]) - 2.0 * gram * np.real(q)
    with np.errstate(divide="ignore", invalid="ignore"):
        obj = np.where(np.abs(den) < 1e-9, np.inf, -num / den)
    i, j = np.unravel_index(int(np.argmin(obj)), obj.shape)
    if not np.isfinite(obj[i, j]):
        raise np.linalg.LinAlgError("every candidate pair is degenerate")
    return np.vstack([v[i], v[j]]).astype(complex), count * count


def _exhaustive_generic(y: np.ndarray, k: int, values: np.ndarray):
    """Chunked enumeration of all |alphabet|^(k * n) symbol blocks."""
    n = y.shape[1]
    base = values.size
    total = base ** (k * n)
    powers = base ** np.arange(k * n - 1, -1, -1, dtype=object)
    best_obj, best_x = np.inf, None
    chunk = 4096
    eye = np.eye(k)
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total))
        digits = (ids[:, None] // np.array(powers, dtype=float)).astype(np.int64) % base
        xb = values[digits].reshape(-1, k, n)
        gb = xb @ xb.conj().transpose(0, 2, 1)
        det = np.abs(np.linalg.det(gb))
        ok = det > 1e-9
        if not np.any(ok):
            continue
        gb_safe = np.where(ok[:, None, None], gb, eye)
        ab = y[None, :, :] @ xb.conj().transpose(0, 2, 1)
        z = np.linalg.solve(gb_safe, ab.conj().transpose(0, 2, 1))
        fit = np.real(np.einsum("bmk,bkm->b", ab, z))
        fit = np.where(ok, fit, -np.inf)
        best_in_chunk = int(np.argmax(fit))
        if -fit[best_in_chunk] < best_obj:
            best_obj = -fit[best_in_chunk]
            best_x = xb[best_in_chunk].copy()
    if best_x is None:
        raise np.linalg.LinAlgError("every candidate block is degenerate")
    return best_x, total


# ---------------------------------------------------------------------------
# iterative least squares with projection


def _ilsp_descent(y: np.ndarray, x0: np.ndarray, quant, max_iter: int):
    """Alternate H <- LS(Y, X), X <- quantize(H^+ Y) while the residual drops.

    Returns the best block seen, its eliminated-H residual, whether the loop
    stopped by convergence, and the iteration count.
    """
    x = x0
    best_res, best_x = np.inf, x0
    for it in range(1, max_iter + 1):
        g = x @ x.conj().T
        if abs(np.linalg.det(g)) < 1e-9:
            return best_x, best_res, False, it
        h = y @ x.conj().T @ np.linalg.inv(g)
        res = float(np.linalg.norm(y - h @ x) ** 2)
        if res >= best_res - 1e-15:
            return best_x, best_res, True, it
        best_res, best_x = res, x
        x = quant(np.linalg.pinv(h) @ y)
    return best_x, best_res, False, max_iter


def _probe_inits(y: np.ndarray, k: int, quant, complex_probes: bool):
    """Deterministic start bank: the quantized top-k SVD factor pseudo-inverse
    applied to Y, then the same block spun by fixed plane rotations of the
    signal subspace, which breaks the near-degenerate mixtures the plain
    start cannot separate."""
    u, s, _ = np.linalg.svd(y, full_matrices=False)
    base = np.diag(1.0 / s[:k]) @ u[:, :k].conj().T @ y
    inits = [quant(base)]
    thetas = (math.pi / 6, math.pi / 3)
    phis = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2) if complex_probes \
        else (0.0, math.pi)
    for i, j in itertools.combinations(range(k), 2):
        for th in thetas:
            for ph in phis:
                rot = np.eye(k, dtype=complex)
                cth, sth = math.cos(th), math.sin(th)
                rot[i, i] = cth
                rot[i, j] = sth * np.exp(1j * ph)
                rot[j, i] = -sth * np.exp(-1j * ph)
                rot[j, j] = cth
                inits.append(quant(rot @ base))
    return inits


def _ilsp(y: np.ndarray, k: int, values: np.ndarray, alphabet_real: bool,
          max_iter: int):
    """Multistart descent; real alphabets run on the stacked real model
    [Re Y; Im Y], whose least-squares objective is identical and whose
    X-updates use both quadrature components."""
    if alphabet_real:
        work = np.vstack([y.real, y.imag])
        complex_probes = False
    else:
        work = y
        complex_probes = True
    quant = lambda z: quantize(z, values)
    best = None
    for x0 in _probe_inits(work, k, quant, complex_probes):
        x, res, conv, it = _ilsp_descent(work, x0, quant, max_iter)
        if best is None or res < best[1]:
            best = (x, res, conv, it)
    return best


def blind_fa_detect(y: np.ndarray, k: int, alphabet="bpsk",
                    method: str = "ilsp", max_iter: int = 100) -> DetectionReport:
    """Blind finite-alphabet separation of k sources from a received block.

    method "exhaustive" returns the global minimizer (candidate count capped
    at 2^20); "ilsp" runs the deterministic multistart descent.  Recovery is
    inherently ambiguous up to row order and per-row alphabet-preserving
    factors; score with match_up_to_ambiguity.
    """
    y = np.asarray(y, dtype=complex)
    if y.ndim != 2:
        raise ValueError("received block must be a matrix")
    if not 1 <= k <= y.shape[0]:
        raise ValueError("need 1 <= k <= number of receive antennas")
    values, is_real = resolve_alphabet(alphabet)
    if method == "exhaustive":
        n = y.shape[1]
        if values.size ** (k * n) > EXHAUSTIVE_LIMIT:
            raise ValueError("exhaustive candidate count exceeds 2^20")
        if k == 2 and is_real and values.size == 2 \
                and set(np.real(values)) == {1.0, -1.0}:
            x_best, evaluated = _exhaustive_bpsk_k2(y)
        else:
            x_best, evaluated = _exhaustive_generic(y, k, values)
        if is_real:
            x_best = x_best.real.astype(complex)
        return _report(y, x_best, "exhaustive", True, evaluated)
    if method == "ilsp":
        x, _, conv, it = _ilsp(y, k, values, is_real, max_iter)
        report = _report(y, x.astype(complex), "ilsp", conv, it)
        return report
    raise ValueError(f"unknown method {method!r}")


def _alphabet_automorphisms(values: np.ndarray) -> list[complex]:
    """Unit factors c with c * alphabet = alphabet as a set."""
    out = []
    for cand in values / values[0]:
        rotated = cand * values
        if all(np.min(np.abs(rotated[i] - values)) < 1e-9
               for i in range(values.size)):
            out.append(complex(cand))
    return out


def match_up_to_ambiguity(x_hat: np.ndarray, x_ref: np.ndarray,
                          alphabet="bpsk", tol: float = 1e-6):
    """(row permutation, per-row factors) mapping x_hat onto x_ref, or None.

    perm[r] is the row of x_ref matched by factor[r] * x_hat[r].
    """
    x_hat = np.asarray(x_hat, dtype=complex)
    x_ref = np.asarray(x_ref, dtype=complex)
    if x_hat.shape != x_ref.shape:
        return None
    values, _ = resolve_alphabet(alphabet)
    autos = _alphabet_automorphisms(values)
    k = x_hat.shape[0]
    # rows that each estimate row can impersonate, with the factor used
    options = [[(j, c) for j in range(k) for c in autos
                if np.max(np.abs(c * x_hat[r] - x_ref[j])) < tol]
               for r in range(k)]
    for combo in itertools.product(*options):
        rows = [j for j, _ in combo]
        if len(set(rows)) == k:
            return tuple(rows), tuple(c for _, c in combo)
    return None


# ---------------------------------------------------------------------------
# training-based estimation


def _hadamard(p: int) -> np.ndarray:
    h = np.ones((1, 1))
    while h.shape[0] < p:
        h = np.block([[h, h], [h, -h]])
    return h


def allocate_training(k_hat: int, m: int) -> np.ndarray:
    """k_hat pairwise-orthogonal +/-1 training sequences from a pool of m.

    Sequence length is m rounded up to a power of two.  Asking for more
    sequences than the pool holds is the PHY-side analogue of a collision.
    """
    if k_hat < 1:
        raise ValueError("k_hat must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    if k_hat > m:
        raise CapabilityExceededError(f"{k_hat} sources exceed {m} sequences")
    p = 1 << max(0, (m - 1).bit_length())
    return _hadamard(p)[:k_hat]


def channel_estimate_training(y_preamble: np.ndarray, s: np.ndarray,
                              n_train: int) -> np.ndarray:
    """Least-squares channel estimate Y S^H / n_train.

    Exact under orthogonality (S S^H = n_train I, enforced); with noise the
    per-entry estimation error has variance noise_var / n_train.
    """
    y_preamble = np.asarray(y_preamble, dtype=complex)
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape[1] != n_train:
        raise ValueError("sequences must be rows of length n_train")
    if y_preamble.shape[1] != n_train:
        raise ValueError("preamble length disagrees with n_train")
    gram = s @ s.conj().T
    if not np.allclose(gram, n_train * np.eye(s.shape[0]), atol=1e-9):
        raise ValueError("training sequences are not orthogonal")
    return y_preamble @ s.conj().T / n_train
