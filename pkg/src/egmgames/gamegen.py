"""Two-player quadratic games whose Jacobian has a prescribed cross spectrum.

Player 1 controls ``x`` (dimension ``d1``), player 2 controls ``y``
(dimension ``d2``). The joint vector field is ``v(w) = A w + b`` with

    A = [[S1,  M12],
         [M21, S2 ]],   M21 = -M12^T.

The construction picks orthogonal ``U`` (d1 x d1) and ``V`` (d2 x d2) and sets

    S1  = U diag(c', ..., c', r_1, ..., r_n) U^T
    S2  = V diag(c', ..., c') V^T
    M12 = U D V^T,  D[k, k] = b_k

In the basis ``(U_1, 0), (0, V_1), ..., (U_p, 0), (0, V_p), (U_{p+1}, 0), ...``
``A`` is block diagonal with 2x2 blocks ``[[c', b_k], [-b_k, c']]``
(eigenvalues ``c' +- b_k i``) followed by the scalars ``r_j``.
"""

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import as_vector, make_rng, random_orthogonal
from .spectrum import Spectrum, SpectrumModel, sample_cross

BLOCK_TOL = 1e-10
STATIONARITY_TOL = 1e-10


@dataclass(frozen=True)
class BlockSpec:
    kind: str  # "rotation" or "scalar"
    a: float
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("rotation", "scalar"):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.a <= 0:
            raise ValueError("block diagonal value must be positive")

    @classmethod
    def rotation(cls, a, b):
        return cls("rotation", a, b)

    @classmethod
    def scalar(cls, r):
        return cls("scalar", r)

    @property
    def size(self):
        return 2 if self.kind == "rotation" else 1

    def matrix(self):
        if self.kind == "rotation":
            return np.array([[self.a, self.b], [-self.b, self.a]])
        return np.array([[self.a]])


@dataclass(frozen=True, eq=False)
class QuadraticGame:
    A: np.ndarray
    b: np.ndarray
    w_star: np.ndarray
    d1: int
    d2: int
    S1: np.ndarray
    S2: np.ndarray
    M12: np.ndarray
    M21: np.ndarray
    declared: Optional[Spectrum] = None
    basis: Optional[np.ndarray] = None
    blocks: tuple = ()
    seed: Optional[int] = None
    model: Optional[SpectrumModel] = field(default=None)

    @property
    def dim(self):
        return self.A.shape[0]

    @classmethod
    def from_matrix(cls, A, w_star, d1=None, b=None, declared=None, **kwargs):
        """Build a game around an arbitrary square ``A``.

        The partition blocks are read off ``A``; ``b`` defaults to
        ``-A @ w_star`` so that ``w_star`` is stationary.
        """
        A = np.array(A, dtype=float, ndmin=2)
        w_star = np.array(w_star, dtype=float, ndmin=1)
        d = A.shape[0]
        if A.shape != (d, d) or w_star.shape != (d,):
            raise ValueError(f"incompatible shapes A={A.shape}, w_star={w_star.shape}")
        d1 = d if d1 is None else int(d1)
        if b is None:
            b = -(A @ w_star)
        b = np.array(b, dtype=float)
        if b.shape != (d,):
            raise ValueError(f"b must have length {d}")
        return cls(
            A=A, b=b, w_star=w_star, d1=d1, d2=d - d1,
            S1=A[:d1, :d1], S2=A[d1:, d1:], M12=A[:d1, d1:], M21=A[d1:, :d1],
            declared=declared, **kwargs,
        )


def build_cross_game(model, n_real, n_pairs, rng=None, seed=0, b_zero=False):
    """Random quadratic game with ``Sp(A) = sample_cross(model, n_real, n_pairs)``.

    ``rng`` defaults to ``make_rng(seed)``. With ``b_zero=True`` both ``b``
    and ``w_star`` are zero.
    """
    declared = sample_cross(model, n_real, n_pairs)
    if rng is None:
        rng = make_rng(seed)
    p = n_pairs
    d2 = p
    d1 = n_real + p
    d = d1 + d2
    ev = declared.eigenvalues
    reals = ev[:n_real].real
    bs = ev[n_real::2].imag

    U = random_orthogonal(d1, rng)
    V = random_orthogonal(d2, rng)

    s1_diag = np.concatenate([np.full(p, model.c_prime), reals])
    S1 = (U * s1_diag) @ U.T
    S1 = (S1 + S1.T) / 2
    S2 = (V * model.c_prime) @ V.T
    S2 = (S2 + S2.T) / 2
    D = np.zeros((d1, d2))
    D[np.arange(p), np.arange(p)] = bs
    M12 = U @ D @ V.T
    M21 = -M12.T

    A = np.block([[S1, M12], [M21, S2]])

    W = np.zeros((d, d))
    for k in range(p):
        W[:d1, 2 * k] = U[:, k]
        W[d1:, 2 * k + 1] = V[:, k]
    for j in range(n_real):
        W[:d1, 2 * p + j] = U[:, p + j]
    blocks = tuple(BlockSpec.rotation(model.c_prime, bk) for bk in bs) + tuple(
        BlockSpec.scalar(r) for r in reals
    )

    if b_zero:
        w_star = np.zeros(d)
        b = np.zeros(d)
    else:
        w_star = rng.standard_normal(d)
        b = -(A @ w_star)

    for arr in (A, b, w_star, S1, S2, M12, M21, W):
        arr.setflags(write=False)
    return QuadraticGame(
        A=A, b=b, w_star=w_star, d1=d1, d2=d2, S1=S1, S2=S2, M12=M12, M21=M21,
        declared=declared, basis=W, blocks=blocks, seed=seed, model=model,
    )


def eval_vector_field(game, w):
    w = as_vector(w, "w")
    if w.shape[0] != game.dim:
        raise ValueError(f"dimension mismatch: game has dim {game.dim}, w has {w.shape[0]}")
    return game.A @ w + game.b


@dataclass
class VerificationReport:
    block_ok: Optional[bool]  # None when the game carries no basis
    block_residual: float
    symmetry_ok: bool
    antisymmetry_ok: bool
    partition_ok: bool
    positive_definite_ok: bool
    stationarity_ok: bool
    stationarity_residual: float

    @property
    def ok(self):
        return (
            self.block_ok is not False
            and self.symmetry_ok
            and self.antisymmetry_ok
            and self.partition_ok
            and self.positive_definite_ok
            and self.stationarity_ok
        )

    def failures(self):
        names = ("block_ok", "symmetry_ok", "antisymmetry_ok", "partition_ok",
                 "positive_definite_ok", "stationarity_ok")
        return [n for n in names if getattr(self, n) is False]


def verify_game(game):
    """Check the structural claims a generated game makes about itself."""
    A = game.A
    block_ok, block_res = None, float("nan")
    if game.basis is not None and game.blocks:
        block_res = 0.0
        col = 0
        for blk in game.blocks:
            Wj = game.basis[:, col:col + blk.size]
            res = np.max(np.abs(A @ Wj - Wj @ blk.matrix()))
            block_res = max(block_res, float(res))
            col += blk.size
        block_ok = block_res <= BLOCK_TOL and col == game.dim

    symmetry_ok = bool(np.array_equal(game.S1, game.S1.T) and np.array_equal(game.S2, game.S2.T))
    antisymmetry_ok = bool(np.array_equal(game.M12, -game.M21.T))
    d1 = game.d1
    partition_ok = bool(
        np.array_equal(A[:d1, :d1], game.S1)
        and np.array_equal(A[:d1, d1:], game.M12)
        and np.array_equal(A[d1:, :d1], game.M21)
        and np.array_equal(A[d1:, d1:], game.S2)
    )

    if game.blocks:
        # every diagonal value placed in S1 / S2 is a block's ``a``
        pd_ok = all(blk.a > 0 for blk in game.blocks)
    else:
        pd_ok = bool(
            (game.S1.size == 0 or np.all(np.linalg.eigvalsh(game.S1) > 0))
            and (game.S2.size == 0 or np.all(np.linalg.eigvalsh(game.S2) > 0))
        )

    resid = float(np.max(np.abs(A @ game.w_star + game.b)))
    scale = float(np.max(np.abs(A))) * float(np.linalg.norm(game.w_star))
    stationarity_ok = resid <= STATIONARITY_TOL * scale

    return VerificationReport(
        block_ok=block_ok,
        block_residual=block_res,
        symmetry_ok=symmetry_ok,
        antisymmetry_ok=antisymmetry_ok,
        partition_ok=partition_ok,
        positive_definite_ok=pd_ok,
        stationarity_ok=stationarity_ok,
        stationarity_residual=resid,
    )


# -- game file ---------------------------------------------------------------

def _num(x):
    return format(float(x), ".17g")


def _vec(x):
    return "[" + ", ".join(_num(v) for v in x) + "]"


def dumps_game(game):
    """Serialize to the JSON game-file format (17 significant digits)."""
    m = game.model
    if m is None:
        raise ValueError("only games built from a SpectrumModel can be serialized")
    ev = game.declared.eigenvalues if game.declared is not None else np.empty(0, complex)
    lines = [
        "{",
        f'  "dim": {game.dim},',
        f'  "d1": {game.d1},',
        f'  "d2": {game.d2},',
        f'  "mu": {_num(m.mu)},',
        f'  "L": {_num(m.L)},',
        f'  "c": {_num(m.c)},',
        f'  "c_prime": {_num(m.c_prime)},',
        f'  "seed": {json.dumps(game.seed)},',
        '  "A": [',
        ",\n".join("    " + _vec(row) for row in game.A),
        "  ],",
        f'  "b": {_vec(game.b)},',
        f'  "w_star": {_vec(game.w_star)},',
        '  "eigenvalues": ['
        + ", ".join(f'{{"re": {_num(z.real)}, "im": {_num(z.imag)}}}' for z in ev)
        + "]",
        "}",
    ]
    return "\n".join(lines) + "\n"


def loads_game(text):
    obj = json.loads(text)
    missing = {"dim", "d1", "d2", "mu", "L", "c", "c_prime", "seed", "A", "b",
               "w_star", "eigenvalues"} - obj.keys()
    if missing:
        raise ValueError(f"game file is missing keys: {sorted(missing)}")
    A = np.array(obj["A"], dtype=float)
    dim = int(obj["dim"])
    if A.shape != (dim, dim):
        raise ValueError(f"A has shape {A.shape}, expected ({dim}, {dim})")
    if int(obj["d1"]) + int(obj["d2"]) != dim:
        raise ValueError("d1 + d2 must equal dim")
    ev = [complex(e["re"], e["im"]) for e in obj["eigenvalues"]]
    model = SpectrumModel(obj["mu"], obj["L"], obj["c"], obj["c_prime"])
    return QuadraticGame.from_matrix(
        A, obj["w_star"], d1=obj["d1"], b=obj["b"],
        declared=Spectrum(ev) if ev else None, seed=obj["seed"], model=model,
    )


def save_game(game, path):
    with open(path, "w") as f:
        f.write(dumps_game(game))


def load_game(path):
    with open(path) as f:
        return loads_game(f.read())
