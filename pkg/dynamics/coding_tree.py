"""
Geometric coding trees.

Level 1 joins the root z to each of its d preimages by a curve; level n+1
curves are f-lifts of level n curves. For a word w = (a_0, ..., a_n) the
curve gamma(w) is the lift of gamma(w[1:]) that starts at the end of
gamma(w[:-1]), so that f(z_{n+1}(w)) = z_n(w[1:]).

Words are stored by index sum(a_k * d**k); the suffix w[1:] is index // d
and the prefix w[:-1] is index % d**n.
"""
import itertools

import numpy as np

from algebra.extended import is_inf
from algebra.polynomial import Polynomial, as_rational, apply
from algebra.roots import critical_points, poly_roots
from errors import BudgetExceeded, CriticalValueHit, NoConvergence

import common as com

CURVE_SAMPLES = 16
SUBSTEPS = 8
NEWTON_STEPS = 8
CRITICAL_VALUE_TOL = 1e-6
DEFAULT_BUDGET = 100000


def _values(f, w):
    """
    f(w) and f'(w) for an array of finite points.
    """
    if isinstance(f, Polynomial):
        return f.eval_with_derivative(w)
    g = as_rational(f)
    n, dn = g.numerator.eval_with_derivative(w)
    d, dd = g.denominator.eval_with_derivative(w)
    return n / d, (dn * d - n * dd) / (d * d)


def finite_critical_values(f):
    values = [apply(f, c) for c in critical_points(f) if not is_inf(c)]
    return np.array([v for v in values if not is_inf(v)], dtype=np.complex128)


def _preimages(f, z):
    g = as_rational(f)
    equation = g.numerator - g.denominator * z
    return poly_roots(equation)


def _check_clear(points, critical_values, scale):
    if critical_values.size == 0:
        return
    gap = np.min(np.abs(points.reshape(-1)[:, None] - critical_values[None, :]))
    if gap < CRITICAL_VALUE_TOL * scale:
        raise CriticalValueHit(f"curve passes within {gap:.3e} of a critical value")


def _base_curve(start, end, critical_values):
    """
    segment start -> end, bent at its midpoint when it passes near a critical value.
    """
    t = np.linspace(0.0, 1.0, CURVE_SAMPLES + 1)
    length = abs(end - start)
    if length == 0:
        return np.full(CURVE_SAMPLES + 1, start, dtype=np.complex128)
    straight = start + t * (end - start)
    scale = max(1.0, abs(start), abs(end))
    near = critical_values.size and np.min(np.abs(straight[:, None] - critical_values[None, :])) < 0.05 * length
    if not near:
        return straight
    direction = (end - start) / length
    apex = 0.5 * (start + end) + 0.25 * length * 1j * direction
    half = CURVE_SAMPLES // 2
    first = start + np.linspace(0.0, 1.0, half + 1) * (apex - start)
    second = apex + np.linspace(0.0, 1.0, CURVE_SAMPLES - half + 1)[1:] * (end - apex)
    curve = np.concatenate([first, second])
    _check_clear(curve, critical_values, scale)
    return curve


def lift_curves(f, parents, starts):
    """
    lift every row of parents through f, starting at the matching entry of starts.

    parents : numpy.array( complex, (M, K+1) ), curves with parents[:, 0] = f(starts)
    starts : numpy.array( complex, (M,) )

    return : numpy.array( complex, (M, K+1) )
    """
    M, K1 = parents.shape
    lifted = np.empty_like(parents)
    w = starts.astype(np.complex128).copy()
    lifted[:, 0] = w
    for k in range(1, K1):
        a, b = parents[:, k - 1], parents[:, k]
        for s in range(1, SUBSTEPS + 1):
            target = a + (b - a) * (s / SUBSTEPS)
            for _ in range(NEWTON_STEPS):
                value, deriv = _values(f, w)
                if np.any(np.abs(deriv) < 1e-12 * np.maximum(1.0, np.abs(w))):
                    raise CriticalValueHit("lift passes through a critical point")
                w = w - (value - target) / deriv
        value, _ = _values(f, w)
        residual = np.abs(value - b)
        if not np.all(np.isfinite(w)) or np.any(residual > 1e-10 * np.maximum(1.0, np.abs(b))):
            raise NoConvergence("curve lift", NEWTON_STEPS)
        lifted[:, k] = w
    return lifted


class CodingTree:
    """
    root : complex
    preimage_count : int, d
    depth : int
    curves : list of numpy.array( complex, (d**n, K+1) ), curves[0] holds the root
    """

    def __init__(self, f, root, curves):
        self.f = f
        self.root = complex(root)
        self.preimage_count = f.degree
        self.curves = curves
        self._cache = {}

    @property
    def depth(self):
        return len(self.curves) - 1

    def level(self, n):
        """
        vertices of level n as an array indexed by word index.
        """
        return self.curves[n][:, -1]

    def word_index(self, word):
        d = self.preimage_count
        return sum(int(a) * d ** k for k, a in enumerate(word))

    def vertex(self, word):
        return complex(self.level(len(word))[self.word_index(word)])

    @property
    def vertices(self):
        d = self.preimage_count
        result = []
        for n in range(self.depth + 1):
            level = self.level(n)
            words = (tuple(reversed(w)) for w in itertools.product(range(d), repeat=n))
            result.append({w: complex(level[self.word_index(w)]) for w in words})
        return result

    def curve(self, word):
        """
        gamma(word), lifted lazily beyond the stored depth.
        """
        word = tuple(int(a) for a in word)
        n = len(word)
        if n <= self.depth:
            return self.curves[n][self.word_index(word)]
        if word in self._cache:
            return self._cache[word]
        parent = self.curve(word[1:])
        start = self.curve(word[:-1])[-1]
        lifted = lift_curves(self.f, parent[None, :], np.array([start]))[0]
        self._cache[word] = lifted
        return lifted

    def shift_residual(self):
        """
        max |f(z_{n+1}(w)) - z_n(w[1:])| over the stored levels.
        """
        d = self.preimage_count
        worst = 0.0
        for n in range(self.depth):
            child = self.level(n + 1)
            parent = self.level(n)
            image, _ = _values(self.f, child)
            expected = parent[np.arange(child.size) // d]
            scale = np.maximum(1.0, np.abs(expected))
            worst = max(worst, float(np.max(np.abs(image - expected) / scale)))
        return worst


def build_coding_tree(f, z, depth, sample_budget=DEFAULT_BUDGET):
    """
    all preimage vertices of z up to the given depth.

    f : Polynomial or RationalMap of degree d >= 2
    z : complex, not a critical value
    sample_budget : int
        bound on depth * d**depth

    return : CodingTree
    """
    d = f.degree
    if d < 2:
        raise ValueError("coding trees need degree >= 2")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth * d ** depth > sample_budget:
        raise BudgetExceeded(f"depth {depth} needs {depth * d ** depth} vertices, budget is {sample_budget}")
    z = complex(z)
    critical_values = finite_critical_values(f)
    scale = max(1.0, abs(z))
    _check_clear(np.array([z]), critical_values, scale)
    preimages = _preimages(f, z)
    if len(set(np.round(preimages, 10))) < d:
        raise CriticalValueHit(f"{z} has fewer than {d} distinct preimages")
    # label 0 is the nearest preimage
    order = sorted(range(d), key=lambda k: (round(abs(preimages[k] - z), 12), np.angle(preimages[k] - z)))
    preimages = preimages[order]
    curves = [np.full((1, CURVE_SAMPLES + 1), z, dtype=np.complex128)]
    if depth >= 1:
        curves.append(np.array([_base_curve(z, p, critical_values) for p in preimages]))
    for n in range(1, depth):
        count = d ** (n + 1)
        index = np.arange(count)
        parents = curves[n][index // d]
        starts = curves[n][index % d ** n, -1]
        _check_clear(parents, critical_values, scale)
        curves.append(lift_curves(f, parents, starts))
        com.logger.debug(f"coding tree level {n + 1}: {count} vertices")
    return CodingTree(f, z, curves)


def _word_prefix(word, depth):
    if isinstance(word, str):
        symbols = itertools.cycle(word) if word else itertools.repeat("0")
    else:
        symbols = iter(word)
    return tuple(int(a) for a in itertools.islice(symbols, depth))


def branch_limit(tree, word, depth, tolerance=1e-6):
    """
    z_depth along one branch of the tree.

    word : str repeated periodically (e.g. "01") or an iterable of symbols
    tolerance : float
        converged when the last quarter of z_1 .. z_depth has diameter below it

    return : (point, converged, tail_diameter)
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    prefix = _word_prefix(word, depth)
    if len(prefix) < depth:
        raise ValueError("word is shorter than the requested depth")
    sequence = np.array([tree.curve(prefix[:n])[-1] for n in range(1, depth + 1)])
    tail = sequence[-max(2, depth // 4):]
    diameter = float(np.max(np.abs(tail[:, None] - tail[None, :])))
    return complex(sequence[-1]), diameter < tolerance, diameter


def inverse_iteration_cloud(f, root, depth, sample_budget):
    """
    leaves of the coding tree at the deepest level the budget allows.
    """
    d = f.degree
    level = depth
    while level > 0 and level * d ** level > sample_budget:
        level -= 1
    if level < depth:
        com.logger.info(f"inverse iteration: depth {depth} reduced to {level} for budget {sample_budget}")
    tree = build_coding_tree(f, root, level, sample_budget=sample_budget)
    return tree.level(level)[:sample_budget]
