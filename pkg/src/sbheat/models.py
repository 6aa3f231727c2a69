"""Restricted-root models of compact symmetric spaces and propagation between them.

A model carries only the root/weight shadow of ``M = U/K``: the positive
restricted roots with multiplicities, a Gram matrix on the coordinate space,
``rho``, the class-1 fundamental weights and the Σ_{1/2} / Σ_2 subsystems.
Everything is exact (``fractions.Fraction``).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ConfigurationError

Vector = tuple[Fraction, ...]


def _vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def _add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def _scale(c, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def _solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector:
    """Exact Gauss-Jordan solve of a square nonsingular system."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ConfigurationError("simple roots do not span the coordinate space")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(row[n] for row in aug)


def _is_positive_definite(gram: Sequence[Sequence[Fraction]]) -> bool:
    # symmetric elimination without pivoting: PD iff every pivot is > 0
    a = [list(row) for row in gram]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


@dataclass(frozen=True)
class RestrictedRoot:
    coords: Vector
    multiplicity: int

    def __post_init__(self):
        object.__setattr__(self, "coords", _vec(self.coords))
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise ConfigurationError(f"root multiplicity must be a positive integer, got {self.multiplicity}")
        if all(c == 0 for c in self.coords):
            raise ConfigurationError("restricted root coordinates must be nonzero")


class Family(enum.Enum):
    SPHERE = "sphere"
    GROUP_SU = "group_su"
    GENERIC = "generic"
    PRODUCT = "product"


@dataclass(frozen=True, eq=False)
class SymmetricSpaceModel:
    """Immutable root data for one compact symmetric space (or a product of them).

    ``simple_roots`` lists indices into ``positive_roots`` of the Σ_2 simple
    roots in their canonical order; ``fundamental_weights[j]`` is dual to
    ``simple_roots[j]``. ``lines`` tags each simple root with the classical
    family line of the irreducible factor it belongs to.
    """

    family: Family
    params: tuple
    rank: int
    positive_roots: tuple[RestrictedRoot, ...]
    gram: tuple[Vector, ...]
    rho: Vector
    fundamental_weights: tuple[Vector, ...]
    simple_roots: tuple[int, ...]
    sigma_half: tuple[int, ...]
    sigma_two: tuple[int, ...]
    dim_spec: tuple
    lines: tuple[str, ...]
    factors: tuple["SymmetricSpaceModel", ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        r = self.rank
        if r < 1 or len(self.gram) != r or any(len(row) != r for row in self.gram):
            raise ConfigurationError("gram must be a rank x rank matrix")
        for i in range(r):
            for j in range(r):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ConfigurationError("gram must be symmetric")
        if not _is_positive_definite(self.gram):
            raise ConfigurationError("gram must be positive definite")
        for root in self.positive_roots:
            if len(root.coords) != r:
                raise ConfigurationError("root length differs from rank")
        if self.rho != half_sum(self.positive_roots, r):
            raise ConfigurationError("rho is not half the multiplicity-weighted sum of positive roots")
        if len(self.simple_roots) != r or len(self.fundamental_weights) != r:
            raise ConfigurationError("expected one simple root and one fundamental weight per rank")
        for j, xi in enumerate(self.fundamental_weights):
            for i, idx in enumerate(self.simple_roots):
                a = self.positive_roots[idx].coords
                if inner(self, xi, a) / inner(self, a, a) != (1 if i == j else 0):
                    raise ConfigurationError("fundamental weights are not dual to the Σ_2 simple roots")

    # identity is structural; the cache is ignored
    def _key(self):
        return (self.family, self.params, self.gram, tuple((r.coords, r.multiplicity) for r in self.positive_roots))

    def __eq__(self, other):
        return isinstance(other, SymmetricSpaceModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def name(self) -> str:
        if self.family is Family.SPHERE:
            return f"S^{self.params[0][1]}"
        if self.family is Family.GROUP_SU:
            return f"SU({self.params[0][1]})"
        if self.family is Family.PRODUCT:
            return " x ".join(f.name for f in self.factors)
        label = dict(self.params).get("label")
        return label or f"generic(rank {self.rank})"

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    def root(self, i: int) -> Vector:
        return self.positive_roots[i].coords

    def __repr__(self):
        return f"SymmetricSpaceModel({self.name})"


def half_sum(roots: Sequence[RestrictedRoot], rank: int) -> Vector:
    total = tuple(Fraction(0) for _ in range(rank))
    for root in roots:
        total = _add(total, _scale(root.multiplicity, root.coords))
    return _scale(Fraction(1, 2), total)


def inner(model: SymmetricSpaceModel, lam: Sequence, mu: Sequence) -> Fraction:
    """Return ``lam^T gram mu`` exactly."""
    r = model.rank
    if len(lam) != r or len(mu) != r:
        raise ValueError(f"vectors must have length {r} (got {len(lam)} and {len(mu)})")
    lam = _vec(lam)
    mu = _vec(mu)
    g = model.gram
    return sum((lam[i] * g[i][j] * mu[j] for i in range(r) for j in range(r)), Fraction(0))


def _subsystems(roots: Sequence[RestrictedRoot]):
    coords = {r.coords for r in roots}
    half = tuple(i for i, r in enumerate(roots) if _scale(Fraction(1, 2), r.coords) not in coords)
    two = tuple(i for i, r in enumerate(roots) if _scale(2, r.coords) not in coords)
    return half, two


def _simple_indices(roots: Sequence[RestrictedRoot], subset: Sequence[int]) -> tuple[int, ...]:
    coords = {roots[i].coords: i for i in subset}
    simple = []
    for i in subset:
        a = roots[i].coords
        if not any(tuple(x - y for x, y in zip(a, roots[j].coords)) in coords for j in subset if j != i):
            simple.append(i)
    return tuple(simple)


def _assemble(family, params, roots, gram, dim_spec, lines, factors=(), order=None) -> SymmetricSpaceModel:
    roots = tuple(roots)
    gram = tuple(_vec(row) for row in gram)
    rank = len(gram)
    half, two = _subsystems(roots)
    simple = _simple_indices(roots, two)
    if order is not None:
        simple = tuple(order)
    if len(simple) != rank:
        raise ConfigurationError(f"Σ_2 has {len(simple)} simple roots but rank is {rank}")
    # xi_j: <xi_j, a_i> = delta_ij <a_i, a_i>
    rows = []
    for idx in simple:
        a = roots[idx].coords
        rows.append([sum(a[k] * gram[k][j] for k in range(rank)) for j in range(rank)])
    norms = [sum(row[k] * roots[idx].coords[k] for k in range(rank)) for row, idx in zip(rows, simple)]
    xis = tuple(
        _solve(rows, [norms[i] if i == j else Fraction(0) for i in range(rank)]) for j in range(rank)
    )
    if len(lines) == 1 and rank > 1:
        lines = tuple(lines) * rank
    return SymmetricSpaceModel(
        family=family,
        params=tuple(params),
        rank=rank,
        positive_roots=roots,
        gram=gram,
        rho=half_sum(roots, rank),
        fundamental_weights=xis,
        simple_roots=simple,
        sigma_half=half,
        sigma_two=two,
        dim_spec=dim_spec,
        lines=tuple(lines),
        factors=tuple(factors),
    )


def sphere(d: int) -> SymmetricSpaceModel:
    """S^d = SO(d+1)/SO(d): one restricted root of multiplicity d-1, <a,a> = 1."""
    if int(d) != d or d < 2:
        raise ConfigurationError(f"family 'sphere' needs integer d >= 2, got {d!r}")
    d = int(d)
    return _assemble(
        Family.SPHERE,
        (("d", d),),
        [RestrictedRoot((1,), d - 1)],
        [[1]],
        ("sphere", d),
        ("sphere",),
    )


def group_su(n: int) -> SymmetricSpaceModel:
    """SU(n) as (SU(n) x SU(n))/diag: restricted roots A_{n-1}, all of multiplicity 2.

    Coordinates are taken in the basis of simple roots and the Gram matrix is
    half the Cartan matrix, which makes SU(2) spectrally identical to the unit S^3.
    """
    if int(n) != n or n < 2:
        raise ConfigurationError(f"family 'group_su' needs integer n >= 2, got {n!r}")
    n = int(n)
    r = n - 1
    roots = []
    for i in range(r):
        for j in range(i + 1, r + 1):
            roots.append(RestrictedRoot(tuple(1 if i <= k < j else 0 for k in range(r)), 2))
    gram = [
        [Fraction(1) if i == j else (Fraction(-1, 2) if abs(i - j) == 1 else Fraction(0)) for j in range(r)]
        for i in range(r)
    ]
    simple = [next(ix for ix, rt in enumerate(roots) if rt.coords == tuple(Fraction(int(k == i)) for k in range(r)))
              for i in range(r)]
    return _assemble(Family.GROUP_SU, (("n", n),), roots, gram, ("weyl_su_squared", n), ("group_su",), order=simple)


def generic(
    positive_roots: Sequence[RestrictedRoot | tuple],
    gram: Sequence[Sequence],
    dimension: str | Callable,
    line: str = "generic",
    label: str | None = None,
) -> SymmetricSpaceModel:
    """User-supplied root data; ``dimension`` is a polynomial in k1..kr (string) or a callable."""
    roots = [r if isinstance(r, RestrictedRoot) else RestrictedRoot(*r) for r in positive_roots]
    params = (("line", line),) + ((("label", label),) if label else ())
    if isinstance(dimension, str):
        dim_spec = ("polynomial", dimension)
    elif callable(dimension):
        dim_spec = ("callable", dimension)
    else:
        raise ConfigurationError("generic dimension must be a polynomial string or a callable")
    return _assemble(Family.GENERIC, params, roots, gram, dim_spec, (line,))


def product(*factors: SymmetricSpaceModel) -> SymmetricSpaceModel:
    """Product of irreducible models: block-diagonal Gram, concatenated coordinates."""
    if not factors:
        raise ConfigurationError("product needs at least one factor")
    flat = []
    for f in factors:
        flat.extend(f.factors if f.family is Family.PRODUCT else (f,))
    total = sum(f.rank for f in flat)
    roots, gram, lines, order = [], [[Fraction(0)] * total for _ in range(total)], [], []
    offset = 0
    for f in flat:
        base = len(roots)
        for root in f.positive_roots:
            coords = [Fraction(0)] * total
            coords[offset:offset + f.rank] = root.coords
            roots.append(RestrictedRoot(tuple(coords), root.multiplicity))
        for i in range(f.rank):
            for j in range(f.rank):
                gram[offset + i][offset + j] = f.gram[i][j]
        order.extend(base + ix for ix in f.simple_roots)
        lines.extend(f.lines)
        offset += f.rank
    return _assemble(Family.PRODUCT, (), roots, gram, ("product",), tuple(lines), factors=flat, order=order)


def build_model(family: Family | str, **params) -> SymmetricSpaceModel:
    try:
        family = Family(family) if not isinstance(family, Family) else family
    except ValueError:
        raise ConfigurationError(f"unsupported family {family!r}") from None
    try:
        if family is Family.SPHERE:
            return sphere(params["d"])
        if family is Family.GROUP_SU:
            return group_su(params["n"])
        if family is Family.GENERIC:
            return generic(**params)
        return product(*params["factors"])
    except KeyError as exc:
        raise ConfigurationError(f"family {family.value!r} is missing parameter {exc.args[0]!r}") from None
    except TypeError as exc:
        raise ConfigurationError(f"family {family.value!r}: {exc}") from None


# ---------------------------------------------------------------------------
# Dynkin data and propagation


def half_simple_roots(model: SymmetricSpaceModel) -> tuple[Vector, ...]:
    """Σ_{1/2} simple roots, aligned index-by-index with ``model.simple_roots``."""
    out = []
    half = {model.root(i) for i in model.sigma_half}
    for idx in model.simple_roots:
        a = model.root(idx)
        out.append(a if a in half else _scale(Fraction(1, 2), a))
    return tuple(out)


def cartan_matrix(model: SymmetricSpaceModel) -> tuple[tuple[int, ...], ...]:
    beta = half_simple_roots(model)
    return tuple(
        tuple(int(2 * inner(model, bi, bj) / inner(model, bj, bj)) for bj in beta) for bi in beta
    )


def _components(cartan, nodes) -> list[tuple[int, ...]]:
    nodes = list(nodes)
    seen, comps = set(), []
    for start in nodes:
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in nodes:
                if w not in seen and cartan[v][w] != 0:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def dynkin_type(cartan, nodes: Sequence[int]) -> str:
    """Cartan-Killing type of a connected reduced diagram, e.g. ``'A3'``."""
    nodes = list(nodes)
    n = len(nodes)
    adj = {v: [w for w in nodes if w != v and cartan[v][w] != 0] for v in nodes}
    bonds = {(v, w): cartan[v][w] * cartan[w][v] for v in nodes for w in adj[v]}
    if n == 1:
        return "A1"
    if any(b == 3 for b in bonds.values()):
        return f"G{n}"
    doubles = [(v, w) for (v, w), b in bonds.items() if b == 2]
    if doubles:
        if n == 2:
            return "B2"
        v, w = doubles[0]
        if len(adj[v]) == 2 and len(adj[w]) == 2:
            return f"F{n}"
        end, other = (v, w) if len(adj[v]) == 1 else (w, v)
        # end node short <=> cartan[other][end] == -2
        return f"B{n}" if cartan[other][end] == -2 else f"C{n}"
    branch = [v for v in nodes if len(adj[v]) == 3]
    if branch:
        b = branch[0]
        arms = []
        for start in adj[b]:
            length, prev, cur = 1, b, start
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                length += 1
            arms.append(length)
        return f"D{n}" if sorted(arms)[:2] == [1, 1] else f"E{n}"
    return f"A{n}"


@dataclass(frozen=True)
class PropagationReport:
    accepted: bool
    matching: tuple[int, ...] = ()
    reason: str = ""


def _component_embeddings(cl, lower_nodes, cu, upper_nodes):
    """Cartan-preserving injections of lower_nodes into upper_nodes, in lexicographic order."""
    lower_nodes = list(lower_nodes)

    def rec(i, chosen):
        if i == len(lower_nodes):
            yield tuple(chosen)
            return
        for u in upper_nodes:
            if u in chosen:
                continue
            if cu[u][u] != cl[lower_nodes[i]][lower_nodes[i]]:
                continue
            ok = all(
                cu[u][chosen[k]] == cl[lower_nodes[i]][lower_nodes[k]]
                and cu[chosen[k]][u] == cl[lower_nodes[k]][lower_nodes[i]]
                for k in range(i)
            )
            if ok:
                chosen.append(u)
                yield from rec(i + 1, chosen)
                chosen.pop()

    yield from rec(0, [])


def _left_extension(cl, lower_nodes, cu, upper_nodes, image) -> bool:
    """The complement of ``image`` is a chain hanging off one end node of the lower diagram."""
    complement = [u for u in upper_nodes if u not in image]
    if not complement:
        return True
    contacts = {image.index(v) for c in complement for v in image if cu[c][v] != 0}
    if len(contacts) != 1:
        return False
    (attach,) = contacts
    lower_deg = sum(1 for w in lower_nodes if w != lower_nodes[attach] and cl[lower_nodes[attach]][w] != 0)
    if lower_deg > 1:
        return False
    # new nodes must form a simply laced path
    sub = set(complement) | {image[attach]}
    for v in sub:
        deg = sum(1 for w in sub if w != v and cu[v][w] != 0)
        if deg > 2:
            return False
        if any(cu[v][w] * cu[w][v] > 1 for w in sub if w != v):
            return False
    return len(_components(cu, sub)) == 1


def check_propagation(lower: SymmetricSpaceModel, upper: SymmetricSpaceModel) -> PropagationReport:
    """Decide whether ``upper`` propagates ``lower`` and return the simple-root matching.

    The matching sends the j-th Σ_2 simple root of ``lower`` to an index of
    ``upper.simple_roots``. Factors are matched one-to-one within the same
    family line; within a factor the Σ_{1/2} diagrams must be of the same type
    and the upper one may only grow at the left end.
    """
    if lower.rank > upper.rank:
        return PropagationReport(False, reason=f"rank {lower.rank} exceeds rank {upper.rank}")
    cl, cu = cartan_matrix(lower), cartan_matrix(upper)
    lcomps = _components(cl, range(lower.rank))
    ucomps = _components(cu, range(upper.rank))
    if len(lcomps) > len(ucomps):
        return PropagationReport(False, reason="more irreducible factors below than above")

    def comp_ok(lc, uc):
        if lower.lines[lc[0]] != upper.lines[uc[0]]:
            return []
        if dynkin_type(cl, lc)[0] != dynkin_type(cu, uc)[0] or len(lc) > len(uc):
            return []
        return [img for img in _component_embeddings(cl, lc, cu, uc) if _left_extension(cl, lc, cu, uc, list(img))]

    for assignment in itertools.permutations(range(len(ucomps)), len(lcomps)):
        matching = [None] * lower.rank
        for li, ui in zip(range(len(lcomps)), assignment):
            options = comp_ok(lcomps[li], ucomps[ui])
            if not options:
                break
            for node, target in zip(lcomps[li], options[0]):
                matching[node] = target
        else:
            # root spaces of the smaller space sit inside those of the larger one
            for j, target in enumerate(matching):
                m_low = lower.positive_roots[lower.simple_roots[j]].multiplicity
                m_up = upper.positive_roots[upper.simple_roots[target]].multiplicity
                if m_low > m_up:
                    return PropagationReport(False, reason=f"multiplicity {m_low} of simple root {j} "
                                                           f"exceeds {m_up} above")
            return PropagationReport(True, tuple(matching))
    lines_l = sorted(set(lower.lines))
    lines_u = sorted(set(upper.lines))
    reason = "Σ_{1/2} diagrams do not left-extend"
    if lines_l != lines_u:
        reason += f" (family lines {lines_l} vs {lines_u})"
    return PropagationReport(False, reason=reason)


# ---------------------------------------------------------------------------
# JSON descriptors


def model_from_descriptor(desc: dict) -> SymmetricSpaceModel:
    if not isinstance(desc, dict) or "family" not in desc:
        raise ConfigurationError(f"model descriptor must be an object with a 'family' key: {desc!r}")
    fam = desc["family"]
    params = {k: v for k, v in desc.items() if k != "family"}
    if fam == "product":
        return product(*(model_from_descriptor(f) for f in params.get("factors", [])))
    if fam == "generic":
        try:
            roots = [RestrictedRoot(tuple(Fraction(c) for c in r["coords"]), r["multiplicity"])
                     for r in params["positive_roots"]]
            gram = [[Fraction(v) for v in row] for row in params["gram"]]
            return generic(roots, gram, params["dimension"], params.get("line", "generic"), params.get("label"))
        except KeyError as exc:
            raise ConfigurationError(f"family 'generic' is missing {exc.args[0]!r}") from None
    return build_model(fam, **params)


def model_descriptor(model: SymmetricSpaceModel) -> dict:
    if model.family is Family.PRODUCT:
        return {"family": "product", "factors": [model_descriptor(f) for f in model.factors]}
    if model.family is Family.GENERIC:
        desc = {
            "family": "generic",
            "positive_roots": [{"coords": [str(c) for c in r.coords], "multiplicity": r.multiplicity}
                               for r in model.positive_roots],
            "gram": [[str(v) for v in row] for row in model.gram],
            "dimension": model.dim_spec[1] if model.dim_spec[0] == "polynomial" else "<callable>",
        }
        desc.update(model.param_dict)
        return desc
    return {"family": model.family.value, **model.param_dict}
