"""Certificate construction.

Every build here is exact: the produced map on generators extends to a
genuine homomorphism into Sym(A), S is all of A, and the orbit witness
satisfies its equivariance equalities on the nose, so the claimed
epsilon is always 0.

The two base constructions for a finite-index separating table K of
index n (left cosets labeled as in :mod:`soficert.stallings`):

* literal — A is all of Sym(n); g acts by left composition with the
  permutation by which g left-multiplies the cosets; the witness at a
  carrier point s sends the coset labeled c to s^-1(c).
* core — A is the quotient by the normal core, realized as the group Q
  generated by the coset permutations; same shape, s ranges over Q only.

Infinite-index coset actions are handled by separating finitely many
coset relations through a Hall completion and lifting the finite-index
witness through it; the biregular action of G x G on G uses the product
carrier Q x Q for a finite quotient Q in which the pairwise point
differences survive.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .actions import (
    ActionSpec,
    BiregularAction,
    CosetAction,
    GroupElement,
    RestrictedAction,
    act,
    acting_rank,
    action_from_json,
    action_to_json,
    apply_images,
    canonical_point,
    check_element,
    element_invert,
    element_text,
    parse_element,
    point_rank,
    separation_targets,
)
from .permutations import compose, identity_perm, inverse
from .stallings import (
    CoreTooLargeError,
    CosetTable,
    action_permutation,
    core_graph,
    coset_of,
    hall_completion,
    image_group,
    left_coset_of,
)
from .words import Word, invert, multiply, parse_word

DEFAULT_EPSILON = Fraction(0)


class SeparatorInvalidError(ValueError):
    """The supplied table does not separate the required words."""


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for CLI reporting."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage}: {cause}")


@dataclass(frozen=True)
class Caps:
    """Size limits for the search/closure stages."""

    core_cap: int = 10**6
    literal_degree_max: int = 6
    bireg_carrier_cap: int = 100_000
    quotient_degree_max: int = 5
    quotient_samples: int = 2000
    orbit_bound: int = 6


@dataclass(frozen=True)
class SoficApproximation:
    """Generator images in Sym(carrier).  ``group_kind`` is "free" for a
    single free group (``rank`` arrays) or "product" for G x G (``2 *
    rank`` arrays, left-factor generators first)."""

    group_kind: str
    rank: int
    size: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        expected = self.rank if self.group_kind == "free" else 2 * self.rank
        if len(self.images) != expected:
            raise ValueError(f"expected {expected} generator images, got {len(self.images)}")

    def _eval_word(self, w: Word, offset: int) -> tuple[int, ...]:
        perm = identity_perm(self.size)
        for l in w.letters:
            img = self.images[offset + abs(l) - 1]
            if l < 0:
                img = inverse(img)
            perm = compose(perm, img)
        return perm

    def permutation_of(
        self, g: GroupElement, word_images: Mapping[str, tuple[int, ...]] | None = None
    ) -> tuple[int, ...]:
        """phi(g), composing generator images (left factor then right for pairs).

        ``word_images`` optionally overrides whole words by text, which is
        how an externally tabulated, not-necessarily-homomorphic phi is
        verified; entries absent from the table fall back to composition.
        """
        if isinstance(g, tuple):
            if word_images:
                raise ValueError("word image overrides are only supported for free groups")
            return compose(self._eval_word(g[0], 0), self._eval_word(g[1], self.rank))
        if word_images is not None:
            hit = word_images.get(g.text())
            if hit is not None:
                return tuple(hit)
        return self._eval_word(g, 0)


@dataclass(frozen=True)
class OrbitWitness:
    """Finite orbit data: injections pi_s : E -> B for each s in S.

    ``pi`` rows align with ``s_points``, columns with the certificate's E,
    and values index into ``b_labels``.
    """

    s_points: tuple[int, ...]
    b_labels: tuple
    pi: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Certificate:
    action: ActionSpec
    F: tuple[GroupElement, ...]
    E: tuple[Word, ...]
    epsilon: Fraction
    approx: SoficApproximation
    witness: OrbitWitness
    provenance: Mapping = field(default_factory=dict)


# ---------------------------------------------------------------------------
# finite-index base constructions


def finite_index_witness(
    table: CosetTable, strategy: str = "core", caps: Caps = Caps()
) -> tuple[SoficApproximation, OrbitWitness]:
    """Exact approximation of the left-multiplication action on the cosets
    of ``table``, with a witness covering every coset (E = all n labels)."""
    n = table.size
    gen_actions = [action_permutation(table, Word((i,), table.rank)) for i in range(1, table.rank + 1)]
    if strategy == "literal":
        if n > caps.literal_degree_max:
            raise CoreTooLargeError(
                f"literal strategy keeps all of Sym({n}); capped at degree {caps.literal_degree_max}"
            )
        carrier = sorted(itertools.permutations(range(n)))
    elif strategy == "core":
        carrier = image_group(table, caps.core_cap)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    index = {p: i for i, p in enumerate(carrier)}
    images = tuple(
        tuple(index[compose(g, s)] for s in carrier) for g in gen_actions
    )
    approx = SoficApproximation("free", table.rank, len(carrier), images)
    pi = tuple(inverse(s) for s in carrier)
    witness = OrbitWitness(tuple(range(len(carrier))), tuple(range(n)), pi)
    return approx, witness


def lift_witness(
    approx: SoficApproximation,
    base: OrbitWitness,
    table: CosetTable,
    spec: CosetAction,
    F: Sequence[Word],
    E: Sequence[Word],
) -> OrbitWitness:
    """Pull a witness over all cosets of a separating table back to E.

    Requires the table to avoid every pairwise difference of E's
    representatives and to contain every transport relation from F x E;
    then x -> (left coset of sigma(x)) is injective on E and equivariant,
    so selecting those columns of the base witness is again a witness.
    """
    t_avoid, t_contain = separation_targets(spec, list(F), list(E))
    for w in t_avoid:
        if coset_of(table, w) == 0:
            raise SeparatorInvalidError(f"table fails to avoid {w.text()!r}")
    for w in t_contain:
        if coset_of(table, w) != 0:
            raise SeparatorInvalidError(f"table fails to contain {w.text()!r}")
    sigma = [canonical_point(spec, x) for x in E]
    cols = [left_coset_of(table, w) for w in sigma]
    if len(set(cols)) != len(cols):
        raise AssertionError("separating table produced a label collision")
    pi = tuple(tuple(row[c] for c in cols) for row in base.pi)
    return OrbitWitness(base.s_points, base.b_labels, pi)


# ---------------------------------------------------------------------------
# finite quotients for the biregular construction


@dataclass(frozen=True)
class _FiniteQuotient:
    """A finite quotient of F_rank in which a required word set survives.

    ``gen_walks[i]`` is the walk permutation of generator i+1 on the
    defining points; ``elements`` lists the generated group, and the
    quotient map sends w to the permutation by which w left-multiplies."""

    rank: int
    degree: int
    gen_walks: tuple[tuple[int, ...], ...]
    elements: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, p: tuple[int, ...]) -> int:
        return self.elements.index(p)

    def map_word(self, w: Word) -> tuple[int, ...]:
        perm = identity_perm(self.degree)
        for l in invert(w).letters:
            step = self.gen_walks[l - 1] if l > 0 else inverse(self.gen_walks[-l - 1])
            perm = compose(step, perm)
        return perm


def _quotient_from_walks(rank: int, degree: int, walks: Sequence[tuple[int, ...]], cap: int) -> _FiniteQuotient:
    elements = tuple(_perm_closure(walks, degree, cap))
    return _FiniteQuotient(rank, degree, tuple(walks), elements)


def _perm_closure(gens: Sequence[tuple[int, ...]], degree: int, cap: int) -> list[tuple[int, ...]]:
    steps = list(gens) + [inverse(p) for p in gens]
    first = identity_perm(degree)
    seen = {first}
    order = [first]
    queue = [first]
    while queue:
        u = queue.pop(0)
        for p in steps:
            v = compose(p, u)
            if v not in seen:
                if len(order) >= cap:
                    raise CoreTooLargeError(f"permutation group exceeds cap {cap}")
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order


def _separating_quotient(rank: int, targets: Sequence[Word], caps: Caps) -> tuple[_FiniteQuotient, str]:
    """Finite quotient where every target survives, smallest order found.

    First tries the normal core of a Hall completion separating the
    targets; if its image group is too large for a product carrier, falls
    back to a deterministic search over small symmetric groups (seeded
    sampling beyond degree 3).
    """
    order_cap = max(2, int(caps.bireg_carrier_cap**0.5))
    if not targets:
        walks = tuple(identity_perm(1) for _ in range(rank))
        return _quotient_from_walks(rank, 1, walks, 2), "hall-core"
    try:
        table = hall_completion(core_graph([], rank), list(targets))
        q = _quotient_from_walks(rank, table.size, table.images, order_cap)
        return q, "hall-core"
    except CoreTooLargeError:
        pass

    def separates(walks: list[tuple[int, ...]]) -> bool:
        quick = _FiniteQuotient(rank, len(walks[0]), tuple(walks), ())
        return all(quick.map_word(w) != identity_perm(len(walks[0])) for w in targets)

    for degree in range(2, 4):
        perms = sorted(itertools.permutations(range(degree)))
        for combo in itertools.product(perms, repeat=rank):
            if separates(list(combo)):
                return _quotient_from_walks(rank, degree, combo, order_cap), "quotient-search"
    rng = random.Random(0)
    for degree in range(4, caps.quotient_degree_max + 1):
        perms = sorted(itertools.permutations(range(degree)))
        for _ in range(caps.quotient_samples):
            combo = tuple(rng.choice(perms) for _ in range(rank))
            if separates(list(combo)):
                try:
                    return _quotient_from_walks(rank, degree, combo, order_cap), "quotient-search"
                except CoreTooLargeError:
                    continue
    raise CoreTooLargeError(
        "no small quotient separates "
        + ", ".join(w.text() for w in targets)
        + f" within degree {caps.quotient_degree_max}"
    )


def biregular_approximation(
    rank: int,
    F: Sequence[GroupElement],
    E: Sequence[Word],
    epsilon: Fraction = DEFAULT_EPSILON,
    caps: Caps = Caps(),
) -> Certificate:
    """Exact certificate for G x G acting on G by (h, k): x -> h x k^-1.

    For a normal finite-index K in which the pairwise differences of E
    survive, the carrier is Q x Q for Q = G/K acting coordinatewise by
    left translation, B is Q, and the witness at (u, v) sends x to
    u^-1 q(x) v; all equivariance equalities hold identically.
    """
    spec = BiregularAction(rank)
    E = _checked_points(spec, E)
    for g in F:
        check_element(spec, g)
    targets: list[Word] = []
    for x in E:
        for y in E:
            if x.letters != y.letters:
                w = multiply(invert(x), y)
                if all(w.letters != u.letters for u in targets):
                    targets.append(w)
    quotient, strategy = _separating_quotient(rank, targets, caps)
    m = quotient.order
    if m * m > caps.bireg_carrier_cap:
        raise CoreTooLargeError(f"carrier {m}x{m} exceeds cap {caps.bireg_carrier_cap}")
    index = {p: i for i, p in enumerate(quotient.elements)}
    e_labels = [index[quotient.map_word(x)] for x in E]
    if len(set(e_labels)) != len(e_labels):
        raise AssertionError("separating quotient produced a label collision")

    translations = []
    for i in range(1, rank + 1):
        g = quotient.map_word(Word((i,), rank))
        translations.append(tuple(index[compose(g, p)] for p in quotient.elements))
    images = []
    for side in range(2):
        for tr in translations:
            img = [0] * (m * m)
            for u in range(m):
                for v in range(m):
                    if side == 0:
                        img[u * m + v] = tr[u] * m + v
                    else:
                        img[u * m + v] = u * m + tr[v]
            images.append(tuple(img))
    approx = SoficApproximation("product", rank, m * m, tuple(images))

    inverses = [inverse(p) for p in quotient.elements]
    pi = []
    for u in range(m):
        inv_u = inverses[u]
        for v in range(m):
            elt_v = quotient.elements[v]
            row = tuple(
                index[compose(inv_u, compose(quotient.elements[c], elt_v))]
                for c in e_labels
            )
            pi.append(row)
    witness = OrbitWitness(tuple(range(m * m)), tuple(range(m)), tuple(pi))
    provenance = {
        "builder": "exact-homomorphism",
        "strategy": strategy,
        "requested_epsilon": str(epsilon),
        "quotient": {"degree": quotient.degree, "order": m,
                     "walks": [list(p) for p in quotient.gen_walks]},
        "point_labels": e_labels,
    }
    return Certificate(spec, tuple(F), tuple(E), Fraction(0), approx, witness, provenance)


# ---------------------------------------------------------------------------
# the general pipeline


def _checked_points(spec: ActionSpec, E: Sequence[Word]) -> list[Word]:
    points = [canonical_point(spec, x) for x in E]
    if len({p.letters for p in points}) != len(points):
        raise ValueError("duplicate points in E")
    return points


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return None

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, StageError):
                raise StageError(name, exc) from exc
            return False

    return _Ctx()


def approximate(
    spec: ActionSpec,
    F: Sequence[GroupElement],
    E: Sequence[Word],
    epsilon: Fraction = DEFAULT_EPSILON,
    strategy: str = "core",
    caps: Caps = Caps(),
) -> Certificate:
    """Build an exact certificate for (spec, F, E).

    Coset actions run the separation pipeline (targets, Hall completion,
    finite-index witness, lift).  The biregular action is transitive and
    is built directly on a product carrier.  Restricted actions recurse
    into the inner action along the generator images and pull phi back.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    for g in F:
        check_element(spec, g)
    with _stage("canonicalize"):
        points = _checked_points(spec, E)

    if isinstance(spec, RestrictedAction):
        with _stage("restrict"):
            inner_F = [apply_images(spec.images, g) for g in F]
            inner = approximate(spec.inner, inner_F, points, epsilon, strategy, caps)
            return restrict_certificate(inner, spec.images, list(F))

    if isinstance(spec, BiregularAction):
        with _stage("biregular"):
            return biregular_approximation(spec.rank, F, points, epsilon, caps)

    with _stage("separation_targets"):
        t_avoid, _ = separation_targets(spec, list(F), points)
    with _stage("hall_completion"):
        table = hall_completion(spec.graph, t_avoid)
    with _stage("finite_index_witness"):
        approx, base = finite_index_witness(table, strategy, caps)
    with _stage("lift_witness"):
        witness = lift_witness(approx, base, table, spec, list(F), points)
    provenance = {
        "builder": "exact-homomorphism",
        "strategy": strategy,
        "requested_epsilon": str(epsilon),
        "separator": {"index": table.size, "images": [list(p) for p in table.images]},
        "point_labels": [left_coset_of(table, x) for x in points],
    }
    return Certificate(spec, tuple(F), tuple(points), Fraction(0), approx, witness, provenance)


def restrict_certificate(
    cert: Certificate, images: Sequence[GroupElement], F: Sequence[Word]
) -> Certificate:
    """Pull a certificate back along generator j -> images[j].

    phi becomes phi . image on each outer generator; the witness is
    unchanged.  For certificates not built here as exact homomorphisms,
    every image of F must already appear in the base F (or be the
    identity), since nothing else was verified.
    """
    for g in images:
        check_element(cert.action, g)
    outer_rank = len(images)
    for g in F:
        if not isinstance(g, Word) or g.rank != outer_rank:
            raise ValueError(f"expected rank-{outer_rank} words in F, got {g!r}")
    if cert.provenance.get("builder") != "exact-homomorphism":
        base_f = {json.dumps(element_text(g)) for g in cert.F}
        for g in F:
            target = apply_images(images, g)
            if _element_is_identity(target):
                continue
            if json.dumps(element_text(target)) not in base_f:
                raise SeparatorInvalidError(
                    f"image of {g.text()!r} was not verified by the base certificate; rebuild required"
                )
    arrays = tuple(cert.approx.permutation_of(apply_images(images, Word((j,), outer_rank)))
                   for j in range(1, outer_rank + 1))
    approx = SoficApproximation("free", outer_rank, cert.approx.size, arrays)
    action = RestrictedAction(cert.action, tuple(images))
    provenance = dict(cert.provenance)
    provenance["restricted_from"] = action_to_json(cert.action)["kind"]
    return Certificate(action, tuple(F), cert.E, cert.epsilon, approx, cert.witness, provenance)


def _element_is_identity(g: GroupElement) -> bool:
    if isinstance(g, tuple):
        return g[0].is_identity and g[1].is_identity
    return g.is_identity


def combine_orbits(parts: Sequence[Certificate]) -> Certificate:
    """Combine certificates for orbit-closed pieces of one action.

    All parts must share the action, F and epsilon, and be exact
    (S = A).  The combined carrier is the cartesian product acting
    coordinatewise, B the tagged disjoint union, and the witness at a
    carrier tuple uses the coordinate of the orbit each point lies in.
    """
    if not parts:
        raise ValueError("need at least one part")
    first = parts[0]
    action_json = json.dumps(action_to_json(first.action), sort_keys=True)
    f_json = json.dumps([element_text(g) for g in first.F], sort_keys=True)
    for p in parts:
        if json.dumps(action_to_json(p.action), sort_keys=True) != action_json:
            raise ValueError("parts disagree on the action")
        if json.dumps([element_text(g) for g in p.F], sort_keys=True) != f_json:
            raise ValueError("parts disagree on F")
        if p.epsilon != first.epsilon:
            raise ValueError("parts disagree on epsilon")
        if list(p.witness.s_points) != list(range(p.approx.size)):
            raise ValueError("parts must be exact (S = A) to combine")
    combined_E: list[Word] = []
    part_of: dict[tuple, int] = {}
    for t, p in enumerate(parts):
        for x in p.E:
            combined_E.append(x)
            part_of[x.letters] = t
    if len(part_of) != len(combined_E):
        raise ValueError("parts overlap on E")
    # no single F-step may carry a point of one part into another part:
    # a crossing triple would force differently tagged labels to be equal
    for t, p in enumerate(parts):
        for g in first.F:
            g_inv = element_invert(g)
            for x in p.E:
                y = act(first.action, g_inv, x)
                other = part_of.get(y.letters)
                if other is not None and other != t:
                    raise ValueError(
                        f"parts are not orbit-separated: {element_text(g_inv)!r} "
                        f"carries {x.text()!r} into part {other}"
                    )

    sizes = [p.approx.size for p in parts]
    total = 1
    for s in sizes:
        total *= s
    coords = list(itertools.product(*[range(s) for s in sizes]))
    coord_index = {c: i for i, c in enumerate(coords)}

    n_arrays = len(first.approx.images)
    images = []
    for gi in range(n_arrays):
        img = []
        for c in coords:
            img.append(coord_index[tuple(p.approx.images[gi][c[t]] for t, p in enumerate(parts))])
        images.append(tuple(img))
    approx = SoficApproximation(first.approx.group_kind, first.approx.rank, total, tuple(images))

    b_labels: list = []
    offsets = []
    for t, p in enumerate(parts):
        offsets.append(len(b_labels))
        b_labels.extend((t, lab) for lab in p.witness.b_labels)
    pi = []
    for c in coords:
        row: list[int] = []
        for t, p in enumerate(parts):
            row.extend(offsets[t] + v for v in p.witness.pi[c[t]])
        pi.append(tuple(row))
    witness = OrbitWitness(tuple(range(total)), tuple(b_labels), tuple(pi))
    provenance = {
        "builder": "exact-homomorphism",
        "strategy": "combined",
        "parts": sizes,
    }
    return Certificate(
        first.action, first.F, tuple(combined_E), first.epsilon, approx, witness, provenance
    )


# ---------------------------------------------------------------------------
# serialization


class CertificateFormatError(ValueError):
    """Schema-level problem in a certificate file; names the failing field."""


def _label_to_json(l):
    if isinstance(l, tuple):
        return [_label_to_json(x) for x in l]
    return l


def _label_from_json(l, where: str):
    if isinstance(l, list):
        _expect(len(l) == 2, where, f"tagged label {l!r} must be a pair")
        return tuple(_label_from_json(x, where) for x in l)
    _expect(isinstance(l, int), where, f"label {l!r} must be an integer or pair")
    return l


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "action": action_to_json(cert.action),
        "F": [element_text(g) for g in cert.F],
        "E": [x.text() for x in cert.E],
        "epsilon": str(cert.epsilon),
        "carrier_size": cert.approx.size,
        "generator_images": [list(img) for img in cert.approx.images],
        "S": list(cert.witness.s_points),
        "B": [_label_to_json(l) for l in cert.witness.b_labels],
        "pi": [list(row) for row in cert.witness.pi],
        "provenance": dict(cert.provenance),
    }


def write_certificate(cert: Certificate, path: str) -> None:
    payload = json.dumps(certificate_to_dict(cert), indent=2, sort_keys=True) + "\n"
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def _expect(cond: bool, where: str, what: str) -> None:
    if not cond:
        raise CertificateFormatError(f"{where}: {what}")


def certificate_from_dict(data: dict) -> Certificate:
    """Validate the JSON form field by field and rebuild the Certificate.

    Structural problems (missing fields, wrong shapes, out-of-range
    indices) raise CertificateFormatError naming the field; whether the
    arrays are genuine permutations is a verification question, not a
    format one, and is left to the verifier.
    """
    _expect(isinstance(data, dict), "certificate", "top level must be an object")
    for key in ("action", "F", "E", "epsilon", "carrier_size",
                "generator_images", "S", "B", "pi"):
        _expect(key in data, key, "missing field")
    try:
        action = action_from_json(data["action"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"action: {exc}") from exc
    try:
        F = tuple(parse_element(action, item) for item in data["F"])
    except (TypeError, ValueError) as exc:
        raise CertificateFormatError(f"F: {exc}") from exc
    try:
        E = tuple(parse_word(t, point_rank(action)) for t in data["E"])
    except (TypeError, ValueError) as exc:
        raise CertificateFormatError(f"E: {exc}") from exc
    _expect(len({w.letters for w in E}) == len(E), "E", "duplicate points")
    for w, t in zip(E, data["E"]):
        canon = canonical_point(action, w)
        _expect(canon.letters == w.letters, "E",
                f"{t!r} is not the canonical name of its point (expected {canon.text()!r})")
    try:
        epsilon = Fraction(data["epsilon"])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CertificateFormatError(f"epsilon: {exc}") from exc
    _expect(epsilon >= 0, "epsilon", "must be nonnegative")

    size = data["carrier_size"]
    _expect(isinstance(size, int) and size >= 1, "carrier_size", "must be a positive integer")
    group_kind = "product" if isinstance(action, BiregularAction) else "free"
    rank = acting_rank(action)
    expected_arrays = rank if group_kind == "free" else 2 * rank
    imgs = data["generator_images"]
    _expect(isinstance(imgs, list) and len(imgs) == expected_arrays,
            "generator_images", f"expected {expected_arrays} arrays")
    for i, arr in enumerate(imgs):
        _expect(isinstance(arr, list) and len(arr) == size,
                f"generator_images[{i}]", f"expected length {size}")
        for x in arr:
            _expect(isinstance(x, int) and 0 <= x < size,
                    f"generator_images[{i}]", f"entry {x!r} out of range")
    s_points = data["S"]
    _expect(isinstance(s_points, list), "S", "must be a list")
    _expect(all(isinstance(s, int) and 0 <= s < size for s in s_points),
            "S", "entries must be carrier indices")
    _expect(sorted(set(s_points)) == s_points, "S", "must be strictly increasing")
    b_labels = data["B"]
    _expect(isinstance(b_labels, list), "B", "must be a list")
    canon_labels = [_label_from_json(l, "B") for l in b_labels]
    _expect(len(set(canon_labels)) == len(canon_labels), "B", "labels must be distinct")
    pi = data["pi"]
    _expect(isinstance(pi, list) and len(pi) == len(s_points),
            "pi", f"expected {len(s_points)} rows")
    for i, row in enumerate(pi):
        _expect(isinstance(row, list) and len(row) == len(E),
                f"pi[{i}]", f"expected {len(E)} entries")
        for v in row:
            _expect(isinstance(v, int) and 0 <= v < len(b_labels),
                    f"pi[{i}]", f"entry {v!r} is not a B index")
    approx = SoficApproximation(group_kind, rank, size, tuple(tuple(a) for a in imgs))
    witness = OrbitWitness(tuple(s_points), tuple(canon_labels), tuple(tuple(r) for r in pi))
    provenance = data.get("provenance", {})
    _expect(isinstance(provenance, dict), "provenance", "must be an object")
    return Certificate(action, F, E, epsilon, approx, witness, provenance)


def load_certificate(path: str) -> Certificate:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CertificateFormatError(f"file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"json: {exc}") from exc
    return certificate_from_dict(data)
