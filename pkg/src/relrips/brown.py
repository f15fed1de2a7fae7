"""Brown's criterion at desk scale.

Walk the (r, d, s) filtration upward from a stage alpha until the reduced
homology of alpha dies, record the bounding chains as a certificate, and
split cycles into per-coset pieces by an exact integer solve.

A certificate only speaks about the finite ball it was computed on.  The
statement about the infinite complex rests on the homotopy arguments for
relatively hyperbolic groups, which are not reproduced here.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .cayley import CayleyBall, build_ball, peripheral_ball
from .complex import SimplicialComplex
from .coned import ConedBall, build_coned_ball
from .errors import NotACycleError, RelRipsError
from .homology import (Chain, ChainComplex, ZEchelon, induced_map_zero_test,
                       reduced_homology, _axpy)
from .hyperbolicity import delta_four_point, derive_params, estimate_rbcp
from .presentation import GroupPresentation, PeripheralSpec, load_presentation, resolve_fixture
from .rips import RipsParams, build_plain_rips, build_relative_rips, inclusion

DEFAULT_BUDGET = 4
TRIVIALIZED = "trivialized"
NOT_FOUND = "not-found-within-budget"


class FiltrationIndex(NamedTuple):
    """A stage (r, d, s); tuple comparison is the dictionary order."""

    r: int
    d: int
    s: int

    @classmethod
    def plain(cls, s: int) -> "FiltrationIndex":
        """Stage of the plain filtration of K, which only has the s index."""
        return cls(0, 0, s)


def successors(alpha: FiltrationIndex, budget: int, plain: bool = False) -> Iterator[FiltrationIndex]:
    """Stages beta > alpha inside the search box, in dictionary order.

    Only coordinatewise larger stages are visited: those are the ones for
    which X_alpha is a subcomplex of X_beta.
    """
    if plain:
        for s in range(alpha.s + 1, alpha.s + budget + 1):
            yield FiltrationIndex(alpha.r, alpha.d, s)
        return
    box = itertools.product(
        range(alpha.r, alpha.r + budget + 1),
        range(alpha.d, alpha.d + budget + 1),
        range(alpha.s, alpha.s + budget + 1),
    )
    for beta in box:
        if beta != tuple(alpha):
            yield FiltrationIndex(*beta)


def _canon(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _chain_json(chain: Chain, X: SimplicialComplex, j: int) -> list:
    simp = X.simplices[j]
    return [[i, c, [X.labels[v] for v in simp[i]]] for i, c in sorted(chain.items())]


@dataclass
class TrivializationCertificate:
    fixture: str
    k: int
    alpha: FiltrationIndex
    beta: FiltrationIndex | None
    R: int
    status: str
    caveats: list[str]
    evidence: dict = field(default_factory=dict, repr=False)

    @property
    def evidence_digest(self) -> str:
        return hashlib.sha256(_canon(self.evidence)).hexdigest()

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "k": self.k,
            "alpha": list(self.alpha),
            "beta": None if self.beta is None else list(self.beta),
            "R": self.R,
            "status": self.status,
            "evidence_digest": self.evidence_digest,
            "caveats": list(self.caveats),
        }

    def sidecar_name(self) -> str:
        return f"evidence-{self.evidence_digest[:16]}.json"

    def write(self, out_dir) -> tuple[Path, Path]:
        """Write ``certificate-*.json`` and its evidence sidecar atomically."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        side = out_dir / self.sidecar_name()
        body = dict(self.to_json(), evidence_file=side.name)
        cert = out_dir / f"certificate-{self.evidence_digest[:16]}.json"
        for path, data in ((side, self.evidence), (cert, body)):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            os.replace(tmp, path)
        return cert, side

    def verify(self, target: SimplicialComplex) -> bool:
        """Recompute the boundary of every recorded chain in the beta stage."""
        if self.status != TRIVIALIZED:
            return False
        pairs = self.evidence.get("bounding_chains", [])
        if not pairs:
            return True
        cc = ChainComplex(target, self.k + 1)
        for item in pairs:
            cycle = {i: c for i, c, _ in item["cycle"]}
            chain = {i: c for i, c, _ in item["chain"]}
            if cc.apply_boundary(self.k + 1, chain) != cycle:
                return False
        return True


@dataclass(eq=False)
class FiltrationContext:
    """Everything needed to build stages of one filtration on one ball."""

    fixture: str
    pres: GroupPresentation
    peripheral: PeripheralSpec | None
    R: int
    plain: bool
    k_max: int
    ball: CayleyBall | None = None
    coned: ConedBall | None = None
    _cache: dict = field(default_factory=dict)

    @classmethod
    def load(cls, fixture, R: int, plain: bool, k_max: int) -> "FiltrationContext":
        pres, peripheral = load_presentation(fixture)
        if peripheral is None:
            raise RelRipsError(f"fixture {fixture} declares no peripheral subgroup")
        name = resolve_fixture(fixture).name
        ctx = cls(name, pres, peripheral, R, plain, k_max)
        if plain:
            ctx.ball = peripheral_ball(pres, peripheral, R)
        else:
            ctx.ball = build_ball(pres, R)
            ctx.coned = build_coned_ball(ctx.ball, peripheral)
        return ctx

    def stage(self, index: FiltrationIndex) -> SimplicialComplex:
        X = self._cache.get(index)
        if X is None:
            if self.plain:
                X = build_plain_rips(self.ball, index.s, self.k_max)
            else:
                params = RipsParams(*index, k_max=self.k_max, R=self.R)
                X = build_relative_rips(self.ball, self.coned, params)
            self._cache[index] = X
        return X


def check_essential_triviality(fixture, k: int, alpha, budget: int = DEFAULT_BUDGET,
                               plain: bool = False, R: int = 4, k_max: int | None = None,
                               context: FiltrationContext | None = None
                               ) -> TrivializationCertificate:
    """Search for a stage beta >= alpha at which H~_k(X_alpha) dies.

    ``alpha`` is an (r, d, s) triple, or just s for the plain filtration.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    k_max = k + 1 if k_max is None else k_max
    if k_max < k + 1:
        raise RelRipsError(f"H_{k} needs k_max >= {k + 1}")
    if isinstance(alpha, int):
        alpha = FiltrationIndex.plain(alpha)
    alpha = FiltrationIndex(*alpha)
    ctx = context or FiltrationContext.load(fixture, R, plain, k_max)
    Xa = ctx.stage(alpha)
    src = ChainComplex(Xa, k + 1)
    H = reduced_homology(src, k)
    caveats = list(Xa.params.get("caveats", []))
    evidence = {
        "filtration": "plain" if ctx.plain else "relative",
        "group": ctx.pres.name,
        "k": k,
        "alpha": list(alpha),
        "R": ctx.R,
        "alpha_homology": H.to_json(),
        "examined": [],
        "bounding_chains": [],
    }
    if H.is_trivial:
        return TrivializationCertificate(ctx.fixture, k, alpha, alpha, ctx.R, TRIVIALIZED,
                                         caveats, evidence)
    for beta in successors(alpha, budget, ctx.plain):
        Xb = ctx.stage(beta)
        result = induced_map_zero_test(inclusion(Xa, Xb), k, src, ChainComplex(Xb, k + 1))
        evidence["examined"].append(list(beta))
        if result.zero:
            evidence["bounding_chains"] = [
                {"cycle": _chain_json(z, Xb, k), "chain": _chain_json(c, Xb, k + 1)}
                for z, c in result.evidence
            ]
            caveats.extend(c for c in Xb.params.get("caveats", []) if c not in caveats)
            return TrivializationCertificate(ctx.fixture, k, alpha, beta, ctx.R, TRIVIALIZED,
                                             caveats, evidence)
    caveats.append(f"no stage within {budget} increments per coordinate kills H_{k}")
    return TrivializationCertificate(ctx.fixture, k, alpha, None, ctx.R, NOT_FOUND,
                                     caveats, evidence)


# ---------------------------------------------------------------------------
# coset localization


@dataclass
class CosetLocalization:
    cycle: Chain
    parts: list[tuple[int, Chain]]
    remainder: Chain
    split: bool
    k: int

    def verify(self, X: SimplicialComplex) -> bool:
        """alpha - sum(parts) == boundary(remainder), and each part is a
        cycle living on one coset."""
        if not self.split:
            return False
        cc = ChainComplex(X, self.k + 1)
        diff = dict(self.cycle)
        for coset, part in self.parts:
            if cc.apply_boundary(self.k, part):
                return False
            simp = X.simplices[self.k]
            if any(X.coset_ids[v] != coset for i in part for v in simp[i]):
                return False
            _axpy(diff, -1, part)
        return cc.apply_boundary(self.k + 1, self.remainder) == diff

    def to_json(self, X: SimplicialComplex) -> dict:
        return {
            "k": self.k,
            "split": self.split,
            "cycle": _chain_json(self.cycle, X, self.k),
            "parts": [{"coset": X.labels[c], "chain": _chain_json(p, X, self.k)}
                      for c, p in self.parts],
            "remainder": _chain_json(self.remainder, X, self.k + 1),
        }


def _embed(sub: SimplicialComplex, members: np.ndarray, X: SimplicialComplex,
           j: int, chain: Chain) -> Chain:
    idx = X.index(j)
    simp = sub.simplices[j]
    return {idx[tuple(int(members[v]) for v in simp[i])]: c for i, c in chain.items()}


def coset_localize(X: SimplicialComplex, z: Chain, k: int = 1) -> CosetLocalization:
    """Write a k-cycle as a sum of per-coset cycles plus a boundary."""
    if X.coset_ids is None:
        raise RelRipsError("complex carries no coset table")
    cc = ChainComplex(X, k + 1)
    z = {int(i): int(c) for i, c in z.items() if c}
    if cc.apply_boundary(k, z):
        raise NotACycleError(f"the given {k}-chain has nonzero boundary")
    if not z:
        return CosetLocalization(z, [], {}, True, k)
    simp = X.simplices[k]
    cosets = {int(X.coset_ids[v]) for i in z for v in simp[i]}
    if len(cosets) == 1:
        return CosetLocalization(z, [(cosets.pop(), dict(z))], {}, True, k)

    # generators: boundaries of (k+1)-simplices, then per-coset cycle bases
    ech = ZEchelon()
    n_bd = X.count(k + 1)
    for j, col in enumerate(cc.boundary(k + 1)):
        ech.add(col, {j: 1})
    local: list[tuple[int, Chain]] = []
    for coset in sorted(set(int(c) for c in X.coset_ids)):
        members = np.flatnonzero(X.coset_ids == coset)
        if members.size < 2 and k > 0:
            continue
        sub = X.induced(members)
        for cyc in ChainComplex(sub, k).kernel(k) if k <= sub.k_max else []:
            vec = _embed(sub, members, X, k, cyc)
            local.append((coset, vec))
            ech.add(vec, {n_bd + len(local) - 1: 1})
    sol = ech.solve(z)
    if sol is None:
        return CosetLocalization(z, [], {}, False, k)
    remainder = {j: c for j, c in sol.items() if j < n_bd and c}
    by_coset: dict[int, Chain] = {}
    for g, c in sol.items():
        if g >= n_bd and c:
            coset, vec = local[g - n_bd]
            _axpy(by_coset.setdefault(coset, {}), c, vec)
    parts = [(c, ch) for c, ch in sorted(by_coset.items()) if ch]
    return CosetLocalization(z, parts, remainder, True, k)


def two_coset_fixture() -> tuple[SimplicialComplex, Chain]:
    """Two hollow triangles, one per coset, bridged by two filled triangles.

    The returned cycle is the hexagon 0-1-2-3-4-5-0, which is homologous to
    the sum of the two coset triangles but equal to neither.
    """
    labels = ["a0", "a1", "a2", "b0", "b1", "b2"]
    maximal = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 2, 3), (0, 3, 5)]
    X = SimplicialComplex.from_simplices(labels, maximal, k_max=2,
                                         coset_ids=np.array([0, 0, 0, 3, 3, 3]))
    idx = X.index(1)
    z: Chain = {}
    for u, v in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]:
        z[idx[(min(u, v), max(u, v))]] = 1 if u < v else -1
    return X, z


# ---------------------------------------------------------------------------
# pipeline


def run_theorem_pipeline(fixture, n: int = 2, budget: int = DEFAULT_BUDGET, R: int = 4,
                         plain_alpha: int = 1) -> dict:
    """Check both filtrations in degrees below n and report them side by side."""
    if n < 0:
        raise ValueError("n must be non-negative")
    pres, peripheral = load_presentation(fixture)
    if peripheral is None:
        raise RelRipsError(f"fixture {fixture} declares no peripheral subgroup")
    name = resolve_fixture(fixture).name
    report: dict = {
        "fixture": name,
        "group": pres.name,
        "config": {"n": n, "budget": budget, "R": R, "plain_alpha": plain_alpha},
        "degrees": list(range(n)),
        "peripheral": [],
        "relative": [],
        "red_flags": [],
    }
    if n == 0:
        report["verdict"] = "vacuous"
        return report
    ball = build_ball(pres, R)
    cb = build_coned_ball(ball, peripheral)
    delta = delta_four_point(cb)
    params = derive_params(delta, cb)
    report["delta"] = delta.to_json()
    report["params"] = {"r": params.r, "d": params.d, "s": params.s,
                        "r_hat": params.bcp.r_hat, "T": str(params.bcp.T)}
    if R > 1:
        smaller = build_coned_ball(build_ball(pres, R - 1), peripheral)
        try:
            prev = estimate_rbcp(smaller, params.bcp.T, params.bcp.d_max).r_hat
        except RelRipsError:
            prev = None
        report["params"]["r_hat_previous_radius"] = prev
        if prev is not None and params.bcp.r_hat > prev:
            report["red_flags"].append(
                f"r_hat grew from {prev} at R={R - 1} to {params.bcp.r_hat} at R={R}; "
                "no stable coset penetration constant is visible"
            )
    alpha = FiltrationIndex(*params.as_tuple())
    pctx = FiltrationContext.load(fixture, R, True, n)
    rctx = FiltrationContext(name, pres, peripheral, R, False, n, ball, cb)
    for k in range(n):
        pc = check_essential_triviality(fixture, k, plain_alpha, budget, plain=True,
                                        k_max=n, context=pctx)
        rc = check_essential_triviality(fixture, k, alpha, budget, k_max=n, context=rctx)
        report["peripheral"].append(dict(pc.to_json(), evidence=pc.evidence))
        report["relative"].append(dict(rc.to_json(), evidence=rc.evidence))
    both = all(c["status"] == TRIVIALIZED for c in report["peripheral"] + report["relative"])
    report["verdict"] = "both-trivialized" if both else "incomplete"
    return report
