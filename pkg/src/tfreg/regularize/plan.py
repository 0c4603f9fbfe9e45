"""Parameter planning for the regularisation pipeline."""

import dataclasses
import math
from dataclasses import dataclass

from ..alon import SUPPORTED_K, AlonSpec
from ..sponge import SpongeConfig

PROFILES = ("paper", "desk")


class PlanInfeasible(ValueError):
    pass


@dataclass(frozen=True)
class Plan:
    n: int
    k: int
    N: int
    D: int
    p: float
    profile: str
    conc_slack: float
    offw_cap: int
    tree_maxdeg: int
    sponge: SpongeConfig
    # fixed up front by the paper profile; measured at run time by desk
    delta: float = None
    d_prime: int = None
    max_attempts: int = 50

    @property
    def pn(self):
        return self.p * self.n

    def to_dict(self):
        return dataclasses.asdict(self)


def base_parameter(n):
    """Smallest ``k`` not divisible by 3 with ``n <= 2^{3k}``."""
    k = 1
    while k % 3 == 0 or n > 2 ** (3 * k):
        k += 1
    return k


PLAN_KEYS = {"conc_slack": float, "offw_cap": int, "tree_maxdeg": int, "max_attempts": int}
SPONGE_KEYS = {f.name: int for f in dataclasses.fields(SpongeConfig)}


def parameter_registry():
    """Every key accepted by ``plan(..., overrides=...)`` with its type."""
    return {**PLAN_KEYS, **SPONGE_KEYS}


def _largest_even_below(x):
    e = math.ceil(x) - 1
    return e if e % 2 == 0 else e - 1


def plan(n, profile="desk", overrides=None):
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}, got {profile!r}")
    if n < 64:
        raise PlanInfeasible(f"n={n} is below the smallest supported order 64")
    k = base_parameter(n)
    if k not in SUPPORTED_K:
        raise PlanInfeasible(f"n={n} needs base parameter k={k}, supported k are {SUPPORTED_K}")
    spec = AlonSpec(k)
    N, D = spec.N, spec.D
    p = D / N
    pn = p * n
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(parameter_registry())
    if unknown:
        raise KeyError(f"unknown plan parameters: {sorted(unknown)}")

    if profile == "paper":
        ln = math.log(n)
        root = n ** (1 / 3) * math.sqrt(ln)
        fields = dict(conc_slack=10 * root, offw_cap=math.floor(ln ** 10), tree_maxdeg=10)
        sponge = SpongeConfig.paper(n, pn)
    else:
        fields = dict(conc_slack=3 * math.sqrt(p * (1 - p) * n * math.log(n)),
                      offw_cap=1, tree_maxdeg=3)
        sponge = SpongeConfig.desk(pn)

    for key in PLAN_KEYS:
        if key in overrides:
            fields[key] = PLAN_KEYS[key](overrides[key])
    sponge_over = {key: int(v) for key, v in overrides.items() if key in SPONGE_KEYS}
    if sponge_over:
        sponge = dataclasses.replace(sponge, **sponge_over)

    plan_ = Plan(n=n, k=k, N=N, D=D, p=p, profile=profile, sponge=sponge, **fields)
    if profile == "paper":
        delta = pn - 11 * n ** (1 / 3) * math.sqrt(math.log(n))
        d_prime = _largest_even_below(delta - plan_.offw_cap - plan_.tree_maxdeg)
        if d_prime <= 0:
            raise PlanInfeasible(f"paper profile gives d' = {d_prime} <= 0 at n={n}")
        plan_ = dataclasses.replace(plan_, delta=delta, d_prime=d_prime)
    else:
        # average pentagon-degree is 10 * per_vertex_min; the rest must absorb the slacks
        budget = 10 * sponge.per_vertex_min + plan_.offw_cap + plan_.tree_maxdeg
        if pn <= budget:
            raise PlanInfeasible(f"expected degree {pn:.1f} cannot absorb the desk slacks ({budget})")
    return plan_
