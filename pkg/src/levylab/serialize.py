"""JSON (de)serialization for specs, operators, integrands, problems and configs.

Every on-disk format carries a discriminator field and is validated against
the JSON Schema files shipped in ``levylab/schemas`` before construction;
schema violations surface as ConfigError.
"""

from __future__ import annotations

import json
from importlib import resources

import jsonschema
import numpy as np

from .errors import ConfigError
from .integral import (ConstantRule, HistoryParityRule, NormThresholdRule,
                       SimpleIntegrand, SimpleOperatorRV)
from .levy import (AtomVectorJumps, BrownianMotion, CompoundPoisson,
                   CompoundPoissonCylLevy, DiagonalCylLevy,
                   DriftedCompoundPoisson, GaussianJumps, GaussianVectorJumps,
                   SymmetricAlphaStable, SymmetrizedExponentialJumps,
                   TwoPointJumps)
from .operators import FiniteRankOperator, RankOneTerm
from .spde import (ConstantDiagonalDiffusion, DeterministicInitial,
                   DiagonalLinearDrift, GaussianDiagonalInitial, MildProblem,
                   ScalarFactorDiagonalDiffusion, ScalarFactorDrift,
                   SemigroupSpec, TwoPointDiagonalInitial, ZeroDiffusion,
                   ZeroDrift, heat_semigroup)

_SCHEMA_CACHE: dict = {}


def load_schema(name: str) -> dict:
    if name not in _SCHEMA_CACHE:
        text = resources.files("levylab.schemas").joinpath(f"{name}.schema.json").read_text()
        _SCHEMA_CACHE[name] = json.loads(text)
    return _SCHEMA_CACHE[name]


def validate(instance, schema_name: str) -> None:
    """Check a document against a shipped schema; ConfigError on violation.

    A local registry resolves $ref across the schema files, so validation
    never touches the network.
    """
    from referencing import Registry, Resource
    from referencing.jsonschema import DRAFT202012

    schema = load_schema(schema_name)
    store = {f"levylab/{n}.schema.json": load_schema(n)
             for n in ("levy", "operator", "integrand", "problem", "config")}
    registry = Registry().with_resources(
        (uri, Resource.from_contents(doc, default_specification=DRAFT202012))
        for uri, doc in store.items())
    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    try:
        validator.validate(instance)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"{schema_name} file invalid: {exc.message}") from exc


# ---------------------------------------------------------------------------
# noise specs


def jump_law_to_json(law) -> dict:
    if isinstance(law, TwoPointJumps):
        return {"law": "two_point", "a": law.a}
    if isinstance(law, GaussianJumps):
        return {"law": "gaussian", "sigma": law.sigma}
    if isinstance(law, SymmetrizedExponentialJumps):
        return {"law": "symmetrized_exponential", "theta": law.theta}
    raise ConfigError(f"unknown jump law {type(law)!r}")


def jump_law_from_json(doc: dict):
    law = doc.get("law")
    if law == "two_point":
        return TwoPointJumps(doc["a"])
    if law == "gaussian":
        return GaussianJumps(doc["sigma"])
    if law == "symmetrized_exponential":
        return SymmetrizedExponentialJumps(doc["theta"])
    raise ConfigError(f"unknown jump law discriminator {law!r}")


def one_dim_to_json(spec) -> dict:
    if isinstance(spec, BrownianMotion):
        return {"family": "brownian_motion", "sigma": spec.sigma}
    if isinstance(spec, CompoundPoisson):
        return {"family": "compound_poisson", "rate": spec.rate,
                "jumps": jump_law_to_json(spec.jumps)}
    if isinstance(spec, DriftedCompoundPoisson):
        return {"family": "drifted_compound_poisson", "drift": spec.drift,
                "rate": spec.rate, "jumps": jump_law_to_json(spec.jumps)}
    if isinstance(spec, SymmetricAlphaStable):
        return {"family": "symmetric_alpha_stable", "alpha": spec.alpha,
                "scale": spec.scale}
    raise ConfigError(f"unknown family {type(spec)!r}")


def one_dim_from_json(doc: dict):
    fam = doc.get("family")
    if fam == "brownian_motion":
        return BrownianMotion(doc["sigma"])
    if fam == "compound_poisson":
        return CompoundPoisson(doc["rate"], jump_law_from_json(doc["jumps"]))
    if fam == "drifted_compound_poisson":
        return DriftedCompoundPoisson(doc["drift"], doc["rate"],
                                      jump_law_from_json(doc["jumps"]))
    if fam == "symmetric_alpha_stable":
        return SymmetricAlphaStable(doc["alpha"], doc["scale"])
    raise ConfigError(f"unknown family discriminator {fam!r}")


def cyl_to_json(spec) -> dict:
    if isinstance(spec, DiagonalCylLevy):
        return {"kind": "diagonal", "modes": [one_dim_to_json(m) for m in spec.modes]}
    if isinstance(spec, CompoundPoissonCylLevy):
        jv = spec.jumps
        if isinstance(jv, GaussianVectorJumps):
            jdoc = {"law": "gaussian_diag", "sigmas": list(jv.sigmas)}
        elif isinstance(jv, AtomVectorJumps):
            jdoc = {"law": "atoms", "atoms": [list(v) for v in jv.atoms]}
        else:
            raise ConfigError(f"unknown vector jump law {type(jv)!r}")
        return {"kind": "compound_poisson", "rate": spec.rate, "jump_vector": jdoc}
    raise ConfigError(f"unknown cylindrical kind {type(spec)!r}")


def cyl_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "diagonal":
        return DiagonalCylLevy(tuple(one_dim_from_json(m) for m in doc["modes"]))
    if kind == "compound_poisson":
        jdoc = doc["jump_vector"]
        if jdoc["law"] == "gaussian_diag":
            jumps = GaussianVectorJumps(tuple(jdoc["sigmas"]))
        elif jdoc["law"] == "atoms":
            jumps = AtomVectorJumps(tuple(tuple(v) for v in jdoc["atoms"]))
        else:
            raise ConfigError(f"unknown vector jump law {jdoc.get('law')!r}")
        return CompoundPoissonCylLevy(doc["rate"], jumps)
    raise ConfigError(f"unknown cylindrical discriminator {kind!r}")


# ---------------------------------------------------------------------------
# operators and integrands


def operator_to_json(op: FiniteRankOperator) -> dict:
    doc = {"matrix": [[float(v) for v in row] for row in op.matrix],
           "domain_norm": op.domain_norm, "codomain_norm": op.codomain_norm}
    if op.decomposition is not None:
        doc["decomposition"] = [
            {"functional": [float(v) for v in t.functional],
             "vector": [float(v) for v in t.vector]} for t in op.decomposition]
    return doc


def operator_from_json(doc: dict) -> FiniteRankOperator:
    dec = None
    if "decomposition" in doc:
        dec = tuple(RankOneTerm(np.asarray(t["functional"], dtype=float),
                                np.asarray(t["vector"], dtype=float))
                    for t in doc["decomposition"])
    return FiniteRankOperator(np.asarray(doc["matrix"], dtype=float),
                              doc["domain_norm"], doc["codomain_norm"], dec)


_RULES = {"constant": (ConstantRule, "index"),
          "history-parity": (HistoryParityRule, "coordinate"),
          "norm-threshold": (NormThresholdRule, "threshold")}


def rule_to_json(rule) -> dict:
    if isinstance(rule, ConstantRule):
        return {"kind": "constant", "index": rule.index}
    if isinstance(rule, HistoryParityRule):
        return {"kind": "history-parity", "coordinate": rule.coordinate}
    if isinstance(rule, NormThresholdRule):
        return {"kind": "norm-threshold", "threshold": rule.threshold}
    raise ConfigError(f"unknown rule {type(rule)!r}")


def rule_from_json(doc: dict):
    kind = doc.get("kind")
    if kind not in _RULES:
        raise ConfigError(f"unknown rule kind {kind!r}")
    cls, arg = _RULES[kind]
    return cls(doc[arg]) if arg in doc else cls()


def integrand_to_json(integrand: SimpleIntegrand) -> dict:
    return {"partition": list(integrand.partition),
            "intervals": [{"rule": rule_to_json(rv.rule),
                           "operators": [operator_to_json(op) for op in rv.operators]}
                          for rv in integrand.values]}


def integrand_from_json(doc: dict) -> SimpleIntegrand:
    ts = tuple(float(t) for t in doc["partition"])
    values = []
    for t, iv in zip(ts[:-1], doc["intervals"]):
        ops = tuple(operator_from_json(o) for o in iv["operators"])
        values.append(SimpleOperatorRV(rule_from_json(iv["rule"]), ops, t))
    return SimpleIntegrand(ts, tuple(values))


# ---------------------------------------------------------------------------
# problems


def problem_from_json(doc: dict) -> tuple[MildProblem, int, dict]:
    """Build a MildProblem plus its grid size and beta policy from a file doc."""
    semi_doc = doc["semigroup"]
    if "heat" in semi_doc:
        semi = heat_semigroup(int(semi_doc["heat"]))
    else:
        semi = SemigroupSpec(tuple(semi_doc["eigenvalues"]))
    drift = _drift_from_json(doc["drift"])
    diffusion = _diffusion_from_json(doc["diffusion"])
    noise = cyl_from_json(doc["noise"])
    initial = _initial_from_json(doc["initial"])
    problem = MildProblem(semi, drift, diffusion, noise, initial,
                          float(doc["horizon"]), float(doc["p"]))
    return problem, int(doc["grid"]["n_steps"]), doc["beta"]


def _drift_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "zero":
        return ZeroDrift()
    if kind == "constant-diag":
        return DiagonalLinearDrift(tuple(doc["coefficients"]))
    if kind == "scalar-factor-diag":
        return ScalarFactorDrift(tuple(doc["coefficients"]), doc["factor"])
    raise ConfigError(f"unknown drift kind {kind!r}")


def _diffusion_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "zero":
        return ZeroDiffusion()
    if kind == "constant-diag":
        return ConstantDiagonalDiffusion(tuple(doc["coefficients"]))
    if kind == "scalar-factor-diag":
        return ScalarFactorDiagonalDiffusion(tuple(doc["coefficients"]), doc["factor"])
    raise ConfigError(f"unknown diffusion kind {kind!r}")


def _initial_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "deterministic":
        return DeterministicInitial(tuple(doc["value"]))
    if kind == "gaussian_diag":
        return GaussianDiagonalInitial(tuple(doc["sigmas"]))
    if kind == "two_point_diag":
        return TwoPointDiagonalInitial(tuple(doc["a"]))
    raise ConfigError(f"unknown initial kind {kind!r}")


# ---------------------------------------------------------------------------
# file helpers


def read_validated(path, schema_name: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    validate(doc, schema_name)
    return doc


def load_cyl_spec(path):
    return cyl_from_json(read_validated(path, "levy"))


def load_operator(path):
    return operator_from_json(read_validated(path, "operator"))


def load_integrand(path):
    return integrand_from_json(read_validated(path, "integrand"))


def load_problem(path):
    return problem_from_json(read_validated(path, "problem"))
