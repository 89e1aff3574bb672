"""Loading definition files (JSON) for algebras, crossed modules, bigons and morphisms.

A reference to a definition may be an inline object, a path (relative to
the referring file), ``builtin:<name>`` or ``demo:<name>`` for the files
shipped in ``lie2int/demos``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import LieAlgCrossedModule, LieAlgebra, derivation_crossed_module
from .catalog import (
    builtin_algebra,
    default_realization,
    derivation_group_crossed_module,
    tautological_realization,
)
from .groups import GrpCrossedModule, MatrixRealization
from .morphisms import LinfMorphism, Splitting, extension_to_morphism
from .paths import (
    BigonData,
    PathGenerator,
    SampledPath,
    SurfaceGenerator,
    flow_bigon,
    flow_homotopy,
    random_bigon,
)


class InputError(ValueError):
    """A definition file is missing, malformed or inconsistent."""


@dataclass
class Loader:
    """Resolves references and records a sha256 for every file read."""

    hashes: dict = field(default_factory=dict)

    def read(self, ref, base: Path | None = None):
        """Return ``(document, directory)`` for a reference."""
        if isinstance(ref, dict):
            return ref, base
        if not isinstance(ref, str):
            raise InputError(f"cannot interpret reference {ref!r}")
        if ref.startswith("builtin:"):
            return {"builtin": ref[len("builtin:"):]}, base
        if ref.startswith("demo:"):
            name = ref[len("demo:"):]
            res = resources.files("lie2int") / "demos" / f"{name}.json"
            if not res.is_file():
                raise InputError(f"no demo named {name!r}")
            text = res.read_text()
            self.hashes[ref] = hashlib.sha256(text.encode()).hexdigest()
            return self._parse(text, ref), None
        path = Path(ref) if base is None or Path(ref).is_absolute() else base / ref
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.hashes[str(path)] = hashlib.sha256(raw).hexdigest()
        return self._parse(raw.decode(), str(path)), path.parent

    @staticmethod
    def _parse(text, where):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{where}: invalid JSON ({exc})") from None

    # -- algebras and crossed modules ---------------------------------------------------

    def algebra(self, ref, base=None) -> LieAlgebra:
        doc, base = self.read(ref, base)
        if "builtin" in doc:
            try:
                return builtin_algebra(doc["builtin"])
            except ValueError as exc:
                raise InputError(str(exc)) from None
        try:
            c = np.array(doc["c"], dtype=float)
        except KeyError:
            raise InputError("algebra definition needs 'c' or 'builtin'") from None
        dim = doc.get("dim", c.shape[0] if c.ndim else 0)
        if c.shape != (dim, dim, dim):
            raise InputError(f"'c' has shape {c.shape}, expected {(dim,) * 3}")
        return LieAlgebra(c, label=doc.get("label", ""))

    def realization(self, ref, algebra: LieAlgebra, base=None) -> MatrixRealization:
        doc, base = self.read(ref, base)
        try:
            return MatrixRealization(
                algebra, np.array(doc["matrices"], dtype=float),
                faithful=bool(doc.get("faithful", True)),
                simply_connected=bool(doc.get("simply_connected", False)),
                label=doc.get("label", ""),
            )
        except KeyError:
            raise InputError("realization needs 'matrices'") from None
        except ValueError as exc:
            raise InputError(f"realization: {exc}") from None

    def crossed_module(self, ref, base=None) -> GrpCrossedModule:
        """Crossed module with realizations.

        Forms: ``{"builtin": "derivation:<algebra>"}``, ``{"derivation_of": <algebra>}``
        or explicit ``{"h1", "h0", "dt", "phi"}``; optional ``R0``/``R1``.
        """
        doc, base = self.read(ref, base)
        name = doc.get("builtin")
        if name is not None:
            if not name.startswith("derivation:"):
                raise InputError(f"unknown built-in crossed module {name!r}")
            k = self.algebra("builtin:" + name[len("derivation:"):], base)
            return derivation_group_crossed_module(k)
        if "derivation_of" in doc:
            cm = derivation_crossed_module(self.algebra(doc["derivation_of"], base))
        else:
            try:
                h1 = self.algebra(doc["h1"], base)
                h0 = self.algebra(doc["h0"], base)
                cm = LieAlgCrossedModule(h1, h0, np.array(doc["dt"], dtype=float),
                                         np.array(doc["phi"], dtype=float),
                                         label=doc.get("label", ""))
            except KeyError as exc:
                raise InputError(f"crossed module definition lacks {exc}") from None
            except ValueError as exc:
                raise InputError(f"crossed module: {exc}") from None
        if "R0" in doc:
            R0 = self.realization(doc["R0"], cm.h0, base)
        elif "basis" in cm.diagnostics:
            R0 = tautological_realization(cm)
        else:
            R0 = default_realization(cm.h0)
        R1 = self.realization(doc["R1"], cm.h1, base) if "R1" in doc else default_realization(cm.h1)
        return GrpCrossedModule(cm, R0, R1, label=cm.label)

    # -- paths and bigons -----------------------------------------------------------------

    @staticmethod
    def path_generator(doc) -> PathGenerator:
        try:
            return PathGenerator(doc["kind"], doc["coeffs"], doc.get("envelope", "none"))
        except KeyError as exc:
            raise InputError(f"path descriptor lacks {exc}") from None

    def path(self, doc, algebra: LieAlgebra, n: int) -> SampledPath:
        if "samples" in doc:
            return SampledPath(algebra, np.array(doc["samples"], dtype=float),
                               based=bool(doc.get("based", False)))
        return self.path_generator(doc).sample(algebra, n)

    @staticmethod
    def surface(doc, dim: int) -> SurfaceGenerator:
        if doc is None:
            return SurfaceGenerator.zero(dim)
        try:
            gen = SurfaceGenerator(doc["kind"], doc["coeffs"])
        except KeyError as exc:
            raise InputError(f"surface descriptor lacks {exc}") from None
        if gen.dim != dim:
            raise InputError(f"surface has {gen.dim} components, expected {dim}")
        return gen

    def bigon(self, ref, N: int, M: int, seed: int = 0, base=None):
        """Return ``(gcm, bigon)``.

        Forms: explicit grids ``a, b, z``; generators ``source`` + ``b`` + ``z``
        (``a`` by integrating the defining equation in s); or ``random``.
        """
        doc, base = self.read(ref, base)
        gcm = self.crossed_module(doc.get("crossed_module", "builtin:derivation:so3"), base)
        A = gcm.two_algebra
        try:
            if "a" in doc:
                B = BigonData(A, doc["a"], doc["b"], doc["z"])
            elif "random" in doc:
                opts = doc["random"]
                rng = np.random.default_rng(opts.get("seed", seed))
                B = random_bigon(A, N, M, rng, scale=opts.get("scale", 0.5))
            else:
                a0 = self.path(doc["source"], A.h0, N)
                B = flow_bigon(A, a0, self.surface(doc.get("b"), A.dim0),
                               self.surface(doc.get("z"), A.dim1), M)
        except KeyError as exc:
            raise InputError(f"bigon definition lacks {exc}") from None
        except ValueError as exc:
            raise InputError(f"bigon: {exc}") from None
        return gcm, B

    def morphism(self, ref, N: int, M: int, base=None):
        """Return ``(morphism, target crossed module, a, b)``.

        The morphism is given by an ``extension`` (algebra, ideal, section)
        or by explicit ``mu``/``nu`` with a ``target`` crossed module.  The
        g-homotopy ``(a, b)`` comes from ``homotopy: {source, b}``.
        """
        doc, base = self.read(ref, base)
        try:
            if "extension" in doc:
                ext = doc["extension"]
                hat_g = self.algebra(ext["algebra"], base)
                split = Splitting(tuple(ext["ideal"]), np.array(ext["section"], dtype=float))
                f = extension_to_morphism(hat_g, split)
                cm = f.meta["cm"]
                gcm = GrpCrossedModule(cm, tautological_realization(cm), default_realization(cm.h1))
            else:
                gcm = self.crossed_module(doc["target"], base)
                g = self.algebra(doc["source"], base)
                f = LinfMorphism(g, gcm.two_algebra, np.array(doc["mu"], dtype=float),
                                 np.array(doc["nu"], dtype=float))
            hom = doc.get("homotopy", {})
            a0 = self.path(hom["source"], f.source, N) if "source" in hom else \
                SampledPath.zero(f.source, N)
            a, b = flow_homotopy(f.source, a0, self.surface(hom.get("b"), f.source.dim), M)
        except KeyError as exc:
            raise InputError(f"morphism definition lacks {exc}") from None
        except ValueError as exc:
            raise InputError(f"morphism: {exc}") from None
        return f, gcm, a, b
