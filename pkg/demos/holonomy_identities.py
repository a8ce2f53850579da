"""Stable and unstable holonomies of a fiber-bunched windowed cocycle, with their algebraic identities."""
import math

import numpy as np

from cocycle_lab import bunching_check
from cocycle_lab.cocycle import LocallyConstantCocycle
from cocycle_lab.holonomy import stable_holonomy, unstable_holonomy, verify_identities
from cocycle_lab.sl2 import Mat2, rotation
from cocycle_lab.symbolic import SymbolSequence, admissible_words, full_shift, splice

rng = np.random.default_rng(4)
sft = full_shift(2, 0)
table = {w: rotation(rng.uniform(-math.pi, math.pi)) @ Mat2.diag(1.1, 1 / 1.1) for w in admissible_words(sft, 3)}
spec = LocallyConstantCocycle(sft, (-1, 1), table, alpha=1.0)
print(f"bunching margin {bunching_check(spec).margin:.4f}")

x = SymbolSequence((0, 1), (1, 1, 0, 1, 0, 0), (1,), -3)
y = splice(SymbolSequence.constant(1), x, 0)   # same future from 0 on, differs at -1
z = splice(SymbolSequence.constant(0), x, -3)

for method in ("exact", "limit"):
    h = stable_holonomy(spec, x, y, method=method)
    print(f"H^s {method:5s}: {h.matrix!r}  steps {h.n_used}, error bound {h.error_bound:.1e}")

r = verify_identities(spec, x, y, z)
print(f"stable: composition {r.composition_residual:.1e}, intertwining {r.intertwining_residual:.1e}")

yu = splice(x, SymbolSequence.constant(0), 0)   # same past up to -1, differs at 0
zu = splice(x, SymbolSequence.constant(1), 2)
h = unstable_holonomy(spec, x, yu)
print(f"H^u: {h.matrix!r}  det {h.matrix.det:.15f}")
r = verify_identities(spec, x, yu, zu, side="unstable")
print(f"unstable: composition {r.composition_residual:.1e}, intertwining {r.intertwining_residual:.1e}")
