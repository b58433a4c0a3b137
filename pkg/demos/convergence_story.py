"""Strong convergence without norm convergence.

Fuzzy functions acting on a fixed vector approach the classical
multiplication operator as Lambda grows, while on the top level of
H_Lambda they never do.
"""
import warnings

from fuzzy_spectra import fuzzy_circle as fc
from fuzzy_spectra import fuzzy_sphere as fs
from fuzzy_spectra import harmonics
from fuzzy_spectra.reports import ConsistencyWarning

warnings.simplefilter("ignore", ConsistencyWarning)

lams = range(1, 9)

# circle: f = u, acting on a spread-out state
phi = {0: 1.0, 1: 0.5, -1: 0.5, 2: 0.25}
table = fc.circle_convergence_scan({1: 1.0}, phi, lams, k_rule="prop33")
print("circle   Lambda   ||(u_hat - u) phi||   edge")
for lam, f, e in zip(table.lams, table.column("f"), table.column("edge")):
    print(f"         {lam:6d}   {f:18.3e}   {e:.3f}")

# sphere: f = Y_1^0 on the ground mode, plus the coordinate errors
y10 = harmonics.from_dict({(1, 0): 1.0})
y00 = harmonics.from_dict({(0, 0): 1.0})
table = fs.sphere_convergence_scan(y10, y00, lams, k_rule="lambda2")
print()
print("sphere   Lambda   ||(Y_hat - Y) phi||   ||(x3_hat - x3) phi||   edge")
for row in zip(table.lams, table.column("f"), table.column("x3"), table.column("edge")):
    print("         {:6d}   {:18.3e}   {:20.3e}   {:.3f}".format(*row))
print("monotone:", table.is_nonincreasing("f"), table.is_nonincreasing("x3"))
