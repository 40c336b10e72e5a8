"""Quick check of the compiled module: run after `maturin develop`."""

import math

import qgrowth

assert abs(qgrowth.qexp(0.5, qgrowth.qln(0.5, 3.0)) - 3.0) < 1e-12
assert qgrowth.qexp_clamp_boundary(2.0) == -0.5
b = qgrowth.inc_beta(2.0, 2.0, 0.5)
assert abs(b - 1.0 / 12.0) < 1e-12
assert abs(qgrowth.inc_beta_inverse(b, 2.0, 2.0) - 0.5) < 1e-8

params = qgrowth.model_table("Richards", {"q": 0.5, "kappa": 0.8, "p0": 0.01})
assert params.q == 0.5 and params.p0 == 0.01

times = [10.0 * i / 49 for i in range(50)]
traj = qgrowth.solve("Richards", {"q": 0.5, "kappa": 0.8, "p0": 0.01}, times)
assert traj.method == "analytic" and len(traj) == 50
assert all(f == "ok" for f in traj.flags)

ode = qgrowth.integrate(params, times)
assert max(abs(a - b) for a, b in zip(traj.values, ode.values)) < 1e-6

sch = qgrowth.solve("RichardsSchaefer", {"q": 2, "epsilon": -0.1, "kappa": 1}, [0.0, 50.0])
assert abs(sch.values[-1] - math.sqrt(0.8)) < 1e-6

fit = qgrowth.fit("Richards", times, traj.values, ["q", "kappa", "p0"], {"q": 0.75, "kappa": 1.2, "p0": 0.015})
assert fit.converged
for name, truth in {"q": 0.5, "kappa": 0.8, "p0": 0.01}.items():
    assert abs(fit.free_values[name] / truth - 1) < 1e-3, (name, fit.free_values[name])

assert len(qgrowth.table()) == 13

try:
    qgrowth.GrowthParams(p0=-1.0)
except ValueError as e:
    assert "p0" in str(e)
else:
    raise AssertionError("negative p0 accepted")

print("smoke test passed")
