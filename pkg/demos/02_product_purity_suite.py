"""
Product purity for entrywise-positive channels
==============================================

For a completely positive map ``Phi`` whose Choi matrix has nonnegative
entries, the maximal output t-norm is multiplicative against any CP map
``Omega`` at integer t.  We run a small seeded suite and look at the
ratio ``nu_t(Phi x Omega) / (nu_t(Phi) nu_t(Omega))``.
"""

from epmult import channels as ch
from epmult.norms import OptimizerConfig
from epmult.verify import SuiteConfig, check_theorem2, run_suite

# a single case first: two depolarizing channels
K = ch.depolarizing(2, 0.5)
rep = check_theorem2(K, K, 2)
print(f"depolarizing x depolarizing: lhs={rep.lhs:.8f} rhs={rep.rhs:.8f} ratio={rep.ratio:.10f}")

# a canonical qubit map (t2 = 0, |lambda1| >= |lambda2|) against a random CP map
Phi = ch.qubit_from_diagonal(ch.random_ep_qubit_params(seed=3))
Omega = ch.random_cp_channel(3, 3, 2, seed=4)
rep = check_theorem2(Phi, Omega, 3)
print(f"canonical qubit x random CP: ratio={rep.ratio:.10f} passed={rep.passed}")

# a seeded suite of random cases
cfg = SuiteConfig(theorem="thm2", cases=10, t_values=(2, 3), seed=7,
                  optimizer=OptimizerConfig(restarts=16))
res = run_suite(cfg)
for r in res.reports:
    fams = " x ".join(c["family"] for c in r.channels)
    print(f"{r.case_id}  t={r.t}  {fams:<28} ratio={r.ratio:.10f}  {r.status}")
print("summary:", {k: res.summary[k] for k in ("cases", "passed", "failed", "rejected")})
