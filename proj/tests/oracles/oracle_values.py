"""Independent reference values frozen into the C++ unit tests.

Everything here is computed with mpmath/scipy and never touches the C++
library. Re-run with `python3 tests/oracles/oracle_values.py`.
"""
import mpmath as mp
from scipy import integrate, optimize, stats
import numpy as np

mp.mp.dps = 40


def exp_power_log_f(z, sigma):
    return lambda x: -abs(x / sigma) ** z / z


def truncated_cumulants(log_f, h, beta):
    w = lambda x: mp.e ** (beta * log_f(x))
    C = mp.quad(w, [-h, 0, h])
    M = mp.quad(lambda x: log_f(x) * w(x), [-h, 0, h]) / C
    I = mp.quad(lambda x: (log_f(x) - M) ** 2 * w(x), [-h, 0, h]) / C
    J = mp.quad(lambda x: (log_f(x) - M) ** 3 * w(x), [-h, 0, h]) / C
    return mp.log(C), M, I, J


def truncated_variance(log_f, h, beta):
    w = lambda x: mp.e ** (beta * log_f(x))
    C = mp.quad(w, [-h, 0, h])
    return mp.quad(lambda x: x * x * w(x), [-h, 0, h]) / C


def show(name, value):
    print(f"{name:48s} {mp.nstr(value, 17)}")


gauss = exp_power_log_f(2, 1)
for beta in (1, 0.5, 0.25):
    lc, M, I, J = truncated_cumulants(gauss, 8, mp.mpf(beta))
    show(f"gauss h=8 beta={beta} logC", lc)
    show(f"gauss h=8 beta={beta} M", M)
    show(f"gauss h=8 beta={beta} I", I)
    show(f"gauss h=8 beta={beta} J", J)

show("gauss h=8 beta=1 Var(X)", truncated_variance(gauss, 8, 1))
show("gauss h=8 beta=0.25 Var(X)", truncated_variance(gauss, 8, mp.mpf(0.25)))

laplace = exp_power_log_f(1, 2)
lc, M, I, J = truncated_cumulants(laplace, 10, mp.mpf(0.7))
show("laplace sigma=2 h=10 beta=0.7 logC", lc)
show("laplace sigma=2 h=10 beta=0.7 M", M)
show("laplace sigma=2 h=10 beta=0.7 I", I)
show("laplace sigma=2 h=10 beta=0.7 J", J)
z3 = exp_power_log_f(3, 1.5)
lc, M, I, J = truncated_cumulants(z3, 2, mp.mpf(0.3))
show("z=3 sigma=1.5 h=2 beta=0.3 logC", lc)
show("z=3 sigma=1.5 h=2 beta=0.3 I", I)

# Tail truncation effect on D for z=1 at 8 scale lengths.
lc, M, I, J = truncated_cumulants(exp_power_log_f(1, 1), 8, mp.mpf(1))
show("laplace h=8 beta=1 I (untruncated = 1)", I)

# Normal CDF pieces.
Phi = lambda x: mp.ncdf(x)
phi = lambda x: mp.npdf(x)
show("8 Phi(-1)", 8 * Phi(-1))
show("phi(1)", phi(1))
g = lambda m: 2 * Phi(-m) - m * phi(m)
m_hat = mp.findroot(g, 1.19)
show("m_hat", m_hat)
show("2 Phi(-m_hat)", 2 * Phi(-m_hat))
show("ell_hat K=1 sigma=1", 2 * m_hat)

# Two regions, weights (0.5, 0.5), I ratio 1:16.
w = np.array([0.5, 0.5])
I = np.array([1.0, 16.0])
sig = np.sqrt(I[:, None] + I[None, :])
acc = lambda l: float(np.sum(np.outer(w, w) * 2 * stats.norm.cdf(-l * sig / 2)))
res = optimize.minimize_scalar(lambda l: -l * l * acc(l), bounds=(1e-6, 10), method="bounded",
                               options={"xatol": 1e-12})
# polish on dE/dl = 0 at high precision
sig_mp = [[mp.sqrt(mp.mpf(a) + b) for b in (1, 16)] for a in (1, 16)]
dE = lambda l: sum(mp.mpf(0.25) * (2 * l * 2 * Phi(-l * s / 2) - l * l * s * phi(l * s / 2))
                   for row in sig_mp for s in row)
ell_het = mp.findroot(dE, res.x)
a_het = sum(mp.mpf(0.25) * 2 * Phi(-ell_het * s / 2) for row in sig_mp for s in row)
show("hetero 1:16 ell_hat", ell_het)
show("hetero 1:16 a_hat", a_het)

# Swap acceptance a(ell, d=1) for K=1 Gaussian h=8, beta=0.5, ell=0.4 by 2-D quadrature.
beta, ell, h = 0.5, 0.4, 8.0
bp = beta + ell
Cb = integrate.quad(lambda x: np.exp(-beta * x * x / 2), -h, h, epsabs=1e-14)[0]
Cbp = integrate.quad(lambda x: np.exp(-bp * x * x / 2), -h, h, epsabs=1e-14)[0]
def inner(x):
    # x at beta, y at beta'; B = eps*(log f(x) - log f(y)) with C terms cancelling.
    px = np.exp(-beta * x * x / 2) / Cb
    f = lambda y: np.exp(-bp * y * y / 2) / Cbp * min(1.0, np.exp(ell * (-x * x / 2 + y * y / 2)))
    return px * integrate.quad(f, -h, h, epsabs=1e-13, points=[-abs(x), abs(x)], limit=200)[0]
a1 = integrate.quad(inner, -h, h, epsabs=1e-12, limit=200)[0]
print(f"{'a(ell=0.4, d=1) gauss beta=0.5 h=8':48s} {a1:.12f}")

# Exact finite-d swap acceptance for untruncated Gaussian regions.
# |x|^2 = S / beta, |y|^2 = T / beta' with S, T ~ chi2_d, and
# B = (eps/2)(T/beta' - S/beta); the normalizing constants cancel.
def gaussian_acceptance(beta, ell, d):
    eps = ell / np.sqrt(d)
    bp = beta + eps
    c1 = eps / (2 * bp)
    c2 = eps / (2 * beta)
    chi = stats.chi2(d)
    tilt = (1 - 2 * c1) ** (-d / 2)

    def given_s(s):
        t_star = c2 * s / c1
        below = np.exp(-c2 * s) * tilt * chi.cdf(t_star * (1 - 2 * c1))
        return below + chi.sf(t_star)

    lo, hi = chi.ppf(1e-16), chi.ppf(1 - 1e-16)
    return integrate.quad(lambda s: given_s(s) * chi.pdf(s), lo, hi, epsabs=1e-13,
                          epsrel=1e-12, limit=500)[0]


m_hat_f = float(m_hat)
for d in (4, 16, 64, 256):
    beta, ell = 0.5, m_hat_f
    if beta + ell / np.sqrt(d) <= 1:
        print(f"{'gauss exact a(m_hat, d=%d) beta=0.5' % d:48s} "
              f"{gaussian_acceptance(beta, ell, d):.12f}")
print(f"{'gauss exact a(0.4, d=1) beta=0.5':48s} {gaussian_acceptance(0.5, 0.4, 1):.12f}")
print(f"{'gauss exact a(2, d=256) beta=0.5':48s} {gaussian_acceptance(0.5, 2.0, 256):.12f}")
beta, ell, d = 0.5, 2.0, 256
bp = beta + ell / np.sqrt(d)
print(f"{'gauss exact B mean (l=2, d=256, beta=0.5)':48s} {-ell**2 / (2 * beta * bp):.12f}")
print(f"{'gauss exact B var (l=2, d=256, beta=0.5)':48s} "
      f"{ell**2 * (1 / (2 * beta**2) + 1 / (2 * bp**2)):.12f}")
