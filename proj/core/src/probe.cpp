#include "hrb/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrb/lab.hpp"
#include "hrb/special.hpp"

namespace hrb {

namespace {

/// rho_n from the oracle: (-1)^ell div^ell h shifted, over g_n^{p-1}.
DDouble rho_from_oracle(const SeqOracle& g, long n) {
    DDouble num(0.0);
    double sign = 1.0;
    for (long i = 0; i <= g.ell; ++i) {
        num += DDouble(sign * binomial(g.ell, i)) * g.h(n - g.ell + i);
        sign = -sign;
    }
    return num / signed_pow(g.value(n), g.p - 1.0);
}

/// least squares slope of log y against log log N, over the last half of the
/// list only (the bounds are asymptotic); returns 0 with < 2 usable points
double loglog_slope(const std::vector<long>& Ns, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    size_t first = Ns.size() > 3 ? Ns.size() / 2 - (Ns.size() % 2 == 0 ? 1 : 0) : 0;
    for (size_t i = first; i < Ns.size(); ++i) {
        if (ys[i] > 0.0 && Ns[i] >= 3) {
            lx.push_back(std::log(std::log(static_cast<double>(Ns[i]))));
            ly.push_back(std::log(ys[i]));
        }
    }
    if (lx.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    double nn = static_cast<double>(lx.size());
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

}  // namespace

double eta(double x, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::domain_error("eta: epsilon must be in (0, 1/2)");
    double s = (x - epsilon) / (1.0 - 2.0 * epsilon);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double f = std::exp(-1.0 / s), g = std::exp(-1.0 / (1.0 - s));
    return f / (f + g);
}

double xi_profile(const CutoffSpec& spec, double x) {
    if (!(x > 0.0)) throw std::domain_error("xi_profile: x must be positive");
    if (spec.N < 2) throw std::domain_error("xi_profile: N must be >= 2");
    double N = static_cast<double>(spec.N);
    double lN = std::log(N), lx = std::log(x);
    if (spec.kind == CutoffKind::truncation) {
        if (x <= N) return 1.0;
        if (x <= N * N) return eta((2.0 * lN - lx) / lN, spec.epsilon);
        return 0.0;
    }
    // bump
    if (x <= N) return 0.0;
    if (x <= N * N) return eta((lx - lN) / lN, spec.epsilon);
    if (x <= 2.0 * N * N) return 1.0;
    double top = std::log(2.0) + 3.0 * lN;  // log(2 N^3)
    if (x <= 2.0 * N * N * N) return eta((top - lx) / lN, spec.epsilon);
    return 0.0;
}

long cutoff_support_hi(const CutoffSpec& spec) {
    long N = spec.N;
    return spec.kind == CutoffKind::truncation ? N * N : 2 * N * N * N;
}

LatticeSeq build_uN(long ell, double p, const CutoffSpec& spec) {
    long hi = cutoff_support_hi(spec);
    if (hi > 4'000'000)
        throw std::domain_error("build_uN: window too large to materialize");
    SeqOracle g = make_g_oracle_cached(ell, p, hi + 1);
    long lo = spec.kind == CutoffKind::truncation ? ell : std::max(ell, spec.N + 1);
    return LatticeSeq::sample(
        lo, hi,
        [&](long n) {
            double xi = xi_profile(spec, static_cast<double>(n));
            return cplx(xi == 0.0 ? 0.0 : xi * g.value(n).to_double(), 0.0);
        },
        ell);
}

SweepResult criticality_sweep(long ell, double p, const std::vector<long>& N_list,
                              double epsilon) {
    SweepResult res;
    std::vector<long> Ns;
    std::vector<double> rems;
    for (long N : N_list) {
        CutoffSpec spec{CutoffKind::truncation, N, epsilon};
        long n_top = cutoff_support_hi(spec) + 2 * ell + 4;
        SeqOracle g = make_g_oracle_cached(ell, p, n_top);
        LatticeSeq u = build_uN(ell, p, spec);

        SweepRecord rec;
        rec.N = N;
        rec.lhs = lp_energy(u, ell, p);
        DDouble rhs(0.0);
        for (long n = std::max(u.lo(), ell); n <= u.hi(); ++n) {
            double a = std::abs(u.value(n));
            if (a > 0.0) rhs += rho_from_oracle(g, n) * DDouble(std::pow(a, p));
        }
        rec.rhs = rhs.to_double();
        double rem = 0.0;
        for (long k = 1; k <= ell; ++k) rem += remainder_R_k(ell, k, p, p, g, u);
        rec.remainder = rem;
        rec.quotient = rec.rhs > 0.0 ? rec.lhs / rec.rhs : 0.0;
        res.records.push_back(rec);
        Ns.push_back(N);
        rems.push_back(rem);
    }
    res.fitted_rate = -loglog_slope(Ns, rems);
    res.inconclusive = p < 1.3;
    return res;
}

SweepResult optimality_sweep(long ell, double p, const std::vector<long>& N_list,
                             double epsilon) {
    DDouble inv_q = DDouble(1.0) - DDouble(1.0) / DDouble(p);
    DDouble c = pochhammer(inv_q, ell);
    SweepResult res;
    std::vector<long> Ns;
    std::vector<double> rems;

    for (long N : N_list) {
        CutoffSpec spec{CutoffKind::bump, N, epsilon};
        long hi = cutoff_support_hi(spec);
        long n_top = hi + 2 * ell + 4;

        // ring buffers over a sliding window; slot(n) = n mod W
        const long W = ell + 4;
        std::vector<DDouble> gb(static_cast<size_t>(W)), hb(static_cast<size_t>(W));
        std::vector<double> ub(static_cast<size_t>(W)), xb(static_cast<size_t>(W));
        auto slot = [&](long n) { return static_cast<size_t>(n % W); };

        DDouble g = exp(stirling_log_gamma(DDouble(static_cast<double>(ell)) + inv_q));
        DDouble r = exp(stirling_log_gamma(inv_q));
        DDouble lhs(0.0), den(0.0), rem(0.0);

        auto grad_g = [&](long k, long n) {  // grad^k g at n, from the buffer
            DDouble s(0.0);
            double sign = 1.0;
            for (long j = 0; j <= k; ++j) {
                s += DDouble(sign * binomial(k, j)) * gb[slot(n - j)];
                sign = -sign;
            }
            return s;
        };
        auto grad_u = [&](long k, long n) {
            double s = 0.0, sign = 1.0;
            for (long j = 0; j <= k; ++j) {
                s += sign * binomial(k, j) * ub[slot(n - j)];
                sign = -sign;
            }
            return s;
        };

        for (long n = 0; n <= n_top; ++n) {
            // fill site n
            if (n < ell) {
                gb[slot(n)] = DDouble(0.0);
            } else {
                gb[slot(n)] = g;
                g = g * (DDouble(static_cast<double>(n)) + inv_q) /
                    DDouble(static_cast<double>(n - ell + 1));
            }
            hb[slot(n)] = (p == 2.0) ? c * r : pow(c * r, p - 1.0);
            r = r * (DDouble(static_cast<double>(n)) + inv_q) /
                DDouble(static_cast<double>(n + 1));
            double xi = (n >= 1 && n <= hi) ? xi_profile(spec, static_cast<double>(n)) : 0.0;
            xb[slot(n)] = xi;
            ub[slot(n)] = xi == 0.0 ? 0.0 : xi * gb[slot(n)].to_double();

            // process site s = n - 1 once its whole stencil reach is filled
            long s = n - 1;
            if (s < ell) continue;
            bool all_zero = true, all_same = true;
            double x0 = xb[slot(s - ell)];
            for (long j = s - ell; j <= s + 1; ++j) {
                if (xb[slot(j)] != 0.0) all_zero = false;
                if (xb[slot(j)] != x0) all_same = false;
            }
            if (all_zero) continue;

            double gl = grad_u(ell, s);
            if (gl != 0.0) lhs += DDouble(std::pow(std::fabs(gl), p));
            double us = ub[slot(s)];
            if (us != 0.0) {
                DDouble num(0.0);
                double sign = 1.0;
                for (long i = 0; i <= ell; ++i) {
                    num += DDouble(sign * binomial(ell, i)) * hb[slot(s - ell + i)];
                    sign = -sign;
                }
                double rho = num.to_double() / std::pow(gb[slot(s)].to_double(), p - 1.0);
                den += DDouble(rho * std::pow(std::fabs(us), p));
            }
            if (all_same) continue;  // u proportional to g across the stencil

            for (long k = 1; k <= ell; ++k) {
                double Gn = grad_g(k - 1, s).to_double();
                double Gn1 = grad_g(k - 1, s + 1).to_double();
                if (!(Gn > 0.0) || !(Gn1 > 0.0)) continue;
                double Un = grad_u(k - 1, s), Un1 = grad_u(k - 1, s + 1);
                double cross = std::sqrt(Gn / Gn1) * Un1 - std::sqrt(Gn1 / Gn) * Un;
                double small;
                if (p <= 2.0) {
                    small = std::pow(std::fabs(cross), p);
                } else {
                    double base = std::fabs(Un1 - Un) + std::fabs(Un) / Gn * (Gn1 - Gn);
                    small = base == 0.0 ? 0.0 : cross * cross * std::pow(base, p - 2.0);
                }
                if (small == 0.0) continue;
                DDouble num(0.0);
                double sign = 1.0;
                long m = ell - k;
                for (long i = 0; i <= m; ++i) {
                    num += DDouble(sign * binomial(m, i)) * hb[slot(s + 1 - ell + i)];
                    sign = -sign;
                }
                double dk = grad_g(k, s + 1).to_double();
                rem += DDouble(num.to_double() / signed_pow(dk, p - 1.0) * small);
            }
        }

        SweepRecord rec;
        rec.N = N;
        rec.lhs = lhs.to_double();
        rec.rhs = den.to_double();
        rec.remainder = rem.to_double();
        rec.quotient = rec.rhs > 0.0 ? rec.lhs / rec.rhs : 0.0;
        res.records.push_back(rec);
        Ns.push_back(N);
        rems.push_back(rec.remainder);
    }
    res.fitted_rate = -loglog_slope(Ns, rems);
    res.inconclusive = p < 1.3;
    return res;
}

double p2_quotient_oracle(long ell, const WeightSpec& w, long m, long M,
                          double weight_scale, const PrecisionCtx& ctx) {
    if (m < ell) throw std::domain_error("p2_quotient_oracle: m must be >= ell");
    if (M <= m) throw std::domain_error("p2_quotient_oracle: M must be > m");
    long d = M - m + 1;
    std::vector<double> A(static_cast<size_t>(d * d), 0.0);
    auto at = [&](std::vector<double>& mat, long i, long j) -> double& {
        return mat[static_cast<size_t>(i * d + j)];
    };
    // A = B^T B with B the grad^ell stencil on columns [m, M]
    std::vector<double> cj(static_cast<size_t>(ell) + 1);
    for (long j = 0; j <= ell; ++j)
        cj[static_cast<size_t>(j)] = ((j % 2) ? -1.0 : 1.0) * binomial(ell, j);
    for (long n = m; n <= M + ell; ++n) {
        for (long j1 = 0; j1 <= ell; ++j1) {
            long i1 = n - j1 - m;
            if (i1 < 0 || i1 >= d) continue;
            for (long j2 = 0; j2 <= ell; ++j2) {
                long i2 = n - j2 - m;
                if (i2 < 0 || i2 >= d) continue;
                at(A, i1, i2) += cj[static_cast<size_t>(j1)] * cj[static_cast<size_t>(j2)];
            }
        }
    }
    std::vector<double> D(static_cast<size_t>(d));
    for (long i = 0; i < d; ++i) {
        double v = weight_value(w, m + i, ctx) * weight_scale;
        if (!(v > 0.0)) throw std::domain_error("p2_quotient_oracle: weight must be > 0");
        D[static_cast<size_t>(i)] = v;
    }

    // dense Cholesky A = L L^T (A is positive definite: grad^ell is injective
    // on finitely supported sequences)
    std::vector<double> L(A);
    for (long j = 0; j < d; ++j) {
        double s = at(L, j, j);
        for (long k = 0; k < j; ++k) s -= at(L, j, k) * at(L, j, k);
        if (!(s > 0.0)) throw std::runtime_error("p2_quotient_oracle: Cholesky failed");
        double ljj = std::sqrt(s);
        at(L, j, j) = ljj;
        for (long i = j + 1; i < d; ++i) {
            double t = at(L, i, j);
            for (long k = 0; k < j; ++k) t -= at(L, i, k) * at(L, j, k);
            at(L, i, j) = t / ljj;
        }
    }
    auto solve = [&](std::vector<double>& x) {
        for (long i = 0; i < d; ++i) {
            double t = x[static_cast<size_t>(i)];
            for (long k = 0; k < i; ++k) t -= at(L, i, k) * x[static_cast<size_t>(k)];
            x[static_cast<size_t>(i)] = t / at(L, i, i);
        }
        for (long i = d - 1; i >= 0; --i) {
            double t = x[static_cast<size_t>(i)];
            for (long k = i + 1; k < d; ++k) t -= at(L, k, i) * x[static_cast<size_t>(k)];
            x[static_cast<size_t>(i)] = t / at(L, i, i);
        }
    };

    // inverse iteration on the pencil (A, D): x <- A^{-1} D x
    std::vector<double> x(static_cast<size_t>(d));
    for (long i = 0; i < d; ++i)
        x[static_cast<size_t>(i)] = 1.0 / static_cast<double>(i + 1);
    double lambda = 0.0, prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        std::vector<double> y(static_cast<size_t>(d));
        for (long i = 0; i < d; ++i)
            y[static_cast<size_t>(i)] = D[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        solve(y);
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : y) v /= norm;
        // Rayleigh quotient x^T A x / x^T D x
        double num = 0.0, den = 0.0;
        for (long i = 0; i < d; ++i) {
            double Ax = 0.0;
            for (long j = 0; j < d; ++j) Ax += at(A, i, j) * y[static_cast<size_t>(j)];
            num += y[static_cast<size_t>(i)] * Ax;
            den += y[static_cast<size_t>(i)] * D[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
        }
        lambda = num / den;
        x.swap(y);
        if (std::fabs(lambda - prev) <= 1e-12 * std::fabs(lambda)) break;
        prev = lambda;
    }
    return lambda;
}

}  // namespace hrb
