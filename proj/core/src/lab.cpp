#include "hrb/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrb/rng.hpp"
#include "hrb/special.hpp"

namespace hrb {

namespace {

DDouble grad_k_of(const std::function<DDouble(long)>& v, long k, long n) {
    DDouble s(0.0);
    double sign = 1.0;
    for (long j = 0; j <= k; ++j) {
        s += DDouble(sign * binomial(k, j)) * v(n - j);
        sign = -sign;
    }
    return s;
}

/// -Delta_p^(ell-k) grad^k g at n, from the oracle's stable h.
DDouble minus_lap_grad_k(const SeqOracle& g, long k, long n) {
    long m = g.ell - k;
    DDouble s(0.0);
    double sign = 1.0;
    for (long i = 0; i <= m; ++i) {
        s += DDouble(sign * binomial(m, i)) * g.h(n - g.ell + i);
        sign = -sign;
    }
    return s;
}

}  // namespace

double functional_gap(const LatticeSeq& u, long ell, double p, const WeightSpec& w,
                      const PrecisionCtx& ctx) {
    double lhs = lp_energy(u, ell, p);
    double rhs = weighted_lp_sum(u, ell, p,
                                 [&](long n) { return weight_value(w, n, ctx); });
    double gap = lhs - rhs;
    if (std::fabs(gap) < 1e-12 * lhs && lhs > 0.0) {
        // cancellation guard: redo both accumulations in double-double
        LatticeSeq gl = grad_k(u, ell);
        DDouble L(0.0), R(0.0);
        PrecisionCtx ext = PrecisionCtx::extended();
        for (long n = std::max(gl.lo(), ell); n <= gl.hi(); ++n) {
            double a = std::abs(gl.value(n));
            if (a > 0.0) L += pow(DDouble(a), p);
        }
        for (long n = std::max(u.lo(), ell); n <= u.hi(); ++n) {
            double a = std::abs(u.value(n));
            if (a > 0.0) R += DDouble(weight_value(w, n, ext)) * pow(DDouble(a), p);
        }
        gap = (L - R).to_double();
    }
    return gap;
}

double remainder_small(double s, double p, const LatticeSeq& g, const LatticeSeq& u,
                       long n) {
    if (!(s > 1.0)) throw std::domain_error("remainder_small: s must be > 1");
    double gn = g.value(n).real(), gn1 = g.value(n + 1).real();
    if (!(gn > 0.0) || !(gn1 > 0.0))
        throw std::domain_error("remainder_small: g must be positive at n, n+1");
    cplx cross = std::sqrt(gn / gn1) * u.value(n + 1) - std::sqrt(gn1 / gn) * u.value(n);
    double c = std::abs(cross);
    if (s <= 2.0) return std::pow(c, p);
    double base = std::abs(u.value(n + 1) - u.value(n)) +
                  std::abs(u.value(n)) / gn * (gn1 - gn);
    if (base == 0.0) return 0.0;  // 0^{p-2} convention
    return c * c * std::pow(base, p - 2.0);
}

double remainder_R_k(long ell, long k, double s, double p, const SeqOracle& g,
                     const LatticeSeq& u) {
    if (k < 1 || k > ell) throw std::domain_error("remainder_R_k: k must be in 1..ell");
    if (u.empty()) return 0.0;
    long n_hi = u.hi() + k + 1;
    // grad^{k-1} of g and u as windowed sequences
    LatticeSeq ukm1 = grad_k(u, k - 1);
    LatticeSeq gkm1 = LatticeSeq::sample(
        std::max<long>(ell, 1), n_hi + 1,
        [&](long n) { return cplx(grad_k_of(g.value, k - 1, n).to_double(), 0.0); }, 0);
    DDouble total(0.0);
    for (long n = ell; n <= n_hi; ++n) {
        double r = remainder_small(s, p, gkm1, ukm1, n);
        if (r == 0.0) continue;
        DDouble num = minus_lap_grad_k(g, k, n + 1);
        DDouble den = signed_pow(grad_k_of(g.value, k, n + 1), p - 1.0);
        total += num / den * DDouble(r);
    }
    return total.to_double();
}

RemainderReport sandwich_check(long ell, double p, const SeqOracle& g,
                               const LatticeSeq& u) {
    RemainderReport rep;
    rep.p = p;
    double q = p / (p - 1.0);
    // gap with the oracle-consistent weight rho = -Delta_p^(ell) g / g^{p-1}
    DDouble L(0.0), R(0.0);
    LatticeSeq gl = grad_k(u, ell);
    for (long n = std::max(gl.lo(), ell); n <= gl.hi(); ++n) {
        double a = std::abs(gl.value(n));
        if (a > 0.0) L += pow(DDouble(a), p);
    }
    for (long n = std::max(u.lo(), ell); n <= u.hi(); ++n) {
        double a = std::abs(u.value(n));
        if (a > 0.0) {
            DDouble rho = minus_lap_grad_k(g, 0, n) / signed_pow(g.value(n), p - 1.0);
            R += rho * pow(DDouble(a), p);
        }
    }
    rep.gap = (L - R).to_double();
    for (long k = 1; k <= ell; ++k) {
        rep.per_k_q.push_back(remainder_R_k(ell, k, q, p, g, u));
        rep.per_k_p.push_back(remainder_R_k(ell, k, p, p, g, u));
        rep.sum_Rq += rep.per_k_q.back();
        rep.sum_Rp += rep.per_k_p.back();
    }
    rep.ratio_low = rep.sum_Rq > 0.0 ? rep.gap / rep.sum_Rq : 0.0;
    rep.ratio_high = rep.sum_Rp > 0.0 ? rep.gap / rep.sum_Rp : 0.0;
    return rep;
}

LemmaProbeResult scalar_lemma_probe(double p, const std::vector<double>& t_grid,
                                    const std::vector<cplx>& z_grid) {
    if (!(p > 1.0)) throw std::domain_error("scalar_lemma_probe: p must be > 1");
    LemmaProbeResult res;
    res.min_M = std::numeric_limits<double>::infinity();
    res.ratio_ML_min = res.ratio_MU_min = std::numeric_limits<double>::infinity();
    res.ratio_ML_max = res.ratio_MU_max = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        for (cplx z : z_grid) {
            double zt = std::abs(z - t), az = std::abs(z), z1 = std::abs(z - 1.0);
            double M = std::pow(zt, p) - std::pow(1.0 - t, p - 1.0) * (std::pow(az, p) - t);
            double base = zt + 1.0 - t;
            double Lv = (base == 0.0) ? 0.0 : t * z1 * z1 * std::pow(base, p - 2.0);
            double Uv = std::pow(t, p / 2.0) * std::pow(z1, p);
            ++res.grid_points;
            res.min_M = std::min(res.min_M, M);
            if (p == 2.0)
                res.max_p2_identity_dev =
                    std::max(res.max_p2_identity_dev, std::fabs(M - t * z1 * z1));
            if (Lv > 1e-14) {
                double r = M / Lv;
                res.ratio_ML_min = std::min(res.ratio_ML_min, r);
                res.ratio_ML_max = std::max(res.ratio_ML_max, r);
                if (r < 0.0 && M < -1e-12) res.negative_ratio_found = true;
            }
            if (Uv > 1e-14) {
                double r = M / Uv;
                res.ratio_MU_min = std::min(res.ratio_MU_min, r);
                res.ratio_MU_max = std::max(res.ratio_MU_max, r);
            }
        }
    }
    return res;
}

NonattainRecord nonattain_probe(long ell, double p, long M_cut,
                                const PrecisionCtx& ctx) {
    if (M_cut <= 2 * ell) throw std::domain_error("nonattain_probe: M_cut must be > 2*ell");
    LatticeSeq u = LatticeSeq::sample(
        ell, M_cut, [&](long n) { return cplx(g_seq(ell, p, n, ctx), 0.0); }, ell);
    WeightSpec w{Family::sw, ell, p, 0.0};
    double gap = functional_gap(u, ell, p, w, ctx);
    return {M_cut, gap, gap > 0.0};
}

CorpusSummary run_corpus(long ell, double p, Family family, long trials,
                         uint64_t seed, const PrecisionCtx& ctx, long span,
                         double weight_inflation) {
    CorpusSummary sum;
    sum.min_gap_rel = std::numeric_limits<double>::infinity();
    sum.min_remainder = std::numeric_limits<double>::infinity();
    sum.ratio_low_max = -std::numeric_limits<double>::infinity();
    sum.ratio_high_min = std::numeric_limits<double>::infinity();
    WeightSpec w{family, ell, p, family == Family::lambda_family ? -0.5 : 0.0};
    w.validate();
    bool oracle_backed = (family == Family::sw);
    SeqOracle oracle = oracle_backed
                           ? make_g_oracle_cached(ell, p, ell + span + 2 * ell + 4)
                           : SeqOracle{};
    // cache weights on the support range
    std::vector<double> wcache(static_cast<size_t>(span) + 1);
    for (long i = 0; i <= span; ++i)
        wcache[static_cast<size_t>(i)] = weight_value(w, ell + i, ctx) * weight_inflation;

    for (long trial = 0; trial < trials; ++trial) {
        SplitMix64 rng(seed ^ (0x6c62272e07bb0142ULL * static_cast<uint64_t>(trial + 1)));
        std::vector<cplx> vals(static_cast<size_t>(span) + 1);
        for (auto& z : vals) z = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        LatticeSeq u(ell, vals, ell);

        CorpusRow row{};
        row.trial = trial;
        row.ell = ell;
        row.p = p;
        row.family = family;
        row.lhs = lp_energy(u, ell, p);
        double rhs = 0.0;
        for (long n = std::max(u.lo(), ell); n <= u.hi(); ++n) {
            double a = std::abs(u.value(n));
            if (a > 0.0) rhs += wcache[static_cast<size_t>(n - ell)] * std::pow(a, p);
        }
        row.rhs = rhs;
        row.gap = row.lhs - rhs;
        row.violation = row.gap < -1e-10 * row.lhs;
        if (oracle_backed) {
            RemainderReport rr = sandwich_check(ell, p, oracle, u);
            row.sum_Rq = rr.sum_Rq;
            row.sum_Rp = rr.sum_Rp;
            for (double v : rr.per_k_q) sum.min_remainder = std::min(sum.min_remainder, v);
            for (double v : rr.per_k_p) sum.min_remainder = std::min(sum.min_remainder, v);
            if (rr.sum_Rq > 0.0)
                sum.ratio_low_max = std::max(sum.ratio_low_max, rr.gap / rr.sum_Rq);
            if (rr.sum_Rp > 0.0)
                sum.ratio_high_min = std::min(sum.ratio_high_min, rr.gap / rr.sum_Rp);
            if (p == 2.0 && rr.gap > 0.0) {
                row.p2_identity_dev = std::fabs(rr.gap - rr.sum_Rp) / rr.gap;
                sum.max_p2_identity_dev =
                    std::max(sum.max_p2_identity_dev, row.p2_identity_dev);
            }
        }
        sum.min_gap_rel = std::min(sum.min_gap_rel, row.gap / (row.lhs + 1e-300));
        if (row.violation) ++sum.violations;
        sum.rows.push_back(row);
    }
    return sum;
}

}  // namespace hrb
