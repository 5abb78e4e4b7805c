#include "hrb/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrb/discrete_ops.hpp"
#include "hrb/richardson.hpp"
#include "hrb/special.hpp"

namespace hrb {

Family parse_family(const std::string& name) {
    if (name == "classical_hardy_p") return Family::classical_hardy_p;
    if (name == "classical_birman") return Family::classical_birman;
    if (name == "kpp") return Family::kpp;
    if (name == "fkp") return Family::fkp;
    if (name == "lambda_family") return Family::lambda_family;
    if (name == "sw") return Family::sw;
    if (name == "sw_closed_hardy") return Family::sw_closed_hardy;
    if (name == "sw_closed_p2") return Family::sw_closed_p2;
    if (name == "sw_tilde") return Family::sw_tilde;
    throw std::invalid_argument("unknown weight family: " + name);
}

const char* family_name(Family f) {
    switch (f) {
        case Family::classical_hardy_p: return "classical_hardy_p";
        case Family::classical_birman: return "classical_birman";
        case Family::kpp: return "kpp";
        case Family::fkp: return "fkp";
        case Family::lambda_family: return "lambda_family";
        case Family::sw: return "sw";
        case Family::sw_closed_hardy: return "sw_closed_hardy";
        case Family::sw_closed_p2: return "sw_closed_p2";
        case Family::sw_tilde: return "sw_tilde";
    }
    return "?";
}

void WeightSpec::validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("WeightSpec: p must be > 1");
    if (ell < 1) throw std::invalid_argument("WeightSpec: ell must be >= 1");
    switch (family) {
        case Family::kpp:
            if (p != 2.0 || ell != 1)
                throw std::invalid_argument("WeightSpec: kpp requires p=2, ell=1");
            break;
        case Family::fkp:
        case Family::sw_closed_hardy:
            if (ell != 1)
                throw std::invalid_argument("WeightSpec: family requires ell=1");
            break;
        case Family::sw_closed_p2:
            if (p != 2.0)
                throw std::invalid_argument("WeightSpec: sw_closed_p2 requires p=2");
            break;
        case Family::lambda_family:
            if (p != 2.0 || ell != 1 || lambda < -0.5)
                throw std::invalid_argument(
                    "WeightSpec: lambda_family requires p=2, ell=1, lambda >= -1/2");
            break;
        default:
            break;
    }
}

// ---- parameter sequences ------------------------------------------------

double g_seq(long ell, double p, long n, const PrecisionCtx& ctx) {
    if (ctx.is_extended()) return g_seq_dd(ell, p, n).to_double();
    if (n < ell) return 0.0;
    double inv_q = 1.0 - 1.0 / p;
    return std::exp(lanczos_log_gamma(static_cast<double>(n) + inv_q) -
                    lanczos_log_gamma(static_cast<double>(n - ell + 1)));
}

DDouble g_seq_dd(long ell, double p, long n) {
    if (n < ell) return DDouble(0.0);
    DDouble inv_q = DDouble(1.0) - DDouble(1.0) / DDouble(p);
    return exp(stirling_log_gamma(DDouble(static_cast<double>(n)) + inv_q) -
               stirling_log_gamma(DDouble(static_cast<double>(n - ell + 1))));
}

double g_tilde_seq(long ell, double p, long n) {
    if (n < 0) return 0.0;
    double r = std::pow(static_cast<double>(n), 1.0 - 1.0 / p);
    for (long j = 1; j <= ell - 1; ++j) r *= static_cast<double>(n - j);
    return r;
}

DDouble g_tilde_seq_dd(long ell, double p, long n) {
    if (n <= 0) return DDouble(0.0);
    DDouble a = DDouble(1.0) - DDouble(1.0) / DDouble(p);
    DDouble r = exp(a * log(DDouble(static_cast<double>(n))));
    for (long j = 1; j <= ell - 1; ++j) r *= DDouble(static_cast<double>(n - j));
    return r;
}

namespace {

// (div^k x^a)|_n = n^a sum_{m>=k} C(a,m) k! S(m,k) n^{-m}, valid n > k.
// The exponent stays in double-double so the series and the direct stencil
// of g~ see bit-identical powers of n.
DDouble div_k_monomial_series(DDouble a, long k, long n) {
    DDouble nd(static_cast<double>(n));
    DDouble inv_n = DDouble(1.0) / nd;
    DDouble kfact(1.0);
    for (long i = 2; i <= k; ++i) kfact *= DDouble(static_cast<double>(i));
    // C(a,m) by recurrence C(a,m+1) = C(a,m)(a-m)/(m+1)
    DDouble binom(1.0);
    for (long m = 1; m <= k; ++m)
        binom = binom * (a - DDouble(static_cast<double>(m - 1))) /
                DDouble(static_cast<double>(m));
    DDouble npow = exp((a - DDouble(static_cast<double>(k))) * log(nd));
    DDouble sum(0.0);
    DDouble scale = npow;  // n^{a-m} running
    for (long m = k; m <= 400; ++m) {
        DDouble term = binom * kfact * stirling_second_dd(m, k) * scale;
        sum += term;
        if (std::fabs(term.hi()) < 1e-34 * std::fabs(sum.hi()) + 1e-320) break;
        binom = binom * (a - DDouble(static_cast<double>(m))) /
                DDouble(static_cast<double>(m + 1));
        scale *= inv_n;
    }
    return sum;
}

}  // namespace

DDouble div_ell_g_tilde_dd(long ell, double p, long n) {
    if (n >= 2 * ell + 2 && n > 8) {
        // g~_m = sum_j s(ell,j) m^{j-1/p}; differentiate term by term
        DDouble sum(0.0);
        for (long j = 1; j <= ell; ++j) {
            long long s = stirling_number(ell, j, StirlingKind::first_signed);
            if (s == 0) continue;
            sum += DDouble::from_i64(s) *
                   div_k_monomial_series(DDouble(static_cast<double>(j)) -
                                             DDouble(1.0) / DDouble(p),
                                         ell, n);
        }
        return sum;
    }
    // direct stencil; cancellation is mild at small n and double-double absorbs it
    DDouble sum(0.0);
    double sign = (ell % 2 == 0) ? 1.0 : -1.0;
    for (long i = 0; i <= ell; ++i) {
        sum += DDouble(sign * binomial(ell, i)) * g_tilde_seq_dd(ell, p, n + i);
        sign = -sign;
    }
    return sum;
}

// ---- optimal weight, three forms ----------------------------------------

double rho_sw_gamma(long ell, double p, long n, const PrecisionCtx& ctx) {
    if (n < ell) throw std::domain_error("rho_sw_gamma: need n >= ell");
    double inv_q = 1.0 - 1.0 / p;
    if (ctx.is_extended()) {
        DDouble iq = DDouble(1.0) - DDouble(1.0) / DDouble(p);
        DDouble pref = pow(pochhammer(iq, ell), p - 1.0);
        DDouble front = pow(
            DDouble(1.0) / gamma_ratio_dd(DDouble(static_cast<double>(n)) + iq,
                                          DDouble(static_cast<double>(n - ell + 1))),
            p - 1.0);
        DDouble sum(0.0);
        double sign = 1.0;
        for (long j = 0; j <= ell; ++j) {
            DDouble ratio =
                gamma_ratio_dd(DDouble(static_cast<double>(n - ell + j)) + iq,
                               DDouble(static_cast<double>(n - ell + j + 1)));
            sum += DDouble(sign * binomial(ell, j)) * pow(ratio, p - 1.0);
            sign = -sign;
        }
        return (pref * front * sum).to_double();
    }
    double pref = std::pow(pochhammer(inv_q, ell), p - 1.0);
    double front = std::pow(
        1.0 / gamma_ratio(static_cast<double>(n) + inv_q,
                          static_cast<double>(n - ell + 1), ctx),
        p - 1.0);
    double sum = 0.0, sign = 1.0;
    for (long j = 0; j <= ell; ++j) {
        double ratio = gamma_ratio(static_cast<double>(n - ell + j) + inv_q,
                                   static_cast<double>(n - ell + j + 1), ctx);
        sum += sign * binomial(ell, j) * std::pow(ratio, p - 1.0);
        sign = -sign;
    }
    return pref * front * sum;
}

double rho_sw_product(long ell, double p, long n, const PrecisionCtx& ctx) {
    if (ctx.is_extended()) return rho_sw_product_dd(ell, p, n).to_double();
    if (n < ell) throw std::domain_error("rho_sw_product: need n >= ell");
    double inv_q = 1.0 - 1.0 / p;
    double pref = std::pow(pochhammer(inv_q, ell), p - 1.0);
    double sum = 0.0, sign = 1.0;
    for (long j = 0; j <= ell; ++j) {
        double a = pochhammer(static_cast<double>(n - ell + j) + inv_q, ell - j);
        double b = pochhammer(static_cast<double>(n - ell + 1), j);
        sum += sign * binomial(ell, j) * std::pow(a * b, -(p - 1.0));
        sign = -sign;
    }
    return pref * sum;
}

DDouble rho_sw_product_dd(long ell, double p, long n) {
    if (n < ell) throw std::domain_error("rho_sw_product: need n >= ell");
    DDouble inv_q = DDouble(1.0) - DDouble(1.0) / DDouble(p);
    DDouble pref = pow(pochhammer(inv_q, ell), p - 1.0);
    DDouble sum(0.0);
    double sign = 1.0;
    for (long j = 0; j <= ell; ++j) {
        DDouble a = pochhammer(DDouble(static_cast<double>(n - ell + j)) + inv_q, ell - j);
        DDouble b = pochhammer(DDouble(static_cast<double>(n - ell + 1)), j);
        sum += DDouble(sign * binomial(ell, j)) * pow(a * b, -(p - 1.0));
        sign = -sign;
    }
    return pref * sum;
}

double rho_tilde(long ell, double p, long n, long window_pad) {
    if (window_pad < 0) window_pad = 2 * ell + 2;
    if (window_pad < ell) throw std::domain_error("rho_tilde: window_pad < ell");
    double gn = g_tilde_seq(ell, p, n);
    if (gn == 0.0) throw std::domain_error("rho_tilde: g~_n = 0");
    long lo = std::max<long>(0, n - window_pad), hi = n + window_pad;
    LatticeSeq g = LatticeSeq::sample(
        lo, hi, [&](long m) { return cplx(g_tilde_seq(ell, p, m), 0.0); }, 0);
    LatticeSeq lap = p_laplacian(g, ell, p);
    return lap.value(n).real() / std::pow(gn, p - 1.0);
}

DDouble rho_tilde_dd(long ell, double p, long n) {
    DDouble gn = g_tilde_seq_dd(ell, p, n);
    if (gn.hi() == 0.0) throw std::domain_error("rho_tilde_dd: g~_n = 0");
    // -Delta_p^(ell) g~_n = sum_i (-1)^i C(ell,i) h_{n-ell+i},
    // h_j = ((div^ell g~)_j)^<p-1>
    DDouble acc(0.0);
    double sign = 1.0;
    for (long i = 0; i <= ell; ++i) {
        DDouble h = signed_pow(div_ell_g_tilde_dd(ell, p, n - ell + i), p - 1.0);
        acc += DDouble(sign * binomial(ell, i)) * h;
        sign = -sign;
    }
    return acc / signed_pow(gn, p - 1.0);
}

double classical_weight(const WeightSpec& spec, long n) {
    spec.validate();
    if (n < spec.ell) throw std::domain_error("classical_weight: need n >= ell");
    double nd = static_cast<double>(n);
    switch (spec.family) {
        case Family::classical_hardy_p: {
            double c = (spec.p - 1.0) / spec.p;
            return std::pow(c, spec.p) / std::pow(nd, spec.p);
        }
        case Family::classical_birman: {
            double inv_q = 1.0 - 1.0 / spec.p;
            return std::pow(pochhammer(inv_q, spec.ell), spec.p) /
                   std::pow(nd, static_cast<double>(spec.ell) * spec.p);
        }
        case Family::kpp: {
            // 2 - sqrt(1+x) - sqrt(1-x), x = 1/n, in cancellation-free form
            double x = 1.0 / nd;
            double s = std::sqrt(1.0 - x * x);
            return 2.0 * x * x /
                   ((1.0 + s) * (2.0 + std::sqrt(1.0 + x) + std::sqrt(1.0 - x)));
        }
        case Family::fkp: {
            double x = 1.0 / nd;
            double b1 = -std::expm1(std::log1p(-x) / spec.q());
            double b2 = std::expm1(std::log1p(x) / spec.q());
            return std::pow(b1, spec.p - 1.0) - std::pow(b2, spec.p - 1.0);
        }
        case Family::lambda_family:
            return 1.0 / (4.0 * nd * (nd + spec.lambda));
        default:
            throw std::invalid_argument("classical_weight: not a classical family");
    }
}

double closed_form_rho(long ell, double p, long n, ClosedVariant variant) {
    if (n < ell) throw std::domain_error("closed_form_rho: need n >= ell");
    double nd = static_cast<double>(n);
    switch (variant) {
        case ClosedVariant::hardy_1p: {
            if (ell != 1) throw std::domain_error("closed_form_rho: hardy_1p requires ell=1");
            double inv_q = 1.0 - 1.0 / p;
            // (n-1/p)^{1-p} - n^{1-p} = n^{1-p} expm1((1-p) log1p(-1/(pn)))
            double diff = std::pow(nd, 1.0 - p) *
                          std::expm1((1.0 - p) * std::log1p(-1.0 / (p * nd)));
            return std::pow(inv_q, p - 1.0) * diff;
        }
        case ClosedVariant::birman_l2_product: {
            if (p != 2.0)
                throw std::domain_error("closed_form_rho: birman variants require p=2");
            double num = pochhammer(0.5, ell);
            double den = 1.0;
            for (long j = 0; j < 2 * ell; ++j) den *= nd - 0.5 * static_cast<double>(j);
            return num * num / den;
        }
        case ClosedVariant::birman_l2_pochhammer: {
            if (p != 2.0)
                throw std::domain_error("closed_form_rho: birman variants require p=2");
            double num = pochhammer(0.5, ell);
            double den = pochhammer(nd - static_cast<double>(ell) - 0.5, ell) *
                         pochhammer(nd - static_cast<double>(ell) + 1.0, ell);
            return num * num / den;
        }
    }
    throw std::domain_error("closed_form_rho: bad variant");
}

double weight_value(const WeightSpec& spec, long n, const PrecisionCtx& ctx) {
    spec.validate();
    switch (spec.family) {
        case Family::classical_hardy_p:
        case Family::classical_birman:
        case Family::kpp:
        case Family::fkp:
        case Family::lambda_family:
            return classical_weight(spec, n);
        case Family::sw:
            return rho_sw_product(spec.ell, spec.p, n, ctx);
        case Family::sw_closed_hardy:
            return closed_form_rho(1, spec.p, n, ClosedVariant::hardy_1p);
        case Family::sw_closed_p2:
            return closed_form_rho(spec.ell, 2.0, n, ClosedVariant::birman_l2_product);
        case Family::sw_tilde:
            return rho_tilde_dd(spec.ell, spec.p, n).to_double();
    }
    throw std::invalid_argument("weight_value: bad family");
}

// ---- asymptotic series --------------------------------------------------

namespace {

SeriesCoeffs extract_series(long ell, double p, long K, long n0, long levels,
                            const std::function<DDouble(long)>& rho_dd,
                            double per_point_noise_at_nmax) {
    if (K < 1 || K > 8) throw std::domain_error("series_coeffs: K in [1,8]");
    DDouble inv_q = DDouble(1.0) - DDouble(1.0) / DDouble(p);
    DDouble cpow = pow(pochhammer(inv_q, ell), p);
    std::vector<long> ns;
    std::vector<DDouble> f;
    for (long i = 0; i <= levels; ++i) {
        long n = n0 << i;
        ns.push_back(n);
        DDouble scaled = rho_dd(n) * pow(DDouble(static_cast<double>(n)),
                                         static_cast<double>(ell) * p) / cpow;
        f.push_back(scaled - DDouble(1.0));
    }
    SeriesCoeffs out;
    out.ell = ell;
    out.p = p;
    out.K = K;
    double nmax = static_cast<double>(ns.back());
    for (long k = 1; k <= K; ++k) {
        std::vector<DDouble> T(f.size());
        for (size_t i = 0; i < f.size(); ++i) {
            DDouble nk(1.0);
            for (long j = 0; j < k; ++j) nk *= DDouble(static_cast<double>(ns[i]));
            T[i] = f[i] * nk;
        }
        RichardsonResult r = richardson_limit(T);
        out.A.push_back(r.limit.to_double());
        out.err_estimate.push_back(r.err_estimate);
        for (size_t i = 0; i < f.size(); ++i) {
            DDouble nk(1.0);
            for (long j = 0; j < k; ++j) nk *= DDouble(static_cast<double>(ns[i]));
            f[i] -= r.limit / nk;
        }
        out.noise_floor = per_point_noise_at_nmax * std::pow(nmax, static_cast<double>(k)) * 100.0;
    }
    // decay diagnostic: residual must keep shrinking along the ladder
    bool decaying = true;
    for (size_t i = 1; i + 1 < f.size(); ++i) {
        double a = std::fabs(f[i].to_double()), b = std::fabs(f[i + 1].to_double());
        if (a > out.noise_floor && b > a) decaying = false;
    }
    if (!decaying)
        throw std::runtime_error("series_coeffs: residual not decaying on the ladder");
    return out;
}

}  // namespace

SeriesCoeffs series_coeffs(long ell, double p, long K) {
    long n0 = 256, levels = 9;
    if (ell == 3) { n0 = 128; levels = 8; }
    if (ell >= 4) { n0 = 64; levels = 8; }
    double nmax = static_cast<double>(n0) * std::pow(2.0, static_cast<double>(levels));
    double noise = 1e-30 * std::pow(nmax, static_cast<double>(ell));
    return extract_series(ell, p, K, n0, levels,
                          [&](long n) { return rho_sw_product_dd(ell, p, n); }, noise);
}

SeriesCoeffs series_coeffs_tilde(long ell, double p, long K) {
    long n0 = 32;
    // pick the ladder top so stencil noise stays below the sign tolerance
    double budget = 1e27 / std::pow(2.0, static_cast<double>(ell));
    double nmax_allowed = std::pow(budget, 1.0 / static_cast<double>(ell + K));
    long levels = 4;
    while (levels < 9 && static_cast<double>(n0 << (levels + 1)) <= std::min(8192.0, nmax_allowed))
        ++levels;
    double nmax = static_cast<double>(n0 << levels);
    double noise = 1e-30 * std::pow(2.0 * nmax, static_cast<double>(ell));
    return extract_series(ell, p, K, n0, levels,
                          [&](long n) { return rho_tilde_dd(ell, p, n); }, noise);
}

double series_coeff_closed_form(long ell, double p, long k) {
    if (ell == 1) {
        double fact = 1.0;
        for (long i = 2; i <= k + 1; ++i) fact *= static_cast<double>(i);
        return pochhammer(p, k) / (std::pow(p, static_cast<double>(k)) * fact);
    }
    if (p == 2.0) {
        long n = 2 * ell - 1 + k, m = 2 * ell - 1;
        double s = (n <= 20) ? static_cast<double>(stirling_number(n, m, StirlingKind::second))
                             : stirling_second_dd(n, m).to_double();
        return s / std::pow(2.0, static_cast<double>(k));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace hrb
