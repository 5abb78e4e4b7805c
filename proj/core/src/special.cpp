#include "hrb/special.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <vector>

namespace hrb {

namespace {

constexpr double kHalfLn2Pi = 0.91893853320467274178;

// Lanczos g=7, 9-term coefficient set.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_core(double z) {
    // valid for z >= 0.5
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i - 1);
    double t = z + 6.5;
    return kHalfLn2Pi + (z - 0.5) * std::log(t) - t + std::log(a);
}

// a_k = B_{2k} / (2k (2k-1)) as exact integer fractions, k = 1..13.
struct BernTerm {
    long long num, den;
};
constexpr std::array<BernTerm, 13> kStirlingTerms = {{{1, 12},
                                                      {-1, 360},
                                                      {1, 1260},
                                                      {-1, 1680},
                                                      {5, 5940},
                                                      {-691, 360360},
                                                      {7, 1092},
                                                      {-3617, 122400},
                                                      {43867, 244188},
                                                      {-174611, 125400},
                                                      {854513, 63756},
                                                      {-236364091, 1506960},
                                                      {8553103, 3900}}};

bool near_nonpositive_integer(double x) {
    double r = std::round(x);
    return r <= 0.0 && std::fabs(x - r) < 1e-9;
}

double reciprocal_gamma(double x) {
    if (x > 0.0) return std::exp(-lanczos_log_gamma(x));
    double r = std::round(x);
    if (std::fabs(x - r) < 1e-12) return 0.0;
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi
    return std::exp(lanczos_log_gamma(1.0 - x)) * std::sin(M_PI * x) / M_PI;
}

}  // namespace

double lanczos_log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("lanczos_log_gamma: x must be > 0");
    if (x >= 0.5) return lanczos_core(x);
    return lanczos_core(x + 1.0) - std::log(x);
}

DDouble stirling_log_gamma(DDouble x) {
    if (!(x.hi() > 0.0)) throw std::domain_error("stirling_log_gamma: x must be > 0");
    int m = 0;
    if (x.hi() < 32.0) m = static_cast<int>(std::ceil(32.0 - x.hi()));
    DDouble y = x + DDouble(static_cast<double>(m));
    DDouble ly = log(y);
    DDouble inv = DDouble(1.0) / y;
    DDouble inv2 = inv * inv;
    DDouble s(0.0);
    for (int k = 12; k >= 0; --k) {
        DDouble a = DDouble::from_i64(kStirlingTerms[k].num) /
                    DDouble::from_i64(kStirlingTerms[k].den);
        s = s * inv2 + a;
    }
    DDouble r = (y - DDouble(0.5)) * ly - y + dd_const::half_ln_2pi + s * inv;
    for (int j = 0; j < m; ++j) r -= log(x + DDouble(static_cast<double>(j)));
    return r;
}

double gamma_ratio(double num_arg, double den_arg, const PrecisionCtx& ctx) {
    if (ctx.is_extended()) return gamma_ratio_dd(num_arg, den_arg).to_double();
    if (near_nonpositive_integer(den_arg)) return 0.0;
    if (near_nonpositive_integer(num_arg))
        throw std::domain_error("gamma_ratio: num_arg at a gamma pole");
    double d = num_arg - den_arg;
    double rd = std::round(d);
    if (std::fabs(d - rd) < 1e-12) {
        long k = static_cast<long>(rd);
        if (k >= 0) return pochhammer(den_arg, k);
        return 1.0 / pochhammer(num_arg, -k);
    }
    if (!(den_arg > 0.0))
        throw std::domain_error("gamma_ratio: negative non-integer den_arg");
    return std::exp(lanczos_log_gamma(num_arg) - lanczos_log_gamma(den_arg));
}

DDouble gamma_ratio_dd(DDouble num_arg, DDouble den_arg) {
    if (near_nonpositive_integer(den_arg.to_double())) return DDouble(0.0);
    if (near_nonpositive_integer(num_arg.to_double()))
        throw std::domain_error("gamma_ratio: num_arg at a gamma pole");
    double d = (num_arg - den_arg).to_double();
    double rd = std::round(d);
    if (std::fabs(d - rd) < 1e-12) {
        long k = static_cast<long>(rd);
        if (k >= 0) return pochhammer(den_arg, k);
        return DDouble(1.0) / pochhammer(num_arg, -k);
    }
    if (!(den_arg.hi() > 0.0))
        throw std::domain_error("gamma_ratio: negative non-integer den_arg");
    return exp(stirling_log_gamma(num_arg) - stirling_log_gamma(den_arg));
}

DDouble gamma_ratio_dd(double num_arg, double den_arg) {
    return gamma_ratio_dd(DDouble(num_arg), DDouble(den_arg));
}

long long stirling_number(long n, long k, StirlingKind kind) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("stirling_number: need 0 <= k <= n");
    if (n > 20) throw std::domain_error("stirling_number: n capped at 20");
    // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k); S(n,k) = S(n-1,k-1) + k S(n-1,k)
    std::vector<long long> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (long i = 1; i <= n; ++i) {
        for (long j = i; j >= 1; --j) {
            long long mult = (kind == StirlingKind::second) ? j : (i - 1);
            long long t;
            if (__builtin_mul_overflow(mult, row[static_cast<size_t>(j)], &t))
                throw std::overflow_error("stirling_number: 64-bit overflow");
            long long prev = row[static_cast<size_t>(j) - 1];
            if (kind == StirlingKind::second) {
                if (__builtin_add_overflow(prev, t, &row[static_cast<size_t>(j)]))
                    throw std::overflow_error("stirling_number: 64-bit overflow");
            } else {
                if (__builtin_sub_overflow(prev, t, &row[static_cast<size_t>(j)]))
                    throw std::overflow_error("stirling_number: 64-bit overflow");
            }
        }
        row[0] = 0;
    }
    return row[static_cast<size_t>(k)];
}

DDouble stirling_second_dd(long n, long k) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("stirling_second_dd: need 0 <= k <= n");
    static std::mutex mu;
    static std::vector<std::vector<DDouble>> table;  // table[n][k]
    std::lock_guard<std::mutex> lock(mu);
    if (table.empty()) table.push_back({DDouble(1.0)});
    while (static_cast<long>(table.size()) <= n) {
        long i = static_cast<long>(table.size());
        const auto& prev = table.back();
        std::vector<DDouble> row(static_cast<size_t>(i) + 1, DDouble(0.0));
        for (long j = 1; j <= i; ++j) {
            DDouble up = (j < i) ? prev[static_cast<size_t>(j)] : DDouble(0.0);
            row[static_cast<size_t>(j)] =
                prev[static_cast<size_t>(j) - 1] + DDouble(static_cast<double>(j)) * up;
        }
        table.push_back(std::move(row));
    }
    return table[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

double binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (long i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return std::round(r);
}

double chu_vandermonde_residual(double b, double c, long k) {
    if (k < 0) throw std::domain_error("chu_vandermonde_residual: k must be >= 0");
    if (near_nonpositive_integer(c) || near_nonpositive_integer(c + static_cast<double>(k)))
        throw std::domain_error("chu_vandermonde_residual: gamma pole at c or c+k");
    double lhs = 0.0;
    double sign = 1.0;
    for (long j = 0; j <= k; ++j) {
        lhs += sign * binomial(k, j) * pochhammer(b, j) * reciprocal_gamma(c + static_cast<double>(j));
        sign = -sign;
    }
    double rhs = pochhammer(c - b, k) * reciprocal_gamma(c + static_cast<double>(k));
    return lhs - rhs;
}

}  // namespace hrb
