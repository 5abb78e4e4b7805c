#pragma once

#include <cstdint>

#include "hrb/ddouble.hpp"
#include "hrb/precision.hpp"

namespace hrb {

/// Rising factorial (a)_ell = a(a+1)...(a+ell-1); (a)_0 = 1.
template <typename T>
T pochhammer(T a, long ell) {
    if (ell < 0) throw std::domain_error("pochhammer: ell must be >= 0");
    T r(1.0);
    for (long i = 0; i < ell; ++i) r *= a + T(static_cast<double>(i));
    return r;
}

/// log Gamma(x), x > 0, Lanczos approximation (g=7, 9 terms), ~1e-14 relative.
double lanczos_log_gamma(double x);

/// log Gamma(x), x > 0, double-double: Stirling series after promoting the
/// argument above 32 by downward recurrence.  Relative error ~1e-29.
DDouble stirling_log_gamma(DDouble x);

inline double log_gamma(double x, const PrecisionCtx& ctx) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
    if (ctx.is_extended()) return stirling_log_gamma(DDouble(x)).to_double();
    return lanczos_log_gamma(x);
}

/// Gamma(num)/Gamma(den).  den a non-positive integer encodes the
/// reciprocal-gamma zero and yields 0.  When num - den is an integer the
/// ratio telescopes into a cancellation-free Pochhammer product.
double gamma_ratio(double num_arg, double den_arg, const PrecisionCtx& ctx);
DDouble gamma_ratio_dd(double num_arg, double den_arg);
/// Double-double arguments: pass n + a as DDouble(n) + DDouble(a) so large
/// integer parts do not round the fractional offset away.
DDouble gamma_ratio_dd(DDouble num_arg, DDouble den_arg);

enum class StirlingKind { first_signed, second };

/// Exact s(n,k) / S(n,k) for 0 <= k <= n <= 20 via the triangular
/// recurrences; throws on 64-bit overflow.
long long stirling_number(long n, long k, StirlingKind kind);

/// S(n,k) in double-double for large n (used by smooth-difference series).
DDouble stirling_second_dd(long n, long k);

/// Exact binomial coefficient as double (n <= 60 or so stays exact).
double binomial(long n, long k);

/// sum_{j=0}^{k} C(k,j)(-1)^j (b)_j/Gamma(c+j) - (c-b)_k/Gamma(c+k).
double chu_vandermonde_residual(double b, double c, long k);

}  // namespace hrb
