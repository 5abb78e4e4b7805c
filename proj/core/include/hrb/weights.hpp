#pragma once

#include <string>
#include <vector>

#include "hrb/ddouble.hpp"
#include "hrb/precision.hpp"

namespace hrb {

enum class Family {
    classical_hardy_p,
    classical_birman,
    kpp,
    fkp,
    lambda_family,
    sw,
    sw_closed_hardy,
    sw_closed_p2,
    sw_tilde,
};

Family parse_family(const std::string& name);
const char* family_name(Family f);

struct WeightSpec {
    Family family = Family::sw;
    long ell = 1;
    double p = 2.0;
    double lambda = 0.0;  // lambda_family only

    double q() const { return p / (p - 1.0); }
    void validate() const;  // throws std::invalid_argument on bad combos
};

// ---- parameter sequences ------------------------------------------------

/// g_n = Gamma(n + 1/q)/Gamma(n - ell + 1); 0 for n < ell.
double g_seq(long ell, double p, long n, const PrecisionCtx& ctx);
DDouble g_seq_dd(long ell, double p, long n);

/// g~_n = n^{1-1/p} (n-1)(n-2)...(n-ell+1); 0 for n < 0.
double g_tilde_seq(long ell, double p, long n);
DDouble g_tilde_seq_dd(long ell, double p, long n);

/// (div^ell g~)_n, stable: smooth-monomial series for n well above ell,
/// direct double-double stencil for small n.
DDouble div_ell_g_tilde_dd(long ell, double p, long n);

// ---- weights ------------------------------------------------------------

/// Gamma-quotient form of the optimal weight (oracle path).
double rho_sw_gamma(long ell, double p, long n, const PrecisionCtx& ctx);

/// Gamma-free Pochhammer product form (production path).
double rho_sw_product(long ell, double p, long n, const PrecisionCtx& ctx);
DDouble rho_sw_product_dd(long ell, double p, long n);

/// rho~_n = -Delta_p^(ell) g~_n / g~_n^{p-1}, via the p-Laplacian stencil
/// on a local window (double precision, spec path).
double rho_tilde(long ell, double p, long n, long window_pad = -1);

/// Same quantity through the stable div^ell series plus one double-double
/// stencil pass (accurate for large n).
DDouble rho_tilde_dd(long ell, double p, long n);

/// Named classical closed forms (hardy_p, birman, kpp, fkp, lambda).
double classical_weight(const WeightSpec& spec, long n);

enum class ClosedVariant { hardy_1p, birman_l2_product, birman_l2_pochhammer };

/// hardy_1p: (1/q)^{p-1} [(n-1/p)^{1-p} - n^{1-p}] (ell=1).
/// birman_l2_product: (1/2)_ell^2 / [n(n-1/2)(n-1)...(n-ell+1/2)] (p=2).
/// birman_l2_pochhammer: (1/2)_ell^2 / [(n-ell-1/2)_ell (n-ell+1)_ell],
/// transcribed as printed; see the form-equivalence report for the verdict.
double closed_form_rho(long ell, double p, long n, ClosedVariant variant);

/// Dispatch on spec.family.
double weight_value(const WeightSpec& spec, long n, const PrecisionCtx& ctx);

// ---- asymptotic series --------------------------------------------------

struct SeriesCoeffs {
    long ell = 0;
    double p = 2.0;
    long K = 0;
    std::vector<double> A;              // A_1..A_K
    std::vector<double> err_estimate;   // Richardson tableau corrections
    double noise_floor = 0.0;           // estimated extraction noise at A_K
};

/// Extract A_1..A_K of rho_n n^{ell p}/(1/q)_ell^p = 1 + sum A_k n^{-k}
/// on a geometric ladder in double-double.
SeriesCoeffs series_coeffs(long ell, double p, long K);

/// Same extraction for rho~ (sw_tilde); noisier, ladder auto-shortened.
SeriesCoeffs series_coeffs_tilde(long ell, double p, long K);

/// Closed forms where known: A_k^(1,p) = (p)_k/(p^k (k+1)!) and
/// A_k^(ell,2) = S(2 ell - 1 + k, 2 ell - 1)/2^k.
double series_coeff_closed_form(long ell, double p, long k);

}  // namespace hrb
