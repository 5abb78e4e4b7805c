#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrb/ddouble.hpp"
#include "hrb/precision.hpp"

namespace hrb {

/// Stable evaluators for a parameter sequence g: the values themselves and
/// h_n = ((div^ell g)_n)^<p-1>, which drives every -Delta_p^(ell-k) grad^k g
/// check through the identity
///   -Delta_p^(ell-k) grad^k g_n = (-1)^(ell-k) (div^(ell-k) h)_(n-ell).
struct SeqOracle {
    long ell = 1;
    double p = 2.0;
    std::function<DDouble(long)> value;
    std::function<DDouble(long)> h;
};

SeqOracle make_g_oracle(long ell, double p);
/// Same oracle with g and h tabulated on [0, n_hi] through the one-step
/// recurrences Gamma(n+1+a)/Gamma(n+a) = n+a; O(1) per lookup, needed by the
/// large cutoff windows where per-call log-gamma would dominate.
SeqOracle make_g_oracle_cached(long ell, double p, long n_hi);
SeqOracle make_g_tilde_oracle(long ell, double p);
/// Generic sequence: h computed by a direct double-double stencil of value.
SeqOracle make_generic_oracle(long ell, double p, std::function<double(long)> g);

struct AssumptionReport {
    std::string item;     // "A1[k]", "A2[k]", "A3", "A3_strict", "A4", "CM[N]"
    bool passed = false;
    std::optional<std::pair<long, long>> first_violation;  // (k, n)
    double min_margin = 0.0;  // smallest normalized slack observed
    long n_lo = 0, n_hi = 0;
    std::string note;
};

/// (A1) grad^k g_n > 0 for k=0..ell; (A2) -Delta_p^(ell-k) grad^k g_n >= 0
/// for k=1..ell-1; (A3) the k=0 case, optionally strict.
std::vector<AssumptionReport> check_A1_A2_A3(const SeqOracle& g, long n_lo, long n_hi,
                                             bool strict_A3);

struct A4Fit {
    std::vector<double> alpha;   // fitted alpha_0..alpha_J
    long fitted_terms = 0;       // J+1 (may stop short of 2*ell at the noise floor)
    double residual_order = 0.0; // fitted exponent of the unscaled remainder
    bool alpha0_nonzero = false;
    bool passed = false;
    bool flagged = true;  // finite-grid fit: "consistent with", never "verified"
    std::string note;
};

/// Fit g_n = sum_j alpha_j n^(ell-j-1/p) on a geometric ladder and check the
/// remainder decay order against -(ell+1+1/p) with slack 0.25.
A4Fit check_A4(const std::function<DDouble(long)>& g, long ell, double p);

/// Window complete monotonicity: (-1)^k div^k f >= -tol for k = 0..N on the
/// shrinking windows.  f given as consecutive values starting at n_lo.
AssumptionReport cm_window_check(const std::vector<DDouble>& f, long n_lo, long N);

/// CM^N_lambda proxy: the same check applied to f^lambda (requires f > 0).
AssumptionReport cm_power_class_check(const std::vector<DDouble>& f, long n_lo,
                                      double lambda, long N);

struct ScanRow {
    long ell;
    double p;
    std::string item;
    bool passed;
    double margin;
    std::string note;
};

/// Conjecture evidence scan for rho~: (i) A1-A3 window audits for g~,
/// (ii) pointwise improvement over the classical Birman weight,
/// (iii) non-negativity of the extracted series coefficients.
std::vector<ScanRow> conjecture_scan(const std::vector<long>& ells,
                                     const std::vector<double>& ps, long n_max, long K);

}  // namespace hrb
