#pragma once

#include <vector>

#include "hrb/audit.hpp"
#include "hrb/discrete_ops.hpp"
#include "hrb/weights.hpp"

namespace hrb {

enum class CutoffKind { truncation, bump };

struct CutoffSpec {
    CutoffKind kind = CutoffKind::truncation;
    long N = 32;
    double epsilon = 0.25;  // mollifier ramp margin, in (0, 1/2)
};

/// Smooth step: exactly 0 for x <= epsilon, exactly 1 for x >= 1 - epsilon,
/// f(s)/(f(s) + f(1-s)) with f(x) = exp(-1/x), s = (x-eps)/(1-2 eps) between.
double eta(double x, double epsilon = 0.25);

/// Logarithmic cutoff profile at x > 0.
///   truncation: 1 on (0,N], eta((2 log N - log x)/log N) on (N, N^2], 0 after.
///   bump: 0 on (0,N], rising ramp on (N, N^2], 1 on (N^2, 2N^2],
///         falling ramp on (2N^2, 2N^3], 0 after.
double xi_profile(const CutoffSpec& spec, double x);

/// Largest n at which xi can be nonzero.
long cutoff_support_hi(const CutoffSpec& spec);

/// Trial sequence u^N = xi * g (materialized; bump windows are capped at
/// 4e6 sites -- use the streaming sweeps beyond that).
LatticeSeq build_uN(long ell, double p, const CutoffSpec& spec);

struct SweepRecord {
    long N = 0;
    double lhs = 0.0;        // sum_{n>=ell} |grad^ell u^N_n|^p
    double rhs = 0.0;        // sum_{n>=ell} rho_n |u^N_n|^p, oracle weight
    double remainder = 0.0;  // sum_k R_k(p)
    double quotient = 0.0;   // lhs / rhs
};

struct SweepResult {
    std::vector<SweepRecord> records;
    /// decay exponent r in remainder ~ (log N)^{-r}, least squares over the list
    double fitted_rate = 0.0;
    bool inconclusive = false;  // p close to 1: windows too small to resolve r
};

/// Truncation-profile sweep: the remainder sum must vanish as N grows,
/// at rate >= min(p,2) - 1 in log N (criticality of the weight).
SweepResult criticality_sweep(long ell, double p, const std::vector<long>& N_list,
                              double epsilon = 0.25);

/// Bump-profile sweep, streamed site by site (support reaches 2N^3): the
/// Rayleigh quotient lhs/rhs must decrease toward 1 (sharpness of the constant).
SweepResult optimality_sweep(long ell, double p, const std::vector<long>& N_list,
                             double epsilon = 0.25);

/// p = 2 spectral oracle: smallest generalized eigenvalue of
/// (grad^ell)^T grad^ell u = lambda diag(w) u for u supported on [m, M],
/// by dense Cholesky inverse iteration.  Scaling the weight by c scales the
/// result by exactly 1/c.
double p2_quotient_oracle(long ell, const WeightSpec& w, long m, long M,
                          double weight_scale = 1.0,
                          const PrecisionCtx& ctx = PrecisionCtx::standard());

}  // namespace hrb
