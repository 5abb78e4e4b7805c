#pragma once

#include <cmath>
#include <stdexcept>

#include "hrb/lattice_seq.hpp"

namespace hrb {

enum class ShiftKind { shift, middle };

/// Signed power nu^<a> = nu * |nu|^(a-1), with 0^<a> := 0.  Preserves the
/// phase of nu; real inputs give real outputs with the sign kept.
inline cplx signed_pow(cplx z, double a) {
    if (a <= 0.0) throw std::domain_error("signed_pow: exponent must be positive");
    double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return z * std::pow(r, a - 1.0);
}

inline double signed_pow(double x, double a) {
    if (a <= 0.0) throw std::domain_error("signed_pow: exponent must be positive");
    if (x == 0.0) return 0.0;
    return x >= 0.0 ? std::pow(x, a) : -std::pow(-x, a);
}

/// Backward difference (grad u)_n = u_n - u_{n-1}, iterated k times.
LatticeSeq grad_k(const LatticeSeq& u, long k);

/// Forward difference (div u)_n = u_{n+1} - u_n, iterated k times.
LatticeSeq div_k(const LatticeSeq& u, long k);

/// Forward shift S^m (any integer m) or m-fold middle operator
/// M u_n = (u_{n+1} + u_n)/2 (m >= 0).
LatticeSeq shift_middle(const LatticeSeq& u, long m, ShiftKind kind);

/// -Delta_p^(ell) u = (-1)^ell div^ell ((grad^ell u)^<p-1>); for ell = 0
/// this is the elementwise signed power u^<p-1>.
LatticeSeq p_laplacian(const LatticeSeq& u, long ell, double p);

/// sum_{n >= ell} |grad^ell u_n|^p.
double lp_energy(const LatticeSeq& u, long ell, double p);

/// sum_{n >= ell} w(n) |u_n|^p for a pointwise weight.
double weighted_lp_sum(const LatticeSeq& u, long ell, double p,
                       const std::function<double(long)>& weight);

}  // namespace hrb
