#pragma once

#include <vector>

#include "hrb/ddouble.hpp"

namespace hrb {

struct RichardsonResult {
    DDouble limit;
    double err_estimate;  // |last tableau correction|
};

/// Limit of T(n) = L + c1/n + c2/n^2 + ... sampled on a ratio-2 geometric
/// ladder n_i = n0 * 2^i (Neville tableau, power-by-power elimination).
inline RichardsonResult richardson_limit(const std::vector<DDouble>& T) {
    if (T.size() < 2) throw std::domain_error("richardson_limit: need >= 2 samples");
    std::vector<DDouble> x = T;
    DDouble top = x[0];
    double err = std::fabs((x[1] - x[0]).to_double());
    double scale2m = 1.0;
    for (size_t m = 1; m < T.size(); ++m) {
        scale2m *= 2.0;
        for (size_t i = 0; i + m < T.size(); ++i)
            x[i] = (DDouble(scale2m) * x[i + 1] - x[i]) / DDouble(scale2m - 1.0);
        err = std::fabs((x[0] - top).to_double());
        top = x[0];
    }
    return {top, err};
}

/// Extract A_1..A_K from f(n) = sum_{k>=1} A_k n^{-k} given samples on a
/// geometric ladder; f is consumed (residual left in place).
inline std::vector<DDouble> extract_inverse_power_coeffs(std::vector<DDouble>& f,
                                                         const std::vector<long>& ns,
                                                         long K) {
    std::vector<DDouble> A;
    A.reserve(static_cast<size_t>(K));
    for (long k = 1; k <= K; ++k) {
        std::vector<DDouble> T(f.size());
        for (size_t i = 0; i < f.size(); ++i) {
            DDouble nk(1.0);
            for (long j = 0; j < k; ++j) nk *= DDouble(static_cast<double>(ns[i]));
            T[i] = f[i] * nk;
        }
        DDouble a = richardson_limit(T).limit;
        A.push_back(a);
        for (size_t i = 0; i < f.size(); ++i) {
            DDouble nk(1.0);
            for (long j = 0; j < k; ++j) nk *= DDouble(static_cast<double>(ns[i]));
            f[i] -= a / nk;
        }
    }
    return A;
}

}  // namespace hrb
