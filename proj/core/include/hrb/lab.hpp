#pragma once

#include <vector>

#include "hrb/audit.hpp"
#include "hrb/discrete_ops.hpp"
#include "hrb/weights.hpp"

namespace hrb {

/// LHS - RHS of the order-ell weighted inequality for u vanishing below ell.
/// Recomputed through double-double accumulation when the result is tiny
/// relative to the LHS (cancellation guard).
double functional_gap(const LatticeSeq& u, long ell, double p, const WeightSpec& w,
                      const PrecisionCtx& ctx);

/// Per-site remainder R(s; g, u)_n.  s selects the branch (s <= 2 or s > 2);
/// the exponents inside use the ambient p.  Both g_n and g_{n+1} must be > 0.
double remainder_small(double s, double p, const LatticeSeq& g, const LatticeSeq& u,
                       long n);

/// R_k^(ell)(s; g, u) with prefactors from the stable oracle.
double remainder_R_k(long ell, long k, double s, double p, const SeqOracle& g,
                     const LatticeSeq& u);

struct RemainderReport {
    double p = 2.0;
    double gap = 0.0;
    std::vector<double> per_k_q, per_k_p;  // R_k(q), R_k(p), k = 1..ell
    double sum_Rq = 0.0, sum_Rp = 0.0;
    double ratio_low = 0.0;   // gap / sum_Rq
    double ratio_high = 0.0;  // gap / sum_Rp
};

/// Gap plus both remainder sums, all computed from the same oracle so the
/// p = 2 identity gap = sum_k R_k(2) is exact up to rounding.
RemainderReport sandwich_check(long ell, double p, const SeqOracle& g,
                               const LatticeSeq& u);

struct LemmaProbeResult {
    double min_M = 0.0;               // most negative middle term seen
    double max_p2_identity_dev = 0.0; // |M - t|z-1|^2| at p = 2
    double ratio_ML_min = 0.0, ratio_ML_max = 0.0;
    double ratio_MU_min = 0.0, ratio_MU_max = 0.0;
    long grid_points = 0;
    bool negative_ratio_found = false;
};

/// Scalar Lemma explorer: M, L, U over a (t, z) grid.
LemmaProbeResult scalar_lemma_probe(double p, const std::vector<double>& t_grid,
                                    const std::vector<cplx>& z_grid);

struct NonattainRecord {
    long M_cut;
    double gap;
    bool positive;
};

/// Hard truncation of g at M_cut: the gap must stay strictly positive.
NonattainRecord nonattain_probe(long ell, double p, long M_cut,
                                const PrecisionCtx& ctx);

struct CorpusRow {
    long trial;
    long ell;
    double p;
    Family family;
    double lhs, rhs, gap;
    double sum_Rq, sum_Rp;  // only for family sw (oracle-backed)
    double p2_identity_dev; // |gap - sum R_k(2)| / gap at p = 2, else 0
    bool violation;
};

struct CorpusSummary {
    std::vector<CorpusRow> rows;
    long violations = 0;
    double min_gap_rel = 0.0;        // min gap / (lhs + tiny)
    double min_remainder = 0.0;      // most negative R_k total seen
    double max_p2_identity_dev = 0.0;
    double ratio_low_max = 0.0;      // empirical sup gap / sum_Rq
    double ratio_high_min = 0.0;     // empirical inf gap / sum_Rp
};

/// Randomized inequality corpus: complex u with support in [ell, ell+span],
/// re/im uniform on [-1,1], per-trial deterministic seeds.
CorpusSummary run_corpus(long ell, double p, Family family, long trials,
                         uint64_t seed, const PrecisionCtx& ctx, long span = 50,
                         double weight_inflation = 1.0);

}  // namespace hrb
