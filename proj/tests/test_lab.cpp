#include <doctest.h>

#include <cmath>

#include "hrb/lab.hpp"
#include "hrb/rng.hpp"

using hrb::cplx;
using hrb::LatticeSeq;

static const hrb::PrecisionCtx kStd = hrb::PrecisionCtx::standard();

namespace {
LatticeSeq random_u(long ell, long span, uint64_t seed) {
    hrb::SplitMix64 rng(seed);
    std::vector<cplx> v(static_cast<size_t>(span) + 1);
    for (auto& z : v) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return LatticeSeq(ell, v, ell);
}
}  // namespace

TEST_CASE("zero sequence gives zero gap; random u gives nonnegative gap") {
    hrb::WeightSpec w{hrb::Family::sw, 1, 2.0, 0.0};
    CHECK(hrb::functional_gap(LatticeSeq(), 1, 2.0, w, kStd) == 0.0);
    for (uint64_t s = 1; s <= 20; ++s) {
        LatticeSeq u = random_u(1, 30, s);
        double gap = hrb::functional_gap(u, 1, 2.0, w, kStd);
        CHECK(gap >= -1e-10 * hrb::lp_energy(u, 1, 2.0));
    }
}

TEST_CASE("per-site remainder vanishes exactly at u = g") {
    hrb::SeqOracle g = hrb::make_g_oracle(1, 2.5);
    LatticeSeq gs = LatticeSeq::sample(
        1, 60, [&](long n) { return cplx(g.value(n).to_double(), 0.0); }, 1);
    for (long n = 1; n <= 55; ++n) {
        double r = hrb::remainder_small(2.0, 2.5, gs, gs, n);
        double scale = std::pow(std::abs(gs.value(n + 1)), 2.5);
        CHECK(std::fabs(r) <= 1e-14 * scale + 1e-300);
    }
}

TEST_CASE("remainder branches: s <= 2 power form, s > 2 quadratic-times-base form") {
    LatticeSeq g(0, {cplx(1.0), cplx(2.0), cplx(4.0)}, 0);
    LatticeSeq u(0, {cplx(1.0), cplx(3.0), cplx(2.0)}, 0);
    // n=0: cross = sqrt(1/2)*3 - sqrt(2)*1
    double cross = std::sqrt(0.5) * 3.0 - std::sqrt(2.0);
    CHECK(hrb::remainder_small(2.0, 3.0, g, u, 0) ==
          doctest::Approx(std::pow(std::fabs(cross), 3.0)));
    double base = std::fabs(3.0 - 1.0) + 1.0 / 1.0 * (2.0 - 1.0);
    CHECK(hrb::remainder_small(3.0, 3.0, g, u, 0) ==
          doctest::Approx(cross * cross * std::pow(base, 1.0)));
    CHECK_THROWS_AS((void)hrb::remainder_small(1.0, 2.0, g, u, 0), std::domain_error);
    CHECK_THROWS_AS((void)hrb::remainder_small(2.0, 2.0, u, g, 5), std::domain_error);
}

TEST_CASE("p=2 identity: gap equals the remainder sum exactly up to rounding") {
    for (long ell : {1L, 2L, 3L}) {
        hrb::SeqOracle g = hrb::make_g_oracle(ell, 2.0);
        for (uint64_t s = 1; s <= 10; ++s) {
            LatticeSeq u = random_u(ell, 40, 100 * static_cast<uint64_t>(ell) + s);
            hrb::RemainderReport r = hrb::sandwich_check(ell, 2.0, g, u);
            REQUIRE(r.gap > 0.0);
            CHECK(std::fabs(r.gap - r.sum_Rp) <= 1e-11 * r.gap);
            CHECK(std::fabs(r.gap - r.sum_Rq) <= 1e-11 * r.gap);  // q = p = 2
        }
    }
}

TEST_CASE("remainder terms are nonnegative and sandwich the gap for p != 2") {
    for (double p : {1.5, 3.0}) {
        hrb::SeqOracle g = hrb::make_g_oracle(2, p);
        for (uint64_t s = 1; s <= 8; ++s) {
            LatticeSeq u = random_u(2, 40, 7000 + s);
            hrb::RemainderReport r = hrb::sandwich_check(2, p, g, u);
            for (double v : r.per_k_q) CHECK(v >= -1e-12 * r.gap);
            for (double v : r.per_k_p) CHECK(v >= -1e-12 * r.gap);
            CHECK(r.gap > 0.0);
            // two-sided control with unspecified constants: both ratios finite
            CHECK(r.sum_Rq > 0.0);
            CHECK(r.sum_Rp > 0.0);
        }
    }
}

TEST_CASE("scalar probe: p=2 identity and nonnegative middle term") {
    std::vector<double> ts;
    for (int i = 0; i <= 50; ++i) ts.push_back(i / 50.0);
    std::vector<cplx> zs;
    hrb::SplitMix64 rng(3);
    for (int i = 0; i < 200; ++i) zs.push_back(cplx(rng.uniform(-3, 3), rng.uniform(-3, 3)));
    for (double p : {1.1, 1.5, 2.0, 2.5, 4.0}) {
        hrb::LemmaProbeResult res = hrb::scalar_lemma_probe(p, ts, zs);
        INFO("p=", p);
        CHECK(res.min_M >= -1e-12);
        CHECK(!res.negative_ratio_found);
        if (p == 2.0) CHECK(res.max_p2_identity_dev < 1e-12);
        CHECK(res.grid_points == 51 * 200);
    }
    CHECK_THROWS_AS((void)hrb::scalar_lemma_probe(1.0, ts, zs), std::domain_error);
}

TEST_CASE("hard truncation of g keeps the gap strictly positive") {
    for (auto [ell, p] : std::vector<std::pair<long, double>>{{1, 2.0}, {2, 3.0}}) {
        hrb::NonattainRecord rec = hrb::nonattain_probe(ell, p, 50, kStd);
        CHECK(rec.positive);
        CHECK(rec.gap > 0.0);
    }
    CHECK_THROWS_AS((void)hrb::nonattain_probe(2, 2.0, 4, kStd), std::domain_error);
}

TEST_CASE("corpus run: deterministic, violation-free, p=2 identity tracked") {
    hrb::CorpusSummary a = hrb::run_corpus(2, 2.0, hrb::Family::sw, 50, 999, kStd);
    hrb::CorpusSummary b = hrb::run_corpus(2, 2.0, hrb::Family::sw, 50, 999, kStd);
    REQUIRE(a.rows.size() == 50);
    CHECK(a.violations == 0);
    CHECK(a.min_gap_rel >= -1e-10);
    CHECK(a.max_p2_identity_dev < 1e-11);
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].gap == b.rows[i].gap);  // byte-identical reruns
    }
    // different seed, different corpus
    hrb::CorpusSummary c = hrb::run_corpus(2, 2.0, hrb::Family::sw, 50, 1000, kStd);
    CHECK(a.rows[0].gap != c.rows[0].gap);
}

TEST_CASE("corpus across families") {
    for (hrb::Family fam : {hrb::Family::sw_tilde, hrb::Family::classical_birman}) {
        hrb::CorpusSummary s = hrb::run_corpus(1, 3.0, fam, 30, 42, kStd);
        CHECK(s.violations == 0);
    }
    hrb::CorpusSummary kpp = hrb::run_corpus(1, 2.0, hrb::Family::kpp, 30, 42, kStd);
    CHECK(kpp.violations == 0);
}
