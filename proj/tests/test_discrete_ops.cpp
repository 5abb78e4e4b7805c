#include <doctest.h>

#include <cmath>

#include "hrb/discrete_ops.hpp"
#include "hrb/rng.hpp"

using hrb::cplx;
using hrb::LatticeSeq;

namespace {
LatticeSeq random_seq(long lo, long len, uint64_t seed) {
    hrb::SplitMix64 rng(seed);
    std::vector<cplx> v(static_cast<size_t>(len));
    for (auto& z : v) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return LatticeSeq(lo, v, std::max(lo, 0L));
}
}  // namespace

TEST_CASE("grad and div on a delta") {
    LatticeSeq d = LatticeSeq::delta(3);
    LatticeSeq g = hrb::grad_k(d, 1);
    CHECK(g.value(3) == cplx(1.0, 0.0));
    CHECK(g.value(4) == cplx(-1.0, 0.0));
    LatticeSeq dv = hrb::div_k(d, 1);
    CHECK(dv.value(2) == cplx(1.0, 0.0));
    CHECK(dv.value(3) == cplx(-1.0, 0.0));
}

TEST_CASE("grad_k is the alternating binomial stencil") {
    LatticeSeq u = random_seq(0, 20, 99);
    LatticeSeq g3 = hrb::grad_k(u, 3);
    for (long n = 0; n <= 25; ++n) {
        cplx want = u.value(n) - 3.0 * u.value(n - 1) + 3.0 * u.value(n - 2) - u.value(n - 3);
        CHECK(std::abs(g3.value(n) - want) < 1e-14);
    }
}

TEST_CASE("grad and div commute and compose") {
    LatticeSeq u = random_seq(2, 15, 5);
    LatticeSeq a = hrb::div_k(hrb::grad_k(u, 2), 1);
    LatticeSeq b = hrb::grad_k(hrb::div_k(u, 1), 2);
    for (long n = -5; n <= 25; ++n) CHECK(std::abs(a.value(n) - b.value(n)) < 1e-13);
}

TEST_CASE("summation by parts: sum (div u) v = -sum u (grad v) for finite support") {
    LatticeSeq u = random_seq(0, 12, 7), v = random_seq(0, 12, 8);
    cplx lhs = 0.0, rhs = 0.0;
    LatticeSeq du = hrb::div_k(u, 1), gv = hrb::grad_k(v, 1);
    for (long n = -3; n <= 20; ++n) lhs += du.value(n) * v.value(n);
    for (long n = -3; n <= 20; ++n) rhs -= u.value(n) * gv.value(n);
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("p-Laplacian of a delta, ell=1, p=2") {
    LatticeSeq out = hrb::p_laplacian(LatticeSeq::delta(1), 1, 2.0);
    CHECK(out.value(0) == cplx(-1.0, 0.0));
    CHECK(out.value(1) == cplx(2.0, 0.0));
    CHECK(out.value(2) == cplx(-1.0, 0.0));
}

TEST_CASE("p=2 p-Laplacian is linear; general p is 1-homogeneous of degree p-1") {
    LatticeSeq u = random_seq(1, 10, 3);
    double c = 2.5, p = 3.0;
    std::vector<cplx> scaled(u.raw());
    for (auto& z : scaled) z *= c;
    LatticeSeq cu(u.lo(), scaled, u.level());
    LatticeSeq a = hrb::p_laplacian(cu, 2, p), b = hrb::p_laplacian(u, 2, p);
    for (long n = -2; n <= 16; ++n)
        CHECK(std::abs(a.value(n) - std::pow(c, p - 1.0) * b.value(n)) < 1e-12);
}

TEST_CASE("ell=0 p-Laplacian is the elementwise signed power") {
    LatticeSeq u(0, {cplx(-2.0, 0.0), cplx(0.0, 0.0), cplx(3.0, 0.0)}, 0);
    LatticeSeq out = hrb::p_laplacian(u, 0, 3.0);
    CHECK(std::abs(out.value(0) - cplx(-4.0, 0.0)) < 1e-14);
    CHECK(out.value(1) == cplx(0.0, 0.0));
    CHECK(std::abs(out.value(2) - cplx(9.0, 0.0)) < 1e-13);
}

TEST_CASE("signed power preserves phase; exponent must be positive") {
    cplx z(3.0, 4.0);
    cplx w = hrb::signed_pow(z, 2.0);
    CHECK(std::abs(w - z * 5.0) < 1e-13);  // |z| = 5
    CHECK(hrb::signed_pow(cplx(0.0, 0.0), 1.5) == cplx(0.0, 0.0));
    CHECK_THROWS_AS((void)hrb::signed_pow(z, 0.0), std::domain_error);
    CHECK(hrb::signed_pow(-4.0, 0.5) == doctest::Approx(-2.0));
}

TEST_CASE("lp_energy and weighted sum ignore indices below ell") {
    LatticeSeq u = random_seq(0, 10, 21);
    double e = hrb::lp_energy(u, 2, 2.0);
    LatticeSeq g = hrb::grad_k(u, 2);
    double want = 0.0;
    for (long n = 2; n <= g.hi(); ++n) want += std::norm(g.value(n));
    CHECK(e == doctest::Approx(want).epsilon(1e-13));
    double w = hrb::weighted_lp_sum(u, 2, 2.0, [](long) { return 1.0; });
    double want2 = 0.0;
    for (long n = 2; n <= u.hi(); ++n) want2 += std::norm(u.value(n));
    CHECK(w == doctest::Approx(want2).epsilon(1e-13));
}

TEST_CASE("shift and middle operators") {
    LatticeSeq u = random_seq(0, 6, 31);
    LatticeSeq s = hrb::shift_middle(u, 2, hrb::ShiftKind::shift);
    for (long n = -4; n <= 10; ++n) CHECK(std::abs(s.value(n) - u.value(n + 2)) < 1e-15);
    LatticeSeq m = hrb::shift_middle(u, 1, hrb::ShiftKind::middle);
    for (long n = -4; n <= 10; ++n)
        CHECK(std::abs(m.value(n) - 0.5 * (u.value(n + 1) + u.value(n))) < 1e-15);
}

TEST_CASE("LatticeSeq trims zeros and tracks levels") {
    LatticeSeq u(0, {cplx(0.0), cplx(0.0), cplx(1.0), cplx(0.0)}, 2);
    CHECK(u.lo() == 2);
    CHECK(u.hi() == 2);
    CHECK(u.level_consistent());
    CHECK(LatticeSeq(0, {}, 0).empty());
}
