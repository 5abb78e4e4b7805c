#include <doctest.h>

#include <cmath>

#include "hrb/special.hpp"
#include "hrb/weights.hpp"

using hrb::DDouble;
using hrb::Family;
using hrb::WeightSpec;

static const hrb::PrecisionCtx kStd = hrb::PrecisionCtx::standard();
static const hrb::PrecisionCtx kExt = hrb::PrecisionCtx::extended();

TEST_CASE("optimal weight frozen values") {
    CHECK(hrb::rho_sw_product(1, 2.0, 1, kStd) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(hrb::rho_sw_product(1, 2.0, 2, kStd) == doctest::Approx(1.0 / 12).epsilon(1e-13));
    CHECK(hrb::rho_sw_product(1, 2.0, 3, kStd) == doctest::Approx(1.0 / 30).epsilon(1e-13));
    CHECK(hrb::rho_sw_product(2, 2.0, 2, kStd) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(hrb::rho_sw_product(1, 3.0, 1, kStd) == doctest::Approx(5.0 / 9).epsilon(1e-13));
}

TEST_CASE("three forms of the optimal weight agree; closed p=2 denominator verdict") {
    for (long ell : {1L, 2L, 3L}) {
        for (double p : {1.5, 2.0, 3.0}) {
            for (long n = ell; n <= 40; ++n) {
                double a = hrb::rho_sw_gamma(ell, p, n, kExt);
                double b = hrb::rho_sw_product(ell, p, n, kExt);
                CHECK(std::fabs(a - b) < 1e-12 * std::fabs(a));
                if (ell == 1) {
                    double c = hrb::closed_form_rho(1, p, n, hrb::ClosedVariant::hardy_1p);
                    CHECK(std::fabs(a - c) < 1e-12 * std::fabs(a));
                }
                if (p == 2.0) {
                    double c = hrb::closed_form_rho(ell, 2.0, n,
                                                    hrb::ClosedVariant::birman_l2_product);
                    CHECK(std::fabs(a - c) < 1e-12 * std::fabs(a));
                }
            }
        }
    }
    // the two printed p=2 denominators disagree: the Pochhammer transcription
    // yields -0.5 at ell=1, n=1 while the product form matches the weight (0.5)
    double printed = hrb::closed_form_rho(1, 2.0, 1, hrb::ClosedVariant::birman_l2_pochhammer);
    double product = hrb::closed_form_rho(1, 2.0, 1, hrb::ClosedVariant::birman_l2_product);
    CHECK(printed == doctest::Approx(-0.5));
    CHECK(product == doctest::Approx(0.5));
}

TEST_CASE("parameter sequence and its divergence identity, spot checks") {
    // g_n^(l,p) = Gamma(n+1/q)/Gamma(n-l+1), zero below l
    CHECK(hrb::g_seq(2, 2.0, 1, kStd) == 0.0);
    CHECK(hrb::g_seq(1, 2.0, 1, kStd) ==
          doctest::Approx(0.8862269254527580).epsilon(1e-13));  // Gamma(1.5)
    // div g = g_{n+1} - g_n must match (1/q) Gamma(n+1/q)/Gamma(n+1) for ell=1
    for (long n = 1; n <= 30; ++n) {
        double d = hrb::g_seq(1, 2.0, n + 1, kStd) - hrb::g_seq(1, 2.0, n, kStd);
        double want = 0.5 * hrb::gamma_ratio(n + 0.5, n + 1.0, kStd);
        CHECK(d == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("g~ and its stable divergence") {
    // g~_n = n^{1-1/p} (n-1)...(n-ell+1)
    CHECK(hrb::g_tilde_seq(3, 2.0, 5) == doctest::Approx(std::sqrt(5.0) * 4 * 3));
    CHECK(hrb::g_tilde_seq(3, 2.0, 2) == 0.0);  // (n-2) factor
    // series path and direct stencil agree in their overlap region
    for (long ell : {1L, 2L, 3L}) {
        for (long n = 2 * ell + 2; n <= 2 * ell + 12; ++n) {
            DDouble series = hrb::div_ell_g_tilde_dd(ell, 2.5, n);
            DDouble stencil(0.0);
            double sign = (ell % 2 == 0) ? 1.0 : -1.0;
            for (long i = 0; i <= ell; ++i) {
                stencil += DDouble(sign * hrb::binomial(ell, i)) *
                           hrb::g_tilde_seq_dd(ell, 2.5, n + i);
                sign = -sign;
            }
            CHECK(std::fabs((series - stencil).to_double()) <
                  1e-25 * std::fabs(series.to_double()));
        }
    }
}

TEST_CASE("rho~ reproduces the known ell=1 closed forms") {
    // p=2: the KPP weight; p=3: the FKP weight (frozen independent evaluations)
    CHECK(hrb::rho_tilde_dd(1, 2.0, 1).to_double() ==
          doctest::Approx(0.5857864376269049).epsilon(1e-12));
    CHECK(hrb::rho_tilde_dd(1, 2.0, 2).to_double() ==
          doctest::Approx(0.0681483474218634).epsilon(1e-12));
    CHECK(hrb::rho_tilde_dd(1, 3.0, 1).to_double() ==
          doctest::Approx(0.6549600041466526).epsilon(1e-12));
    // window path agrees with the series path
    for (long n = 1; n <= 50; ++n) {
        double a = hrb::rho_tilde(2, 2.5, n + 1);
        double b = hrb::rho_tilde_dd(2, 2.5, n + 1).to_double();
        CHECK(std::fabs(a - b) < 1e-8 * std::fabs(b));
    }
}

TEST_CASE("classical weights: values and stability at large n") {
    WeightSpec hardy{Family::classical_hardy_p, 1, 2.0, 0.0};
    CHECK(hrb::classical_weight(hardy, 1) == doctest::Approx(0.25));
    CHECK(hrb::classical_weight(hardy, 2) == doctest::Approx(0.0625));
    WeightSpec kpp{Family::kpp, 1, 2.0, 0.0};
    CHECK(hrb::classical_weight(kpp, 1) == doctest::Approx(0.5857864376269049).epsilon(1e-14));
    // naive 2 - sqrt(1-1/n) - sqrt(1+1/n) loses half the digits at n ~ 1e6;
    // the stable form must track 1/(4n^2) asymptotics cleanly
    double v = hrb::classical_weight(kpp, 1000000);
    CHECK(v * 4.0e12 == doctest::Approx(1.0).epsilon(1e-9));
    WeightSpec fkp{Family::fkp, 1, 3.0, 0.0};
    CHECK(hrb::classical_weight(fkp, 1) == doctest::Approx(0.6549600041466526).epsilon(1e-12));
    double f = hrb::classical_weight(fkp, 1000000);
    CHECK(f > 0.0);
    CHECK(std::isfinite(f));
}

TEST_CASE("lambda family decreases in lambda and matches endpoints") {
    for (long n = 1; n <= 20; ++n) {
        double prev = std::numeric_limits<double>::infinity();
        for (double lam : {-0.5, -0.25, 0.0, 0.5, 2.0}) {
            WeightSpec w{Family::lambda_family, 1, 2.0, lam};
            double v = hrb::classical_weight(w, n);
            CHECK(v < prev);
            prev = v;
        }
        // lambda = -1/2 is the optimal p=2 Hardy weight 1/(4n(n-1/2))
        WeightSpec w{Family::lambda_family, 1, 2.0, -0.5};
        CHECK(hrb::classical_weight(w, n) ==
              doctest::Approx(hrb::rho_sw_product(1, 2.0, n, kStd)).epsilon(1e-12));
    }
}

TEST_CASE("weight spec validation") {
    CHECK_THROWS_AS((WeightSpec{Family::kpp, 2, 2.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WeightSpec{Family::sw, 1, 1.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WeightSpec{Family::lambda_family, 1, 2.0, -0.75}.validate()),
                    std::invalid_argument);
    CHECK_NOTHROW((WeightSpec{Family::sw_tilde, 3, 1.7, 0.0}.validate()));
    CHECK(hrb::parse_family("kpp") == Family::kpp);
    CHECK_THROWS_AS((void)hrb::parse_family("nope"), std::invalid_argument);
}

TEST_CASE("improvement over the power weight and asymptotic ratio") {
    // rho_n > (1/q)_l^p n^{-lp}, and the normalized residual decays like 1/n
    for (long ell : {1L, 2L}) {
        for (double p : {1.5, 2.0, 3.0}) {
            double c = std::pow(hrb::pochhammer(1.0 - 1.0 / p, ell), p);
            double a1 = hrb::series_coeff_closed_form(ell, p, 1);
            for (long n : {10L, 20L, 40L, 80L, 160L}) {
                double rho = hrb::rho_sw_product(ell, p, n, kExt);
                double norm = rho * std::pow(static_cast<double>(n),
                                             static_cast<double>(ell) * p) / c;
                CHECK(norm > 1.0);
                // residual after 1 + A_1/n is O(n^{-2}): ratio at n vs 2n in [3.5, 4.5]
                if (a1 > 0.0 && n <= 80) {
                    double r1 = norm - 1.0 - a1 / static_cast<double>(n);
                    double rho2 = hrb::rho_sw_product(ell, p, 2 * n, kExt);
                    double norm2 = rho2 * std::pow(2.0 * n, static_cast<double>(ell) * p) / c;
                    double r2 = norm2 - 1.0 - a1 / (2.0 * n);
                    CHECK(r1 / r2 > 3.5);
                    CHECK(r1 / r2 < 4.5);
                }
            }
        }
    }
}

TEST_CASE("series coefficients match closed forms") {
    for (double p : {1.5, 2.0, 3.0}) {
        hrb::SeriesCoeffs sc = hrb::series_coeffs(1, p, 3);
        CHECK(std::fabs(sc.A[0] - 0.5) < 1e-8);  // A_1^(1,p) = 1/2 for all p
        CHECK(std::fabs(sc.A[0] - hrb::series_coeff_closed_form(1, p, 1)) < 1e-8);
    }
    hrb::SeriesCoeffs s12 = hrb::series_coeffs(1, 2.0, 3);
    CHECK(std::fabs(s12.A[1] - 0.25) < 1e-8);
    hrb::SeriesCoeffs s22 = hrb::series_coeffs(2, 2.0, 3);
    CHECK(std::fabs(s22.A[0] - 3.0) < 1e-7);
    // closed form table: A_k^(l,2) = S(2l-1+k, 2l-1)/2^k
    CHECK(hrb::series_coeff_closed_form(2, 2.0, 1) == doctest::Approx(3.0));
    CHECK(hrb::series_coeff_closed_form(1, 2.0, 2) == doctest::Approx(0.25));
    CHECK(hrb::series_coeff_closed_form(1, 3.0, 1) == doctest::Approx(0.5));
}

TEST_CASE("weight_value dispatch is consistent") {
    WeightSpec sw{Family::sw, 2, 2.0, 0.0};
    CHECK(hrb::weight_value(sw, 2, kStd) == doctest::Approx(0.375).epsilon(1e-12));
    WeightSpec closed{Family::sw_closed_p2, 2, 2.0, 0.0};
    CHECK(hrb::weight_value(closed, 2, kStd) ==
          doctest::Approx(hrb::weight_value(sw, 2, kStd)).epsilon(1e-12));
    WeightSpec tilde{Family::sw_tilde, 1, 2.0, 0.0};
    CHECK(hrb::weight_value(tilde, 1, kStd) ==
          doctest::Approx(0.5857864376269049).epsilon(1e-12));
}
