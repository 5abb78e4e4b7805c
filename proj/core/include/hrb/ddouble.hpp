#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace hrb {

/// Double-double scalar: unevaluated sum hi + lo of two doubles giving
/// roughly 31 significant decimal digits.  All arithmetic is built from
/// error-free transformations (two-sum / FMA two-prod), so results stay
/// normalized (|lo| <= ulp(hi)/2).
class DDouble {
public:
    constexpr DDouble() : hi_(0.0), lo_(0.0) {}
    constexpr DDouble(double x) : hi_(x), lo_(0.0) {}
    constexpr DDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

    double hi() const { return hi_; }
    double lo() const { return lo_; }
    double to_double() const { return hi_ + lo_; }

    static DDouble from_i64(long long v) {
        double hi = static_cast<double>(v);
        double lo = static_cast<double>(v - static_cast<long long>(hi));
        return DDouble(hi, lo);
    }

    friend DDouble operator+(DDouble a, DDouble b) {
        double s, e, t, f;
        two_sum(a.hi_, b.hi_, s, e);
        two_sum(a.lo_, b.lo_, t, f);
        e += t;
        DDouble r = quick_two_sum(s, e);
        return quick_two_sum(r.hi_, r.lo_ + f);
    }
    friend DDouble operator-(DDouble a) { return DDouble(-a.hi_, -a.lo_); }
    friend DDouble operator-(DDouble a, DDouble b) { return a + (-b); }

    friend DDouble operator*(DDouble a, DDouble b) {
        double p = a.hi_ * b.hi_;
        double err = std::fma(a.hi_, b.hi_, -p);
        err += a.hi_ * b.lo_ + a.lo_ * b.hi_;
        return quick_two_sum(p, err);
    }

    friend DDouble operator/(DDouble a, DDouble b) {
        if (b.hi_ == 0.0 && b.lo_ == 0.0)
            throw std::domain_error("DDouble: division by zero");
        double q1 = a.hi_ / b.hi_;
        DDouble r = a - DDouble(q1) * b;
        double q2 = r.hi_ / b.hi_;
        r = r - DDouble(q2) * b;
        double q3 = r.hi_ / b.hi_;
        DDouble q = quick_two_sum(q1, q2);
        return q + DDouble(q3);
    }

    DDouble& operator+=(DDouble o) { return *this = *this + o; }
    DDouble& operator-=(DDouble o) { return *this = *this - o; }
    DDouble& operator*=(DDouble o) { return *this = *this * o; }
    DDouble& operator/=(DDouble o) { return *this = *this / o; }

    friend bool operator<(DDouble a, DDouble b) {
        return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
    }
    friend bool operator>(DDouble a, DDouble b) { return b < a; }
    friend bool operator<=(DDouble a, DDouble b) { return !(b < a); }
    friend bool operator>=(DDouble a, DDouble b) { return !(a < b); }
    friend bool operator==(DDouble a, DDouble b) {
        return a.hi_ == b.hi_ && a.lo_ == b.lo_;
    }

private:
    static DDouble quick_two_sum(double a, double b) {
        double s = a + b;
        return DDouble(s, b - (s - a));
    }

    // Knuth two-sum: exact for any magnitudes
    static void two_sum(double a, double b, double& s, double& e) {
        s = a + b;
        double bb = s - a;
        e = (a - (s - bb)) + (b - bb);
    }

    double hi_;
    double lo_;
};

inline DDouble abs(DDouble x) { return x.hi() < 0.0 || (x.hi() == 0.0 && x.lo() < 0.0) ? -x : x; }
inline DDouble fabs(DDouble x) { return abs(x); }
inline bool isfinite(DDouble x) { return std::isfinite(x.hi()); }

inline DDouble ldexp(DDouble x, int k) {
    return DDouble(std::ldexp(x.hi(), k), std::ldexp(x.lo(), k));
}

namespace dd_const {
inline const DDouble ln2{0.6931471805599453, 2.3190468138462996e-17};
inline const DDouble pi{3.141592653589793, 1.2246467991473532e-16};
inline const DDouble half_ln_2pi{0.9189385332046728, -3.8782941580672414e-17};
}  // namespace dd_const

/// exp(x) by reduction x = k ln2 + r, |r| <= ln2/2, then the Taylor series.
inline DDouble exp(DDouble x) {
    if (x.hi() > 709.0) return DDouble(std::numeric_limits<double>::infinity());
    if (x.hi() < -745.0) return DDouble(0.0);
    int k = static_cast<int>(std::lround(x.hi() / dd_const::ln2.hi()));
    DDouble r = x - DDouble::from_i64(k) * dd_const::ln2;
    DDouble sum(1.0), term(1.0);
    for (int n = 1; n <= 40; ++n) {
        term = term * r / DDouble(static_cast<double>(n));
        sum += term;
        if (std::fabs(term.hi()) < 1e-35 * std::fabs(sum.hi())) break;
    }
    return ldexp(sum, k);
}

/// log(x) by reduction to m in [1,2) and the atanh series
/// log m = 2 atanh((m-1)/(m+1)).
inline DDouble log(DDouble x) {
    if (!(x.hi() > 0.0)) throw std::domain_error("DDouble: log of non-positive value");
    int e2 = 0;
    double mh = std::frexp(x.hi(), &e2);  // mh in [0.5,1)
    DDouble m = ldexp(x, -e2 + 1);        // m in [1,2)
    (void)mh;
    DDouble t = (m - DDouble(1.0)) / (m + DDouble(1.0));
    DDouble t2 = t * t;
    DDouble sum = t, pw = t;
    for (int n = 1; n <= 80; ++n) {
        pw = pw * t2;
        DDouble term = pw / DDouble(2.0 * n + 1.0);
        sum += term;
        if (std::fabs(term.hi()) < 1e-35 * std::fabs(sum.hi()) + 1e-320) break;
    }
    return DDouble(2.0) * sum + DDouble::from_i64(e2 - 1) * dd_const::ln2;
}

/// x^k for integer k >= 0 by binary powering (exact error-free chains).
inline DDouble powi(DDouble x, long k) {
    DDouble r(1.0), b = x;
    while (k > 0) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

inline DDouble pow(DDouble x, DDouble a) {
    if (x.hi() == 0.0 && x.lo() == 0.0) {
        if (a.hi() > 0.0) return DDouble(0.0);
        throw std::domain_error("DDouble: pow(0, a<=0)");
    }
    if (!(x.hi() > 0.0)) throw std::domain_error("DDouble: pow of negative base");
    if (a.lo() == 0.0 && a.hi() == std::round(a.hi()) && std::fabs(a.hi()) <= 32.0) {
        long k = static_cast<long>(a.hi());
        return k >= 0 ? powi(x, k) : DDouble(1.0) / powi(x, -k);
    }
    return exp(a * log(x));
}

inline DDouble pow(DDouble x, double a) { return pow(x, DDouble(a)); }

/// Signed power x^<a> = x |x|^(a-1) with 0 -> 0.
inline DDouble signed_pow(DDouble x, double a) {
    if (x.hi() == 0.0 && x.lo() == 0.0) return DDouble(0.0);
    if (x.hi() > 0.0 || (x.hi() == 0.0 && x.lo() > 0.0)) return pow(x, a);
    return -pow(-x, a);
}

inline DDouble sqrt(DDouble x) {
    if (x.hi() == 0.0 && x.lo() == 0.0) return DDouble(0.0);
    if (x.hi() < 0.0) throw std::domain_error("DDouble: sqrt of negative value");
    double y0 = std::sqrt(x.hi());
    // one Newton step in double-double recovers the low word
    DDouble y(y0);
    y = DDouble(0.5) * (y + x / y);
    y = DDouble(0.5) * (y + x / y);
    return y;
}

}  // namespace hrb
