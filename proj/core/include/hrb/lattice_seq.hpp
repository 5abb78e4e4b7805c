#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace hrb {

using cplx = std::complex<double>;

/// Complex sequence on a finite integer window [lo, hi], implicitly
/// zero-extended to all of Z.  `level` asserts membership in H^level,
/// i.e. the sequence vanishes below that index.
class LatticeSeq {
public:
    LatticeSeq() : lo_(0), level_(0) {}

    LatticeSeq(long lo, std::vector<cplx> values, long level = 0)
        : lo_(lo), values_(std::move(values)), level_(level) {
        trim();
    }

    /// Dirac delta at n.
    static LatticeSeq delta(long n, cplx amplitude = 1.0) {
        return LatticeSeq(n, {amplitude}, n >= 0 ? n : 0);
    }

    /// Sample f on [lo, hi].
    static LatticeSeq sample(long lo, long hi, const std::function<cplx(long)>& f,
                             long level = 0) {
        std::vector<cplx> v;
        v.reserve(static_cast<size_t>(hi - lo + 1));
        for (long n = lo; n <= hi; ++n) v.push_back(f(n));
        return LatticeSeq(lo, std::move(v), level);
    }

    long lo() const { return lo_; }
    long hi() const { return lo_ + static_cast<long>(values_.size()) - 1; }
    long level() const { return level_; }
    void set_level(long l) { level_ = l; }
    bool empty() const { return values_.empty(); }
    size_t size() const { return values_.size(); }

    cplx value(long n) const {
        if (values_.empty() || n < lo_ || n > hi()) return {0.0, 0.0};
        return values_[static_cast<size_t>(n - lo_)];
    }

    /// True if the stored window is consistent with membership in H^level.
    bool level_consistent() const {
        for (long n = lo_; n < level_ && n <= hi(); ++n)
            if (value(n) != cplx{0.0, 0.0}) return false;
        return true;
    }

    const std::vector<cplx>& raw() const { return values_; }

private:
    void trim() {
        size_t a = 0, b = values_.size();
        while (a < b && values_[a] == cplx{0.0, 0.0}) ++a;
        while (b > a && values_[b - 1] == cplx{0.0, 0.0}) --b;
        if (a > 0 || b < values_.size()) {
            values_ = std::vector<cplx>(values_.begin() + static_cast<long>(a),
                                        values_.begin() + static_cast<long>(b));
            lo_ += static_cast<long>(a);
        }
        if (values_.empty()) lo_ = 0;
    }

    long lo_;
    std::vector<cplx> values_;
    long level_;
};

}  // namespace hrb
