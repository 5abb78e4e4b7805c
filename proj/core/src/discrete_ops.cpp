#include "hrb/discrete_ops.hpp"

namespace hrb {

namespace {

LatticeSeq backward_diff(const LatticeSeq& u) {
    if (u.empty()) return u;
    // (grad u)_n = u_n - u_{n-1}: support extends one slot past hi.
    long lo = u.lo(), hi = u.hi() + 1;
    std::vector<cplx> v(static_cast<size_t>(hi - lo + 1));
    for (long n = lo; n <= hi; ++n)
        v[static_cast<size_t>(n - lo)] = u.value(n) - u.value(n - 1);
    long level = u.level();  // vanishing below ell is preserved by grad
    return LatticeSeq(lo, std::move(v), level);
}

LatticeSeq forward_diff(const LatticeSeq& u) {
    if (u.empty()) return u;
    long lo = u.lo() - 1, hi = u.hi();
    std::vector<cplx> v(static_cast<size_t>(hi - lo + 1));
    for (long n = lo; n <= hi; ++n)
        v[static_cast<size_t>(n - lo)] = u.value(n + 1) - u.value(n);
    long level = u.level() > 0 ? u.level() - 1 : 0;
    return LatticeSeq(lo, std::move(v), level);
}

}  // namespace

LatticeSeq grad_k(const LatticeSeq& u, long k) {
    if (k < 0) throw std::domain_error("grad_k: k must be >= 0");
    LatticeSeq r = u;
    for (long i = 0; i < k; ++i) r = backward_diff(r);
    return r;
}

LatticeSeq div_k(const LatticeSeq& u, long k) {
    if (k < 0) throw std::domain_error("div_k: k must be >= 0");
    LatticeSeq r = u;
    for (long i = 0; i < k; ++i) r = forward_diff(r);
    return r;
}

LatticeSeq shift_middle(const LatticeSeq& u, long m, ShiftKind kind) {
    if (kind == ShiftKind::shift) {
        // (S^m u)_n = u_{n+m}
        if (u.empty()) return u;
        long level = u.level() - m;
        if (level < 0) level = 0;
        return LatticeSeq(u.lo() - m, u.raw(), level);
    }
    if (m < 0) throw std::domain_error("shift_middle: middle requires m >= 0");
    LatticeSeq r = u;
    for (long i = 0; i < m; ++i) {
        if (r.empty()) break;
        long lo = r.lo() - 1, hi = r.hi();
        std::vector<cplx> v(static_cast<size_t>(hi - lo + 1));
        for (long n = lo; n <= hi; ++n)
            v[static_cast<size_t>(n - lo)] = 0.5 * (r.value(n + 1) + r.value(n));
        long level = r.level() > 0 ? r.level() - 1 : 0;
        r = LatticeSeq(lo, std::move(v), level);
    }
    return r;
}

LatticeSeq p_laplacian(const LatticeSeq& u, long ell, double p) {
    if (ell < 0) throw std::domain_error("p_laplacian: ell must be >= 0");
    if (!(p > 1.0)) throw std::domain_error("p_laplacian: p must be > 1");
    LatticeSeq g = grad_k(u, ell);
    std::vector<cplx> v(g.raw());
    for (auto& z : v) z = signed_pow(z, p - 1.0);
    LatticeSeq powed(g.lo(), std::move(v), g.level());
    LatticeSeq d = div_k(powed, ell);
    if (ell % 2 == 0) return d;
    std::vector<cplx> w(d.raw());
    for (auto& z : w) z = -z;
    return LatticeSeq(d.lo(), std::move(w), d.level());
}

double lp_energy(const LatticeSeq& u, long ell, double p) {
    LatticeSeq g = grad_k(u, ell);
    double s = 0.0;
    for (long n = std::max(g.lo(), ell); n <= g.hi(); ++n) {
        double a = std::abs(g.value(n));
        if (a > 0.0) s += std::pow(a, p);
    }
    return s;
}

double weighted_lp_sum(const LatticeSeq& u, long ell, double p,
                       const std::function<double(long)>& weight) {
    double s = 0.0;
    for (long n = std::max(u.lo(), ell); n <= u.hi(); ++n) {
        double a = std::abs(u.value(n));
        if (a > 0.0) s += weight(n) * std::pow(a, p);
    }
    return s;
}

}  // namespace hrb
