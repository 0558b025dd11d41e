#include "support/hiprec.hpp"

#include <cmath>

#include <mpfr.h>

namespace testsup {

namespace {

constexpr mpfr_prec_t kPrec = 256;

class Big {
public:
    Big() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    explicit Big(double x) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Big(const Big& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Big& operator=(const Big& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    ~Big() { mpfr_clear(v_); }

    friend Big operator+(const Big& a, const Big& b) {
        Big r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend Big operator-(const Big& a, const Big& b) {
        Big r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend Big operator*(const Big& a, const Big& b) {
        Big r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend Big operator/(const Big& a, const Big& b) {
        Big r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend Big sqrt(const Big& a) {
        Big r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r;
    }
    // a^b through exp(b log a); a > 0 in every use below
    friend Big pow(const Big& a, const Big& b) {
        Big r; mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }

private:
    mpfr_t v_;
};

} // namespace

HiprecConstants hiprec_constants(double lambda, double Lambda, int N, double mu,
                                 double p) {
    const Big lam(lambda), Lam(Lambda), n(static_cast<double>(N)), m(mu);
    const Big one(1.0), two(2.0);

    const Big Np = (lam / Lam) * (n - one) + one;
    const Big Nm = (Lam / lam) * (n - one) + one;
    const Big tau = (Np - two) / two;
    const Big tau_mop = (Nm - two) / two;
    const Big lbar = Lam * tau * tau;
    const Big lbar_m = lam * tau_mop * tau_mop;

    const Big root = sqrt(tau * tau - m / Lam);
    const Big tp = tau + root;
    const Big tm = tau - root;
    const Big ps = one + two / tp;
    const Big pss = one + two / tm;
    const Big kbar = pow(Lam * tm * (tau - tm), tm / two);

    HiprecConstants out;
    out.Ntilde_plus = Np.to_double();
    out.Ntilde_minus = Nm.to_double();
    out.tau = tau.to_double();
    out.tau_minus_op = tau_mop.to_double();
    out.lambda_bar = lbar.to_double();
    out.lambda_bar_minus = lbar_m.to_double();
    out.tau_plus = tp.to_double();
    out.tau_minus = tm.to_double();
    out.p_star = ps.to_double();
    out.p_star_star = pss.to_double();
    out.K_bar = kbar.to_double();

    if (std::isnan(p)) return out;
    out.has_p = true;
    const Big pb(p);
    const Big mm = two / (pb - one);
    const Big l1 = mm - tp;
    const Big l2 = mm - tm;
    out.lambda1 = l1.to_double();
    out.lambda2 = l2.to_double();
    const Big prod = l1 * l2;
    if (prod.sign() > 0) {
        out.has_K = true;
        out.K = pow(Lam * prod, one / (pb - one)).to_double();
    }
    return out;
}

} // namespace testsup
