#include "bjlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace bjlab {

bound_report lb_wtau_x0(int d, double R, double absx, double tau) {
    if (d < 1) throw std::invalid_argument("lb_wtau_x0: dimension must be positive");
    if (absx < 0.0) throw std::invalid_argument("lb_wtau_x0: absx must be nonnegative");
    if (!(tau > 0.0) || tau > 0.5)
        throw std::invalid_argument("lb_wtau_x0: tau must lie in (0, 1/2]");
    bound_report rep;
    rep.d = d;
    rep.R = R;
    rep.absx = absx;
    rep.tau = tau;
    const double arg = (R - absx) / (1.0 + absx) * tau;
    if (!(arg > 1.0)) return rep;
    rep.valid = true;
    rep.value = std::pow(2.0, -0.5 * d) * omega(d) * std::pow(tau, -0.5 * d) * std::log(arg);
    return rep;
}

bound_report lb_bj(int d, double R, double absx, double absxi) {
    if (d < 2) throw std::invalid_argument("lb_bj: needs dimension at least 2");
    if (absx < 0.0 || absxi < 0.0)
        throw std::invalid_argument("lb_bj: absx and absxi must be nonnegative");
    bound_report rep;
    rep.d = d;
    rep.R = R;
    rep.absx = absx;
    rep.absxi = absxi;
    const double r_min = (d == 2) ? 2.0 + 3.0 * absx : 4.0 + 5.0 * absx;
    if (8.0 * (R + absx) * absxi > 1.0 || R < r_min) return rep;
    const double osc = std::cos(4.0 * pi * (R + absx) * absxi);
    const double ratio = (R - absx) / (1.0 + absx);
    double v = 0.0;
    if (d == 2) {
        const double lg = std::log(0.5 * ratio);
        v = pi * osc * lg * lg;
    } else {
        const double coeff = std::pow(2.0, 3.0 - d) * omega(d) * std::log(2.0) / (d - 2.0);
        v = coeff * osc * (std::pow(ratio, 0.5 * d - 1.0) - std::pow(2.0, d - 2.0));
    }
    rep.valid = true;
    rep.value = v;
    return rep;
}

bound_report lb_corollary(int d, double R) {
    if (d < 2) throw std::invalid_argument("lb_corollary: needs dimension at least 2");
    if (!(R >= 9.0)) {
        bound_report rep;
        rep.d = d;
        rep.R = R;
        rep.absx = 1.0;
        if (R > 0.0) rep.absxi = 1.0 / (9.0 * R);
        return rep;
    }
    return lb_bj(d, R, 1.0, 1.0 / (9.0 * R));
}

bound_report lb_F_alpha_bj(int d, double alpha, double absx) {
    if (!(alpha > 1.0) || !(alpha < 0.5 * d))
        throw std::invalid_argument("lb_F_alpha_bj: needs 1 < alpha < d/2");
    bound_report rep;
    rep.d = d;
    rep.alpha = alpha;
    rep.absx = absx;
    if (!(absx > 0.0) || !(absx < 1.0)) return rep;
    const double coeff = 2.0 * omega(d) / ((d - alpha) * (alpha - 1.0));
    rep.valid = true;
    rep.value = coeff * (std::pow(absx, 1.0 - alpha) -
                         std::pow(0.5 * (1.0 + absx), 1.0 - alpha));
    return rep;
}

double subcritical_envelope(int d, double p, double tau, double leb_omega) {
    if (d < 1) throw std::invalid_argument("subcritical_envelope: dimension must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("subcritical_envelope: p must be at least 1");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("subcritical_envelope: tau must lie in (0, 1)");
    if (p <= 2.0) {
        if (!(leb_omega > 0.0))
            throw std::invalid_argument("subcritical_envelope: needs a positive measure for p <= 2");
        return std::pow(leb_omega, 1.0 / p - 0.5);
    }
    return std::pow(tau * (1.0 - tau), -0.5 * d * (1.0 - 2.0 / p));
}

}  // namespace bjlab
