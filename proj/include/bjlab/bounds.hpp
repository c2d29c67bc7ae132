#pragma once
#include <optional>

#include "bjlab/common.hpp"

namespace bjlab {

// closed-form lower bound evaluated at one input tuple; value is present
// exactly when the hypotheses hold there, callers must test valid first.
// the inputs that bind for the particular bound are echoed back.
struct bound_report {
    std::optional<double> value;
    bool valid = false;
    int d = 0;
    double R = 0.0;
    double absx = 0.0;
    double absxi = 0.0;
    double tau = 0.0;
    double alpha = 0.0;
};

// lower bound for W_tau f_R(x, 0), radial in x.  tau must lie in (0, 1/2].
// valid when (1 + absx)/tau < R - absx; at exact equality the bound
// degenerates to log 1 = 0 and is reported as out of domain.
bound_report lb_wtau_x0(int d, double R, double absx, double tau);

// lower bound for W_BJ f_R(x, xi), dimensions 2 and up.  valid when
// 8 (R + absx) absxi <= 1 and R >= 2 + 3 absx (d = 2) or
// R >= 4 + 5 absx (d > 2).
bound_report lb_bj(int d, double R, double absx, double absxi);

// lb_bj frozen at the worst corner of the box |x| <= 1, |xi| <= 1/(9R);
// valid for R >= 9.  grows like (log R)^2 in d = 2 and R^{d/2-1} above.
bound_report lb_corollary(int d, double R);

// lower bound for W_BJ F_alpha(x, 0); needs 1 < alpha < d/2 (throws
// otherwise) and is valid for 0 < absx < 1.
bound_report lb_F_alpha_bj(int d, double alpha, double absx);

// tau-envelope for the L^p norm of W_tau over a set of measure leb_omega
// (unit L^2 norms): leb_omega^{1/p - 1/2} for p in [1,2], and
// (tau (1 - tau))^{-d/2 (1 - 2/p)} for p > 2
double subcritical_envelope(int d, double p, double tau, double leb_omega);

}  // namespace bjlab
