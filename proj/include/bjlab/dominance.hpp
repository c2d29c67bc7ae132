#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace bjlab {

// one engine-versus-floor comparison on a randomly drawn tuple
struct dominance_row {
    std::string kind;  // "cosine", "position" or "window"
    int d = 0;
    double R = 0.0;
    double absx = 0.0;
    double absxi = 0.0;
    double tau = 0.0;
    double numeric = 0.0;  // quadrature value
    double bound = 0.0;    // closed-form floor
    double margin = 0.0;   // numeric - bound, scaled by the comparison size
    bool pass = false;
};

// per_lemma seeded tuples for each floor inequality of the annulus family:
//   cosine:   Re W_tau f_R(x, xi) >= cos(4 pi (R+|x|)|xi|) W_tau f_R(x, 0)
//             whenever 4 (R+|x|)|xi| <= 1
//   position: W_tau f_R(x, 0) >= the logarithmic position floor
//   window:   W_BJ f_R(x, xi) >= the oscillation-damped window floor
// draws stay strictly inside each floor's validity region
std::vector<dominance_row> dominance_trials(int per_lemma, std::uint64_t seed);

}  // namespace bjlab
