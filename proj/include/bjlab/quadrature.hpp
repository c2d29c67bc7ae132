#pragma once
#include <vector>

#include "bjlab/common.hpp"

namespace bjlab {

struct gl_rule {
    std::vector<double> node;    // on (-1,1)
    std::vector<double> weight;  // sums to 2
};

// Gauss-Legendre rule of order n, cached per n
const gl_rule& gauss_legendre(int n);

// append nodes/weights of the rule mapped to [a,b]
void map_rule(const gl_rule& r, double a, double b, std::vector<double>& nodes,
              std::vector<double>& weights);

// split [a,b] so that adjacent edges have ratio at most `factor` (a > 0)
std::vector<double> log_edges(double a, double b, double factor);

// geometric refinement of [a,b] toward the endpoint `toward` (= a or b),
// ratio in (0,1), stopping when the innermost panel is `floor` wide
std::vector<double> graded_edges(double a, double b, double toward, double ratio,
                                 double floor_width);

// cap panel lengths at `max_len` (uniform subdivision of long panels)
std::vector<double> cap_edges(const std::vector<double>& edges, double max_len);

// least squares fit y = slope*x + intercept
struct line_fit {
    double slope = 0.0;
    double intercept = 0.0;
};
line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bjlab
