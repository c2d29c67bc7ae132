#include "bjlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace bjlab {

static gl_rule compute_gl(int n) {
    // Newton iteration on Legendre polynomials, symmetric nodes
    gl_rule r;
    r.node.resize(n);
    r.weight.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = w;
        r.weight[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.node[n / 2] = 0.0;
    return r;
}

const gl_rule& gauss_legendre(int n) {
    static std::map<int, gl_rule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

void map_rule(const gl_rule& r, double a, double b, std::vector<double>& nodes,
              std::vector<double>& weights) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t i = 0; i < r.node.size(); ++i) {
        nodes.push_back(mid + half * r.node[i]);
        weights.push_back(half * r.weight[i]);
    }
}

std::vector<double> log_edges(double a, double b, double factor) {
    std::vector<double> e{a};
    while (e.back() * factor < b) e.push_back(e.back() * factor);
    e.push_back(b);
    return e;
}

std::vector<double> graded_edges(double a, double b, double toward, double ratio,
                                 double floor_width) {
    std::vector<double> e;
    double len = b - a;
    if (len <= floor_width) return {a, b};
    if (toward <= a) {
        // refine toward a
        e.push_back(b);
        double w = len;
        while (w * ratio > floor_width) {
            w *= ratio;
            e.push_back(a + w);
        }
        e.push_back(a);
        std::reverse(e.begin(), e.end());
    } else {
        e.push_back(a);
        double w = len;
        while (w * ratio > floor_width) {
            w *= ratio;
            e.push_back(b - w);
        }
        e.push_back(b);
    }
    return e;
}

std::vector<double> cap_edges(const std::vector<double>& edges, double max_len) {
    if (!(max_len > 0.0)) return edges;
    std::vector<double> out;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        out.push_back(a);
        double len = b - a;
        if (len > max_len) {
            int k = static_cast<int>(std::ceil(len / max_len));
            if (k > 4096) k = 4096;  // oscillation cap safety valve
            for (int j = 1; j < k; ++j) out.push_back(a + len * j / k);
        }
    }
    out.push_back(edges.back());
    return out;
}

line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    line_fit f;
    const double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    return f;
}

}  // namespace bjlab
