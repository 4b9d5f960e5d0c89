// Copyright 2026 The qseal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force posterior moments by quadrature over the 3-simplex.
//
// The simplex is parametrized by collapsed coordinates (s, u, v) in [0,1]^3:
//
//   p_ss = s
//   p_sd = (1-s) u
//   p_ds = (1-s)(1-u) v
//   p_dd = (1-s)(1-u)(1-v)         Jacobian (1-s)^2 (1-u)
//
// and p_dd - p_ds = (1-s)(1-u)(1-2v). In these coordinates the posterior and
// both moment weights are products of one-dimensional factors, so the
// tensor-product rule on a tanh-sinh grid reduces to a product of three
// 1-D sums per moment.

#include <cmath>
#include <functional>
#include <vector>

#include "qseal/error.hpp"
#include "qseal/estimator.hpp"

namespace qseal::estimation {

namespace {

constexpr double kTMax = 4.5;
constexpr double kPi = photonics::kPi;

struct Node {
    double log_x;       // log x
    double log_1mx;     // log (1 - x)
    double x;
    double log_weight;  // includes step and Jacobian of the tanh-sinh map
};

// log(1 + e^y) without overflow.
double softplus(double y) { return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

// x = 1 / (1 + exp(-pi sinh t)) maps the real line onto (0,1).
std::vector<Node> tanh_sinh_nodes(int level) {
    const double h = std::ldexp(1.0, -level);
    const int half = static_cast<int>(std::ceil(kTMax / h));
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(2 * half + 1));
    for (int j = -half; j <= half; ++j) {
        const double t = j * h;
        const double g = kPi * std::sinh(t);
        Node n;
        n.log_x = -softplus(-g);
        n.log_1mx = -softplus(g);
        n.x = std::exp(n.log_x);
        // dx/dt = pi cosh(t) x (1-x)
        n.log_weight = std::log(h) + std::log(kPi * std::cosh(t)) + n.log_x + n.log_1mx;
        nodes.push_back(n);
    }
    return nodes;
}

// Signed sum of exp(log_f) * sign over nodes, returned as (log|sum|, sign).
struct LogSum {
    double log_abs;
    double sign;
};

LogSum log_sum(const std::vector<Node>& nodes, const std::function<double(const Node&)>& log_f,
               const std::function<double(const Node&)>& signed_factor) {
    double hi = -INFINITY;
    std::vector<double> lv(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        lv[i] = log_f(nodes[i]) + nodes[i].log_weight;
        if (lv[i] > hi) {
            hi = lv[i];
        }
    }
    if (!std::isfinite(hi)) {
        throw ResolutionError("oracle: integrand vanishes on the whole grid");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        s += std::exp(lv[i] - hi) * signed_factor(nodes[i]);
    }
    return {hi + std::log(std::abs(s)), s < 0.0 ? -1.0 : 1.0};
}

double xlogy(double k, double log_p) { return k == 0.0 ? 0.0 : k * log_p; }

struct Moments {
    double mean;
    double second;
};

Moments moments_at_level(const KappaTotals& k, int level) {
    const auto nodes = tanh_sinh_nodes(level);
    const double one = 1.0;
    const auto unit = [](const Node&) { return 1.0; };

    // s-axis: (s/4)^k_ss (1-s/4)^-(k_ss+1) (1-s)^(k_sd+k_ds+k_dd) * (1-s)^2 Jacobian,
    // times (1-s)^j for the j-th moment.
    const double m = k.k_sd + k.k_ds + k.k_dd;
    LogSum s_axis[3];
    for (int j = 0; j < 3; ++j) {
        s_axis[j] = log_sum(
            nodes,
            [&](const Node& n) {
                return xlogy(k.k_ss, n.log_x - std::log(4.0)) - (k.k_ss + one) * std::log1p(-n.x / 4.0) +
                       (m + 2.0 + j) * n.log_1mx;
            },
            unit);
    }
    // u-axis: u^k_sd (1-u)^(k_ds+k_dd) * (1-u) Jacobian, times (1-u)^j.
    LogSum u_axis[3];
    for (int j = 0; j < 3; ++j) {
        u_axis[j] = log_sum(
            nodes, [&](const Node& n) { return xlogy(k.k_sd, n.log_x) + (k.k_ds + k.k_dd + 1.0 + j) * n.log_1mx; },
            unit);
    }
    // v-axis: v^k_ds (1-v)^k_dd, times (1-2v)^j.
    LogSum v_axis[3];
    for (int j = 0; j < 3; ++j) {
        v_axis[j] = log_sum(
            nodes, [&](const Node& n) { return xlogy(k.k_ds, n.log_x) + xlogy(k.k_dd, n.log_1mx); },
            [&](const Node& n) {
                // 1 - 2v = (1-v) - v, formed from both logs to keep precision near v = 1.
                const double w = std::exp(n.log_1mx) - n.x;
                return std::pow(w, j);
            });
    }

    const auto ratio = [&](int j) {
        const double log_num = s_axis[j].log_abs + u_axis[j].log_abs + v_axis[j].log_abs;
        const double log_den = s_axis[0].log_abs + u_axis[0].log_abs + v_axis[0].log_abs;
        const double sign = s_axis[j].sign * u_axis[j].sign * v_axis[j].sign;
        return sign * std::exp(log_num - log_den);
    };
    return {ratio(1), ratio(2)};
}

}  // namespace

Estimate oracle_estimate(const KappaTotals& kappa, const OracleOptions& options) {
    for (double v : {kappa.k_sd, kappa.k_ss, kappa.k_ds, kappa.k_dd}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("coincidence totals must be finite and non-negative");
        }
    }
    if (kappa.total() > 1e4) {
        throw ValidationError("oracle_estimate is limited to n <= 1e4");
    }

    constexpr int kFirstLevel = 3;
    Moments prev = moments_at_level(kappa, kFirstLevel);
    for (int level = kFirstLevel + 1; level <= options.max_level; ++level) {
        const Moments cur = moments_at_level(kappa, level);
        if (std::abs(cur.mean - prev.mean) <= options.tolerance &&
            std::abs(cur.second - prev.second) <= options.tolerance) {
            Estimate e;
            e.e_kappa = cur.mean;
            e.sigma_kappa = std::sqrt(std::max(0.0, cur.second - cur.mean * cur.mean));
            e.n = kappa.total();
            return e;
        }
        prev = cur;
    }
    throw ResolutionError("oracle_estimate: quadrature did not converge within the level budget");
}

}  // namespace qseal::estimation
