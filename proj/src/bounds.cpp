#include "asuman/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "asuman/rng.hpp"

namespace asuman::bounds {

namespace {

void require(bool ok, const char* msg) {
    if (!ok)
        throw std::invalid_argument(msg);
}

void check_rates(double lambda_e, double lambda) {
    require(std::isfinite(lambda_e) && lambda_e >= 0.0, "lambda_e must be finite and >= 0");
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be finite and > 0");
}

} // namespace

double min_age_mean(std::int64_t k, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(k >= 0, "k must be >= 0");
    double r = lambda_e / (lambda_e + lambda);
    // sum_{l=0}^{k-1} r^l
    if (r == 0.0)
        return k == 0 ? 0.0 : 1.0;
    return (1.0 - std::pow(r, static_cast<double>(k))) / (1.0 - r);
}

double min_age_limit(double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    return (lambda_e + lambda) / lambda;
}

double asuman_ub(int n, double B, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(n >= 2, "n must be >= 2");
    require(std::isfinite(B) && B > 0.0, "B must be finite and > 0");
    double link = B / (n - 1);
    return (lambda_e + link * (lambda_e + lambda) / lambda) / (lambda / n + link);
}

double asuman_ub_limit(double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    return 2.0 * lambda_e / lambda + 1.0;
}

double sensing_envelope(std::int64_t k, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(k >= 1, "k must be >= 1");
    double r = lambda_e / (lambda_e + lambda);
    double rk1 = std::pow(r, static_cast<double>(k - 1));
    double geo = r == 0.0 ? (k >= 2 ? 1.0 : 0.0) : (1.0 - rk1) / (1.0 - r);  // sum_{l=0}^{k-2} r^l
    return 2.0 * geo + rk1;
}

double sensing_envelope_limit(double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    return 2.0 * (lambda_e + lambda) / lambda;
}

double not_min_prob_lb(int n, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(n >= 2, "n must be >= 2");
    return lambda_e * (lambda - lambda / n) /
           (lambda_e * lambda_e + 2.0 * lambda_e * lambda + lambda * lambda / n);
}

double not_min_prob_lb_limit(double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    if (lambda_e == 0.0)
        return 0.0;
    return lambda / (lambda_e + 2.0 * lambda);
}

double partial_pi(double q, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(q > 0.0 && q <= 1.0, "q must be in (0, 1]");
    return q * lambda * lambda / ((lambda_e + 2.0 * lambda) * (lambda + q * lambda_e));
}

double partial_ub(double q, double lambda_e, double lambda) {
    return 1.0 + lambda_e / lambda + 1.0 / partial_pi(q, lambda_e, lambda);
}

double ring_lb(int n, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(n >= 3, "n must be >= 3");
    return n * lambda_e / (3.0 * lambda);
}

double cluster_head_ub(int c, double p, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(c >= 2, "c must be >= 2");
    require(p >= 0.0 && p <= 1.0, "p must be in [0, 1]");
    double x = c * (1.0 - p) * lambda / (c - 1);
    // expanded so lambda_e = 0 stays finite: (le/l)(1 + x(1/l + 1/le))
    double num = lambda_e / lambda + lambda_e * x / (lambda * lambda) + x / lambda;
    double den = 1.0 / c + c * (1.0 - p) / (c - 1);
    return num / den;
}

double cluster_head_ub_limit(double p, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(p >= 0.0 && p < 1.0, "p must be in [0, 1)");
    return (1.0 + 1.0 / (1.0 - p)) * lambda_e / lambda + 1.0;
}

double cluster_leaf_ub(int m, double p, double lambda_e, double lambda, double head_age) {
    check_rates(lambda_e, lambda);
    require(m >= 2, "m must be >= 2");
    require(p > 0.0 && p <= 1.0, "p must be in (0, 1]");
    require(std::isfinite(head_age) && head_age >= 0.0, "head_age must be finite and >= 0");
    double relay = p * lambda / m;
    double gossip = m * lambda / (m - 1);
    double cluster_min = lambda_e / (p * lambda) + head_age + 1.0;
    return (lambda_e + relay * head_age + gossip * cluster_min) / (relay + gossip);
}

double cluster_leaf_ub_limit(double p, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(p > 0.0 && p < 1.0, "p must be in (0, 1)");
    return (2.0 + 1.0 / p + 1.0 / (1.0 - p)) * lambda_e / lambda + 2.0;
}

SplitOptimum cluster_optimum(double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    // 1/p + 1/(1-p) is minimized at p = 1/2
    return SplitOptimum{0.5, 6.0 * lambda_e / lambda + 2.0};
}

double disconnected_cluster_ub(int c, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(c >= 1, "c must be >= 1");
    return (2.0 + c) * lambda_e / lambda + 1.0;
}

double ring_cluster_ub(int c, double p, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(c >= 3, "c must be >= 3");
    require(p > 0.0 && p < 1.0, "p must be in (0, 1)");
    double head = std::sqrt(std::numbers::pi * c / (2.0 * (1.0 - p)));
    return (1.0 + 1.0 / p + head) * lambda_e / lambda + 1.0;
}

double asym_ub(double lambda_i, int n, double B, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(n >= 2, "n must be >= 2");
    require(std::isfinite(B) && B > 0.0, "B must be finite and > 0");
    require(std::isfinite(lambda_i) && lambda_i >= 0.0, "lambda_i must be finite and >= 0");
    double link = B / (n - 1);
    double num = lambda_e / lambda + lambda_e * link / (lambda * lambda) + link / lambda;
    double den = lambda_i / lambda + static_cast<double>(n) / (n - 1);
    return num / den;
}

AsymLimits asym_limits(double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    return AsymLimits{2.0 * lambda_e / lambda + 1.0, lambda_e / lambda + 0.5};
}

double power_law_ub(int i, double nu, int n, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(n >= 2, "n must be >= 2");
    require(i >= 1 && i <= n, "node index must be in [1, n]");
    require(nu > 0.0 && nu < 1.0, "nu must be in (0, 1)");
    double share = std::pow(nu, i) * (1.0 - nu) / (nu * (1.0 - std::pow(nu, n)));
    return asym_ub(share * lambda, n, n * lambda, lambda_e, lambda);
}

double power_law_ub_limit(int i, double nu, double lambda_e, double lambda) {
    check_rates(lambda_e, lambda);
    require(i >= 1, "node index must be >= 1");
    require(nu > 0.0 && nu < 1.0, "nu must be in (0, 1)");
    double share = std::pow(nu, i) * (1.0 - nu) / nu;
    return (2.0 * lambda_e / lambda + 1.0) / (1.0 + share);
}

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::Upper: return "upper";
        case BoundKind::Lower: return "lower";
        case BoundKind::Limit: return "limit";
        case BoundKind::Exact: return "exact";
    }
    return "unknown";
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

std::string render_text(std::span<const BoundReport> reports) {
    std::size_t name_w = 4, param_w = 6, kind_w = 4;
    for (const auto& r : reports) {
        name_w = std::max(name_w, r.name.size());
        param_w = std::max(param_w, r.params.size());
        kind_w = std::max(kind_w, std::string(bound_kind_name(r.kind)).size());
    }
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "%-*s  %-*s  %-*s  %s\n", static_cast<int>(name_w), "name",
                  static_cast<int>(param_w), "params", static_cast<int>(kind_w), "kind", "value");
    out += line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-*s  %-*s  %-*s  %s\n", static_cast<int>(name_w),
                      r.name.c_str(), static_cast<int>(param_w), r.params.c_str(),
                      static_cast<int>(kind_w), bound_kind_name(r.kind), format_value(r.value).c_str());
        out += line;
    }
    return out;
}

std::string render_csv(std::span<const BoundReport> reports) {
    std::string out = "name,params,kind,value\n";
    for (const auto& r : reports) {
        out += r.name;
        out += ',';
        out += r.params;  // key=value pairs joined with ';' so no quoting is needed
        out += ',';
        out += bound_kind_name(r.kind);
        out += ',';
        out += format_value(r.value);
        out += '\n';
    }
    return out;
}

RecurrenceEstimate mc_recurrence(RecurrenceKind kind, const RecurrenceParams& params, int k_max,
                                 std::int64_t replications, std::uint64_t seed) {
    check_rates(params.lambda_e, params.lambda);
    require(params.lambda_e > 0.0, "mc_recurrence: lambda_e must be > 0");
    require(k_max >= 1, "mc_recurrence: k_max must be >= 1");
    require(replications >= 2, "mc_recurrence: need at least 2 replications");
    if (kind == RecurrenceKind::Ring)
        require(params.n >= 3, "mc_recurrence: ring needs n >= 3");
    if (!params.limit_form && kind != RecurrenceKind::MinAge && kind != RecurrenceKind::Ring) {
        require(params.n >= 2, "mc_recurrence: pre-limit form needs n >= 2");
        require(params.gossip_capacity > 0.0, "mc_recurrence: pre-limit form needs B > 0");
    }
    if (kind == RecurrenceKind::Partial)
        require(params.q > 0.0 && params.q <= 1.0, "mc_recurrence: q must be in (0, 1]");

    const double le = params.lambda_e, l = params.lambda;
    std::vector<double> sum(k_max + 1, 0.0), sumsq(k_max + 1, 0.0);
    Rng rng(seed);

    const double reset_prob_limit = not_min_prob_lb_limit(le, l);
    const int targets = params.n >= 2 ? std::max(1, static_cast<int>(params.q * (params.n - 1))) : 1;

    for (std::int64_t rep = 0; rep < replications; ++rep) {
        double min_age = 0.0;  // co-simulated epoch minimum age
        double value = 0.0;    // the tracked recurrence
        if (kind == RecurrenceKind::Sensing || kind == RecurrenceKind::Partial)
            value = 1.0;
        for (int k = 1; k <= k_max; ++k) {
            double tau = rng.exponential(le);
            switch (kind) {
                case RecurrenceKind::MinAge:
                    break;  // tracked below through min_age itself
                case RecurrenceKind::Sensing:
                    if (k >= 2) {
                        if (params.limit_form) {
                            value = rng.uniform01() < std::exp(-l * tau) ? value + 1.0 : min_age + 1.0;
                        } else {
                            double sense = params.c_coeff * min_age;
                            if (tau <= sense)
                                value += 1.0;
                            else if (rng.uniform01() <
                                     std::exp(-(params.gossip_capacity / (params.n - 1)) * (tau - sense)))
                                value += 1.0;
                            else
                                value = min_age + 1.0;
                        }
                    }
                    break;
                case RecurrenceKind::Partial:
                    if (k >= 2) {
                        double pi;
                        if (params.limit_form) {
                            pi = reset_prob_limit * params.q * (1.0 - std::exp(-(l / params.q) * tau));
                        } else {
                            double sense = params.c_coeff * min_age;
                            if (tau <= sense) {
                                pi = 0.0;
                            } else {
                                pi = not_min_prob_lb(params.n, le, l) * params.q *
                                     (1.0 - std::exp(-params.gossip_capacity * (tau - sense) / targets));
                            }
                        }
                        value = rng.uniform01() < pi ? min_age + 1.0 : value + 1.0;
                    }
                    break;
                case RecurrenceKind::Ring:
                    value = rng.uniform01() < std::exp(-3.0 * l * tau / params.n) ? value + 1.0 : 0.0;
                    break;
            }
            min_age = rng.uniform01() < std::exp(-l * tau) ? min_age + 1.0 : 1.0;
            double tracked = kind == RecurrenceKind::MinAge ? min_age : value;
            sum[k] += tracked;
            sumsq[k] += tracked * tracked;
        }
    }

    RecurrenceEstimate est;
    est.replications = replications;
    est.mean.assign(k_max + 1, 0.0);
    est.std_error.assign(k_max + 1, 0.0);
    const double R = static_cast<double>(replications);
    for (int k = 1; k <= k_max; ++k) {
        est.mean[k] = sum[k] / R;
        double var = (sumsq[k] - R * est.mean[k] * est.mean[k]) / (R - 1.0);
        est.std_error[k] = std::sqrt(std::max(0.0, var) / R);
    }
    return est;
}

} // namespace asuman::bounds
