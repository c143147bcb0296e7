#include "asuman/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asuman {

AgeAccumulator::AgeAccumulator(int n) {
    if (n < 1)
        throw std::invalid_argument("AgeAccumulator: n must be >= 1");
    integral_.assign(n, 0.0);
    receives_.assign(n, 0);
}

void AgeAccumulator::accumulate(std::span<const std::int64_t> ages, double dt) {
    if (ages.size() != integral_.size())
        throw std::invalid_argument("AgeAccumulator::accumulate: size mismatch");
    if (!(dt >= 0.0))
        throw std::invalid_argument("AgeAccumulator::accumulate: dt must be >= 0");
    for (std::size_t i = 0; i < integral_.size(); ++i)
        integral_[i] += static_cast<double>(ages[i]) * dt;
    window_ += dt;
}

void AgeAccumulator::count_receive(int node) {
    receives_.at(node) += 1;
}

void AgeAccumulator::record_min_age(std::int64_t min_age) {
    min_age_.push_back(min_age);
}

std::vector<double> AgeAccumulator::node_means() const {
    if (!(window_ > 0.0))
        throw std::invalid_argument("AgeAccumulator::node_means: empty window");
    std::vector<double> out(integral_.size());
    for (std::size_t i = 0; i < integral_.size(); ++i)
        out[i] = integral_[i] / window_;
    return out;
}

double epoch_min_age_mean(std::span<const std::int64_t> samples, std::size_t from) {
    if (from >= samples.size())
        throw std::invalid_argument("epoch_min_age_mean: empty tail");
    double s = 0.0;
    for (std::size_t k = from; k < samples.size(); ++k)
        s += static_cast<double>(samples[k]);
    return s / static_cast<double>(samples.size() - from);
}

EnsembleStatistics merge(std::span<const RunStatistics> runs) {
    if (runs.empty())
        throw std::invalid_argument("merge: no runs");
    for (const auto& r : runs)
        if (r.config_digest != runs.front().config_digest)
            throw std::invalid_argument("merge: runs come from different scenarios");
    std::size_t n = runs.front().node_mean_age.size();
    for (const auto& r : runs)
        if (r.node_mean_age.size() != n)
            throw std::invalid_argument("merge: node count mismatch");

    // canonical order makes the reduction permutation-invariant bit for bit
    std::vector<const RunStatistics*> order(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i)
        order[i] = &runs[i];
    std::sort(order.begin(), order.end(), [](const RunStatistics* a, const RunStatistics* b) {
        if (a->replication != b->replication) return a->replication < b->replication;
        return a->seed < b->seed;
    });

    std::size_t R = runs.size();
    EnsembleStatistics out;
    out.replications = static_cast<std::int32_t>(R);
    out.config_digest = runs.front().config_digest;
    out.node_mean.assign(n, 0.0);
    std::vector<double> sumsq(n, 0.0);
    double net_sum = 0.0, net_sumsq = 0.0;
    for (const RunStatistics* r : order) {
        for (std::size_t i = 0; i < n; ++i) {
            out.node_mean[i] += r->node_mean_age[i];
            sumsq[i] += r->node_mean_age[i] * r->node_mean_age[i];
        }
        net_sum += r->network_mean_age;
        net_sumsq += r->network_mean_age * r->network_mean_age;
    }
    for (std::size_t i = 0; i < n; ++i)
        out.node_mean[i] /= static_cast<double>(R);
    out.network_mean = net_sum / static_cast<double>(R);
    if (R > 1) {
        out.node_stderr.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double var = (sumsq[i] - static_cast<double>(R) * out.node_mean[i] * out.node_mean[i]) /
                         static_cast<double>(R - 1);
            out.node_stderr[i] = std::sqrt(std::max(0.0, var) / static_cast<double>(R));
        }
        double var = (net_sumsq - static_cast<double>(R) * out.network_mean * out.network_mean) /
                     static_cast<double>(R - 1);
        out.network_stderr = std::sqrt(std::max(0.0, var) / static_cast<double>(R));
    }
    return out;
}

namespace {

double model_g(ScalingModel m, double n) {
    switch (m) {
        case ScalingModel::Constant: return 1.0;
        case ScalingModel::Log: return std::log(n);
        case ScalingModel::Sqrt: return std::sqrt(n);
        case ScalingModel::Linear: return n;
        case ScalingModel::QuarterPower: return std::pow(n, 0.25);
    }
    return 1.0;
}

} // namespace

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points, ScalingModel model) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_scaling: need at least 3 points");
    double first = points.front().first;
    bool distinct = false;
    for (const auto& [n, a] : points) {
        if (!(n > 0.0))
            throw std::invalid_argument("fit_scaling: n must be > 0");
        if (n != first)
            distinct = true;
    }
    if (!distinct)
        throw std::invalid_argument("fit_scaling: all points share one n");

    ScalingFit fit;
    fit.model = model;
    double sgg = 0, sga = 0;
    for (const auto& [n, a] : points) {
        double g = model_g(model, n);
        sgg += g * g;
        sga += g * a;
    }
    // sgg > 0 is guaranteed: with two distinct n at most one g(n) can vanish
    fit.coeff = sga / sgg;
    for (const auto& [n, a] : points) {
        double r = a - fit.coeff * model_g(model, n);
        fit.ss_resid += r * r;
    }
    return fit;
}

ScalingModel best_scaling_model(std::span<const std::pair<double, double>> points,
                                std::span<const ScalingModel> candidates) {
    if (candidates.empty())
        throw std::invalid_argument("best_scaling_model: no candidates");
    ScalingModel best = candidates.front();
    double best_ss = fit_scaling(points, best).ss_resid;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        double ss = fit_scaling(points, candidates[i]).ss_resid;
        if (ss < best_ss) {
            best_ss = ss;
            best = candidates[i];
        }
    }
    return best;
}

bool fit_beats(std::span<const std::pair<double, double>> points, ScalingModel a, ScalingModel b) {
    return fit_scaling(points, a).ss_resid < fit_scaling(points, b).ss_resid;
}

const char* scaling_model_name(ScalingModel model) {
    switch (model) {
        case ScalingModel::Constant: return "constant";
        case ScalingModel::Log: return "log";
        case ScalingModel::Sqrt: return "sqrt";
        case ScalingModel::Linear: return "linear";
        case ScalingModel::QuarterPower: return "quarter_power";
    }
    return "unknown";
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]])
            ++j;
        double mid = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank for ties
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = mid;
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman_rank_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman_rank_correlation: need two equal-length series");
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(rx.size());
    my /= static_cast<double>(ry.size());
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0)
        return 0.0;
    return num / std::sqrt(dx * dy);
}

} // namespace asuman
