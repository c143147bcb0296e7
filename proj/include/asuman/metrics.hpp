#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace asuman {

// Exact time integrals of piecewise-constant age trajectories.
class AgeAccumulator {
public:
    explicit AgeAccumulator(int n);

    // add age_i * dt to every node's integral; dt >= 0
    void accumulate(std::span<const std::int64_t> ages, double dt);
    void count_receive(int node);
    void record_min_age(std::int64_t min_age);

    int nodes() const { return static_cast<int>(integral_.size()); }
    double window() const { return window_; }
    const std::vector<double>& integrals() const { return integral_; }
    const std::vector<std::int64_t>& receive_counts() const { return receives_; }
    const std::vector<std::int64_t>& min_age_samples() const { return min_age_; }

    // per-node time averages; throws if the window is empty
    std::vector<double> node_means() const;

private:
    std::vector<double> integral_;
    std::vector<std::int64_t> receives_;
    std::vector<std::int64_t> min_age_;
    double window_ = 0.0;
};

struct EventCounts {
    std::int64_t self_updates = 0;
    std::int64_t direct_updates = 0;
    std::int64_t relay_updates = 0;
    std::int64_t gossip_events = 0;
    std::int64_t phase_starts = 0;
};

struct RunStatistics {
    std::vector<double> node_mean_age;       // post-warmup time average per node
    double network_mean_age = 0.0;           // arithmetic mean of node_mean_age
    std::vector<std::int64_t> min_age_series;  // network minimum age at each epoch start
    double late_min_age_mean = 0.0;          // mean over the second half of the series
    double window = 0.0;                     // measured time span
    std::int32_t replication = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_digest = 0;
    EventCounts counts;
};

struct EnsembleStatistics {
    std::vector<double> node_mean;
    std::vector<double> node_stderr;  // empty when replications == 1
    double network_mean = 0.0;
    std::optional<double> network_stderr;  // absent when replications == 1
    std::int32_t replications = 0;
    std::uint64_t config_digest = 0;
};

// mean of samples[from..]; throws if the tail is empty
double epoch_min_age_mean(std::span<const std::int64_t> samples, std::size_t from);

// Combine replications of the same scenario.  Inputs are reduced in a
// canonical order so any permutation of `runs` yields bit-identical output;
// mismatched config digests raise std::invalid_argument.
EnsembleStatistics merge(std::span<const RunStatistics> runs);

enum class ScalingModel { Constant, Log, Sqrt, Linear, QuarterPower };

struct ScalingFit {
    ScalingModel model = ScalingModel::Constant;
    double coeff = 0.0;  // least-squares coefficient of g(n)
    double ss_resid = 0.0;
};

// Least squares a ~ coeff * g(n) with g in {1, ln n, sqrt n, n, n^(1/4)}.
// Every candidate has exactly one free parameter, so residual sums are
// directly comparable and no candidate nests another.  An affine variant
// (coeff*g(n) + offset) would make the contest meaningless: the constant
// model is nested inside every other one and can never win on residuals.
// Needs >= 3 points with at least two distinct n.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points, ScalingModel model);

// Candidate leaving the smallest residual sum of squares (first listed wins ties).
ScalingModel best_scaling_model(std::span<const std::pair<double, double>> points,
                                std::span<const ScalingModel> candidates);
// true when model a leaves a strictly smaller residual sum than model b
bool fit_beats(std::span<const std::pair<double, double>> points, ScalingModel a, ScalingModel b);

const char* scaling_model_name(ScalingModel model);

double spearman_rank_correlation(std::span<const double> x, std::span<const double> y);

} // namespace asuman
