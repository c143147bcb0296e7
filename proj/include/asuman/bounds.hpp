#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace asuman::bounds {

// Expected network minimum age at the k-th source self-update and its limit.
double min_age_mean(std::int64_t k, double lambda_e, double lambda);
double min_age_limit(double lambda_e, double lambda);

// Steady-state upper bound on a node's mean age under the sense-then-gossip
// policy on the complete graph with total gossip rate B, and its B = n*lambda,
// n -> infinity limit.
double asuman_ub(int n, double B, double lambda_e, double lambda);
double asuman_ub_limit(double lambda_e, double lambda);

// Envelope b[k] for the sensing-phase age recurrence and its limit.
double sensing_envelope(std::int64_t k, double lambda_e, double lambda);
double sensing_envelope_limit(double lambda_e, double lambda);

// Steady-state lower bound on the probability that a given node is not in
// the minimum-age set, plus its n -> infinity limit.
double not_min_prob_lb(int n, double lambda_e, double lambda);
double not_min_prob_lb_limit(double lambda_e, double lambda);

// Partial connectivity: reset-probability limit pi and the resulting mean-age
// upper bound 1 + lambda_e/lambda + 1/pi.
double partial_pi(double q, double lambda_e, double lambda);
double partial_ub(double q, double lambda_e, double lambda);

// Ring: steady-state lower bound n*lambda_e/(3*lambda).
double ring_lb(int n, double lambda_e, double lambda);

// Clustered networks (c clusters of m leaves, head rate split p).
double cluster_head_ub(int c, double p, double lambda_e, double lambda);
double cluster_head_ub_limit(double p, double lambda_e, double lambda);
double cluster_leaf_ub(int m, double p, double lambda_e, double lambda, double head_age);
double cluster_leaf_ub_limit(double p, double lambda_e, double lambda);

struct SplitOptimum {
    double p_star = 0.5;
    double value = 0.0;
};
SplitOptimum cluster_optimum(double lambda_e, double lambda);

double disconnected_cluster_ub(int c, double lambda_e, double lambda);
double ring_cluster_ub(int c, double p, double lambda_e, double lambda);

// Asymmetric direct-update rates on the complete graph.
double asym_ub(double lambda_i, int n, double B, double lambda_e, double lambda);
struct AsymLimits {
    double worst = 0.0;  // lambda_i -> 0
    double best = 0.0;   // lambda_i -> lambda
};
AsymLimits asym_limits(double lambda_e, double lambda);

// Power-law profile (1-based node index i, B = n*lambda) and its limit.
double power_law_ub(int i, double nu, int n, double lambda_e, double lambda);
double power_law_ub_limit(int i, double nu, double lambda_e, double lambda);

enum class BoundKind { Upper, Lower, Limit, Exact };

struct BoundReport {
    std::string name;
    std::string params;
    BoundKind kind = BoundKind::Upper;
    double value = 0.0;
};

const char* bound_kind_name(BoundKind kind);
std::string render_text(std::span<const BoundReport> reports);
std::string render_csv(std::span<const BoundReport> reports);

// Monte-Carlo evaluation of the epoch recurrences used to derive the bounds.
enum class RecurrenceKind { MinAge, Sensing, Partial, Ring };

struct RecurrenceParams {
    double lambda_e = 1.0;
    double lambda = 1.0;
    double c_coeff = 0.0;          // sensing back-off constant (pre-limit forms)
    double gossip_capacity = 0.0;  // B (pre-limit forms)
    int n = 0;                     // node count; required for Ring and pre-limit forms
    double q = 1.0;                // partial connectivity fraction
    bool limit_form = true;        // use the n -> infinity simplifications
};

struct RecurrenceEstimate {
    std::vector<double> mean;       // index k; entry 0 is the k=0 initial value
    std::vector<double> std_error;  // parallel to mean
    std::int64_t replications = 0;
};

RecurrenceEstimate mc_recurrence(RecurrenceKind kind, const RecurrenceParams& params, int k_max,
                                 std::int64_t replications, std::uint64_t seed);

} // namespace asuman::bounds
