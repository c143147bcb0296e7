#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asuman/acceptance.hpp"
#include "asuman/bounds.hpp"
#include "asuman/orchestrate.hpp"
#include "asuman/scenario.hpp"

namespace {

using asuman::bounds::BoundKind;
using asuman::bounds::BoundReport;

struct BoundArgs {
    double lambda_e = 1.0;
    double lambda = 1.0;
    std::optional<int> n, c, m, i, k;
    std::optional<double> B, q, p, nu, head_age, lambda_i;
};

std::string param_str(std::initializer_list<std::pair<const char*, double>> kv) {
    std::string out;
    char buf[64];
    for (const auto& [key, val] : kv) {
        if (!out.empty()) out += ';';
        std::snprintf(buf, sizeof buf, "%s=%.10g", key, val);
        out += buf;
    }
    return out;
}

// Evaluates one named bound. strict: throw when a needed flag is missing;
// otherwise (used by --all) silently skip.
std::optional<BoundReport> eval_bound(const std::string& name, const BoundArgs& a, bool strict) {
    namespace bd = asuman::bounds;
    const double le = a.lambda_e, l = a.lambda;

    auto miss = [&](const char* flag) -> std::optional<BoundReport> {
        if (strict)
            throw std::invalid_argument("bounds: " + name + " requires " + flag);
        return std::nullopt;
    };

    if (name == "min-age-mean") {
        if (!a.k) return miss("--k");
        return BoundReport{name, param_str({{"k", double(*a.k)}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Exact, bd::min_age_mean(*a.k, le, l)};
    }
    if (name == "min-age-limit")
        return BoundReport{name, param_str({{"lambda_e", le}, {"lambda", l}}), BoundKind::Limit,
                           bd::min_age_limit(le, l)};
    if (name == "asuman-ub") {
        if (!a.n) return miss("--n");
        const double B = a.B ? *a.B : *a.n * l;
        return BoundReport{name,
                           param_str({{"n", double(*a.n)}, {"B", B}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Upper, bd::asuman_ub(*a.n, B, le, l)};
    }
    if (name == "asuman-limit")
        return BoundReport{name, param_str({{"lambda_e", le}, {"lambda", l}}), BoundKind::Limit,
                           bd::asuman_ub_limit(le, l)};
    if (name == "sensing-envelope") {
        if (!a.k) return miss("--k");
        return BoundReport{name, param_str({{"k", double(*a.k)}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Upper, bd::sensing_envelope(*a.k, le, l)};
    }
    if (name == "sensing-envelope-limit")
        return BoundReport{name, param_str({{"lambda_e", le}, {"lambda", l}}), BoundKind::Limit,
                           bd::sensing_envelope_limit(le, l)};
    if (name == "not-min-prob-lb") {
        if (!a.n) return miss("--n");
        return BoundReport{name, param_str({{"n", double(*a.n)}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Lower, bd::not_min_prob_lb(*a.n, le, l)};
    }
    if (name == "not-min-prob-lb-limit")
        return BoundReport{name, param_str({{"lambda_e", le}, {"lambda", l}}), BoundKind::Limit,
                           bd::not_min_prob_lb_limit(le, l)};
    if (name == "partial-pi") {
        if (!a.q) return miss("--q");
        return BoundReport{name, param_str({{"q", *a.q}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Limit, bd::partial_pi(*a.q, le, l)};
    }
    if (name == "partial-ub") {
        if (!a.q) return miss("--q");
        return BoundReport{name, param_str({{"q", *a.q}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Upper, bd::partial_ub(*a.q, le, l)};
    }
    if (name == "ring-lb") {
        if (!a.n) return miss("--n");
        return BoundReport{name, param_str({{"n", double(*a.n)}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Lower, bd::ring_lb(*a.n, le, l)};
    }
    if (name == "cluster-head-ub") {
        if (!a.c) return miss("--c");
        if (!a.p) return miss("--p");
        return BoundReport{name,
                           param_str({{"c", double(*a.c)}, {"p", *a.p}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Upper, bd::cluster_head_ub(*a.c, *a.p, le, l)};
    }
    if (name == "cluster-head-limit") {
        if (!a.p) return miss("--p");
        return BoundReport{name, param_str({{"p", *a.p}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Limit, bd::cluster_head_ub_limit(*a.p, le, l)};
    }
    if (name == "cluster-leaf-ub") {
        if (!a.m) return miss("--m");
        if (!a.p) return miss("--p");
        if (!a.head_age) return miss("--head-age");
        return BoundReport{name,
                           param_str({{"m", double(*a.m)},
                                      {"p", *a.p},
                                      {"head_age", *a.head_age},
                                      {"lambda_e", le},
                                      {"lambda", l}}),
                           BoundKind::Upper, bd::cluster_leaf_ub(*a.m, *a.p, le, l, *a.head_age)};
    }
    if (name == "cluster-leaf-limit") {
        if (!a.p) return miss("--p");
        return BoundReport{name, param_str({{"p", *a.p}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Limit, bd::cluster_leaf_ub_limit(*a.p, le, l)};
    }
    if (name == "cluster-optimum") {
        auto opt = bd::cluster_optimum(le, l);
        return BoundReport{name,
                           param_str({{"p_star", opt.p_star}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Limit, opt.value};
    }
    if (name == "disconnected-cluster-ub") {
        if (!a.c) return miss("--c");
        return BoundReport{name, param_str({{"c", double(*a.c)}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Upper, bd::disconnected_cluster_ub(*a.c, le, l)};
    }
    if (name == "ring-cluster-ub") {
        if (!a.c) return miss("--c");
        if (!a.p) return miss("--p");
        return BoundReport{name,
                           param_str({{"c", double(*a.c)}, {"p", *a.p}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Upper, bd::ring_cluster_ub(*a.c, *a.p, le, l)};
    }
    if (name == "asym-ub") {
        if (!a.lambda_i) return miss("--lambda-i");
        if (!a.n) return miss("--n");
        const double B = a.B ? *a.B : *a.n * l;
        return BoundReport{name,
                           param_str({{"lambda_i", *a.lambda_i},
                                      {"n", double(*a.n)},
                                      {"B", B},
                                      {"lambda_e", le},
                                      {"lambda", l}}),
                           BoundKind::Upper, bd::asym_ub(*a.lambda_i, *a.n, B, le, l)};
    }
    if (name == "asym-limit-worst")
        return BoundReport{name, param_str({{"lambda_e", le}, {"lambda", l}}), BoundKind::Limit,
                           bd::asym_limits(le, l).worst};
    if (name == "asym-limit-best")
        return BoundReport{name, param_str({{"lambda_e", le}, {"lambda", l}}), BoundKind::Limit,
                           bd::asym_limits(le, l).best};
    if (name == "power-law-ub") {
        if (!a.i) return miss("--i");
        if (!a.nu) return miss("--nu");
        if (!a.n) return miss("--n");
        return BoundReport{name,
                           param_str({{"i", double(*a.i)},
                                      {"nu", *a.nu},
                                      {"n", double(*a.n)},
                                      {"lambda_e", le},
                                      {"lambda", l}}),
                           BoundKind::Upper, bd::power_law_ub(*a.i, *a.nu, *a.n, le, l)};
    }
    if (name == "power-law-limit") {
        if (!a.i) return miss("--i");
        if (!a.nu) return miss("--nu");
        return BoundReport{name,
                           param_str({{"i", double(*a.i)}, {"nu", *a.nu}, {"lambda_e", le}, {"lambda", l}}),
                           BoundKind::Limit, bd::power_law_ub_limit(*a.i, *a.nu, le, l)};
    }
    throw std::invalid_argument("bounds: unknown bound \"" + name + "\" (see --help for the list)");
}

const std::vector<std::string>& all_bound_names() {
    static const std::vector<std::string> names = {
        "min-age-mean",        "min-age-limit",        "asuman-ub",
        "asuman-limit",        "sensing-envelope",     "sensing-envelope-limit",
        "not-min-prob-lb",     "not-min-prob-lb-limit", "partial-pi",
        "partial-ub",          "ring-lb",              "cluster-head-ub",
        "cluster-head-limit",  "cluster-leaf-ub",      "cluster-leaf-limit",
        "cluster-optimum",     "disconnected-cluster-ub", "ring-cluster-ub",
        "asym-ub",             "asym-limit-worst",     "asym-limit-best",
        "power-law-ub",        "power-law-limit"};
    return names;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-driven simulator and analytic bounds for version-age gossip networks"};
    app.set_version_flag("--version", "asuman-sim 0.1.0");
    app.require_subcommand(1);

    int exit_code = 0;

    // shared options
    std::string scenario_path, out_path = "-", format = "csv";
    int jobs = 0;
    bool gnuplot = false;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub, bool needs_scenario) {
        if (needs_scenario)
            sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        sub->add_option("--out", out_path, "output path, '-' for stdout");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json", "text"}));
        sub->add_option("--jobs", jobs, "worker threads (default: ASUMAN_SIM_JOBS or cores)")
            ->check(CLI::Range(1, 4096));
        sub->add_flag("--gnuplot-header", gnuplot, "comment the CSV header line with '#'");
        sub->add_option("--seed", seed, "override the scenario base seed")
            ->each([&](const std::string&) { seed_given = true; });
    };

    auto resolve_jobs = [&]() { return jobs >= 1 ? jobs : asuman::default_jobs(); };
    auto load_desc = [&]() {
        asuman::ScenarioDesc desc = asuman::load_scenario(scenario_path);
        if (seed_given) desc.run.seed = seed;
        return desc;
    };

    // simulate
    CLI::App* sim = app.add_subcommand("simulate", "run one scenario and report per-node mean ages");
    add_common(sim, true);
    sim->callback([&]() {
        asuman::Scenario s = asuman::build_scenario(load_desc());
        auto ens = asuman::run_ensemble(s, 0, resolve_jobs());
        std::string content = format == "json" ? asuman::render_ensemble_json(s, ens.stats)
                              : format == "text"
                                  ? asuman::render_ensemble_text(s, ens.stats)
                                  : asuman::render_ensemble_csv(s, ens.stats, gnuplot);
        asuman::write_output(out_path, content);
    });

    // sweep
    std::string sweep_expr;
    CLI::App* swp = app.add_subcommand("sweep", "run a scenario across a swept parameter");
    swp->add_option("expr", sweep_expr, "sweep expression, e.g. n=50,100,200")->required();
    add_common(swp, true);
    swp->callback([&]() {
        asuman::ScenarioDesc desc = load_desc();
        asuman::SweepSpec spec = asuman::parse_sweep_spec(sweep_expr);
        auto points = asuman::run_sweep(desc, spec, resolve_jobs());
        std::string content = format == "json" ? asuman::render_sweep_json(points)
                              : format == "text" ? asuman::render_sweep_text(points)
                                                 : asuman::render_sweep_csv(points, gnuplot);
        asuman::write_output(out_path, content);
    });

    // bounds
    BoundArgs bargs;
    std::string bound_name;
    bool bounds_all = false;
    std::string bounds_format = "text";
    std::string bounds_out = "-";
    CLI::App* bnd = app.add_subcommand("bounds", "evaluate analytic age bounds and limits");
    bnd->add_option("name", bound_name, "bound name (see below)");
    bnd->add_flag("--all", bounds_all, "evaluate every bound the given parameters allow");
    bnd->add_option("--lambda-e", bargs.lambda_e, "source self-update rate")->capture_default_str();
    bnd->add_option("--lambda", bargs.lambda, "total source-to-network update rate")
        ->capture_default_str();
    bnd->add_option("--n", bargs.n, "network size");
    bnd->add_option("--B", bargs.B, "total gossip capacity (default n*lambda)");
    bnd->add_option("--q", bargs.q, "partial connectivity fraction");
    bnd->add_option("--c", bargs.c, "cluster count");
    bnd->add_option("--m", bargs.m, "leaves per cluster");
    bnd->add_option("--p", bargs.p, "head rate split toward leaves");
    bnd->add_option("--nu", bargs.nu, "power-law decay factor");
    bnd->add_option("--i", bargs.i, "node index (1-based)");
    bnd->add_option("--k", bargs.k, "epoch index");
    bnd->add_option("--lambda-i", bargs.lambda_i, "per-node update rate");
    bnd->add_option("--head-age", bargs.head_age, "head age for the leaf bound");
    bnd->add_option("--format", bounds_format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));
    bnd->add_option("--out", bounds_out, "output path, '-' for stdout");
    std::string footer = "Bounds:";
    for (const auto& nm : all_bound_names()) footer += "\n  " + nm;
    bnd->footer(footer);
    bnd->callback([&]() {
        std::vector<BoundReport> reports;
        if (bounds_all) {
            for (const auto& nm : all_bound_names()) {
                try {
                    if (auto r = eval_bound(nm, bargs, false)) reports.push_back(std::move(*r));
                } catch (const std::invalid_argument&) {
                    // parameters outside this bound's domain; skip it
                }
            }
        } else {
            if (bound_name.empty())
                throw std::invalid_argument("bounds: give a bound name or --all");
            reports.push_back(*eval_bound(bound_name, bargs, true));
        }
        const std::string content = bounds_format == "csv" ? asuman::bounds::render_csv(reports)
                                                           : asuman::bounds::render_text(reports);
        asuman::write_output(bounds_out, content);
    });

    // validate
    std::string level_str = "quick";
    int vjobs = 0;
    CLI::App* val = app.add_subcommand("validate", "run the built-in acceptance checks");
    val->add_option("--level", level_str, "quick | standard | full")
        ->check(CLI::IsMember({"quick", "standard", "full"}))
        ->capture_default_str();
    val->add_option("--jobs", vjobs, "worker threads")->check(CLI::Range(1, 4096));
    val->callback([&]() {
        const auto level = asuman::acceptance::parse_level(level_str);
        const int j = vjobs >= 1 ? vjobs : asuman::default_jobs();
        auto results = asuman::acceptance::run_all(level, j, &std::cout);
        if (!asuman::acceptance::all_passed(results)) exit_code = 3;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const asuman::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
