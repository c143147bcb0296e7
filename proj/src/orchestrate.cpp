#include "asuman/orchestrate.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "asuman/rng.hpp"

namespace asuman {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string csv_header(bool gnuplot_header) {
    std::string h = "n,policy,node_id,mean_age,stderr,replications,seed\n";
    return gnuplot_header ? "# " + h : h;
}

void append_block(std::string& out, const Scenario& s, const EnsembleStatistics& st) {
    const int n = s.spec.topology.n;
    const std::string policy = policy_name(s.spec.policy);
    const std::string reps = std::to_string(st.replications);
    const std::string seed = std::to_string(s.run.seed);
    for (int i = 0; i < n; ++i) {
        out += std::to_string(n);
        out += ',';
        out += policy;
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += fmt(st.node_mean[static_cast<std::size_t>(i)]);
        out += ',';
        if (!st.node_stderr.empty()) out += fmt(st.node_stderr[static_cast<std::size_t>(i)]);
        out += ',';
        out += reps;
        out += ',';
        out += seed;
        out += '\n';
    }
    out += std::to_string(n);
    out += ',';
    out += policy;
    out += ",network,";
    out += fmt(st.network_mean);
    out += ',';
    if (st.network_stderr) out += fmt(*st.network_stderr);
    out += ',';
    out += reps;
    out += ',';
    out += seed;
    out += '\n';
}

nlohmann::json block_json(const Scenario& s, const EnsembleStatistics& st) {
    nlohmann::json j;
    j["n"] = s.spec.topology.n;
    j["topology"] = topology_name(s.spec.topology.kind);
    j["policy"] = policy_name(s.spec.policy);
    j["replications"] = st.replications;
    j["seed"] = s.run.seed;
    j["epochs"] = s.run.epochs;
    j["warmup_epochs"] = s.run.warmup_epochs;
    j["network_mean_age"] = st.network_mean;
    if (st.network_stderr)
        j["network_stderr"] = *st.network_stderr;
    else
        j["network_stderr"] = nullptr;
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < st.node_mean.size(); ++i) {
        nlohmann::json node;
        node["id"] = i;
        node["mean_age"] = st.node_mean[i];
        if (!st.node_stderr.empty())
            node["stderr"] = st.node_stderr[i];
        else
            node["stderr"] = nullptr;
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

void append_text_block(std::string& out, const Scenario& s, const EnsembleStatistics& st) {
    std::ostringstream os;
    os << topology_name(s.spec.topology.kind) << " n=" << s.spec.topology.n
       << " policy=" << policy_name(s.spec.policy) << " replications=" << st.replications
       << " seed=" << s.run.seed << "\n";
    os << "  network mean age " << fmt(st.network_mean);
    if (st.network_stderr) os << " +- " << fmt(*st.network_stderr) << " (stderr)";
    os << "\n";
    for (std::size_t i = 0; i < st.node_mean.size(); ++i) {
        os << "  node " << i << "  " << fmt(st.node_mean[i]);
        if (!st.node_stderr.empty()) os << " +- " << fmt(st.node_stderr[i]);
        os << "\n";
    }
    out += os.str();
}

} // namespace

int default_jobs() {
    if (const char* env = std::getenv("ASUMAN_SIM_JOBS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc >= 1 ? static_cast<int>(hc) : 1;
}

EnsembleResult run_ensemble(const Scenario& scenario, std::uint64_t sweep_index, int jobs) {
    const int reps = scenario.run.replications;
    if (reps < 1) throw std::invalid_argument("run_ensemble: replications must be >= 1");
    if (jobs < 1) jobs = 1;
    if (jobs > reps) jobs = reps;

    EnsembleResult result;
    result.runs.resize(static_cast<std::size_t>(reps));

    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= reps) return;
            try {
                SimConfig cfg = make_sim_config(scenario, r, derive_seed(scenario.run.seed, sweep_index, r));
                result.runs[static_cast<std::size_t>(r)] = simulate(cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(reps);
                return;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    result.stats = merge(result.runs);
    return result;
}

SweepSpec parse_sweep_spec(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("sweep: expected param=v1,v2,... got \"" + text + "\"");
    SweepSpec spec;
    spec.param = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("sweep: bad value \"" + item + "\"");
        }
        if (pos != item.size()) throw std::invalid_argument("sweep: bad value \"" + item + "\"");
        spec.values.push_back(v);
    }
    if (spec.values.empty()) throw std::invalid_argument("sweep: no values given in \"" + text + "\"");
    return spec;
}

std::vector<SweepPoint> run_sweep(const ScenarioDesc& base, const SweepSpec& sweep, int jobs) {
    std::vector<SweepPoint> points;
    points.reserve(sweep.values.size());
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        ScenarioDesc desc = base;
        apply_sweep_value(desc, sweep.param, sweep.values[i]);
        SweepPoint pt;
        pt.param = sweep.param;
        pt.value = sweep.values[i];
        pt.scenario = build_scenario(desc);
        pt.stats = run_ensemble(pt.scenario, i, jobs).stats;
        points.push_back(std::move(pt));
    }
    return points;
}

std::string render_ensemble_csv(const Scenario& scenario, const EnsembleStatistics& stats,
                                bool gnuplot_header) {
    std::string out = csv_header(gnuplot_header);
    append_block(out, scenario, stats);
    return out;
}

std::string render_sweep_csv(const std::vector<SweepPoint>& points, bool gnuplot_header) {
    std::string out = csv_header(gnuplot_header);
    for (const auto& pt : points) append_block(out, pt.scenario, pt.stats);
    return out;
}

std::string render_ensemble_json(const Scenario& scenario, const EnsembleStatistics& stats) {
    return block_json(scenario, stats).dump(2) + "\n";
}

std::string render_sweep_json(const std::vector<SweepPoint>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : points) {
        nlohmann::json j = block_json(pt.scenario, pt.stats);
        j["sweep_param"] = pt.param;
        j["sweep_value"] = pt.value;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string render_ensemble_text(const Scenario& scenario, const EnsembleStatistics& stats) {
    std::string out;
    append_text_block(out, scenario, stats);
    return out;
}

std::string render_sweep_text(const std::vector<SweepPoint>& points) {
    std::string out;
    for (const auto& pt : points) {
        out += pt.param + "=" + fmt(pt.value) + "\n";
        append_text_block(out, pt.scenario, pt.stats);
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

} // namespace asuman
