#include "shjb/campaign.hpp"

#include "shjb/field_io.hpp"
#include "shjb/integrator.hpp"
#include "shjb/mild.hpp"
#include "shjb/noise.hpp"
#include "shjb/oracles.hpp"
#include "shjb/presets.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace shjb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* version_string = "shjb 0.1.0";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// -- schema ------------------------------------------------------------------

struct KeySpec {
    const char* name;
    json::value_t type;
};

const std::vector<KeySpec> top_keys = {
    {"dim", json::value_t::number_unsigned},
    {"points", json::value_t::number_unsigned},
    {"k", json::value_t::number_float},
    {"k_prime", json::value_t::number_unsigned},
    {"mu", json::value_t::number_float},
    {"gamma", json::value_t::number_float},
    {"dt", json::value_t::number_float},
    {"horizon", json::value_t::number_float},
    {"scheme", json::value_t::string},
    {"seed", json::value_t::number_unsigned},
    {"seed_count", json::value_t::number_unsigned},
    {"campaign", json::value_t::string},
    {"nonlinearity", json::value_t::boolean},
    {"record_stride", json::value_t::number_unsigned},
    {"snapshot_stride", json::value_t::number_unsigned},
    {"initial", json::value_t::object},
    {"potential", json::value_t::object},
    {"transport", json::value_t::object},
    {"truncation", json::value_t::object},
    {"dt_list", json::value_t::array},
    {"gamma_list", json::value_t::array},
    {"oracle", json::value_t::string},
    {"oracle_tol_linf", json::value_t::number_float},
    {"nu", json::value_t::number_float},
    {"mc_paths", json::value_t::number_unsigned},
    {"mc_points", json::value_t::number_unsigned},
    {"delta", json::value_t::number_float},
    {"picard_tol", json::value_t::number_float},
    {"picard_max_iter", json::value_t::number_unsigned},
    {"maxprin_tol", json::value_t::number_float},
};

const std::vector<KeySpec> field_keys = {
    {"preset", json::value_t::string},
    {"amplitude", json::value_t::number_float},
    {"width", json::value_t::number_float},
    {"file", json::value_t::string},
};

const std::vector<KeySpec> transport_keys = {
    {"preset", json::value_t::string},
    {"a", json::value_t::number_float},
    {"b", json::value_t::number_float},
    {"a_files", json::value_t::array},
    {"b_files", json::value_t::array},
};

const std::vector<KeySpec> truncation_keys = {
    {"enabled", json::value_t::boolean},
    {"r", json::value_t::number_float},
    {"respect_stopping", json::value_t::boolean},
};

bool type_matches(const json& v, json::value_t want) {
    if (v.type() == want) return true;
    // integers are acceptable where floats are expected and vice versa when lossless
    if (want == json::value_t::number_float && v.is_number()) return true;
    if (want == json::value_t::number_unsigned && v.is_number_integer() &&
        v.get<long long>() >= 0)
        return true;
    return false;
}

void check_keys(const json& obj, const std::vector<KeySpec>& keys, const std::string& path,
                std::vector<std::string>& errors) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        auto spec = std::find_if(keys.begin(), keys.end(),
                                 [&](const KeySpec& k) { return it.key() == k.name; });
        if (spec == keys.end()) {
            errors.push_back(path + it.key() + ": unknown key");
        } else if (!type_matches(it.value(), spec->type)) {
            errors.push_back(path + it.key() + ": wrong type");
        }
    }
}

json default_config() {
    return json{
        {"dim", 1},
        {"points", 128},
        {"k", 3.0},
        {"mu", 0.1},
        {"gamma", 0.0},
        {"dt", 1e-4},
        {"horizon", 0.5},
        {"scheme", "ito_exp_em"},
        {"seed", 1},
        {"seed_count", 1},
        {"campaign", "single"},
        {"nonlinearity", true},
        {"record_stride", 10},
        {"snapshot_stride", 50},
        {"initial", {{"preset", "sin"}, {"amplitude", 1.0}, {"width", 0.5}}},
        {"potential", {{"preset", "zero"}, {"amplitude", 1.0}, {"width", 0.5}}},
        {"transport", {{"preset", "none"}, {"a", 0.0}, {"b", 0.0}}},
        {"truncation", {{"enabled", false}, {"r", 1.0}, {"respect_stopping", false}}},
        {"dt_list", json::array({4e-4, 2e-4, 1e-4})},
        {"gamma_list", json::array({1e-8, 1e-9, 1e-10})},
        {"oracle", "cole_hopf"},
        {"oracle_tol_linf", 1e-4},
        {"nu", 0.04},
        {"mc_paths", 100000},
        {"mc_points", 5},
        {"delta", 1e-6},
        {"picard_tol", 1e-8},
        {"picard_max_iter", 50},
        {"maxprin_tol", 0.0},
    };
}

SpatialField decode_field(const json& spec, const TorusGrid& grid) {
    if (spec.contains("file")) {
        AnyField loaded = load_field(spec.at("file").get<std::string>());
        SpatialField f = std::holds_alternative<SpatialField>(loaded)
                             ? std::get<SpatialField>(loaded)
                             : to_physical(std::get<SpectralField>(loaded));
        if (!(f.grid == grid)) throw std::invalid_argument("field file grid mismatch");
        return f;
    }
    return field_preset(grid, spec.at("preset").get<std::string>(),
                        spec.value("amplitude", 1.0), spec.value("width", 0.5));
}

} // namespace

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ParseOutcome parse_config_text(const std::string& json_text) {
    ParseOutcome outcome;
    json user;
    try {
        user = json::parse(json_text);
    } catch (const std::exception& e) {
        outcome.errors.push_back(std::string("json: ") + e.what());
        return outcome;
    }
    if (!user.is_object()) {
        outcome.errors.push_back("config: must be a JSON object");
        return outcome;
    }

    check_keys(user, top_keys, "", outcome.errors);
    for (const char* section : {"initial", "potential"})
        if (user.contains(section) && user[section].is_object())
            check_keys(user[section], field_keys, std::string(section) + ".", outcome.errors);
    if (user.contains("transport") && user["transport"].is_object())
        check_keys(user["transport"], transport_keys, "transport.", outcome.errors);
    if (user.contains("truncation") && user["truncation"].is_object())
        check_keys(user["truncation"], truncation_keys, "truncation.", outcome.errors);
    if (!outcome.errors.empty()) return outcome;

    json merged = default_config();
    for (auto it = user.begin(); it != user.end(); ++it) {
        if (it.value().is_object() && merged.contains(it.key())) {
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
                merged[it.key()][jt.key()] = jt.value();
        } else {
            merged[it.key()] = it.value();
        }
    }
    if (!merged.contains("k_prime"))
        merged["k_prime"] = derived_k_prime(merged["k"].get<double>());

    RunConfig cfg;
    try {
        cfg.solver.grid = make_grid(merged["dim"].get<int>(), merged["points"].get<int>());
    } catch (const std::exception& e) {
        outcome.errors.push_back(std::string("grid: ") + e.what());
        return outcome;
    }
    cfg.solver.mu = merged["mu"].get<double>();
    cfg.solver.gamma = merged["gamma"].get<double>();
    cfg.solver.k = merged["k"].get<double>();
    cfg.solver.k_prime = merged["k_prime"].get<int>();
    cfg.solver.dt = merged["dt"].get<double>();
    cfg.solver.horizon = merged["horizon"].get<double>();
    const std::string scheme = merged["scheme"].get<std::string>();
    if (scheme == "ito_exp_em") cfg.solver.scheme = Scheme::ito_exp_em;
    else if (scheme == "strat_heun") cfg.solver.scheme = Scheme::strat_heun;
    else outcome.errors.push_back("scheme: must be ito_exp_em or strat_heun");
    cfg.solver.nonlinearity = merged["nonlinearity"].get<bool>();
    cfg.solver.record_stride = merged["record_stride"].get<int>();
    cfg.solver.snapshot_stride = merged["snapshot_stride"].get<int>();

    try {
        cfg.solver.initial = decode_field(merged["initial"], cfg.solver.grid);
    } catch (const std::exception& e) {
        outcome.errors.push_back(std::string("initial: ") + e.what());
    }
    try {
        cfg.solver.potential = decode_field(merged["potential"], cfg.solver.grid);
    } catch (const std::exception& e) {
        outcome.errors.push_back(std::string("potential: ") + e.what());
    }
    const std::string tpreset = merged["transport"]["preset"].get<std::string>();
    if (merged["transport"].contains("a_files")) {
        // coefficient families from exchange-format field files
        try {
            auto load_all = [&](const json& names) {
                std::vector<SpatialField> fields;
                for (const auto& name : names) {
                    AnyField loaded = load_field(name.get<std::string>());
                    SpatialField f = std::holds_alternative<SpatialField>(loaded)
                                         ? std::get<SpatialField>(loaded)
                                         : to_physical(std::get<SpectralField>(loaded));
                    if (!(f.grid == cfg.solver.grid))
                        throw std::invalid_argument("coefficient file grid mismatch");
                    fields.push_back(std::move(f));
                }
                return fields;
            };
            std::vector<SpatialField> a_fields = load_all(merged["transport"]["a_files"]);
            std::vector<SpatialField> b_fields;
            if (merged["transport"].contains("b_files"))
                b_fields = load_all(merged["transport"]["b_files"]);
            else
                b_fields.assign(a_fields.size(), make_field(cfg.solver.grid));
            cfg.solver.transport =
                make_transport(std::move(a_fields), std::move(b_fields), cfg.solver.k);
        } catch (const std::exception& e) {
            outcome.errors.push_back(std::string("transport: ") + e.what());
        }
    } else if (tpreset != "none") {
        try {
            cfg.solver.transport =
                transport_preset(cfg.solver.grid, tpreset, merged["transport"]["a"].get<double>(),
                                 merged["transport"]["b"].get<double>(), cfg.solver.k);
        } catch (const std::exception& e) {
            outcome.errors.push_back(std::string("transport: ") + e.what());
        }
    }
    if (merged["truncation"]["enabled"].get<bool>()) {
        try {
            cfg.solver.truncation = make_cutoff(merged["truncation"]["r"].get<double>(),
                                                cfg.solver.k, cfg.solver.grid);
            cfg.solver.truncation_respecting =
                merged["truncation"]["respect_stopping"].get<bool>();
        } catch (const std::exception& e) {
            outcome.errors.push_back(std::string("truncation: ") + e.what());
        }
    }
    if (!outcome.errors.empty()) return outcome;

    for (const auto& msg : cfg.solver.validate()) outcome.errors.push_back(msg);

    cfg.campaign = merged["campaign"].get<std::string>();
    const std::vector<std::string> known_campaigns = {
        "single",        "ensemble",   "dt_refine",  "gamma_refine", "oracle_check",
        "maxprin_check", "uniqueness", "picard_crosscheck"};
    if (std::find(known_campaigns.begin(), known_campaigns.end(), cfg.campaign) ==
        known_campaigns.end())
        outcome.errors.push_back("campaign: unknown campaign " + cfg.campaign);

    cfg.seed = merged["seed"].get<std::uint64_t>();
    cfg.seed_count = merged["seed_count"].get<int>();
    if (cfg.seed_count < 1) outcome.errors.push_back("seed_count: must be >= 1");
    cfg.dt_list = merged["dt_list"].get<std::vector<double>>();
    cfg.gamma_list = merged["gamma_list"].get<std::vector<double>>();
    cfg.oracle = merged["oracle"].get<std::string>();
    cfg.oracle_tol_linf = merged["oracle_tol_linf"].get<double>();
    cfg.nu = merged["nu"].get<double>();
    cfg.mc_paths = merged["mc_paths"].get<int>();
    cfg.mc_points = merged["mc_points"].get<int>();
    cfg.delta = merged["delta"].get<double>();
    cfg.picard_tol = merged["picard_tol"].get<double>();
    cfg.picard_max_iter = merged["picard_max_iter"].get<int>();
    cfg.maxprin_tol = merged["maxprin_tol"].get<double>();

    if (cfg.campaign == "picard_crosscheck" && cfg.solver.gamma <= 0.0)
        outcome.errors.push_back("gamma: picard_crosscheck requires gamma > 0");
    if (cfg.campaign == "gamma_refine") {
        for (std::size_t j = 0; j + 1 < cfg.gamma_list.size(); ++j)
            if (cfg.gamma_list[j] <= cfg.gamma_list[j + 1])
                outcome.errors.push_back("gamma_list: must be strictly descending");
        for (double g : cfg.gamma_list)
            if (g <= 0.0) outcome.errors.push_back("gamma_list: entries must be > 0");
    }
    if (cfg.campaign == "dt_refine") {
        if (cfg.dt_list.size() < 2)
            outcome.errors.push_back("dt_list: need at least two dt values");
        double dt_min = *std::min_element(cfg.dt_list.begin(), cfg.dt_list.end());
        for (double dt : cfg.dt_list) {
            double ratio = dt / dt_min;
            if (std::abs(ratio - std::llround(ratio)) > 1e-9)
                outcome.errors.push_back("dt_list: entries must be integer multiples of the finest dt");
        }
    }

    if (!outcome.errors.empty()) return outcome;
    cfg.normalized_json = merged.dump(2);
    cfg.hash = fnv1a64(cfg.normalized_json);
    outcome.config = std::move(cfg);
    return outcome;
}

ParseOutcome parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        ParseOutcome outcome;
        outcome.errors.push_back("config: cannot open " + path);
        return outcome;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

// -- campaign execution --------------------------------------------------------

namespace {

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::string first_error;
    auto body = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (!first_error.empty()) throw std::runtime_error(first_error);
}

struct ArtifactWriter {
    fs::path dir;
    std::uint64_t hash;
    std::vector<std::string> names;

    std::ofstream open(const std::string& name) {
        names.push_back(name);
        std::ofstream os(dir / name);
        if (!os) throw std::runtime_error("cannot open artifact " + name);
        return os;
    }

    std::vector<std::string> csv_header(const std::string& campaign) const {
        return {std::string("config_hash=") + hash_hex(hash), "campaign=" + campaign,
                std::string("version=") + version_string};
    }
};

NoisePath path_for(const RunConfig& cfg, std::uint64_t seed) {
    return sample_path(seed, cfg.solver.grid.dim, cfg.solver.dt, cfg.solver.steps());
}

json trajectory_summary(const Trajectory& traj) {
    json j;
    j["scheme"] = traj.scheme;
    j["records"] = traj.diagnostics.size();
    j["final_t"] = traj.diagnostics.empty() ? 0.0 : traj.diagnostics.back().t;
    j["final_hk"] = traj.diagnostics.empty() ? 0.0 : traj.diagnostics.back().hk;
    j["stopped"] = traj.stopping.hit;
    if (traj.stopping.hit) j["stopping_time"] = traj.stopping.time;
    j["blowup"] = traj.blowup.hit;
    if (traj.blowup.hit) j["blowup_time"] = traj.blowup.time;
    return j;
}

int campaign_single(const RunConfig& cfg, std::uint64_t seed, ArtifactWriter& art,
                    json& summary) {
    Trajectory traj = integrate(cfg.solver, path_for(cfg, seed));
    {
        auto os = art.open("trajectory.csv");
        write_diagnostics_csv(os, traj, art.csv_header(cfg.campaign));
    }
    fs::create_directories(art.dir / "snapshots");
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshots/state_%05zu.txt", s);
        auto os = art.open(name);
        os << "# config_hash=" << hash_hex(art.hash) << '\n';
        os << "# t=" << fmt(traj.snapshot_times[s]) << '\n';
        write_text(os, traj.snapshots[s]);
    }
    summary["run"] = trajectory_summary(traj);
    return 0;
}

int campaign_ensemble(const RunConfig& cfg, std::uint64_t seed, int workers,
                      ArtifactWriter& art, json& summary) {
    const int count = cfg.seed_count;
    std::vector<Trajectory> runs(count);
    std::vector<std::uint64_t> seeds(count);
    for (int i = 0; i < count; ++i) seeds[i] = split_seed(seed, i);
    parallel_for(count, workers,
                 [&](int i) { runs[i] = integrate(cfg.solver, path_for(cfg, seeds[i])); });

    char name[64];
    for (int i = 0; i < count; ++i) {
        std::snprintf(name, sizeof(name), "trajectory_%03d.csv", i);
        auto os = art.open(name);
        write_diagnostics_csv(os, runs[i], art.csv_header(cfg.campaign));
    }

    // aggregate moments at common record times
    auto os = art.open("moments.csv");
    for (const auto& line : art.csv_header(cfg.campaign)) os << "# " << line << '\n';
    os << "t,mean_l2,mean_hk,mean_hk4,max_grad_sup\n";
    std::size_t rows = runs[0].diagnostics.size();
    for (const auto& r : runs) rows = std::min(rows, r.diagnostics.size());
    double max_mean_hk4 = 0.0;
    for (std::size_t m = 0; m < rows; ++m) {
        double l2 = 0.0, hk = 0.0, hk4 = 0.0, grad = 0.0;
        for (const auto& r : runs) {
            l2 += r.diagnostics[m].l2;
            hk += r.diagnostics[m].hk;
            hk4 += std::pow(r.diagnostics[m].hk, 4);
            grad = std::max(grad, r.diagnostics[m].grad_sup);
        }
        l2 /= count;
        hk /= count;
        hk4 /= count;
        max_mean_hk4 = std::max(max_mean_hk4, hk4);
        os << fmt(runs[0].diagnostics[m].t) << ',' << fmt(l2) << ',' << fmt(hk) << ','
           << fmt(hk4) << ',' << fmt(grad) << '\n';
    }
    int blowups = 0;
    for (const auto& r : runs) blowups += r.blowup.hit ? 1 : 0;
    json seeds_json = json::array();
    for (auto s : seeds) seeds_json.push_back(s);
    summary["seeds"] = seeds_json;
    summary["max_mean_hk4"] = max_mean_hk4;
    summary["blowups"] = blowups;
    return 0;
}

int campaign_dt_refine(const RunConfig& cfg, std::uint64_t seed, int workers,
                       ArtifactWriter& art, json& summary) {
    std::vector<double> dts = cfg.dt_list;
    std::sort(dts.begin(), dts.end(), std::greater<>());
    const double dt_min = dts.back();

    SolverConfig fine = cfg.solver;
    fine.dt = dt_min;
    NoisePath fine_path = sample_path(seed, fine.grid.dim, dt_min, fine.steps());

    std::vector<Trajectory> runs(dts.size());
    parallel_for(static_cast<int>(dts.size()), workers, [&](int i) {
        SolverConfig run_cfg = cfg.solver;
        run_cfg.dt = dts[i];
        int factor = static_cast<int>(std::llround(dts[i] / dt_min));
        runs[i] = integrate(run_cfg, factor == 1 ? fine_path : fine_path.coarsen(factor));
    });

    const Trajectory& reference = runs.back(); // finest dt
    auto os = art.open("dt_refine.csv");
    for (const auto& line : art.csv_header(cfg.campaign)) os << "# " << line << '\n';
    os << "dt,err_l2,err_linf,observed_order\n";
    std::vector<double> errs;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        SpatialField diff = runs[i].snapshots.back() - reference.snapshots.back();
        double e2 = l2_norm(diff);
        errs.push_back(e2);
        double order = i > 0 && e2 > 0.0 ? std::log2(errs[i - 1] / e2) : 0.0;
        os << fmt(dts[i]) << ',' << fmt(e2) << ',' << fmt(sup_norm(diff)) << ','
           << fmt(order) << '\n';
    }
    summary["errors_l2"] = errs;
    if (errs.size() >= 2 && errs.back() > 0.0)
        summary["observed_order"] = std::log2(errs[errs.size() - 2] / errs.back());
    return 0;
}

int campaign_gamma_refine(const RunConfig& cfg, std::uint64_t seed, ArtifactWriter& art,
                          json& summary) {
    NoisePath path = path_for(cfg, seed);
    GammaStudyReport report = gamma_convergence_study(cfg.solver, cfg.gamma_list, path);
    auto os = art.open("gamma_refine.csv");
    for (const auto& line : art.csv_header(cfg.campaign)) os << "# " << line << '\n';
    os << "gamma_high,gamma_low,sup_diff_h2,sup_diff_to_limit\n";
    for (const auto& row : report.rows)
        os << fmt(row.gamma_high) << ',' << fmt(row.gamma_low) << ','
           << fmt(row.sup_diff_hbeta) << ',' << fmt(row.sup_diff_to_limit) << '\n';
    summary["monotone"] = report.monotone;
    return report.monotone ? 0 : 1;
}

int campaign_oracle_check(const RunConfig& cfg, std::uint64_t seed, ArtifactWriter& art,
                          json& summary) {
    SolverConfig run_cfg = cfg.solver;
    run_cfg.snapshot_stride = std::max(1, run_cfg.snapshot_stride);

    OracleReport report;
    if (cfg.oracle == "cole_hopf") {
        if (run_cfg.transport) throw std::invalid_argument("cole_hopf oracle: noise must be off");
        Trajectory traj = integrate(run_cfg, path_for(cfg, seed));
        bool zero_potential = sup_norm(run_cfg.potential) == 0.0;
        auto reference = cole_hopf_exact(run_cfg.initial, run_cfg.mu,
                                         zero_potential ? nullptr : &run_cfg.potential,
                                         traj.snapshot_times, run_cfg.dt / 10.0);
        report = compare_fields("cole_hopf", traj.snapshot_times, traj.snapshots, reference,
                                cfg.oracle_tol_linf);
    } else if (cfg.oracle == "shift") {
        if (sup_norm(run_cfg.potential) != 0.0)
            throw std::invalid_argument("shift oracle: potential must be zero");
        double a = -std::sqrt(cfg.nu);
        run_cfg.transport = transport_preset(run_cfg.grid, "constant", a, 0.0, run_cfg.k);
        NoisePath path = path_for(cfg, seed);
        Trajectory traj = integrate(run_cfg, path);
        auto reference =
            shift_oracle(run_cfg.initial, run_cfg.mu, cfg.nu, path, traj.snapshot_times);
        report = compare_fields("shift", traj.snapshot_times, traj.snapshots, reference,
                                cfg.oracle_tol_linf);
    } else if (cfg.oracle == "feynman_kac") {
        if (run_cfg.transport)
            throw std::invalid_argument("feynman_kac oracle: noise must be off");
        const double T = run_cfg.horizon;
        std::vector<double> t_final = {T};
        bool zero_potential = sup_norm(run_cfg.potential) == 0.0;
        auto exact = cole_hopf_exact(run_cfg.initial, run_cfg.mu,
                                     zero_potential ? nullptr : &run_cfg.potential, t_final,
                                     run_cfg.dt / 10.0);
        PointFn exact_eval = field_evaluator(exact[0]);
        PointFn u0_eval = field_evaluator(run_cfg.initial);
        // the potential is sampled at every MC step; skip the Fourier
        // synthesis when it vanishes
        PointFn v_eval = zero_potential ? PointFn([](std::span<const double>) { return 0.0; })
                                        : field_evaluator(run_cfg.potential);
        std::vector<std::vector<double>> points;
        for (int p = 0; p < cfg.mc_points; ++p)
            points.push_back(
                std::vector<double>(run_cfg.grid.dim, two_pi * (p + 0.5) / cfg.mc_points));
        auto mc = feynman_kac_mc(u0_eval, v_eval, run_cfg.mu, T, points, run_cfg.grid.dim,
                                 cfg.mc_paths, seed);
        report.oracle = "feynman_kac";
        report.pass = true;
        for (std::size_t p = 0; p < points.size(); ++p) {
            double reference = exact_eval(points[p]);
            double err = std::abs(mc.value[p] - reference);
            report.times.push_back(points[p][0]); // abscissa: probe point
            report.err_linf.push_back(err);
            report.err_l2.push_back(mc.half_width[p]);
            report.err_hbeta.push_back(0.0);
            if (err > 3.0 * mc.half_width[p]) report.pass = false;
        }
        report.metadata = "err_l2 column holds the 95% half-widths";
    } else {
        throw std::invalid_argument("unknown oracle: " + cfg.oracle);
    }

    report.metadata += std::string(report.metadata.empty() ? "" : "; ") +
                       "dt=" + fmt(cfg.solver.dt) + " N=" +
                       std::to_string(cfg.solver.grid.points_per_axis) +
                       " seed=" + std::to_string(seed) +
                       " config_hash=" + hash_hex(cfg.hash);
    {
        auto os = art.open("oracle_report.json");
        os << oracle_report_json(report) << '\n';
    }
    {
        auto os = art.open("oracle_errors.csv");
        for (const auto& line : art.csv_header(cfg.campaign)) os << "# " << line << '\n';
        os << "t,error_l2,error_linf,error_hbeta,pass\n";
        for (std::size_t s = 0; s < report.times.size(); ++s)
            os << fmt(report.times[s]) << ',' << fmt(report.err_l2[s]) << ','
               << fmt(report.err_linf[s]) << ',' << fmt(report.err_hbeta[s]) << ','
               << (report.err_linf[s] <= report.tol_linf ? 1 : 0) << '\n';
    }
    summary["oracle"] = report.oracle;
    summary["pass"] = report.pass;
    double worst = 0.0;
    for (double e : report.err_linf) worst = std::max(worst, e);
    summary["worst_err_linf"] = worst;
    return report.pass ? 0 : 1;
}

int campaign_maxprin(const RunConfig& cfg, std::uint64_t seed, int workers,
                     ArtifactWriter& art, json& summary) {
    const int count = cfg.seed_count;
    double tol = cfg.maxprin_tol > 0.0 ? cfg.maxprin_tol
                                       : default_max_principle_tol(cfg.solver);
    std::vector<MaxPrincipleReport> reports(count);
    std::vector<std::uint64_t> seeds(count);
    for (int i = 0; i < count; ++i) seeds[i] = split_seed(seed, i);
    parallel_for(count, workers, [&](int i) {
        Trajectory traj = integrate(cfg.solver, path_for(cfg, seeds[i]));
        reports[i] = max_principle_check(traj, cfg.solver, tol);
    });

    auto os = art.open("max_principle.csv");
    for (const auto& line : art.csv_header(cfg.campaign)) os << "# " << line << '\n';
    os << "seed,hypothesis_met,pass,initial_grad_sup,worst_margin,worst_time\n";
    int violations = 0;
    bool hypothesis = true;
    for (int i = 0; i < count; ++i) {
        const auto& r = reports[i];
        os << seeds[i] << ',' << r.hypothesis_met << ',' << r.pass << ','
           << fmt(r.initial_grad_sup) << ',' << fmt(r.worst_margin) << ','
           << fmt(r.worst_time) << '\n';
        hypothesis = hypothesis && r.hypothesis_met;
        if (r.hypothesis_met && !r.pass) ++violations;
    }
    summary["tol"] = tol;
    summary["violations"] = violations;
    summary["hypothesis_met"] = hypothesis;
    if (!hypothesis) return 2; // the lemma does not apply to this configuration
    return violations == 0 ? 0 : 1;
}

int campaign_uniqueness(const RunConfig& cfg, std::uint64_t seed, int workers,
                        ArtifactWriter& art, json& summary) {
    const int count = cfg.seed_count;
    std::vector<UniquenessReport> twin(count), perturbed(count);
    std::vector<std::uint64_t> seeds(count);
    for (int i = 0; i < count; ++i) seeds[i] = split_seed(seed, i);
    parallel_for(count, workers, [&](int i) {
        twin[i] = uniqueness_experiment(cfg.solver, seeds[i], 0.0);
        perturbed[i] = uniqueness_experiment(cfg.solver, seeds[i], cfg.delta);
    });
    auto os = art.open("uniqueness.csv");
    for (const auto& line : art.csv_header(cfg.campaign)) os << "# " << line << '\n';
    os << "seed,twin_bit_identical,envelope_holds,lambda,worst_ratio,terminal_gap\n";
    bool pass = true;
    for (int i = 0; i < count; ++i) {
        os << seeds[i] << ',' << twin[i].bit_identical << ',' << perturbed[i].envelope_holds
           << ',' << fmt(perturbed[i].lambda) << ',' << fmt(perturbed[i].worst_ratio) << ','
           << fmt(perturbed[i].terminal_gap) << '\n';
        pass = pass && twin[i].bit_identical && perturbed[i].envelope_holds;
    }
    summary["delta"] = cfg.delta;
    summary["pass"] = pass;
    return pass ? 0 : 1;
}

int campaign_picard(const RunConfig& cfg, std::uint64_t seed, ArtifactWriter& art,
                    json& summary) {
    NoisePath path = path_for(cfg, seed);
    SolverConfig stepper_cfg = cfg.solver;
    stepper_cfg.scheme = Scheme::ito_exp_em;
    stepper_cfg.snapshot_stride = 1;
    Trajectory traj = integrate(stepper_cfg, path);

    MildProblem prob = make_mild_problem(cfg.solver, path);
    PicardResult picard = fixed_point_solve(prob, cfg.picard_tol, cfg.picard_max_iter);

    double sup_gap = 0.0;
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        int node = static_cast<int>(std::llround(traj.snapshot_times[s] / cfg.solver.dt));
        sup_gap = std::max(
            sup_gap, l2_norm(to_spectral(traj.snapshots[s]) - picard.iterate[node]));
    }
    bool ratios_ok = picard.converged;
    for (double r : picard.contraction_ratios) ratios_ok = ratios_ok && r < 1.0;
    bool pass = ratios_ok && sup_gap <= 10.0 * cfg.solver.dt;

    json j;
    j["config_hash"] = hash_hex(cfg.hash);
    j["iterations"] = picard.iterations;
    j["converged"] = picard.converged;
    j["contraction_ratios"] = picard.contraction_ratios;
    j["update_norms"] = picard.update_norms;
    j["residual"] = picard.residual;
    j["sup_gap_l2"] = sup_gap;
    j["gap_tolerance"] = 10.0 * cfg.solver.dt;
    j["pass"] = pass;
    auto os = art.open("picard_report.json");
    os << j.dump(2) << '\n';
    summary["iterations"] = picard.iterations;
    summary["sup_gap_l2"] = sup_gap;
    summary["pass"] = pass;
    return pass ? 0 : 1;
}

} // namespace

int run_campaign(const RunConfig& cfg, const std::string& out_dir, int workers,
                 std::optional<std::uint64_t> seed_override) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = seed_override.value_or(cfg.seed);

    // artifacts live under a directory named by the config hash
    fs::path dir = fs::path(out_dir) / hash_hex(cfg.hash);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::fprintf(stderr, "cannot create output directory %s\n", dir.string().c_str());
        return 2;
    }
    fs::path manifest_path = dir / "manifest.json";
    if (fs::exists(manifest_path)) {
        std::ifstream is(manifest_path);
        json old = json::parse(is, nullptr, false);
        if (!old.is_discarded() && old.contains("config_hash") &&
            old["config_hash"].get<std::string>() != hash_hex(cfg.hash)) {
            std::fprintf(stderr,
                         "output directory %s holds artifacts for a different config hash\n",
                         dir.string().c_str());
            return 2;
        }
    }

    ArtifactWriter art{dir, cfg.hash, {}};
    json summary;
    int status = 2;
    try {
        if (cfg.campaign == "single") status = campaign_single(cfg, seed, art, summary);
        else if (cfg.campaign == "ensemble")
            status = campaign_ensemble(cfg, seed, workers, art, summary);
        else if (cfg.campaign == "dt_refine")
            status = campaign_dt_refine(cfg, seed, workers, art, summary);
        else if (cfg.campaign == "gamma_refine")
            status = campaign_gamma_refine(cfg, seed, art, summary);
        else if (cfg.campaign == "oracle_check")
            status = campaign_oracle_check(cfg, seed, art, summary);
        else if (cfg.campaign == "maxprin_check")
            status = campaign_maxprin(cfg, seed, workers, art, summary);
        else if (cfg.campaign == "uniqueness")
            status = campaign_uniqueness(cfg, seed, workers, art, summary);
        else if (cfg.campaign == "picard_crosscheck")
            status = campaign_picard(cfg, seed, art, summary);
        else {
            std::fprintf(stderr, "unknown campaign %s\n", cfg.campaign.c_str());
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "campaign failed: %s\n", e.what());
        summary["error"] = e.what();
        status = 2;
    }

    const auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    json manifest;
    manifest["version"] = version_string;
    manifest["config_hash"] = hash_hex(cfg.hash);
    manifest["campaign"] = cfg.campaign;
    manifest["seed"] = seed;
    manifest["config"] = json::parse(cfg.normalized_json);
    manifest["stability_budget"] = cfg.solver.stability_budget();
    manifest["artifacts"] = art.names;
    manifest["summary"] = summary;
    manifest["exit_status"] = status;
    manifest["wall_ms"] = wall.count();
    std::ofstream os(manifest_path);
    os << manifest.dump(2) << '\n';
    std::printf("artifacts: %s (status %d)\n", dir.string().c_str(), status);
    return status;
}

int render_report(const std::string& out_dir) {
    // accept either an artifact directory or its parent (hash-named child)
    fs::path base(out_dir);
    if (!fs::exists(base)) {
        std::fprintf(stderr, "no such directory %s\n", out_dir.c_str());
        return 2;
    }
    fs::path manifest_path = base / "manifest.json";
    if (!fs::exists(manifest_path)) {
        for (const auto& entry : fs::directory_iterator(base)) {
            if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
                base = entry.path();
                manifest_path = base / "manifest.json";
                break;
            }
        }
    }
    std::ifstream is(manifest_path);
    if (!is) {
        std::fprintf(stderr, "no manifest.json under %s\n", out_dir.c_str());
        return 2;
    }
    json manifest = json::parse(is, nullptr, false);
    if (manifest.is_discarded()) {
        std::fprintf(stderr, "unreadable manifest in %s\n", base.string().c_str());
        return 2;
    }
    std::ofstream os(base / "summary.txt");
    os << "campaign: " << manifest.value("campaign", "?") << '\n';
    os << "config_hash: " << manifest.value("config_hash", "?") << '\n';
    os << "seed: " << manifest.value("seed", 0ULL) << '\n';
    os << "exit_status: " << manifest.value("exit_status", -1) << '\n';
    if (manifest.contains("summary")) os << "summary: " << manifest["summary"].dump(2) << '\n';
    os << "artifacts:" << '\n';
    if (manifest.contains("artifacts"))
        for (const auto& a : manifest["artifacts"]) os << "  " << a.get<std::string>() << '\n';
    return 0;
}

} // namespace shjb
