#include "fredpair/experiments.hpp"

#include "fredpair/corpus.hpp"
#include "fredpair/homotopy.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

namespace fredpair {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general);
    return std::string(buf, res.ptr);
}

void ExperimentConfig::validate() const {
    static const char* known[] = {"sharpness-sweep", "graph-sweep", "homotopy-check",
                                  "model-bvp", "selftest"};
    bool ok = false;
    for (const char* k : known) ok = ok || experiment == k;
    if (!ok) throw ConfigError("unknown experiment '" + experiment + "'");
    if (grid < 2) throw ConfigError("grid resolution must be >= 2");
    try {
        tol.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    if (mode_spec) {
        try {
            mode_spec->validate();
        } catch (const InputError& e) {
            throw ConfigError(e.what());
        }
    }
}

std::string ExperimentConfig::out_path() const {
    return out.empty() ? experiment + ".csv" : out;
}

void apply_config_json(ExperimentConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
    if (doc.contains("experiment")) cfg.experiment = doc["experiment"].get<std::string>();
    if (doc.contains("grid")) cfg.grid = doc["grid"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        if (t.contains("rank_tol")) cfg.tol.rank_tol = t["rank_tol"].get<double>();
        if (t.contains("proj_tol")) cfg.tol.proj_tol = t["proj_tol"].get<double>();
        if (t.contains("eig_tol")) cfg.tol.eig_tol = t["eig_tol"].get<double>();
    }
    if (doc.contains("mode_spec")) cfg.mode_spec = mode_spec_from_json(doc["mode_spec"]);
    if (doc.contains("pair")) {
        const auto& p = doc["pair"];
        if (!p.is_object() || !p.contains("p0") || !p.contains("p1"))
            throw ConfigError("config key 'pair' must hold BlockOp documents p0 and p1");
        try {
            cfg.pair = {block_op_from_json(p["p0"]), block_op_from_json(p["p1"])};
        } catch (const InputError& e) {
            throw ConfigError(e.what());
        }
    }
}

namespace {

nlohmann::json metadata_for(const ExperimentConfig& cfg) {
    nlohmann::json meta;
    meta["experiment"] = cfg.experiment;
    meta["grid"] = cfg.grid;
    meta["seed"] = cfg.seed;
    meta["tolerances"] = {{"rank_tol", cfg.tol.rank_tol},
                          {"proj_tol", cfg.tol.proj_tol},
                          {"eig_tol", cfg.tol.eig_tol}};
    if (cfg.mode_spec) meta["mode_spec"] = to_json(*cfg.mode_spec);
    meta["generator"] = "fredpair 0.1.0";
    meta["format_version"] = 1;
    return meta;
}

/// Index-ordered parallel map: out[i] = fn(i). Deterministic regardless of
/// scheduling because every task writes only its own slot.
template <typename Fn>
std::vector<std::string> parallel_rows(std::size_t n, Fn&& fn) {
    std::vector<std::string> rows(n);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) rows[i] = fn(i);
        return rows;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += n_threads) rows[i] = fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

std::string join_csv(const std::string& header, const std::vector<std::string>& rows) {
    std::string out = header + "\n";
    for (const auto& r : rows) {
        out += r;
        out += '\n';
    }
    return out;
}

std::string index_cell(const std::optional<int>& idx) {
    return idx ? std::to_string(*idx) : "";
}

} // namespace

ExperimentResult run_sharpness_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const int n = cfg.grid;
    const Tolerance tol = cfg.tol;
    std::vector<int> row_failures(static_cast<std::size_t>(n) * n, 0);

    auto make_row = [&](std::size_t flat) {
        const int i = static_cast<int>(flat) / n;
        const int j = static_cast<int>(flat) % n;
        const double x = 1.2 * (static_cast<double>(i) / (n - 1));
        const double y = 1.2 * (static_cast<double>(j) / (n - 1));
        const double xr = std::min(x, 1.0);
        const double yr = std::min(y, 1.0);
        const double bx = std::asin(xr);
        const double by = std::asin(yr);
        const BlockProjection s(BlockOp::repeating(proj_line2(1.0, 0.0)), tol);
        const BlockProjection p(BlockOp::repeating(proj_line2(std::cos(bx), std::sin(bx))), tol);
        const BlockProjection pp(BlockOp::repeating(proj_line2(std::cos(-by), std::sin(-by))),
                                 tol);
        const CriterionReport rep = cnorm_criterion(p, pp, s, tol);
        int bad = 0;
        if (std::abs(rep.criterion_value - (xr * xr + yr * yr)) > 1e-12) ++bad;
        if (rep.certified && !rep.all_checks_pass()) ++bad;
        row_failures[flat] = bad;
        std::ostringstream os;
        os << format_double(x) << ',' << format_double(y) << ','
           << format_double(rep.criterion_value) << ',' << rep.verdict(tol) << ','
           << index_cell(rep.predicted_index) << ',' << to_string(rep.decision.status) << ','
           << index_cell(rep.decision.index);
        return os.str();
    };
    const auto rows = parallel_rows(static_cast<std::size_t>(n) * n, make_row);

    ExperimentResult res;
    res.csv = join_csv("x,y,criterion_value,decision,index,pair_status,pair_index", rows);
    res.metadata = metadata_for(cfg);
    for (int f : row_failures) res.failures += f;
    std::ostringstream sum;
    sum << "sharpness-sweep: " << n << "x" << n << " grid, " << res.failures
        << " internal check failure(s)";
    res.summary = sum.str();
    return res;
}

ExperimentResult run_graph_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const int n = cfg.grid;
    const Tolerance tol = cfg.tol;
    std::vector<int> row_failures(static_cast<std::size_t>(n) * n, 0);

    auto make_row = [&](std::size_t flat) {
        const int i = static_cast<int>(flat) / n;
        const int j = static_cast<int>(flat) % n;
        const double g0 = 2.0 * (static_cast<double>(i) / (n - 1));
        const double g1 = 2.0 * (static_cast<double>(j) / (n - 1));
        DenseOp s0(2, 2), s1(2, 2), m0(2, 2), m1(2, 2);
        s0 << 1, 0, 0, 0;
        s1 << 0, 0, 0, 1;
        m0 << 0, 0, g0, 0;
        m1 << 0, g1, 0, 0;
        const GraphBC bc0(BlockProjection(BlockOp::repeating(s0), tol), BlockOp::repeating(m0),
                          tol);
        const GraphBC bc1(BlockProjection(BlockOp::repeating(s1), tol), BlockOp::repeating(m1),
                          tol);
        const CriterionReport rep = graph_criterion(bc0, bc1, tol);
        int bad = 0;
        const bool inside = 4 * i * j < (n - 1) * (n - 1); // g0 g1 < 1, decided exactly
        if (rep.certified != inside) ++bad;
        if (rep.certified && !rep.all_checks_pass()) ++bad;
        row_failures[flat] = bad;
        std::ostringstream os;
        os << format_double(g0) << ',' << format_double(g1) << ','
           << format_double(rep.criterion_value) << ',' << rep.verdict(tol) << ','
           << index_cell(rep.predicted_index) << ',' << to_string(rep.decision.status) << ','
           << index_cell(rep.decision.index);
        return os.str();
    };
    const auto rows = parallel_rows(static_cast<std::size_t>(n) * n, make_row);

    ExperimentResult res;
    res.csv = join_csv("g0,g1,criterion_value,decision,index,pair_status,pair_index", rows);
    res.metadata = metadata_for(cfg);
    for (int f : row_failures) res.failures += f;
    std::ostringstream sum;
    sum << "graph-sweep: " << n << "x" << n << " grid, " << res.failures
        << " internal check failure(s)";
    res.summary = sum.str();
    return res;
}

ExperimentResult run_homotopy_check(const ExperimentConfig& cfg) {
    cfg.validate();
    const Tolerance tol = cfg.tol;
    const int n_pairs = cfg.grid;
    constexpr int kSteps = 100;

    // Pair generation is sequential (the stream is stateful); the per-pair
    // work parallelizes over the t-grid rows.
    std::vector<std::pair<BlockProjection, BlockProjection>> pairs;
    if (cfg.pair) {
        try {
            pairs.emplace_back(BlockProjection(cfg.pair->first, tol),
                               BlockProjection(cfg.pair->second, tol));
        } catch (const InputError& e) {
            throw ConfigError(e.what());
        }
    } else {
        RandomStream rs(cfg.seed);
        pairs.reserve(static_cast<std::size_t>(n_pairs));
        for (int p = 0; p < n_pairs; ++p)
            pairs.push_back(random_fredholm_pair(rs, PairCorpusParams{}, tol));
    }
    const int n_actual = static_cast<int>(pairs.size());

    int failures = 0;
    std::vector<std::string> rows;
    for (int p = 0; p < n_actual; ++p) {
        const auto& [p0, p1] = pairs[static_cast<std::size_t>(p)];
        const double limit = calkin_norm(p1.op() - p0.op());
        std::vector<int> bad(kSteps + 1, 0);
        auto make_row = [&](std::size_t k) {
            const double t = static_cast<double>(k) / kSteps;
            const BlockPathSample sample = p_path(p0, p1, t, tol);
            const PairDecision along = pair_fredholm(sample.projection, p0, tol);
            if (sample.calkin_to_start > limit + 1e-8) ++bad[k];
            if (along.status != PairStatus::fredholm) ++bad[k];
            std::ostringstream os;
            os << p << ',' << format_double(t) << ',' << format_double(sample.norm_to_start)
               << ',' << format_double(sample.calkin_to_start) << ',' << format_double(limit)
               << ',' << index_cell(along.index);
            return os.str();
        };
        const auto pair_rows = parallel_rows(kSteps + 1, make_row);
        rows.insert(rows.end(), pair_rows.begin(), pair_rows.end());
        for (int b : bad) failures += b;
    }

    ExperimentResult res;
    res.csv = join_csv("pair,t,norm_to_start,calkin_to_start,calkin_limit,index", rows);
    res.metadata = metadata_for(cfg);
    if (cfg.pair) {
        res.metadata["pair"] = {{"p0", to_json(cfg.pair->first)},
                                {"p1", to_json(cfg.pair->second)}};
    }
    res.failures = failures;
    std::ostringstream sum;
    sum << "homotopy-check: " << n_actual << " pairs x " << (kSteps + 1) << " samples, "
        << failures << " bound violation(s)";
    res.summary = sum.str();
    return res;
}

ExperimentResult run_model_bvp(const ExperimentConfig& cfg) {
    cfg.validate();
    const Tolerance tol = cfg.tol;
    ModeSpec spec;
    if (cfg.mode_spec) {
        spec = *cfg.mode_spec;
    } else {
        spec.n_coupled = 1;
        spec.coupling_angles = {std::numbers::pi / 4.0};
        spec.phases = {{0.3, -0.7}};
        spec.n_zero_modes = 1;
    }
    const ModelBVP m = ModelBVP::build(spec, tol);
    const int aps = m.aps_index(tol);
    const int n = cfg.grid;
    std::vector<int> row_failures(2 * static_cast<std::size_t>(n) * n, 0);

    auto make_row = [&](std::size_t flat) {
        const bool graph_section = flat >= static_cast<std::size_t>(n) * n;
        const std::size_t local = graph_section ? flat - static_cast<std::size_t>(n) * n : flat;
        const int i = static_cast<int>(local) / n;
        const int j = static_cast<int>(local) % n;
        int bad = 0;
        std::ostringstream os;
        if (!graph_section) {
            const double pi = std::numbers::pi;
            const double beta = i * pi / (2.0 * (n - 1));
            const double beta_p = j * pi / (2.0 * (n - 1));
            const DenseOp c0 = proj_line2(std::cos(pi / 2.0 + beta), std::sin(pi / 2.0 + beta));
            const DenseOp c1 = proj_line2(std::cos(-beta_p), std::sin(-beta_p));
            const BlockProjection p0(BlockOp(2, m.s0().op().prefix(), {c0}), tol);
            const BlockProjection p1(BlockOp(2, m.s1(tol).op().prefix(), {c1}), tol);
            const CriterionReport rep = final_cnorm(m, p0, p1, tol);
            if (!rep.all_checks_pass()) ++bad;
            if (rep.certified && rep.decision.index != rep.predicted_index) ++bad;
            os << "cnorm," << format_double(beta) << ',' << format_double(beta_p) << ','
               << format_double(rep.criterion_value) << ',' << rep.verdict(tol) << ','
               << index_cell(rep.predicted_index) << ',' << to_string(rep.decision.status)
               << ',' << index_cell(rep.decision.index);
        } else {
            const double g0 = 2.0 * (static_cast<double>(i) / (n - 1));
            const double g1 = 2.0 * (static_cast<double>(j) / (n - 1));
            DenseOp m0(2, 2), m1(2, 2);
            m0 << 0, g0, 0, 0;
            m1 << 0, 0, g1, 0;
            std::vector<DenseOp> zp(m.s0().op().prefix_len(), DenseOp::Zero(2, 2));
            const GraphBC bc0(m.s0(), BlockOp(2, zp, {m0}), tol);
            const GraphBC bc1(m.s1(tol), BlockOp(2, zp, {m1}), tol);
            const CriterionReport rep = final_graph(m, bc0, bc1, tol);
            if (!rep.all_checks_pass()) ++bad;
            if (rep.certified && (!rep.predicted_index || *rep.predicted_index != aps)) ++bad;
            os << "graph," << format_double(g0) << ',' << format_double(g1) << ','
               << format_double(rep.criterion_value) << ',' << rep.verdict(tol) << ','
               << index_cell(rep.predicted_index) << ',' << to_string(rep.decision.status)
               << ',' << index_cell(rep.decision.index);
        }
        row_failures[flat] = bad;
        return os.str();
    };
    const auto rows = parallel_rows(2 * static_cast<std::size_t>(n) * n, make_row);

    ExperimentResult res;
    res.csv = join_csv("section,a,b,criterion_value,decision,index,pair_status,pair_index", rows);
    res.metadata = metadata_for(cfg);
    res.metadata["aps_index"] = aps;
    // Exact operators used, for reproduction without this binary.
    res.metadata["model"] = {{"s0", to_json(m.s0().op())},
                             {"s1c", to_json(m.s1c().op())},
                             {"evolution", to_json(m.evolution())}};
    for (int f : row_failures) res.failures += f;
    std::ostringstream sum;
    sum << "model-bvp: APS index " << aps << ", 2 x " << n << "x" << n << " grid, "
        << res.failures << " agreement failure(s)";
    res.summary = sum.str();
    return res;
}

ExperimentResult run_selftest(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto results = run_acceptance(cfg.tol, cfg.seed);
    ExperimentResult res;
    std::vector<std::string> rows;
    std::ostringstream sum;
    for (const auto& r : results) {
        if (!r.passed) ++res.failures;
        std::ostringstream os;
        os << r.id << ",\"" << r.name << "\"," << (r.passed ? "pass" : "fail") << ",\""
           << r.detail << '"';
        rows.push_back(os.str());
        sum << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name
            << " (" << r.detail << ")\n";
    }
    res.csv = join_csv("criterion,name,result,detail", rows);
    res.metadata = metadata_for(cfg);
    sum << (res.failures == 0 ? "selftest: all criteria passed"
                              : "selftest: " + std::to_string(res.failures) +
                                    " criterion/criteria FAILED");
    res.summary = sum.str();
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.experiment == "sharpness-sweep") return run_sharpness_sweep(cfg);
    if (cfg.experiment == "graph-sweep") return run_graph_sweep(cfg);
    if (cfg.experiment == "homotopy-check") return run_homotopy_check(cfg);
    if (cfg.experiment == "model-bvp") return run_model_bvp(cfg);
    if (cfg.experiment == "selftest") return run_selftest(cfg);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
    const std::string path = cfg.out_path();
    {
        std::ofstream file(path, std::ios::binary);
        if (!file) throw Error("cannot open output file '" + path + "'");
        file << result.csv;
    }
    {
        std::ofstream file(path + ".meta.json", std::ios::binary);
        if (!file) throw Error("cannot open metadata file '" + path + ".meta.json'");
        file << result.metadata.dump(2) << '\n';
    }
}

} // namespace fredpair
