#pragma once

// The qangle command-line front end. `run` is the whole program; main.cpp only
// forwards argv, and the CLI tests call `run` in-process.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qangle/search.hpp"
#include "run_spec.hpp"

namespace qangle::cli {

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int input_error = 1;
inline constexpr int verification_failure = 2;
} // namespace exit_code

struct Options {
    std::string command;
    std::string spec_path;
    std::string out_dir = "qangle-out";
    std::optional<double> hbar;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    // Test hooks.
    bool break_step_4 = false;
    bool corrupt_epsilon = false;
};

// Threshold substituted by --corrupt-epsilon.
inline constexpr double corrupted_epsilon = 0.2;

namespace detail {

inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Rounded to 12 significant digits; non-finite values become null.
inline json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(fmt(v).c_str(), nullptr);
}

inline json num_list(const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

inline json cnum(complex z) { return json::array({num(z.real()), num(z.imag())}); }

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

class Output {
public:
    explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

    // Written once, after all results are in.
    void flush(std::ostream& out) const {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw InputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        for (const auto& [name, content] : files_) {
            std::ofstream f(dir_ / name, std::ios::binary);
            f << content;
            if (!f) throw InputError("cannot write '" + (dir_ / name).string() + "'");
            out << "wrote " << (dir_ / name).string() << "\n";
        }
    }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

inline std::string tsv(const std::vector<std::pair<double, double>>& rows) {
    std::string s;
    for (const auto& [x, y] : rows) s += fmt(x) + "\t" + fmt(y) + "\n";
    return s;
}

inline json grid_json(const GridSpec& g) {
    json j;
    j["x_min"] = num(g.x_min());
    j["x_max"] = num(g.x_max());
    j["n"] = g.size();
    return j;
}

inline json constants_json(const Config& cfg) {
    const auto c = ThresholdConstants::from(cfg);
    json j;
    j["epsilon"] = num(c.epsilon);
    j["cos1"] = num(c.cos1);
    j["overlap_bound"] = num(c.overlap_bound());
    return j;
}

inline json width_json(const WidthReport& w) {
    json j;
    j["epsilon"] = num(w.epsilon);
    j["l"] = num(w.l);
    j["r"] = num(w.r);
    j["delta_x"] = num(w.delta_x);
    j["shift_used"] = num(w.shift_used);
    j["shift_steps"] = w.shift_steps;
    j["split_index"] = w.split_index;
    j["split_point"] = num(w.split_point);
    return j;
}

inline bool report_passes(const InequalityReport& r) {
    return r.passes_theorem && r.passes_snapped && r.passes_angle && r.passes_kennard;
}

inline json inequality_json(const InequalityReport& r) {
    json j;
    j["delta_x"] = num(r.delta_x);
    j["delta_p"] = num(r.delta_p);
    j["product_over_hbar"] = num(r.product_over_hbar);
    j["snapped_product_over_hbar"] = num(r.snapped_product_over_hbar);
    j["overlap_at_shift"] = num(r.overlap_at_shift);
    j["angle_at_shift"] = num(r.angle_at_shift);
    j["delta_x_std"] = num(r.delta_x_std);
    j["kennard_product_over_hbar"] = num(r.kennard_product_over_hbar);
    j["passes_theorem"] = r.passes_theorem;
    j["passes_snapped"] = r.passes_snapped;
    j["passes_angle"] = r.passes_angle;
    j["passes_kennard"] = r.passes_kennard;
    return j;
}

inline json header(const std::string& command, const RunSpec& rs) {
    json j;
    j["command"] = command;
    j["grid"] = grid_json(rs.grid);
    j["hbar"] = num(rs.cfg.hbar);
    j["state"] = rs.source.at("state");
    j["constants"] = constants_json(rs.cfg);
    return j;
}

inline RunSpec load_spec(const Options& o) {
    if (o.spec_path.empty()) throw InputError("--spec <path> is required");
    std::ifstream f(o.spec_path, std::ios::binary);
    if (!f) throw InputError("cannot read spec file '" + o.spec_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    RunSpec rs = parse_run_spec(ss.str(), o.spec_path);
    if (o.hbar) rs.cfg.hbar = *o.hbar;
    if (o.corrupt_epsilon) rs.cfg.epsilon_override = corrupted_epsilon;
    if (o.seed && rs.search) rs.search->seed = *o.seed;
    try {
        rs.cfg.validate();
    } catch (const Error& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    return rs;
}

inline WaveFunction build_state(const RunSpec& rs) {
    try {
        return make_state(rs.state, rs.grid, rs.cfg);
    } catch (const Error& e) {
        throw InputError(std::string("state: ") + e.what());
    }
}

inline void print_kv(std::ostream& out, const std::string& key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-28s", key.c_str());
    out << buf << fmt(v) << "\n";
}

// ---------------------------------------------------------------- analyze

inline int analyze(const Options& o, std::ostream& out, std::ostream& err) {
    const RunSpec rs = load_spec(o);
    const WaveFunction psi = build_state(rs);
    InequalityReport rep;
    try {
        rep = analyze_state(psi, rs.cfg);
    } catch (const Error& e) {
        throw InputError(std::string("state: ") + e.what());
    }
    const bool ok = report_passes(rep);

    json j = header("analyze", rs);
    j["width"] = width_json(rep.width);
    j["inequality"] = inequality_json(rep);
    j["passed"] = ok;

    print_kv(out, "delta_x", rep.delta_x);
    print_kv(out, "Delta_p", rep.delta_p);
    print_kv(out, "product_over_hbar", rep.product_over_hbar);
    print_kv(out, "snapped_product_over_hbar", rep.snapped_product_over_hbar);
    print_kv(out, "angle_at_shift", rep.angle_at_shift);
    print_kv(out, "kennard_product_over_hbar", rep.kennard_product_over_hbar);

    Output files(o.out_dir);
    files.add("analyze.json", j.dump(2) + "\n");
    files.flush(out);
    if (!ok) {
        err << "analyze: FAIL";
        if (!rep.passes_theorem) err << " theorem";
        if (!rep.passes_snapped) err << " snapped-theorem";
        if (!rep.passes_angle) err << " angle";
        if (!rep.passes_kennard) err << " kennard";
        err << "\n";
        return exit_code::verification_failure;
    }
    out << "analyze: pass\n";
    return exit_code::pass;
}

// ----------------------------------------------------------------- verify

inline std::vector<double> default_ladder(double delta_x) {
    std::vector<double> a;
    for (int i = 1; i <= 20; ++i) a.push_back(0.1 * i * delta_x);
    return a;
}

inline json trace_json(const ProofChainTrace& t) {
    json j;
    json steps = json::array();
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        json s;
        s["index"] = i + 1;
        s["name"] = t.steps[i].name;
        s["passed"] = t.steps[i].passed;
        s["value"] = num(t.steps[i].value);
        steps.push_back(s);
    }
    j["steps"] = steps;
    j["width"] = width_json(t.width);
    j["cos1"] = num(t.cos1);
    j["overlap_bound"] = num(t.overlap_bound);
    j["commuted_edge"] = num(t.commuted_edge);
    j["s"] = cnum(t.s);
    j["a"] = cnum(t.a);
    j["b"] = cnum(t.b);
    j["abs_sum"] = num(t.abs_sum);
    j["a_commuted"] = cnum(t.a_commuted);
    j["b_commuted"] = cnum(t.b_commuted);
    j["cs_a"] = num(t.cs_a);
    j["cs_b"] = num(t.cs_b);
    j["mass_below_l"] = num(t.mass_below_l);
    j["mass_above_l"] = num(t.mass_above_l);
    j["mass_below_r"] = num(t.mass_below_r);
    j["mass_above_r"] = num(t.mass_above_r);
    j["mass_below_commuted"] = num(t.mass_below_commuted);
    j["mass_above_commuted"] = num(t.mass_above_commuted);
    j["final_bound"] = num(t.final_bound);
    return j;
}

inline int verify(const Options& o, std::ostream& out, std::ostream& err) {
    const RunSpec rs = load_spec(o);
    const WaveFunction psi = build_state(rs);
    ProofChainOptions opts;
    opts.snap_shift = !o.break_step_4;
    const ProofChainTrace t = trace_proof_chain(psi, rs.cfg, opts);

    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "step %zu  %-34s %s  ", i + 1, t.steps[i].name.c_str(),
                      t.steps[i].passed ? "pass" : "FAIL");
        out << buf << fmt(t.steps[i].value) << "\n";
    }

    json certainty;
    bool certainty_ok = true;
    std::vector<std::pair<double, double>> angle_series, bound_series;
    try {
        const auto shifts = rs.shifts ? *rs.shifts : default_ladder(t.width.delta_x);
        const auto rows = verify_certainty_bound(psi, shifts, rs.cfg);
        json arr = json::array();
        for (const auto& r : rows) {
            const bool pass = r.margin >= -tolerance::certainty_margin;
            certainty_ok = certainty_ok && pass;
            json row;
            row["shift"] = num(r.shift);
            row["angle"] = num(r.angle);
            row["bound"] = num(r.bound);
            row["margin"] = num(r.margin);
            row["passed"] = pass;
            arr.push_back(row);
            angle_series.emplace_back(r.shift, r.angle);
            bound_series.emplace_back(r.shift, r.bound);
        }
        certainty["rows"] = arr;
        certainty["passed"] = certainty_ok;
        out << "certainty bound: " << (certainty_ok ? "pass" : "FAIL") << " over " << rows.size() << " shifts\n";
    } catch (const ParameterError& e) {
        throw InputError(std::string("verify.shifts: ") + e.what());
    } catch (const Error& e) {
        // Guards on the momentum spread; the proof chain itself does not need it.
        certainty["skipped"] = e.what();
        out << "certainty bound: skipped (" << e.what() << ")\n";
    }

    const bool chain_ok = t.all_passed();
    json j = header("verify", rs);
    j["proof_chain"] = trace_json(t);
    j["proof_chain"]["passed"] = chain_ok;
    j["certainty"] = certainty;
    j["passed"] = chain_ok && certainty_ok;

    Output files(o.out_dir);
    files.add("verify.json", j.dump(2) + "\n");
    if (!angle_series.empty()) {
        files.add("certainty_angle.tsv", tsv(angle_series));
        files.add("certainty_bound.tsv", tsv(bound_series));
    }
    files.flush(out);

    if (!chain_ok) {
        const int k = *t.first_failure();
        err << "verify: FAIL at step " << k << " (" << t.steps[static_cast<std::size_t>(k - 1)].name << ")\n";
        return exit_code::verification_failure;
    }
    if (!certainty_ok) {
        err << "verify: FAIL certainty bound\n";
        return exit_code::verification_failure;
    }
    out << "verify: pass\n";
    return exit_code::pass;
}

// ------------------------------------------------------------------ sweep

inline const char* sweep_csv_header =
    "value,delta_x,delta_p,product_over_hbar,snapped_product_over_hbar,overlap_at_shift,angle_at_shift,"
    "delta_x_std,kennard_product_over_hbar,passed,error\n";

inline int sweep_command(const Options& o, std::ostream& out, std::ostream& err) {
    const RunSpec rs = load_spec(o);
    if (!rs.sweep) throw InputError("sweep: required field missing");
    {
        FamilySpec probe = rs.state;
        try {
            (void)get_param(probe, rs.sweep->axis);
        } catch (const Error&) {
            throw InputError("sweep.axis: unknown parameter '" + rs.sweep->axis + "' for this state");
        }
    }
    SweepOptions so;
    so.scale_grid = rs.sweep->scale_grid;
    so.reference = rs.sweep->reference;
    so.threads = o.threads;
    const SweepResult res = sweep(rs.state, rs.grid, rs.sweep->axis, rs.sweep->values, rs.cfg, so);

    std::string csv = sweep_csv_header;
    json rows = json::array();
    std::vector<std::pair<double, double>> product_series, kennard_series;
    int failures = 0;
    for (const auto& row : res.rows) {
        json jr;
        jr["value"] = num(row.value);
        if (row.report) {
            const auto& r = *row.report;
            const bool ok = report_passes(r);
            failures += ok ? 0 : 1;
            csv += fmt(row.value) + "," + fmt(r.delta_x) + "," + fmt(r.delta_p) + "," + fmt(r.product_over_hbar) + "," +
                   fmt(r.snapped_product_over_hbar) + "," + fmt(r.overlap_at_shift) + "," + fmt(r.angle_at_shift) +
                   "," + fmt(r.delta_x_std) + "," + fmt(r.kennard_product_over_hbar) + "," + (ok ? "1" : "0") + ",\n";
            jr["width"] = width_json(r.width);
            jr["inequality"] = inequality_json(r);
            jr["passed"] = ok;
            product_series.emplace_back(row.value, r.product_over_hbar);
            kennard_series.emplace_back(row.value, r.kennard_product_over_hbar);
        } else {
            csv += fmt(row.value) + ",,,,,,,,,," + csv_field(row.error) + "\n";
            jr["error"] = row.error;
        }
        rows.push_back(jr);
    }

    json j = header("sweep", rs);
    j["axis"] = res.axis;
    j["scale_grid"] = rs.sweep->scale_grid;
    j["reference"] = num(rs.sweep->reference);
    j["rows"] = rows;
    j["passed"] = failures == 0;

    out << "sweep over " << res.axis << ": " << res.rows.size() << " points, " << failures << " failing\n";
    Output files(o.out_dir);
    files.add("sweep.csv", csv);
    files.add("sweep.json", j.dump(2) + "\n");
    files.add("sweep_product.tsv", tsv(product_series));
    files.add("sweep_kennard.tsv", tsv(kennard_series));
    files.flush(out);
    if (failures > 0) {
        err << "sweep: FAIL at " << failures << " point(s)\n";
        return exit_code::verification_failure;
    }
    return exit_code::pass;
}

// ----------------------------------------------------------------- search

inline int search_command(const Options& o, std::ostream& out, std::ostream& err) {
    const RunSpec rs = load_spec(o);
    if (!rs.search) throw InputError("search: required field missing");
    SearchOptions so;
    so.free_params = rs.search->free_params;
    so.init = rs.search->init;
    so.budget = rs.search->budget;
    so.seed = rs.search->seed;
    so.diameter_tol = rs.search->diameter_tol;
    {
        FamilySpec probe = rs.state;
        for (const auto& name : so.free_params) {
            try {
                (void)get_param(probe, name);
            } catch (const Error&) {
                throw InputError("search.free_params: unknown parameter '" + name + "' for this state");
            }
        }
    }
    SearchResult res;
    try {
        res = minimize_product(rs.state, rs.grid, so, rs.cfg);
    } catch (const Error& e) {
        throw InputError(std::string("search.init: ") + e.what());
    }

    std::string csv = "evaluation";
    for (const auto& n : res.free_params) csv += "," + n;
    csv += ",product_over_hbar,best_so_far,error\n";
    json evals = json::array();
    std::vector<std::pair<double, double>> trace_series;
    for (std::size_t i = 0; i < res.evaluations.size(); ++i) {
        const auto& ev = res.evaluations[i];
        csv += std::to_string(i + 1);
        for (double p : ev.params) csv += "," + fmt(p);
        csv += "," + fmt(ev.product_over_hbar) + "," + fmt(res.trace[i]) + "," + csv_field(ev.error) + "\n";
        json je;
        je["params"] = num_list(ev.params);
        je["product_over_hbar"] = num(ev.product_over_hbar);
        if (!ev.error.empty()) je["error"] = ev.error;
        evals.push_back(je);
        trace_series.emplace_back(static_cast<double>(i + 1), res.trace[i]);
    }
    json findings = json::array();
    for (const auto& f : res.findings) {
        json jf;
        jf["params"] = num_list(f.params);
        jf["product_over_hbar"] = num(f.product_over_hbar);
        findings.push_back(jf);
    }

    json j = header("search", rs);
    j["free_params"] = res.free_params;
    j["init"] = num_list(so.init);
    j["budget"] = so.budget;
    j["seed"] = so.seed;
    j["best_params"] = num_list(res.best_params);
    j["best_product_over_hbar"] = num(res.best_product_over_hbar);
    j["evaluations_used"] = res.evaluations_used;
    j["stop_reason"] = res.stop_reason;
    j["trace"] = num_list(res.trace);
    j["findings"] = findings;
    j["evaluations"] = evals;
    j["passed"] = res.findings.empty();

    print_kv(out, "best_product_over_hbar", res.best_product_over_hbar);
    for (std::size_t i = 0; i < res.free_params.size(); ++i) print_kv(out, res.free_params[i], res.best_params[i]);
    out << "evaluations " << res.evaluations_used << ", stopped on " << res.stop_reason << ", "
        << res.findings.size() << " finding(s)\n";

    Output files(o.out_dir);
    files.add("search.csv", csv);
    files.add("search.json", j.dump(2) + "\n");
    files.add("search_trace.tsv", tsv(trace_series));
    files.flush(out);
    if (!res.findings.empty()) {
        err << "search: " << res.findings.size() << " evaluation(s) below hbar; first at product "
            << fmt(res.findings.front().product_over_hbar) << "\n";
        return exit_code::verification_failure;
    }
    return exit_code::pass;
}

// --------------------------------------------------------------- selftest

struct CorpusOutcome {
    bool theorem = false;
    bool kennard = false;
    bool chain = false;
    bool certainty = false;
    std::string note;
};

inline int selftest(const Options& o, std::ostream& out, std::ostream& err) {
    if (!o.spec_path.empty()) throw InputError("selftest: takes no --spec");
    Config cfg;
    if (o.hbar) cfg.hbar = *o.hbar;
    if (o.corrupt_epsilon) cfg.epsilon_override = corrupted_epsilon;
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    ProofChainOptions chain_opts;
    chain_opts.snap_shift = !o.break_step_4;

    const std::uint64_t base = o.seed.value_or(CorpusDefaults::base_seed);
    const auto specs = corpus_specs(CorpusDefaults::count, base);
    const GridSpec grid = CorpusDefaults::grid();
    std::vector<CorpusOutcome> outcomes(specs.size());
    qangle::detail::parallel_for(specs.size(), o.threads, [&](std::size_t i) {
        auto& oc = outcomes[i];
        try {
            const auto psi = make_state(specs[i], grid, cfg);
            const auto rep = analyze_state(psi, cfg);
            oc.theorem = rep.passes_theorem && rep.passes_snapped && rep.passes_angle;
            oc.kennard = rep.passes_kennard;
            oc.chain = trace_proof_chain(psi, cfg, chain_opts).all_passed();
            std::vector<double> ladder;
            for (int k = 1; k <= 8; ++k) ladder.push_back(0.25 * k * rep.delta_x);
            oc.certainty = true;
            for (const auto& r : verify_certainty_bound(psi, ladder, cfg)) {
                oc.certainty = oc.certainty && r.margin >= -tolerance::certainty_margin;
            }
        } catch (const Error& e) {
            oc.note = e.what();
        }
    });

    int n_theorem = 0, n_kennard = 0, n_chain = 0, n_certainty = 0;
    std::string first_failure;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& oc = outcomes[i];
        n_theorem += oc.theorem;
        n_kennard += oc.kennard;
        n_chain += oc.chain;
        n_certainty += oc.certainty;
        if (first_failure.empty()) {
            const char* check = !oc.theorem ? "theorem" : !oc.kennard ? "kennard" : !oc.chain ? "proof-chain"
                                : !oc.certainty ? "certainty" : nullptr;
            if (check) {
                first_failure = "seed " + std::to_string(specs[i].seed) + " check " + check;
                if (!oc.note.empty()) first_failure += " (" + oc.note + ")";
            }
        }
    }

    // Named fixtures.
    struct Fixture {
        std::string name;
        bool ok;
    };
    std::vector<Fixture> fixtures;
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            fixtures.push_back({name, fn()});
        } catch (const Error&) {
            fixtures.push_back({name, false});
        }
    };
    guarded("gaussian", [&] {
        const auto psi = make_state(FamilySpec::gaussian(0, 1), GridSpec(-16, 16, 4096), cfg);
        const auto rep = analyze_state(psi, cfg);
        return rep.passes_theorem && rep.passes_kennard && trace_proof_chain(psi, cfg, chain_opts).all_passed();
    });
    guarded("boxcar", [&] {
        const auto psi = make_state(FamilySpec::boxcar(0, 1), GridSpec(-2, 2, 4096), cfg);
        return trace_proof_chain(psi, cfg, chain_opts).all_passed();
    });
    guarded("plateau", [&] {
        const auto psi = make_plateau_state(GridSpec(-0.8, 2.4, 1024), cfg);
        return std::abs(tail_quantiles(psi, cfg).l - 0.2) <= 1e-12;
    });

    const std::size_t total = specs.size();
    std::ostringstream summary;
    summary << n_theorem << "/" << total << " theorem, " << n_kennard << "/" << total << " kennard, " << n_chain << "/"
            << total << " proof-chain\n";
    summary << n_certainty << "/" << total << " certainty-bound\n";
    summary << "fixtures:";
    bool fixtures_ok = true;
    for (const auto& f : fixtures) {
        summary << " " << f.name << " " << (f.ok ? "pass" : "FAIL");
        fixtures_ok = fixtures_ok && f.ok;
        if (!f.ok && first_failure.empty()) first_failure = "fixture " + f.name;
    }
    summary << "\n";
    out << summary.str();

    json j;
    j["command"] = "selftest";
    j["base_seed"] = base;
    j["count"] = total;
    j["constants"] = constants_json(cfg);
    j["theorem"] = n_theorem;
    j["kennard"] = n_kennard;
    j["proof_chain"] = n_chain;
    j["certainty_bound"] = n_certainty;
    json fx;
    for (const auto& f : fixtures) fx[f.name] = f.ok;
    j["fixtures"] = fx;
    j["passed"] = first_failure.empty();
    if (!first_failure.empty()) j["first_failure"] = first_failure;
    Output files(o.out_dir);
    files.add("selftest.json", j.dump(2) + "\n");
    files.flush(out);

    if (!first_failure.empty()) {
        err << "selftest: FAIL, first failure: " << first_failure << "\n";
        return exit_code::verification_failure;
    }
    return exit_code::pass;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"qangle: numerical checks of the quantile-width uncertainty bound"};
    app.set_help_all_flag("--help-all", "Show help for all commands");
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<double> hbar;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", o.spec_path, "Run specification (JSON)");
        sub->add_option("--out", o.out_dir, "Output directory; QANGLE_OUT overrides it")->capture_default_str();
        sub->add_option("--hbar", hbar, "Override hbar")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Search seed; base seed of the selftest corpus");
        sub->add_option("--threads", o.threads, "Worker threads for sweep and selftest")
            ->check(CLI::Range(1u, 256u))
            ->capture_default_str();
        sub->add_flag("--break-step-4", o.break_step_4, "Test hook: skip the lattice snap of the shift")
            ->group("Test hooks");
        sub->add_flag("--corrupt-epsilon", o.corrupt_epsilon, "Test hook: replace the threshold by 0.2")
            ->group("Test hooks");
    };
    for (const auto& [name, desc] : std::vector<std::pair<std::string, std::string>>{
             {"analyze", "Width, momentum spread and the uncertainty product of one state"},
             {"verify", "Step-by-step check of the overlap estimate and the certainty bound"},
             {"sweep", "Analyze a state family along one parameter"},
             {"search", "Simplex search for the smallest product in a state family"},
             {"selftest", "Run the seeded corpus and the named fixtures through every check"}}) {
        add_common(app.add_subcommand(name, desc));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "qangle: " << e.what() << "\n";
        return exit_code::input_error;
    }
    o.command = app.get_subcommands().front()->get_name();
    o.seed = seed;
    o.hbar = hbar;
    if (const char* env = std::getenv("QANGLE_OUT"); env && *env) o.out_dir = env;

    try {
        if (o.command == "analyze") return detail::analyze(o, out, err);
        if (o.command == "verify") return detail::verify(o, out, err);
        if (o.command == "sweep") return detail::sweep_command(o, out, err);
        if (o.command == "search") return detail::search_command(o, out, err);
        return detail::selftest(o, out, err);
    } catch (const InputError& e) {
        err << "qangle " << o.command << ": " << e.what() << "\n";
        return exit_code::input_error;
    } catch (const Error& e) {
        err << "qangle " << o.command << ": " << e.what() << "\n";
        return exit_code::input_error;
    }
}

} // namespace qangle::cli
