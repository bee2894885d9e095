#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "leray/leray.hpp"

namespace fs = std::filesystem;
using namespace leray;

namespace {

enum ExitCode { ok = 0, other_error = 1, config_error = 2, blowup_halt = 3, invariant_failure = 4 };

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("", "cannot read config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// --output, then [output] directory, then $LERAY_OUTPUT_DIR, then ./leray_out.
fs::path output_dir(const std::string& flag, const ConfigDocument* doc) {
    if (!flag.empty())
        return flag;
    if (doc && doc->output_dir)
        return *doc->output_dir;
    if (const char* env = std::getenv("LERAY_OUTPUT_DIR"); env && *env)
        return env;
    return "leray_out";
}

void write_text(const fs::path& path, const auto& writer) {
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    writer(os);
    if (!os)
        throw std::runtime_error("write failed for " + path.string());
}

std::string numbered(const std::string& stem, std::size_t i, const std::string& ext) {
    std::ostringstream os;
    os << stem << std::setw(4) << std::setfill('0') << i << ext;
    return os.str();
}

struct Common {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
};

ConfigDocument load(const Common& c) {
    ConfigDocument doc = parse_config(read_file(c.config));
    if (c.seed)
        doc.run.seed = *c.seed;
    if (c.workers) {
        if (*c.workers == 0)
            throw ConfigError("--workers", "must be >= 1");
        doc.workers = *c.workers;
    }
    return doc;
}

// Writes per-trajectory files; returns true if the trajectory halted.
bool persist_trajectory(const fs::path& dir, const std::string& stem, const TrajectoryRecord& rec,
                        const RunConfig& cfg, bool snapshots) {
    write_text(dir / (stem + ".csv"), [&](std::ostream& os) { write_trajectory_csv(os, rec); });
    write_text(dir / (stem + "_ledger.csv"), [&](std::ostream& os) { write_ledger_csv(os, energy_ledger(rec)); });
    if (snapshots)
        for (const auto& s : rec.snapshots)
            write_snapshot(s.u, snapshot_meta(cfg.ctx, s.t), (dir / numbered(stem + "_snap_", s.step, ".bin")).string());
    return rec.halt.has_value();
}

void write_incomplete(const fs::path& dir, std::span<const TrajectoryRecord> records) {
    write_text(dir / "INCOMPLETE", [&](std::ostream& os) {
        for (const auto& r : records)
            if (r.halt)
                os << "trajectory " << r.trajectory << " halted at t=" << format_number(r.halt->time) << " (step "
                   << r.halt->step << "): "
                   << (r.numerical_blowup() ? "numerical overflow" : "stopping time") << ", " << r.halt->detail
                   << '\n';
    });
}

int finish(const fs::path& dir, std::span<const TrajectoryRecord> records) {
    std::error_code ec;
    fs::remove(dir / "INCOMPLETE", ec);
    bool halted = false, blowup = false;
    for (const auto& r : records) {
        halted = halted || r.halt.has_value();
        blowup = blowup || r.numerical_blowup();
    }
    if (halted)
        write_incomplete(dir, records);
    if (blowup) {
        std::cerr << "numerical blow-up: see " << (dir / "INCOMPLETE").string() << '\n';
        return blowup_halt;
    }
    return ok;
}

int cmd_run(const Common& c) {
    const ConfigDocument doc = load(c);
    const fs::path dir = output_dir(c.output, &doc);
    fs::create_directories(dir);
    const TrajectoryRecord rec = run_trajectory(doc.run, 0);
    persist_trajectory(dir, "trajectory", rec, doc.run, true);
    const std::vector<TrajectoryRecord> one{rec};
    write_text(dir / "stopping.csv", [&](std::ostream& os) { write_stopping_csv(os, one); });
    std::cout << "wrote " << rec.points() << " time points to " << dir.string() << '\n';
    return finish(dir, one);
}

int cmd_ensemble(const Common& c, std::optional<std::size_t> size, double p) {
    ConfigDocument doc = load(c);
    if (size) {
        if (*size == 0)
            throw ConfigError("--size", "must be >= 1");
        doc.ensemble_size = *size;
    }
    const fs::path dir = output_dir(c.output, &doc);
    fs::create_directories(dir);
    RunConfig cfg = doc.run;
    const auto records = run_ensemble(cfg, doc.ensemble_size, doc.workers);
    for (const auto& r : records)
        persist_trajectory(dir, numbered("trajectory_", r.trajectory, ""), r, cfg, false);
    write_text(dir / "stopping.csv", [&](std::ostream& os) { write_stopping_csv(os, records); });
    write_text(dir / "summary.csv",
               [&](std::ostream& os) { write_summary_csv(os, ensemble_moments(records, p)); });
    std::cout << "wrote " << records.size() << " trajectories to " << dir.string() << '\n';
    return finish(dir, records);
}

// "a,b,c" or "lo:hi:count" (inclusive, evenly spaced).
std::vector<double> parse_axis(const std::string& text, const std::string& name) {
    std::vector<double> out;
    const auto parts = detail::split(text, ':');
    if (parts.size() == 3) {
        const double lo = detail::parse_real(parts[0], name), hi = detail::parse_real(parts[1], name);
        const auto count = detail::parse_integer<std::size_t>(parts[2], name);
        if (count == 0)
            throw ConfigError(name, "grid needs at least one point");
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1));
        return out;
    }
    if (parts.size() != 1)
        throw ConfigError(name, "expected 'a,b,c' or 'lo:hi:count'");
    for (const auto& v : detail::split(text, ','))
        out.push_back(detail::parse_real(v, name));
    if (out.empty())
        throw ConfigError(name, "empty list");
    return out;
}

int cmd_classify(const std::string& t1, const std::string& t2, const std::string& output) {
    std::vector<RegimeVerdict> table;
    for (double a : parse_axis(t1, "--theta1"))
        for (double b : parse_axis(t2, "--theta2"))
            table.push_back(classify_regime(a, b));
    const fs::path dir = output_dir(output, nullptr);
    fs::create_directories(dir);
    write_text(dir / "regimes.csv", [&](std::ostream& os) { write_regime_csv(os, table); });
    write_regime_csv(std::cout, table);
    return ok;
}

int cmd_audit(const Common& c, std::size_t samples) {
    const ConfigDocument doc = load(c);
    const auto report = audit_hypotheses(doc.run.noise, doc.run.ctx, samples, doc.run.seed);
    print_audit(std::cout, report);
    if (!c.output.empty()) {
        fs::create_directories(c.output);
        write_text(fs::path(c.output) / "audit.txt", [&](std::ostream& os) { print_audit(os, report); });
    }
    return ok;
}

int cmd_invariants(const Common& c, std::size_t samples) {
    const ConfigDocument doc = load(c);
    const auto checks = run_invariant_suite(doc.run.ctx, samples, doc.run.seed);
    bool all = true;
    for (const auto& chk : checks) {
        std::cout << (chk.passed() ? "PASS  " : "FAIL  ") << chk.name << "  worst=" << format_number(chk.worst)
                  << "  tol=" << format_number(chk.tolerance) << '\n';
        all = all && chk.passed();
    }
    std::cout << (all ? "all invariants hold\n" : "invariant suite FAILED\n");
    return all ? ok : invariant_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Leray-alpha pseudo-spectral simulator"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool workers) {
        sub->add_option("--config", common.config, "INI run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", common.seed, "override [noise] seed");
        sub->add_option("--output", common.output, "output directory");
        if (workers)
            sub->add_option("--workers", common.workers, "worker threads");
    };

    auto* run = app.add_subcommand("run", "integrate one trajectory");
    add_common(run, true);

    auto* ens = app.add_subcommand("ensemble", "integrate an ensemble and summarise moments");
    add_common(ens, true);
    std::optional<std::size_t> size;
    double p = 2.0;
    ens->add_option("--size", size, "override [ensemble] size");
    ens->add_option("--p", p, "moment exponent (>= 2)");

    auto* cls = app.add_subcommand("classify", "regime table over a (theta1, theta2) grid");
    std::string t1, t2, cls_out;
    cls->add_option("--theta1", t1, "list 'a,b,c' or grid 'lo:hi:count'")->required();
    cls->add_option("--theta2", t2, "list 'a,b,c' or grid 'lo:hi:count'")->required();
    cls->add_option("--output", cls_out, "output directory");

    auto* audit = app.add_subcommand("audit-noise", "empirical growth and Lipschitz audit of the noise");
    add_common(audit, false);
    std::size_t audit_samples = 16;
    audit->add_option("--samples", audit_samples, "samples per scale (>= 2)");

    auto* inv = app.add_subcommand("check-invariants", "randomised operator invariant suite");
    add_common(inv, false);
    std::size_t inv_samples = 20;
    inv->add_option("--samples", inv_samples, "random samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*run)
            return cmd_run(common);
        if (*ens)
            return cmd_ensemble(common, size, p);
        if (*cls)
            return cmd_classify(t1, t2, cls_out);
        if (*audit)
            return cmd_audit(common, audit_samples);
        if (*inv)
            return cmd_invariants(common, inv_samples);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return other_error;
    }
    return other_error;
}
