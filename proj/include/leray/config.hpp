#pragma once

// Strict INI-style run configuration. Unknown sections or keys, missing
// required keys, and non-finite numbers are rejected with the offending key
// named in the error. See README.md for the full key table and defaults.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leray/integrator.hpp"

namespace leray {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct ConfigDocument {
    RunConfig run;
    std::size_t ensemble_size = 1;
    unsigned workers = 1;
    std::optional<std::string> output_dir;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        const auto piece = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (!piece.empty())
            out.emplace_back(piece);
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline double parse_real(std::string_view text, const std::string& key) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    if (!std::isfinite(v))
        throw ConfigError(key, "value must be finite");
    return v;
}

template <class Int>
Int parse_integer(std::string_view text, const std::string& key) {
    text = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    return v;
}

inline bool parse_bool(std::string_view text, const std::string& key) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

// "k1 k2 k3" -> WaveIndex, with optional trailing words returned in `rest`.
inline WaveIndex parse_wave(std::string_view text, const std::string& key, std::vector<std::string>* rest = nullptr) {
    const auto words = split(text, ' ');
    if (words.size() < 3 || (!rest && words.size() != 3))
        throw ConfigError(key, "expected a wavevector 'k1 k2 k3', got '" + std::string(text) + "'");
    WaveIndex k{parse_integer<int>(words[0], key), parse_integer<int>(words[1], key), parse_integer<int>(words[2], key)};
    if (k.is_zero())
        throw ConfigError(key, "wavevector must be nonzero");
    if (rest)
        rest->assign(words.begin() + 3, words.end());
    return k;
}

// Section view that tracks which keys were consumed.
class Section {
public:
    Section(std::string name, const boost::property_tree::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    bool present() const { return tree_ != nullptr; }
    std::string key(const std::string& k) const { return name_ + "." + k; }

    std::optional<std::string> get(const std::string& k) {
        used_.insert(k);
        if (!tree_)
            return std::nullopt;
        const auto it = tree_->find(k);
        if (it == tree_->not_found())
            return std::nullopt;
        return it->second.data();
    }
    std::string require(const std::string& k) {
        auto v = get(k);
        if (!v)
            throw ConfigError(key(k), "required key is missing");
        return *v;
    }
    double real(const std::string& k) { return parse_real(require(k), key(k)); }
    double real_or(const std::string& k, double fallback) {
        auto v = get(k);
        return v ? parse_real(*v, key(k)) : fallback;
    }
    void reject(const std::string& k, const std::string& why) {
        if (get(k))
            throw ConfigError(key(k), why);
    }
    void check_unknown() const {
        if (!tree_)
            return;
        for (const auto& [k, v] : *tree_)
            if (!used_.contains(k))
                throw ConfigError(key(k), "unknown key");
    }

private:
    std::string name_;
    const boost::property_tree::ptree* tree_;
    std::set<std::string> used_;
};

inline std::vector<double> parse_thresholds(const std::string& text, const std::string& key) {
    std::vector<double> out;
    for (const auto& piece : split(text, ','))
        out.push_back(parse_real(piece, key));
    if (out.empty())
        throw ConfigError(key, "expected at least one threshold");
    return out;
}

}  // namespace detail

inline ConfigDocument parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", std::string("malformed document: ") + e.message() + " (line " +
                                  std::to_string(e.line()) + ")");
    }
    static const std::set<std::string> known{"model", "time",    "noise",    "initial",
                                             "monitors", "cutoff", "ensemble", "output"};
    for (const auto& [name, node] : tree) {
        if (!known.contains(name))
            throw ConfigError(name, node.empty() && !node.data().empty() ? "key outside any section"
                                                                         : "unknown section");
    }
    auto section = [&](const std::string& name) {
        const auto it = tree.find(name);
        return detail::Section(name, it == tree.not_found() ? nullptr : &it->second);
    };

    ConfigDocument doc;
    RunConfig& run = doc.run;

    // [model]
    auto model = section("model");
    ModelParameters mp;
    mp.nu = model.real("nu");
    mp.alpha = model.real("alpha");
    mp.theta1 = model.real("theta1");
    mp.theta2 = model.real("theta2");
    mp.n = detail::parse_integer<int>(model.require("n"), model.key("n"));
    if (!(mp.nu > 0.0))
        throw ConfigError(model.key("nu"), "nu must be > 0");
    if (!(mp.alpha > 0.0))
        throw ConfigError(model.key("alpha"), "alpha must be > 0");
    if (!(mp.theta1 >= 0.0))
        throw ConfigError(model.key("theta1"), "theta1 must be >= 0");
    if (!(mp.theta2 > 0.0))
        throw ConfigError(model.key("theta2"), "theta2 must be > 0");
    if (mp.n < 1 || mp.n > 256)
        throw ConfigError(model.key("n"), "n must be in [1, 256]");
    if (auto v = model.get("nonlinear"))
        run.nonlinear = detail::parse_bool(*v, model.key("nonlinear"));
    model.check_unknown();
    run.ctx = ModelContext(mp);

    // [time]
    auto time = section("time");
    run.dt = time.real("dt");
    run.horizon = time.real("T");
    if (!(run.dt > 0.0))
        throw ConfigError(time.key("dt"), "dt must be > 0");
    if (!(run.dt < run.horizon))
        throw ConfigError(time.key("dt"), "dt must be < T");
    if (std::abs(double(run.steps()) * run.dt - run.horizon) > 1e-9 * run.horizon)
        throw ConfigError(time.key("T"), "T must be an integer multiple of dt");
    run.snapshot_every = time.real_or("snapshot_every", run.horizon / 10.0);
    if (run.snapshot_every < 0.0)
        throw ConfigError(time.key("snapshot_every"), "must be >= 0");
    time.check_unknown();

    // [noise]
    auto noise = section("noise");
    const std::string family = std::string(detail::trim(noise.require("family")));
    const double sigma = noise.real_or("sigma", 0.0);
    if (sigma < 0.0)
        throw ConfigError(noise.key("sigma"), "sigma must be >= 0");
    if (auto v = noise.get("seed"))
        run.seed = detail::parse_integer<std::uint64_t>(*v, noise.key("seed"));
    if (family == "linear_multiplicative") {
        for (const char* k : {"modes", "amplitudes", "gamma", "driver_dim"})
            noise.reject(k, "not used by family linear_multiplicative");
        run.noise = NoiseFamily::linear_multiplicative(sigma);
    } else if (family == "additive" || family == "diagonal_spectral") {
        const bool additive = family == "additive";
        const double gamma = noise.real_or("gamma", 0.0);
        std::vector<DriverMode> drivers;
        if (auto modes = noise.get("modes")) {
            for (const auto& entry : detail::split(*modes, ';')) {
                std::vector<std::string> rest;
                DriverMode d;
                d.k = detail::parse_wave(entry, noise.key("modes"), &rest);
                if (!additive && !rest.empty())
                    throw ConfigError(noise.key("modes"), "diagonal_spectral modes take no polarization or phase");
                if (rest.size() > 2)
                    throw ConfigError(noise.key("modes"), "expected 'k1 k2 k3 [pol [cos|sin]]'");
                if (!rest.empty())
                    d.polarization = detail::parse_integer<int>(rest[0], noise.key("modes"));
                if (rest.size() == 2) {
                    if (rest[1] != "cos" && rest[1] != "sin")
                        throw ConfigError(noise.key("modes"), "phase must be cos or sin");
                    d.sine = rest[1] == "sin";
                }
                d.amplitude = sigma * std::pow(double(d.k.norm_sq()), -0.5 * gamma);
                drivers.push_back(d);
            }
            if (auto dim = noise.get("driver_dim"))
                if (detail::parse_integer<std::size_t>(*dim, noise.key("driver_dim")) != drivers.size())
                    throw ConfigError(noise.key("driver_dim"), "does not match the number of modes");
        } else {
            const auto dim = detail::parse_integer<std::size_t>(noise.require("driver_dim"), noise.key("driver_dim"));
            if (dim == 0)
                throw ConfigError(noise.key("driver_dim"), "must be >= 1");
            drivers = additive ? additive_decay_drivers(dim, sigma, gamma) : spectral_decay_drivers(dim, sigma, gamma);
        }
        if (auto amps = noise.get("amplitudes")) {
            const auto list = detail::split(*amps, ',');
            if (list.size() != drivers.size())
                throw ConfigError(noise.key("amplitudes"), "expected " + std::to_string(drivers.size()) + " values");
            for (std::size_t j = 0; j < list.size(); ++j) {
                drivers[j].amplitude = detail::parse_real(list[j], noise.key("amplitudes"));
                if (drivers[j].amplitude < 0.0)
                    throw ConfigError(noise.key("amplitudes"), "amplitudes must be >= 0");
            }
        }
        for (const auto& d : drivers)
            if (!in_cube(d.k, mp.n))
                throw ConfigError(noise.key("modes"), "mode " + to_string(d.k) + " outside truncation");
        try {
            run.noise = additive ? NoiseFamily::additive(std::move(drivers))
                                 : NoiseFamily::diagonal_spectral(std::move(drivers));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(noise.key("modes"), e.what());
        }
    } else {
        throw ConfigError(noise.key("family"), "unknown family '" + family +
                                                   "' (expected additive, linear_multiplicative, diagonal_spectral)");
    }
    noise.check_unknown();

    // [initial]
    auto initial = section("initial");
    const std::string kind = std::string(detail::trim(initial.require("kind")));
    InitialData& init = run.initial;
    init.amplitude = initial.real_or("amplitude", 1.0);
    if (init.amplitude < 0.0)
        throw ConfigError(initial.key("amplitude"), "must be >= 0");
    if (kind == "zero") {
        init.kind = InitialKind::zero;
        for (const char* k : {"seed", "slope", "mode", "polarization"})
            initial.reject(k, "not used by kind zero");
    } else if (kind == "single_mode") {
        init.kind = InitialKind::single_mode;
        for (const char* k : {"seed", "slope"})
            initial.reject(k, "not used by kind single_mode");
        if (auto v = initial.get("mode"))
            init.mode = detail::parse_wave(*v, initial.key("mode"));
        if (!in_cube(init.mode, mp.n))
            throw ConfigError(initial.key("mode"), "mode outside truncation");
        if (auto v = initial.get("polarization"))
            init.polarization = detail::parse_integer<int>(*v, initial.key("polarization"));
        if (init.polarization != 0 && init.polarization != 1)
            throw ConfigError(initial.key("polarization"), "must be 0 or 1");
    } else if (kind == "random") {
        init.kind = InitialKind::random;
        for (const char* k : {"mode", "polarization"})
            initial.reject(k, "not used by kind random");
        if (auto v = initial.get("seed"))
            init.seed = detail::parse_integer<std::uint64_t>(*v, initial.key("seed"));
        init.slope = initial.real_or("slope", 2.0);
    } else {
        throw ConfigError(initial.key("kind"), "unknown kind '" + kind + "' (expected zero, single_mode, random)");
    }
    initial.check_unknown();

    // [monitors]
    auto monitors = section("monitors");
    for (auto [name, kind_value] : {std::pair{"tau_R", StoppingKind::tau_R}, std::pair{"rho_M", StoppingKind::rho_M},
                                    std::pair{"gamma_K", StoppingKind::gamma_K}}) {
        if (auto v = monitors.get(name))
            for (double threshold : detail::parse_thresholds(*v, monitors.key(name))) {
                if (!(threshold > 0.0))
                    throw ConfigError(monitors.key(name), "thresholds must be > 0");
                run.monitors.push_back({kind_value, threshold});
            }
    }
    if (auto v = monitors.get("stop_on_hit"))
        run.stop_on_hit = detail::parse_bool(*v, monitors.key("stop_on_hit"));
    monitors.check_unknown();

    // [cutoff]
    auto cutoff = section("cutoff");
    if (cutoff.present()) {
        const double r = cutoff.real("R");
        if (!(r > 0.0))
            throw ConfigError(cutoff.key("R"), "R must be > 0");
        run.cutoff_radius = r;
    }
    cutoff.check_unknown();

    // [ensemble]
    auto ensemble = section("ensemble");
    if (auto v = ensemble.get("size"))
        doc.ensemble_size = detail::parse_integer<std::size_t>(*v, ensemble.key("size"));
    if (doc.ensemble_size == 0)
        throw ConfigError(ensemble.key("size"), "must be >= 1");
    if (auto v = ensemble.get("workers"))
        doc.workers = detail::parse_integer<unsigned>(*v, ensemble.key("workers"));
    if (doc.workers == 0)
        throw ConfigError(ensemble.key("workers"), "must be >= 1");
    ensemble.check_unknown();

    // [output]
    auto output = section("output");
    if (auto v = output.get("directory"))
        doc.output_dir = std::string(detail::trim(*v));
    output.check_unknown();

    try {
        run.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("", e.what());
    }
    return doc;
}

}  // namespace leray
