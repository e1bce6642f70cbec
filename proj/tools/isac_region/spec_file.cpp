#include "spec_file.hpp"

#include "format.hpp"
#include "isac/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace isac::cli {
namespace {

struct Entry {
    std::string value;
    int line = 0;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    int line(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    const std::string& raw(const std::string& key) {
        used_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw SpecError(key, 0, "required key is missing");
        return it->second.value;
    }

    double real(const std::string& key) { return parse_real(key, raw(key)); }

    double real(const std::string& key, double fallback) {
        return has(key) ? real(key) : fallback;
    }

    long long integer(const std::string& key) {
        const std::string& v = raw(key);
        long long out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
            throw SpecError(key, line(key), "expected an integer, got '" + v + "'");
        }
        return out;
    }

    std::vector<double> reals(const std::string& key) {
        const std::string& v = raw(key);
        if (v.empty()) throw SpecError(key, line(key), "list is empty");
        std::vector<double> out;
        for (const auto& item : split(v)) out.push_back(parse_real(key, item));
        return out;
    }

    std::vector<std::string> words(const std::string& key) {
        const std::string& v = raw(key);
        if (v.empty()) throw SpecError(key, line(key), "list is empty");
        std::vector<std::string> out = split(v);
        for (const auto& w : out) {
            if (w.empty()) throw SpecError(key, line(key), "empty list item");
        }
        return out;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_) {
            if (!used_.count(key)) throw SpecError(key, entry.line, "unknown key");
        }
    }

private:
    double parse_real(const std::string& key, const std::string& text) const {
        double out = 0.0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        if (first != last && *first == '+') ++first;
        const auto res = std::from_chars(first, last, out);
        if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(out)) {
            throw SpecError(key, line(key), "expected a finite number, got '" + text + "'");
        }
        return out;
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

void check(bool ok, const Reader& r, const std::string& key, const std::string& message) {
    if (!ok) throw SpecError(key, r.line(key), message);
}

void check_unit_grid(const std::vector<double>& grid, const Reader& r, const std::string& key,
                     bool endpoints) {
    for (double v : grid) check(v >= 0.0 && v <= 1.0, r, key, "values must lie in [0, 1]");
    if (endpoints) {
        const bool has0 = std::find(grid.begin(), grid.end(), 0.0) != grid.end();
        const bool has1 = std::find(grid.begin(), grid.end(), 1.0) != grid.end();
        check(has0 && has1, r, key, "grid must include 0 and 1");
    }
}

std::vector<double> uniform_grid(std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return g;
}

}  // namespace

SpecError::SpecError(std::string field, int line, const std::string& message)
    : std::runtime_error([&] {
          std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
          return where + field + ": " + message;
      }()),
      field_(std::move(field)),
      line_(line) {}

std::uint64_t seed_from_token(const std::string& token) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (!token.empty() && res.ec == std::errc() && res.ptr == token.data() + token.size()) {
        return value;
    }
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : token) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

SensingCorrelation ExperimentSpec::correlation() const {
    if (uses_scene()) {
        TargetScene scene;
        for (std::size_t i = 0; i < target_gains.size(); ++i) {
            scene.targets.push_back(
                {target_gains[i], target_angles_deg[i] * std::numbers::pi / 180.0});
        }
        return correlation_from_scene(scene, system.M);
    }
    return correlation_from_eigenvalues(eigenvalues, correlation_seed);
}

ExperimentSpec parse_spec(const std::string& text) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const auto hash = raw_line.find('#');
        const std::string line = trim(std::string_view(raw_line).substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw SpecError(line, line_no, "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw SpecError("?", line_no, "missing key before '='");
        if (entries.count(key)) {
            throw SpecError(key, line_no,
                            "duplicate key (first set on line " +
                                std::to_string(entries[key].line) + ")");
        }
        entries[key] = {value, line_no};
    }

    Reader r(std::move(entries));
    ExperimentSpec s;
    auto& sys = s.system;
    sys.M = static_cast<int>(r.integer("M"));
    check(sys.M >= 1, r, "M", "must be >= 1");
    sys.N = static_cast<int>(r.integer("N"));
    check(sys.N >= 1, r, "N", "must be >= 1");
    sys.K = static_cast<int>(r.integer("K"));
    check(sys.K >= sys.M, r, "K", "must be >= M for zero forcing");
    sys.L = static_cast<int>(r.integer("L"));
    check(sys.L >= sys.M, r, "L", "must be >= M");
    sys.R0 = r.real("R0", 2.0);
    check(sys.R0 >= 0.0, r, "R0", "must be >= 0");

    const bool scene = r.has("target_gains") || r.has("target_angles_deg");
    if (scene) {
        check(!r.has("eigenvalues"), r, "eigenvalues",
              "give either eigenvalues or a target scene, not both");
        s.target_gains = r.reals("target_gains");
        s.target_angles_deg = r.reals("target_angles_deg");
        check(s.target_gains.size() == s.target_angles_deg.size(), r, "target_angles_deg",
              "needs one angle per entry of target_gains");
        for (double g : s.target_gains) check(g > 0.0, r, "target_gains", "must be > 0");
    } else {
        if (!r.has("eigenvalues")) {
            throw SpecError("eigenvalues", 0,
                            "required key is missing (or give target_gains and "
                            "target_angles_deg)");
        }
        s.eigenvalues = r.reals("eigenvalues");
        check(s.eigenvalues.size() == static_cast<std::size_t>(sys.M), r, "eigenvalues",
              "needs exactly M = " + std::to_string(sys.M) + " values");
        for (double l : s.eigenvalues) check(l > 0.0, r, "eigenvalues", "must be > 0");
        if (r.has("correlation_seed")) {
            s.correlation_seed = seed_from_token(r.raw("correlation_seed"));
        }
    }

    if (r.has("snr_grid_db")) s.snr_grid_db = r.reals("snr_grid_db");
    const long long trials = r.integer("trials");
    check(trials >= 100, r, "trials", "must be >= 100");
    s.trials = static_cast<std::uint64_t>(trials);
    s.seed_token = r.raw("seed");
    check(!s.seed_token.empty(), r, "seed", "must not be empty");
    s.seed = seed_from_token(s.seed_token);

    if (r.has("designs")) {
        s.designs = r.words("designs");
        for (const auto& d : s.designs) {
            check(d == "SC" || d == "CC" || d == "Pareto" || d == "FDSAC", r, "designs",
                  "unknown design '" + d + "' (use SC, CC, Pareto, FDSAC)");
        }
    }
    s.alpha = r.real("alpha", 0.5);
    check(s.alpha >= 0.0 && s.alpha <= 1.0, r, "alpha", "must lie in [0, 1]");
    s.kappa = r.real("kappa", 0.5);
    check(s.kappa >= 0.0 && s.kappa <= 1.0, r, "kappa", "must lie in [0, 1]");
    s.mu = r.real("mu", 0.5);
    check(s.mu >= 0.0 && s.mu <= 1.0, r, "mu", "must lie in [0, 1]");

    s.region_snr_db = r.real("region_snr_db", 5.0);
    if (r.has("region_trials")) {
        const long long rt = r.integer("region_trials");
        check(rt >= 100, r, "region_trials", "must be >= 100");
        s.region_trials = static_cast<std::uint64_t>(rt);
    } else {
        s.region_trials = s.trials;
    }
    if (r.has("alpha_points")) {
        const long long n = r.integer("alpha_points");
        check(n >= 2, r, "alpha_points", "must be >= 2");
        s.alpha_points = static_cast<std::size_t>(n);
    }
    if (r.has("alpha_grid")) {
        if (r.raw("alpha_grid") != "auto") {
            s.alpha_grid = r.reals("alpha_grid");
            check_unit_grid(s.alpha_grid, r, "alpha_grid", true);
            check(!r.has("alpha_points"), r, "alpha_points",
                  "only applies when alpha_grid = auto");
            s.alpha_points = s.alpha_grid.size();
        }
    }
    s.kappa_grid = r.has("kappa_grid") ? r.reals("kappa_grid") : uniform_grid(21);
    check_unit_grid(s.kappa_grid, r, "kappa_grid", true);
    s.mu_grid = r.has("mu_grid") ? r.reals("mu_grid") : uniform_grid(21);
    check_unit_grid(s.mu_grid, r, "mu_grid", true);
    s.epsilon_grid = r.has("epsilon_grid") ? r.reals("epsilon_grid") : uniform_grid(11);
    check_unit_grid(s.epsilon_grid, r, "epsilon_grid", false);
    if (r.has("isac_profile")) {
        s.isac_profile = r.raw("isac_profile");
        check(s.isac_profile == "ergodic" || s.isac_profile == "per_realization", r,
              "isac_profile", "must be 'ergodic' or 'per_realization'");
    }

    r.reject_unused();
    return s;
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("--spec", 0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string format_spec(const ExperimentSpec& s) {
    std::ostringstream os;
    const auto& sys = s.system;
    os << "M = " << sys.M << "\nN = " << sys.N << "\nK = " << sys.K << "\nL = " << sys.L
       << "\nR0 = " << fmt(sys.R0) << '\n';
    if (s.uses_scene()) {
        os << "target_gains = " << fmt_list(s.target_gains) << '\n'
           << "target_angles_deg = " << fmt_list(s.target_angles_deg) << '\n';
    } else {
        os << "eigenvalues = " << fmt_list(s.eigenvalues) << '\n'
           << "correlation_seed = " << s.correlation_seed << '\n';
    }
    if (!s.snr_grid_db.empty()) os << "snr_grid_db = " << fmt_list(s.snr_grid_db) << '\n';
    os << "trials = " << s.trials << "\nseed = " << s.seed_token << "\ndesigns = ";
    for (std::size_t i = 0; i < s.designs.size(); ++i) os << (i ? ", " : "") << s.designs[i];
    os << "\nalpha = " << fmt(s.alpha) << "\nkappa = " << fmt(s.kappa) << "\nmu = " << fmt(s.mu)
       << "\nregion_snr_db = " << fmt(s.region_snr_db) << "\nregion_trials = " << s.region_trials
       << '\n';
    if (s.alpha_grid.empty()) {
        os << "alpha_grid = auto\nalpha_points = " << s.alpha_points << '\n';
    } else {
        os << "alpha_grid = " << fmt_list(s.alpha_grid) << '\n';
    }
    os << "kappa_grid = " << fmt_list(s.kappa_grid) << "\nmu_grid = " << fmt_list(s.mu_grid)
       << "\nepsilon_grid = " << fmt_list(s.epsilon_grid) << "\nisac_profile = "
       << s.isac_profile << '\n';
    return os.str();
}

}  // namespace isac::cli
