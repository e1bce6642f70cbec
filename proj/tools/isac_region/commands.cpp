#include "commands.hpp"

#include "format.hpp"
#include "isac/errors.hpp"
#include "isac/montecarlo.hpp"
#include "isac/rates.hpp"
#include "isac/region.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace isac::cli {
namespace {

using nlohmann::json;

void require_grid(const ExperimentSpec& spec) {
    if (spec.snr_grid_db.empty()) throw SpecError("snr_grid_db", 0, "required key is missing");
}

SystemConfig config_at(const ExperimentSpec& spec, double p_db) {
    SystemConfig cfg = spec.system;
    cfg.p = db_to_linear(p_db);
    return cfg;
}

std::vector<double> linear_grid(const ExperimentSpec& spec) {
    std::vector<double> ps;
    for (double db : spec.snr_grid_db) ps.push_back(db_to_linear(db));
    return ps;
}

Design design_of(const ExperimentSpec& spec, const std::string& name) {
    if (name == "SC") return Design::sensing_centric();
    if (name == "CC") return Design::comm_centric();
    if (name == "Pareto") return Design::pareto(spec.alpha);
    return Design::fdsac(spec.kappa, spec.mu);
}

json spec_json(const ExperimentSpec& spec) {
    json j;
    j["text"] = format_spec(spec);
    j["M"] = spec.system.M;
    j["N"] = spec.system.N;
    j["K"] = spec.system.K;
    j["L"] = spec.system.L;
    j["R0"] = spec.system.R0;
    if (spec.uses_scene()) {
        j["target_gains"] = spec.target_gains;
        j["target_angles_deg"] = spec.target_angles_deg;
    } else {
        j["eigenvalues"] = spec.eigenvalues;
        j["correlation_seed"] = spec.correlation_seed;
    }
    j["snr_grid_db"] = spec.snr_grid_db;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed_token;
    j["seed_value"] = spec.seed;
    j["designs"] = spec.designs;
    j["alpha"] = spec.alpha;
    j["kappa"] = spec.kappa;
    j["mu"] = spec.mu;
    return j;
}

json fit_json(const SlopeFit& fit) {
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2},
            {"grid", fit.grid}};
}

// Rate slope against log2 p over the >= 30 dB part of a curve, if any.
json high_snr_fit(const std::vector<CurvePoint>& curve) {
    std::vector<CurvePoint> high;
    for (const auto& c : curve) {
        if (c.p >= db_to_linear(30.0) * (1.0 - 1e-12)) high.push_back(c);
    }
    if (high.size() < 3) return {{"fit", nullptr}, {"reason", "fewer than 3 points at >= 30 dB"}};
    return {{"fit", fit_json(fit_high_snr_slope(high))}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void boundary_csv(std::ostringstream& os, const std::vector<RegionPoint>& pts) {
    os << "alpha,kappa,mu,epsilon,sr,cr,sr_std_err,cr_std_err\n";
    for (const auto& p : pts) {
        os << fmt(p.alpha) << ',' << fmt(p.kappa) << ',' << fmt(p.mu) << ',' << fmt(p.epsilon)
           << ',' << fmt(p.sr) << ',' << fmt(p.cr) << ',' << fmt(p.sr_std_err) << ','
           << fmt(p.cr_std_err) << '\n';
    }
}

json nan_or(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json point_json(const RegionPoint& p) {
    return {{"sr", p.sr},           {"cr", p.cr},
            {"sr_std_err", p.sr_std_err}, {"cr_std_err", p.cr_std_err},
            {"alpha", nan_or(p.alpha)},   {"kappa", nan_or(p.kappa)},
            {"mu", nan_or(p.mu)},         {"epsilon", nan_or(p.epsilon)}};
}

json containment_json(const ContainmentReport& rep) {
    json margins = json::array();
    for (const auto& m : rep.margins) {
        json e = point_json(m.point);
        e["cr_bound"] = m.cr_bound;
        e["margin"] = m.margin;
        e["tolerance"] = m.tolerance;
        e["clamped"] = m.clamped;
        e["violation"] = m.violation;
        if (!m.note.empty()) e["note"] = m.note;
        margins.push_back(std::move(e));
    }
    return {{"ok", rep.ok()},
            {"violations", rep.violations},
            {"min_margin", rep.margins.empty() ? json(nullptr) : json(rep.min_margin)},
            {"margins", std::move(margins)}};
}

}  // namespace

CommandOutput cmd_op(const ExperimentSpec& spec, const RunOptions& opts) {
    require_grid(spec);
    const SensingCorrelation corr = spec.correlation();
    const SystemConfig cfg = config_at(spec, spec.snr_grid_db.front());
    const std::vector<double> ps = linear_grid(spec);
    const double order = spec.system.M * (spec.system.K - spec.system.M + 1.0);

    std::ostringstream csv;
    csv << "p_db,design,op,std_err,reference\n";
    json report;
    report["spec"] = spec_json(spec);
    report["reference_exponent"] = order;
    std::vector<Design> list;
    for (const auto& name : spec.designs) list.push_back(design_of(spec, name));
    const auto curves =
        estimate_op_curves(list, cfg, corr, spec.system.R0, ps, spec.trials, spec.seed, opts);
    json designs = json::object();
    for (std::size_t j = 0; j < list.size(); ++j) {
        const Design& d = list[j];
        const auto& curve = curves[j];
        std::vector<CurvePoint> points;
        json rows = json::array();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const McEstimate& e = curve[i];
            csv << fmt(spec.snr_grid_db[i]) << ',' << d.label() << ',' << fmt(e.mean) << ','
                << fmt(e.std_err) << ',' << fmt(std::pow(ps[i], -order)) << '\n';
            points.push_back({ps[i], e.mean});
            rows.push_back({{"p_db", spec.snr_grid_db[i]},
                            {"op", e.mean},
                            {"std_err", e.std_err},
                            {"zero_events", e.zero_events},
                            {"upper_bound_95", e.zero_events ? json(e.upper_bound_95)
                                                             : json(nullptr)}});
        }
        json entry{{"points", std::move(rows)}};
        const auto window = diversity_window(points);
        if (window.size() >= 3) {
            entry["diversity_fit"] = fit_json(fit_diversity_order(window));
        } else {
            entry["diversity_fit"] = nullptr;
            entry["reason"] = "fewer than 3 points with OP in [1e-6, 1e-2]";
        }
        designs[d.label()] = std::move(entry);
    }
    report["designs"] = std::move(designs);
    return {{{"op.csv", csv.str()}, {"op.json", dump(report)}}, {}};
}

CommandOutput cmd_ecr(const ExperimentSpec& spec, const RunOptions& opts) {
    require_grid(spec);
    const SensingCorrelation corr = spec.correlation();
    const auto lambdas = corr.eigenvalues();
    const SystemConfig cfg = config_at(spec, spec.snr_grid_db.front());
    const std::vector<double> ps = linear_grid(spec);

    std::ostringstream csv;
    csv << "p_db,design,ecr,std_err,closed_form,asymptote\n";
    json report;
    report["spec"] = spec_json(spec);
    json designs = json::object();
    for (const auto& name : spec.designs) {
        const Design d = design_of(spec, name);
        const auto curve = estimate_rate_curve(d, cfg, corr, ps, spec.trials, spec.seed, opts);
        std::vector<CurvePoint> points;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const SystemConfig at = cfg.with_power(ps[i]);
            double closed = std::nan("");
            double asym = std::nan("");
            if (d.scheme == Design::Scheme::SensingCentric) {
                closed = ecr_closed_form(sensing_waterfill(lambdas, at).powers, at.k_prime());
            }
            if (d.scheme == Design::Scheme::SensingCentric ||
                d.scheme == Design::Scheme::CommCentric) {
                asym = asymptote_ecr(at, ps[i]);
            } else if (d.scheme == Design::Scheme::Fdsac) {
                asym = fdsac_asymptote_ecr(at, ps[i], d.kappa, d.mu);
            }
            csv << fmt(spec.snr_grid_db[i]) << ',' << d.label() << ','
                << fmt(curve[i].ecr.mean) << ',' << fmt(curve[i].ecr.std_err) << ','
                << fmt(closed) << ',' << fmt(asym) << '\n';
            points.push_back({ps[i], curve[i].ecr.mean});
        }
        designs[d.label()] = high_snr_fit(points);
    }
    report["designs"] = std::move(designs);
    return {{{"ecr.csv", csv.str()}, {"ecr.json", dump(report)}}, {}};
}

CommandOutput cmd_sr(const ExperimentSpec& spec, const RunOptions& opts) {
    require_grid(spec);
    const SensingCorrelation corr = spec.correlation();
    const auto lambdas = corr.eigenvalues();
    const SystemConfig cfg = config_at(spec, spec.snr_grid_db.front());
    const std::vector<double> ps = linear_grid(spec);

    std::ostringstream csv;
    csv << "p_db,design,sr,asymptote\n";
    json report;
    report["spec"] = spec_json(spec);
    json designs = json::object();
    for (const auto& name : spec.designs) {
        const Design d = design_of(spec, name);
        const auto curve = estimate_rate_curve(d, cfg, corr, ps, spec.trials, spec.seed, opts);
        std::vector<CurvePoint> points;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const SystemConfig at = cfg.with_power(ps[i]);
            const double asym = d.scheme == Design::Scheme::Fdsac
                                    ? fdsac_asymptote_sr(lambdas, at, ps[i], d.kappa, d.mu)
                                    : asymptote_sr(lambdas, at, ps[i]);
            csv << fmt(spec.snr_grid_db[i]) << ',' << d.label() << ',' << fmt(curve[i].sr.mean)
                << ',' << fmt(asym) << '\n';
            points.push_back({ps[i], curve[i].sr.mean});
        }
        designs[d.label()] = high_snr_fit(points);
    }
    report["designs"] = std::move(designs);
    return {{{"sr.csv", csv.str()}, {"sr.json", dump(report)}}, {}};
}

CommandOutput cmd_region(const ExperimentSpec& spec, const RunOptions& opts) {
    const SensingCorrelation corr = spec.correlation();
    const SystemConfig cfg = config_at(spec, spec.region_snr_db);
    const IsacProfile profile =
        spec.isac_profile == "ergodic" ? IsacProfile::Ergodic : IsacProfile::PerRealization;

    const GainTable table = sample_gain_table(cfg, corr, spec.region_trials, spec.seed, opts);
    const std::vector<double> alphas = spec.alpha_grid.empty()
                                           ? isac_alpha_grid(table, cfg, corr, spec.alpha_points)
                                           : spec.alpha_grid;
    const RegionBoundary isac = isac_boundary(table, cfg, corr, alphas, opts, profile);
    const FdsacRegion fdsac = fdsac_region(table, cfg, corr, spec.kappa_grid, spec.mu_grid, opts);
    const ContainmentReport contain = check_containment(fdsac.grid, isac);
    const SandwichReport sandwich =
        verify_sandwich(table, cfg, corr, spec.epsilon_grid, fdsac.grid, isac, opts);

    CommandOutput out;
    auto add_csv = [&](const std::string& name, const std::vector<RegionPoint>& pts) {
        std::ostringstream os;
        boundary_csv(os, pts);
        out.files.push_back({name, os.str()});
    };
    add_csv("isac_boundary.csv", isac.points);
    add_csv("fdsac_grid.csv", fdsac.grid);
    add_csv("fdsac_boundary.csv", fdsac.boundary.points);
    add_csv("aux_c1.csv", sandwich.c1.points);
    add_csv("aux_c2.csv", sandwich.c2.points);

    // P_s and P_c are the alpha = 1 and alpha = 0 points.
    json endpoints = json::object();
    for (const auto& p : isac.points) {
        if (p.alpha == 1.0) endpoints["P_s"] = point_json(p);
        if (p.alpha == 0.0) endpoints["P_c"] = point_json(p);
    }
    json spec_j = spec_json(spec);
    spec_j["region_snr_db"] = spec.region_snr_db;
    spec_j["region_trials"] = spec.region_trials;
    spec_j["alpha_grid"] = alphas;
    spec_j["kappa_grid"] = spec.kappa_grid;
    spec_j["mu_grid"] = spec.mu_grid;
    spec_j["epsilon_grid"] = spec.epsilon_grid;
    spec_j["isac_profile"] = spec.isac_profile;

    json report;
    report["spec"] = std::move(spec_j);
    report["endpoints"] = std::move(endpoints);
    report["isac_monotone"] = isac.is_monotone();
    report["fdsac_in_isac"] = containment_json(contain);
    report["sandwich"] = {{"ok", sandwich.ok()},
                          {"fdsac_in_c1", containment_json(sandwich.fdsac_in_c1)},
                          {"c1_in_c2", containment_json(sandwich.c1_in_c2)},
                          {"c2_in_isac", containment_json(sandwich.c2_in_isac)},
                          {"c2_dominates_c1", sandwich.c2_dominates_c1},
                          {"max_power_excess", sandwich.max_power_excess}};
    out.files.push_back({"region.json", dump(report)});

    if (!contain.ok()) {
        out.failure = std::to_string(contain.violations) +
                      " FDSAC point(s) lie outside the ISAC boundary";
    } else if (!sandwich.ok()) {
        out.failure = "auxiliary-region chain FDSAC <= C1 <= C2 <= ISAC does not hold";
    }
    return out;
}

void write_outputs(const CommandOutput& out, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : out.files) {
        std::ofstream os(dir / f.name, std::ios::binary);
        os << f.content;
        if (!os) throw std::runtime_error("cannot write " + (dir / f.name).string());
    }
}

}  // namespace isac::cli
