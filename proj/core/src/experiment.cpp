#include "adsteich/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adsteich/ads2.hpp"
#include "adsteich/cover.hpp"
#include "adsteich/hyp.hpp"

namespace ats::xp {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::SublemmaSweep: return "sublemma-sweep";
        case Kind::Prop2Scan: return "prop2-scan";
        case Kind::Prop4Scan: return "prop4-scan";
        case Kind::Prop5Scan: return "prop5-scan";
        case Kind::PropernessProbe: return "properness-probe";
        case Kind::Prescribe: return "prescribe";
        case Kind::Forward: return "forward";
    }
    throw internal_error("bad kind");
}

Kind kind_from_name(const std::string& name) {
    for (Kind k : {Kind::SublemmaSweep, Kind::Prop2Scan, Kind::Prop4Scan, Kind::Prop5Scan,
                   Kind::PropernessProbe, Kind::Prescribe, Kind::Forward})
        if (kind_name(k) == name) return k;
    throw validation_error("kind", "unknown experiment kind '" + name + "'");
}

std::vector<double> Grid::values() const {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) v.push_back(start + step * i);
    return v;
}

// ------------------------------------------------------------------ spec

ExperimentSpec ExperimentSpec::parse(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line;
    bool kind_seen = false, seed_seen = false;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string rest;
        std::getline(ls, rest);
        // trim
        const auto b = rest.find_first_not_of(" \t");
        rest = b == std::string::npos ? "" : rest.substr(b);
        const auto e = rest.find_last_not_of(" \t\r");
        if (e != std::string::npos) rest = rest.substr(0, e + 1);

        if (key == "kind") {
            spec.kind = kind_from_name(rest);
            kind_seen = true;
        } else if (key == "seed") {
            try {
                spec.seed = std::stoull(rest);
            } catch (...) {
                throw validation_error("seed", "not a 64-bit integer: '" + rest + "'");
            }
            seed_seen = true;
        } else {
            if (spec.raw.count(key))
                throw validation_error(key, "duplicate key");
            spec.raw[key] = rest;
        }
    }
    if (!kind_seen) throw validation_error("kind", "missing");
    if (!seed_seen) throw validation_error("seed", "missing");
    return spec;
}

ExperimentSpec ExperimentSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("spec", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool ExperimentSpec::has(const std::string& key) const { return raw.count(key) > 0; }

double ExperimentSpec::get_num(const std::string& key) const {
    const auto it = raw.find(key);
    if (it == raw.end()) throw validation_error(key, "missing");
    try {
        return std::stod(it->second);
    } catch (...) {
        throw validation_error(key, "not a number: '" + it->second + "'");
    }
}

double ExperimentSpec::get_num(const std::string& key, double fallback) const {
    return has(key) ? get_num(key) : fallback;
}

int ExperimentSpec::get_int(const std::string& key, int fallback) const {
    return has(key) ? static_cast<int>(std::llround(get_num(key))) : fallback;
}

std::string ExperimentSpec::get_str(const std::string& key,
                                    const std::string& fallback) const {
    const auto it = raw.find(key);
    return it == raw.end() ? fallback : it->second;
}

std::vector<double> ExperimentSpec::get_vec(const std::string& key) const {
    const auto it = raw.find(key);
    if (it == raw.end()) throw validation_error(key, "missing");
    std::istringstream ls(it->second);
    std::vector<double> out;
    double v;
    while (ls >> v) out.push_back(v);
    if (out.empty()) throw validation_error(key, "empty vector");
    return out;
}

std::vector<double> ExperimentSpec::get_vec(const std::string& key,
                                            const std::vector<double>& fallback) const {
    return has(key) ? get_vec(key) : fallback;
}

Grid ExperimentSpec::get_grid(const std::string& key) const {
    const auto it = raw.find(key);
    if (it == raw.end()) throw validation_error(key, "missing");
    Grid g;
    if (std::sscanf(it->second.c_str(), "%lf:%lf:%d", &g.start, &g.step, &g.count) != 3)
        throw validation_error(key, "expected start:step:count, got '" + it->second + "'");
    if (g.count < 1) throw validation_error(key, "grid count must be >= 1");
    return g;
}

void ExperimentSpec::validate() const {
    switch (kind) {
        case Kind::SublemmaSweep:
            if (get_num("alpha0") <= 0) throw validation_error("alpha0", "must be > 0");
            if (get_int("samples", 0) < 10) throw validation_error("samples", "need >= 10");
            break;
        case Kind::Prop2Scan: {
            if (get_num("alpha0") <= 0) throw validation_error("alpha0", "must be > 0");
            if (get_num("gamma0") <= 0) throw validation_error("gamma0", "must be > 0");
            if (get_num("beta0") < 0) throw validation_error("beta0", "must be >= 0");
            if (get_int("samples", 0) < 100) throw validation_error("samples", "need >= 100");
            get_grid("ell_grid");
            break;
        }
        case Kind::Prop4Scan:
            get_grid("phi_grid");
            get_grid("alpha_grid");
            break;
        case Kind::Prop5Scan:
            get_grid("t_grid");
            if (get_num("weight", 1.0) <= 0) throw validation_error("weight", "must be > 0");
            break;
        case Kind::PropernessProbe:
            get_grid("t_grid");
            break;
        case Kind::Prescribe:
            get_vec("m_plus_lengths");
            get_vec("m_minus_lengths");
            break;
        case Kind::Forward:
            break;
    }
}

// ------------------------------------------------------------- defaults

std::string default_spec_text(Kind k) {
    switch (k) {
        case Kind::SublemmaSweep:
            return "kind sublemma-sweep\nseed 20250809\nalpha0 1.0\nsamples 10000\n"
                   "grid_steps 48\n";
        case Kind::Prop2Scan:
            return "kind prop2-scan\nseed 20250809\nalpha0 2.5\ngamma0 1.05\nbeta0 0.004\n"
                   "samples 400\nbudget 12\ncurve a1\nell_grid 5:2.5:9\n";
        case Kind::Prop4Scan:
            return "kind prop4-scan\nseed 20250809\nphi_grid 0.4:0.4:20\n"
                   "alpha_grid 0.5:-0.05:10\n";
        case Kind::Prop5Scan:
            return "kind prop5-scan\nseed 20250809\nm_plus_lengths 2.2 2.45 3.1\n"
                   "m_plus_twists 0.35 -0.2 0.55\ncurve a1\nweight 1.0\n"
                   "t_grid 0:1:15\n";
        case Kind::PropernessProbe:
            return "kind properness-probe\nseed 20250809\nm_plus_lengths 2.2 2.45 3.1\n"
                   "m_plus_twists 0.35 -0.2 0.55\ncurve a1\nt_grid 0:1.5:8\n"
                   "ball 0.01\n";
        case Kind::Prescribe:
            return "kind prescribe\nseed 20250809\nm_plus_lengths 2.2 2.45 3.1\n"
                   "m_plus_twists 0.35 -0.2 0.55\nm_minus_lengths 2.3 2.3 3.0\n"
                   "m_minus_twists 0.1 0.2 -0.3\n";
        case Kind::Forward:
            return "kind forward\nseed 20250809\nm_lengths 2.2 2.45 3.1\n"
                   "m_twists 0.35 -0.2 0.55\ncurve a1\nweight 2.0\n";
    }
    throw internal_error("bad kind");
}

// ------------------------------------------------------------------ run

namespace {

surf::FNCoords fn_from(const std::vector<double>& lengths, const std::vector<double>& twists) {
    if (lengths.size() != 3) throw validation_error("lengths", "need 3 values");
    if (twists.size() != 3) throw validation_error("twists", "need 3 values");
    surf::FNCoords fn;
    for (int i = 0; i < 3; ++i) {
        fn.lengths[static_cast<size_t>(i)] = lengths[static_cast<size_t>(i)];
        fn.twists[static_cast<size_t>(i)] = twists[static_cast<size_t>(i)];
    }
    return fn;
}

quake::SolveOptions solver_options(const ExperimentSpec& spec, int threads) {
    quake::SolveOptions o;
    o.seed = derive_subseed(spec.seed, 0x501fe);
    o.threads = threads;
    o.n_starts = spec.get_int("n_starts", o.n_starts);
    o.max_iters = spec.get_int("max_iters", o.max_iters);
    return o;
}

void run_sublemma_sweep(const ExperimentSpec& spec, ResultEnvelope* env) {
    const double alpha0 = spec.get_num("alpha0");
    const int samples = spec.get_int("samples", 10000);
    const int steps = spec.get_int("grid_steps", 48);
    env->columns = {"gamma", "samples", "n_pass", "all_pass", "max_angle_dev"};
    const double hi = 0.75 * alpha0;
    double best_gamma = 0, best_dev = 0;
    for (int k = steps; k >= 1; --k) {
        const double gamma = hi * k / steps;
        Rng rng(derive_subseed(spec.seed, static_cast<std::uint64_t>(k)));
        int n_pass = 0;
        double max_dev = 0;
        for (int i = 0; i < samples; ++i) {
            const hyp::PredicateConfig cfg = hyp::random_predicate_config(rng, gamma);
            if (hyp::sublemma_predicate(cfg.D0, cfg.D1, cfg.x, alpha0, gamma)) ++n_pass;
            const auto p0 = hyp::drop_perpendicular(cfg.x, cfg.D0);
            const auto p1 = hyp::drop_perpendicular(cfg.x, cfg.D1);
            const Vec3 X = hyp::to_hyperboloid(cfg.x);
            auto tangent_toward = [&X](const hyp::HPoint& q) {
                const Vec3 Q = hyp::to_hyperboloid(q);
                const double ch = -hyp::mink(X, Q);
                return (Q - X * ch) * (1.0 / std::sqrt(ch * ch - 1.0));
            };
            const double bend =
                kPi - std::acos(std::min(1.0, std::max(-1.0,
                          hyp::mink(tangent_toward(p0.foot), tangent_toward(p1.foot)))));
            max_dev = std::max(max_dev, std::abs(bend) / 2.0);
        }
        const bool all = n_pass == samples;
        if (all && gamma > best_gamma) {
            best_gamma = gamma;
            best_dev = max_dev;
        }
        env->rows.push_back({gamma, static_cast<double>(samples),
                             static_cast<double>(n_pass), all ? 1.0 : 0.0, max_dev});
        env->row_seeds.push_back(derive_subseed(spec.seed, static_cast<std::uint64_t>(k)));
    }
    env->notes.push_back("gamma0 = " + fmt_num(best_gamma) + " for alpha0 = " +
                         fmt_num(alpha0));
    env->notes.push_back("empirical max |pi/2 - theta0| at gamma0 = " + fmt_num(best_dev));
}

void run_prop2_scan(const ExperimentSpec& spec, ResultEnvelope* env) {
    const double alpha0 = spec.get_num("alpha0");
    const double gamma0 = spec.get_num("gamma0");
    const double beta0 = spec.get_num("beta0");
    const int samples = spec.get_int("samples", 400);
    const int budget = spec.get_int("budget", surf::kDefaultBudget);
    const std::string curve = spec.get_str("curve", "a1");
    const std::vector<double> ells = spec.get_grid("ell_grid").values();

    // area of a closed genus-2 hyperbolic surface is 4 pi
    const double chi_abs = 2.0;
    const double l0 = 2.0 * kPi * chi_abs / gamma0;
    const double delta0 = spec.get_num("delta0", 2.0 * kPi * chi_abs * beta0 / gamma0);

    env->columns = {"ell_target", "ell",       "fraction",  "measure",   "two_sigma",
                    "bound_rhs",  "ok",        "frac_left", "frac_right", "min_count",
                    "max_count"};
    env->notes.push_back("l0 = 2 pi |chi| / gamma0 = " + fmt_num(l0));
    env->notes.push_back("delta0 = " + fmt_num(delta0));

    const auto& P = surf::decomposition_by_name("P_a_a");
    for (size_t i = 0; i < ells.size(); ++i) {
        surf::FNCoords fn;
        fn.lengths = {2.0, 2.3, 3.0};
        fn.twists = {0.3, -0.15, 0.4};
        // drive the chosen curve's length coordinate
        if (curve == "a1") fn.lengths[0] = ells[i];
        else if (curve == "a2") fn.lengths[1] = ells[i];
        else if (curve == "k") fn.lengths[2] = ells[i];
        else throw validation_error("curve", "prop2-scan drives a1, a2 or k");

        const surf::MarkedStructure h = surf::fn_to_holonomy(fn, P);
        const std::uint64_t sub = derive_subseed(spec.seed, i);
        const surf::BadSetReport rep = surf::bad_set_measure(
            h, surf::genus2_library().curve(curve), alpha0, beta0, samples, sub, budget);
        const double bound = delta0 + l0 / rep.curve_length;
        const double ok =
            rep.fraction <= bound + rep.two_sigma / rep.curve_length ? 1.0 : 0.0;
        env->rows.push_back({ells[i], rep.curve_length, rep.fraction, rep.measure,
                             rep.two_sigma, bound, ok, rep.fraction_left,
                             rep.fraction_right, static_cast<double>(rep.min_count),
                             static_cast<double>(rep.max_count)});
        env->row_seeds.push_back(sub);
        if (ok == 0.0) env->all_converged = false;
    }
}

void run_prop4_scan(const ExperimentSpec& spec, ResultEnvelope* env) {
    const std::vector<double> phis = spec.get_grid("phi_grid").values();
    const std::vector<double> alphas = spec.get_grid("alpha_grid").values();
    env->columns = {"phi_l", "phi_r", "alpha0", "tau_len", "pi2_minus"};
    size_t idx = 0;
    for (double a : alphas) {
        for (double pl : phis) {
            for (double pr : phis) {
                const ads2::ConvexConfig cfg = ads2::build_config(a, pl, pr);
                const double t = ads2::tau_core_length(cfg);
                env->rows.push_back({pl, pr, a, t, kPi / 2.0 - t});
                env->row_seeds.push_back(derive_subseed(spec.seed, idx++));
            }
        }
    }
    // empirical thresholds A(eps), eta0(eps): smallest phi level such that
    // all cells with min(phi_l,phi_r) >= A and alpha0 <= eta0 clear pi/2-eps
    for (double eps : {0.5, 0.2, 0.1, 0.05}) {
        double bestA = -1;
        const double eta0 = alphas.back();  // tightest alpha scanned
        for (double A : phis) {
            bool all_ok = true;
            for (const auto& row : env->rows) {
                if (std::min(row[0], row[1]) >= A && row[2] <= eta0 + 1e-12 &&
                    row[4] > eps)
                    all_ok = false;
            }
            if (all_ok) {
                bestA = A;
                break;
            }
        }
        env->notes.push_back("eps = " + fmt_num(eps) + ": A = " + fmt_num(bestA) +
                             ", eta0 = " + fmt_num(eta0));
    }
}

void run_prop5_scan(const ExperimentSpec& spec, ResultEnvelope* env, int threads) {
    const surf::FNCoords fn = fn_from(spec.get_vec("m_plus_lengths"),
                                      spec.get_vec("m_plus_twists"));
    const surf::MarkedStructure m_plus =
        surf::fn_to_holonomy(fn, surf::decomposition_by_name("P_a_a"));
    const std::string curve = spec.get_str("curve", "a1");
    const double weight = spec.get_num("weight", 1.0);
    const std::vector<double> grid = spec.get_grid("t_grid").values();
    const mess::ScanTable t = mess::prop5_scan(m_plus, curve, weight, grid,
                                               quake::default_supports(),
                                               solver_options(spec, threads));
    env->columns = t.columns;
    env->rows = t.rows;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        env->row_seeds.push_back(derive_subseed(spec.seed, i));
        if (t.rows[i].back() == mess::kRowSolverFailed) env->all_converged = false;
    }
}

void run_properness_probe(const ExperimentSpec& spec, ResultEnvelope* env, int threads) {
    const surf::FNCoords base = fn_from(spec.get_vec("m_plus_lengths"),
                                        spec.get_vec("m_plus_twists"));
    const double ball = spec.get_num("ball", 0.01);
    const std::vector<double> grid = spec.get_grid("t_grid").values();
    const std::string curve = spec.get_str("curve", "a1");
    const auto& P = surf::decomposition_by_name("P_a_a");

    std::vector<surf::MarkedStructure> seq;
    for (size_t n = 0; n < grid.size(); ++n) {
        surf::FNCoords fn = base;
        // converging wiggle within the ball
        fn.lengths[0] += ball / (1.0 + static_cast<double>(n));
        fn.twists[1] += 0.5 * ball / (1.0 + static_cast<double>(n));
        seq.push_back(surf::fn_to_holonomy(fn, P));
    }
    const mess::ScanTable t = mess::properness_probe(seq, curve, grid,
                                                     quake::default_supports(),
                                                     solver_options(spec, threads));
    env->columns = t.columns;
    env->rows = t.rows;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        env->row_seeds.push_back(derive_subseed(spec.seed, i));
        if (t.rows[i].back() == mess::kRowSolverFailed) env->all_converged = false;
    }
}

void run_prescribe(const ExperimentSpec& spec, ResultEnvelope* env, int threads) {
    const auto& P = surf::decomposition_by_name("P_a_a");
    const surf::MarkedStructure m_plus = surf::fn_to_holonomy(
        fn_from(spec.get_vec("m_plus_lengths"), spec.get_vec("m_plus_twists")), P);
    const surf::MarkedStructure m_minus = surf::fn_to_holonomy(
        fn_from(spec.get_vec("m_minus_lengths"), spec.get_vec("m_minus_twists")), P);

    const mess::PrescribeResult r = mess::prescribe_boundary(
        m_plus, m_minus, quake::default_supports(), quake::default_supports(),
        solver_options(spec, threads));

    env->columns = {"curve_idx", "l_rho_l", "l_rho_r", "l_m_plus", "l_m_minus"};
    const auto family = surf::genus2_library().filling_family();
    for (size_t i = 0; i < family.size(); ++i) {
        env->rows.push_back({static_cast<double>(i),
                             surf::curve_length(r.holonomy.rho_l, family[i]),
                             surf::curve_length(r.holonomy.rho_r, family[i]),
                             surf::curve_length(m_plus, family[i]),
                             surf::curve_length(m_minus, family[i])});
        env->row_seeds.push_back(derive_subseed(spec.seed, i));
    }
    env->notes.push_back("residual = " + fmt_num(r.residual));
    env->notes.push_back(std::string("converged = ") + (r.converged ? "1" : "0"));
    for (const auto& c : r.core.lam_plus.components)
        env->notes.push_back("w_plus[" + c.curve.name + "] = " + fmt_num(c.weight));
    for (const auto& c : r.core.lam_minus.components)
        env->notes.push_back("w_minus[" + c.curve.name + "] = " + fmt_num(c.weight));
    env->all_converged = r.converged;
}

void run_forward(const ExperimentSpec& spec, ResultEnvelope* env, int threads) {
    const auto& P = surf::decomposition_by_name("P_a_a");
    mess::GHMCStructure g;
    if (spec.has("rho_l_lengths")) {
        g.rho_l = surf::fn_to_holonomy(
            fn_from(spec.get_vec("rho_l_lengths"), spec.get_vec("rho_l_twists")), P);
        g.rho_r = surf::fn_to_holonomy(
            fn_from(spec.get_vec("rho_r_lengths"), spec.get_vec("rho_r_twists")), P);
    } else {
        // fabricated input: m and a weighted curve
        const surf::MarkedStructure m = surf::fn_to_holonomy(
            fn_from(spec.get_vec("m_lengths"), spec.get_vec("m_twists")), P);
        const double w = spec.get_num("weight", 1.0);
        surf::Multicurve lam;
        if (w > 0)
            lam.components.push_back({surf::genus2_library().curve(spec.get_str("curve", "a1")), w});
        g.rho_l = quake::earthquake(m, lam, quake::Side::Left);
        g.rho_r = quake::earthquake(m, lam, quake::Side::Right);
    }
    const mess::ConvexCoreData core =
        mess::phi_forward(g, quake::default_supports(), solver_options(spec, threads));

    env->columns = {"curve_idx", "l_m_plus", "l_m_minus", "l_rho_l", "l_rho_r"};
    const auto family = surf::genus2_library().filling_family();
    for (size_t i = 0; i < family.size(); ++i) {
        env->rows.push_back({static_cast<double>(i),
                             surf::curve_length(core.m_plus, family[i]),
                             surf::curve_length(core.m_minus, family[i]),
                             surf::curve_length(g.rho_l, family[i]),
                             surf::curve_length(g.rho_r, family[i])});
        env->row_seeds.push_back(derive_subseed(spec.seed, i));
    }
    env->notes.push_back("max_diagram_residual = " + fmt_num(core.max_residual()));
    for (const auto& c : core.lam_plus.components)
        env->notes.push_back("w_plus[" + c.curve.name + "] = " + fmt_num(c.weight));
    for (const auto& c : core.lam_minus.components)
        env->notes.push_back("w_minus[" + c.curve.name + "] = " + fmt_num(c.weight));
}

} // namespace

ResultEnvelope run(const ExperimentSpec& spec, int threads) {
    spec.validate();
    ResultEnvelope env;
    env.kind = spec.kind;
    env.seed = spec.seed;
    env.library_version = surf::genus2_library().version;
    {
        std::ostringstream echo;
        echo << "kind " << kind_name(spec.kind) << "\nseed " << spec.seed << "\n";
        for (const auto& [k, v] : spec.raw) echo << k << " " << v << "\n";
        env.spec_echo = echo.str();
    }

    const auto t0 = std::chrono::steady_clock::now();
    switch (spec.kind) {
        case Kind::SublemmaSweep: run_sublemma_sweep(spec, &env); break;
        case Kind::Prop2Scan: run_prop2_scan(spec, &env); break;
        case Kind::Prop4Scan: run_prop4_scan(spec, &env); break;
        case Kind::Prop5Scan: run_prop5_scan(spec, &env, threads); break;
        case Kind::PropernessProbe: run_properness_probe(spec, &env, threads); break;
        case Kind::Prescribe: run_prescribe(spec, &env, threads); break;
        case Kind::Forward: run_forward(spec, &env, threads); break;
    }
    env.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return env;
}

std::string ResultEnvelope::csv_text() const {
    std::string out;
    for (size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += ',';
    }
    out += "subseed\n";
    for (size_t r = 0; r < rows.size(); ++r) {
        for (double v : rows[r]) {
            out += fmt_num(v);
            out += ',';
        }
        out += std::to_string(row_seeds.at(r));
        out += '\n';
    }
    return out;
}

std::string ResultEnvelope::envelope_text() const {
    std::ostringstream out;
    out << "schema_version " << schema_version << "\n";
    out << "kind " << kind_name(kind) << "\n";
    out << "seed " << seed << "\n";
    out << "library_version " << library_version << "\n";
    out << "rows " << rows.size() << "\n";
    out << "all_converged " << (all_converged ? 1 : 0) << "\n";
    out << "wall_seconds " << wall_seconds << "\n";
    for (const auto& n : notes) out << "note " << n << "\n";
    out << "spec_begin\n" << spec_echo << "spec_end\n";
    return out.str();
}

void write_outputs(const ResultEnvelope& env, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream csv(fs::path(out_dir) / "rows.csv", std::ios::binary);
        csv << env.csv_text();
    }
    {
        std::ofstream txt(fs::path(out_dir) / "envelope.txt", std::ios::binary);
        txt << env.envelope_text();
    }
}

} // namespace ats::xp
