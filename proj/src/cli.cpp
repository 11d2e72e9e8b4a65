#include "ringsim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/format.hpp"
#include "ringsim/model.hpp"
#include "ringsim/noon_model.hpp"
#include "ringsim/observables.hpp"
#include "ringsim/oracles.hpp"
#include "ringsim/pipeline.hpp"
#include "ringsim/propagator.hpp"
#include "ringsim/single_particle.hpp"
#include "ringsim/sweep.hpp"

namespace ringsim {

using json = nlohmann::ordered_json;

double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
    }
    if (s.empty()) throw InvalidArgument("empty angle");
    double divisor = 1.0;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        divisor = std::stod(s.substr(slash + 1));
        s = s.substr(0, slash);
    }
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = kPi;
        s = s.substr(0, s.size() - 2);
        if (!s.empty() && s.back() == '*') s.pop_back();
        if (s.empty() || s == "+") s = "1";
        if (s == "-") s = "-1";
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("cannot parse angle '" + text + "'");
    }
    if (used != s.size() || divisor == 0.0) throw InvalidArgument("cannot parse angle '" + text + "'");
    return v * factor / divisor;
}

double parse_species_mass(const std::string& text) {
    static const std::map<std::string, double> isotopes = {
        {"li7", 7.0160034366}, {"7li", 7.0160034366}, {"na23", 22.989769282}, {"23na", 22.989769282},
        {"k39", 38.9637064864}, {"39k", 38.9637064864}, {"rb87", 86.909180531}, {"87rb", 86.909180531},
    };
    std::string s;
    for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (auto it = isotopes.find(s); it != isotopes.end()) return it->second * si::atomic_mass;
    if (s.rfind("mass=", 0) == 0) s = s.substr(5);
    double scale = 1.0;
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "kg") == 0) {
        s = s.substr(0, s.size() - 2);
    } else if (!s.empty() && s.back() == 'u') {
        scale = si::atomic_mass;
        s.pop_back();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("cannot parse species '" + text + "'");
    }
    if (used != s.size() || !(v > 0.0)) throw InvalidArgument("cannot parse species '" + text + "'");
    return v * scale;
}

namespace {

// Accepts either the INI text or a manifest JSON (its "config" member).
class ManifestConfig : public CLI::ConfigINI {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            try {
                text = json::parse(text).at("config").get<std::string>();
            } catch (const std::exception& e) {
                throw CLI::ConversionError("manifest", e.what());
            }
        }
        std::istringstream is(text);
        return CLI::ConfigINI::from_config(is);
    }
};

struct Globals {
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    double tol = 1e-9;
    std::string output;
    std::string manifest;
    std::string config_file;
    bool dry_run = false;
    bool error_json = false;
};

struct ModelArgs {
    int atoms = 5;
    int modes = 20;
    double g = 0.1;
    double b = 0.008;
    std::string omega = "pi";
    std::string coupling = "leading";

    SystemParams params() const { return {atoms, modes, g, b, parse_angle(omega)}; }
    CouplingOrder order() const {
        if (coupling == "leading") return CouplingOrder::leading;
        if (coupling == "identity" || coupling == "none") return CouplingOrder::identity;
        throw InvalidArgument("coupling must be 'leading' or 'identity'");
    }
};

void add_model_options(CLI::App* app, ModelArgs& m) {
    app->add_option("--atoms,-N", m.atoms, "number of atoms N")->capture_default_str();
    app->add_option("--modes,-r", m.modes, "momentum window size r (even)")->capture_default_str();
    app->add_option("--g", m.g, "interaction strength g [E0 L]")->capture_default_str();
    app->add_option("--b", m.b, "barrier strength b [E0 L]")->capture_default_str();
    app->add_option("--omega", m.omega, "rotational phase, e.g. 3.14, pi, 0.9pi")->capture_default_str();
    app->add_option("--coupling", m.coupling, "interaction rescaling: leading | identity")
        ->capture_default_str();
}

json params_json(const SystemParams& p) {
    json j;
    j["N"] = p.n_atoms();
    j["r"] = p.n_modes();
    j["g"] = p.interaction();
    j["b"] = p.barrier();
    j["omega"] = p.phase();
    return j;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return digest_hex(data);
}

// Resolved configuration and its digest; the digest excludes timestamps so
// identical runs reference identical manifests.
struct Manifest {
    std::string command;
    std::string config;
    std::string digest;
    json parameters;

    json to_json(const Globals& g) const {
        json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["command"] = command;
        j["digest"] = digest;
        j["seed"] = g.seed;
        j["parameters"] = parameters;
        j["config"] = config;
        j["config_file"] = g.config_file.empty() ? json() : json(g.config_file);
        j["config_file_digest"] = g.config_file.empty() ? json() : json(file_digest(g.config_file));
        j["created_utc"] = utc_now();
        return j;
    }
};

class Output {
public:
    Output(const Globals& g, std::ostream& fallback) : path_(g.output) {
        if (!path_.empty()) {
            file_.open(path_);
            if (!file_) throw std::runtime_error("cannot open output file " + path_);
        }
        os_ = path_.empty() ? &fallback : &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* os_;
};

void write_manifest(const Globals& g, const Manifest& m) {
    std::string path = g.manifest;
    if (path.empty() && !g.output.empty()) path = g.output + ".manifest.json";
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest " + path);
    out << m.to_json(g).dump(2) << '\n';
}

// Flat key/value text of the global options and the chosen subcommand, in
// the format --config reads back.
std::string resolved_config(const CLI::App& app, const CLI::App& sub) {
    std::ostringstream os;
    auto emit = [&](const CLI::App& a, const std::string& prefix) {
        for (const CLI::Option* o : a.get_options()) {
            if (!o->get_configurable() || o->get_lnames().empty()) continue;
            const std::string& name = o->get_lnames().front();
            if (name == "help" || name == "help-all") continue;
            std::string value;
            if (o->count() > 0) {
                const auto& r = o->results();
                if (r.size() == 1) {
                    value = r.front();
                } else {
                    value = "[";
                    for (std::size_t i = 0; i < r.size(); ++i) value += (i ? "," : "") + r[i];
                    value += "]";
                }
            } else {
                value = o->get_default_str();
            }
            if (value.empty()) continue;
            os << prefix << name << '=' << value << '\n';
        }
    };
    emit(app, "");
    emit(sub, sub.get_name() + ".");
    return os.str();
}

std::string csv_header(const Manifest& m) { return "# manifest " + m.digest + " (" + kToolName + " " + m.command + ")\n"; }

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::string figure;
    std::string param = "g";
    std::string grid = "log";
    double from = 1e-4;
    double to = 1e3;
    int points = 60;
    ModelArgs model;
    bool loss = false;
    std::string weighting = "pre";
    bool no_warm_start = false;
    int k1 = 0;
    std::optional<int> k2;
    std::optional<double> hold_gamma;
    std::vector<std::string> modes_for_atoms;
    std::string cache_dir;
};

LossWeighting parse_weighting(const std::string& w) {
    if (w == "pre") return LossWeighting::pre_loss;
    if (w == "post") return LossWeighting::post_loss;
    throw InvalidArgument("weighting must be 'pre' or 'post'");
}

// Preset values fill only options the user did not give.
void apply_preset(CLI::App* sub, const std::string& name, const std::map<std::string, std::string>& values) {
    for (const auto& [opt, value] : values) {
        auto* o = sub->get_option(opt);
        if (o->count() == 0) {
            o->clear();
            o->add_result(value);
            o->run_callback();
        }
    }
    (void)name;
}

const std::map<std::string, std::map<std::string, std::string>>& sweep_presets() {
    static const std::map<std::string, std::map<std::string, std::string>> p = {
        {"fig2",
         {{"--param", "g"}, {"--grid", "log"}, {"--from", "1e-4"}, {"--to", "1e3"}, {"--points", "60"},
          {"--atoms", "5"}, {"--modes", "20"}, {"--b", "0.008"}, {"--omega", "pi"}}},
        {"fig3",
         {{"--param", "g"}, {"--grid", "log"}, {"--from", "1e-4"}, {"--to", "1e3"}, {"--points", "60"},
          {"--atoms", "5"}, {"--modes", "20"}, {"--b", "0.008"}, {"--omega", "pi"}, {"--loss", "true"}}},
        {"fig3a",
         {{"--param", "N"}, {"--grid", "linear"}, {"--from", "2"}, {"--to", "6"}, {"--points", "5"},
          {"--modes", "20"}, {"--b", "0.008"}, {"--omega", "pi"}, {"--loss", "true"},
          {"--hold-gamma", "200"}, {"--modes-for-atoms", "6:14"}}},
    };
    return p;
}

SweepSpec build_sweep_spec(const SweepArgs& a, const Globals& g) {
    SweepSpec s;
    s.parameter = parse_sweep_parameter(a.param);
    s.grid = {parse_grid_kind(a.grid), a.from, a.to, a.points};
    s.base = a.model.params();
    s.order = a.model.order();
    s.loss = a.loss;
    s.loss_options.weighting = parse_weighting(a.weighting);
    s.target_k1 = a.k1;
    s.target_k2 = a.k2;
    s.hold_gamma = a.hold_gamma;
    for (const auto& item : a.modes_for_atoms) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw InvalidArgument("--modes-for-atoms expects N:r");
        s.modes_for_atoms[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
    }
    s.warm_start = !a.no_warm_start;
    s.threads = g.threads;
    s.solver.tol = g.tol;
    s.solver.seed = g.seed;
    if (!a.cache_dir.empty()) s.cache_dir = a.cache_dir;
    s.validate();
    return s;
}

json sweep_params_json(const SweepSpec& s) {
    json j = params_json(s.base);
    j["param"] = to_string(s.parameter);
    j["grid"] = to_string(s.grid.kind);
    j["from"] = s.grid.first;
    j["to"] = s.grid.last;
    j["points"] = s.grid.count;
    j["coupling"] = to_string(s.order);
    j["loss"] = s.loss;
    j["warm_start"] = s.warm_start;
    j["tol"] = s.solver.tol;
    return j;
}

int run_sweep_command(const SweepSpec& spec, const Manifest& m, const Globals& g, std::ostream& out,
                      std::ostream& err) {
    const auto records = run_sweep(spec);
    Output o(g, out);
    o.stream() << sweep_csv(spec, records, m.digest);
    write_manifest(g, m);
    int failed = 0;
    for (const auto& r : records) {
        if (!r.ok) {
            ++failed;
            err << "point " << fmt17(r.param) << " failed: " << r.error << '\n';
        }
    }
    return failed ? kExitNoConvergence : kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
    ModelArgs model;
    int levels = 4;
    std::string omega_from = "0";
    std::string omega_to = "2pi";
    int points = 41;
};

int run_spectrum(const SpectrumArgs& a, const Manifest& m, const Globals& g, std::ostream& out) {
    const auto base = a.model.params();
    if (a.levels < 1) throw InvalidArgument("--levels must be >= 1");
    const Grid grid{GridKind::linear, parse_angle(a.omega_from), parse_angle(a.omega_to), a.points};
    const auto omegas = grid.values();
    const RingModel model(base.n_atoms(), base.n_modes());
    SolverOptions opt;
    opt.tol = g.tol;
    opt.seed = g.seed;
    Output o(g, out);
    auto& os = o.stream();
    os << csv_header(m) << "# omega [rad]; E_i: i-th lowest level [E0]\nomega";
    for (int i = 0; i < a.levels; ++i) os << ",E" << i;
    os << '\n';
    for (double w : omegas) {
        const auto p = base.with_phase(w);
        const auto sol = solve_point(model, p, a.model.order(), a.levels, opt).solution;
        opt.initial_vectors = sol.eigenvectors;
        os << fmt17(w);
        for (double e : sol.eigenvalues) os << ',' << fmt17(e);
        os << '\n';
    }
    write_manifest(g, m);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// single-particle

struct SingleArgs {
    double b = 0.008;
    std::string omega = "pi";
    int levels = 6;
    int tg_atoms = 0;
    double b_from = 1e-4;
    double b_to = 1e3;
    int points = 0;
    bool allow_even = false;
};

int run_single(const SingleArgs& a, const Manifest& m, const Globals& g, std::ostream& out,
               std::ostream& err) {
    Output o(g, out);
    auto& os = o.stream();
    os << csv_header(m);
    if (a.tg_atoms == 0) {
        const auto lv = levels(a.b, parse_angle(a.omega), a.levels);
        os << "# mu; alpha; energy = alpha^2 [E0]\nmu,alpha,energy\n";
        for (std::size_t i = 0; i < lv.alpha.size(); ++i) {
            os << i << ',' << fmt17(lv.alpha[i]) << ',' << fmt17(lv.energy[i]) << '\n';
        }
    } else {
        TonksOptions t;
        t.allow_even_n = a.allow_even;
        if (a.allow_even && a.tg_atoms % 2 == 0) {
            err << "warning: even N uses naive level filling; the ring boundary condition is not treated\n";
        }
        std::vector<double> bs{a.b};
        if (a.points > 0) bs = Grid{GridKind::logarithmic, a.b_from, a.b_to, a.points}.values();
        os << "# Tonks-Girardeau gap at omega = pi for N = " << a.tg_atoms
           << "; b [E0 L]; tg_gap, tg_ground_energy [E0]; gap_over_b dimensionless\n"
           << "b,tg_gap,tg_ground_energy,gap_over_b\n";
        for (double b : bs) {
            const double gap = tg_gap(a.tg_atoms, b, t);
            os << fmt17(b) << ',' << fmt17(gap) << ',' << fmt17(tg_ground_energy(a.tg_atoms, b)) << ','
               << fmt17(b > 0 ? gap / b : std::nan("")) << '\n';
        }
    }
    write_manifest(g, m);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// noon

struct NoonArgs {
    std::string figure;
    int atoms_from = 2;
    int atoms_to = 12;
    double b = 0.008;
    std::optional<double> g;
    double threshold = 10.0;
    int ed_max_atoms = 0;
    int ed_modes = 20;
};

int run_noon(const NoonArgs& a, const Manifest& m, const Globals& g, std::ostream& out) {
    if (a.atoms_from < 2 || a.atoms_to < a.atoms_from) throw InvalidArgument("need 2 <= atoms-from <= atoms-to");
    SolverOptions opt;
    opt.tol = g.tol;
    opt.seed = g.seed;
    Output o(g, out);
    auto& os = o.stream();
    os << csv_header(m)
       << "# g [E0 L] (default 4 pi b sqrt(N)/(N-1)); gaps [E0]; ratios dimensionless; ed_gap nan when not run\n"
       << "N,g,chain_gap,closed_form,closed_over_chain,ratio_barrier,ratio_interaction,condition_met,ed_gap\n";
    for (int n = a.atoms_from; n <= a.atoms_to; ++n) {
        const double gn = a.g.value_or(4.0 * kPi * a.b * std::sqrt(double(n)) / (n - 1));
        const double chain = chain_gap_numeric(n, gn, a.b);
        const double closed = noon_gap_closed_form(n, gn, a.b);
        const auto v = noon_validity(n, gn, a.b, a.threshold);
        double ed = std::nan("");
        if (n <= a.ed_max_atoms) ed = level_splitting(SystemParams(n, a.ed_modes, gn, a.b, kPi), CouplingOrder::leading, opt);
        os << n << ',' << fmt17(gn) << ',' << fmt17(chain) << ',' << fmt17(closed) << ',' << fmt17(closed / chain)
           << ',' << fmt17(v.ratio_barrier) << ',' << fmt17(v.ratio_interaction) << ',' << (v.condition_met ? 1 : 0)
           << ',' << fmt17(ed) << '\n';
    }
    write_manifest(g, m);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// loss

struct LossArgs {
    ModelArgs model;
    std::string weighting = "pre";
    int k1 = 0;
    std::optional<int> k2;
    bool distributions = false;
};

int run_loss(const LossArgs& a, const Manifest& m, const Globals& g, std::ostream& out) {
    const auto p = a.model.params();
    if (p.n_atoms() < 2) throw InvalidArgument("loss needs N >= 2");
    SolverOptions opt;
    opt.tol = g.tol;
    opt.seed = g.seed;
    const RingModel model(p.n_atoms(), p.n_modes());
    const FockBasis lost(p.n_atoms() - 1, p.n_modes());
    const auto pt = solve_point(model, p, a.model.order(), 2, opt);
    const auto& psi = pt.solution.eigenvectors[0];
    const auto dist = angular_momentum_distribution(psi, model.basis());
    LossOptions lo;
    lo.weighting = parse_weighting(a.weighting);
    lo.keep_distributions = a.distributions;
    const auto rep = loss_quality(psi, model.basis(), lost, lo);
    const int k2 = a.k2.value_or(p.n_atoms());

    auto dist_json = [](const AngularMomentumDistribution& d) {
        json arr = json::array();
        for (int K = d.min_K(); K <= d.max_K(); ++K) {
            if (d(K) > 0.0) arr.push_back({{"K", K}, {"P", d(K)}});
        }
        return arr;
    };
    json j;
    j["manifest"] = m.digest;
    j["parameters"] = params_json(p);
    j["g_tilde"] = pt.coupling.g_tilde;
    j["E0_level"] = pt.solution.eigenvalues[0];
    j["E1_level"] = pt.solution.eigenvalues[1];
    j["deltaE"] = pt.gap();
    j["K1"] = a.k1;
    j["K2"] = k2;
    j["Q"] = quality(dist, a.k1, k2);
    j["distribution"] = dist_json(dist);
    j["weighting"] = a.weighting;
    j["occupation_sum"] = rep.occupation_sum;
    j["Qbar_loss"] = rep.mean_quality;
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json je{{"k", e.momentum}, {"occupation", e.occupation}, {"weight", e.weight}, {"Q_k", e.quality},
                {"skipped", e.skipped}};
        if (a.distributions && !e.skipped) je["distribution"] = dist_json(e.after);
        entries.push_back(je);
    }
    j["entries"] = entries;
    Output o(g, out);
    o.stream() << j.dump(2) << '\n';
    write_manifest(g, m);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dynamics

struct DynamicsArgs {
    int atoms = 3;
    int modes = 8;
    double g = 10.0;
    double b = 0.008;
    std::string omega_from = "0.9pi";
    std::string omega_to = "pi";
    double periods = 10.0;
    int samples_per_period = 64;
    int K = 0;
    int krylov = 20;
    double step_tol = 1e-12;
    std::string coupling = "leading";
};

int run_dynamics(const DynamicsArgs& a, const Manifest& m, const Globals& g, std::ostream& out) {
    ModelArgs ma;
    ma.coupling = a.coupling;
    const SystemParams pre(a.atoms, a.modes, a.g, a.b, parse_angle(a.omega_from));
    const auto post = pre.with_phase(parse_angle(a.omega_to));
    if (!(a.periods > 0.0) || a.samples_per_period < 4) throw InvalidArgument("need periods > 0, samples-per-period >= 4");
    SolverOptions opt;
    opt.tol = g.tol;
    opt.seed = g.seed;
    const RingModel model(a.atoms, a.modes);
    const auto before = solve_point(model, pre, ma.order(), 1, opt);
    const auto after = solve_point(model, post, ma.order(), 2, opt);
    const double gap = after.gap();
    if (!(gap > 0.0)) throw InvalidArgument("post-quench levels are degenerate; no oscillation to resolve");
    const double period = 2.0 * kPi / gap;
    const double dt = period / a.samples_per_period;
    const auto count = static_cast<std::size_t>(std::ceil(a.periods * a.samples_per_period)) + 1;
    const auto times = uniform_times(dt, count);
    PropagatorOptions po;
    po.krylov_dim = a.krylov;
    po.tol = a.step_tol;
    const auto h = model.hamiltonian(post, after.coupling);
    const auto q = quench(model.basis(), h, before.solution.eigenvectors[0], times, a.K, po);
    const double w = dominant_angular_frequency(q.p_K, dt);
    double drift = 0.0;
    for (double n : q.norm) drift = std::max(drift, std::abs(n - 1.0));

    Output o(g, out);
    auto& os = o.stream();
    os << csv_header(m) << "# post-quench deltaE " << fmt17(gap) << " [E0]; dominant angular frequency "
       << fmt17(w) << " [E0/hbar]; relative difference " << fmt17(w / gap - 1.0) << "; max norm drift "
       << fmt17(drift) << "; substeps " << q.stats.substeps << "\n"
       << "# t [hbar/E0]; P_K0 = P(K = " << a.K << "); norm = ||psi||^2\n"
       << "t,P_K0,norm\n";
    for (std::size_t i = 0; i < q.times.size(); ++i) {
        os << fmt17(q.times[i]) << ',' << fmt17(q.p_K[i]) << ',' << fmt17(q.norm[i]) << '\n';
    }
    write_manifest(g, m);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// units

struct UnitsArgs {
    int atoms = 100;
    std::string species = "mass=7u";
    double radius = 50e-6;
    double delta_e = 25.0;
};

int run_units(const UnitsArgs& a, const Manifest& m, const Globals& g, std::ostream& out) {
    const PhysicalRing ring(parse_species_mass(a.species), a.radius);
    const SystemParams p(a.atoms, 2, 0.0, 0.0, kPi);
    const auto rep = to_physical(p, ring, a.delta_e);
    auto j = json::parse(rep.to_json());
    j["manifest"] = m.digest;
    Output o(g, out);
    o.stream() << j.dump(2) << '\n';
    write_manifest(g, m);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Check> oracle_suite(const Globals& g) {
    std::vector<Check> c;
    auto add = [&](std::string name, bool pass, std::string detail) { c.push_back({std::move(name), pass, std::move(detail)}); };
    SolverOptions opt;
    opt.tol = g.tol;
    opt.seed = g.seed;

    {
        double worst = 0.0;
        for (double e = -3.0; e <= 3.0; e += 0.5) {
            const double gg = std::pow(10.0, e);
            worst = std::max(worst, std::abs(bethe_ground_energy(2, gg).energy - two_particle_exact(gg)));
        }
        add("two-particle vs Bethe (N=2, g in 1e-3..1e3)", worst < 1e-9, "max |diff| " + fmt17(worst));
    }
    {
        const double e = bethe_ground_energy(5, 1e9).energy;
        add("Bethe N=5 fermionized limit = 10", std::abs(e - 10.0) < 1e-6, "E " + fmt17(e));
    }
    for (double gg : {0.01, 0.1, 1.0, 10.0}) {
        const auto t = truncation_validation(gg, 20);
        add("rescaling beats bare coupling 5x (N=2, r=20, g=" + fmt17(gg) + ")",
            t.rescaled_error * 5.0 <= t.unscaled_error,
            "rescaled " + fmt17(t.rescaled_error) + ", unscaled " + fmt17(t.unscaled_error));
    }
    {
        const SystemParams p(5, 8, 0.0, 0.008, kPi);
        const RingModel model(5, 8);
        const auto sol = solve_point(model, p, CouplingOrder::leading, 2, opt).solution;
        const auto d = angular_momentum_distribution(sol.eigenvectors[0], model.basis());
        const double tv = total_variation(d, binomial_PK(5));
        add("binomial P(K) at g=0 (N=5, r=8)", tv < 1e-3, "total variation " + fmt17(tv));
        double asym = 0.0;
        for (int K = 0; K <= 5; ++K) asym = std::max(asym, std::abs(d(K) - d(5 - K)));
        add("P(K) = P(N-K) at omega=pi", asym < 1e-10, "max |diff| " + fmt17(asym));
    }
    {
        const RingModel model(3, 6);
        const SystemParams p(3, 6, 0.7, 0.05, 0.8);
        const auto h = model.hamiltonian(p, coupling_for(p, CouplingOrder::leading));
        double worst = 0.0;
        for (std::size_t i = 0; i < h.rows(); ++i) {
            const auto rp = h.row_ptr();
            for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
                worst = std::max(worst, std::abs(h.values()[k] - h.entry(h.col_idx()[k], i)));
            }
        }
        add("Hamiltonian symmetric", worst == 0.0, "max |H_ij - H_ji| " + fmt17(worst));
        const auto h0 = model.hamiltonian(p.with_barrier(0.0), coupling_for(p, CouplingOrder::leading));
        bool blocked = true;
        for (std::size_t i = 0; i < h0.rows(); ++i) {
            const auto rp = h0.row_ptr();
            for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
                blocked = blocked && model.basis().total_K(i) == model.basis().total_K(h0.col_idx()[k]);
            }
        }
        add("K-block structure at b=0", blocked, blocked ? "no cross-sector entries" : "cross-sector entries found");
    }
    {
        const double gap = tg_gap(5, 1e3);
        add("maximum TG gap (N=5, b=1e3) -> 2.75", std::abs(gap / 2.75 - 1.0) < 0.01, "gap " + fmt17(gap));
    }
    {
        double worst = 0.0;
        for (int n = 2; n <= 8; ++n) {
            const double gg = 4.0 * kPi * 0.008 * std::sqrt(double(n)) / (n - 1);
            worst = std::max(worst, std::abs(noon_gap_closed_form(n, gg, 0.008) / chain_gap_numeric(n, gg, 0.008) - 1.0));
        }
        add("NOON closed form vs chain (N=2..8)", worst < 0.1, "max relative diff " + fmt17(worst));
    }
    return c;
}

int run_validate(const Globals& g, std::ostream& out) {
    const auto checks = oracle_suite(g);
    int failed = 0;
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failed += c.pass ? 0 : 1;
    }
    out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return failed ? kExitNoConvergence : kExitOk;
}

void report_error(std::ostream& err, bool as_json, const std::string& kind, const std::string& message, int code) {
    if (as_json) {
        json j{{"error", kind}, {"message", message}, {"exit_code", code}};
        err << j.dump() << '\n';
    } else {
        err << "error: " << message << '\n';
    }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bosons on a ring with a rotating barrier: exact diagonalization and analytic references",
                 kToolName};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<ManifestConfig>());
    Globals g;
    app.set_config("--config", "", "flat key/value config with [subcommand] sections, or a manifest JSON")
        ->configurable(false);
    app.add_option("--seed", g.seed, "solver start-vector seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for sweeps without warm start")->capture_default_str();
    app.add_option("--tol", g.tol, "eigenpair residual tolerance")->capture_default_str();
    app.add_option("--output,-o", g.output, "write data here instead of stdout")->configurable(false);
    app.add_option("--manifest", g.manifest, "manifest path (default: <output>.manifest.json)")
        ->configurable(false);
    app.add_flag("--dry-run", g.dry_run, "print the resolved manifest and exit")->configurable(false);
    app.add_flag("--error-json", g.error_json, "report errors as JSON on stderr")->configurable(false);

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "parameter sweep of the level splitting and P(K)");
    sweep->add_option("--figure", sw.figure, "preset: fig2 | fig3 | fig3a")
        ->check(CLI::IsMember({"fig2", "fig3", "fig3a"}));
    sweep->add_option("--param", sw.param, "swept parameter: g | omega | b | N | r")->capture_default_str();
    sweep->add_option("--grid", sw.grid, "linear | log")->capture_default_str();
    sweep->add_option("--from", sw.from, "first grid value")->capture_default_str();
    sweep->add_option("--to", sw.to, "last grid value")->capture_default_str();
    sweep->add_option("--points", sw.points, "grid points")->capture_default_str();
    add_model_options(sweep, sw.model);
    sweep->add_flag("--loss", sw.loss, "also compute the mean quality after one-atom loss");
    sweep->add_option("--weighting", sw.weighting, "loss weights: pre | post")->capture_default_str();
    sweep->add_flag("--no-warm-start", sw.no_warm_start, "solve every point from a fresh start block");
    sweep->add_option("--K1", sw.k1, "first target momentum of Q")->capture_default_str();
    sweep->add_option("--K2", sw.k2, "second target momentum of Q (default N)");
    sweep->add_option("--hold-gamma", sw.hold_gamma, "for N sweeps: keep gamma fixed");
    sweep->add_option("--modes-for-atoms", sw.modes_for_atoms, "window override per N, e.g. 6:14");
    sweep->add_option("--cache-dir", sw.cache_dir, std::string("point cache (default $") + kCacheDirEnv + ")");

    SpectrumArgs sp;
    auto* spectrum = app.add_subcommand("spectrum", "lowest levels over a phase grid");
    add_model_options(spectrum, sp.model);
    spectrum->add_option("--levels", sp.levels, "levels per phase")->capture_default_str();
    spectrum->add_option("--omega-from", sp.omega_from, "first phase")->capture_default_str();
    spectrum->add_option("--omega-to", sp.omega_to, "last phase")->capture_default_str();
    spectrum->add_option("--points", sp.points, "phase points")->capture_default_str();

    SingleArgs si_args;
    auto* single = app.add_subcommand("single-particle", "single-particle levels and Tonks-Girardeau gaps");
    single->add_option("--b", si_args.b, "barrier strength [E0 L]")->capture_default_str();
    single->add_option("--omega", si_args.omega, "rotational phase")->capture_default_str();
    single->add_option("--levels", si_args.levels, "number of levels")->capture_default_str();
    single->add_option("--tg-atoms", si_args.tg_atoms, "print the TG gap table for this N instead of levels");
    single->add_option("--b-from", si_args.b_from, "TG table: first b")->capture_default_str();
    single->add_option("--b-to", si_args.b_to, "TG table: last b")->capture_default_str();
    single->add_option("--points", si_args.points, "TG table: log-spaced b points (0: only --b)")
        ->capture_default_str();
    single->add_flag("--allow-even", si_args.allow_even, "allow even N with naive filling");

    NoonArgs na;
    auto* noon = app.add_subcommand("noon", "two-mode chain vs closed-form NOON gap");
    noon->add_option("--figure", na.figure, "preset: fig4")->check(CLI::IsMember({"fig4"}));
    noon->add_option("--atoms-from", na.atoms_from)->capture_default_str();
    noon->add_option("--atoms-to", na.atoms_to)->capture_default_str();
    noon->add_option("--b", na.b, "barrier strength [E0 L]")->capture_default_str();
    noon->add_option("--g", na.g, "fixed interaction (default 4 pi b sqrt(N)/(N-1))");
    noon->add_option("--threshold", na.threshold, "factor used for 'much less than'")->capture_default_str();
    noon->add_option("--ed-max-atoms", na.ed_max_atoms, "also run full ED up to this N (0: off)")
        ->capture_default_str();
    noon->add_option("--ed-modes", na.ed_modes, "window for the ED column")->capture_default_str();

    LossArgs la;
    la.model.g = 50.66;
    auto* loss = app.add_subcommand("loss", "loss-robustness report for one parameter point");
    add_model_options(loss, la.model);
    loss->add_option("--weighting", la.weighting, "pre | post")->capture_default_str();
    loss->add_option("--K1", la.k1)->capture_default_str();
    loss->add_option("--K2", la.k2, "default N");
    loss->add_flag("--distributions", la.distributions, "include post-loss distributions");

    DynamicsArgs da;
    auto* dyn = app.add_subcommand("dynamics", "phase quench and coherent oscillation of P(K)");
    dyn->add_option("--atoms,-N", da.atoms)->capture_default_str();
    dyn->add_option("--modes,-r", da.modes)->capture_default_str();
    dyn->add_option("--g", da.g)->capture_default_str();
    dyn->add_option("--b", da.b)->capture_default_str();
    dyn->add_option("--omega-from", da.omega_from, "phase before the quench")->capture_default_str();
    dyn->add_option("--omega-to", da.omega_to, "phase after the quench")->capture_default_str();
    dyn->add_option("--periods", da.periods, "duration in post-quench oscillation periods")->capture_default_str();
    dyn->add_option("--samples-per-period", da.samples_per_period)->capture_default_str();
    dyn->add_option("--K", da.K, "recorded total momentum")->capture_default_str();
    dyn->add_option("--krylov", da.krylov, "Krylov subspace dimension")->capture_default_str();
    dyn->add_option("--step-tol", da.step_tol, "local error per substep")->capture_default_str();
    dyn->add_option("--coupling", da.coupling, "leading | identity")->capture_default_str();

    UnitsArgs ua;
    auto* units = app.add_subcommand("units", "laboratory-unit conversion report");
    units->add_option("--atoms", ua.atoms)->capture_default_str();
    units->add_option("--species", ua.species, "mass=7u, mass=<kg>kg or an isotope such as Li7")
        ->capture_default_str();
    units->add_option("--radius", ua.radius, "ring radius [m]")->capture_default_str();
    units->add_option("--deltaE", ua.delta_e, "level splitting [E0]")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "run the oracle self-test suite");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, g.error_json, "invalid_arguments", e.what(), kExitInvalid);
        return kExitInvalid;
    }
    if (auto* cfg = app.get_config_ptr(); cfg && cfg->count() > 0) g.config_file = cfg->as<std::string>();

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub == sweep && !sw.figure.empty()) apply_preset(sweep, sw.figure, sweep_presets().at(sw.figure));
        if (sub == noon && na.figure == "fig4") {
            apply_preset(noon, na.figure, {{"--atoms-from", "2"}, {"--atoms-to", "12"}, {"--b", "0.008"}});
        }

        Manifest m;
        m.command = sub->get_name();
        m.config = resolved_config(app, *sub);
        m.digest = digest_hex(std::string(kToolName) + kToolVersion + "\n" + m.config);

        std::optional<SweepSpec> spec;
        if (sub == sweep) {
            spec = build_sweep_spec(sw, g);
            m.parameters = sweep_params_json(*spec);
        } else if (sub == loss) {
            m.parameters = params_json(la.model.params());
        } else if (sub == spectrum) {
            m.parameters = params_json(sp.model.params());
        } else {
            m.parameters = json::object();
        }
        if (g.dry_run) {
            out << m.to_json(g).dump(2) << '\n';
            return kExitOk;
        }
        if (sub == sweep) return run_sweep_command(*spec, m, g, out, err);
        if (sub == spectrum) return run_spectrum(sp, m, g, out);
        if (sub == single) return run_single(si_args, m, g, out, err);
        if (sub == noon) return run_noon(na, m, g, out);
        if (sub == loss) return run_loss(la, m, g, out);
        if (sub == dyn) return run_dynamics(da, m, g, out);
        if (sub == units) return run_units(ua, m, g, out);
        if (sub == validate) return run_validate(g, out);
        return kExitInvalid;
    } catch (const DimensionCapExceeded& e) {
        report_error(err, g.error_json, "dimension_cap", e.what(), kExitDimensionCap);
        return kExitDimensionCap;
    } catch (const ConvergenceError& e) {
        report_error(err, g.error_json, "no_convergence", e.what(), kExitNoConvergence);
        return kExitNoConvergence;
    } catch (const InvalidArgument& e) {
        report_error(err, g.error_json, "invalid_arguments", e.what(), kExitInvalid);
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        report_error(err, g.error_json, "invalid_arguments", e.what(), kExitInvalid);
        return kExitInvalid;
    } catch (const std::exception& e) {
        report_error(err, g.error_json, "failure", e.what(), kExitFailure);
        return kExitFailure;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace ringsim
