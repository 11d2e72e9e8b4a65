#include "ringsim/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/format.hpp"
#include "ringsim/pipeline.hpp"

namespace ringsim {

std::vector<double> Grid::values() const {
    if (count < 1) throw InvalidArgument("grid needs at least one point");
    if (!std::isfinite(first) || !std::isfinite(last)) throw InvalidArgument("grid endpoints must be finite");
    if (count > 1 && first == last) throw InvalidArgument("grid must be strictly monotone");
    if (kind == GridKind::logarithmic && !(first > 0.0 && last > 0.0)) {
        throw InvalidArgument("logarithmic grid needs positive endpoints");
    }
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = first;
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / (count - 1);
        if (kind == GridKind::linear) {
            v[i] = first + s * (last - first);
        } else {
            v[i] = std::exp(std::log(first) + s * (std::log(last) - std::log(first)));
        }
    }
    v.front() = first;
    v.back() = last;
    return v;
}

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::interaction: return "g";
        case SweepParameter::phase: return "omega";
        case SweepParameter::barrier: return "b";
        case SweepParameter::atoms: return "N";
        case SweepParameter::modes: return "r";
    }
    return "?";
}

std::string to_string(GridKind k) { return k == GridKind::linear ? "linear" : "log"; }

SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "g" || name == "interaction") return SweepParameter::interaction;
    if (name == "omega" || name == "phase") return SweepParameter::phase;
    if (name == "b" || name == "barrier") return SweepParameter::barrier;
    if (name == "N" || name == "atoms") return SweepParameter::atoms;
    if (name == "r" || name == "modes") return SweepParameter::modes;
    throw InvalidArgument("unknown sweep parameter '" + name + "'");
}

GridKind parse_grid_kind(const std::string& name) {
    if (name == "linear" || name == "lin") return GridKind::linear;
    if (name == "log" || name == "logarithmic") return GridKind::logarithmic;
    throw InvalidArgument("unknown grid kind '" + name + "'");
}

namespace {

int as_integer(double v, const char* what) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) throw InvalidArgument(std::string(what) + " grid values must be integers");
    return static_cast<int>(r);
}

}  // namespace

SystemParams SweepSpec::point(double value) const {
    switch (parameter) {
        case SweepParameter::interaction: return base.with_interaction(value);
        case SweepParameter::phase: return base.with_phase(value);
        case SweepParameter::barrier: return base.with_barrier(value);
        case SweepParameter::modes: return base.with_modes(as_integer(value, "mode"));
        case SweepParameter::atoms: {
            const int n = as_integer(value, "atom");
            auto p = base.with_atoms(n);
            if (auto it = modes_for_atoms.find(n); it != modes_for_atoms.end()) p = p.with_modes(it->second);
            if (hold_gamma) p = p.with_interaction(*hold_gamma * n / (2.0 * kPi * kPi));
            return p;
        }
    }
    throw InvalidArgument("unknown sweep parameter");
}

void SweepSpec::validate() const {
    for (double v : grid.values()) (void)point(v);
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
    if (order == CouplingOrder::energy_corrected) {
        throw InvalidArgument("sweeps support identity or leading-order coupling");
    }
}

namespace {

struct CacheKey {
    std::string text;

    CacheKey(const SystemParams& p, double g_tilde, const SweepSpec& spec, int k2) {
        std::ostringstream os;
        os << "N=" << p.n_atoms() << ";r=" << p.n_modes() << ";gt=" << fmt17(g_tilde)
           << ";b=" << fmt17(p.barrier()) << ";omega=" << fmt17(p.phase())
           << ";tol=" << fmt17(spec.solver.tol) << ";seed=" << spec.solver.seed
           << ";K1=" << spec.target_k1 << ";K2=" << k2;
        text = os.str();
    }
    std::string file() const { return "pt-" + digest_hex(text) + ".json"; }
};

class PointCache {
public:
    explicit PointCache(std::optional<std::string> dir) {
        if (!dir) {
            if (const char* env = std::getenv(kCacheDirEnv); env && *env) dir = env;
        }
        if (dir && !dir->empty()) {
            dir_ = *dir;
            std::filesystem::create_directories(dir_);
        }
    }

    bool enabled() const { return !dir_.empty(); }

    // Fills the numeric fields of rec; false on miss or when loss data is
    // needed but was not stored.
    bool load(const CacheKey& key, bool need_loss, SweepRecord& rec) const {
        if (!enabled()) return false;
        std::ifstream in(std::filesystem::path(dir_) / key.file());
        if (!in) return false;
        nlohmann::json j;
        try {
            in >> j;
            if (j.at("key").get<std::string>() != key.text) return false;
            if (need_loss && j.at("qbar_loss").is_null()) return false;
            auto num = [&](const char* k) { return std::stod(j.at(k).get<std::string>()); };
            rec.e0 = num("e0");
            rec.e1 = num("e1");
            rec.p_k1 = num("p_k1");
            rec.p_k2 = num("p_k2");
            rec.residual = num("residual");
            rec.iterations = j.at("iterations").get<int>();
            rec.degenerate = j.at("degenerate").get<bool>();
            if (need_loss) rec.qbar_loss = num("qbar_loss");
        } catch (const std::exception&) {
            return false;
        }
        rec.cached = true;
        return true;
    }

    void store(const CacheKey& key, const SweepRecord& rec, bool has_loss) const {
        if (!enabled()) return;
        // values as 17-digit strings so they round-trip bit for bit
        nlohmann::ordered_json j;
        j["key"] = key.text;
        j["e0"] = fmt17(rec.e0);
        j["e1"] = fmt17(rec.e1);
        j["p_k1"] = fmt17(rec.p_k1);
        j["p_k2"] = fmt17(rec.p_k2);
        j["residual"] = fmt17(rec.residual);
        j["iterations"] = rec.iterations;
        j["degenerate"] = rec.degenerate;
        j["qbar_loss"] = has_loss ? nlohmann::ordered_json(fmt17(rec.qbar_loss)) : nlohmann::ordered_json();
        const auto path = std::filesystem::path(dir_) / key.file();
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump(1) << '\n';
        }
        std::filesystem::rename(tmp, path);
    }

private:
    std::string dir_;
};

// Models for each distinct window, built once.
class ModelSet {
public:
    const RingModel& get(int n, int r) {
        std::lock_guard lock(mu_);
        auto& slot = models_[{n, r}];
        if (!slot) slot = std::make_unique<RingModel>(n, r);
        return *slot;
    }
    const FockBasis& loss_basis(int n, int r) {
        std::lock_guard lock(mu_);
        auto& slot = loss_[{n, r}];
        if (!slot) slot = std::make_unique<FockBasis>(n, r);
        return *slot;
    }
    void drop_except(int n, int r) {
        std::lock_guard lock(mu_);
        std::erase_if(models_, [&](const auto& kv) { return kv.first != std::pair{n, r}; });
        std::erase_if(loss_, [&](const auto& kv) { return kv.first != std::pair{n - 1, r}; });
    }

private:
    std::mutex mu_;
    std::map<std::pair<int, int>, std::unique_ptr<RingModel>> models_;
    std::map<std::pair<int, int>, std::unique_ptr<FockBasis>> loss_;
};

void fill_failure(SweepRecord& rec, const std::string& message) {
    const double nan = std::nan("");
    rec.ok = false;
    rec.error = message;
    rec.e0 = rec.e1 = rec.delta_e = rec.p_k1 = rec.p_k2 = rec.quality = rec.qbar_loss = nan;
    rec.residual = nan;
}

SweepRecord evaluate(const SweepSpec& spec, double value, ModelSet& models, const PointCache& cache,
                     const std::vector<std::vector<double>>* warm,
                     std::vector<std::vector<double>>* vectors_out) {
    const auto start = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.param = value;
    rec.qbar_loss = std::nan("");
    try {
        const auto p = spec.point(value);
        const auto coupling = coupling_for(p, spec.order);
        const int k2 = spec.target_k2.value_or(p.n_atoms());
        rec.n_atoms = p.n_atoms();
        rec.n_modes = p.n_modes();
        rec.gamma = lieb_liniger_gamma(p);
        rec.g_tilde = coupling.g_tilde;
        const CacheKey key(p, coupling.g_tilde, spec, k2);
        if (!cache.load(key, spec.loss, rec)) {
            const auto& model = models.get(p.n_atoms(), p.n_modes());
            auto options = spec.solver;
            if (warm) options.initial_vectors = *warm;
            const auto sol = lowest_eigenpairs(model.hamiltonian(p, coupling), 2, options);
            rec.e0 = sol.eigenvalues.at(0);
            rec.e1 = sol.eigenvalues.at(1);
            rec.iterations = sol.iterations;
            rec.residual = sol.max_residual();
            rec.degenerate = sol.degenerate;
            const auto dist = angular_momentum_distribution(sol.eigenvectors[0], model.basis());
            rec.p_k1 = dist(spec.target_k1);
            rec.p_k2 = dist(k2);
            if (spec.loss) {
                if (p.n_atoms() < 2) throw InvalidArgument("loss metric needs N >= 2");
                const auto& lb = models.loss_basis(p.n_atoms() - 1, p.n_modes());
                rec.qbar_loss =
                    loss_quality(sol.eigenvectors[0], model.basis(), lb, spec.loss_options).mean_quality;
            }
            cache.store(key, rec, spec.loss);
            if (vectors_out) *vectors_out = sol.eigenvectors;
        } else if (vectors_out) {
            vectors_out->clear();
        }
        rec.delta_e = rec.e1 - rec.e0;
        rec.quality = 4.0 * rec.p_k1 * rec.p_k2;
    } catch (const std::exception& e) {
        fill_failure(rec, e.what());
        if (vectors_out) vectors_out->clear();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto grid = spec.grid.values();
    const PointCache cache(spec.cache_dir);
    ModelSet models;
    std::vector<SweepRecord> records(grid.size());

    if (spec.warm_start || spec.threads <= 1) {
        std::vector<std::vector<double>> vectors;
        int last_n = -1;
        int last_r = -1;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            int n = -1;
            int r = -1;
            try {
                const auto p = spec.point(grid[i]);
                n = p.n_atoms();
                r = p.n_modes();
            } catch (const std::exception&) {
            }
            if (n != last_n || r != last_r) {
                vectors.clear();
                models.drop_except(n, r);
                last_n = n;
                last_r = r;
            }
            const bool use_warm = spec.warm_start && !vectors.empty();
            std::vector<std::vector<double>> next;
            records[i] = evaluate(spec, grid[i], models, cache, use_warm ? &vectors : nullptr,
                                  spec.warm_start ? &next : nullptr);
            if (spec.warm_start) vectors = std::move(next);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            records[i] = evaluate(spec, grid[i], models, cache, nullptr, nullptr);
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(spec.threads, static_cast<int>(grid.size()));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRecord>& records,
                      const std::string& manifest_digest) {
    std::ostringstream os;
    os << "# manifest " << manifest_digest << '\n'
       << "# param: swept " << to_string(spec.parameter)
       << "; gamma: Lieb-Liniger parameter; g_tilde, energies [E0 L, E0]; P0 = P(K1), PN = P(K2) with K1 = "
       << spec.target_k1 << ", K2 = " << (spec.target_k2 ? std::to_string(*spec.target_k2) : std::string("N"))
       << "; Q = 4 P0 PN; Qbar_loss: mean quality after one-atom loss (nan if not computed); "
          "iters: matrix-vector products; residual: max ||H v - lambda v||\n"
       << "param,gamma,g_tilde,E0_level,E1_level,deltaE,P0,PN,Q,Qbar_loss,iters,residual\n";
    for (const auto& r : records) {
        os << fmt17(r.param) << ',' << fmt17(r.gamma) << ',' << fmt17(r.g_tilde) << ',' << fmt17(r.e0) << ','
           << fmt17(r.e1) << ',' << fmt17(r.delta_e) << ',' << fmt17(r.p_k1) << ',' << fmt17(r.p_k2) << ','
           << fmt17(r.quality) << ',' << fmt17(r.qbar_loss) << ',' << r.iterations << ',' << fmt17(r.residual)
           << '\n';
    }
    return os.str();
}

}  // namespace ringsim
