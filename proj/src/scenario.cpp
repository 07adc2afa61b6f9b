#include "resmem/scenario.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "resmem/breeding.hpp"
#include "resmem/csv.hpp"
#include "resmem/errors.hpp"
#include "resmem/fock.hpp"
#include "resmem/memory.hpp"
#include "resmem/noise.hpp"
#include "resmem/rates.hpp"
#include "resmem/tomo.hpp"
#include "resmem/wigner.hpp"

namespace resmem {
namespace {

using nlohmann::json;

const std::set<std::string> kKinds = {"pulse", "store", "breed", "wigner", "tomo", "rates", "validate", "figure"};

// Reads typed values from a JSON object, records what was resolved (for the
// manifest) and rejects keys nobody asked for.
class Params {
  public:
    Params(const json &j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
        if (!j_.is_object()) {
            throw ConfigError(ctx_ + ": expected an object");
        }
    }

    bool has(const std::string &key) const { return j_.contains(key); }

    double num(const std::string &key, double def) {
        double v = def;
        if (take(key)) {
            if (!j_[key].is_number()) {
                throw ConfigError(where(key) + ": expected a number");
            }
            v = j_[key].get<double>();
        }
        resolved_[key] = v;
        return v;
    }

    int integer(const std::string &key, int def) {
        int v = def;
        if (take(key)) {
            if (!j_[key].is_number_integer()) {
                throw ConfigError(where(key) + ": expected an integer");
            }
            v = j_[key].get<int>();
        }
        resolved_[key] = v;
        return v;
    }

    bool flag(const std::string &key, bool def) {
        bool v = def;
        if (take(key)) {
            if (!j_[key].is_boolean()) {
                throw ConfigError(where(key) + ": expected a boolean");
            }
            v = j_[key].get<bool>();
        }
        resolved_[key] = v;
        return v;
    }

    std::string str(const std::string &key, const std::string &def, const std::set<std::string> &allowed) {
        std::string v = def;
        if (take(key)) {
            if (!j_[key].is_string()) {
                throw ConfigError(where(key) + ": expected a string");
            }
            v = j_[key].get<std::string>();
        }
        if (!allowed.empty() && !allowed.count(v)) {
            throw ConfigError(where(key) + ": unsupported value '" + v + "'");
        }
        resolved_[key] = v;
        return v;
    }

    std::vector<double> nums(const std::string &key, const std::vector<double> &def) {
        std::vector<double> v = def;
        if (take(key)) {
            if (!j_[key].is_array()) {
                throw ConfigError(where(key) + ": expected an array of numbers");
            }
            v.clear();
            for (const auto &e : j_[key]) {
                if (!e.is_number()) {
                    throw ConfigError(where(key) + ": expected an array of numbers");
                }
                v.push_back(e.get<double>());
            }
        }
        resolved_[key] = v;
        return v;
    }

    // Nested object; the caller must finish() it.
    Params child(const std::string &key) {
        take(key);
        return Params(j_.contains(key) ? j_[key] : empty(), ctx_ + "." + key);
    }

    // Array of objects; each element gets its own Params.
    std::vector<json> objects(const std::string &key, const std::vector<json> &def) {
        if (!take(key)) {
            return def;
        }
        if (!j_[key].is_array()) {
            throw ConfigError(where(key) + ": expected an array of objects");
        }
        return std::vector<json>(j_[key].begin(), j_[key].end());
    }

    void record(const std::string &key, json value) { resolved_[key] = std::move(value); }

    json finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) {
                throw ConfigError("unknown key '" + where(it.key()) + "'");
            }
        }
        return resolved_;
    }

  private:
    static const json &empty() {
        static const json e = json::object();
        return e;
    }
    bool take(const std::string &key) {
        used_.insert(key);
        return j_.contains(key);
    }
    std::string where(const std::string &key) const { return ctx_ + "." + key; }

    const json &j_;
    std::string ctx_;
    std::set<std::string> used_;
    json resolved_ = json::object();
};

Parity parity_from(double s) {
    if (s == 1.0) {
        return Parity::Even;
    }
    if (s == -1.0) {
        return Parity::Odd;
    }
    throw ConfigError("parity s must be +1 or -1");
}

Protocol protocol_from(const std::string &s) { return s == "gkp" ? Protocol::Gkp : Protocol::Cat; }

DensityMatrix make_state(Params &p, int def_dim) {
    const std::string kind = p.str("state", "squeezed_single_photon",
                                   {"vacuum", "fock", "coherent", "cat", "squeezed_single_photon", "squeezed_vacuum",
                                    "gkp_theory", "cat_theory"});
    const int dim = p.integer("dim", def_dim);
    if (kind == "vacuum") {
        return DensityMatrix::pure(FockVector::basis(0, dim));
    }
    if (kind == "fock") {
        return DensityMatrix::pure(FockVector::basis(p.integer("n", 1), dim));
    }
    if (kind == "coherent") {
        return DensityMatrix::pure(coherent_state(Complex(p.num("alpha", 1.0), 0.0), dim));
    }
    if (kind == "cat") {
        return DensityMatrix::pure(cat_state(p.num("alpha", 1.0), parity_from(p.num("s", -1.0)), dim));
    }
    if (kind == "squeezed_single_photon") {
        return DensityMatrix::pure(squeezed_single_photon(p.num("r", 0.5), dim));
    }
    if (kind == "squeezed_vacuum") {
        return DensityMatrix::pure(squeezed_vacuum(p.num("r", 0.5), dim));
    }
    const Protocol proto = kind == "gkp_theory" ? Protocol::Gkp : Protocol::Cat;
    const int k = p.integer("k", 2);
    const double alpha = p.num("alpha", 1.0);
    return DensityMatrix::pure(theoretical_bred_state(k, alpha, parity_from(p.num("s", -1.0)), proto, dim));
}

NoiseParams noise_from(Params &p) {
    NoiseParams n{p.num("T1", 2.3e-6), p.num("Tphi", 0.96e-6)};
    n.validate();
    return n;
}

// Collects output files in memory and writes them, plus the manifest, only
// once the run has finished, so a rejected config leaves nothing behind.
class Emitter {
  public:
    explicit Emitter(std::string dir) : dir_(std::move(dir)) {}

    void csv(const std::string &name, const CsvTable &table) { files_.emplace_back(name, table.render()); }

    ScenarioResult finish(const json &echo, const json &results, bool passed) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
        }
        json manifest;
        manifest["version"] = kVersion;
        manifest["inputs"] = echo;
        manifest["results"] = results;
        manifest["passed"] = passed;
        json listing = json::array();
        ScenarioResult r{{}, results, passed};
        for (const auto &[name, body] : files_) {
            write_text(path(name), body);
            listing.push_back({{"name", name}, {"sha256", sha256_file(path(name))}, {"bytes", body.size()}});
            r.files.push_back(name);
        }
        manifest["files"] = listing;
        write_text(path("manifest.json"), manifest.dump(2) + "\n");
        r.files.push_back("manifest.json");
        return r;
    }

  private:
    std::string path(const std::string &name) const { return (std::filesystem::path(dir_) / name).string(); }

    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<double> range(double lo, double hi, int points) {
    if (points < 2) {
        throw ConfigError("need at least two points");
    }
    return linspace(lo, hi, points);
}

CsvTable density_table(const DensityMatrix &rho) {
    CsvTable t{{"n", "m", "re", "im"}, {}};
    for (int n = 0; n < rho.dim(); ++n) {
        for (int m = 0; m < rho.dim(); ++m) {
            t.rows.push_back({double(n), double(m), rho(n, m).real(), rho(n, m).imag()});
        }
    }
    return t;
}

CsvTable marginal_table(const std::vector<double> &xs, const std::vector<double> &dens) {
    CsvTable t{{"x", "density"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        t.rows.push_back({xs[i], dens[i]});
    }
    return t;
}

// ---- pulse ---------------------------------------------------------------

json run_pulse(Params &p, Emitter &out) {
    const std::string wp = p.str("wavepacket", "exp_rising", {"exp_rising", "exp_decaying", "time_bin"});
    const std::string def_op = wp == "exp_rising" ? "write" : wp == "exp_decaying" ? "read" : "entangle";
    const std::string op = p.str("operation", def_op, {"write", "read", "entangle"});
    const double gamma0 = p.num("gamma0", 2.0 * std::numbers::pi * 1.5e6);
    const double dt = p.num("dt_factor", 1e-3) / gamma0;
    const double span = p.num("span", 30.0) / gamma0;
    const double cap_factor = p.num("gamma_cap_factor", kCapFactor);
    if (!(gamma0 > 0.0) || !(dt > 0.0) || !(span > 0.0) || !(cap_factor > 0.0)) {
        throw ConfigError("pulse: gamma0, dt_factor, span and gamma_cap_factor must be positive");
    }
    double t0 = 0.0;
    const double margin = std::ceil(2.0 / gamma0 / dt) * dt;
    Grid grid{};
    WavepacketKind kind{};
    if (wp == "exp_rising") {
        kind = WavepacketKind::ExpRising;
        grid = Grid::span(-std::ceil(span / dt) * dt, margin, dt);
    } else if (wp == "exp_decaying") {
        kind = WavepacketKind::ExpDecaying;
        grid = Grid::span(-margin, std::ceil(span / dt) * dt, dt);
    } else {
        kind = WavepacketKind::TimeBin;
        t0 = std::round(p.num("t0", 100e-9) / dt) * dt;
        if (!(t0 > 0.0)) {
            throw ConfigError("pulse: t0 must be positive");
        }
        grid = Grid::span(-margin, t0 + margin, dt);
        p.record("t0_on_grid", t0);
    }
    TemporalMode mode = standard_wavepacket(kind, gamma0, t0, grid);
    ScheduleOptions opt{cap_factor * gamma0, kNormThreshold};
    CouplingSchedule sched;
    double tf_target = 0.0;
    if (op == "write") {
        sched = write_pulse(mode, opt);
    } else if (op == "read") {
        sched = read_pulse(mode, opt);
    } else {
        tf_target = p.num("Tf", t0 > 0.0 ? std::exp(-gamma0 * t0) : 0.5);
        sched = entangle_pulse(mode, tf_target, opt);
    }
    json hw_echo;
    std::vector<double> voltage;
    if (p.has("hardware")) {
        Params h = p.child("hardware");
        MemoryHardware hw{h.num("L", 4.35), h.num("V_pi", 1.0), gamma0, h.num("c", 299792458.0)};
        hw_echo = h.finish();
        p.record("hardware", hw_echo);
        for (double g : sched.gamma) {
            voltage.push_back(voltage_from_gamma(hw, g));
        }
    }
    const double f_end = transmission_amplitude(sched).back();
    const double tf_actual = f_end * f_end;
    TemporalMode out_mode = output_mode_from_schedule(sched, tf_actual);
    NetworkResult net = simulate_network(sched, dt);

    out.csv("wavepacket.csv", mode_table(mode, "g"));
    out.csv("schedule.csv", schedule_table(sched));
    out.csv("output_mode.csv", mode_table(out_mode, "g_out"));
    if (!voltage.empty()) {
        CsvTable vt{{"t", "voltage"}, {}};
        for (std::size_t i = 0; i < voltage.size(); ++i) {
            vt.rows.push_back({sched.t[i], voltage[i]});
        }
        out.csv("voltage.csv", vt);
    }
    return {{"final_transmission", tf_actual},
            {"target_Tf", tf_target},
            {"network_effective_Tf", net.effective_Tf},
            {"network_in_overlap", net.in_overlap},
            {"network_out_overlap", net.out_overlap}};
}

// ---- store ---------------------------------------------------------------

json run_store(Params &p, Emitter &out) {
    DensityMatrix input = make_state(p, 40);
    const NoiseParams np = noise_from(p);
    const double eta = p.num("eta", 1.0);
    const std::vector<double> times = p.nums("times", range(0.0, 1e-6, 11));
    p.finish();
    const DensityMatrix start = apply_loss(input, eta);
    CsvTable t{{"t", "fidelity", "mean_photons", "parity"}, {}};
    for (double tt : times) {
        DensityMatrix r = evolve_closed_form(start, tt, np);
        t.rows.push_back({tt, fidelity(r, input), r.mean_photon_number(), r.parity_expectation()});
    }
    out.csv("store.csv", t);
    return {{"points", times.size()}};
}

// ---- breed ---------------------------------------------------------------

json run_breed(Params &p, Emitter &out) {
    BreedingPlan plan;
    plan.protocol = protocol_from(p.str("protocol", "cat", {"cat", "gkp"}));
    plan.steps = p.integer("steps", 1);
    plan.alpha = p.num("alpha", 1.0);
    plan.s = parity_from(p.num("s", -1.0));
    plan.dim = p.integer("dim", 60);
    plan.g = p.num("g", kDefaultStabilizerG);
    if (p.has("window")) {
        std::vector<double> w = p.nums("window", {});
        if (w.size() != 2) {
            throw ConfigError("breed.window must be [lo, hi]");
        }
        plan.conditioning = Conditioning::range(w[0], w[1]);
    }
    const bool want_wigner = p.flag("wigner", false);
    p.finish();
    BreedingTrajectory traj = run_breeding(plan);
    CsvTable t{{"step", "success_density", "stabilizer_x", "stabilizer_p", "mean_photons", "parity", "fidelity_closed_form"},
               {}};
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        FockVector ref = theoretical_bred_state(int(k) + 1, plan.alpha, plan.s, plan.protocol, plan.dim);
        const StepMetrics &m = traj.metrics[k];
        t.rows.push_back({double(k), traj.success_densities[k], m.stabilizer_x, m.stabilizer_p, m.mean_photons, m.parity,
                          fidelity(traj.states[k], ref)});
    }
    out.csv("breeding.csv", t);
    json res = {{"final_fidelity_closed_form", t.rows.back().back()}};
    if (want_wigner) {
        WignerGrid g = wigner_grid(traj.states.back());
        NegativityReport nr = negativity_volume(g);
        out.csv("wigner_final.csv", wigner_table(g));
        res["negativity_volume"] = nr.volume;
        res["negative_regions"] = nr.regions;
    }
    return res;
}

// ---- wigner --------------------------------------------------------------

json run_wigner(Params &p, Emitter &out) {
    DensityMatrix rho = make_state(p, 40);
    const double extent = p.num("extent", kDefaultWignerExtent);
    const int points = p.integer("points", kDefaultWignerPoints);
    p.finish();
    const std::vector<double> axis = range(-extent, extent, points);
    WignerGrid g = wigner_grid(rho, axis, axis);
    NegativityReport nr = negativity_volume(g);
    const std::vector<double> mx = marginal(rho, 0.0, axis);
    const std::vector<double> mp = marginal(rho, std::numbers::pi / 2.0, axis);
    out.csv("wigner.csv", wigner_table(g));
    out.csv("marginal_x.csv", marginal_table(axis, mx));
    out.csv("marginal_p.csv", marginal_table(axis, mp));
    return {{"integral", g.integral()},
            {"negativity_volume", nr.volume},
            {"negative_regions", nr.regions},
            {"peaks_x", count_peaks(mx)},
            {"peaks_p", count_peaks(mp)}};
}

// ---- tomo ----------------------------------------------------------------

json run_tomo(Params &p, Emitter &out, std::uint64_t seed) {
    DensityMatrix truth = make_state(p, 40);
    const int frames = p.integer("frames", 20000);
    const int recon_dim = p.integer("recon_dim", 20);
    MleOptions opt;
    opt.iterations = p.integer("iterations", 300);
    opt.plateau = p.num("plateau", 1e-9);
    std::vector<double> phases_deg = p.nums("phases_deg", {0, 30, 60, 90, 120, 150});
    p.finish();
    if (frames < 1) {
        throw ConfigError("tomo.frames must be positive");
    }
    std::vector<double> phases;
    for (double d : phases_deg) {
        phases.push_back(d * std::numbers::pi / 180.0);
    }
    HomodyneDataset data = sample_homodyne(truth, phases, std::size_t(frames), seed);
    MleResult mle = mle_reconstruct(data, recon_dim, opt);
    DensityMatrix ref = truth.resized(recon_dim).normalized();
    out.csv("dataset.csv", dataset_table(data));
    out.csv("rho.csv", density_table(mle.rho));
    CsvTable ll{{"iteration", "log_likelihood"}, {}};
    for (std::size_t i = 0; i < mle.log_likelihood.size(); ++i) {
        ll.rows.push_back({double(i), mle.log_likelihood[i]});
    }
    out.csv("likelihood.csv", ll);
    return {{"fidelity", fidelity(mle.rho, ref)}, {"iterations", mle.iterations}};
}

// ---- rates ---------------------------------------------------------------

json run_rates(Params &p, Emitter &out) {
    const std::vector<json> defaults = {{{"r0", 2e5}, {"delta", 1.2e8}, {"r_bs", 10.0}},
                                        {{"r0", 4e3}, {"delta", 3e6}, {"r_bs", 20.0}}};
    const std::vector<json> cases = p.objects("cases", defaults);
    json cases_echo = json::array();
    json k_values = json::array();
    CsvTable t{{"r0", "delta", "r_bs", "k_match", "p1"}, {}};
    for (std::size_t i = 0; i < cases.size(); ++i) {
        Params c(cases[i], "params.cases[" + std::to_string(i) + "]");
        const double r0 = c.num("r0", 0.0);
        const double delta = c.num("delta", 0.0);
        const double r_bs = c.num("r_bs", 0.0);
        cases_echo.push_back(c.finish());
        RateModel m = RateModel::from_rates(r0, delta, r_bs);
        m.validate();
        t.rows.push_back({r0, delta, r_bs, m.k_match, m.p1});
        k_values.push_back(m.k_match);
    }
    p.record("cases", cases_echo);
    const std::vector<double> k_list = p.nums("k_list", {0.03, 1.0, 3.8, 10.0, 100.0});
    const int n_max = p.integer("n_max", 20);
    const double p1 = p.num("p1", 0.25);
    const double delta = p.num("delta", 0.0);
    p.finish();
    out.csv("rates.csv", t);
    out.csv("scaling.csv", scaling_table(scaling_curve(n_max, k_list, p1, delta)));
    return {{"k_match", k_values}};
}

// ---- validate ------------------------------------------------------------

struct Check {
    std::string name;
    double value;
    double limit;
    bool pass;
};

// Fast invariant suite; the full oracles live in the test binaries.
std::vector<Check> invariant_checks() {
    std::vector<Check> checks;
    auto add = [&](std::string name, double value, double limit, bool pass) {
        checks.push_back({std::move(name), value, limit, pass});
    };
    {
        const double m = multimode_overlap(0.3);
        add("multimode_overlap_0.3", m, 0.9974, std::abs(m - 0.9974) <= 5e-4);
    }
    {
        const double k1 = k_from_rates(2e5, 1.2e8, 10.0);
        const double k2 = k_from_rates(4e3, 3e6, 20.0);
        add("k_match_case1", k1, 0.03, std::abs(k1 - 0.03) <= 1e-12);
        add("k_match_case2", k2, 3.75, std::abs(k2 - 3.75) <= 1e-12);
        const double gap = success_probability(20, 3.8, 0.25) / success_probability(20, 0.03, 0.25);
        add("rate_gap_orders", std::log10(gap), 4.0, gap > 1e4);
    }
    {
        const double gamma0 = 2.0 * std::numbers::pi * 1.5e6;
        const double dt = 1e-3 / gamma0;
        Grid grid = Grid::span(-std::ceil(30.0 / gamma0 / dt) * dt, std::ceil(2.0 / gamma0 / dt) * dt, dt);
        TemporalMode mode = standard_wavepacket(WavepacketKind::ExpRising, gamma0, 0.0, grid);
        NetworkResult net = simulate_network(write_pulse(mode), dt);
        add("write_network_in_overlap", net.in_overlap, 0.999, net.in_overlap >= 0.999);
    }
    {
        FockVector gkp = theoretical_bred_state(2, 1.0, Parity::Odd, Protocol::Gkp, 60);
        const std::vector<double> axis = linspace(-5.0, 5.0, 101);
        NegativityReport nr = negativity_volume(wigner_grid(DensityMatrix::pure(gkp), axis, axis));
        add("gkp_negative_regions", nr.regions, 2, nr.regions == 2);
        const int peaks = count_peaks(marginal(DensityMatrix::pure(gkp), std::numbers::pi / 2.0, linspace(-6, 6, 601)));
        add("gkp_p_marginal_peaks", peaks, 3, peaks == 3);
    }
    {
        FockVector cat = cat_state(1.0, Parity::Odd, 60);
        StepResult r = breed_step(DensityMatrix::pure(cat), cat, 1, Protocol::Gkp);
        const double f = fidelity(r.state, theoretical_bred_state(2, 1.0, Parity::Odd, Protocol::Gkp, 60));
        add("gkp_one_step_fidelity", f, 0.999, f >= 0.999);
    }
    {
        NoiseParams np{2.3e-6, 0.96e-6};
        DensityMatrix rho = DensityMatrix::pure(squeezed_single_photon(0.5, 40));
        DensityMatrix a = evolve_closed_form(evolve_closed_form(rho, 0.3e-6, np), 0.5e-6, np);
        DensityMatrix b = evolve_closed_form(rho, 0.8e-6, np);
        const double diff = (a.rho() - b.rho()).cwiseAbs().maxCoeff();
        add("noise_semigroup", diff, 1e-12, diff <= 1e-12);
        add("noise_trace", std::abs(b.trace() - 1.0), 1e-10, std::abs(b.trace() - 1.0) <= 1e-10);
    }
    return checks;
}

json run_validate(Params &, Emitter &out, bool &passed) {
    const std::vector<Check> checks = invariant_checks();
    CsvTable t{{"index", "value", "limit", "pass"}, {}};
    json names = json::array();
    passed = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const Check &c = checks[i];
        t.rows.push_back({double(i), c.value, c.limit, c.pass ? 1.0 : 0.0});
        names.push_back({{"index", i}, {"name", c.name}, {"pass", c.pass}});
        passed = passed && c.pass;
    }
    out.csv("validate.csv", t);
    return {{"checks", names}};
}

// ---- figures -------------------------------------------------------------

std::string ns_label(double t) {
    std::ostringstream s;
    s << std::llround(t * 1e9) << "ns";
    return s.str();
}

json fig3e(Params &p, Emitter &out) {
    const NoiseParams np = noise_from(p);
    const double t_max = p.num("t_max", 3e-6);
    const int points = p.integer("points", 16);
    const double r = p.num("r", 0.5);
    const double eta = p.num("eta", 0.93);
    const int dim = p.integer("dim", 40);
    p.finish();
    const std::vector<double> ts = range(0.0, t_max, points);
    const DensityMatrix one = DensityMatrix::pure(FockVector::basis(1, dim));
    const DensityMatrix sq = apply_loss(DensityMatrix::pure(squeezed_single_photon(r, dim)), eta);
    CoherenceSeries pop{ts, {}};
    std::vector<DensityMatrix> sq_series;
    for (double t : ts) {
        pop.value.push_back(evolve_closed_form(one, t, np).population(1));
        sq_series.push_back(evolve_closed_form(sq, t, np));
    }
    out.csv("fig3e_t1.csv", coherence_table(pop, "rho11"));
    out.csv("fig3e_tphi.csv", coherence_table(coherence_series(sq_series, ts), "R"));
    return {{"fitted_T1", fit_T1(pop)},
            {"fitted_Tphi", fit_Tphi(sq_series, ts, np.T1)},
            {"fitted_Tphi_uncompensated", fit_Tphi(sq_series, ts)}};
}

json fig4d(Params &p, Emitter &out) {
    const double alpha = p.num("alpha", 1.0);
    const Parity s = parity_from(p.num("s", -1.0));
    const int dim = p.integer("dim", 60);
    const NoiseParams np = noise_from(p);
    const std::vector<double> t2s = p.nums("t2_list", {0.0, 40e-9});
    const double extent = p.num("extent", kDefaultWignerExtent);
    const int points = p.integer("points", kDefaultWignerPoints);
    p.finish();
    const std::vector<double> axis = range(-extent, extent, points);
    json res = json::object();
    for (const char *name : {"cat", "gkp"}) {
        BreedingPlan plan;
        plan.protocol = protocol_from(name);
        plan.alpha = alpha;
        plan.s = s;
        plan.dim = dim;
        BreedingTrajectory traj = run_breeding(plan);
        auto panel = [&](const std::string &file, const DensityMatrix &rho) {
            WignerGrid g = wigner_grid(rho, axis, axis);
            NegativityReport nr = negativity_volume(g);
            out.csv(file, wigner_table(g));
            res[file] = {{"negative_regions", nr.regions}, {"negativity_volume", nr.volume}};
        };
        panel(std::string("fig4d_") + name + "_input.csv", traj.states.front());
        for (double t2 : t2s) {
            if (t2 < 0.0) {
                throw ConfigError("fig4d: t2 must be non-negative");
            }
            panel(std::string("fig4d_") + name + "_output_t2_" + ns_label(t2) + ".csv",
                  evolve_closed_form(traj.states.back(), t2, np));
        }
    }
    return res;
}

json edfig_rates(Params &p, Emitter &out) {
    const std::vector<double> k_list = p.nums("k_list", {0.03, 1.0, 3.8, 10.0, 100.0});
    const int n_max = p.integer("n_max", 20);
    const double p1 = p.num("p1", 0.25);
    out.csv("edfig_rates.csv", scaling_table(scaling_curve(n_max, k_list, p1)));
    return {{"p_n_max_low_k", success_probability(n_max, k_list.front(), p1)}};
}

json edfig_fidelity(Params &p, Emitter &out) {
    const NoiseParams np = noise_from(p);
    const std::vector<double> rs = p.nums("r_list", {0.0, 0.25, 0.5});
    const double eta = p.num("eta", 1.0);
    const double t_max = p.num("t_max", 1e-6);
    const int points = p.integer("points", 21);
    const int dim = p.integer("dim", 40);
    p.finish();
    const std::vector<double> ts = range(0.0, t_max, points);
    CsvTable t{{"t"}, {}};
    std::vector<FockVector> inputs;
    std::vector<DensityMatrix> starts;
    for (double r : rs) {
        t.header.push_back("F_r=" + format_number(r));
        inputs.push_back(squeezed_single_photon(r, dim));
        starts.push_back(apply_loss(DensityMatrix::pure(inputs.back()), eta));
    }
    for (double tt : ts) {
        std::vector<double> row{tt};
        for (std::size_t i = 0; i < rs.size(); ++i) {
            row.push_back(fidelity(evolve_closed_form(starts[i], tt, np), inputs[i]));
        }
        t.rows.push_back(std::move(row));
    }
    out.csv("edfig_fidelity.csv", t);
    return {{"points", ts.size()}};
}

ScenarioResult figure_into(const std::string &figure, Params &p, Emitter &out, json echo) {
    json res;
    if (figure == "fig3e") {
        res = fig3e(p, out);
    } else if (figure == "fig4d") {
        res = fig4d(p, out);
    } else if (figure == "edfig_rates") {
        res = edfig_rates(p, out);
    } else if (figure == "edfig_fidelity") {
        res = edfig_fidelity(p, out);
    } else {
        throw ConfigError("unknown figure '" + figure + "'");
    }
    echo["params"] = p.finish();
    echo["params"]["figure"] = figure;
    return out.finish(echo, res, true);
}

json header_echo(const std::string &kind, std::uint64_t seed) { return {{"kind", kind}, {"seed", seed}}; }

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json &doc) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ScenarioConfig c;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string &k = it.key();
        const json &v = it.value();
        if (k == "kind") {
            if (!v.is_string() || !kKinds.count(v.get<std::string>())) {
                throw ConfigError("kind must be one of pulse|store|breed|wigner|tomo|rates|validate|figure");
            }
            c.kind = v.get<std::string>();
        } else if (k == "seed") {
            if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
                throw ConfigError("seed must be a non-negative integer");
            }
            c.seed = v.get<std::uint64_t>();
        } else if (k == "output_dir") {
            if (!v.is_string() || v.get<std::string>().empty()) {
                throw ConfigError("output_dir must be a non-empty string");
            }
            c.output_dir = v.get<std::string>();
        } else if (k == "threads") {
            if (!v.is_number_integer() || v.get<long long>() < 1) {
                throw ConfigError("threads must be a positive integer");
            }
            c.threads = v.get<int>();
        } else if (k == "params") {
            if (!v.is_object()) {
                throw ConfigError("params must be an object");
            }
            c.params = v;
        } else {
            throw ConfigError("unknown key '" + k + "'");
        }
    }
    if (c.kind.empty()) {
        throw ConfigError("missing 'kind'");
    }
    return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot open config '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return from_json(doc);
}

ScenarioResult run_scenario(const ScenarioConfig &config) {
    if (config.kind == "figure") {
        json params = config.params;
        if (!params.contains("figure") || !params["figure"].is_string()) {
            throw ConfigError("figure scenario needs params.figure");
        }
        const std::string figure = params["figure"].get<std::string>();
        params.erase("figure");
        return emit_figure_data(figure, params, config.output_dir, config.seed);
    }
    Params p(config.params, "params");
    Emitter out(config.output_dir);
    json res;
    bool passed = true;
    if (config.kind == "pulse") {
        res = run_pulse(p, out);
    } else if (config.kind == "store") {
        res = run_store(p, out);
    } else if (config.kind == "breed") {
        res = run_breed(p, out);
    } else if (config.kind == "wigner") {
        res = run_wigner(p, out);
    } else if (config.kind == "tomo") {
        res = run_tomo(p, out, config.seed);
    } else if (config.kind == "rates") {
        res = run_rates(p, out);
    } else if (config.kind == "validate") {
        res = run_validate(p, out, passed);
    } else {
        throw ConfigError("unknown kind '" + config.kind + "'");
    }
    json echo = header_echo(config.kind, config.seed);
    echo["params"] = p.finish();
    return out.finish(echo, res, passed);
}

ScenarioResult emit_figure_data(const std::string &figure, const json &params, const std::string &output_dir,
                                std::uint64_t seed) {
    Params p(params, "params");
    Emitter out(output_dir);
    return figure_into(figure, p, out, header_echo("figure", seed));
}

std::string sha256_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for hashing");
    }
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("SHA-256 unavailable");
    }
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof(buf));
        if (f.gcount() > 0) {
            EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(f.gcount()));
        }
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    }
    return hex.str();
}

}  // namespace resmem
