// qmaxent command-line front end: entropy, maxent, chain, fit, scaling.
// Every output is deterministic given the recorded manifest (parameters,
// seed, kernel, input digests); CSV outputs get a <file>.manifest.json
// sidecar, JSON outputs embed the manifest.

#include "qmaxent/entropy.hpp"
#include "qmaxent/io.hpp"
#include "qmaxent/kernels.hpp"
#include "qmaxent/maxent.hpp"
#include "qmaxent/mle.hpp"
#include "qmaxent/qmodel.hpp"
#include "qmaxent/rng.hpp"
#include "qmaxent/scaling.hpp"
#include "qmaxent/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

using namespace qmaxent;
using io::json;

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct CommonOpts {
    std::string out;
    std::string format; // "json" | "csv" | "" (per-command default)
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "Output file (default: stdout)");
    cmd->add_option("--format", c.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", c.seed, "Seed for any randomness (default: entropy)")
        ->each([&c](const std::string&) { c.seed_set = true; });
}

io::RunManifest make_manifest(const std::string& command, const CommonOpts& c,
                              json params,
                              const std::vector<std::string>& inputs = {},
                              bool uses_seed = false) {
    io::RunManifest m;
    m.command = command;
    m.params = std::move(params);
    m.seed_used = uses_seed;
    if (uses_seed) {
        m.seed = c.seed_set ? c.seed : entropy_seed();
        m.seed_from_entropy = !c.seed_set;
    }
    m.kernel = kernels::active().name;
    for (const auto& path : inputs) m.input_digests[path] = io::file_digest(path);
    return m;
}

// Writes text to --out atomically (with a manifest sidecar) or to stdout.
void emit(const CommonOpts& c, const std::string& text, const io::RunManifest& m) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    io::atomic_write(c.out, text);
    io::atomic_write(c.out + ".manifest.json", m.to_json().dump(2) + "\n");
}

void emit_json(const CommonOpts& c, json j, const io::RunManifest& m) {
    j["manifest"] = m.to_json();
    const std::string text = j.dump(2) + "\n";
    if (c.out.empty())
        std::cout << text;
    else
        io::atomic_write(c.out, text);
}

double display_units(double nats, bool bits) { return bits ? nats / kLn2 : nats; }

// ---------------------------------------------------------------------------

int run_entropy(const CommonOpts& c, const std::string& input,
                const std::string& ref, const std::string& measure, double q,
                const std::vector<double>& q_grid, double ha, double hb, double iab,
                bool bits) {
    json params = {{"measure", measure}};
    std::vector<std::string> inputs;

    if (measure == "seff-corrected") {
        params["ha"] = ha;
        params["hb"] = hb;
        params["iab"] = iab;
        const auto m = make_manifest("entropy", c, params);
        std::ostringstream os;
        os << io::fmt(effective_species_corrected(ha, hb, iab)) << "\n";
        emit(c, os.str(), m);
        return 0;
    }

    if (input.empty()) throw ParseError("--input is required for this measure");
    inputs.push_back(input);
    params["input"] = input;

    if (measure == "mutual-info") {
        const auto j = io::read_joint(io::load_json_file(input));
        const auto m = make_manifest("entropy", c, params, inputs);
        std::ostringstream os;
        os << io::fmt(display_units(mutual_information(j), bits)) << "\n";
        emit(c, os.str(), m);
        return 0;
    }

    const auto p = io::read_distribution(io::load_json_file(input));

    if (measure == "profile") {
        if (q_grid.empty())
            throw ParseError("--q-grid is required for the diversity profile");
        std::vector<EntropicOrder> grid;
        for (double qq : q_grid) grid.emplace_back(qq);
        const auto prof = diversity_profile(p, grid);
        params["q_grid"] = q_grid;
        const auto m = make_manifest("entropy", c, params, inputs);
        if (c.format == "json") {
            json j;
            j["profile"] = json::array();
            for (const auto& pt : prof)
                j["profile"].push_back({{"q", pt.q}, {"hill_number", pt.hill}});
            emit_json(c, j, m);
        } else {
            std::ostringstream os;
            os << "q,hill_number\n";
            for (const auto& pt : prof)
                os << io::fmt(pt.q) << ',' << io::fmt(pt.hill) << '\n';
            emit(c, os.str(), m);
        }
        return 0;
    }

    double value = 0.0;
    if (measure == "shannon") {
        value = display_units(shannon_entropy(p), bits);
    } else if (measure == "renyi") {
        value = display_units(renyi_entropy(p, EntropicOrder(q)), bits);
    } else if (measure == "tsallis") {
        value = tsallis_entropy(p, EntropicOrder(q)); // not log-based; no unit change
    } else if (measure == "hill") {
        value = hill_number(p, EntropicOrder(q));
    } else if (measure == "kl") {
        if (ref.empty()) throw ParseError("--ref is required for kl");
        inputs.push_back(ref);
        params["ref"] = ref;
        const auto r = io::read_distribution(io::load_json_file(ref));
        try {
            value = display_units(kl_divergence(p, r), bits);
        } catch (const DivergenceInfinite&) {
            value = std::numeric_limits<double>::infinity();
        }
    } else {
        throw ParseError("unknown measure '" + measure + "'");
    }
    params["q"] = q;
    const auto m = make_manifest("entropy", c, params, inputs);
    emit(c, io::fmt(value) + "\n", m);
    return 0;
}

int run_maxent(const CommonOpts& c, const std::string& constraints, double tol,
               int max_iter) {
    if (c.format == "csv") throw ParseError("maxent emits JSON only");
    const auto cs = io::read_constraints(io::load_json_file(constraints));
    const auto m = make_manifest(
        "maxent", c, {{"constraints", constraints}, {"tol", tol}, {"max_iter", max_iter}},
        {constraints});
    const auto g = solve_dual(cs, tol, max_iter);
    json j = io::gibbs_to_json(g);
    j["states"] = cs.states;
    j["converged"] = true;
    emit_json(c, j, m);
    return 0;
}

int run_chain(const CommonOpts& c, int n, int d, const std::string& mode, double q,
              double psi, int count) {
    const ChainSpec spec(n, d);
    json params = {{"n", n}, {"d", d}, {"mode", mode}};

    if (mode == "count") {
        const auto counts = enumerate_exact(spec);
        const auto m = make_manifest("chain", c, params);
        if (d > 0 && !asymptotic_regime(spec))
            std::cerr << "warning: n < 10 d; the asymptotic column is outside "
                         "its trusted regime\n";
        const auto asym = [&](int mm) {
            return d == 0 ? std::numeric_limits<double>::quiet_NaN()
                          : omega_asymptotic(spec, mm);
        };
        if (c.format == "json") {
            json rows = json::array();
            for (const auto& [mm, cc] : counts)
                rows.push_back({{"M", mm}, {"exact", cc}, {"asymptotic", asym(mm)}});
            emit_json(c, json{{"rows", std::move(rows)}}, m);
        } else {
            std::ostringstream os;
            os << "M,exact,asymptotic\n";
            for (const auto& [mm, cc] : counts)
                os << mm << ',' << cc << ',' << io::fmt(asym(mm)) << '\n';
            emit(c, os.str(), m);
        }
        return 0;
    }

    params["q"] = q;
    params["psi"] = psi;
    const QExponentialModel model(spec, q, psi);
    params["degeneracy"] =
        model.degeneracy_source() == DegeneracySource::exact ? "exact" : "asymptotic";

    if (mode == "pmf") {
        auto m = make_manifest("chain", c, params);
        m.degeneracy = params["degeneracy"];
        const auto pmf = model.pmf_over_m();
        if (c.format == "json") {
            json j = {{"n", n}, {"d", d}, {"q", q}, {"psi", psi},
                      {"probability", pmf.probs()}};
            emit_json(c, j, m);
        } else {
            std::ostringstream os;
            os << "M,probability\n";
            for (int mm = 0; mm <= n; ++mm)
                os << mm << ',' << io::fmt(pmf[mm]) << '\n';
            emit(c, os.str(), m);
        }
        return 0;
    }

    if (mode == "sample") {
        params["count"] = count;
        auto m = make_manifest("chain", c, params, {}, /*uses_seed=*/true);
        m.degeneracy = params["degeneracy"];
        const auto samples = model.sample_m(count, m.seed);
        if (c.format == "json") {
            json j = {{"n", n}, {"d", d}, {"samples", samples}};
            emit_json(c, j, m);
        } else {
            std::ostringstream os;
            for (int v : samples) os << v << '\n';
            emit(c, os.str(), m);
        }
        return 0;
    }
    throw ParseError("unknown chain mode '" + mode + "'");
}

int run_fit(const CommonOpts& c, const std::string& samples_path, int n, int d,
            double q_min, double q_max, bool surface,
            const std::vector<double>& surface_q, const std::vector<double>& surface_psi,
            const std::string& surface_out) {
    if (c.format == "csv")
        throw ParseError("fit emits JSON (the surface CSV is --surface-out)");
    std::optional<ChainSpec> spec;
    if (n > 0) spec.emplace(n, d);
    const auto samples = io::read_samples(samples_path, spec);

    json params = {{"samples", samples_path}, {"n", samples.spec.n},
                   {"d", samples.spec.d},     {"q_min", q_min},
                   {"q_max", q_max}};
    auto manifest = make_manifest("fit", c, params, {samples_path});

    const auto result = fit(samples, q_min, q_max);
    manifest.degeneracy =
        result.degeneracy == DegeneracySource::exact ? "exact" : "asymptotic";

    if (surface) {
        if (surface_q.size() != 3 || surface_psi.size() != 3)
            throw ParseError("--surface-q/--surface-psi need lo,hi,count triples");
        auto linspace = [](const std::vector<double>& t) {
            const int k = static_cast<int>(t[2]);
            if (k < 1) throw ParseError("surface grid count must be >= 1");
            std::vector<double> g(k);
            for (int i = 0; i < k; ++i)
                g[i] = k == 1 ? t[0] : t[0] + (t[1] - t[0]) * i / (k - 1);
            return g;
        };
        const auto s = likelihood_surface(samples, linspace(surface_q),
                                          linspace(surface_psi));
        io::atomic_write(surface_out, io::surface_to_csv(s));
        io::atomic_write(surface_out + ".manifest.json",
                         manifest.to_json().dump(2) + "\n");
        json j = io::fit_to_json(result);
        j["surface"] = io::surface_to_json(s);
        emit_json(c, std::move(j), manifest);
        return 0;
    }

    emit_json(c, io::fit_to_json(result), manifest);
    return 0;
}

int run_scaling(const CommonOpts& c, const std::string& series_path) {
    if (c.format == "csv") throw ParseError("scaling emits JSON only");
    const auto series = io::read_series_csv(series_path);
    const auto m = make_manifest("scaling", c, {{"series", series_path}}, {series_path});
    const auto v = fit_scaling(series);
    emit_json(c, io::verdict_to_json(v), m);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized maximum-entropy toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string kernel = "auto";
    app.add_option("--kernel", kernel, "Kernel backend: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // entropy
    CommonOpts c_ent;
    std::string ent_input, ent_ref, ent_measure;
    double ent_q = 1.0, ent_ha = 0.0, ent_hb = 0.0, ent_iab = 0.0;
    std::vector<double> ent_grid;
    bool ent_bits = false;
    auto* ent = app.add_subcommand("entropy", "Entropy and diversity measures");
    ent->add_option("--input", ent_input, "Distribution JSON {\"probs\": [..]}");
    ent->add_option("--ref", ent_ref, "Reference distribution JSON (kl)");
    ent->add_option("--measure", ent_measure, "shannon|renyi|tsallis|kl|hill|profile|mutual-info|seff-corrected")
        ->required()
        ->check(CLI::IsMember({"shannon", "renyi", "tsallis", "kl", "hill", "profile",
                               "mutual-info", "seff-corrected"}));
    ent->add_option("--q", ent_q, "Entropic order (default 1)");
    ent->add_option("--q-grid", ent_grid, "Orders for the diversity profile")->delimiter(',');
    ent->add_option("--ha", ent_ha, "Entropy of subsystem A (seff-corrected)");
    ent->add_option("--hb", ent_hb, "Entropy of subsystem B (seff-corrected)");
    ent->add_option("--iab", ent_iab, "Mutual information (seff-corrected)");
    ent->add_flag("--bits", ent_bits, "Display log-based measures in bits");
    add_common(ent, c_ent);

    // maxent
    CommonOpts c_max;
    std::string max_constraints;
    double max_tol = 1e-10;
    int max_iter = 200;
    auto* mx = app.add_subcommand("maxent", "Classical MaxEnt dual solve");
    mx->add_option("--constraints", max_constraints, "ConstraintSet JSON")->required();
    mx->add_option("--tol", max_tol, "Moment-matching tolerance (default 1e-10)");
    mx->add_option("--max-iter", max_iter, "Iteration cap (default 200)");
    add_common(mx, c_max);

    // chain
    CommonOpts c_chain;
    int ch_n = 0, ch_d = 0, ch_count = 1000;
    std::string ch_mode;
    double ch_q = 1.0, ch_psi = 1.0;
    auto* ch = app.add_subcommand("chain", "Correlated bit-chain counts and samples");
    ch->add_option("--n", ch_n, "Chain length")->required();
    ch->add_option("--d", ch_d, "Flip count")->required();
    ch->add_option("--mode", ch_mode, "count|sample|pmf")
        ->required()
        ->check(CLI::IsMember({"count", "sample", "pmf"}));
    ch->add_option("--q", ch_q, "Entropic order (sample/pmf)");
    ch->add_option("--psi", ch_psi, "Constraint multiplier (sample/pmf)");
    ch->add_option("--count", ch_count, "Number of samples (sample mode)");
    add_common(ch, c_chain);

    // fit
    CommonOpts c_fit;
    std::string fit_samples, fit_surface_out = "surface.csv";
    int fit_n = 0, fit_d = 0;
    double fit_qmin = 0.2, fit_qmax = 3.0;
    bool fit_surface = false;
    std::vector<double> fit_sq, fit_spsi;
    auto* ft = app.add_subcommand("fit", "Two-step MLE of (q, psi)");
    ft->add_option("--samples", fit_samples, "CSV (one M per line) or JSON samples")
        ->required();
    ft->add_option("--n", fit_n, "Chain length (required for CSV samples)");
    ft->add_option("--d", fit_d, "Flip count (required for CSV samples)");
    ft->add_option("--q-min", fit_qmin, "Lower q bound (default 0.2)");
    ft->add_option("--q-max", fit_qmax, "Upper q bound (default 3.0)");
    ft->add_flag("--surface", fit_surface, "Also write the delta-likelihood surface");
    ft->add_option("--surface-q", fit_sq, "Surface q grid: lo,hi,count")->delimiter(',');
    ft->add_option("--surface-psi", fit_spsi, "Surface psi grid: lo,hi,count")
        ->delimiter(',');
    ft->add_option("--surface-out", fit_surface_out,
                   "Surface CSV path (default surface.csv)");
    add_common(ft, c_fit);

    // scaling
    CommonOpts c_scl;
    std::string scl_series;
    auto* sc = app.add_subcommand("scaling", "Classify W(N) growth");
    sc->add_option("--series", scl_series, "CSV with header n,w")->required();
    add_common(sc, c_scl);

    try {
        app.parse(argc, argv);
        kernels::select(kernel);
        if (ent->parsed())
            return run_entropy(c_ent, ent_input, ent_ref, ent_measure, ent_q, ent_grid,
                               ent_ha, ent_hb, ent_iab, ent_bits);
        if (mx->parsed()) return run_maxent(c_max, max_constraints, max_tol, max_iter);
        if (ch->parsed())
            return run_chain(c_chain, ch_n, ch_d, ch_mode, ch_q, ch_psi, ch_count);
        if (ft->parsed())
            return run_fit(c_fit, fit_samples, fit_n, fit_d, fit_qmin, fit_qmax,
                           fit_surface, fit_sq, fit_spsi, fit_surface_out);
        if (sc->parsed()) return run_scaling(c_scl, scl_series);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
