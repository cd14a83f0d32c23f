#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dq/diophantine.hpp"
#include "dq/experiment.hpp"
#include "dq/io.hpp"
#include "dq/propagator.hpp"
#include "dq/regularity.hpp"
#include "dq/spectral.hpp"

namespace {

using dq::ExperimentSpec;
using ojson = nlohmann::ordered_json;

struct GlobalOpts {
    int threads = 1;
    unsigned seed = 0x5EED;
    std::string out_dir;
    std::string config;
};

dq::StepFunction load_step(const std::string& path, const dq::StepFunction& dflt) {
    if (path.empty()) return dflt;
    return dq::step_from_json(dq::read_text_file(path));
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t used = 0;
        try {
            out.push_back(std::stod(text.substr(pos), &used));
        } catch (const std::exception&) {
            throw dq::SpecError(std::string(what) + ": malformed number list '" + text + "'");
        }
        pos += used;
        if (pos < text.size()) {
            if (text[pos] != ',')
                throw dq::SpecError(std::string(what) + ": expected ',' in '" + text + "'");
            ++pos;
        }
    }
    if (out.empty()) throw dq::SpecError(std::string(what) + ": empty list");
    return out;
}

// --time accepts "a/q" (exact rational multiple of 2pi) or a float in radians
void parse_time(const std::string& text, ExperimentSpec& spec) {
    const size_t slash = text.find('/');
    if (slash != std::string::npos) {
        try {
            const long long a = std::stoll(text.substr(0, slash));
            const long long q = std::stoll(text.substr(slash + 1));
            spec.sampler = "rational";
            spec.rationals.emplace_back(a, q);
            return;
        } catch (const std::exception&) {
            throw dq::SpecError("--time: malformed rational '" + text + "'");
        }
    }
    try {
        spec.sampler = "explicit";
        spec.times.push_back(std::stod(text));
    } catch (const std::exception&) {
        throw dq::SpecError("--time: malformed time '" + text + "'");
    }
}

void apply_globals(const GlobalOpts& g, ExperimentSpec& spec) {
    spec.threads = g.threads;
    spec.seed = g.seed;
    spec.out_dir = g.out_dir;
}

int run_and_print(const ExperimentSpec& spec) {
    const dq::RunReport rep = dq::run(spec);
    std::fputs(rep.json.c_str(), stdout);
    return 0;
}

// --scales "lo:hi" -> dyadic fit window
dq::DimensionOptions parse_scales(const std::string& text) {
    dq::DimensionOptions opt;
    if (text.empty()) return opt;
    const size_t colon = text.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument("no colon");
        opt.j_min = std::stoi(text.substr(0, colon));
        opt.j_max = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw dq::SpecError("--scales: expected 'lo:hi', got '" + text + "'");
    }
    return opt;
}

int dimension_from_csv(const std::string& path, const std::string& scales,
                       const std::string& svg_path) {
    const dq::CsvGrid grid = dq::grid_from_csv(dq::read_text_file(path));
    std::vector<double> re(grid.v.size());
    for (size_t i = 0; i < re.size(); ++i) re[i] = std::real(grid.v[i]);
    const dq::DimensionEstimate est = dq::box_dimension(re, parse_scales(scales));

    dq::GridField g(grid.v.size());
    g.v = grid.v;
    const dq::SpectralField f = dq::to_spectral(g);
    const dq::DyadicBlockNorms blocks = dq::lp_blocks(f);
    const double s_inf = dq::besov_exponent(blocks, dq::LpKind::Linf);
    const double s_1 = dq::besov_exponent(blocks, dq::LpKind::L1);
    const auto [lower, upper] = dq::dimension_sandwich(s_inf, s_1);

    ojson rep;
    rep["box_dim"] = est.slope;
    rep["residual"] = est.residual;
    rep["window"] = {est.j_min, est.j_max};
    rep["upper"] = upper;
    rep["lower"] = lower;
    ojson bl;
    bl["l1"] = blocks.l1;
    bl["l2"] = blocks.l2;
    bl["linf"] = blocks.linf;
    rep["blocks"] = bl;
    std::fputs((rep.dump(2) + "\n").c_str(), stdout);

    if (!svg_path.empty()) {
        dq::PlotSeries counts;
        counts.label = "log2 N(eps) vs level";
        for (const auto& [lvl, lg] : est.counts) {
            counts.x.push_back(lvl);
            counts.y.push_back(lg);
        }
        dq::PlotSeries fit;
        fit.label = "fit slope";
        if (!counts.x.empty()) {
            const double x0 = counts.x.front(), x1 = counts.x.back();
            const double y0 = counts.y.front();
            fit.x = {x0, x1};
            fit.y = {y0, y0 + est.slope * (x1 - x0)};
        }
        dq::write_text_file(svg_path, dq::emit_svg({counts, fit}));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dispersive quantization laboratory"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    GlobalOpts g;
    app.add_option("--threads", g.threads, "worker threads (outputs identical for any value)")
        ->check(CLI::Range(1, 256));
    app.add_option("--seed", g.seed, "seed for sampled times");
    app.add_option("--out-dir", g.out_dir, "artifact directory");
    app.add_option("--config", g.config, "experiment spec JSON replacing the flags");

    // talbot
    auto* talbot = app.add_subcommand("talbot", "evolve step data; exact rational quantization");
    std::string t_data, t_time = "1/3", t_out = "talbot.csv";
    int t_order = 2, t_modes = 1 << 12;
    talbot->add_option("--data", t_data, "step-function JSON file (default chi_[0,pi))");
    talbot->add_option("--time", t_time, "a/q (rational multiple of 2pi) or float radians");
    talbot->add_option("--order", t_order, "dispersion order k")->check(CLI::Range(2, 12));
    talbot->add_option("--modes", t_modes, "retained band N");
    talbot->add_option("--out", t_out, "output CSV (x, re, im, abs2)");

    // diophantine
    auto* dio = app.add_subcommand("diophantine", "continued fraction diagnostics");
    double d_value = 0;
    int d_depth = 40;
    dio->add_option("--value", d_value, "number in (0,1)")->required();
    dio->add_option("--depth", d_depth, "maximum quotient count")->check(CLI::Range(1, 64));

    // dimension
    auto* dim = app.add_subcommand("dimension", "box dimension of a sampled graph");
    std::string m_input, m_scales, m_svg;
    dim->add_option("--input", m_input, "CSV grid or experiment spec JSON")->required();
    dim->add_option("--scales", m_scales, "fit window lo:hi (dyadic levels)");
    dim->add_option("--svg", m_svg, "write a log-log fit plot here");

    // nls / kdv
    auto* nls = app.add_subcommand("nls", "cubic flow snapshots and conservation report");
    auto* kdv = app.add_subcommand("kdv", "third-order flow snapshots and conservation report");
    std::string n_data, n_tlist = "0.5";
    double n_lambda = 1.0, n_dt = 1e-4;
    int n_modes = 1 << 12;
    for (CLI::App* sub : {nls, kdv}) {
        sub->add_option("--data", n_data, "step-function JSON file (default chi_[0,pi))");
        sub->add_option("--t-list", n_tlist, "comma-separated output times");
        sub->add_option("--dt", n_dt, "time step");
        sub->add_option("--modes", n_modes, "retained band N (power of two)");
    }
    nls->add_option("--lambda", n_lambda, "nonlinearity coefficient");

    // vfe
    auto* vfe = app.add_subcommand("vfe", "frame flow on the sphere + filament reconstruction");
    std::string v_curv, v_tlist = "0.0,0.25,0.5,0.75,1.0";
    double v_dt = 2.5e-4;
    int v_mollify = 64, v_modes = 1 << 11;
    bool v_svg = false;
    vfe->add_option("--curvature", v_curv, "step curvature JSON (default unit-mean square wave)");
    vfe->add_option("--mollify", v_mollify, "curvature taper width (0 keeps corners)");
    vfe->add_option("--dt", v_dt, "frame flow step");
    vfe->add_option("--t-list", v_tlist, "uniformly spaced output times");
    vfe->add_option("--modes", v_modes, "curve grid M (power of two)");
    vfe->add_flag("--svg", v_svg, "emit filament and curvature plots (needs --out-dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!g.config.empty() && app.get_subcommands().empty()) {
            ExperimentSpec spec = ExperimentSpec::from_json(dq::read_text_file(g.config));
            spec.threads = g.threads;
            if (!g.out_dir.empty()) spec.out_dir = g.out_dir;
            return run_and_print(spec);
        }
        if (talbot->parsed()) {
            ExperimentSpec spec;
            spec.scenario = "talbot";
            spec.data = load_step(t_data, dq::step_indicator_half());
            spec.order = t_order;
            spec.modes = t_modes;
            parse_time(t_time, spec);
            apply_globals(g, spec);
            const dq::RunReport rep = dq::run(spec);
            // single-file CSV contract independent of --out-dir
            const dq::SpectralField q0 = dq::step_fourier(spec.data, spec.modes);
            dq::SpectralField ev{0};
            if (!spec.rationals.empty()) {
                const auto [a, q] = spec.rationals.front();
                ev = dq::evolve_linear(q0, dq::DispersionLaw(2), dq::RationalTime(a, q));
            } else {
                ev = dq::evolve_linear(q0, dq::DispersionLaw(spec.order), spec.times.front());
            }
            const size_t M = dq::next_pow2(2 * static_cast<size_t>(spec.modes) + 2);
            dq::write_text_file(t_out, dq::grid_to_csv(dq::from_spectral(ev, M), true));
            std::fputs(rep.json.c_str(), stdout);
            return 0;
        }
        if (dio->parsed()) {
            if (!(d_value > 0.0 && d_value < 1.0))
                throw dq::SpecError("--value: must lie in (0,1)");
            const dq::ContinuedFractionExpansion cf = dq::continued_fraction(d_value, d_depth);
            ojson rep;
            rep["value"] = d_value;
            rep["quotients"] = cf.quotients;
            ojson conv = ojson::array();
            for (const dq::Convergent& c : cf.convergents) conv.push_back({c.p, c.q});
            rep["convergents"] = conv;
            rep["levy_sequence"] = dq::khinchin_levy_diagnostic(d_value, d_depth);
            const std::string text = rep.dump(2) + "\n";
            std::fputs(text.c_str(), stdout);
            if (!g.out_dir.empty()) {
                std::filesystem::create_directories(g.out_dir);
                dq::write_text_file(g.out_dir + "/diophantine.json", text);
            }
            return 0;
        }
        if (dim->parsed()) {
            const std::string text = dq::read_text_file(m_input);
            const bool looks_json = text.find('{') != std::string::npos &&
                                    text.find("scenario") != std::string::npos;
            if (looks_json) {
                ExperimentSpec spec = ExperimentSpec::from_json(text);
                apply_globals(g, spec);
                return run_and_print(spec);
            }
            return dimension_from_csv(m_input, m_scales, m_svg);
        }
        if (nls->parsed() || kdv->parsed()) {
            ExperimentSpec spec;
            spec.scenario = nls->parsed() ? "nls" : "kdv";
            spec.data = load_step(n_data, dq::step_indicator_half());
            spec.sampler = "explicit";
            spec.times = parse_list(n_tlist, "--t-list");
            spec.lambda = n_lambda;
            spec.dt = n_dt;
            spec.modes = n_modes;
            apply_globals(g, spec);
            return run_and_print(spec);
        }
        if (vfe->parsed()) {
            ExperimentSpec spec;
            spec.scenario = "vfe";
            spec.data = load_step(v_curv, dq::square_wave_profile());
            spec.sampler = "explicit";
            spec.times = parse_list(v_tlist, "--t-list");
            spec.dt = v_dt;
            spec.mollify = v_mollify;
            spec.modes = v_modes;
            apply_globals(g, spec);
            if (v_svg && g.out_dir.empty())
                throw dq::SpecError("--svg: needs --out-dir for the plot files");
            return run_and_print(spec);
        }
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const dq::InvariantViolation& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 2;
    } catch (const dq::SpecError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
