#include "dq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "json.hpp"

#include "dq/diophantine.hpp"
#include "dq/io.hpp"
#include "dq/parallel.hpp"
#include "dq/propagator.hpp"
#include "dq/regularity.hpp"
#include "dq/schroedinger_map.hpp"
#include "dq/solvers.hpp"

namespace dq {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

double median(std::vector<double> v) {
    if (v.empty()) throw SpecError("median of an empty sample");
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string index_name(const char* stem, size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%03zu.%s", stem, i, ext);
    return buf;
}

// resolved sample times in radians; sampled modes draw v in (0,1), t = 2 pi v
std::vector<double> resolve_times(const ExperimentSpec& s, long long q_max) {
    if (s.sampler == "explicit") {
        if (s.times.empty()) throw SpecError("times.values: required for the explicit sampler");
        return s.times;
    }
    if (s.sampler == "rational") {
        if (s.rationals.empty())
            throw SpecError("times.values: required for the rational sampler");
        std::vector<double> out;
        for (const auto& [a, q] : s.rationals) out.push_back(RationalTime(a, q).radians());
        return out;
    }
    if (s.sampler != "uniform" && s.sampler != "screened")
        throw SpecError("times.sampler: unknown sampler '" + s.sampler + "'");
    if (s.count < 1 || s.count > 10000) throw SpecError("times.count: need 1..10000");
    UniformSource src(s.seed);
    std::vector<double> vs;
    if (s.sampler == "uniform") {
        for (int i = 0; i < s.count; ++i) vs.push_back(src.unit());
    } else {
        ScreenPolicy pol;
        pol.q_max = std::min(q_max, 1LL << 20);
        vs = screened_units(s.count, src, pol);
    }
    for (double& v : vs) v *= two_pi;
    return vs;
}

void write_artifact(const ExperimentSpec& s, const std::string& name,
                    const std::string& text) {
    if (s.out_dir.empty()) return;
    write_text_file(s.out_dir + "/" + name, text);
}

void run_talbot(const ExperimentSpec& s, ojson& rep) {
    if (s.data.empty()) throw SpecError("data: talbot needs a nonempty step function");
    const int N = s.modes;
    if (N < 2) throw SpecError("modes: need at least 2");
    const size_t M = next_pow2(2 * static_cast<size_t>(N) + 2);
    const SpectralField q0 = step_fourier(s.data, N);
    ojson results = ojson::array();
    for (const auto& [a, q] : s.rationals) {
        if (s.order != 2)
            throw SpecError("order: the rational decomposition is quadratic (order 2)");
        const RationalTime rt(a, q);
        const auto [dec, rec] = talbot_rational(s.data, rt);
        const SpectralField ev = evolve_linear(q0, DispersionLaw(2), rt);
        const SpectralField rh = step_fourier(rec, N);
        double d2 = 0, wl2 = 0;
        for (int n = -N; n <= N; ++n) d2 += std::norm(rh.coeff(n) - ev.coeff(n));
        for (const cplx& w : dec.w) wl2 += std::norm(w);
        ojson row;
        row["a"] = a;
        row["q"] = q;
        row["pieces"] = rec.pieces().size();
        row["weight_l2"] = wl2;
        row["l2_vs_spectral"] = std::sqrt(two_pi * d2);
        results.push_back(row);
        char stem[64];
        std::snprintf(stem, sizeof(stem), "talbot_a%lld_q%lld", a, q);
        write_artifact(s, std::string(stem) + ".json", step_to_json(rec));
        write_artifact(s, std::string(stem) + ".csv",
                       grid_to_csv(from_spectral(ev, M), true));
    }
    for (size_t i = 0; i < s.times.size(); ++i) {
        const SpectralField ev = evolve_linear(q0, DispersionLaw(s.order), s.times[i]);
        ojson row;
        row["t"] = s.times[i];
        row["l2"] = l2_function_norm(ev);
        results.push_back(row);
        write_artifact(s, index_name("talbot_t", i, "csv"),
                       grid_to_csv(from_spectral(ev, M), true));
    }
    if (results.empty()) throw SpecError("times: talbot needs rational or explicit times");
    rep["results"] = results;
}

void run_graphs(const ExperimentSpec& s, ojson& rep) {
    if (s.samples < (size_t{1} << 12) || !is_pow2(s.samples))
        throw SpecError("samples: need a power of two >= 4096");
    const int N = static_cast<int>(s.samples) / 2 - 1;
    const std::vector<double> times = resolve_times(s, 2LL * N);
    const SpectralField q0 = step_fourier(s.data, N);
    const DispersionLaw law(s.order);
    const bool density = s.scenario == "density";

    struct Row {
        double dim_re = 0, dim_im = 0, dim_density = 0, s_hat = 0;
    };
    std::vector<Row> rows(times.size());
    std::vector<double> first_re;
    parallel_for(times.size(), s.threads, [&](size_t i) {
        const SpectralField u = evolve_linear(q0, law, times[i]);
        const GridField g = from_spectral(u, s.samples);
        Row& r = rows[i];
        if (density) {
            std::vector<double> a2(s.samples);
            for (size_t j = 0; j < s.samples; ++j) a2[j] = std::norm(g.v[j]);
            r.dim_density = box_dimension(a2).slope;
        } else {
            std::vector<double> re(s.samples), im(s.samples);
            for (size_t j = 0; j < s.samples; ++j) {
                re[j] = std::real(g.v[j]);
                im[j] = std::imag(g.v[j]);
            }
            r.dim_re = box_dimension(re).slope;
            r.dim_im = box_dimension(im).slope;
            r.s_hat = besov_exponent(lp_blocks(u), LpKind::Linf);
            if (i == 0) first_re = re;
        }
    });

    ojson results = ojson::array();
    std::vector<double> dre, dim, dds, sh;
    for (size_t i = 0; i < times.size(); ++i) {
        ojson row;
        row["t"] = times[i];
        if (density) {
            row["box_dim_density"] = rows[i].dim_density;
            dds.push_back(rows[i].dim_density);
        } else {
            row["box_dim_re"] = rows[i].dim_re;
            row["box_dim_im"] = rows[i].dim_im;
            row["holder_exponent"] = rows[i].s_hat;
            dre.push_back(rows[i].dim_re);
            dim.push_back(rows[i].dim_im);
            sh.push_back(rows[i].s_hat);
        }
        results.push_back(row);
    }
    rep["times"] = times;
    rep["results"] = results;
    ojson summary;
    if (density) {
        summary["median_box_dim_density"] = median(dds);
    } else {
        summary["median_box_dim_re"] = median(dre);
        summary["median_box_dim_im"] = median(dim);
        const double shm = median(sh);
        summary["median_holder_exponent"] = shm;
        summary["upper_dimension"] = dimension_sandwich(shm, shm).second;
    }
    rep["summary"] = summary;

    if (!s.out_dir.empty() && !first_re.empty()) {
        PlotSeries ps;
        ps.label = "Re u";
        const size_t stride = std::max<size_t>(1, s.samples / 2048);
        for (size_t j = 0; j < s.samples; j += stride) {
            ps.x.push_back(two_pi * static_cast<double>(j) / static_cast<double>(s.samples));
            ps.y.push_back(first_re[j]);
        }
        write_artifact(s, "graph_first_time.svg", emit_svg({ps}));
    }
}

void run_pde(const ExperimentSpec& s, ojson& rep) {
    if (!is_pow2(s.modes) || s.modes < 4)
        throw SpecError("modes: need a power of two >= 4");
    std::vector<double> times = resolve_times(s, 2LL * s.modes);
    std::sort(times.begin(), times.end());
    const SpectralField q0 = step_fourier(s.data, s.modes);
    const size_t M = next_pow2(2 * static_cast<size_t>(s.modes) + 2);
    ojson results = ojson::array();
    double worst_mass = 0, worst_energy = 0, worst_momentum = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        ojson row;
        row["t"] = times[i];
        if (s.scenario == "nls") {
            NlsParams p;
            p.lambda = s.lambda;
            p.N = s.modes;
            p.dt = s.dt;
            ConservationReport cr;
            const SpectralField q = nls_evolve(q0, p, times[i], &cr);
            row["mass_drift_per_time"] = cr.mass_drift_per_time;
            row["energy_drift_per_time"] = cr.energy_drift_per_time;
            row["sup_abs"] = cr.sup_abs;
            row["steps"] = cr.steps;
            worst_mass = std::max(worst_mass, cr.mass_drift_per_time);
            worst_energy = std::max(worst_energy, cr.energy_drift_per_time);
            write_artifact(s, index_name("nls_t", i, "csv"),
                           grid_to_csv(from_spectral(q, M), true));
        } else {
            KdvReport kr;
            const SpectralField u = kdv_evolve(q0, s.modes, s.dt, times[i], &kr);
            row["momentum_drift_per_time"] = kr.momentum_drift_per_time;
            row["mean_initial"] = kr.mean_initial;
            row["mean_final"] = kr.mean_final;
            row["steps"] = kr.steps;
            worst_momentum = std::max(worst_momentum, kr.momentum_drift_per_time);
            write_artifact(s, index_name("kdv_t", i, "csv"),
                           grid_to_csv(from_spectral(u, M), false));
        }
        results.push_back(row);
    }
    rep["times"] = times;
    rep["results"] = results;
    ojson summary;
    if (s.scenario == "nls") {
        summary["max_mass_drift_per_time"] = worst_mass;
        summary["max_energy_drift_per_time"] = worst_energy;
    } else {
        summary["max_momentum_drift_per_time"] = worst_momentum;
    }
    rep["summary"] = summary;
}

void run_vfe(const ExperimentSpec& s, ojson& rep) {
    if (!is_pow2(s.modes) || s.modes < 256)
        throw SpecError("modes: vfe needs a power of two >= 256 grid");
    std::vector<double> times = resolve_times(s, 2LL * s.modes);
    std::sort(times.begin(), times.end());
    if (times.front() < 0) throw SpecError("times.values: vfe times must be >= 0");
    for (size_t i = 2; i < times.size(); ++i)
        if (std::abs((times[i] - times[i - 1]) - (times[1] - times[0])) >
            1e-9 * std::max(1.0, times[1] - times[0]))
            throw SpecError("times.values: vfe needs uniformly spaced times");

    const SphereCurve curve =
        planar_curve_from_curvature(s.data, s.mollify, static_cast<size_t>(s.modes));
    SphereFrameState st = hasimoto_state(curve, Vec3{0, 0, 1});
    std::vector<SphereFrameState> history;
    SmInvariantReport acc;
    for (double t : times) {
        if (t > st.t) {
            SmInvariantReport seg;
            st = sm_evolve(st, s.dt, t, &seg);
            acc.unit_u_defect = std::max(acc.unit_u_defect, seg.unit_u_defect);
            acc.unit_e_defect = std::max(acc.unit_e_defect, seg.unit_e_defect);
            acc.orth_defect = std::max(acc.orth_defect, seg.orth_defect);
            acc.mean_defect = std::max(acc.mean_defect, seg.mean_defect);
            acc.h1_drift_per_time = std::max(acc.h1_drift_per_time, seg.h1_drift_per_time);
            acc.mass_drift_per_time =
                std::max(acc.mass_drift_per_time, seg.mass_drift_per_time);
            acc.curvature_defect = std::max(acc.curvature_defect, seg.curvature_defect);
            acc.frame_residual_f = std::max(acc.frame_residual_f, seg.frame_residual_f);
            acc.frame_residual_g = std::max(acc.frame_residual_g, seg.frame_residual_g);
            acc.steps += seg.steps;
        }
        history.push_back(st);
    }
    const std::vector<Filament> fils = vfe_reconstruct(history, Vec3{0, 0, 0});

    ojson results = ojson::array();
    const size_t M = static_cast<size_t>(s.modes);
    for (size_t i = 0; i < history.size(); ++i) {
        const SphereFrameState& h = history[i];
        ojson row;
        row["t"] = h.t;
        row["closure_defect"] = fils[i].closure_defect;
        row["unit_speed_defect"] = fils[i].unit_speed_defect;
        results.push_back(row);
        if (!s.out_dir.empty()) {
            const GridField qg = from_spectral(h.q, M);
            std::string csv = "x,ux,uy,uz,ex,ey,ez,q_re,q_im,gx,gy,gz\n";
            char buf[320];
            for (size_t j = 0; j < M; ++j) {
                const double x = two_pi * static_cast<double>(j) / static_cast<double>(M);
                std::snprintf(buf, sizeof(buf),
                              "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                              "%.17g,%.17g,%.17g\n",
                              x, h.u.u[j].x, h.u.u[j].y, h.u.u[j].z, h.e[j].x, h.e[j].y,
                              h.e[j].z, std::real(qg.v[j]), std::imag(qg.v[j]),
                              fils[i].gamma[j].x, fils[i].gamma[j].y, fils[i].gamma[j].z);
                csv += buf;
            }
            write_artifact(s, index_name("vfe_t", i, "csv"), csv);
        }
    }
    rep["times"] = times;
    rep["results"] = results;
    ojson inv;
    inv["unit_u_defect"] = acc.unit_u_defect;
    inv["unit_e_defect"] = acc.unit_e_defect;
    inv["orth_defect"] = acc.orth_defect;
    inv["mean_defect"] = acc.mean_defect;
    inv["h1_drift_per_time"] = acc.h1_drift_per_time;
    inv["mass_drift_per_time"] = acc.mass_drift_per_time;
    inv["curvature_defect"] = acc.curvature_defect;
    inv["frame_residual_f"] = acc.frame_residual_f;
    inv["frame_residual_g"] = acc.frame_residual_g;
    inv["steps"] = acc.steps;
    rep["invariants"] = inv;

    if (!s.out_dir.empty() && !fils.empty()) {
        const Filament& last = fils.back();
        PlotSeries proj;
        proj.label = "filament xy";
        for (const Vec3& p : last.gamma) {
            proj.x.push_back(p.x);
            proj.y.push_back(p.y);
        }
        write_artifact(s, "filament.svg", emit_svg({proj}));
        PlotSeries rq;
        rq.label = "Re q";
        const GridField qg = from_spectral(history.back().q, M);
        for (size_t j = 0; j < M; ++j) {
            rq.x.push_back(two_pi * static_cast<double>(j) / static_cast<double>(M));
            rq.y.push_back(std::real(qg.v[j]));
        }
        write_artifact(s, "curvature_re.svg", emit_svg({rq}));
    }
}

void run_diophantine(const ExperimentSpec& s, ojson& rep) {
    std::vector<double> values;
    if (s.sampler == "explicit") {
        values = s.times;
        if (values.empty()) throw SpecError("times.values: required for the explicit sampler");
    } else {
        for (double t : resolve_times(s, 1LL << 17)) values.push_back(t / two_pi);
    }
    ojson results = ojson::array();
    for (double v : values) {
        if (!(v > 0.0 && v < 1.0))
            throw SpecError("times.values: diophantine values must lie in (0,1)");
        const ContinuedFractionExpansion cf = continued_fraction(v, 40);
        ojson row;
        row["value"] = v;
        row["quotients"] = cf.quotients;
        ojson conv = ojson::array();
        for (const Convergent& c : cf.convergents) conv.push_back({c.p, c.q});
        row["convergents"] = conv;
        row["levy_sequence"] = khinchin_levy_diagnostic(v, 30);
        row["terminated"] = cf.terminated;
        results.push_back(row);
    }
    rep["values"] = values;
    rep["results"] = results;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SpecError("spec: malformed JSON");
    if (!j.is_object()) throw SpecError("spec: expected an object");
    ExperimentSpec s;
    if (!j.contains("scenario") || !j["scenario"].is_string())
        throw SpecError("scenario: required string");
    s.scenario = j["scenario"].get<std::string>();
    static const std::set<std::string> known = {"talbot", "dimension", "density",
                                               "dispersion", "nls", "kdv", "vfe",
                                               "diophantine"};
    if (!known.count(s.scenario)) throw SpecError("scenario: unknown '" + s.scenario + "'");

    if (j.contains("data")) {
        if (!j["data"].is_object()) throw SpecError("data: expected a step-function object");
        s.data = step_from_json(j["data"].dump());
    }
    if (j.contains("times")) {
        const json& tj = j["times"];
        if (!tj.is_object()) throw SpecError("times: expected an object");
        if (tj.contains("sampler")) {
            if (!tj["sampler"].is_string()) throw SpecError("times.sampler: expected a string");
            s.sampler = tj["sampler"].get<std::string>();
        }
        if (s.sampler == "explicit" || s.sampler == "rational") {
            if (!tj.contains("values") || !tj["values"].is_array())
                throw SpecError("times.values: expected an array");
            size_t i = 0;
            for (const json& v : tj["values"]) {
                const std::string path = "times.values[" + std::to_string(i++) + "]";
                if (s.sampler == "explicit") {
                    if (!v.is_number()) throw SpecError(path + ": expected a number");
                    s.times.push_back(v.get<double>());
                } else {
                    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
                        !v[1].is_number_integer())
                        throw SpecError(path + ": expected [a, q] integers");
                    s.rationals.emplace_back(v[0].get<long long>(), v[1].get<long long>());
                }
            }
        } else if (tj.contains("count")) {
            if (!tj["count"].is_number_integer())
                throw SpecError("times.count: expected an integer");
            s.count = tj["count"].get<int>();
        }
    }

    const auto get_int = [&](const char* key, long long lo, long long hi, long long dflt) {
        if (!j.contains(key)) return dflt;
        if (!j[key].is_number_integer())
            throw SpecError(std::string(key) + ": expected an integer");
        const long long v = j[key].get<long long>();
        if (v < lo || v > hi)
            throw SpecError(std::string(key) + ": out of range [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
        return v;
    };
    const auto get_num = [&](const char* key, double dflt) {
        if (!j.contains(key)) return dflt;
        if (!j[key].is_number()) throw SpecError(std::string(key) + ": expected a number");
        return j[key].get<double>();
    };
    s.seed = static_cast<unsigned>(get_int("seed", 0, 0xFFFFFFFFLL, s.seed));
    s.order = static_cast<int>(get_int("order", 2, 12, s.order));
    s.modes = static_cast<int>(get_int("modes", 2, 1 << 20, s.modes));
    s.samples =
        static_cast<size_t>(get_int("samples", 8, 1LL << 24, static_cast<long long>(s.samples)));
    if (!is_pow2(s.samples)) throw SpecError("samples: must be a power of two");
    s.lambda = get_num("lambda", s.lambda);
    s.dt = get_num("dt", s.dt);
    if (!(s.dt > 0)) throw SpecError("dt: must be positive");
    s.mollify = static_cast<int>(get_int("mollify", 0, 1 << 20, s.mollify));
    s.threads = static_cast<int>(get_int("threads", 1, 256, s.threads));
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) throw SpecError("out_dir: expected a string");
        s.out_dir = j["out_dir"].get<std::string>();
    }
    return s;
}

RunReport run(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

    ojson rep;
    rep["scenario"] = spec.scenario;
    ojson params;
    params["seed"] = spec.seed;
    params["sampler"] = spec.sampler;
    params["count"] = spec.count;
    params["order"] = spec.order;
    params["modes"] = spec.modes;
    params["samples"] = spec.samples;
    params["lambda"] = spec.lambda;
    params["dt"] = spec.dt;
    params["mollify"] = spec.mollify;
    rep["parameters"] = params;

    if (spec.scenario == "talbot")
        run_talbot(spec, rep);
    else if (spec.scenario == "dimension" || spec.scenario == "density" ||
             spec.scenario == "dispersion")
        run_graphs(spec, rep);
    else if (spec.scenario == "nls" || spec.scenario == "kdv")
        run_pde(spec, rep);
    else if (spec.scenario == "vfe")
        run_vfe(spec, rep);
    else if (spec.scenario == "diophantine")
        run_diophantine(spec, rep);
    else
        throw SpecError("scenario: unknown '" + spec.scenario + "'");

    RunReport out;
    out.scenario = spec.scenario;
    out.json = rep.dump(2) + "\n";
    if (!spec.out_dir.empty()) write_text_file(spec.out_dir + "/report.json", out.json);
    out.wall_clock_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return out;
}

}  // namespace dq
