#include "dq/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dq {

namespace {
using nlohmann::json;

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SpecError(std::string(what) + ": malformed JSON");
    return j;
}

long long int_at(const json& j, const std::string& path) {
    const json* p = &j;
    if (!p->is_number_integer()) throw SpecError(path + ": expected an integer");
    return p->get<long long>();
}

double num_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw SpecError(path + ": expected a number");
    return j.get<double>();
}
}  // namespace

std::string spectrum_to_json(const SpectralField& f) {
    std::ostringstream out;
    out << "{\"N\": " << f.N() << ", \"re\": [";
    const auto& d = f.data();
    for (size_t i = 0; i < d.size(); ++i)
        out << (i ? ", " : "") << fmt(std::real(d[i]));
    out << "], \"im\": [";
    for (size_t i = 0; i < d.size(); ++i)
        out << (i ? ", " : "") << fmt(std::imag(d[i]));
    out << "]}\n";
    return out.str();
}

SpectralField spectrum_from_json(const std::string& text) {
    const json j = parse(text, "spectrum");
    if (!j.is_object() || !j.contains("N") || !j.contains("re") || !j.contains("im"))
        throw SpecError("spectrum: required keys N, re, im");
    const long long N = int_at(j["N"], "spectrum.N");
    if (N < 0 || N > (1 << 24)) throw SpecError("spectrum.N: out of range");
    const json &re = j["re"], &im = j["im"];
    const size_t L = 2 * static_cast<size_t>(N) + 1;
    if (!re.is_array() || re.size() != L)
        throw SpecError("spectrum.re: expected an array of 2N+1 numbers");
    if (!im.is_array() || im.size() != L)
        throw SpecError("spectrum.im: expected an array of 2N+1 numbers");
    SpectralField f(static_cast<int>(N));
    for (size_t i = 0; i < L; ++i)
        f.data()[i] = cplx(num_at(re[i], "spectrum.re[" + std::to_string(i) + "]"),
                           num_at(im[i], "spectrum.im[" + std::to_string(i) + "]"));
    return f;
}

std::string step_to_json(const StepFunction& g) {
    std::ostringstream out;
    out << "{\"pieces\": [";
    const auto& ps = g.pieces();
    for (size_t i = 0; i < ps.size(); ++i) {
        if (i) out << ", ";
        out << "{\"a\": [" << ps[i].a.num << ", " << ps[i].a.den << "], \"b\": ["
            << ps[i].b.num << ", " << ps[i].b.den << "], \"c\": ["
            << fmt(std::real(ps[i].c)) << ", " << fmt(std::imag(ps[i].c)) << "]}";
    }
    out << "]}\n";
    return out.str();
}

StepFunction step_from_json(const std::string& text) {
    const json j = parse(text, "step");
    if (!j.is_object() || !j.contains("pieces") || !j["pieces"].is_array())
        throw SpecError("step.pieces: expected an array");
    std::vector<StepPiece> pieces;
    size_t i = 0;
    for (const json& pj : j["pieces"]) {
        const std::string path = "step.pieces[" + std::to_string(i++) + "]";
        if (!pj.is_object()) throw SpecError(path + ": expected an object");
        for (const char* key : {"a", "b", "c"}) {
            if (!pj.contains(key) || !pj[key].is_array() || pj[key].size() != 2)
                throw SpecError(path + "." + key + ": expected a pair");
        }
        const long long an = int_at(pj["a"][0], path + ".a[0]");
        const long long ad = int_at(pj["a"][1], path + ".a[1]");
        const long long bn = int_at(pj["b"][0], path + ".b[0]");
        const long long bd = int_at(pj["b"][1], path + ".b[1]");
        if (ad <= 0 || bd <= 0) throw SpecError(path + ": denominators must be positive");
        pieces.push_back({PiRational(an, ad), PiRational(bn, bd),
                          cplx(num_at(pj["c"][0], path + ".c[0]"),
                               num_at(pj["c"][1], path + ".c[1]"))});
    }
    return StepFunction(std::move(pieces));
}

std::string grid_to_csv(const GridField& g, bool with_abs2) {
    std::ostringstream out;
    out << (with_abs2 ? "x,re,im,abs2\n" : "x,re,im\n");
    const size_t M = g.v.size();
    for (size_t j = 0; j < M; ++j) {
        const double x = two_pi * static_cast<double>(j) / static_cast<double>(M);
        out << fmt(x) << ',' << fmt(std::real(g.v[j])) << ',' << fmt(std::imag(g.v[j]));
        if (with_abs2) out << ',' << fmt(std::norm(g.v[j]));
        out << '\n';
    }
    return out.str();
}

CsvGrid grid_from_csv(const std::string& text) {
    CsvGrid out;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && !line.empty() && (line[0] == 'x' || line[0] == '#')) continue;
        double x = 0, re = 0, im = 0;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im);
        if (got < 2)
            throw SpecError("csv line " + std::to_string(lineno) + ": expected x,re[,im]");
        out.x.push_back(x);
        out.v.emplace_back(re, got >= 3 ? im : 0.0);
    }
    if (out.x.empty()) throw SpecError("csv: no data rows");
    return out;
}

std::string emit_svg(const std::vector<PlotSeries>& series) {
    constexpr double W = 800, H = 500, L = 60, R = 20, T = 20, B = 40;
    static const char* palette[] = {"#1f6fb2", "#c23b22", "#2e8b57", "#8a2be2",
                                    "#b8860b", "#008b8b"};
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const PlotSeries& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax - xmin <= 0) {
        xmin -= 1;
        xmax += 1;
    }
    if (ymax - ymin <= 0) {
        ymin -= 1;
        ymax += 1;
    }
    const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
    const auto f6 = [](double v) { return fmt(v, "%.6g"); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<line x1=\"" << f6(L) << "\" y1=\"" << f6(H - B) << "\" x2=\"" << f6(W - R)
        << "\" y2=\"" << f6(H - B) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << f6(L) << "\" y1=\"" << f6(T) << "\" x2=\"" << f6(L) << "\" y2=\""
        << f6(H - B) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << f6(L) << "\" y=\"" << f6(H - B + 16) << "\" font-size=\"12\">"
        << f6(xmin) << "</text>\n";
    out << "<text x=\"" << f6(W - R - 40) << "\" y=\"" << f6(H - B + 16)
        << "\" font-size=\"12\">" << f6(xmax) << "</text>\n";
    out << "<text x=\"4\" y=\"" << f6(H - B) << "\" font-size=\"12\">" << f6(ymin)
        << "</text>\n";
    out << "<text x=\"4\" y=\"" << f6(T + 10) << "\" font-size=\"12\">" << f6(ymax)
        << "</text>\n";
    size_t si = 0;
    for (const PlotSeries& s : series) {
        const char* color = palette[si % 6];
        if (s.x.size() == 1) {
            out << "<circle cx=\"" << f6(px(s.x[0])) << "\" cy=\"" << f6(py(s.y[0]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        } else if (!s.x.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
            for (size_t i = 0; i < s.x.size(); ++i)
                out << (i ? " " : "") << f6(px(s.x[i])) << ',' << f6(py(s.y[i]));
            out << "\"/>\n";
        }
        if (!s.label.empty())
            out << "<text x=\"" << f6(L + 8) << "\" y=\"" << f6(T + 14 + 14 * static_cast<double>(si))
                << "\" font-size=\"12\" fill=\"" << color << "\">" << s.label << "</text>\n";
        ++si;
    }
    out << "</svg>\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write file: " + path);
    out << text;
}

}  // namespace dq
