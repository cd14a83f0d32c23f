#pragma once

#include <string>
#include <vector>

#include "dq/spectral.hpp"
#include "dq/step_function.hpp"

namespace dq {

// {"N": int, "re": [...], "im": [...]}, coefficients ordered n = -N..N
std::string spectrum_to_json(const SpectralField& f);
SpectralField spectrum_from_json(const std::string& text);

// {"pieces": [{"a": [p,q], "b": [p,q], "c": [re,im]}, ...]}, angles p*pi/q
std::string step_to_json(const StepFunction& g);
StepFunction step_from_json(const std::string& text);

// CSV with header x,re,im(,abs2), 17 significant digits, x_j = 2 pi j / M
std::string grid_to_csv(const GridField& g, bool with_abs2 = false);

struct CsvGrid {
    std::vector<double> x;
    std::vector<cplx> v;
};
CsvGrid grid_from_csv(const std::string& text);

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

// fixed-size (800x500) static plot: axes plus one polyline per series (a
// marker when a series has a single point); byte-deterministic
std::string emit_svg(const std::vector<PlotSeries>& series);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dq
