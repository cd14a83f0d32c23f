#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dq/step_function.hpp"

namespace dq {

// Declarative description of one reproducible run. Unknown scenarios and
// malformed fields are rejected with the offending field path in the message.
struct ExperimentSpec {
    std::string scenario;  // talbot | dimension | density | dispersion |
                           // nls | kdv | vfe | diophantine
    StepFunction data = step_indicator_half();  // step data / curvature profile

    std::string sampler = "screened";  // explicit | uniform | screened | rational
    std::vector<double> times;         // radians, for the explicit sampler
    std::vector<std::pair<long long, long long>> rationals;  // t = 2 pi a / q
    int count = 12;                    // sampled-time count

    unsigned seed = 0x5EED;
    int order = 2;            // dispersion order k
    int modes = 1 << 12;      // retained band N (power of two for nls/kdv/vfe)
    size_t samples = size_t{1} << 14;  // graph grid size m (power of two)
    double lambda = 1.0;      // nls nonlinearity
    double dt = 1e-4;
    int mollify = 128;        // vfe curvature taper width

    // execution-only knobs; not part of the canonical report bytes
    int threads = 1;
    std::string out_dir;

    static ExperimentSpec from_json(const std::string& text);
};

struct RunReport {
    std::string scenario;
    std::string json;          // canonical report, bit-identical given the spec
    double wall_clock_ms = 0;  // measured; deliberately outside the canonical bytes
};

// Executes the scenario, writes CSV/JSON/SVG artifacts under out_dir (when
// set), and returns the canonical report. Identical specs give identical
// report bytes and artifacts for any thread count.
RunReport run(const ExperimentSpec& spec);

}  // namespace dq
