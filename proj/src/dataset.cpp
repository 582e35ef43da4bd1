#include "dqnn/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace dqnn {

double Dataset::max_value() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

Dataset normalize(const Dataset& data, double max_angle, double raw_max) {
    if (!(raw_max > 0.0))
        throw RangeError("normalize: raw_max must be positive");
    if (!(max_angle > 0.0))
        throw RangeError("normalize: max_angle must be positive");
    Dataset out = data;
    const double scale = max_angle / raw_max;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double v = data.values[i];
        if (!(v >= 0.0 && v <= raw_max))
            throw RangeError("normalize: value " + std::to_string(v) +
                             " at flat index " + std::to_string(i) +
                             " outside [0, " + std::to_string(raw_max) + "]");
        out.values[i] = v * scale;
    }
    return out;
}

Dataset avg_pool_2x2(const Dataset& data) {
    if (data.height % 2 != 0 || data.width % 2 != 0)
        throw ShapeError("avg_pool_2x2: grid " + std::to_string(data.height) + "x" +
                         std::to_string(data.width) + " has odd dimensions");
    Dataset out;
    out.height = data.height / 2;
    out.width = data.width / 2;
    out.source = data.source;
    out.labels = data.labels;
    out.preproc = data.preproc;
    out.values.resize(data.size() * static_cast<std::size_t>(out.sample_dim()));
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto in = data.sample(s);
        double* dst = out.values.data() + s * static_cast<std::size_t>(out.sample_dim());
        for (int r = 0; r < out.height; ++r)
            for (int c = 0; c < out.width; ++c) {
                const int r0 = 2 * r, c0 = 2 * c;
                dst[r * out.width + c] =
                    (in[r0 * data.width + c0] + in[r0 * data.width + c0 + 1] +
                     in[(r0 + 1) * data.width + c0] +
                     in[(r0 + 1) * data.width + c0 + 1]) /
                    4.0;
            }
    }
    return out;
}

Dataset preprocess(const Dataset& data, const PreprocSpec& spec) {
    Dataset out = normalize(data, spec.max_angle, spec.raw_max);
    if (spec.pool == Pooling::Avg2x2) out = avg_pool_2x2(out);
    out.preproc = spec;
    return out;
}

} // namespace dqnn
