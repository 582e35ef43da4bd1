#include <charconv>
#include <fstream>
#include <sstream>

#include "dqnn/dataset.hpp"

namespace dqnn {

namespace {

constexpr int kGrid = 16;
constexpr int kFeatureFields = kGrid * kGrid; // 256
constexpr int kLabelFields = 10;
constexpr int kTotalFields = kFeatureFields + kLabelFields;

[[noreturn]] void fail(const std::string& path, std::size_t line_no,
                       const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

} // namespace

Dataset load_semeion(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("semeion: cannot open '" + path + "'");

    Dataset data;
    data.height = kGrid;
    data.width = kGrid;
    data.source = DataSource::SemeionText;

    std::string line;
    std::size_t line_no = 0;
    std::vector<double> fields;
    fields.reserve(kTotalFields);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;

        fields.clear();
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                fail(path, line_no, "non-numeric token '" + tok + "'");
            fields.push_back(v);
        }
        if (fields.size() != kTotalFields)
            fail(path, line_no, "expected " + std::to_string(kTotalFields) +
                                    " fields, got " + std::to_string(fields.size()));

        int label = -1;
        for (int k = 0; k < kLabelFields; ++k) {
            const double v = fields[kFeatureFields + k];
            if (v == 0.0) continue;
            if (v != 1.0)
                fail(path, line_no, "label field " + std::to_string(k + 1) +
                                        " is neither 0 nor 1");
            if (label >= 0) fail(path, line_no, "more than one label field set");
            label = k;
        }
        if (label < 0) fail(path, line_no, "no label field set");

        data.values.insert(data.values.end(), fields.begin(),
                           fields.begin() + kFeatureFields);
        data.labels.push_back(label);
    }
    if (data.labels.empty())
        throw ParseError("semeion: '" + path + "' holds no samples");
    return data;
}

void write_semeion(const Dataset& data, const std::string& path) {
    if (data.height != kGrid || data.width != kGrid)
        throw ShapeError("write_semeion: grids must be 16x16");
    std::ofstream out(path);
    if (!out)
        throw ParseError("semeion: cannot open '" + path + "' for writing");
    out.precision(4);
    out.setf(std::ios::fixed);
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto sample = data.sample(s);
        for (double v : sample) out << v << ' ';
        for (int k = 0; k < kLabelFields; ++k) {
            out << (data.labels[s] == k ? 1 : 0);
            out << (k + 1 < kLabelFields ? ' ' : '\n');
        }
    }
}

} // namespace dqnn
