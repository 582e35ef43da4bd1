#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <vector>

#include "dqnn/dataset.hpp"

namespace dqnn {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

// gzread decompresses gzip streams and passes plain files through unchanged.
std::vector<unsigned char> read_whole_file(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr)
        throw FormatError("idx: cannot open '" + path + "'");
    std::vector<unsigned char> bytes;
    unsigned char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0)
        bytes.insert(bytes.end(), buf, buf + n);
    const bool failed = n < 0;
    gzclose(f);
    if (failed)
        throw FormatError("idx: decompression error reading '" + path + "'");
    return bytes;
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::string& path) {
    if (offset + 4 > bytes.size())
        throw FormatError("idx: '" + path + "' truncated inside header");
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

} // namespace

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
    const auto images = read_whole_file(images_path);
    const auto labels = read_whole_file(labels_path);

    const std::uint32_t images_magic = read_be32(images, 0, images_path);
    if (images_magic != kImagesMagic)
        throw FormatError("idx: '" + images_path + "' has magic " + hex(images_magic) +
                          ", expected " + hex(kImagesMagic) + " (images)");
    const std::uint32_t labels_magic = read_be32(labels, 0, labels_path);
    if (labels_magic != kLabelsMagic)
        throw FormatError("idx: '" + labels_path + "' has magic " + hex(labels_magic) +
                          ", expected " + hex(kLabelsMagic) + " (labels)");

    const std::uint32_t n_images = read_be32(images, 4, images_path);
    const std::uint32_t rows = read_be32(images, 8, images_path);
    const std::uint32_t cols = read_be32(images, 12, images_path);
    const std::uint32_t n_labels = read_be32(labels, 4, labels_path);

    if (n_images != n_labels)
        throw FormatError("idx: " + std::to_string(n_images) + " images but " +
                          std::to_string(n_labels) + " labels");
    if (n_images == 0)
        throw FormatError("idx: '" + images_path + "' holds no samples");

    const std::size_t pixels =
        static_cast<std::size_t>(n_images) * rows * cols;
    if (images.size() != 16 + pixels)
        throw FormatError("idx: '" + images_path + "' payload is " +
                          std::to_string(images.size() - 16) + " bytes, header implies " +
                          std::to_string(pixels));
    if (labels.size() != 8 + n_labels)
        throw FormatError("idx: '" + labels_path + "' payload is " +
                          std::to_string(labels.size() - 8) + " bytes, header implies " +
                          std::to_string(n_labels));

    Dataset data;
    data.height = static_cast<int>(rows);
    data.width = static_cast<int>(cols);
    data.source = DataSource::MnistIdx;
    data.values.resize(pixels);
    for (std::size_t i = 0; i < pixels; ++i)
        data.values[i] = static_cast<double>(images[16 + i]);
    data.labels.resize(n_labels);
    for (std::size_t i = 0; i < n_labels; ++i) {
        const unsigned char label = labels[8 + i];
        if (label > 9)
            throw FormatError("idx: label " + std::to_string(label) + " at sample " +
                              std::to_string(i) + " outside 0..9");
        data.labels[i] = label;
    }
    return data;
}

} // namespace dqnn
