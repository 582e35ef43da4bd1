#include <doctest.h>

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>

#include "dqnn/dataset.hpp"
#include "dqnn/rng.hpp"

using namespace dqnn;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string semeion_line(const std::vector<int>& pixels, int label) {
    std::string line;
    char buf[16];
    for (int p : pixels) {
        std::snprintf(buf, sizeof buf, "%.4f ", static_cast<double>(p));
        line += buf;
    }
    for (int k = 0; k < 10; ++k) {
        line += label == k ? '1' : '0';
        if (k < 9) line += ' ';
    }
    return line + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream(path) << content;
}

void write_be32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v >> 24));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

std::string idx_images(const std::vector<std::vector<unsigned char>>& imgs, int rows,
                       int cols, std::uint32_t magic = 0x00000803) {
    std::string bytes;
    write_be32(bytes, magic);
    write_be32(bytes, static_cast<std::uint32_t>(imgs.size()));
    write_be32(bytes, rows);
    write_be32(bytes, cols);
    for (const auto& img : imgs)
        bytes.append(reinterpret_cast<const char*>(img.data()), img.size());
    return bytes;
}

std::string idx_labels(const std::vector<unsigned char>& labels,
                       std::uint32_t magic = 0x00000801) {
    std::string bytes;
    write_be32(bytes, magic);
    write_be32(bytes, static_cast<std::uint32_t>(labels.size()));
    bytes.append(reinterpret_cast<const char*>(labels.data()), labels.size());
    return bytes;
}

void write_gz(const std::string& path, const std::string& content) {
    gzFile f = gzopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    REQUIRE(gzwrite(f, content.data(), static_cast<unsigned>(content.size())) ==
            static_cast<int>(content.size()));
    gzclose(f);
}

} // namespace

TEST_CASE("semeion: synthetic two-line fixture round-trips exactly") {
    std::vector<int> first(256, 0), second(256, 0);
    first[0] = 1;
    first[17] = 1;
    second[255] = 1;
    const std::string path = temp_path("dqnn_semeion_fixture.data");
    write_file(path, semeion_line(first, 3) + semeion_line(second, 9));

    const Dataset data = load_semeion(path);
    CHECK(data.size() == 2);
    CHECK(data.height == 16);
    CHECK(data.width == 16);
    CHECK(data.labels[0] == 3);
    CHECK(data.labels[1] == 9);
    CHECK(data.sample(0)[0] == 1.0);
    CHECK(data.sample(0)[17] == 1.0);
    CHECK(data.sample(0)[16] == 0.0);
    CHECK(data.sample(1)[255] == 1.0);

    // writer -> parser round trip is exact for integer-valued inputs
    const std::string copy = temp_path("dqnn_semeion_copy.data");
    write_semeion(data, copy);
    const Dataset reparsed = load_semeion(copy);
    CHECK(reparsed.values == data.values);
    CHECK(reparsed.labels == data.labels);
}

TEST_CASE("semeion: float one-hot labels like 1.0000 are accepted") {
    std::string line;
    for (int i = 0; i < 256; ++i) line += i % 7 == 0 ? "1.0000 " : "0.0000 ";
    line += "0.0000 0.0000 1.0000 0.0000 0.0000 0.0000 0.0000 0.0000 0.0000 0.0000\n";
    const std::string path = temp_path("dqnn_semeion_float_labels.data");
    write_file(path, line);
    const Dataset data = load_semeion(path);
    CHECK(data.labels[0] == 2);
}

TEST_CASE("semeion: malformed lines fail with their line number") {
    const std::string path = temp_path("dqnn_semeion_bad.data");

    std::vector<int> px(256, 0);
    // 265 fields: drop one label field
    std::string short_line = semeion_line(px, 0);
    short_line.erase(short_line.size() - 3, 2);
    write_file(path, semeion_line(px, 1) + short_line);
    CHECK_THROWS_WITH_AS(load_semeion(path),
                         doctest::Contains(":2: expected 266 fields"), ParseError);

    write_file(path, semeion_line(px, 1) + "0.0 abc" + semeion_line(px, 2).substr(7));
    CHECK_THROWS_WITH_AS(load_semeion(path), doctest::Contains(":2:"), ParseError);

    // two label fields set
    std::string two_labels = semeion_line(px, 0);
    two_labels[two_labels.size() - 4] = '1';
    write_file(path, two_labels);
    CHECK_THROWS_WITH_AS(load_semeion(path),
                         doctest::Contains("more than one label"), ParseError);

    // no label set
    std::string no_label = semeion_line(px, 0);
    no_label[no_label.size() - 20] = '0';
    write_file(path, no_label);
    CHECK_THROWS_WITH_AS(load_semeion(path), doctest::Contains("no label"), ParseError);

    CHECK_THROWS_AS(load_semeion(temp_path("dqnn_missing.data")), ParseError);
}

TEST_CASE("semeion: the shipped dataset has 1593 16x16 samples") {
    const Dataset data = load_semeion(DQNN_TEST_DATA_DIR "/semeion.data");
    CHECK(data.size() == 1593);
    CHECK(data.height == 16);
    CHECK(data.width == 16);
    CHECK(data.max_value() == 1.0);
    std::map<int, int> hist;
    for (int l : data.labels) hist[l]++;
    const std::map<int, int> expected{{0, 161}, {1, 162}, {2, 159}, {3, 159}, {4, 161},
                                      {5, 159}, {6, 161}, {7, 158}, {8, 155}, {9, 158}};
    CHECK(hist == expected);
}

TEST_CASE("idx: synthetic containers parse, gzip transparently") {
    const std::vector<std::vector<unsigned char>> imgs{
        {0, 64, 128, 255}, {1, 2, 3, 4}, {250, 251, 252, 253}};
    const std::vector<unsigned char> labels{7, 0, 9};

    const std::string img_path = temp_path("dqnn_idx_images");
    const std::string lbl_path = temp_path("dqnn_idx_labels");
    write_file(img_path, idx_images(imgs, 2, 2));
    write_file(lbl_path, idx_labels(labels));

    const Dataset plain = load_mnist_idx(img_path, lbl_path);
    CHECK(plain.size() == 3);
    CHECK(plain.height == 2);
    CHECK(plain.width == 2);
    CHECK(plain.labels == std::vector<int>{7, 0, 9});
    CHECK(plain.sample(0)[1] == 64.0);
    CHECK(plain.sample(2)[3] == 253.0);

    const std::string img_gz = temp_path("dqnn_idx_images.gz");
    const std::string lbl_gz = temp_path("dqnn_idx_labels.gz");
    write_gz(img_gz, idx_images(imgs, 2, 2));
    write_gz(lbl_gz, idx_labels(labels));
    const Dataset unzipped = load_mnist_idx(img_gz, lbl_gz);
    CHECK(unzipped.values == plain.values);
    CHECK(unzipped.labels == plain.labels);
}

TEST_CASE("idx: container violations are rejected") {
    const std::vector<std::vector<unsigned char>> imgs{{1, 2, 3, 4}};
    const std::vector<unsigned char> labels{5};
    const std::string img_path = temp_path("dqnn_idx_bad_images");
    const std::string lbl_path = temp_path("dqnn_idx_bad_labels");

    // swapped files: images magic where labels expected and vice versa
    write_file(img_path, idx_labels(labels));
    write_file(lbl_path, idx_labels(labels));
    CHECK_THROWS_WITH_AS(load_mnist_idx(img_path, lbl_path),
                         doctest::Contains("0x00000801"), FormatError);

    write_file(img_path, idx_images(imgs, 2, 2));
    write_file(lbl_path, idx_images(imgs, 2, 2));
    CHECK_THROWS_AS(load_mnist_idx(img_path, lbl_path), FormatError);

    // count mismatch
    write_file(img_path, idx_images(imgs, 2, 2));
    write_file(lbl_path, idx_labels({5, 6}));
    CHECK_THROWS_WITH_AS(load_mnist_idx(img_path, lbl_path),
                         doctest::Contains("1 images but 2 labels"), FormatError);

    // truncated payload
    std::string truncated = idx_images(imgs, 2, 2);
    truncated.pop_back();
    write_file(img_path, truncated);
    write_file(lbl_path, idx_labels(labels));
    CHECK_THROWS_WITH_AS(load_mnist_idx(img_path, lbl_path),
                         doctest::Contains("payload"), FormatError);

    // label out of range
    write_file(img_path, idx_images(imgs, 2, 2));
    write_file(lbl_path, idx_labels({10}));
    CHECK_THROWS_WITH_AS(load_mnist_idx(img_path, lbl_path),
                         doctest::Contains("outside 0..9"), FormatError);
}

TEST_CASE("idx: the shipped MNIST files have canonical counts and histograms") {
    const Dataset train = load_mnist_idx(DQNN_TEST_DATA_DIR "/mnist/train-images-idx3-ubyte.gz",
                                         DQNN_TEST_DATA_DIR "/mnist/train-labels-idx1-ubyte.gz");
    CHECK(train.size() == 60000);
    CHECK(train.height == 28);
    CHECK(train.width == 28);
    std::map<int, int> hist;
    for (int l : train.labels) hist[l]++;
    const std::map<int, int> expected_train{{0, 5923}, {1, 6742}, {2, 5958}, {3, 6131},
                                            {4, 5842}, {5, 5421}, {6, 5918}, {7, 6265},
                                            {8, 5851}, {9, 5949}};
    CHECK(hist == expected_train);

    const Dataset test = load_mnist_idx(DQNN_TEST_DATA_DIR "/mnist/t10k-images-idx3-ubyte.gz",
                                        DQNN_TEST_DATA_DIR "/mnist/t10k-labels-idx1-ubyte.gz");
    CHECK(test.size() == 10000);
    hist.clear();
    for (int l : test.labels) hist[l]++;
    const std::map<int, int> expected_test{{0, 980}, {1, 1135}, {2, 1032}, {3, 1010},
                                           {4, 982}, {5, 892},  {6, 958},  {7, 1028},
                                           {8, 974}, {9, 1009}};
    CHECK(hist == expected_test);
}

TEST_CASE("normalize endpoints and linearity") {
    Dataset data;
    data.height = 1;
    data.width = 3;
    data.values = {0.0, 128.0, 255.0};
    data.labels = {0};

    const Dataset quarter = normalize(data, std::numbers::pi / 4, 255.0);
    CHECK(quarter.values[0] == 0.0);
    CHECK(quarter.values[2] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    const Dataset eighth = normalize(data, std::numbers::pi / 8, 255.0);
    CHECK(eighth.values[1] ==
          doctest::Approx(128.0 / 255.0 * std::numbers::pi / 8).epsilon(1e-15));

    Dataset negative = data;
    negative.values[1] = -0.5;
    CHECK_THROWS_AS(normalize(negative, 1.0, 255.0), RangeError);
    Dataset oversized = data;
    oversized.values[1] = 256.0;
    CHECK_THROWS_AS(normalize(oversized, 1.0, 255.0), RangeError);
    CHECK_THROWS_AS(normalize(data, 1.0, 0.0), RangeError);
}

TEST_CASE("avg pooling examples") {
    Dataset constant;
    constant.height = 4;
    constant.width = 4;
    constant.values.assign(16, 0.75);
    constant.labels = {1};
    const Dataset pooled = avg_pool_2x2(constant);
    CHECK(pooled.height == 2);
    CHECK(pooled.width == 2);
    for (double v : pooled.values) CHECK(v == 0.75);

    Dataset block;
    block.height = 2;
    block.width = 2;
    block.values = {1.0, 2.0, 3.0, 4.0};
    block.labels = {0};
    CHECK(avg_pool_2x2(block).values[0] == 2.5);

    Dataset grid16;
    grid16.height = 16;
    grid16.width = 16;
    grid16.values.assign(256, 0.0);
    grid16.labels = {0};
    const Dataset half = avg_pool_2x2(grid16);
    CHECK(half.height == 8);
    CHECK(half.width == 8);

    Dataset odd;
    odd.height = 3;
    odd.width = 4;
    odd.values.assign(12, 0.0);
    odd.labels = {0};
    CHECK_THROWS_AS(avg_pool_2x2(odd), ShapeError);
}

TEST_CASE("normalization and pooling commute") {
    Rng rng(15);
    Dataset data;
    data.height = 8;
    data.width = 8;
    data.labels = {0, 1};
    data.values.resize(128);
    for (double& v : data.values) v = rng.uniform(0.0, 255.0);

    const Dataset norm_then_pool = avg_pool_2x2(normalize(data, 0.3926990816987241, 255.0));
    const Dataset pool_then_norm = normalize(avg_pool_2x2(data), 0.3926990816987241, 255.0);
    REQUIRE(norm_then_pool.values.size() == pool_then_norm.values.size());
    for (std::size_t i = 0; i < norm_then_pool.values.size(); ++i)
        CHECK(std::abs(norm_then_pool.values[i] - pool_then_norm.values[i]) <= 1e-12);
}

TEST_CASE("preprocess records its provenance") {
    Dataset data;
    data.height = 4;
    data.width = 4;
    data.values.assign(16, 1.0);
    data.labels = {0};
    const PreprocSpec spec{std::numbers::pi / 4, Pooling::Avg2x2, 1.0};
    const Dataset processed = preprocess(data, spec);
    REQUIRE(processed.preproc.has_value());
    CHECK(processed.preproc->max_angle == spec.max_angle);
    CHECK(processed.preproc->pool == Pooling::Avg2x2);
    CHECK(processed.height == 2);
    CHECK(processed.values[0] == doctest::Approx(std::numbers::pi / 4));
}
