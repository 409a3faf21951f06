#include "ocr/dataset.hpp"

#include "ocr/errors.hpp"
#include "ocr/io.hpp"
#include "ocr/pnm.hpp"
#include "ocr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace ocr {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t pos) {
    return std::uint32_t(bytes[pos]) << 24 | std::uint32_t(bytes[pos + 1]) << 16 |
           std::uint32_t(bytes[pos + 2]) << 8 | std::uint32_t(bytes[pos + 3]);
}

constexpr std::uint32_t idx_images_magic = 0x00000803;
constexpr std::uint32_t idx_labels_magic = 0x00000801;

} // namespace

IdxHeader parse_idx_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4)
        throw format_error("IDX data shorter than its magic");
    IdxHeader h;
    h.magic = read_be32(bytes, 0);
    const std::size_t ndims = bytes[3];
    if (bytes.size() < 4 + 4 * ndims)
        throw format_error("IDX header truncated");
    for (std::size_t i = 0; i < ndims; ++i)
        h.dims.push_back(read_be32(bytes, 4 + 4 * i));
    return h;
}

std::vector<GrayImage> parse_idx_images(std::span<const std::uint8_t> bytes) {
    const IdxHeader h = parse_idx_header(bytes);
    if (h.magic != idx_images_magic)
        throw format_error("bad IDX image magic");
    if (h.dims.size() != 3 || h.dims[1] != 28 || h.dims[2] != 28)
        throw format_error("IDX images must be shaped [count, 28, 28]");
    const std::size_t count = h.dims[0];
    const std::size_t header = 4 + 4 * h.dims.size();
    if (bytes.size() - header != count * 784)
        throw format_error("IDX image payload size does not match the declared count");
    std::vector<GrayImage> images;
    images.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* p = bytes.data() + header + i * 784;
        images.emplace_back(28, 28, std::vector<std::uint8_t>(p, p + 784));
    }
    return images;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    const IdxHeader h = parse_idx_header(bytes);
    if (h.magic != idx_labels_magic)
        throw format_error("bad IDX label magic");
    if (h.dims.size() != 1)
        throw format_error("IDX labels must be one-dimensional");
    const std::size_t count = h.dims[0];
    const std::size_t header = 4 + 4 * h.dims.size();
    if (bytes.size() - header != count)
        throw format_error("IDX label payload size does not match the declared count");
    std::vector<std::uint8_t> labels(bytes.begin() + std::ptrdiff_t(header), bytes.end());
    for (std::uint8_t l : labels)
        if (l > 9)
            throw format_error("IDX label byte " + std::to_string(l) + " exceeds 9");
    return labels;
}

namespace {

std::vector<std::uint8_t> read_maybe_gz(const std::filesystem::path& base) {
    if (std::filesystem::exists(base))
        return read_file(base);
    const std::filesystem::path gz = base.string() + ".gz";
    if (std::filesystem::exists(gz))
        return gzip_inflate(read_file(gz));
    throw io_error("missing MNIST file " + base.string() + " (or .gz)");
}

Dataset pair_up(std::vector<GrayImage> images, std::vector<std::uint8_t> labels,
                std::string source) {
    if (images.size() != labels.size())
        throw format_error(source + ": " + std::to_string(images.size()) + " images but " +
                           std::to_string(labels.size()) + " labels");
    Dataset d;
    d.source = std::move(source);
    d.examples.resize(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        Example& ex = d.examples[i];
        ex.label = labels[i];
        for (std::size_t j = 0; j < 784; ++j)
            ex.glyph.pixels[j] = images[i].pixels()[j] / 255.0;
    }
    return d;
}

} // namespace

std::pair<Dataset, Dataset> load_mnist(const std::filesystem::path& dir) {
    Dataset train = pair_up(parse_idx_images(read_maybe_gz(dir / "train-images-idx3-ubyte")),
                            parse_idx_labels(read_maybe_gz(dir / "train-labels-idx1-ubyte")),
                            "mnist train");
    Dataset test = pair_up(parse_idx_images(read_maybe_gz(dir / "t10k-images-idx3-ubyte")),
                           parse_idx_labels(read_maybe_gz(dir / "t10k-labels-idx1-ubyte")),
                           "mnist test");
    return {std::move(train), std::move(test)};
}

Dataset ingest_custom_dir(const std::filesystem::path& dir, const SegmentConfig& cfg) {
    if (!std::filesystem::is_directory(dir))
        throw io_error("dataset directory " + dir.string() + " does not exist");
    Dataset out;
    out.source = "custom " + dir.string();

    std::vector<std::filesystem::path> subdirs;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_directory())
            subdirs.push_back(entry.path());
    std::sort(subdirs.begin(), subdirs.end());

    for (const std::filesystem::path& sub : subdirs) {
        const std::string name = sub.filename().string();
        if (name.size() != 1 || name[0] < '0' || name[0] > '9') {
            std::cerr << "ingest: skipping non-digit directory " << sub.string() << "\n";
            continue;
        }
        const std::uint8_t label = static_cast<std::uint8_t>(name[0] - '0');

        std::vector<std::filesystem::path> pages;
        for (const auto& entry : std::filesystem::directory_iterator(sub))
            if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                pages.push_back(entry.path());
        std::sort(pages.begin(), pages.end());

        for (const std::filesystem::path& page_path : pages) {
            try {
                const std::vector<std::uint8_t> bytes = read_file(page_path);
                PnmImage decoded = load_pnm(bytes);
                GrayImage gray = std::holds_alternative<GrayImage>(decoded)
                                     ? std::get<GrayImage>(std::move(decoded))
                                     : rgb_to_gray(std::get<RgbImage>(decoded));
                PageSegmentation seg = segment_page(gray, cfg);
                for (const Glyph28& g : seg.glyphs)
                    out.examples.push_back({g, label});
                std::cerr << "ingest: " << page_path.string() << ": " << seg.glyphs.size()
                          << " glyphs\n";
            } catch (const std::exception& e) {
                std::cerr << "ingest: " << page_path.string() << ": " << e.what() << "\n";
            }
        }
    }
    return out;
}

std::pair<Dataset, Dataset> shuffle_split(const Dataset& data, double train_fraction,
                                          std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie strictly between 0 and 1");
    std::vector<Example> shuffled = data.examples;
    Rng rng(seed);
    rng.shuffle(std::span<Example>(shuffled));
    const std::size_t n_train = static_cast<std::size_t>(std::llround(
        train_fraction * static_cast<double>(shuffled.size())));
    Dataset train, test;
    train.source = data.source + " [train split]";
    test.source = data.source + " [test split]";
    train.examples.assign(shuffled.begin(), shuffled.begin() + std::ptrdiff_t(n_train));
    test.examples.assign(shuffled.begin() + std::ptrdiff_t(n_train), shuffled.end());
    return {std::move(train), std::move(test)};
}

} // namespace ocr
