#include "bgadam/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace bgadam {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& path, const char* field) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw DataError("truncated IDX file (while reading " + std::string(field) + "): " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

char hex_digit(unsigned v) { return "0123456789abcdef"[v & 0xf]; }

}  // namespace

void Dataset::validate() const {
    if (size() == 0) throw DataError("dataset is empty");
    if (labels.size() != size()) throw DataError("feature row count != label count");
    if (n_classes < 1) throw DataError("dataset needs at least one class");
    for (int y : labels)
        if (y < 0 || y >= n_classes) throw DataError("label out of range [0, n_classes)");
    for (double v : features.data)
        if (!std::isfinite(v)) throw DataError("non-finite feature value");
}

Dataset load_idx_pair(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot open IDX image file: " + images_path);
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot open IDX label file: " + labels_path);

    std::uint32_t img_magic = read_be32(img, images_path, "image magic");
    if (img_magic != 0x00000803) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "0x%08x", img_magic);
        throw DataError("unsupported magic " + std::string(buf) + " in " + images_path +
                        " (expected 0x00000803)");
    }
    std::uint32_t n = read_be32(img, images_path, "image count");
    std::uint32_t rows = read_be32(img, images_path, "image rows");
    std::uint32_t cols = read_be32(img, images_path, "image cols");

    std::uint32_t lab_magic = read_be32(lab, labels_path, "label magic");
    if (lab_magic != 0x00000801) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "0x%08x", lab_magic);
        throw DataError("unsupported magic " + std::string(buf) + " in " + labels_path +
                        " (expected 0x00000801)");
    }
    std::uint32_t n_lab = read_be32(lab, labels_path, "label count");
    if (n != n_lab)
        throw DataError("image count " + std::to_string(n) + " != label count " +
                        std::to_string(n_lab));
    if (n == 0) throw DataError("IDX file has zero samples: " + images_path);

    const std::size_t d = std::size_t(rows) * cols;
    Dataset ds;
    ds.features = Matrix(n, d);
    std::vector<unsigned char> buf(d);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(d)))
            throw DataError("truncated IDX file (pixel data): " + images_path);
        double* row = ds.features.row(i);
        for (std::size_t j = 0; j < d; ++j) row[j] = buf[j] / 255.0;
    }
    ds.labels.resize(n);
    std::vector<unsigned char> lbuf(n);
    if (!lab.read(reinterpret_cast<char*>(lbuf.data()), static_cast<std::streamsize>(n)))
        throw DataError("truncated IDX file (label data): " + labels_path);
    int max_label = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        ds.labels[i] = lbuf[i];
        max_label = std::max(max_label, ds.labels[i]);
    }
    ds.n_classes = max_label + 1;
    return ds;
}

void write_idx_pair(const Dataset& d, const std::string& images_path,
                    const std::string& labels_path, std::size_t img_rows, std::size_t img_cols) {
    if (img_rows * img_cols != d.dim())
        throw std::invalid_argument("image dims " + std::to_string(img_rows) + "x" +
                                    std::to_string(img_cols) + " do not match feature dim " +
                                    std::to_string(d.dim()));
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot open for writing: " + images_path);
    write_be32(img, 0x00000803);
    write_be32(img, static_cast<std::uint32_t>(d.size()));
    write_be32(img, static_cast<std::uint32_t>(img_rows));
    write_be32(img, static_cast<std::uint32_t>(img_cols));
    std::vector<unsigned char> buf(d.dim());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double* row = d.features.row(i);
        for (std::size_t j = 0; j < d.dim(); ++j) {
            long px = std::lround(row[j] * 255.0);
            buf[j] = static_cast<unsigned char>(std::clamp(px, 0L, 255L));
        }
        img.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
    }
    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot open for writing: " + labels_path);
    write_be32(lab, 0x00000801);
    write_be32(lab, static_cast<std::uint32_t>(d.size()));
    for (int y : d.labels) {
        auto byte = static_cast<unsigned char>(y);
        lab.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

Dataset load_delimited(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open delimited file: " + path);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    bool first = true;
    std::size_t width = 0;
    int max_label = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> tokens;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) tokens.push_back(tok);

        std::vector<double> vals;
        vals.reserve(tokens.size());
        bool numeric = true;
        for (const std::string& t : tokens) {
            try {
                std::size_t pos = 0;
                double v = std::stod(t, &pos);
                while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
                if (pos != t.size()) { numeric = false; break; }
                vals.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (first && !numeric) { first = false; continue; }  // header line
        first = false;
        if (!numeric) throw DataError("non-numeric value in " + path + ": " + line);
        if (vals.size() < 2)
            throw DataError("each row needs at least one feature and a label: " + path);
        if (width == 0) width = vals.size();
        if (vals.size() != width)
            throw DataError("inconsistent column count in " + path + " (expected " +
                            std::to_string(width) + ", got " + std::to_string(vals.size()) + ")");
        double label_val = vals.back();
        int label = static_cast<int>(std::llround(label_val));
        if (label < 0 || std::abs(label_val - label) > 1e-9)
            throw DataError("last column must be a nonnegative integer label: " + line);
        vals.pop_back();
        rows.push_back(std::move(vals));
        labels.push_back(label);
        max_label = std::max(max_label, label);
    }
    if (rows.empty()) throw DataError("no samples in " + path);

    Dataset ds;
    ds.features = Matrix(rows.size(), width - 1);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), ds.features.row(i));
    ds.labels = std::move(labels);
    ds.n_classes = max_label + 1;
    ds.validate();
    return ds;
}

Dataset make_blobs(std::size_t n_per_class, int classes, double noise_std, std::uint64_t seed) {
    if (n_per_class == 0) throw std::invalid_argument("make_blobs: n_per_class must be >= 1");
    if (classes < 1) throw std::invalid_argument("make_blobs: classes must be >= 1");

    const double radius = 2.5;
    Rng rng(seed);
    Dataset ds;
    ds.features = Matrix(n_per_class * classes, 2);
    ds.labels.resize(ds.features.rows);
    ds.n_classes = classes;
    std::size_t r = 0;
    for (int c = 0; c < classes; ++c) {
        double angle = 2.0 * std::numbers::pi * c / classes;
        double cx = classes == 1 ? 0.0 : radius * std::cos(angle);
        double cy = classes == 1 ? 0.0 : radius * std::sin(angle);
        for (std::size_t i = 0; i < n_per_class; ++i, ++r) {
            ds.features(r, 0) = cx + rng.normal(0.0, 1.0) * noise_std;
            ds.features(r, 1) = cy + rng.normal(0.0, 1.0) * noise_std;
            ds.labels[r] = c;
        }
    }
    return ds;
}

Dataset make_spirals(std::size_t n_per_class, int classes, double noise_std, std::uint64_t seed) {
    if (n_per_class == 0) throw std::invalid_argument("make_spirals: n_per_class must be >= 1");
    if (classes < 1) throw std::invalid_argument("make_spirals: classes must be >= 1");

    const double turns = 1.75;
    const double r_min = 0.2, r_max = 2.4;
    Rng rng(seed);
    Dataset ds;
    ds.features = Matrix(n_per_class * classes, 2);
    ds.labels.resize(ds.features.rows);
    ds.n_classes = classes;
    std::size_t r = 0;
    for (int c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < n_per_class; ++i, ++r) {
            double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n_per_class);
            double radius = r_min + (r_max - r_min) * t;
            double angle = 2.0 * std::numbers::pi * (turns * t + static_cast<double>(c) / classes);
            ds.features(r, 0) = radius * std::cos(angle) + rng.normal(0.0, 1.0) * noise_std;
            ds.features(r, 1) = radius * std::sin(angle) + rng.normal(0.0, 1.0) * noise_std;
            ds.labels[r] = c;
        }
    }
    return ds;
}

Split make_split(const Dataset& train_pool, Dataset test, double val_fraction,
                 std::uint64_t seed) {
    train_pool.validate();
    if (!(val_fraction > 0.0 && val_fraction < 1.0))
        throw std::invalid_argument("val_fraction must be in (0, 1)");

    const std::size_t n = train_pool.size();
    auto n_val = static_cast<std::size_t>(
        std::llround(val_fraction * static_cast<double>(n)));
    if (n_val == 0 || n_val >= n)
        throw std::invalid_argument("val_fraction " + std::to_string(val_fraction) +
                                    " leaves an empty train or val partition for n = " +
                                    std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    shuffle(order, rng);

    std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<long>(n_val));
    std::vector<std::size_t> train_idx(order.begin() + static_cast<long>(n_val), order.end());

    Split split;
    split.train = take(train_pool, train_idx);
    split.val = take(train_pool, val_idx);
    split.test = std::move(test);
    return split;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& pool, std::size_t n_a,
                                             std::size_t n_b, std::uint64_t seed) {
    pool.validate();
    if (n_a + n_b > pool.size())
        throw std::invalid_argument("stratified_split: requested " + std::to_string(n_a + n_b) +
                                    " samples from a pool of " + std::to_string(pool.size()));

    std::vector<std::vector<std::size_t>> by_class(pool.n_classes);
    for (std::size_t i = 0; i < pool.size(); ++i)
        by_class[pool.labels[i]].push_back(i);
    for (int c = 0; c < pool.n_classes; ++c) {
        Rng rng(derive_seed(seed, "stratify", static_cast<std::uint64_t>(c)));
        shuffle(by_class[c], rng);
    }

    // largest-remainder apportionment of per-class take counts
    auto apportion = [&](std::size_t total) {
        std::vector<std::size_t> counts(pool.n_classes, 0);
        std::vector<std::pair<double, int>> rema;
        std::size_t assigned = 0;
        for (int c = 0; c < pool.n_classes; ++c) {
            double exact = static_cast<double>(total) * by_class[c].size() / pool.size();
            counts[c] = static_cast<std::size_t>(exact);
            assigned += counts[c];
            rema.push_back({exact - static_cast<double>(counts[c]), c});
        }
        std::stable_sort(rema.begin(), rema.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t k = 0; assigned < total; ++k, ++assigned) counts[rema[k % rema.size()].second]++;
        return counts;
    };

    std::vector<std::size_t> take_a = apportion(n_a);
    std::vector<std::size_t> take_b = apportion(n_b);
    std::vector<std::size_t> idx_a, idx_b;
    for (int c = 0; c < pool.n_classes; ++c) {
        if (take_a[c] + take_b[c] > by_class[c].size())
            throw DataError("class " + std::to_string(c) + " has only " +
                            std::to_string(by_class[c].size()) + " samples, need " +
                            std::to_string(take_a[c] + take_b[c]));
        idx_a.insert(idx_a.end(), by_class[c].begin(),
                     by_class[c].begin() + static_cast<long>(take_a[c]));
        idx_b.insert(idx_b.end(), by_class[c].begin() + static_cast<long>(take_a[c]),
                     by_class[c].begin() + static_cast<long>(take_a[c] + take_b[c]));
    }
    Dataset a = take(pool, idx_a);
    Dataset b = n_b == 0 ? Dataset{} : take(pool, idx_b);
    return {std::move(a), std::move(b)};
}

Dataset take(const Dataset& d, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.features = Matrix(indices.size(), d.dim());
    out.labels.resize(indices.size());
    out.n_classes = d.n_classes;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= d.size()) throw std::invalid_argument("take: index out of range");
        std::copy(d.features.row(indices[i]), d.features.row(indices[i]) + d.dim(),
                  out.features.row(i));
        out.labels[i] = d.labels[indices[i]];
    }
    return out;
}

Batch as_batch(const Dataset& d) {
    return {d.features, d.labels};
}

BatchSampler::BatchSampler(const Dataset& base, std::vector<std::size_t> indices,
                           std::size_t batch_size, std::uint64_t seed)
    : base_(&base), indices_(std::move(indices)), batch_size_(batch_size), rng_(seed) {
    if (batch_size_ == 0) throw std::invalid_argument("batch_size must be >= 1");
    if (indices_.empty()) throw std::invalid_argument("BatchSampler: empty index set");
    shuffle(indices_, rng_);
}

std::size_t BatchSampler::epoch_batches() const {
    return (indices_.size() + batch_size_ - 1) / batch_size_;
}

Batch BatchSampler::next() {
    if (cursor_ >= indices_.size()) {
        shuffle(indices_, rng_);
        cursor_ = 0;
    }
    const std::size_t count = std::min(batch_size_, indices_.size() - cursor_);
    Batch b;
    b.features = Matrix(count, base_->dim());
    b.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t src = indices_[cursor_ + i];
        std::copy(base_->features.row(src), base_->features.row(src) + base_->dim(),
                  b.features.row(i));
        b.labels[i] = base_->labels[src];
    }
    cursor_ += count;
    return b;
}

std::string dataset_fingerprint(const Dataset& d) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&h](const void* p, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    feed(d.features.data.data(), d.features.data.size() * sizeof(double));
    feed(d.labels.data(), d.labels.size() * sizeof(int));
    feed(&d.n_classes, sizeof(d.n_classes));
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex_digit(static_cast<unsigned>(h & 0xf));
        h >>= 4;
    }
    return out;
}

}  // namespace bgadam
