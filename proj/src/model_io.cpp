#include "ticketclass/model_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ticketclass/errors.hpp"

namespace ticketclass {

using nlohmann::json;

namespace {

constexpr char kMatrixMagic[] = "ticketclass-matrix";
constexpr int kMatrixVersion = 1;
constexpr char kTfidfFormat[] = "ticketclass-tfidf";
constexpr int kTfidfVersion = 1;
constexpr char kModelMagic[8] = {'T', 'C', 'M', 'O', 'D', 'E', 'L', '1'};
constexpr char kBundleMagic[8] = {'T', 'C', 'B', 'N', 'D', 'L', '1', '\0'};
constexpr int kBundleVersion = 1;

// ---- little-endian primitives ----

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_u8(std::string& out, std::uint8_t v) {
    out.push_back(static_cast<char>(v));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

class Reader {
public:
    Reader(const std::string& data, std::string origin)
        : data_(data), origin_(std::move(origin)) {}

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }

    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    std::string bytes(std::size_t n) {
        need(n);
        std::string out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    bool exhausted() const { return pos_ == data_.size(); }

    void expect_exhausted() const {
        if (!exhausted()) {
            throw ParseError(origin_ + ": trailing bytes in model container");
        }
    }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) {
            throw ParseError(origin_ + ": truncated model container");
        }
    }
    const std::string& data_;
    std::string origin_;
    std::size_t pos_ = 0;
};

std::string read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_binary_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write file: " + path);
    }
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw ValidationError("short write to " + path);
    }
}

// ---- JSON helpers for pipeline pieces ----

json config_to_json(const PipelineConfig& config) {
    return {{"ngram_min", config.ngram_min},     {"ngram_max", config.ngram_max},
            {"max_df_ratio", config.max_df_ratio}, {"min_df_docs", config.min_df_docs},
            {"summary_repeats", config.summary_repeats}, {"sublinear_tf", config.sublinear_tf}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig config;
    config.ngram_min = j.at("ngram_min").get<int>();
    config.ngram_max = j.at("ngram_max").get<int>();
    config.max_df_ratio = j.at("max_df_ratio").get<double>();
    config.min_df_docs = j.at("min_df_docs").get<std::size_t>();
    config.summary_repeats = j.at("summary_repeats").get<int>();
    config.sublinear_tf = j.at("sublinear_tf").get<bool>();
    return config;
}

json tfidf_to_json(const TfidfModel& model) {
    return {{"format", kTfidfFormat},
            {"version", kTfidfVersion},
            {"config", config_to_json(model.config)},
            {"n_docs", model.vocabulary.n_docs()},
            {"terms", model.vocabulary.terms()},
            {"doc_freq", model.vocabulary.doc_freq()},
            {"idf", model.idf}};
}

TfidfModel tfidf_from_json(const json& j, const std::string& origin) {
    if (j.value("format", "") != kTfidfFormat) {
        throw ParseError(origin + ": not a vectorizer file");
    }
    if (j.value("version", -1) != kTfidfVersion) {
        throw ParseError(origin + ": unsupported vectorizer version " +
                         std::to_string(j.value("version", -1)));
    }
    TfidfModel model;
    model.config = config_from_json(j.at("config"));
    model.vocabulary = Vocabulary(j.at("terms").get<std::vector<std::string>>(),
                                  j.at("doc_freq").get<std::vector<std::size_t>>(),
                                  j.at("n_docs").get<std::size_t>());
    model.idf = j.at("idf").get<std::vector<double>>();
    if (model.idf.size() != model.vocabulary.size()) {
        throw ParseError(origin + ": idf length does not match vocabulary");
    }
    return model;
}

// ---- classifier payloads ----

void put_mlp(std::string& out, const MlpModel& model) {
    put_u8(out, static_cast<std::uint8_t>(model.params.activation));
    put_u8(out, static_cast<std::uint8_t>(model.params.learning_rate));
    put_f64(out, model.params.initial_lr);
    put_f64(out, model.params.momentum);
    put_f64(out, model.params.tol);
    put_u64(out, model.params.max_iter);
    put_u64(out, model.params.batch_size);
    put_u64(out, model.params.seed);
    put_u64(out, model.layer_sizes.size());
    for (const std::size_t size : model.layer_sizes) {
        put_u64(out, size);
    }
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        for (const double w : model.weights[l]) {
            put_f64(out, w);
        }
        for (const double b : model.biases[l]) {
            put_f64(out, b);
        }
    }
    put_u64(out, model.loss_history.size());
    for (const double loss : model.loss_history) {
        put_f64(out, loss);
    }
}

MlpModel read_mlp(Reader& reader) {
    MlpModel model;
    model.params.activation = static_cast<Activation>(reader.u8());
    model.params.learning_rate = static_cast<LearningRatePolicy>(reader.u8());
    model.params.initial_lr = reader.f64();
    model.params.momentum = reader.f64();
    model.params.tol = reader.f64();
    model.params.max_iter = reader.u64();
    model.params.batch_size = reader.u64();
    model.params.seed = reader.u64();
    const std::uint64_t n_sizes = reader.u64();
    if (n_sizes < 2) {
        throw ParseError("mlp container: needs at least input and output layers");
    }
    for (std::uint64_t i = 0; i < n_sizes; ++i) {
        model.layer_sizes.push_back(reader.u64());
    }
    model.params.hidden_layers.assign(model.layer_sizes.begin() + 1,
                                      model.layer_sizes.end() - 1);
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t fan_in = model.layer_sizes[l];
        const std::size_t fan_out = model.layer_sizes[l + 1];
        std::vector<double> W(fan_in * fan_out);
        for (auto& w : W) {
            w = reader.f64();
        }
        std::vector<double> b(fan_out);
        for (auto& bias : b) {
            bias = reader.f64();
        }
        model.weights.push_back(std::move(W));
        model.biases.push_back(std::move(b));
    }
    const std::uint64_t history = reader.u64();
    for (std::uint64_t i = 0; i < history; ++i) {
        model.loss_history.push_back(reader.f64());
    }
    return model;
}

std::string classifier_payload(const TrainedClassifier& model) {
    std::string out;
    out.append(kModelMagic, sizeof(kModelMagic));
    put_u8(out, static_cast<std::uint8_t>(model.kind()));
    switch (model.kind()) {
        case ClassifierKind::Mlp:
            put_mlp(out, model.mlp());
            break;
        case ClassifierKind::Sgd: {
            const auto& spec = model.spec().sgd;
            put_u8(out, static_cast<std::uint8_t>(spec.loss));
            put_u64(out, spec.max_iter);
            put_f64(out, spec.initial_lr);
            put_f64(out, spec.alpha);
            put_u64(out, spec.seed);
            const auto& linear = model.linear();
            put_u64(out, linear.weights.size());
            for (const double w : linear.weights) {
                put_f64(out, w);
            }
            put_f64(out, linear.bias);
            break;
        }
        case ClassifierKind::Ridge: {
            const auto& spec = model.spec().ridge;
            put_f64(out, spec.alpha);
            put_u8(out, spec.fit_intercept ? 1 : 0);
            put_u64(out, spec.seed);
            const auto& linear = model.linear();
            put_u64(out, linear.weights.size());
            for (const double w : linear.weights) {
                put_f64(out, w);
            }
            put_f64(out, linear.bias);
            break;
        }
        case ClassifierKind::Knn: {
            const auto& knn = model.knn();
            put_u64(out, knn.params.n_neighbors);
            put_u8(out, static_cast<std::uint8_t>(knn.params.weighting));
            put_u64(out, knn.train.rows());
            put_u64(out, knn.train.cols());
            const auto triplets = knn.train.to_triplets();
            put_u64(out, triplets.size());
            for (const auto& t : triplets) {
                put_u64(out, t.row);
                put_u32(out, t.col);
                put_f64(out, t.value);
            }
            for (const int label : knn.labels) {
                put_u8(out, static_cast<std::uint8_t>(label));
            }
            break;
        }
    }
    return out;
}

TrainedClassifier classifier_from_payload(const std::string& data, const std::string& origin) {
    Reader reader(data, origin);
    const std::string magic = reader.bytes(sizeof(kModelMagic));
    if (std::string(kModelMagic, sizeof(kModelMagic)) != magic) {
        throw ParseError(origin + ": not a model container (bad magic / unsupported version)");
    }
    const auto kind = static_cast<ClassifierKind>(reader.u8());
    ClassifierSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ClassifierKind::Mlp: {
            MlpModel model = read_mlp(reader);
            reader.expect_exhausted();
            spec.mlp = model.params;
            return TrainedClassifier::from_parts(std::move(spec), std::move(model));
        }
        case ClassifierKind::Sgd: {
            spec.sgd.loss = static_cast<SgdLoss>(reader.u8());
            spec.sgd.max_iter = reader.u64();
            spec.sgd.initial_lr = reader.f64();
            spec.sgd.alpha = reader.f64();
            spec.sgd.seed = reader.u64();
            LinearModel linear;
            linear.weights.resize(reader.u64());
            for (auto& w : linear.weights) {
                w = reader.f64();
            }
            linear.bias = reader.f64();
            reader.expect_exhausted();
            return TrainedClassifier::from_parts(std::move(spec), std::move(linear));
        }
        case ClassifierKind::Ridge: {
            spec.ridge.alpha = reader.f64();
            spec.ridge.fit_intercept = reader.u8() != 0;
            spec.ridge.seed = reader.u64();
            LinearModel linear;
            linear.weights.resize(reader.u64());
            for (auto& w : linear.weights) {
                w = reader.f64();
            }
            linear.bias = reader.f64();
            reader.expect_exhausted();
            return TrainedClassifier::from_parts(std::move(spec), std::move(linear));
        }
        case ClassifierKind::Knn: {
            KnnModel knn;
            knn.params.n_neighbors = reader.u64();
            knn.params.weighting = static_cast<KnnWeighting>(reader.u8());
            const std::uint64_t rows = reader.u64();
            const std::uint64_t cols = reader.u64();
            const std::uint64_t nnz = reader.u64();
            std::vector<SparseMatrix::Triplet> triplets;
            triplets.reserve(nnz);
            for (std::uint64_t i = 0; i < nnz; ++i) {
                SparseMatrix::Triplet t;
                t.row = reader.u64();
                t.col = reader.u32();
                t.value = reader.f64();
                triplets.push_back(t);
            }
            knn.train = SparseMatrix::from_triplets(rows, cols, std::move(triplets));
            knn.labels.resize(rows);
            for (auto& label : knn.labels) {
                label = reader.u8();
            }
            reader.expect_exhausted();
            spec.knn = knn.params;
            return TrainedClassifier::from_parts(std::move(spec), std::move(knn));
        }
    }
    throw ParseError(origin + ": unknown classifier kind tag");
}

}  // namespace

void save_matrix(const SparseMatrix& matrix, const std::string& path) {
    std::ostringstream out;
    out << kMatrixMagic << ' ' << kMatrixVersion << '\n';
    out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nnz() << '\n';
    out << std::setprecision(17);
    for (const auto& t : matrix.to_triplets()) {
        out << t.row << ' ' << t.col << ' ' << t.value << '\n';
    }
    write_binary_file(path, out.str());
}

SparseMatrix load_matrix(const std::string& path) {
    std::istringstream in(read_binary_file(path));
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kMatrixMagic) {
        throw ParseError(path + ": not a matrix file");
    }
    if (version != kMatrixVersion) {
        throw ParseError(path + ": unsupported matrix version " + std::to_string(version));
    }
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(in >> rows >> cols >> nnz)) {
        throw ParseError(path + ": missing matrix header");
    }
    std::vector<SparseMatrix::Triplet> triplets;
    triplets.reserve(nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        SparseMatrix::Triplet t;
        if (!(in >> t.row >> t.col >> t.value)) {
            throw ParseError(path + ": truncated triplet list");
        }
        triplets.push_back(t);
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

void save_tfidf(const TfidfModel& model, const std::string& path) {
    write_binary_file(path, tfidf_to_json(model).dump(2) + "\n");
}

TfidfModel load_tfidf(const std::string& path) {
    json parsed;
    try {
        parsed = json::parse(read_binary_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return tfidf_from_json(parsed, path);
}

void save_classifier(const TrainedClassifier& model, const std::string& path) {
    write_binary_file(path, classifier_payload(model));
}

TrainedClassifier load_classifier(const std::string& path) {
    return classifier_from_payload(read_binary_file(path), path);
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
    json header = {{"format", "ticketclass-bundle"},
                   {"version", kBundleVersion},
                   {"model_version", bundle.model_version},
                   {"tfidf", tfidf_to_json(bundle.tfidf)},
                   {"mask",
                    {{"selected", bundle.mask.selected},
                     {"k", bundle.mask.k},
                     {"scores", bundle.mask.scores}}}};
    ClassifierSpec spec;
    spec.kind = ClassifierKind::Mlp;
    spec.mlp = bundle.mlp.params;
    const std::string model_bytes =
        classifier_payload(TrainedClassifier::from_parts(spec, bundle.mlp));

    std::string out;
    out.append(kBundleMagic, sizeof(kBundleMagic));
    const std::string header_bytes = header.dump();
    put_u64(out, header_bytes.size());
    out += header_bytes;
    put_u64(out, model_bytes.size());
    out += model_bytes;
    write_binary_file(path, out);
}

ModelBundle load_bundle(const std::string& path) {
    const std::string data = read_binary_file(path);
    Reader reader(data, path);
    if (reader.bytes(sizeof(kBundleMagic)) != std::string(kBundleMagic, sizeof(kBundleMagic))) {
        throw ParseError(path + ": not a model bundle (bad magic / unsupported version)");
    }
    json header;
    try {
        header = json::parse(reader.bytes(reader.u64()));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": bundle header: " + e.what());
    }
    if (header.value("format", "") != "ticketclass-bundle" ||
        header.value("version", -1) != kBundleVersion) {
        throw ParseError(path + ": unsupported bundle format/version");
    }
    ModelBundle bundle;
    bundle.model_version = header.value("model_version", "");
    bundle.tfidf = tfidf_from_json(header.at("tfidf"), path);
    bundle.mask.selected = header.at("mask").at("selected").get<std::vector<std::uint32_t>>();
    bundle.mask.k = header.at("mask").at("k").get<std::size_t>();
    bundle.mask.scores = header.at("mask").at("scores").get<std::vector<double>>();

    const std::string model_bytes = reader.bytes(reader.u64());
    reader.expect_exhausted();
    TrainedClassifier classifier = classifier_from_payload(model_bytes, path);
    if (classifier.kind() != ClassifierKind::Mlp) {
        throw ParseError(path + ": bundle classifier must be an MLP");
    }
    bundle.mlp = classifier.mlp();
    // Shape consistency across the pieces.
    if (bundle.mask.selected.size() != bundle.mlp.n_features()) {
        throw ParseError(path + ": mask size does not match the MLP input layer");
    }
    for (const auto col : bundle.mask.selected) {
        if (col >= bundle.tfidf.vocabulary.size()) {
            throw ParseError(path + ": mask index out of vocabulary range");
        }
    }
    return bundle;
}

}  // namespace ticketclass
