#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "structvec/dataset.hpp"
#include "structvec/embedding_store.hpp"
#include "structvec/errors.hpp"
#include "structvec/rng.hpp"
#include "structvec/sgns.hpp"

namespace structvec {

inline double leaky_rectifier(double x, double slope) { return x >= 0.0 ? x : slope * x; }

// log(1 + e^s) without overflow.
inline double softplus(double s) { return s >= 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

enum class Arch { Mlp, SharedMlp, SharedCosine };

inline const char* to_string(Arch arch) {
    switch (arch) {
        case Arch::Mlp: return "mlp";
        case Arch::SharedMlp: return "shared-mlp";
        case Arch::SharedCosine: return "shared-cos";
    }
    return "?";
}

inline Arch arch_from_string(const std::string& name) {
    if (name == "mlp") return Arch::Mlp;
    if (name == "shared-mlp") return Arch::SharedMlp;
    if (name == "shared-cos") return Arch::SharedCosine;
    throw ConfigError("unknown classifier architecture: " + name);
}

// Binary pair classifier over frozen word vectors.  Three architectures:
//
//   mlp         input [va; vb] -> hidden (leaky rectifier) -> logistic unit
//   shared-mlp  one shared hidden layer applied to va and vb separately;
//               [ha; hb; |ha - hb|] -> logistic unit
//   shared-cos  one shared hidden layer (tanh); decide by cosine of the two
//               projections against a fixed 0.5 threshold
//
// Parameters live in one flat vector, ordered as the matrices are declared,
// each matrix row-major.
class PairClassifier {
public:
    PairClassifier() = default;
    PairClassifier(Arch arch, int dim, int hidden = 200, double leak = 0.01)
        : arch_(arch), dim_(dim), hidden_(hidden), leak_(leak) {
        if (dim < 1 || hidden < 1) throw ConfigError("classifier dimensions must be positive");
        theta_.assign(parameter_count(), 0.0);
    }

    Arch arch() const { return arch_; }
    int dim() const { return dim_; }
    int hidden() const { return hidden_; }
    double leak() const { return leak_; }
    static constexpr double threshold() { return 0.5; }

    std::vector<double>& parameters() { return theta_; }
    const std::vector<double>& parameters() const { return theta_; }

    std::size_t parameter_count() const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        switch (arch_) {
            case Arch::Mlp: return h * 2 * d + h + h + 1;        // W1, b1, w2, b2
            case Arch::SharedMlp: return h * d + h + 3 * h + 1;  // Ws, bs, w2, b2
            case Arch::SharedCosine: return h * d + h;           // Ws, bs
        }
        return 0;
    }

    // Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
    void init(Rng rng) {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        auto fill = [&rng](std::span<double> block, std::size_t fan_in) {
            const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (double& x : block) x = (rng.uniform() * 2.0 - 1.0) * scale;
        };
        std::fill(theta_.begin(), theta_.end(), 0.0);
        switch (arch_) {
            case Arch::Mlp:
                fill(block(0, h * 2 * d), 2 * d);
                fill(block(h * 2 * d + h, h), h);  // w2
                break;
            case Arch::SharedMlp:
                fill(block(0, h * d), d);
                fill(block(h * d + h, 3 * h), 3 * h);  // w2
                break;
            case Arch::SharedCosine:
                fill(block(0, h * d), d);
                break;
        }
    }

    // Probability of a match for the MLP variants; cosine similarity of the
    // projections for shared-cos.
    double forward(std::span<const double> va, std::span<const double> vb) const {
        check_dims(va, vb);
        switch (arch_) {
            case Arch::Mlp: return mlp_forward(va, vb);
            case Arch::SharedMlp: return shared_mlp_forward(va, vb);
            case Arch::SharedCosine: return shared_cosine_forward(va, vb);
        }
        return 0.0;
    }

    // Strict threshold: a score of exactly 0.5 is a non-match.
    bool decide(double score) const { return score > 0.5; }

    bool classify(std::span<const double> va, std::span<const double> vb) const {
        return decide(forward(va, vb));
    }

    // Per-example loss (cross-entropy for the MLP variants, squared cosine
    // error for shared-cos) and its gradient, accumulated into `grad`.
    double loss_and_grad(std::span<const double> va, std::span<const double> vb, bool match,
                         std::vector<double>& grad) const {
        check_dims(va, vb);
        if (grad.size() != theta_.size()) throw std::invalid_argument("gradient buffer size mismatch");
        switch (arch_) {
            case Arch::Mlp: return mlp_backward(va, vb, match, grad);
            case Arch::SharedMlp: return shared_mlp_backward(va, vb, match, grad);
            case Arch::SharedCosine: return shared_cosine_backward(va, vb, match, grad);
        }
        return 0.0;
    }

    double loss_only(std::span<const double> va, std::span<const double> vb, bool match) const {
        check_dims(va, vb);
        const double y = match ? 1.0 : 0.0;
        if (arch_ == Arch::SharedCosine) {
            const double c = shared_cosine_forward(va, vb);
            return (c - y) * (c - y);
        }
        const double s = arch_ == Arch::Mlp ? mlp_logit(va, vb) : shared_mlp_logit(va, vb);
        return softplus(s) - y * s;
    }

    // Tanh projection used by shared-cos (exposed for inspection).
    std::vector<double> project(std::span<const double> v) const {
        if (arch_ != Arch::SharedCosine) throw std::invalid_argument("project requires shared-cos");
        std::vector<double> out(static_cast<std::size_t>(hidden_));
        hidden_preactivation(v, 0, out);
        for (double& x : out) x = std::tanh(x);
        return out;
    }

    // Checkpoint: "<arch> <dim> <hidden> <leak-or-threshold>" header, then the
    // flat parameter vector, one matrix row per line, 17 significant digits.
    void save(std::ostream& out) const {
        out << to_string(arch_) << ' ' << dim_ << ' ' << hidden_ << ' ';
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", arch_ == Arch::SharedCosine ? threshold() : leak_);
        out << buf << "\n";
        std::size_t cursor = 0;
        for (std::size_t width : row_widths()) {
            for (std::size_t j = 0; j < width; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", theta_[cursor++]);
                out << buf << (j + 1 == width ? "" : " ");
            }
            out << "\n";
        }
    }

    static PairClassifier load(std::istream& in) {
        std::string name;
        int dim = 0, hidden = 0;
        double aux = 0.0;
        if (!(in >> name >> dim >> hidden >> aux)) throw ParseError("bad classifier header", 1);
        Arch arch = arch_from_string(name);
        PairClassifier clf(arch, dim, hidden, arch == Arch::SharedCosine ? 0.01 : aux);
        for (double& x : clf.theta_)
            if (!(in >> x)) throw ParseError("classifier checkpoint truncated", 2);
        double extra;
        if (in >> extra) throw ParseError("classifier checkpoint has trailing values", 2);
        return clf;
    }

    void save_file(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw DataError("cannot write checkpoint: " + path);
        save(out);
    }

    static PairClassifier load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open checkpoint: " + path);
        return load(in);
    }

private:
    std::span<double> block(std::size_t offset, std::size_t size) {
        return {theta_.data() + offset, size};
    }
    std::span<const double> cblock(std::size_t offset, std::size_t size) const {
        return {theta_.data() + offset, size};
    }

    void check_dims(std::span<const double> va, std::span<const double> vb) const {
        if (static_cast<int>(va.size()) != dim_ || static_cast<int>(vb.size()) != dim_)
            throw std::invalid_argument("input vector dimension mismatch");
    }

    // Rows for checkpoint formatting: weight matrices one hidden unit per
    // line, vectors on a single line.
    std::vector<std::size_t> row_widths() const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::vector<std::size_t> rows;
        switch (arch_) {
            case Arch::Mlp:
                rows.assign(h, 2 * d);
                rows.push_back(h);  // b1
                rows.push_back(h);  // w2
                rows.push_back(1);  // b2
                break;
            case Arch::SharedMlp:
                rows.assign(h, d);
                rows.push_back(h);      // bs
                rows.push_back(3 * h);  // w2
                rows.push_back(1);      // b2
                break;
            case Arch::SharedCosine:
                rows.assign(h, d);
                rows.push_back(h);  // bs
                break;
        }
        return rows;
    }

    // --- mlp ---

    double mlp_logit(std::span<const double> va, std::span<const double> vb) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::span<const double> w1 = cblock(0, h * 2 * d);
        std::span<const double> b1 = cblock(h * 2 * d, h);
        std::span<const double> w2 = cblock(h * 2 * d + h, h);
        const double b2 = theta_[h * 2 * d + h + h];
        double s = b2;
        for (std::size_t r = 0; r < h; ++r) {
            double z = b1[r];
            const double* row = w1.data() + r * 2 * d;
            for (std::size_t i = 0; i < d; ++i) z += row[i] * va[i] + row[d + i] * vb[i];
            s += w2[r] * leaky_rectifier(z, leak_);
        }
        return s;
    }

    double mlp_forward(std::span<const double> va, std::span<const double> vb) const {
        return sigmoid(mlp_logit(va, vb));
    }

    double mlp_backward(std::span<const double> va, std::span<const double> vb, bool match,
                        std::vector<double>& grad) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::span<const double> w1 = cblock(0, h * 2 * d);
        std::span<const double> b1 = cblock(h * 2 * d, h);
        std::span<const double> w2 = cblock(h * 2 * d + h, h);
        const double b2 = theta_[h * 2 * d + h + h];

        std::vector<double> z(h), a(h);
        double s = b2;
        for (std::size_t r = 0; r < h; ++r) {
            double zr = b1[r];
            const double* row = w1.data() + r * 2 * d;
            for (std::size_t i = 0; i < d; ++i) zr += row[i] * va[i] + row[d + i] * vb[i];
            z[r] = zr;
            a[r] = leaky_rectifier(zr, leak_);
            s += w2[r] * a[r];
        }
        const double y = match ? 1.0 : 0.0;
        const double ds = sigmoid(s) - y;

        double* g_w1 = grad.data();
        double* g_b1 = grad.data() + h * 2 * d;
        double* g_w2 = grad.data() + h * 2 * d + h;
        double* g_b2 = grad.data() + h * 2 * d + h + h;
        *g_b2 += ds;
        for (std::size_t r = 0; r < h; ++r) {
            g_w2[r] += ds * a[r];
            const double dz = ds * w2[r] * (z[r] >= 0.0 ? 1.0 : leak_);
            g_b1[r] += dz;
            double* grow = g_w1 + r * 2 * d;
            for (std::size_t i = 0; i < d; ++i) {
                grow[i] += dz * va[i];
                grow[d + i] += dz * vb[i];
            }
        }
        return softplus(s) - y * s;
    }

    // --- shared-mlp ---

    void hidden_preactivation(std::span<const double> v, std::size_t ws_offset,
                              std::vector<double>& out) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::span<const double> ws = cblock(ws_offset, h * d);
        std::span<const double> bs = cblock(ws_offset + h * d, h);
        for (std::size_t r = 0; r < h; ++r) {
            double z = bs[r];
            const double* row = ws.data() + r * d;
            for (std::size_t i = 0; i < d; ++i) z += row[i] * v[i];
            out[r] = z;
        }
    }

    double shared_mlp_logit(std::span<const double> va, std::span<const double> vb) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::span<const double> w2 = cblock(h * d + h, 3 * h);
        const double b2 = theta_[h * d + h + 3 * h];
        std::vector<double> za(h), zb(h);
        hidden_preactivation(va, 0, za);
        hidden_preactivation(vb, 0, zb);
        double s = b2;
        for (std::size_t r = 0; r < h; ++r) {
            const double ha = leaky_rectifier(za[r], leak_);
            const double hb = leaky_rectifier(zb[r], leak_);
            s += w2[r] * ha + w2[h + r] * hb + w2[2 * h + r] * std::abs(ha - hb);
        }
        return s;
    }

    double shared_mlp_forward(std::span<const double> va, std::span<const double> vb) const {
        return sigmoid(shared_mlp_logit(va, vb));
    }

    double shared_mlp_backward(std::span<const double> va, std::span<const double> vb, bool match,
                               std::vector<double>& grad) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::span<const double> w2 = cblock(h * d + h, 3 * h);
        const double b2 = theta_[h * d + h + 3 * h];

        std::vector<double> za(h), zb(h), ha(h), hb(h);
        hidden_preactivation(va, 0, za);
        hidden_preactivation(vb, 0, zb);
        double s = b2;
        for (std::size_t r = 0; r < h; ++r) {
            ha[r] = leaky_rectifier(za[r], leak_);
            hb[r] = leaky_rectifier(zb[r], leak_);
            s += w2[r] * ha[r] + w2[h + r] * hb[r] + w2[2 * h + r] * std::abs(ha[r] - hb[r]);
        }
        const double y = match ? 1.0 : 0.0;
        const double ds = sigmoid(s) - y;

        double* g_ws = grad.data();
        double* g_bs = grad.data() + h * d;
        double* g_w2 = grad.data() + h * d + h;
        double* g_b2 = grad.data() + h * d + h + 3 * h;
        *g_b2 += ds;
        for (std::size_t r = 0; r < h; ++r) {
            const double diff = ha[r] - hb[r];
            const double sg = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            g_w2[r] += ds * ha[r];
            g_w2[h + r] += ds * hb[r];
            g_w2[2 * h + r] += ds * std::abs(diff);
            const double dha = ds * (w2[r] + w2[2 * h + r] * sg);
            const double dhb = ds * (w2[h + r] - w2[2 * h + r] * sg);
            const double dza = dha * (za[r] >= 0.0 ? 1.0 : leak_);
            const double dzb = dhb * (zb[r] >= 0.0 ? 1.0 : leak_);
            g_bs[r] += dza + dzb;
            double* grow = g_ws + r * d;
            for (std::size_t i = 0; i < d; ++i) grow[i] += dza * va[i] + dzb * vb[i];
        }
        return softplus(s) - y * s;
    }

    // --- shared-cos ---

    double shared_cosine_forward(std::span<const double> va, std::span<const double> vb) const {
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::vector<double> ua(h), ub(h);
        hidden_preactivation(va, 0, ua);
        hidden_preactivation(vb, 0, ub);
        double naa = 0.0, nbb = 0.0, nab = 0.0;
        for (std::size_t r = 0; r < h; ++r) {
            ua[r] = std::tanh(ua[r]);
            ub[r] = std::tanh(ub[r]);
            naa += ua[r] * ua[r];
            nbb += ub[r] * ub[r];
            nab += ua[r] * ub[r];
        }
        if (naa == 0.0 || nbb == 0.0) throw DataError("cosine undefined: zero hidden projection");
        return nab / std::sqrt(naa * nbb);
    }

    double shared_cosine_backward(std::span<const double> va, std::span<const double> vb, bool match,
                                  std::vector<double>& grad) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        const std::size_t h = static_cast<std::size_t>(hidden_);
        std::vector<double> ua(h), ub(h);
        hidden_preactivation(va, 0, ua);
        hidden_preactivation(vb, 0, ub);
        double naa = 0.0, nbb = 0.0, nab = 0.0;
        for (std::size_t r = 0; r < h; ++r) {
            ua[r] = std::tanh(ua[r]);
            ub[r] = std::tanh(ub[r]);
            naa += ua[r] * ua[r];
            nbb += ub[r] * ub[r];
            nab += ua[r] * ub[r];
        }
        if (naa == 0.0 || nbb == 0.0) throw DataError("cosine undefined: zero hidden projection");
        const double norm_a = std::sqrt(naa);
        const double norm_b = std::sqrt(nbb);
        const double c = nab / (norm_a * norm_b);
        const double y = match ? 1.0 : 0.0;
        const double dc = 2.0 * (c - y);

        double* g_ws = grad.data();
        double* g_bs = grad.data() + h * d;
        for (std::size_t r = 0; r < h; ++r) {
            const double dua = dc * (ub[r] / (norm_a * norm_b) - c * ua[r] / naa);
            const double dub = dc * (ua[r] / (norm_a * norm_b) - c * ub[r] / nbb);
            const double dza = dua * (1.0 - ua[r] * ua[r]);
            const double dzb = dub * (1.0 - ub[r] * ub[r]);
            g_bs[r] += dza + dzb;
            double* grow = g_ws + r * d;
            for (std::size_t i = 0; i < d; ++i) grow[i] += dza * va[i] + dzb * vb[i];
        }
        return (c - y) * (c - y);
    }

    Arch arch_ = Arch::Mlp;
    int dim_ = 0;
    int hidden_ = 0;
    double leak_ = 0.01;
    std::vector<double> theta_;
};

struct ClassifierOptions {
    int hidden = 200;
    double leak = 0.01;
    int batch = 32;
    double lr = 0.05;
    int epochs = 50;
    int patience = 5;
    std::uint64_t seed = 1;

    void validate() const {
        if (hidden < 1) throw ConfigError("hidden size must be positive");
        if (leak <= 0.0 || leak >= 1.0) throw ConfigError("leak slope must be in (0,1)");
        if (batch < 1) throw ConfigError("batch size must be positive");
        if (lr <= 0.0) throw ConfigError("learning rate must be positive");
        if (epochs < 0) throw ConfigError("epochs must be >= 0");
        if (patience < 1) throw ConfigError("patience must be positive");
    }
};

struct EvalResult {
    double accuracy = 0.0;
    std::int64_t true_match = 0;
    std::int64_t false_match = 0;
    std::int64_t true_nonmatch = 0;
    std::int64_t false_nonmatch = 0;
};

inline EvalResult evaluate(const PairClassifier& clf, const PairDataset& data,
                           const EmbeddingStore& store) {
    if (data.items.empty()) throw DataError("cannot evaluate on an empty dataset");
    EvalResult result;
    for (const PairItem& item : data.items) {
        const bool predicted = clf.classify(store.vector_of(item.a), store.vector_of(item.b));
        if (predicted && item.match) ++result.true_match;
        if (predicted && !item.match) ++result.false_match;
        if (!predicted && !item.match) ++result.true_nonmatch;
        if (!predicted && item.match) ++result.false_nonmatch;
    }
    result.accuracy = static_cast<double>(result.true_match + result.true_nonmatch) /
                      static_cast<double>(data.items.size());
    return result;
}

struct TrainClassifierResult {
    std::vector<double> dev_accuracy;  // one entry per completed epoch
    int best_epoch = 0;                // 1-based; 0 if no dev evaluation ran
};

// Mini-batch SGD on the architecture's loss.  Word vectors are frozen
// inputs.  When a dev set is given, training keeps the best-dev parameters
// and stops after `patience` epochs without improvement.
inline TrainClassifierResult train_classifier(PairClassifier& clf, const PairDataset& train_set,
                                              const PairDataset& dev_set, const EmbeddingStore& store,
                                              const ClassifierOptions& options) {
    options.validate();
    if (train_set.items.empty()) throw DataError("cannot train on an empty dataset");

    // Resolve words up front; missing coverage is a caller bug.
    std::vector<std::pair<int, int>> ids;
    ids.reserve(train_set.items.size());
    for (const PairItem& item : train_set.items)
        ids.emplace_back(store.id(item.a), store.id(item.b));

    Rng master(options.seed);
    Rng order_rng = master.derive("batch-order");

    TrainClassifierResult result;
    std::vector<double> grad(clf.parameters().size(), 0.0);
    std::vector<std::size_t> order(train_set.items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> best_theta = clf.parameters();
    double best_dev = -1.0;
    int since_best = 0;

    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
        shuffle_range(order.begin(), order.end(), order_rng);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(options.batch)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(options.batch));
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i) {
                const PairItem& item = train_set.items[order[i]];
                const auto& [ida, idb] = ids[order[i]];
                clf.loss_and_grad(store.row(ida), store.row(idb), item.match, grad);
            }
            const double scale = options.lr / static_cast<double>(stop - start);
            std::vector<double>& theta = clf.parameters();
            for (std::size_t p = 0; p < theta.size(); ++p) theta[p] -= scale * grad[p];
        }

        if (!dev_set.items.empty()) {
            const double dev_acc = evaluate(clf, dev_set, store).accuracy;
            result.dev_accuracy.push_back(dev_acc);
            if (dev_acc > best_dev) {
                best_dev = dev_acc;
                best_theta = clf.parameters();
                result.best_epoch = epoch;
                since_best = 0;
            } else if (++since_best >= options.patience) {
                break;
            }
        }
    }

    if (!dev_set.items.empty() && result.best_epoch > 0) clf.parameters() = best_theta;
    return result;
}

}  // namespace structvec
