#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modadv/errors.hpp"
#include "modadv/numerics.hpp"
#include "modadv/rng.hpp"
#include "modadv/signal.hpp"
#include "modadv/util.hpp"

namespace modadv {

struct TrainConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t batch_size = 128;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
};

// Fully connected net: four ReLU hidden layers and a softmax head, trained
// with SGD + momentum on cross-entropy. The layer count is fixed; widths and
// input/output dims are free so toy instances stay cheap.
class MlpModel {
public:
    static constexpr const char* kFormat = "modadv-mlp-v1";
    static constexpr int kHiddenLayers = 4;

    struct TrainMeta {
        std::uint64_t seed = 0;
        std::size_t epochs = 0;
        double lr = 0.0;
        double momentum = 0.0;
        std::size_t batch = 0;
    };

    std::optional<MinMaxScaler> scaler;
    std::vector<std::string> label_order;
    TrainMeta train_meta;

    MlpModel() = default;

    // He-uniform weights (bound sqrt(6/fan_in)), zero biases.
    static MlpModel init(const std::vector<std::size_t>& layer_sizes, Rng& rng) {
        MlpModel m;
        m.set_layer_sizes(layer_sizes);
        for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
            Matrix w(layer_sizes[l], layer_sizes[l + 1]);
            double bound = std::sqrt(6.0 / static_cast<double>(layer_sizes[l]));
            for (double& x : w.data) x = rng.uniform(-bound, bound);
            m.weights_.push_back(std::move(w));
            m.biases_.emplace_back(layer_sizes[l + 1], 0.0);
        }
        return m;
    }

    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t num_classes() const { return sizes_.back(); }
    std::vector<Matrix>& weights() { return weights_; }
    const std::vector<Matrix>& weights() const { return weights_; }
    std::vector<Vec>& biases() { return biases_; }
    const std::vector<Vec>& biases() const { return biases_; }

    bool operator==(const MlpModel& o) const {
        return sizes_ == o.sizes_ && weights_ == o.weights_ && biases_ == o.biases_;
    }

    // Activations cached layer by layer; trace[0] is the input, back() the
    // softmax output.
    struct ForwardTrace {
        std::vector<Vec> act; // act[0]=x, act[1..4]=relu outputs, act[5]=logits
        Vec probs;
    };

    ForwardTrace forward_trace(const Vec& x) const {
        check_scaled_input(x);
        ForwardTrace t;
        t.act.resize(sizes_.size());
        t.act[0] = x;
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            const Vec& a = t.act[l];
            Vec z = biases_[l];
            const Matrix& w = weights_[l];
            for (std::size_t i = 0; i < w.rows; ++i) {
                double ai = a[i];
                if (ai == 0.0) continue;
                const double* wr = w.row(i);
                for (std::size_t j = 0; j < w.cols; ++j) z[j] += ai * wr[j];
            }
            if (l + 1 < weights_.size())
                for (double& v : z) v = v > 0.0 ? v : 0.0;
            t.act[l + 1] = std::move(z);
        }
        t.probs = softmax(t.act.back());
        return t;
    }

    Vec forward(const Vec& x) const { return forward_trace(x).probs; }

    std::size_t predict(const Vec& x) const { return argmax_tie_low(forward(x)); }

    // Gradient of an objective w.r.t. the input, given d(objective)/d(logits).
    Vec backprop_to_input(const ForwardTrace& t, Vec dlogits) const {
        Vec delta = std::move(dlogits);
        for (std::size_t l = weights_.size(); l-- > 0;) {
            const Matrix& w = weights_[l];
            Vec prev(w.rows, 0.0);
            for (std::size_t i = 0; i < w.rows; ++i) {
                const double* wr = w.row(i);
                double s = 0.0;
                for (std::size_t j = 0; j < w.cols; ++j) s += wr[j] * delta[j];
                prev[i] = s;
            }
            if (l > 0) // relu mask on hidden activations
                for (std::size_t i = 0; i < prev.size(); ++i)
                    if (t.act[l][i] <= 0.0) prev[i] = 0.0;
            delta = std::move(prev);
        }
        return delta;
    }

    // d(cross_entropy at `label`)/dx.
    Vec input_gradient_loss(const Vec& x, std::size_t label) const {
        if (label >= num_classes()) throw InvalidInput("label out of range");
        ForwardTrace t = forward_trace(x);
        Vec dlogits = t.probs;
        dlogits[label] -= 1.0;
        return backprop_to_input(t, std::move(dlogits));
    }

    // d(Z_a - Z_b)/dx where Z is the softmax output or the raw logits.
    Vec input_gradient_output_diff(const Vec& x, std::size_t a, std::size_t b,
                                   bool use_logits) const {
        ForwardTrace t = forward_trace(x);
        return backprop_to_input(t, output_diff_dlogits(t, a, b, use_logits));
    }

    static Vec output_diff_dlogits(const ForwardTrace& t, std::size_t a, std::size_t b,
                                   bool use_logits) {
        std::size_t k = t.probs.size();
        if (a >= k || b >= k) throw InvalidInput("class index out of range");
        Vec dlogits(k, 0.0);
        if (use_logits) {
            dlogits[a] = 1.0;
            dlogits[b] = -1.0;
        } else {
            // u = e_a - e_b through the softmax jacobian: p_j (u_j - u.p)
            double updot = t.probs[a] - t.probs[b];
            for (std::size_t j = 0; j < k; ++j) {
                double u = (j == a ? 1.0 : 0.0) - (j == b ? 1.0 : 0.0);
                dlogits[j] = t.probs[j] * (u - updot);
            }
        }
        return dlogits;
    }

    // ---- training ----------------------------------------------------------

    struct Gradients {
        std::vector<Matrix> dw;
        std::vector<Vec> db;
    };

    Gradients zero_gradients() const {
        Gradients g;
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            g.dw.emplace_back(weights_[l].rows, weights_[l].cols);
            g.db.emplace_back(biases_[l].size(), 0.0);
        }
        return g;
    }

    // Accumulates parameter gradients of cross-entropy at `label`; returns the
    // example's loss.
    double accumulate_gradients(const Vec& x, std::size_t label, Gradients& g) const {
        ForwardTrace t = forward_trace(x);
        double loss = cross_entropy(t.probs, label);
        Vec delta = t.probs;
        delta[label] -= 1.0;
        for (std::size_t l = weights_.size(); l-- > 0;) {
            const Vec& a = t.act[l];
            Matrix& dw = g.dw[l];
            for (std::size_t i = 0; i < dw.rows; ++i) {
                double ai = a[i];
                if (ai == 0.0) continue;
                double* dr = dw.row(i);
                for (std::size_t j = 0; j < dw.cols; ++j) dr[j] += ai * delta[j];
            }
            for (std::size_t j = 0; j < delta.size(); ++j) g.db[l][j] += delta[j];
            if (l > 0) {
                const Matrix& w = weights_[l];
                Vec prev(w.rows, 0.0);
                for (std::size_t i = 0; i < w.rows; ++i) {
                    if (t.act[l][i] <= 0.0) continue;
                    const double* wr = w.row(i);
                    double s = 0.0;
                    for (std::size_t j = 0; j < w.cols; ++j) s += wr[j] * delta[j];
                    prev[i] = s;
                }
                delta = std::move(prev);
            }
        }
        return loss;
    }

    // Plain SGD with momentum over shuffled mini-batches. Returns the
    // per-epoch mean training loss. Single-threaded and fully deterministic
    // for a given (data, config).
    Vec train(const Matrix& x, const std::vector<std::size_t>& y, const TrainConfig& cfg) {
        if (x.rows != y.size()) throw InvalidInput("train: x/y size mismatch");
        if (x.cols != input_dim()) throw InvalidInput("train: feature dim mismatch");
        if (cfg.batch_size < 1 || cfg.learning_rate <= 0.0)
            throw InvalidInput("train: bad config");
        train_meta = {cfg.seed, cfg.epochs, cfg.learning_rate, cfg.momentum, cfg.batch_size};

        std::vector<Matrix> vel_w;
        std::vector<Vec> vel_b;
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            vel_w.emplace_back(weights_[l].rows, weights_[l].cols);
            vel_b.emplace_back(biases_[l].size(), 0.0);
        }

        Rng rng(cfg.seed);
        std::vector<std::size_t> order(x.rows);
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

        Vec epoch_loss;
        Gradients g = zero_gradients();
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            rng.shuffle(order);
            double loss_sum = 0.0;
            for (std::size_t start = 0, batch_idx = 0; start < order.size();
                 start += cfg.batch_size, ++batch_idx) {
                std::size_t end = std::min(start + cfg.batch_size, order.size());
                double n = static_cast<double>(end - start);
                for (auto& m : g.dw) std::fill(m.data.begin(), m.data.end(), 0.0);
                for (auto& v : g.db) std::fill(v.begin(), v.end(), 0.0);
                double batch_loss = 0.0;
                Vec xi(x.cols);
                try {
                    for (std::size_t k = start; k < end; ++k) {
                        const double* row = x.row(order[k]);
                        std::copy(row, row + x.cols, xi.begin());
                        batch_loss += accumulate_gradients(xi, y[order[k]], g);
                    }
                } catch (const InvalidInput&) {
                    batch_loss = std::nan(""); // exploded activations
                }
                if (!std::isfinite(batch_loss))
                    throw TrainingError("loss diverged at epoch " + std::to_string(epoch) +
                                        " batch " + std::to_string(batch_idx));
                loss_sum += batch_loss;
                for (std::size_t l = 0; l < weights_.size(); ++l) {
                    for (std::size_t i = 0; i < weights_[l].data.size(); ++i) {
                        vel_w[l].data[i] = cfg.momentum * vel_w[l].data[i] -
                                           cfg.learning_rate * g.dw[l].data[i] / n;
                        weights_[l].data[i] += vel_w[l].data[i];
                    }
                    for (std::size_t j = 0; j < biases_[l].size(); ++j) {
                        vel_b[l][j] = cfg.momentum * vel_b[l][j] -
                                      cfg.learning_rate * g.db[l][j] / n;
                        biases_[l][j] += vel_b[l][j];
                    }
                }
            }
            epoch_loss.push_back(loss_sum / static_cast<double>(x.rows));
        }
        return epoch_loss;
    }

    // ---- serialization -----------------------------------------------------

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["format"] = kFormat;
        j["layer_sizes"] = sizes_;
        auto weights = nlohmann::ordered_json::array();
        for (const auto& w : weights_) {
            auto rows = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < w.rows; ++i)
                rows.push_back(std::vector<double>(w.row(i), w.row(i) + w.cols));
            weights.push_back(std::move(rows));
        }
        j["weights"] = std::move(weights);
        j["biases"] = biases_;
        if (scaler)
            j["scaler"] = {{"min", scaler->min}, {"max", scaler->max}};
        else
            j["scaler"] = nullptr;
        j["label_order"] = label_order;
        j["train_meta"] = {{"seed", train_meta.seed}, {"epochs", train_meta.epochs},
                           {"lr", train_meta.lr},     {"momentum", train_meta.momentum},
                           {"batch", train_meta.batch}};
        return j;
    }

    static MlpModel from_json(const nlohmann::json& j) {
        auto field = [&](const char* name) -> const nlohmann::json& {
            auto it = j.find(name);
            if (it == j.end()) throw FormatError(std::string("missing field \"") + name + "\"");
            return *it;
        };
        try {
            if (field("format").get<std::string>() != kFormat)
                throw FormatError("field \"format\" is not " + std::string(kFormat));
            MlpModel m;
            m.set_layer_sizes(field("layer_sizes").get<std::vector<std::size_t>>());
            const auto& jw = field("weights");
            const auto& jb = field("biases");
            if (jw.size() != m.sizes_.size() - 1 || jb.size() != m.sizes_.size() - 1)
                throw FormatError("field \"weights\"/\"biases\" layer count mismatch");
            for (std::size_t l = 0; l + 1 < m.sizes_.size(); ++l) {
                Matrix w(m.sizes_[l], m.sizes_[l + 1]);
                if (jw[l].size() != w.rows)
                    throw FormatError("field \"weights\" row count mismatch in layer " +
                                      std::to_string(l));
                for (std::size_t i = 0; i < w.rows; ++i) {
                    auto row = jw[l][i].get<std::vector<double>>();
                    if (row.size() != w.cols)
                        throw FormatError("field \"weights\" column count mismatch in layer " +
                                          std::to_string(l));
                    std::copy(row.begin(), row.end(), w.row(i));
                }
                Vec b = jb[l].get<Vec>();
                if (b.size() != m.sizes_[l + 1])
                    throw FormatError("field \"biases\" size mismatch in layer " +
                                      std::to_string(l));
                if (!all_finite(w.data) || !all_finite(b))
                    throw FormatError("non-finite parameter in layer " + std::to_string(l));
                m.weights_.push_back(std::move(w));
                m.biases_.push_back(std::move(b));
            }
            if (!field("scaler").is_null()) {
                MinMaxScaler sc;
                sc.min = field("scaler").at("min").get<Vec>();
                sc.max = field("scaler").at("max").get<Vec>();
                if (sc.min.size() != sc.max.size())
                    throw FormatError("field \"scaler\" min/max size mismatch");
                m.scaler = std::move(sc);
            }
            m.label_order = field("label_order").get<std::vector<std::string>>();
            const auto& tm = field("train_meta");
            m.train_meta = {tm.at("seed").get<std::uint64_t>(),
                            tm.at("epochs").get<std::size_t>(), tm.at("lr").get<double>(),
                            tm.at("momentum").get<double>(), tm.at("batch").get<std::size_t>()};
            return m;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("model json: ") + e.what());
        }
    }

    void save(const std::string& path) const {
        std::string text = to_json().dump(2);
        text.push_back('\n');
        write_file_bytes(path, text.data(), text.size());
    }

    static MlpModel load(const std::string& path) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file_text(path));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path + ": " + e.what());
        }
        return from_json(j);
    }

private:
    void set_layer_sizes(std::vector<std::size_t> sizes) {
        if (sizes.size() != kHiddenLayers + 2)
            throw FormatError("layer_sizes must list input, 4 hidden, output (got " +
                              std::to_string(sizes.size()) + " entries)");
        for (std::size_t s : sizes)
            if (s == 0) throw FormatError("layer_sizes entries must be positive");
        sizes_ = std::move(sizes);
    }

    void check_scaled_input(const Vec& x) const {
        if (x.size() != input_dim()) throw InvalidInput("forward: input dim mismatch");
        for (double v : x)
            if (!(v >= -1e-9 && v <= 1.0 + 1e-9))
                throw ContractError("forward expects features scaled into [0,1]");
    }

    std::vector<std::size_t> sizes_;
    std::vector<Matrix> weights_;
    std::vector<Vec> biases_;
};

// Default production shape for the modulation task.
inline std::vector<std::size_t> default_mlp_sizes() {
    return {256, 256, 128, 64, 32, 8};
}

} // namespace modadv
