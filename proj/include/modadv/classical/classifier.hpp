#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modadv/classical/cart.hpp"
#include "modadv/errors.hpp"
#include "modadv/numerics.hpp"
#include "modadv/signal.hpp"
#include "modadv/util.hpp"

namespace modadv {

enum class ClassifierKind {
    MLP, KNN, SVM_RBF, GAUSSIAN_NB, LDA, DECISION_TREE, RANDOM_FOREST, ADABOOST,
    GRADIENT_BOOSTING
};

constexpr int kNumClassifierKinds = 9;

inline const char* kind_name(ClassifierKind k) {
    static const char* names[kNumClassifierKinds] = {
        "mlp", "knn", "svm_rbf", "gaussian_nb", "lda", "decision_tree", "random_forest",
        "adaboost", "gradient_boosting"};
    return names[static_cast<int>(k)];
}

inline std::optional<ClassifierKind> kind_from_name(const std::string& s) {
    for (int i = 0; i < kNumClassifierKinds; ++i)
        if (s == kind_name(static_cast<ClassifierKind>(i)))
            return static_cast<ClassifierKind>(i);
    return std::nullopt;
}

// Uniform face of the nine models: scores per class plus the shared
// argmax-ties-to-lowest-code rule. "Probabilities" from KNN are vote
// fractions and from the SVM one-vs-one vote shares; they order predictions
// but are not calibrated.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual ClassifierKind kind() const = 0;
    virtual std::size_t num_classes() const = 0;
    virtual std::size_t dim() const = 0;
    virtual Vec predict_proba(const Vec& x) const = 0;

    std::size_t predict(const Vec& x) const { return argmax_tie_low(predict_proba(x)); }

    std::vector<std::size_t> predict_batch(const Matrix& xs) const {
        std::vector<std::size_t> out(xs.rows);
        Vec xi(xs.cols);
        for (std::size_t i = 0; i < xs.rows; ++i) {
            std::copy(xs.row(i), xs.row(i) + xs.cols, xi.begin());
            out[i] = predict(xi);
        }
        return out;
    }

    // ---- shared file envelope ----
    std::optional<MinMaxScaler> scaler;
    std::vector<std::string> label_order;
    std::uint64_t seed = 0;

    virtual nlohmann::ordered_json hyperparams_json() const = 0;
    virtual nlohmann::ordered_json payload_json() const = 0;

    virtual nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["format"] = std::string("modadv-") + kind_name(kind()) + "-v1";
        j["hyperparams"] = hyperparams_json();
        j["payload"] = payload_json();
        if (scaler)
            j["scaler"] = {{"min", scaler->min}, {"max", scaler->max}};
        else
            j["scaler"] = nullptr;
        j["label_order"] = label_order;
        j["seed"] = seed;
        return j;
    }

    void save(const std::string& path) const {
        std::string text = to_json().dump(2);
        text.push_back('\n');
        write_file_bytes(path, text.data(), text.size());
    }

protected:
    void check_dim(const Vec& x) const {
        if (x.size() != dim())
            throw InvalidInput("predict: expected " + std::to_string(dim()) +
                               " features, got " + std::to_string(x.size()));
    }
};

namespace detail {

inline void load_envelope(Classifier& c, const nlohmann::json& j) {
    if (!j.at("scaler").is_null()) {
        MinMaxScaler sc;
        sc.min = j.at("scaler").at("min").get<Vec>();
        sc.max = j.at("scaler").at("max").get<Vec>();
        c.scaler = std::move(sc);
    }
    c.label_order = j.at("label_order").get<std::vector<std::string>>();
    c.seed = j.at("seed").get<std::uint64_t>();
}

inline nlohmann::ordered_json tree_to_json(const Tree& t) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& n : t.nodes) {
        nlohmann::ordered_json jn;
        jn["f"] = n.feature;
        jn["thr"] = n.threshold;
        jn["l"] = n.left;
        jn["r"] = n.right;
        if (!n.dist.empty()) jn["dist"] = n.dist;
        if (n.feature < 0 && n.dist.empty()) jn["value"] = n.value;
        arr.push_back(std::move(jn));
    }
    return arr;
}

inline Tree tree_from_json(const nlohmann::json& arr) {
    Tree t;
    for (const auto& jn : arr) {
        TreeNode n;
        n.feature = jn.at("f").get<int>();
        n.threshold = jn.at("thr").get<double>();
        n.left = jn.at("l").get<int>();
        n.right = jn.at("r").get<int>();
        if (jn.contains("dist")) n.dist = jn.at("dist").get<Vec>();
        if (jn.contains("value")) n.value = jn.at("value").get<double>();
        t.nodes.push_back(std::move(n));
    }
    if (t.nodes.empty()) throw FormatError("tree with no nodes");
    return t;
}

} // namespace detail

} // namespace modadv
