#pragma once

#include <memory>

#include "modadv/classical/boosting.hpp"
#include "modadv/classical/classifier.hpp"
#include "modadv/classical/knn.hpp"
#include "modadv/classical/lda.hpp"
#include "modadv/classical/nb.hpp"
#include "modadv/classical/svm.hpp"
#include "modadv/classical/trees.hpp"
#include "modadv/mlp.hpp"

namespace modadv {

// The neural model behind the same uniform face as the other eight. Its file
// format stays the dedicated mlp layout, so the envelope comes from the
// wrapped model.
class MlpClassifier : public Classifier {
public:
    explicit MlpClassifier(MlpModel model) : model_(std::move(model)) {
        scaler = model_.scaler;
        label_order = model_.label_order;
        seed = model_.train_meta.seed;
    }

    ClassifierKind kind() const override { return ClassifierKind::MLP; }
    std::size_t num_classes() const override { return model_.num_classes(); }
    std::size_t dim() const override { return model_.input_dim(); }
    Vec predict_proba(const Vec& x) const override { return model_.forward(x); }

    const MlpModel& model() const { return model_; }
    MlpModel& model() { return model_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return nlohmann::ordered_json::object();
    }
    nlohmann::ordered_json payload_json() const override {
        return nlohmann::ordered_json::object();
    }
    nlohmann::ordered_json to_json() const override { return model_.to_json(); }

private:
    MlpModel model_;
};

// Reads any model file this project writes, dispatching on the format field.
inline std::unique_ptr<Classifier> load_classifier(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    std::string format;
    try {
        format = j.at("format").get<std::string>();
        if (format == MlpModel::kFormat)
            return std::make_unique<MlpClassifier>(MlpModel::from_json(j));
        if (format == "modadv-knn-v1") return KnnClassifier::from_json(j);
        if (format == "modadv-svm_rbf-v1") return SvmRbfClassifier::from_json(j);
        if (format == "modadv-gaussian_nb-v1") return GaussianNbClassifier::from_json(j);
        if (format == "modadv-lda-v1") return LdaClassifier::from_json(j);
        if (format == "modadv-decision_tree-v1") return DecisionTreeClassifier::from_json(j);
        if (format == "modadv-random_forest-v1") return RandomForestClassifier::from_json(j);
        if (format == "modadv-adaboost-v1") return AdaBoostClassifier::from_json(j);
        if (format == "modadv-gradient_boosting-v1")
            return GradientBoostingClassifier::from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    throw FormatError(path + ": unknown format \"" + format + "\"");
}

} // namespace modadv
