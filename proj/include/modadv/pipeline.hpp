#pragma once

#include <memory>
#include <string>
#include <vector>

#include "modadv/classical.hpp"
#include "modadv/signal.hpp"

namespace modadv {

inline std::vector<std::string> canonical_label_order() {
    std::vector<std::string> out;
    for (int i = 0; i < kNumSchemes; ++i) out.push_back(scheme_name(static_cast<Scheme>(i)));
    return out;
}

inline Matrix scaled_features(const Dataset& ds, const MinMaxScaler& sc,
                              const std::vector<std::size_t>& indices) {
    Matrix x(indices.size(), sc.dim());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        Vec row = sc.apply(ds.frames[indices[i]].features());
        std::copy(row.begin(), row.end(), x.row(i));
    }
    return x;
}

inline std::vector<std::size_t> frame_labels(const Dataset& ds,
                                             const std::vector<std::size_t>& indices) {
    std::vector<std::size_t> y(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        y[i] = static_cast<std::size_t>(ds.frames[indices[i]].label);
    return y;
}

// Every knob a `train` run can turn, defaults pinned project-wide.
struct TrainerConfig {
    TrainConfig mlp;
    std::size_t knn_k = 15;
    double nb_var_smoothing = 1e-9;
    double lda_shrinkage = 1e-6;
    SvmConfig svm;
    int tree_max_depth = 12;
    ForestConfig forest;
    std::size_t ada_rounds = 50;
    GradientBoostingConfig gb;
    std::uint64_t seed = 0;
};

// Trains one classifier kind on the training split. The scaler must already
// be fitted; every model records it plus the canonical label order.
inline std::unique_ptr<Classifier> train_classifier(ClassifierKind kind, const Dataset& ds,
                                                    const MinMaxScaler& scaler,
                                                    const TrainerConfig& cfg,
                                                    Vec* mlp_loss_curve = nullptr) {
    auto train_idx = ds.train_indices();
    if (train_idx.empty()) throw InvalidInput("train: dataset has no training split");
    Matrix x = scaled_features(ds, scaler, train_idx);
    std::vector<std::size_t> y = frame_labels(ds, train_idx);
    const std::size_t k = kNumSchemes;

    std::unique_ptr<Classifier> out;
    switch (kind) {
        case ClassifierKind::MLP: {
            Rng rng(cfg.mlp.seed);
            MlpModel m = MlpModel::init(default_mlp_sizes(), rng);
            Vec curve = m.train(x, y, cfg.mlp);
            if (mlp_loss_curve) *mlp_loss_curve = std::move(curve);
            m.scaler = scaler;
            m.label_order = canonical_label_order();
            out = std::make_unique<MlpClassifier>(std::move(m));
            break;
        }
        case ClassifierKind::KNN:
            out = std::make_unique<KnnClassifier>(KnnClassifier::train(x, y, k, cfg.knn_k));
            break;
        case ClassifierKind::SVM_RBF:
            out = std::make_unique<SvmRbfClassifier>(
                SvmRbfClassifier::train(x, y, k, cfg.svm, cfg.seed));
            break;
        case ClassifierKind::GAUSSIAN_NB:
            out = std::make_unique<GaussianNbClassifier>(
                GaussianNbClassifier::train(x, y, k, cfg.nb_var_smoothing));
            break;
        case ClassifierKind::LDA:
            out = std::make_unique<LdaClassifier>(
                LdaClassifier::train(x, y, k, cfg.lda_shrinkage));
            break;
        case ClassifierKind::DECISION_TREE:
            out = std::make_unique<DecisionTreeClassifier>(
                DecisionTreeClassifier::train(x, y, k, cfg.tree_max_depth));
            break;
        case ClassifierKind::RANDOM_FOREST:
            out = std::make_unique<RandomForestClassifier>(
                RandomForestClassifier::train(x, y, k, cfg.forest, cfg.seed));
            break;
        case ClassifierKind::ADABOOST:
            out = std::make_unique<AdaBoostClassifier>(
                AdaBoostClassifier::train(x, y, k, cfg.ada_rounds));
            break;
        case ClassifierKind::GRADIENT_BOOSTING:
            out = std::make_unique<GradientBoostingClassifier>(
                GradientBoostingClassifier::train(x, y, k, cfg.gb));
            break;
    }
    if (kind != ClassifierKind::MLP) {
        out->scaler = scaler;
        out->label_order = canonical_label_order();
        out->seed = cfg.seed;
    }
    return out;
}

} // namespace modadv
