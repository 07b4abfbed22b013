#pragma once

#include <cmath>
#include <vector>

#include "modadv/classical/cart.hpp"
#include "modadv/classical/classifier.hpp"

namespace modadv {

// SAMME over depth-1 stumps. Round weight alpha = ln((1-err)/err) + ln(K-1);
// boosting stops early on a perfect stump (kept with weight 1) or when the
// round error reaches 1 - 1/K.
class AdaBoostClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::ADABOOST; }
    std::size_t num_classes() const override { return num_classes_; }
    std::size_t dim() const override { return dim_; }

    struct Round {
        Tree stump;
        double alpha = 0.0;
    };

    static AdaBoostClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                                    std::size_t num_classes, std::size_t rounds = 50) {
        if (x.rows == 0) throw InvalidInput("adaboost: empty training set");
        const std::size_t n = x.rows;
        const double k = static_cast<double>(num_classes);
        PresortedFeatures ps(x);
        TreeConfig cfg;
        cfg.max_depth = 1;

        AdaBoostClassifier c;
        c.num_classes_ = num_classes;
        c.dim_ = x.cols;
        c.rounds_requested_ = rounds;

        Vec w(n, 1.0 / static_cast<double>(n));
        for (std::size_t r = 0; r < rounds; ++r) {
            Tree stump = build_classification_tree(ps, y, num_classes, w, cfg);
            double err = 0.0;
            std::vector<char> wrong(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Vec& dist = stump.nodes[stump.leaf_for(x.row(i))].dist;
                wrong[i] = argmax_tie_low(dist) != y[i];
                if (wrong[i]) err += w[i];
            }
            if (err < 1e-12) { // perfect stump: keep it and stop
                c.rounds_.push_back({std::move(stump), 1.0});
                break;
            }
            if (err >= 1.0 - 1.0 / k) break; // no better than chance
            double alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
            c.rounds_.push_back({std::move(stump), alpha});
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (wrong[i]) w[i] *= std::exp(alpha);
                sum += w[i];
            }
            for (double& wi : w) wi /= sum;
        }
        if (c.rounds_.empty())
            throw TrainingError("adaboost: first stump was no better than chance");
        return c;
    }

    Vec predict_proba(const Vec& x) const override {
        check_dim(x);
        Vec score(num_classes_, 0.0);
        double total = 0.0;
        for (const auto& r : rounds_) {
            const Vec& dist = r.stump.nodes[r.stump.leaf_for(x.data())].dist;
            score[argmax_tie_low(dist)] += r.alpha;
            total += r.alpha;
        }
        for (double& s : score) s /= total;
        return score;
    }

    const std::vector<Round>& rounds() const { return rounds_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"rounds", rounds_requested_}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        j["num_classes"] = num_classes_;
        j["dim"] = dim_;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rounds_) {
            nlohmann::ordered_json jr;
            jr["alpha"] = r.alpha;
            jr["stump"] = detail::tree_to_json(r.stump);
            arr.push_back(std::move(jr));
        }
        j["rounds"] = std::move(arr);
        return j;
    }

    static std::unique_ptr<AdaBoostClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<AdaBoostClassifier>();
        c->rounds_requested_ = j.at("hyperparams").at("rounds").get<std::size_t>();
        c->num_classes_ = j.at("payload").at("num_classes").get<std::size_t>();
        c->dim_ = j.at("payload").at("dim").get<std::size_t>();
        for (const auto& jr : j.at("payload").at("rounds"))
            c->rounds_.push_back(
                {detail::tree_from_json(jr.at("stump")), jr.at("alpha").get<double>()});
        if (c->rounds_.empty()) throw FormatError("adaboost payload has no rounds");
        detail::load_envelope(*c, j);
        return c;
    }

private:
    std::vector<Round> rounds_;
    std::size_t num_classes_ = 0;
    std::size_t dim_ = 0;
    std::size_t rounds_requested_ = 50;
};

struct GradientBoostingConfig {
    std::size_t rounds = 50;
    int depth = 3;
    double shrinkage = 0.1;
};

// Multiclass gradient boosting on the softmax cross-entropy objective. Each
// round fits one regression tree per class to the residual y_k - p_k (the
// negative gradient), with Newton leaf values scaled by (K-1)/K, then steps
// the class score by shrinkage * tree(x). Scores start at zero, so zero
// rounds means uniform probabilities.
class GradientBoostingClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::GRADIENT_BOOSTING; }
    std::size_t num_classes() const override { return num_classes_; }
    std::size_t dim() const override { return dim_; }

    static GradientBoostingClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                                            std::size_t num_classes,
                                            const GradientBoostingConfig& cfg,
                                            Vec* train_log_loss = nullptr) {
        if (x.rows == 0) throw InvalidInput("gradient_boosting: empty training set");
        const std::size_t n = x.rows;
        const std::size_t k = num_classes;
        PresortedFeatures ps(x);
        TreeConfig tree_cfg;
        tree_cfg.max_depth = cfg.depth;

        GradientBoostingClassifier c;
        c.cfg_ = cfg;
        c.num_classes_ = k;
        c.dim_ = x.cols;

        Matrix scores(n, k);
        Vec g(n), h(n);
        double factor = k > 1 ? (static_cast<double>(k) - 1.0) / static_cast<double>(k) : 1.0;
        for (std::size_t round = 0; round < cfg.rounds; ++round) {
            Matrix probs(n, k);
            for (std::size_t i = 0; i < n; ++i) {
                Vec p = softmax(Vec(scores.row(i), scores.row(i) + k));
                std::copy(p.begin(), p.end(), probs.row(i));
            }
            std::vector<Tree> round_trees;
            for (std::size_t cls = 0; cls < k; ++cls) {
                for (std::size_t i = 0; i < n; ++i) {
                    double p = probs.at(i, cls);
                    g[i] = (y[i] == cls ? 1.0 : 0.0) - p;
                    h[i] = p * (1.0 - p);
                }
                Tree t = build_regression_tree(ps, g, h, factor, tree_cfg);
                for (std::size_t i = 0; i < n; ++i)
                    scores.at(i, cls) += cfg.shrinkage * t.nodes[t.leaf_for(x.row(i))].value;
                round_trees.push_back(std::move(t));
            }
            c.rounds_.push_back(std::move(round_trees));
            if (train_log_loss) {
                double loss = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    loss += cross_entropy(softmax(Vec(scores.row(i), scores.row(i) + k)), y[i]);
                train_log_loss->push_back(loss / static_cast<double>(n));
            }
        }
        return c;
    }

    Vec decision_scores(const Vec& x) const {
        check_dim(x);
        Vec s(num_classes_, 0.0);
        for (const auto& round : rounds_)
            for (std::size_t cls = 0; cls < num_classes_; ++cls) {
                const Tree& t = round[cls];
                s[cls] += cfg_.shrinkage * t.nodes[t.leaf_for(x.data())].value;
            }
        return s;
    }

    Vec predict_proba(const Vec& x) const override { return softmax(decision_scores(x)); }

    const std::vector<std::vector<Tree>>& rounds() const { return rounds_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"rounds", cfg_.rounds}, {"depth", cfg_.depth}, {"shrinkage", cfg_.shrinkage}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        j["num_classes"] = num_classes_;
        j["dim"] = dim_;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& round : rounds_) {
            auto per_class = nlohmann::ordered_json::array();
            for (const auto& t : round) per_class.push_back(detail::tree_to_json(t));
            arr.push_back(std::move(per_class));
        }
        j["rounds"] = std::move(arr);
        return j;
    }

    static std::unique_ptr<GradientBoostingClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<GradientBoostingClassifier>();
        const auto& h = j.at("hyperparams");
        c->cfg_ = {h.at("rounds").get<std::size_t>(), h.at("depth").get<int>(),
                   h.at("shrinkage").get<double>()};
        c->num_classes_ = j.at("payload").at("num_classes").get<std::size_t>();
        c->dim_ = j.at("payload").at("dim").get<std::size_t>();
        for (const auto& jr : j.at("payload").at("rounds")) {
            std::vector<Tree> round;
            for (const auto& jt : jr) round.push_back(detail::tree_from_json(jt));
            if (round.size() != c->num_classes_)
                throw FormatError("gradient_boosting payload round size mismatch");
            c->rounds_.push_back(std::move(round));
        }
        detail::load_envelope(*c, j);
        return c;
    }

private:
    std::vector<std::vector<Tree>> rounds_;
    GradientBoostingConfig cfg_;
    std::size_t num_classes_ = 0;
    std::size_t dim_ = 0;
};

} // namespace modadv
