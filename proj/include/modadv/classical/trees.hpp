#pragma once

#include <vector>

#include "modadv/classical/cart.hpp"
#include "modadv/classical/classifier.hpp"
#include "modadv/rng.hpp"

namespace modadv {

// Single CART: Gini impurity, best axis-aligned threshold, depth cap,
// min 2 samples to split. Leaves keep class histograms.
class DecisionTreeClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::DECISION_TREE; }
    std::size_t num_classes() const override { return num_classes_; }
    std::size_t dim() const override { return dim_; }

    static DecisionTreeClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                                        std::size_t num_classes, int max_depth = 12) {
        if (x.rows == 0) throw InvalidInput("decision_tree: empty training set");
        PresortedFeatures ps(x);
        TreeConfig cfg;
        cfg.max_depth = max_depth;
        DecisionTreeClassifier c;
        c.tree_ = build_classification_tree(ps, y, num_classes, {}, cfg);
        c.num_classes_ = num_classes;
        c.dim_ = x.cols;
        c.max_depth_ = max_depth;
        return c;
    }

    Vec predict_proba(const Vec& x) const override {
        check_dim(x);
        return tree_.nodes[tree_.leaf_for(x.data())].dist;
    }

    const Tree& tree() const { return tree_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"max_depth", max_depth_}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        j["num_classes"] = num_classes_;
        j["dim"] = dim_;
        j["tree"] = detail::tree_to_json(tree_);
        return j;
    }

    static std::unique_ptr<DecisionTreeClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<DecisionTreeClassifier>();
        c->max_depth_ = j.at("hyperparams").at("max_depth").get<int>();
        c->num_classes_ = j.at("payload").at("num_classes").get<std::size_t>();
        c->dim_ = j.at("payload").at("dim").get<std::size_t>();
        c->tree_ = detail::tree_from_json(j.at("payload").at("tree"));
        detail::load_envelope(*c, j);
        return c;
    }

private:
    friend class RandomForestClassifier;
    Tree tree_;
    std::size_t num_classes_ = 0;
    std::size_t dim_ = 0;
    int max_depth_ = 12;
};

struct ForestConfig {
    std::size_t n_trees = 10;
    int max_depth = 12;
    int features_per_split = 16; // sqrt(256)
    bool bootstrap = true;
};

// Bootstrap forest; each tree draws its sample multiplicities and per-split
// feature subsets from a stream derived from (seed, tree index). Majority
// vote across trees, exposed as vote fractions.
class RandomForestClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::RANDOM_FOREST; }
    std::size_t num_classes() const override { return num_classes_; }
    std::size_t dim() const override { return dim_; }

    static RandomForestClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                                        std::size_t num_classes, const ForestConfig& cfg,
                                        std::uint64_t seed) {
        if (x.rows == 0) throw InvalidInput("random_forest: empty training set");
        PresortedFeatures ps(x);
        TreeConfig tree_cfg;
        tree_cfg.max_depth = cfg.max_depth;
        tree_cfg.features_per_split = cfg.features_per_split;

        RandomForestClassifier c;
        c.cfg_ = cfg;
        c.num_classes_ = num_classes;
        c.dim_ = x.cols;
        for (std::size_t t = 0; t < cfg.n_trees; ++t) {
            Rng rng(derive_seed(seed, t));
            Vec w;
            if (cfg.bootstrap) {
                w.assign(x.rows, 0.0);
                for (std::size_t i = 0; i < x.rows; ++i)
                    w[rng.next_below(static_cast<std::uint32_t>(x.rows))] += 1.0;
            }
            c.trees_.push_back(build_classification_tree(
                ps, y, num_classes, w, tree_cfg,
                tree_cfg.features_per_split > 0 ? &rng : nullptr));
        }
        return c;
    }

    Vec predict_proba(const Vec& x) const override {
        check_dim(x);
        Vec votes(num_classes_, 0.0);
        for (const auto& t : trees_) {
            const Vec& dist = t.nodes[t.leaf_for(x.data())].dist;
            votes[argmax_tie_low(dist)] += 1.0;
        }
        for (double& v : votes) v /= static_cast<double>(trees_.size());
        return votes;
    }

    const std::vector<Tree>& trees() const { return trees_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"n_trees", cfg_.n_trees},
                {"max_depth", cfg_.max_depth},
                {"features_per_split", cfg_.features_per_split},
                {"bootstrap", cfg_.bootstrap}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        j["num_classes"] = num_classes_;
        j["dim"] = dim_;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& t : trees_) arr.push_back(detail::tree_to_json(t));
        j["trees"] = std::move(arr);
        return j;
    }

    static std::unique_ptr<RandomForestClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<RandomForestClassifier>();
        const auto& h = j.at("hyperparams");
        c->cfg_ = {h.at("n_trees").get<std::size_t>(), h.at("max_depth").get<int>(),
                   h.at("features_per_split").get<int>(), h.at("bootstrap").get<bool>()};
        c->num_classes_ = j.at("payload").at("num_classes").get<std::size_t>();
        c->dim_ = j.at("payload").at("dim").get<std::size_t>();
        for (const auto& jt : j.at("payload").at("trees"))
            c->trees_.push_back(detail::tree_from_json(jt));
        if (c->trees_.empty()) throw FormatError("random_forest payload has no trees");
        detail::load_envelope(*c, j);
        return c;
    }

private:
    std::vector<Tree> trees_;
    ForestConfig cfg_;
    std::size_t num_classes_ = 0;
    std::size_t dim_ = 0;
};

} // namespace modadv
