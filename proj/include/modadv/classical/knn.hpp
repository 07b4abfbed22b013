#pragma once

#include <algorithm>
#include <vector>

#include "modadv/classical/classifier.hpp"

namespace modadv {

// k nearest neighbors under the Euclidean metric. Neighbor order breaks
// distance ties toward the lower label code (then the lower training index);
// the vote itself ties toward the lower code via the shared argmax rule.
class KnnClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::KNN; }
    std::size_t num_classes() const override { return num_classes_; }
    std::size_t dim() const override { return train_x_.cols; }

    static KnnClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                               std::size_t num_classes, std::size_t k = 15) {
        if (k < 1 || k > x.rows)
            throw InvalidInput("knn: k=" + std::to_string(k) + " with " +
                               std::to_string(x.rows) + " training points");
        KnnClassifier c;
        c.train_x_ = x;
        c.train_y_ = y;
        c.num_classes_ = num_classes;
        c.k_ = k;
        return c;
    }

    Vec predict_proba(const Vec& x) const override {
        check_dim(x);
        const std::size_t n = train_x_.rows;
        std::vector<std::pair<double, std::uint64_t>> cand(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = train_x_.row(i);
            double d2 = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                double diff = x[j] - row[j];
                d2 += diff * diff;
            }
            cand[i] = {d2, (static_cast<std::uint64_t>(train_y_[i]) << 40) | i};
        }
        std::partial_sort(cand.begin(), cand.begin() + k_, cand.end());
        Vec votes(num_classes_, 0.0);
        for (std::size_t i = 0; i < k_; ++i)
            votes[static_cast<std::size_t>(cand[i].second >> 40)] += 1.0;
        for (double& v : votes) v /= static_cast<double>(k_);
        return votes;
    }

    std::size_t k() const { return k_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"k", k_}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        j["num_classes"] = num_classes_;
        j["labels"] = train_y_;
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < train_x_.rows; ++i)
            rows.push_back(std::vector<double>(train_x_.row(i), train_x_.row(i) + train_x_.cols));
        j["points"] = std::move(rows);
        return j;
    }

    static std::unique_ptr<KnnClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<KnnClassifier>();
        c->k_ = j.at("hyperparams").at("k").get<std::size_t>();
        const auto& p = j.at("payload");
        c->num_classes_ = p.at("num_classes").get<std::size_t>();
        c->train_y_ = p.at("labels").get<std::vector<std::size_t>>();
        const auto& rows = p.at("points");
        if (rows.empty()) throw FormatError("knn payload has no points");
        c->train_x_ = Matrix(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto r = rows[i].get<std::vector<double>>();
            if (r.size() != c->train_x_.cols) throw FormatError("knn payload row size mismatch");
            std::copy(r.begin(), r.end(), c->train_x_.row(i));
        }
        if (c->train_y_.size() != c->train_x_.rows)
            throw FormatError("knn payload label count mismatch");
        detail::load_envelope(*c, j);
        return c;
    }

private:
    Matrix train_x_;
    std::vector<std::size_t> train_y_;
    std::size_t num_classes_ = 0;
    std::size_t k_ = 15;
};

} // namespace modadv
