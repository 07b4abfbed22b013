#pragma once

#include <cmath>
#include <vector>

#include "modadv/classical/classifier.hpp"

namespace modadv {

// Gaussian naive Bayes: per-class per-feature mean/variance with additive
// smoothing of var_smoothing * (largest pooled feature variance); empirical
// class priors; prediction by log-posterior argmax.
class GaussianNbClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::GAUSSIAN_NB; }
    std::size_t num_classes() const override { return means_.rows; }
    std::size_t dim() const override { return means_.cols; }

    static GaussianNbClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                                      std::size_t num_classes, double var_smoothing = 1e-9) {
        const std::size_t n = x.rows, d = x.cols;
        std::vector<std::size_t> counts(num_classes, 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[y[i]];
        for (std::size_t c = 0; c < num_classes; ++c)
            if (counts[c] < 2)
                throw InvalidInput("gaussian_nb: class " + std::to_string(c) + " has " +
                                   std::to_string(counts[c]) + " training points (need >= 2)");

        GaussianNbClassifier m;
        m.var_smoothing_ = var_smoothing;
        m.means_ = Matrix(num_classes, d);
        m.vars_ = Matrix(num_classes, d);
        m.log_priors_.resize(num_classes);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) m.means_.at(y[i], j) += x.at(i, j);
        for (std::size_t c = 0; c < num_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) m.means_.at(c, j) /= counts[c];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double diff = x.at(i, j) - m.means_.at(y[i], j);
                m.vars_.at(y[i], j) += diff * diff;
            }
        for (std::size_t c = 0; c < num_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) m.vars_.at(c, j) /= counts[c];

        // pooled per-feature variance caps the smoothing scale
        double vmax = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
            mean /= n;
            double var = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double diff = x.at(i, j) - mean;
                var += diff * diff;
            }
            vmax = std::max(vmax, var / n);
        }
        m.epsilon_ = var_smoothing * vmax;
        for (std::size_t c = 0; c < num_classes; ++c)
            m.log_priors_[c] =
                std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
        return m;
    }

    Vec log_joint(const Vec& x) const {
        check_dim(x);
        Vec s(num_classes());
        for (std::size_t c = 0; c < means_.rows; ++c) {
            double acc = log_priors_[c];
            for (std::size_t j = 0; j < means_.cols; ++j) {
                double v = vars_.at(c, j) + epsilon_;
                double diff = x[j] - means_.at(c, j);
                acc += -0.5 * std::log(2.0 * std::numbers::pi * v) - diff * diff / (2.0 * v);
            }
            s[c] = acc;
        }
        return s;
    }

    Vec predict_proba(const Vec& x) const override { return softmax(log_joint(x)); }

    const Vec& log_priors() const { return log_priors_; }
    const Matrix& means() const { return means_; }
    const Matrix& variances() const { return vars_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"var_smoothing", var_smoothing_}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        auto mat = [](const Matrix& m) {
            auto rows = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < m.rows; ++i)
                rows.push_back(std::vector<double>(m.row(i), m.row(i) + m.cols));
            return rows;
        };
        j["means"] = mat(means_);
        j["variances"] = mat(vars_);
        j["log_priors"] = log_priors_;
        j["epsilon"] = epsilon_;
        return j;
    }

    static std::unique_ptr<GaussianNbClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<GaussianNbClassifier>();
        c->var_smoothing_ = j.at("hyperparams").at("var_smoothing").get<double>();
        const auto& p = j.at("payload");
        auto mat = [](const nlohmann::json& rows) {
            Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (std::size_t i = 0; i < m.rows; ++i) {
                auto r = rows[i].get<std::vector<double>>();
                std::copy(r.begin(), r.end(), m.row(i));
            }
            return m;
        };
        c->means_ = mat(p.at("means"));
        c->vars_ = mat(p.at("variances"));
        c->log_priors_ = p.at("log_priors").get<Vec>();
        c->epsilon_ = p.at("epsilon").get<double>();
        if (c->log_priors_.size() != c->means_.rows)
            throw FormatError("gaussian_nb payload prior count mismatch");
        detail::load_envelope(*c, j);
        return c;
    }

private:
    Matrix means_;
    Matrix vars_;
    Vec log_priors_;
    double epsilon_ = 0.0;
    double var_smoothing_ = 1e-9;
};

} // namespace modadv
