#pragma once

#include <cmath>
#include <vector>

#include "modadv/classical/classifier.hpp"

namespace modadv {

// Linear discriminant analysis with a shared covariance. The pooled
// within-class covariance is factored through an SVD of the centered data
// matrix rather than inverted directly; singular values are floored at
// 1e-6 of the largest before the spectrum is inverted.
class LdaClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::LDA; }
    std::size_t num_classes() const override { return coef_.rows; }
    std::size_t dim() const override { return coef_.cols; }

    static LdaClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                               std::size_t num_classes, double shrinkage = 1e-6) {
        const std::size_t n = x.rows, d = x.cols;
        if (n <= num_classes)
            throw TrainingError("lda: need more samples than classes");
        std::vector<std::size_t> counts(num_classes, 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[y[i]];
        for (std::size_t c = 0; c < num_classes; ++c)
            if (counts[c] == 0)
                throw InvalidInput("lda: class " + std::to_string(c) + " absent from training");

        Matrix means(num_classes, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) means.at(y[i], j) += x.at(i, j);
        for (std::size_t c = 0; c < num_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) means.at(c, j) /= counts[c];

        // centered data over sqrt(n - k): its singular values square to the
        // pooled covariance spectrum
        Matrix centered(n, d);
        double denom = std::sqrt(static_cast<double>(n - num_classes));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j)
                centered.at(i, j) = (x.at(i, j) - means.at(y[i], j)) / denom;

        SvdResult svd = jacobi_svd(centered);
        double smax = svd.singular_values[0];
        if (!(smax > 0.0))
            throw TrainingError("lda: within-class scatter is identically zero");
        double floor = shrinkage * smax;

        LdaClassifier m;
        m.shrinkage_ = shrinkage;
        m.coef_ = Matrix(num_classes, d);
        m.intercept_.resize(num_classes);
        for (std::size_t c = 0; c < num_classes; ++c) {
            // beta_c = V diag(1/s^2) V^T mu_c
            Vec vt_mu(d, 0.0);
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t i = 0; i < d; ++i)
                    vt_mu[j] += svd.v.at(i, j) * means.at(c, i);
            for (std::size_t j = 0; j < d; ++j) {
                double s = std::max(svd.singular_values[j], floor);
                vt_mu[j] /= s * s;
            }
            for (std::size_t i = 0; i < d; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) acc += svd.v.at(i, j) * vt_mu[j];
                m.coef_.at(c, i) = acc;
            }
            double quad = 0.0;
            for (std::size_t i = 0; i < d; ++i) quad += means.at(c, i) * m.coef_.at(c, i);
            m.intercept_[c] = -0.5 * quad +
                              std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
        }
        return m;
    }

    // affine discriminant scores delta_c(x) = x . coef_c + intercept_c
    Vec decision_scores(const Vec& x) const {
        check_dim(x);
        Vec s(num_classes());
        for (std::size_t c = 0; c < coef_.rows; ++c) {
            double acc = intercept_[c];
            const double* row = coef_.row(c);
            for (std::size_t j = 0; j < coef_.cols; ++j) acc += row[j] * x[j];
            s[c] = acc;
        }
        return s;
    }

    Vec predict_proba(const Vec& x) const override { return softmax(decision_scores(x)); }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"shrinkage", shrinkage_}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < coef_.rows; ++i)
            rows.push_back(std::vector<double>(coef_.row(i), coef_.row(i) + coef_.cols));
        j["coef"] = std::move(rows);
        j["intercept"] = intercept_;
        return j;
    }

    static std::unique_ptr<LdaClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<LdaClassifier>();
        c->shrinkage_ = j.at("hyperparams").at("shrinkage").get<double>();
        const auto& p = j.at("payload");
        const auto& rows = p.at("coef");
        if (rows.empty()) throw FormatError("lda payload has no coefficients");
        c->coef_ = Matrix(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto r = rows[i].get<std::vector<double>>();
            std::copy(r.begin(), r.end(), c->coef_.row(i));
        }
        c->intercept_ = p.at("intercept").get<Vec>();
        if (c->intercept_.size() != c->coef_.rows)
            throw FormatError("lda payload intercept count mismatch");
        detail::load_envelope(*c, j);
        return c;
    }

private:
    Matrix coef_;
    Vec intercept_;
    double shrinkage_ = 1e-6;
};

} // namespace modadv
