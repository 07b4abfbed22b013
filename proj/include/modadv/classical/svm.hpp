#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "modadv/classical/classifier.hpp"
#include "modadv/rng.hpp"

namespace modadv {

struct SvmConfig {
    double c = 1.0;
    double tolerance = 1e-3;
    std::size_t cap_per_class = 2000;
    std::size_t max_iterations = 0; // 0 = max(100000, 300 * n) per binary problem
};

struct SmoResult {
    Vec alpha;
    double bias = 0.0;
    std::size_t iterations = 0;
    double gap = 0.0;
};

// SMO with maximal-violating-pair working set selection on the dual
//   min 0.5 a^T Q a - e^T a,  0 <= a <= C,  y^T a = 0,  Q_ij = y_i y_j K_ij.
// Stops when the KKT gap m(a) - M(a) drops below tol.
inline SmoResult smo_solve(const Matrix& kernel, const std::vector<int>& y, double c,
                           double tol, std::size_t max_iter) {
    const std::size_t n = y.size();
    SmoResult r;
    r.alpha.assign(n, 0.0);
    Vec g(n, -1.0);
    const double inf = std::numeric_limits<double>::infinity();

    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        int i = -1, j = -1;
        double up = -inf, low = inf;
        for (std::size_t k = 0; k < n; ++k) {
            bool in_up = (y[k] > 0 && r.alpha[k] < c) || (y[k] < 0 && r.alpha[k] > 0.0);
            bool in_low = (y[k] > 0 && r.alpha[k] > 0.0) || (y[k] < 0 && r.alpha[k] < c);
            double v = -y[k] * g[k];
            if (in_up && v > up) {
                up = v;
                i = static_cast<int>(k);
            }
            if (in_low && v < low) {
                low = v;
                j = static_cast<int>(k);
            }
        }
        r.gap = up - low;
        if (i < 0 || j < 0 || r.gap < tol) {
            r.bias = (up + low) / 2.0;
            return r;
        }

        double quad = std::max(kernel.at(i, i) + kernel.at(j, j) - 2.0 * kernel.at(i, j),
                               1e-12);
        double step = (-y[i] * g[i] + y[j] * g[j]) / quad;
        double old_ai = r.alpha[i], old_aj = r.alpha[j];
        double sum = y[i] * old_ai + y[j] * old_aj;
        r.alpha[i] = std::clamp(old_ai + y[i] * step, 0.0, c);
        r.alpha[j] = std::clamp(y[j] * (sum - y[i] * r.alpha[i]), 0.0, c);
        r.alpha[i] = std::clamp(y[i] * (sum - y[j] * r.alpha[j]), 0.0, c);

        double da = r.alpha[i] - old_ai, dj = r.alpha[j] - old_aj;
        if (da == 0.0 && dj == 0.0) { // numerically stuck pair
            r.bias = (up + low) / 2.0;
            return r;
        }
        for (std::size_t k = 0; k < n; ++k)
            g[k] += y[k] * (kernel.at(i, k) * da * y[i] + kernel.at(j, k) * dj * y[j]);
    }
    throw TrainingError("smo did not converge: gap " + format_double(r.gap) + " after " +
                        std::to_string(r.iterations) + " iterations (tol " +
                        format_double(tol) + ")");
}

inline double svm_dual_objective(const Matrix& kernel, const std::vector<int>& y,
                                 const Vec& alpha) {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        lin += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel.at(i, j);
    }
    return lin - 0.5 * quad;
}

// One-vs-one RBF SVM. gamma follows the "scale" rule 1/(d * mean feature
// variance) computed on the (capped) training subsample; multiclass
// prediction is by pair votes, exposed as vote shares.
class SvmRbfClassifier : public Classifier {
public:
    ClassifierKind kind() const override { return ClassifierKind::SVM_RBF; }
    std::size_t num_classes() const override { return num_classes_; }
    std::size_t dim() const override { return sv_x_.cols; }

    struct Pair {
        std::size_t class_a = 0, class_b = 0;
        double bias = 0.0;
        std::vector<std::pair<std::uint32_t, double>> sv; // (row in sv_x_, alpha * y)
    };

    static SvmRbfClassifier train(const Matrix& x, const std::vector<std::size_t>& y,
                                  std::size_t num_classes, const SvmConfig& cfg,
                                  std::uint64_t seed) {
        if (num_classes < 2) throw InvalidInput("svm: need at least 2 classes");
        // deterministic per-class cap
        std::vector<std::vector<std::uint32_t>> by_class(num_classes);
        for (std::size_t i = 0; i < x.rows; ++i)
            by_class[y[i]].push_back(static_cast<std::uint32_t>(i));
        std::vector<std::uint32_t> keep;
        for (std::size_t cls = 0; cls < num_classes; ++cls) {
            auto& rows = by_class[cls];
            if (rows.size() > cfg.cap_per_class) {
                Rng rng(derive_seed(seed, cls));
                rng.shuffle(rows);
                rows.resize(cfg.cap_per_class);
                std::sort(rows.begin(), rows.end());
            }
            keep.insert(keep.end(), rows.begin(), rows.end());
        }
        std::sort(keep.begin(), keep.end());

        Matrix xs(keep.size(), x.cols);
        std::vector<std::size_t> ys(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            std::copy(x.row(keep[i]), x.row(keep[i]) + x.cols, xs.row(i));
            ys[i] = y[keep[i]];
        }

        // gamma = 1 / (d * mean feature variance)
        double mean_var = 0.0;
        for (std::size_t j = 0; j < xs.cols; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < xs.rows; ++i) mean += xs.at(i, j);
            mean /= static_cast<double>(xs.rows);
            double var = 0.0;
            for (std::size_t i = 0; i < xs.rows; ++i) {
                double d = xs.at(i, j) - mean;
                var += d * d;
            }
            mean_var += var / static_cast<double>(xs.rows);
        }
        mean_var /= static_cast<double>(xs.cols);
        if (!(mean_var > 0.0)) throw TrainingError("svm: training features are constant");

        SvmRbfClassifier m;
        m.cfg_ = cfg;
        m.num_classes_ = num_classes;
        m.gamma_ = 1.0 / (static_cast<double>(xs.cols) * mean_var);

        std::vector<std::uint32_t> local_of_class(num_classes, 0);
        std::vector<std::vector<std::uint32_t>> rows_of(num_classes);
        for (std::size_t i = 0; i < ys.size(); ++i)
            rows_of[ys[i]].push_back(static_cast<std::uint32_t>(i));

        std::map<std::uint32_t, std::uint32_t> sv_index; // row in xs -> row in sv_x_
        std::vector<std::uint32_t> sv_rows;
        for (std::size_t a = 0; a < num_classes; ++a) {
            for (std::size_t b = a + 1; b < num_classes; ++b) {
                if (rows_of[a].empty() || rows_of[b].empty()) continue;
                std::vector<std::uint32_t> rows = rows_of[a];
                rows.insert(rows.end(), rows_of[b].begin(), rows_of[b].end());
                const std::size_t n = rows.size();
                std::vector<int> yb(n);
                for (std::size_t i = 0; i < n; ++i) yb[i] = ys[rows[i]] == a ? 1 : -1;

                Matrix kernel(n, n);
                Vec sq(n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const double* ri = xs.row(rows[i]);
                    for (std::size_t f = 0; f < xs.cols; ++f) sq[i] += ri[f] * ri[f];
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double* ri = xs.row(rows[i]);
                    kernel.at(i, i) = 1.0;
                    for (std::size_t j = i + 1; j < n; ++j) {
                        const double* rj = xs.row(rows[j]);
                        double dot = 0.0;
                        for (std::size_t f = 0; f < xs.cols; ++f) dot += ri[f] * rj[f];
                        double kij = std::exp(-m.gamma_ * (sq[i] + sq[j] - 2.0 * dot));
                        kernel.at(i, j) = kij;
                        kernel.at(j, i) = kij;
                    }
                }

                std::size_t budget = cfg.max_iterations
                                         ? cfg.max_iterations
                                         : std::max<std::size_t>(100000, 300 * n);
                SmoResult sol;
                try {
                    sol = smo_solve(kernel, yb, cfg.c, cfg.tolerance, budget);
                } catch (const TrainingError& e) {
                    throw TrainingError("pair (" + std::to_string(a) + "," +
                                        std::to_string(b) + "): " + e.what());
                }

                Pair pair;
                pair.class_a = a;
                pair.class_b = b;
                pair.bias = sol.bias;
                for (std::size_t i = 0; i < n; ++i) {
                    if (sol.alpha[i] <= 1e-12) continue;
                    std::uint32_t row = rows[i];
                    auto [it, inserted] =
                        sv_index.try_emplace(row, static_cast<std::uint32_t>(sv_rows.size()));
                    if (inserted) sv_rows.push_back(row);
                    pair.sv.emplace_back(it->second, sol.alpha[i] * yb[i]);
                }
                m.pairs_.push_back(std::move(pair));
            }
        }

        m.sv_x_ = Matrix(sv_rows.size(), xs.cols);
        for (std::size_t i = 0; i < sv_rows.size(); ++i)
            std::copy(xs.row(sv_rows[i]), xs.row(sv_rows[i]) + xs.cols, m.sv_x_.row(i));
        return m;
    }

    Vec predict_proba(const Vec& x) const override {
        check_dim(x);
        Vec kx(sv_x_.rows);
        for (std::size_t i = 0; i < sv_x_.rows; ++i) {
            const double* row = sv_x_.row(i);
            double d2 = 0.0;
            for (std::size_t f = 0; f < sv_x_.cols; ++f) {
                double diff = x[f] - row[f];
                d2 += diff * diff;
            }
            kx[i] = std::exp(-gamma_ * d2);
        }
        Vec votes(num_classes_, 0.0);
        for (const auto& p : pairs_) {
            double f = p.bias;
            for (const auto& [row, coef] : p.sv) f += coef * kx[row];
            votes[f > 0.0 ? p.class_a : p.class_b] += 1.0;
        }
        double total = static_cast<double>(pairs_.size());
        for (double& v : votes) v /= total;
        return votes;
    }

    double gamma() const { return gamma_; }
    const std::vector<Pair>& pairs() const { return pairs_; }
    const Matrix& support_vectors() const { return sv_x_; }

    nlohmann::ordered_json hyperparams_json() const override {
        return {{"c", cfg_.c},
                {"gamma_mode", "scale"},
                {"gamma", gamma_},
                {"tolerance", cfg_.tolerance},
                {"cap_per_class", cfg_.cap_per_class}};
    }

    nlohmann::ordered_json payload_json() const override {
        nlohmann::ordered_json j;
        j["num_classes"] = num_classes_;
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < sv_x_.rows; ++i)
            rows.push_back(std::vector<double>(sv_x_.row(i), sv_x_.row(i) + sv_x_.cols));
        j["support_vectors"] = std::move(rows);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : pairs_) {
            nlohmann::ordered_json jp;
            jp["a"] = p.class_a;
            jp["b"] = p.class_b;
            jp["bias"] = p.bias;
            std::vector<std::uint32_t> idx;
            Vec coef;
            for (const auto& [row, c] : p.sv) {
                idx.push_back(row);
                coef.push_back(c);
            }
            jp["sv_index"] = idx;
            jp["sv_coef"] = coef;
            arr.push_back(std::move(jp));
        }
        j["pairs"] = std::move(arr);
        return j;
    }

    static std::unique_ptr<SvmRbfClassifier> from_json(const nlohmann::json& j) {
        auto c = std::make_unique<SvmRbfClassifier>();
        const auto& h = j.at("hyperparams");
        c->cfg_.c = h.at("c").get<double>();
        c->cfg_.tolerance = h.at("tolerance").get<double>();
        c->cfg_.cap_per_class = h.at("cap_per_class").get<std::size_t>();
        c->gamma_ = h.at("gamma").get<double>();
        const auto& p = j.at("payload");
        c->num_classes_ = p.at("num_classes").get<std::size_t>();
        const auto& rows = p.at("support_vectors");
        if (rows.empty()) throw FormatError("svm payload has no support vectors");
        c->sv_x_ = Matrix(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto r = rows[i].get<std::vector<double>>();
            std::copy(r.begin(), r.end(), c->sv_x_.row(i));
        }
        for (const auto& jp : p.at("pairs")) {
            Pair pair;
            pair.class_a = jp.at("a").get<std::size_t>();
            pair.class_b = jp.at("b").get<std::size_t>();
            pair.bias = jp.at("bias").get<double>();
            auto idx = jp.at("sv_index").get<std::vector<std::uint32_t>>();
            auto coef = jp.at("sv_coef").get<Vec>();
            if (idx.size() != coef.size()) throw FormatError("svm pair sv arrays mismatch");
            for (std::size_t i = 0; i < idx.size(); ++i)
                pair.sv.emplace_back(idx[i], coef[i]);
            c->pairs_.push_back(std::move(pair));
        }
        if (c->pairs_.empty()) throw FormatError("svm payload has no pairs");
        detail::load_envelope(*c, j);
        return c;
    }

private:
    Matrix sv_x_;
    std::vector<Pair> pairs_;
    SvmConfig cfg_;
    double gamma_ = 1.0;
    std::size_t num_classes_ = 0;
};

} // namespace modadv
