#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "modadv/errors.hpp"

namespace modadv {

using Vec = std::vector<double>;

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline void require_finite(const Vec& v, const char* what) {
    if (!all_finite(v)) throw InvalidInput(std::string(what) + " contains a non-finite value");
}

// Dense row-major matrix of doubles. All model and attack math runs in
// 64-bit; 32-bit only appears in dataset files.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    double* row(std::size_t i) { return data.data() + i * cols; }

    bool operator==(const Matrix& o) const = default;
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw InvalidInput("matmul shape mismatch");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ar = a.row(i);
        double* cr = c.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            double aik = ar[k];
            if (aik == 0.0) continue;
            const double* br = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) cr[j] += aik * br[j];
        }
    }
    return c;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double l2_norm(const Vec& v) {
    require_finite(v, "l2_norm input");
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Elementwise sign with sign(0) = 0.
inline Vec sign(const Vec& v) {
    require_finite(v, "sign input");
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] > 0.0) - (v[i] < 0.0);
    return out;
}

// Index of the largest entry; ties go to the lowest index. This tie rule is
// shared by every classifier so predictions stay deterministic.
inline std::size_t argmax_tie_low(const Vec& v) {
    if (v.empty()) throw InvalidInput("argmax of empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

// Max-subtraction stabilized softmax.
inline Vec softmax(const Vec& logits) {
    require_finite(logits, "softmax input");
    if (logits.empty()) throw InvalidInput("softmax of empty vector");
    double m = *std::max_element(logits.begin(), logits.end());
    Vec out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

// -log p_label with a 1e-12 probability floor.
inline double cross_entropy(const Vec& probs, std::size_t label) {
    if (label >= probs.size()) throw InvalidInput("cross_entropy label out of range");
    double p = std::max(probs[label], 1e-12);
    return -std::log(p);
}

// Adam over a flat variable vector. beta1/beta2/eps are the standard
// constants; bias correction applied from t=1.
class Adam {
public:
    explicit Adam(std::size_t dim, double lr = 0.01, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps), m_(dim, 0.0), v_(dim, 0.0) {}

    void step(Vec& vars, const Vec& grad) {
        if (vars.size() != m_.size() || grad.size() != m_.size())
            throw InvalidInput("adam dimension mismatch");
        ++t_;
        double c1 = 1.0 - std::pow(b1_, t_);
        double c2 = 1.0 - std::pow(b2_, t_);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
            v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
            double mhat = m_[i] / c1;
            double vhat = v_[i] / c2;
            vars[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }

    std::size_t t() const { return t_; }

private:
    double lr_, b1_, b2_, eps_;
    std::size_t t_ = 0;
    Vec m_, v_;
};

// Central finite differences, the oracle every analytic gradient in this
// project is checked against.
inline Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                                double h) {
    if (h <= 0.0) throw InvalidInput("finite_diff_gradient needs h > 0");
    Vec g(x.size());
    Vec xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double orig = xp[i];
        xp[i] = orig + h;
        double fp = f(xp);
        xp[i] = orig - h;
        double fm = f(xp);
        xp[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Thin SVD of an n x d matrix (n >= 1, d modest): one-sided Jacobi on the
// columns. Returns singular values (descending) and the right singular
// vectors as columns of v (d x d). Left vectors are not formed.
struct SvdResult {
    Vec singular_values; // length d, descending
    Matrix v;            // d x d, column j pairs with singular_values[j]
};

inline SvdResult jacobi_svd(const Matrix& a, int max_sweeps = 40, double tol = 1e-12) {
    const std::size_t n = a.rows, d = a.cols;
    // column-major working copy so rotations touch contiguous memory
    std::vector<Vec> col(d, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) col[j][i] = a.at(i, j);

    Matrix v(d, d);
    for (std::size_t j = 0; j < d; ++j) v.at(j, j) = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double alpha = dot(col[p], col[p]);
                double beta = dot(col[q], col[q]);
                double gamma = dot(col[p], col[q]);
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                for (std::size_t i = 0; i < n; ++i) {
                    double xp = col[p][i], xq = col[q][i];
                    col[p][i] = cs * xp - sn * xq;
                    col[q][i] = sn * xp + cs * xq;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    double vp = v.at(i, p), vq = v.at(i, q);
                    v.at(i, p) = cs * vp - sn * vq;
                    v.at(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    SvdResult r;
    r.singular_values.resize(d);
    std::vector<std::size_t> order(d);
    for (std::size_t j = 0; j < d; ++j) {
        r.singular_values[j] = std::sqrt(dot(col[j], col[j]));
        order[j] = j;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return r.singular_values[x] > r.singular_values[y];
    });
    SvdResult out;
    out.singular_values.resize(d);
    out.v = Matrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        out.singular_values[j] = r.singular_values[order[j]];
        for (std::size_t i = 0; i < d; ++i) out.v.at(i, j) = v.at(i, order[j]);
    }
    return out;
}

} // namespace modadv
