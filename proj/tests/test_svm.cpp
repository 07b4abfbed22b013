#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "modadv/classical/svm.hpp"

using namespace modadv;

namespace {

Matrix rbf_kernel(const Matrix& x, double gamma) {
    Matrix k(x.rows, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.rows; ++j) {
            double d2 = 0.0;
            for (std::size_t f = 0; f < x.cols; ++f) {
                double d = x.at(i, f) - x.at(j, f);
                d2 += d * d;
            }
            k.at(i, j) = std::exp(-gamma * d2);
        }
    return k;
}

// independent reference: projected gradient ascent on the dual, with the
// equality constraint restored by bisection on its multiplier
Vec reference_dual_qp(const Matrix& k, const std::vector<int>& y, double c, int iters) {
    const std::size_t n = y.size();
    Vec a(n, 0.0);
    auto project = [&](Vec v) {
        double lo = -100.0, hi = 100.0;
        for (int it = 0; it < 200; ++it) {
            double lam = (lo + hi) / 2.0;
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += y[i] * std::clamp(v[i] - lam * y[i], 0.0, c);
            (s > 0.0 ? lo : hi) = lam;
        }
        double lam = (lo + hi) / 2.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i] - lam * y[i], 0.0, c);
        return v;
    };
    double step = 1.0 / static_cast<double>(n);
    for (int it = 0; it < iters; ++it) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) {
            double g = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                g -= a[j] * y[i] * y[j] * k.at(i, j);
            v[i] = a[i] + step * g;
        }
        a = project(std::move(v));
    }
    return a;
}

struct Toy2 {
    Matrix x;
    std::vector<std::size_t> y01;
    std::vector<int> ypm;
};

Toy2 two_blobs(std::uint64_t seed, std::size_t n_per, double gap) {
    Rng rng(seed);
    Toy2 t;
    t.x = Matrix(2 * n_per, 2);
    for (std::size_t i = 0; i < 2 * n_per; ++i) {
        bool pos = i % 2 == 0;
        t.y01.push_back(pos ? 0 : 1);
        t.ypm.push_back(pos ? 1 : -1);
        t.x.at(i, 0) = (pos ? -gap : gap) / 2.0 + 0.3 * rng.gaussian();
        t.x.at(i, 1) = 0.3 * rng.gaussian();
    }
    return t;
}

} // namespace

TEST_CASE("smo satisfies the kkt conditions on a toy problem") {
    Toy2 t = two_blobs(5, 20, 1.0); // overlapping enough for bound SVs
    const double c = 1.0, gamma = 0.5, tol = 1e-3;
    Matrix k = rbf_kernel(t.x, gamma);
    SmoResult r = smo_solve(k, t.ypm, c, tol, 1000000);

    const std::size_t n = t.ypm.size();
    for (std::size_t i = 0; i < n; ++i) {
        double f = r.bias;
        for (std::size_t j = 0; j < n; ++j) f += r.alpha[j] * t.ypm[j] * k.at(i, j);
        double margin = t.ypm[i] * f;
        if (r.alpha[i] < 1e-9)
            CHECK(margin >= 1.0 - 2.0 * tol);
        else if (r.alpha[i] > c - 1e-9)
            CHECK(margin <= 1.0 + 2.0 * tol);
        else
            CHECK(margin == Catch::Approx(1.0).margin(2.0 * tol));
    }
    // feasibility
    double ya = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(r.alpha[i] >= 0.0);
        CHECK(r.alpha[i] <= c);
        ya += r.alpha[i] * t.ypm[i];
    }
    CHECK(ya == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("smo dual objective within 1% of the reference qp on 20 points") {
    Toy2 t = two_blobs(17, 10, 0.8);
    const double c = 1.0, gamma = 1.0;
    Matrix k = rbf_kernel(t.x, gamma);
    SmoResult r = smo_solve(k, t.ypm, c, 1e-4, 1000000);
    Vec ref = reference_dual_qp(k, t.ypm, c, 60000);
    double d_smo = svm_dual_objective(k, t.ypm, r.alpha);
    double d_ref = svm_dual_objective(k, t.ypm, ref);
    CHECK(d_smo >= d_ref - 0.01 * std::abs(d_ref)); // smo should not be worse
    CHECK(std::abs(d_smo - d_ref) <= 0.01 * std::max(std::abs(d_ref), 1e-9));
}

TEST_CASE("separable blobs reach 100% training accuracy") {
    Toy2 t = two_blobs(29, 25, 4.0);
    auto svm = SvmRbfClassifier::train(t.x, t.y01, 2, SvmConfig{}, 1);
    for (std::size_t i = 0; i < t.x.rows; ++i)
        CHECK(svm.predict(Vec(t.x.row(i), t.x.row(i) + 2)) == t.y01[i]);
}

TEST_CASE("gamma follows the scale rule") {
    Matrix x(4, 2);
    // feature variances: 0.25 and 1.0 -> mean 0.625
    double v0[4] = {0.0, 0.5, 0.0, 0.5};
    double v1[4] = {0.0, 2.0, 0.0, 2.0};
    for (int i = 0; i < 4; ++i) {
        x.at(i, 0) = v0[i];
        x.at(i, 1) = v1[i];
    }
    std::vector<std::size_t> y{0, 0, 1, 1};
    auto svm = SvmRbfClassifier::train(x, y, 2, SvmConfig{}, 1);
    CHECK(svm.gamma() == Catch::Approx(1.0 / (2.0 * 0.625)).epsilon(1e-12));
}

TEST_CASE("per-class cap bounds the support set") {
    Toy2 t = two_blobs(31, 50, 0.5);
    SvmConfig cfg;
    cfg.cap_per_class = 8;
    auto svm = SvmRbfClassifier::train(t.x, t.y01, 2, cfg, 7);
    CHECK(svm.support_vectors().rows <= 16);
    // capping is deterministic
    auto again = SvmRbfClassifier::train(t.x, t.y01, 2, cfg, 7);
    CHECK(svm.to_json() == again.to_json());
}

TEST_CASE("iteration budget exhaustion reports diagnostics") {
    Toy2 t = two_blobs(43, 10, 0.2);
    Matrix k = rbf_kernel(t.x, 0.5);
    try {
        smo_solve(k, t.ypm, 1.0, 1e-6, 3);
        FAIL("expected TrainingError");
    } catch (const TrainingError& e) {
        std::string msg = e.what();
        CHECK(msg.find("gap") != std::string::npos);
        CHECK(msg.find("iterations") != std::string::npos);
    }
}
