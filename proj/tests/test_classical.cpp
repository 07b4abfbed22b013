#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "modadv/classical.hpp"
#include "modadv/pipeline.hpp"

using namespace modadv;
namespace fs = std::filesystem;

namespace {

Matrix make_x(const std::vector<Vec>& rows) {
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), m.row(i));
    return m;
}

// 2-d three-class blobs shared by the interface and serialization checks
struct ToySet {
    Matrix x;
    std::vector<std::size_t> y;
};

ToySet toy3(std::uint64_t seed, std::size_t per_class = 20) {
    Rng rng(seed);
    const double cx[3] = {0.2, 0.8, 0.5};
    const double cy[3] = {0.2, 0.3, 0.85};
    ToySet t;
    t.x = Matrix(3 * per_class, 2);
    t.y.resize(3 * per_class);
    for (std::size_t i = 0; i < t.x.rows; ++i) {
        std::size_t c = i % 3;
        t.y[i] = c;
        t.x.at(i, 0) = cx[c] + 0.07 * rng.uniform(-1.0, 1.0);
        t.x.at(i, 1) = cy[c] + 0.07 * rng.uniform(-1.0, 1.0);
    }
    return t;
}

} // namespace

TEST_CASE("knn basics") {
    // xor layout, k=1 memorizes
    Matrix x = make_x({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    std::vector<std::size_t> y{0, 1, 1, 0};
    auto knn = KnnClassifier::train(x, y, 2, 1);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(knn.predict(Vec(x.row(i), x.row(i) + 2)) == y[i]);

    auto k3 = KnnClassifier::train(x, y, 2, 3);
    Vec p = k3.predict_proba({0.1, 0.1});
    CHECK(p[0] + p[1] == Catch::Approx(1.0).margin(1e-12));

    CHECK(knn.hyperparams_json().at("k").get<std::size_t>() == 1);
    CHECK_THROWS_AS(KnnClassifier::train(x, y, 2, 5), InvalidInput);
    CHECK_THROWS_AS(knn.predict({0.0}), InvalidInput);
}

TEST_CASE("knn default k is recorded") {
    ToySet t = toy3(8);
    auto knn = KnnClassifier::train(t.x, t.y, 3);
    CHECK(knn.k() == 15);
    CHECK(knn.hyperparams_json().at("k").get<std::size_t>() == 15);
}

TEST_CASE("knn agrees with a brute-force reference") {
    Rng rng(303);
    Matrix x(100, 2);
    std::vector<std::size_t> y(100);
    for (std::size_t i = 0; i < 100; ++i) {
        x.at(i, 0) = rng.uniform(0.0, 1.0);
        x.at(i, 1) = rng.uniform(0.0, 1.0);
        y[i] = rng.next_below(3);
    }
    auto knn = KnnClassifier::train(x, y, 3, 7);

    for (int trial = 0; trial < 100; ++trial) {
        Vec q{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        // reference: full sort by (distance, label code, index), then vote
        std::vector<std::tuple<double, std::size_t, std::size_t>> all;
        for (std::size_t i = 0; i < 100; ++i) {
            double d2 = 0.0;
            for (int j = 0; j < 2; ++j) d2 += (q[j] - x.at(i, j)) * (q[j] - x.at(i, j));
            all.emplace_back(d2, y[i], i);
        }
        std::sort(all.begin(), all.end());
        std::vector<int> votes(3, 0);
        for (int i = 0; i < 7; ++i) ++votes[std::get<1>(all[i])];
        std::size_t best = 0;
        for (std::size_t c = 1; c < 3; ++c)
            if (votes[c] > votes[best]) best = c;
        CHECK(knn.predict(q) == best);
    }
}

TEST_CASE("gaussian nb") {
    SECTION("1-d equal-variance midpoint threshold") {
        Matrix x = make_x({{0.8}, {1.2}, {2.8}, {3.2}});
        std::vector<std::size_t> y{0, 0, 1, 1};
        auto nb = GaussianNbClassifier::train(x, y, 2);
        CHECK(nb.predict({1.99}) == 0);
        CHECK(nb.predict({2.01}) == 1);
        Vec s = nb.log_joint({2.0});
        CHECK(s[0] == Catch::Approx(s[1]).margin(1e-9));
    }
    SECTION("posterior matches the worked 2-feature example") {
        Matrix x = make_x({{1, 2}, {2, 1}, {1.5, 1.5}, {2.5, 3}, {3.5, 2}, {3, 2.6}});
        std::vector<std::size_t> y{0, 0, 0, 1, 1, 1};
        auto nb = GaussianNbClassifier::train(x, y, 2);
        CHECK(nb.means().at(1, 0) == Catch::Approx(3.0).epsilon(1e-14));
        CHECK(nb.means().at(1, 1) == Catch::Approx(2.5333333333333333).epsilon(1e-14));
        CHECK(nb.variances().at(1, 1) == Catch::Approx(0.16888888888888889).epsilon(1e-13));
        Vec p = nb.predict_proba({2.2, 2.0});
        CHECK(p[0] == Catch::Approx(0.63384039818587835).epsilon(1e-12));
    }
    SECTION("priors are empirical frequencies") {
        Matrix x = make_x({{0}, {0.1}, {0.2}, {1.0}, {1.1}, {1.2}, {1.3}, {1.4}});
        std::vector<std::size_t> y{0, 0, 0, 1, 1, 1, 1, 1};
        auto nb = GaussianNbClassifier::train(x, y, 2);
        CHECK(nb.log_priors()[0] == Catch::Approx(std::log(3.0 / 8.0)).epsilon(1e-14));
        CHECK(nb.log_priors()[1] == Catch::Approx(std::log(5.0 / 8.0)).epsilon(1e-14));
    }
    SECTION("a class with fewer than two points is rejected") {
        Matrix x = make_x({{0}, {1}, {2}});
        CHECK_THROWS_AS(GaussianNbClassifier::train(x, {0, 0, 1}, 2), InvalidInput);
    }
}

TEST_CASE("lda") {
    SECTION("boundary sits at the midpoint, perpendicular to the mean difference") {
        // symmetric within-class offsets make the estimates exact
        Matrix x = make_x({{1, 1}, {2, 2}, {1, 2}, {2, 1}, {4, 3}, {5, 4}, {4, 4}, {5, 3}});
        std::vector<std::size_t> y{0, 0, 0, 0, 1, 1, 1, 1};
        auto lda = LdaClassifier::train(x, y, 2);
        Vec mid{3.0, 2.5};
        Vec s = lda.decision_scores(mid);
        CHECK(s[0] == Catch::Approx(s[1]).margin(1e-9));
        CHECK(lda.predict({1.4, 1.6}) == 0);
        CHECK(lda.predict({4.6, 3.4}) == 1);
    }
    SECTION("matches the closed-form discriminant") {
        Rng rng(606);
        const std::size_t n = 40;
        Matrix x(n, 2);
        std::vector<std::size_t> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = i % 2;
            x.at(i, 0) = (y[i] ? 2.0 : 0.5) + rng.gaussian() * 0.6;
            x.at(i, 1) = (y[i] ? -1.0 : 0.5) + rng.gaussian() * 0.4;
        }
        auto lda = LdaClassifier::train(x, y, 2);

        // closed form: explicit pooled covariance and its 2x2 inverse
        double mu[2][2] = {{0, 0}, {0, 0}};
        std::size_t cnt[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            mu[y[i]][0] += x.at(i, 0);
            mu[y[i]][1] += x.at(i, 1);
            ++cnt[y[i]];
        }
        for (int c = 0; c < 2; ++c) {
            mu[c][0] /= cnt[c];
            mu[c][1] /= cnt[c];
        }
        double s00 = 0, s01 = 0, s11 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double dx = x.at(i, 0) - mu[y[i]][0], dy = x.at(i, 1) - mu[y[i]][1];
            s00 += dx * dx;
            s01 += dx * dy;
            s11 += dy * dy;
        }
        double f = 1.0 / (n - 2.0);
        s00 *= f;
        s01 *= f;
        s11 *= f;
        double det = s00 * s11 - s01 * s01;
        double i00 = s11 / det, i01 = -s01 / det, i11 = s00 / det;

        Rng qr(707);
        for (int trial = 0; trial < 50; ++trial) {
            Vec q{qr.uniform(-1.0, 3.0), qr.uniform(-2.0, 2.0)};
            Vec got = lda.decision_scores(q);
            for (int c = 0; c < 2; ++c) {
                double b0 = i00 * mu[c][0] + i01 * mu[c][1];
                double b1 = i01 * mu[c][0] + i11 * mu[c][1];
                double want = q[0] * b0 + q[1] * b1 -
                              0.5 * (mu[c][0] * b0 + mu[c][1] * b1) +
                              std::log(cnt[c] / static_cast<double>(n));
                CHECK(got[c] == Catch::Approx(want).margin(1e-6));
            }
        }
    }
    SECTION("discriminant is affine") {
        ToySet t = toy3(11);
        auto lda = LdaClassifier::train(t.x, t.y, 3);
        Rng rng(12);
        for (int trial = 0; trial < 20; ++trial) {
            Vec a{rng.next_double(), rng.next_double()};
            Vec b{rng.next_double(), rng.next_double()};
            double alpha = rng.next_double();
            Vec mix{alpha * a[0] + (1 - alpha) * b[0], alpha * a[1] + (1 - alpha) * b[1]};
            Vec sa = lda.decision_scores(a), sb = lda.decision_scores(b),
                sm = lda.decision_scores(mix);
            for (int c = 0; c < 3; ++c)
                CHECK(sm[c] == Catch::Approx(alpha * sa[c] + (1 - alpha) * sb[c]).margin(1e-9));
        }
    }
    SECTION("identical points per class are rejected") {
        Matrix x = make_x({{1, 1}, {1, 1}, {2, 2}, {2, 2}});
        CHECK_THROWS_AS(LdaClassifier::train(x, {0, 0, 1, 1}, 2), TrainingError);
    }
}

TEST_CASE("decision tree") {
    SECTION("root split matches exhaustive enumeration") {
        Matrix x = make_x({{0.1}, {0.9}, {1.7}, {2.4}, {3.1}, {4.0}});
        std::vector<std::size_t> y{0, 0, 1, 1, 0, 1};
        auto dt = DecisionTreeClassifier::train(x, y, 2, 12);

        // reference: try every midpoint, weighted gini, first best wins
        double best_gain = -1.0, best_thr = 0.0;
        auto gini = [](double c0, double c1) {
            double t = c0 + c1;
            if (t == 0) return 0.0;
            return 1.0 - (c0 / t) * (c0 / t) - (c1 / t) * (c1 / t);
        };
        for (int cut = 0; cut + 1 < 6; ++cut) {
            double thr = (x.at(cut, 0) + x.at(cut + 1, 0)) / 2.0;
            double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
            for (int i = 0; i < 6; ++i) {
                bool left = x.at(i, 0) <= thr;
                if (y[i] == 0) (left ? l0 : r0) += 1;
                else (left ? l1 : r1) += 1;
            }
            double wl = l0 + l1, wr = r0 + r1;
            double gain = gini(3, 3) - wl / 6.0 * gini(l0, l1) - wr / 6.0 * gini(r0, r1);
            if (gain > best_gain + 1e-15) {
                best_gain = gain;
                best_thr = thr;
            }
        }
        REQUIRE(dt.tree().nodes[0].feature == 0);
        CHECK(dt.tree().nodes[0].threshold == Catch::Approx(best_thr).margin(1e-12));
    }
    SECTION("pure data yields a single leaf") {
        Matrix x = make_x({{0.0}, {1.0}, {2.0}});
        auto dt = DecisionTreeClassifier::train(x, {1, 1, 1}, 2, 12);
        CHECK(dt.tree().nodes.size() == 1);
        CHECK(dt.tree().nodes[0].feature == -1);
    }
    SECTION("depth cap is honored") {
        Rng rng(41);
        Matrix x(300, 3);
        std::vector<std::size_t> y(300);
        for (std::size_t i = 0; i < 300; ++i) {
            for (int j = 0; j < 3; ++j) x.at(i, j) = rng.next_double();
            y[i] = rng.next_below(2); // pure noise forces deep growth
        }
        auto deep = DecisionTreeClassifier::train(x, y, 2, 12);
        CHECK(deep.tree().max_depth() <= 12);
        auto shallow = DecisionTreeClassifier::train(x, y, 2, 3);
        CHECK(shallow.tree().max_depth() <= 3);
    }
}

TEST_CASE("random forest") {
    ToySet t = toy3(21);
    SECTION("ten trees by default") {
        auto rf = RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{}, 5);
        CHECK(rf.trees().size() == 10);
        CHECK(rf.payload_json().at("trees").size() == 10);
    }
    SECTION("degenerate config equals the lone decision tree") {
        ForestConfig cfg;
        cfg.n_trees = 1;
        cfg.bootstrap = false;
        cfg.features_per_split = 0;
        cfg.max_depth = 12;
        auto rf = RandomForestClassifier::train(t.x, t.y, 3, cfg, 5);
        auto dt = DecisionTreeClassifier::train(t.x, t.y, 3, 12);
        CHECK(detail::tree_to_json(rf.trees()[0]) == detail::tree_to_json(dt.tree()));
    }
    SECTION("same seed, same forest") {
        auto a = RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{}, 5);
        auto b = RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{}, 5);
        CHECK(a.to_json() == b.to_json());
        auto c = RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{}, 6);
        CHECK(a.to_json() != c.to_json());
    }
    SECTION("forest trees respect the depth cap") {
        auto rf = RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{}, 5);
        for (const auto& tree : rf.trees()) CHECK(tree.max_depth() <= 12);
    }
}

TEST_CASE("adaboost matches the hand trace") {
    // worked 10-point example: alphas ln 8 and ln 10, both stumps split at 5.5
    Matrix x = make_x({{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}});
    std::vector<std::size_t> y{0, 0, 0, 1, 1, 0, 2, 2, 2, 2};
    auto ada = AdaBoostClassifier::train(x, y, 3, 2);
    REQUIRE(ada.rounds().size() == 2);
    CHECK(ada.rounds()[0].alpha == Catch::Approx(2.0794415416798359).epsilon(1e-12));
    CHECK(ada.rounds()[1].alpha == Catch::Approx(2.3025850929940457).epsilon(1e-12));
    for (int r = 0; r < 2; ++r) {
        const Tree& stump = ada.rounds()[r].stump;
        REQUIRE(stump.nodes[0].feature == 0);
        CHECK(stump.nodes[0].threshold == Catch::Approx(5.5).margin(1e-12));
        std::size_t left_maj = argmax_tie_low(stump.nodes[stump.nodes[0].left].dist);
        CHECK(left_maj == (r == 0 ? 0u : 1u));
        CHECK(argmax_tie_low(stump.nodes[stump.nodes[0].right].dist) == 2u);
    }
}

TEST_CASE("adaboost early stop on a perfect stump") {
    Matrix x = make_x({{0}, {1}, {2}, {10}, {11}, {12}});
    std::vector<std::size_t> y{0, 0, 0, 1, 1, 1};
    auto ada = AdaBoostClassifier::train(x, y, 2, 50);
    CHECK(ada.rounds().size() == 1);
    CHECK(ada.predict({1.0}) == 0);
    CHECK(ada.predict({11.0}) == 1);
}

TEST_CASE("gradient boosting matches the scripted 2-round trace") {
    Matrix x = make_x({{0}, {1}, {2}, {3}, {4}, {5}});
    std::vector<std::size_t> y{0, 0, 0, 1, 1, 1};
    GradientBoostingConfig cfg;
    cfg.rounds = 2;
    cfg.depth = 1;
    cfg.shrinkage = 0.1;
    auto gb = GradientBoostingClassifier::train(x, y, 2, cfg);

    const Tree& t0 = gb.rounds()[0][0];
    REQUIRE(t0.nodes[0].feature == 0);
    CHECK(t0.nodes[0].threshold == Catch::Approx(2.5).margin(1e-12));
    CHECK(t0.nodes[t0.nodes[0].left].value == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(t0.nodes[t0.nodes[0].right].value == Catch::Approx(-1.0).epsilon(1e-12));
    const Tree& t1 = gb.rounds()[1][0];
    CHECK(t1.nodes[t1.nodes[0].left].value ==
          Catch::Approx(0.90936537653899093).epsilon(1e-12));

    Vec s = gb.decision_scores({0.0});
    CHECK(s[0] == Catch::Approx(0.19093653765389909).epsilon(1e-12));
    CHECK(s[1] == Catch::Approx(-0.19093653765389909).epsilon(1e-12));
    Vec p = gb.predict_proba({0.0});
    CHECK(p[0] == Catch::Approx(0.59432478637062508).epsilon(1e-12));
    CHECK(p[1] == Catch::Approx(0.40567521362937492).epsilon(1e-12));
}

TEST_CASE("gradient boosting properties") {
    SECTION("zero rounds predict uniformly") {
        Matrix x = make_x({{0}, {1}, {2}, {3}});
        GradientBoostingConfig cfg;
        cfg.rounds = 0;
        auto gb = GradientBoostingClassifier::train(x, {0, 0, 1, 1}, 2, cfg);
        Vec p = gb.predict_proba({1.5});
        CHECK(p[0] == Catch::Approx(0.5).margin(1e-15));
        CHECK(p[1] == Catch::Approx(0.5).margin(1e-15));
    }
    SECTION("training log-loss never increases") {
        ToySet t = toy3(31);
        GradientBoostingConfig cfg;
        cfg.rounds = 30;
        cfg.depth = 2;
        Vec losses;
        GradientBoostingClassifier::train(t.x, t.y, 3, cfg, &losses);
        REQUIRE(losses.size() == 30);
        for (std::size_t r = 1; r < losses.size(); ++r)
            CHECK(losses[r] <= losses[r - 1] + 1e-12);
    }
    SECTION("boosted trees respect the depth cap") {
        ToySet t = toy3(37);
        GradientBoostingConfig cfg;
        cfg.rounds = 5;
        cfg.depth = 3;
        auto gb = GradientBoostingClassifier::train(t.x, t.y, 3, cfg);
        for (const auto& round : gb.rounds())
            for (const auto& tree : round) CHECK(tree.max_depth() <= 3);
    }
}

TEST_CASE("single-class training data predicts that class") {
    Matrix x = make_x({{0.1, 0.2}, {0.3, 0.1}, {0.2, 0.4}, {0.5, 0.3}});
    std::vector<std::size_t> y{1, 1, 1, 1};
    // kinds that accept single-class data
    auto dt = DecisionTreeClassifier::train(x, y, 3, 12);
    auto knn = KnnClassifier::train(x, y, 3, 2);
    auto rf = RandomForestClassifier::train(x, y, 3, ForestConfig{}, 1);
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        Vec q{rng.next_double(), rng.next_double()};
        CHECK(dt.predict(q) == 1);
        CHECK(knn.predict(q) == 1);
        CHECK(rf.predict(q) == 1);
    }
}

TEST_CASE("uniform interface across all nine kinds") {
    ToySet t = toy3(77, 25);
    std::vector<std::unique_ptr<Classifier>> models;
    models.push_back(std::make_unique<KnnClassifier>(KnnClassifier::train(t.x, t.y, 3, 5)));
    models.push_back(std::make_unique<GaussianNbClassifier>(
        GaussianNbClassifier::train(t.x, t.y, 3)));
    models.push_back(std::make_unique<LdaClassifier>(LdaClassifier::train(t.x, t.y, 3)));
    models.push_back(std::make_unique<DecisionTreeClassifier>(
        DecisionTreeClassifier::train(t.x, t.y, 3, 6)));
    models.push_back(std::make_unique<RandomForestClassifier>(
        RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{5, 6, 1, true}, 3)));
    models.push_back(std::make_unique<AdaBoostClassifier>(
        AdaBoostClassifier::train(t.x, t.y, 3, 10)));
    models.push_back(std::make_unique<GradientBoostingClassifier>(
        GradientBoostingClassifier::train(t.x, t.y, 3, GradientBoostingConfig{10, 2, 0.1})));
    models.push_back(std::make_unique<SvmRbfClassifier>(
        SvmRbfClassifier::train(t.x, t.y, 3, SvmConfig{}, 3)));
    {
        Rng rng(4);
        MlpModel m = MlpModel::init({2, 8, 8, 8, 8, 3}, rng);
        TrainConfig tc;
        tc.epochs = 30;
        tc.batch_size = 8;
        m.train(t.x, t.y, tc);
        models.push_back(std::make_unique<MlpClassifier>(std::move(m)));
    }

    Rng rng(55);
    for (const auto& m : models) {
        for (int trial = 0; trial < 30; ++trial) {
            Vec q{rng.next_double(), rng.next_double()};
            Vec p = m->predict_proba(q);
            REQUIRE(p.size() == 3);
            double sum = 0.0;
            for (double v : p) {
                CHECK(v >= -1e-12);
                sum += v;
            }
            CHECK(sum == Catch::Approx(1.0).margin(1e-9));
            CHECK(m->predict(q) == argmax_tie_low(p));
        }
    }
}

TEST_CASE("classifier files round trip byte for byte") {
    ToySet t = toy3(91, 15);
    MinMaxScaler sc{Vec(2, 0.0), Vec(2, 1.0)};

    std::vector<std::unique_ptr<Classifier>> models;
    models.push_back(std::make_unique<KnnClassifier>(KnnClassifier::train(t.x, t.y, 3, 5)));
    models.push_back(std::make_unique<GaussianNbClassifier>(
        GaussianNbClassifier::train(t.x, t.y, 3)));
    models.push_back(std::make_unique<LdaClassifier>(LdaClassifier::train(t.x, t.y, 3)));
    models.push_back(std::make_unique<DecisionTreeClassifier>(
        DecisionTreeClassifier::train(t.x, t.y, 3, 4)));
    models.push_back(std::make_unique<RandomForestClassifier>(
        RandomForestClassifier::train(t.x, t.y, 3, ForestConfig{3, 4, 1, true}, 3)));
    models.push_back(std::make_unique<AdaBoostClassifier>(
        AdaBoostClassifier::train(t.x, t.y, 3, 5)));
    models.push_back(std::make_unique<GradientBoostingClassifier>(
        GradientBoostingClassifier::train(t.x, t.y, 3, GradientBoostingConfig{5, 2, 0.1})));
    models.push_back(std::make_unique<SvmRbfClassifier>(
        SvmRbfClassifier::train(t.x, t.y, 3, SvmConfig{}, 3)));

    Rng rng(14);
    for (auto& m : models) {
        m->scaler = sc;
        m->label_order = {"c0", "c1", "c2"};
        m->seed = 3;
        auto p1 = fs::temp_directory_path() /
                  (std::string("modadv_cls_") + kind_name(m->kind()) + ".json");
        auto p2 = fs::temp_directory_path() /
                  (std::string("modadv_cls_") + kind_name(m->kind()) + "_2.json");
        m->save(p1.string());
        auto back = load_classifier(p1.string());
        CHECK(back->kind() == m->kind());
        REQUIRE(back->scaler.has_value());
        CHECK(back->scaler->min == sc.min);
        back->save(p2.string());
        CHECK(read_file_bytes(p1.string()) == read_file_bytes(p2.string()));
        for (int trial = 0; trial < 25; ++trial) {
            Vec q{rng.next_double(), rng.next_double()};
            CHECK(back->predict(q) == m->predict(q));
        }
        fs::remove(p1);
        fs::remove(p2);
    }
}

TEST_CASE("unknown format is rejected") {
    auto path = fs::temp_directory_path() / "modadv_unknown_model.json";
    std::string text = R"({"format":"modadv-mystery-v1"})";
    write_file_bytes(path.string(), text.data(), text.size());
    CHECK_THROWS_AS(load_classifier(path.string()), FormatError);
    fs::remove(path);
}
