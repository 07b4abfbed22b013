#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "modadv/errors.hpp"
#include "modadv/numerics.hpp"
#include "modadv/rng.hpp"

namespace modadv {

// Axis-aligned binary tree shared by the tree-based classifiers. Leaves keep
// either a class histogram (classification) or a scalar value (regression).
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Vec dist;           // classification: normalized class weights
    double value = 0.0; // regression leaf value
};

struct Tree {
    std::vector<TreeNode> nodes; // nodes[0] is the root

    int leaf_for(const double* x) const {
        int n = 0;
        while (nodes[n].feature >= 0)
            n = x[nodes[n].feature] <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
        return n;
    }

    int max_depth() const {
        if (nodes.empty()) return 0;
        std::vector<std::pair<int, int>> stack{{0, 0}};
        int best = 0;
        while (!stack.empty()) {
            auto [n, d] = stack.back();
            stack.pop_back();
            best = std::max(best, d);
            if (nodes[n].feature >= 0) {
                stack.push_back({nodes[n].left, d + 1});
                stack.push_back({nodes[n].right, d + 1});
            }
        }
        return best;
    }
};

// Per-feature argsort of the training matrix, computed once and shared by all
// trees grown on the same rows (bootstrap weights do not change value order).
struct PresortedFeatures {
    const Matrix* x = nullptr;
    std::vector<std::vector<std::uint32_t>> order;

    explicit PresortedFeatures(const Matrix& m) : x(&m) {
        order.resize(m.cols);
        for (std::size_t f = 0; f < m.cols; ++f) {
            auto& ord = order[f];
            ord.resize(m.rows);
            std::iota(ord.begin(), ord.end(), 0u);
            std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
                return m.at(a, f) < m.at(b, f);
            });
        }
    }
};

struct TreeConfig {
    int max_depth = 12;
    std::size_t min_samples_split = 2;
    int features_per_split = 0; // 0 = consider every feature
    double min_gain = 1e-12;
};

namespace detail {

struct LevelNode {
    int id;          // index into Tree::nodes
    int depth;
    Vec class_w;     // classification only
    double sum_g = 0.0, sum_h = 0.0; // regression only
    std::size_t count = 0;
    double total_w = 0.0;
    // best split so far
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<int> features; // candidate set when subsampling
};

inline double gini_term(const Vec& w, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : w) s += (c / total) * (c / total);
    return 1.0 - s;
}

// distinct features drawn by partial Fisher-Yates, deterministic per rng
inline std::vector<int> sample_features(std::size_t d, int m, Rng& rng) {
    std::vector<int> pool(d);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(m);
    for (int i = 0; i < m && i < static_cast<int>(d); ++i) {
        std::size_t j = i + rng.next_below(static_cast<std::uint32_t>(d - i));
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

// Weighted Gini CART grown breadth-first over the presorted feature orders.
// Zero-weight rows are excluded from the tree entirely (that is how bootstrap
// subsampling is expressed). Candidate thresholds sit midway between
// consecutive distinct values; ties on gain keep the first (lowest feature,
// lowest threshold) candidate.
inline Tree build_classification_tree(const PresortedFeatures& ps,
                                      const std::vector<std::size_t>& y, std::size_t k,
                                      const Vec& weights, const TreeConfig& cfg,
                                      Rng* rng = nullptr) {
    const Matrix& x = *ps.x;
    const std::size_t n = x.rows, d = x.cols;
    if (y.size() != n) throw InvalidInput("tree: label count mismatch");
    if (cfg.features_per_split > 0 && rng == nullptr)
        throw InvalidInput("tree: feature subsampling needs an rng");

    Vec w = weights;
    if (w.empty()) w.assign(n, 1.0);

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] > 0.0) node_of[i] = 0;

    std::vector<detail::LevelNode> level(1);
    level[0].id = 0;
    level[0].depth = 0;
    level[0].class_w.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (node_of[i] == 0) {
            level[0].class_w[y[i]] += w[i];
            level[0].total_w += w[i];
            ++level[0].count;
        }

    std::vector<int> level_pos(1, 0); // node id -> position in `level`

    while (!level.empty()) {
        // candidate feature sets
        for (auto& nd : level)
            if (cfg.features_per_split > 0)
                nd.features = detail::sample_features(d, cfg.features_per_split, *rng);

        const std::size_t ln = level.size();
        std::vector<Vec> left_w(ln, Vec(k, 0.0));
        std::vector<double> left_total(ln), last_val(ln);
        std::vector<std::size_t> left_count(ln);
        std::vector<char> started(ln), uses(ln);

        for (std::size_t f = 0; f < d; ++f) {
            for (std::size_t p = 0; p < ln; ++p) {
                uses[p] = cfg.features_per_split == 0 ||
                          std::binary_search(level[p].features.begin(),
                                             level[p].features.end(), static_cast<int>(f));
                if (!uses[p]) continue;
                std::fill(left_w[p].begin(), left_w[p].end(), 0.0);
                left_total[p] = 0.0;
                left_count[p] = 0;
                started[p] = 0;
            }
            for (std::uint32_t i : ps.order[f]) {
                int nd_id = node_of[i];
                if (nd_id < 0) continue;
                std::size_t p = static_cast<std::size_t>(level_pos[nd_id]);
                if (!uses[p]) continue;
                detail::LevelNode& nd = level[p];
                double v = x.at(i, f);
                if (started[p] && v != last_val[p] && left_count[p] < nd.count) {
                    double wl = left_total[p], wr = nd.total_w - wl;
                    if (wl > 0.0 && wr > 0.0) {
                        double gl = detail::gini_term(left_w[p], wl);
                        Vec right(k);
                        for (std::size_t c = 0; c < k; ++c)
                            right[c] = nd.class_w[c] - left_w[p][c];
                        double gr = detail::gini_term(right, wr);
                        double parent = detail::gini_term(nd.class_w, nd.total_w);
                        double gain = parent - (wl / nd.total_w) * gl - (wr / nd.total_w) * gr;
                        if (gain > nd.best_gain + 1e-15 && gain > cfg.min_gain) {
                            nd.best_gain = gain;
                            nd.best_feature = static_cast<int>(f);
                            nd.best_threshold = (last_val[p] + v) / 2.0;
                        }
                    }
                }
                left_w[p][y[i]] += w[i];
                left_total[p] += w[i];
                ++left_count[p];
                last_val[p] = v;
                started[p] = 1;
            }
        }

        // decide splits, build next level
        std::vector<detail::LevelNode> next;
        int max_id = static_cast<int>(tree.nodes.size());
        for (auto& nd : level) {
            std::size_t live_classes = 0;
            for (double c : nd.class_w) live_classes += c > 0.0;
            bool split = nd.best_feature >= 0 && nd.depth < cfg.max_depth &&
                         nd.count >= cfg.min_samples_split && live_classes > 1;
            TreeNode& node = tree.nodes[nd.id];
            if (!split) {
                node.dist = nd.class_w;
                if (nd.total_w > 0.0)
                    for (double& c : node.dist) c /= nd.total_w;
                else
                    node.dist.assign(k, 1.0 / static_cast<double>(k));
                continue;
            }
            node.feature = nd.best_feature;
            node.threshold = nd.best_threshold;
            node.left = max_id++;
            node.right = max_id++;
            detail::LevelNode l, r;
            l.id = node.left;
            r.id = node.right;
            l.depth = r.depth = nd.depth + 1;
            l.class_w.assign(k, 0.0);
            r.class_w.assign(k, 0.0);
            next.push_back(std::move(l));
            next.push_back(std::move(r));
        }
        tree.nodes.resize(max_id);
        level_pos.assign(max_id, -1);
        for (std::size_t p = 0; p < next.size(); ++p) level_pos[next[p].id] = static_cast<int>(p);

        if (next.empty()) break;
        for (std::size_t i = 0; i < n; ++i) {
            int nd_id = node_of[i];
            if (nd_id < 0) continue;
            const TreeNode& node = tree.nodes[nd_id];
            if (node.feature < 0) {
                node_of[i] = -2 - nd_id; // parked in a finished leaf
                continue;
            }
            int child = x.at(i, node.feature) <= node.threshold ? node.left : node.right;
            node_of[i] = child;
            auto& nd = next[level_pos[child]];
            nd.class_w[y[i]] += w[i];
            nd.total_w += w[i];
            ++nd.count;
        }
        level = std::move(next);
    }
    return tree;
}

// Regression tree for boosted residuals: squared-error splits on the gradient
// carried per sample, Newton leaf values from (sum_g, sum_h) with the
// multiclass (k-1)/k factor.
inline Tree build_regression_tree(const PresortedFeatures& ps, const Vec& g, const Vec& h,
                                  double class_factor, const TreeConfig& cfg) {
    const Matrix& x = *ps.x;
    const std::size_t n = x.rows, d = x.cols;
    if (g.size() != n || h.size() != n) throw InvalidInput("regression tree: size mismatch");

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n, 0);

    std::vector<detail::LevelNode> level(1);
    level[0].id = 0;
    level[0].depth = 0;
    level[0].count = n;
    for (std::size_t i = 0; i < n; ++i) {
        level[0].sum_g += g[i];
        level[0].sum_h += h[i];
    }

    std::vector<int> level_pos(1, 0);

    while (!level.empty()) {
        const std::size_t ln = level.size();
        std::vector<double> left_g(ln), last_val(ln);
        std::vector<std::size_t> left_count(ln);
        std::vector<char> started(ln);

        for (std::size_t f = 0; f < d; ++f) {
            std::fill(left_g.begin(), left_g.end(), 0.0);
            std::fill(left_count.begin(), left_count.end(), 0);
            std::fill(started.begin(), started.end(), 0);
            for (std::uint32_t i : ps.order[f]) {
                int nd_id = node_of[i];
                if (nd_id < 0) continue;
                std::size_t p = static_cast<std::size_t>(level_pos[nd_id]);
                detail::LevelNode& nd = level[p];
                double v = x.at(i, f);
                if (started[p] && v != last_val[p] && left_count[p] < nd.count) {
                    double nl = static_cast<double>(left_count[p]);
                    double nr = static_cast<double>(nd.count) - nl;
                    double sl = left_g[p], sr = nd.sum_g - sl;
                    double gain = sl * sl / nl + sr * sr / nr -
                                  nd.sum_g * nd.sum_g / static_cast<double>(nd.count);
                    if (gain > nd.best_gain + 1e-15 && gain > cfg.min_gain) {
                        nd.best_gain = gain;
                        nd.best_feature = static_cast<int>(f);
                        nd.best_threshold = (last_val[p] + v) / 2.0;
                    }
                }
                left_g[p] += g[i];
                ++left_count[p];
                last_val[p] = v;
                started[p] = 1;
            }
        }

        std::vector<detail::LevelNode> next;
        int max_id = static_cast<int>(tree.nodes.size());
        for (auto& nd : level) {
            bool split = nd.best_feature >= 0 && nd.depth < cfg.max_depth &&
                         nd.count >= cfg.min_samples_split;
            TreeNode& node = tree.nodes[nd.id];
            if (!split) {
                node.value = nd.sum_h > 1e-12 ? class_factor * nd.sum_g / nd.sum_h : 0.0;
                continue;
            }
            node.feature = nd.best_feature;
            node.threshold = nd.best_threshold;
            node.left = max_id++;
            node.right = max_id++;
            detail::LevelNode l, r;
            l.id = node.left;
            r.id = node.right;
            l.depth = r.depth = nd.depth + 1;
            next.push_back(std::move(l));
            next.push_back(std::move(r));
        }
        tree.nodes.resize(max_id);
        level_pos.assign(max_id, -1);
        for (std::size_t p = 0; p < next.size(); ++p) level_pos[next[p].id] = static_cast<int>(p);

        if (next.empty()) break;
        for (std::size_t i = 0; i < n; ++i) {
            int nd_id = node_of[i];
            if (nd_id < 0) continue;
            const TreeNode& node = tree.nodes[nd_id];
            if (node.feature < 0) {
                node_of[i] = -2 - nd_id;
                continue;
            }
            int child = x.at(i, node.feature) <= node.threshold ? node.left : node.right;
            node_of[i] = child;
            auto& nd = next[level_pos[child]];
            nd.sum_g += g[i];
            nd.sum_h += h[i];
            ++nd.count;
        }
        level = std::move(next);
    }
    return tree;
}

} // namespace modadv
