#include "hierevo/modularity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include <Eigen/Dense>

namespace hierevo {

int Partition::module_count() const {
    if (labels.empty()) return 0;
    std::vector<int> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

Measured modularity_q(const StructuralGraph& graph, const Partition& partition) {
    const int n = graph.node_count();
    if (static_cast<int>(partition.labels.size()) != n) {
        throw std::invalid_argument("partition does not cover the graph");
    }
    const double m = graph.edge_count();
    if (m == 0) return {0.0, true};
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (partition.labels[i] != partition.labels[j]) continue;
            const double a = graph.has_edge(i, j) ? 1.0 : 0.0;
            sum += a - graph.in_degree(i) * static_cast<double>(graph.out_degree(j)) / m;
        }
    }
    return {sum / m, false};
}

namespace {

constexpr double kEps = 1e-10;

using Matrix = Eigen::MatrixXd;

// Quadratic form gain of a +-1 split: s^T M s / (4m).
double split_gain(const Matrix& m_sym, const std::vector<int>& s, double m) {
    double total = 0.0;
    const int n = static_cast<int>(s.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) total += m_sym(i, j) * s[i] * s[j];
    }
    return total / (4.0 * m);
}

// Newman's fine-tuning: each sweep moves every node once, always picking the
// move with the best gain, then rewinds to the best state of the sweep.
void refine(const Matrix& m_sym, std::vector<int>& s, double m) {
    const int n = static_cast<int>(s.size());
    double current = split_gain(m_sym, s, m);
    while (true) {
        std::vector<int> work = s;
        std::vector<char> moved(static_cast<std::size_t>(n), 0);
        double value = current;
        double best = current;
        std::vector<int> best_state = s;
        for (int step = 0; step < n; ++step) {
            int pick = -1;
            double pick_delta = 0.0;
            for (int k = 0; k < n; ++k) {
                if (moved[k]) continue;
                // Flipping s_k changes s^T M s by -4 s_k sum_{j != k} M_kj s_j.
                double row = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j != k) row += m_sym(k, j) * work[j];
                }
                const double delta = -4.0 * work[k] * row / (4.0 * m);
                if (pick < 0 || delta > pick_delta + kEps) {
                    pick = k;
                    pick_delta = delta;
                }
            }
            work[pick] = -work[pick];
            moved[pick] = 1;
            value += pick_delta;
            if (value > best + kEps) {
                best = value;
                best_state = work;
            }
        }
        if (best <= current + kEps) return;
        s = std::move(best_state);
        current = split_gain(m_sym, s, m);
    }
}

// Q from per-module edge and degree totals; same value as modularity_q.
double q_from_labels(const StructuralGraph& graph, const std::vector<int>& labels, int modules) {
    const double m = graph.edge_count();
    std::vector<double> within(static_cast<std::size_t>(modules), 0.0);
    std::vector<double> kin(static_cast<std::size_t>(modules), 0.0);
    std::vector<double> kout(static_cast<std::size_t>(modules), 0.0);
    for (auto [a, b] : graph.edges()) {
        kout[labels[a]] += 1;
        kin[labels[b]] += 1;
        if (labels[a] == labels[b]) within[labels[a]] += 1;
    }
    double q = 0.0;
    for (int c = 0; c < modules; ++c) q += within[c] - kin[c] * kout[c] / m;
    return q / m;
}

// Greedy polish over the whole partition: repeatedly apply the single best
// node move (to any module or a fresh one) or module merge while Q rises.
void polish(const StructuralGraph& graph, std::vector<int>& labels) {
    const int n = graph.node_count();
    auto compact = [&] {
        std::vector<int> remap(static_cast<std::size_t>(n) + 1, -1);
        int next = 0;
        for (int& l : labels) {
            if (remap[l] < 0) remap[l] = next++;
            l = remap[l];
        }
        return next;
    };
    int modules = compact();
    double current = q_from_labels(graph, labels, modules);
    while (true) {
        double best = current + kEps;
        std::vector<int> best_labels;
        for (int v = 0; v < n; ++v) {
            const int home = labels[v];
            for (int target = 0; target <= modules; ++target) {
                if (target == home) continue;
                labels[v] = target;
                const double q = q_from_labels(graph, labels, modules + 1);
                if (q > best) {
                    best = q;
                    best_labels = labels;
                }
            }
            labels[v] = home;
        }
        for (int a = 0; a < modules; ++a) {
            for (int b = a + 1; b < modules; ++b) {
                std::vector<int> merged = labels;
                for (int& l : merged) {
                    if (l == b) l = a;
                }
                const double q = q_from_labels(graph, merged, modules);
                if (q > best) {
                    best = q;
                    best_labels = std::move(merged);
                }
            }
        }
        if (best_labels.empty()) return;
        labels = std::move(best_labels);
        modules = compact();
        current = q_from_labels(graph, labels, modules);
    }
}

}  // namespace

ModuleDetection detect_modules(const StructuralGraph& graph) {
    const int n = graph.node_count();
    ModuleDetection result;
    result.partition.labels.assign(static_cast<std::size_t>(n), 0);
    const double m = graph.edge_count();
    if (n <= 1 || m == 0) {
        result.q = modularity_q(graph, result.partition).value;
        return result;
    }

    Matrix b(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            b(i, j) = (graph.has_edge(i, j) ? 1.0 : 0.0) - graph.in_degree(i) * graph.out_degree(j) / m;
        }
    }

    std::deque<std::vector<int>> pending;
    pending.emplace_back();
    for (int i = 0; i < n; ++i) pending.front().push_back(i);
    std::vector<std::vector<int>> modules;

    while (!pending.empty()) {
        std::vector<int> group = std::move(pending.front());
        pending.pop_front();
        const int size = static_cast<int>(group.size());
        if (size < 2) {
            modules.push_back(std::move(group));
            continue;
        }
        Matrix bg(size, size);
        for (int a = 0; a < size; ++a) {
            double row = 0.0;
            for (int k : group) row += b(group[a], k);
            for (int c = 0; c < size; ++c) bg(a, c) = b(group[a], group[c]);
            bg(a, a) -= row;
        }
        const Matrix m_sym = bg + bg.transpose();

        Eigen::SelfAdjointEigenSolver<Matrix> solver(m_sym);
        const auto& values = solver.eigenvalues();
        if (values(size - 1) <= kEps) {
            modules.push_back(std::move(group));
            continue;
        }
        Eigen::VectorXd v = solver.eigenvectors().col(size - 1);
        for (int a = 0; a < size; ++a) {
            if (v(a) != 0.0) {
                if (v(a) < 0.0) v = -v;
                break;
            }
        }
        std::vector<int> s(static_cast<std::size_t>(size));
        for (int a = 0; a < size; ++a) s[a] = v(a) >= 0.0 ? 1 : -1;
        refine(m_sym, s, m);

        std::vector<int> first, second;
        for (int a = 0; a < size; ++a) (s[a] > 0 ? first : second).push_back(group[a]);
        if (first.empty() || second.empty() || split_gain(m_sym, s, m) <= kEps) {
            modules.push_back(std::move(group));
            continue;
        }
        pending.push_back(std::move(first));
        pending.push_back(std::move(second));
    }

    for (std::size_t label = 0; label < modules.size(); ++label) {
        for (int v : modules[label]) result.partition.labels[v] = static_cast<int>(label);
    }
    polish(graph, result.partition.labels);
    result.q = modularity_q(graph, result.partition).value;
    return result;
}

}  // namespace hierevo
