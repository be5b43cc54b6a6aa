#pragma once

// Straight-line reference computation of the published scoring formulas.
// Deliberately independent of the library: it only uses <cmath> and spells
// out every step, so the production path can be checked against it.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct TaskTuple {
    int g = 0;
    int y_s = 0;
    int y_b = 0;
    double u_s = 0.0;
    double u_b = 0.0;
    double tau_s = 0.0;
    double tau_b = 0.0;
};

struct Params {
    double eta = 50.0;
    double alpha = 25.0;
    double beta = 20.0;
    double epsilon = 1.0;
};

inline double clamp01(double x) {
    if (x < 0.0) return 0.0;
    if (x > 100.0) return 100.0;
    return x;
}

inline double task_score(const TaskTuple& t, const Params& p = {}) {
    double v;
    if (t.y_s == 0) {
        v = 0.0;
    } else if (t.y_b == 0) {
        v = 100.0;
    } else {
        const double r_u = (t.u_s + p.epsilon) / (t.u_b + p.epsilon);
        const double r_tau = (t.tau_s + p.epsilon) / (t.tau_b + p.epsilon);
        const double e_u = clamp01(p.eta - p.alpha * std::log2(r_u));
        const double e_tau = clamp01(p.eta - p.alpha * std::log2(r_tau));
        const double e = (e_u + e_tau) / 2.0;
        if (e <= p.eta) {
            v = p.beta + ((p.eta - p.beta) / p.eta) * e;
        } else {
            v = e;
        }
    }
    return t.g * v;
}

inline double utility(const std::vector<TaskTuple>& tasks, const Params& p = {}) {
    double sum = 0.0;
    for (const auto& t : tasks) sum += task_score(t, p);
    return sum / static_cast<double>(tasks.size());
}

inline double security(int p_a, int q_a, int p_p, int q_p, int p_d, int q_d) {
    const double s_a = 100.0 * p_a / q_a;
    const double s_p = 100.0 * p_p / q_p;
    const double s_d = 100.0 * p_d / q_d;
    return (s_a + s_p + s_d) / 3.0;
}

}  // namespace oracle
