#pragma once

#include <Eigen/Core>
#include <functional>

namespace stem {

struct SimplexOptions {
    int max_iter = 400;
    double x_tol = 1e-10;
    double f_tol = 1e-13;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free Nelder-Mead descent (minimization). Deterministic: the
// initial simplex is x0 plus one vertex per coordinate at x0 + step_i.
inline SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                                 const SimplexOptions& opts = {}) {
    const int n = int(x0.size());
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1](i) += step(i);
    for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        for (int i = 1; i <= n; ++i) { // insertion sort, n is tiny
            Eigen::VectorXd p = pts[i];
            double v = vals[i];
            int j = i - 1;
            while (j >= 0 && vals[j] > v) {
                pts[j + 1] = pts[j];
                vals[j + 1] = vals[j];
                --j;
            }
            pts[j + 1] = p;
            vals[j + 1] = v;
        }
    };

    SimplexResult res;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        order();
        double spread = 0.0;
        for (int i = 1; i <= n; ++i) spread = std::max(spread, (pts[i] - pts[0]).norm());
        if (spread <= opts.x_tol && std::abs(vals[n] - vals[0]) <= opts.f_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += pts[i];
        centroid /= double(n);

        Eigen::VectorXd refl = centroid + (centroid - pts[n]);
        double f_refl = f(refl);
        if (f_refl < vals[0]) {
            Eigen::VectorXd expd = centroid + 2.0 * (centroid - pts[n]);
            double f_expd = f(expd);
            if (f_expd < f_refl) {
                pts[n] = expd;
                vals[n] = f_expd;
            } else {
                pts[n] = refl;
                vals[n] = f_refl;
            }
        } else if (f_refl < vals[n - 1]) {
            pts[n] = refl;
            vals[n] = f_refl;
        } else {
            Eigen::VectorXd contr = centroid + 0.5 * (pts[n] - centroid);
            double f_contr = f(contr);
            if (f_contr < vals[n]) {
                pts[n] = contr;
                vals[n] = f_contr;
            } else {
                for (int i = 1; i <= n; ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.value = vals[0];
    res.iterations = it;
    return res;
}

} // namespace stem
