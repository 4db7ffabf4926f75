#include "ebransac/numerics.hpp"

#include <cmath>

namespace ebransac {

namespace {

struct PanelResult {
    double value;
    double error;
    bool ok;
};

// Recursive Simpson refinement with the standard 1/15 Richardson error
// estimate. fa/fm/fb are f at a, midpoint, b; whole is Simpson on [a, b].
PanelResult simpson_recurse(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole,
                            double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * abs_tol) {
        return {left + right + delta / 15.0, std::fabs(delta) / 15.0, true};
    }
    if (depth <= 0) {
        return {left + right + delta / 15.0, std::fabs(delta) / 15.0, false};
    }
    const PanelResult l =
        simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1);
    const PanelResult r =
        simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
    return {l.value + r.value, l.error + r.error, l.ok && r.ok};
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const PanelResult res =
        simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
    if (!res.ok || !std::isfinite(res.value)) {
        throw QuadratureError("adaptive_simpson: tolerance not met", res.value, res.error);
    }
    return res.value;
}

}  // namespace ebransac
