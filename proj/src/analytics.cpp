#include "consensus/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace consensus {

namespace {

double harmonic(int k) {
    double h = 0.0;
    for (int i = k; i >= 1; --i) h += 1.0 / i;  // small terms first
    return h;
}

void check_star_args(int n, int s0, int s1, int mode) {
    if (n < 2 || s0 < 0 || s1 < 0 || s0 + s1 != n)
        throw std::invalid_argument("star hitting times: counts must be nonnegative and sum to n");
    if (s1 > s0) throw std::invalid_argument("star hitting times: convention is s0 >= s1");
    if (mode < 0 || mode >= s1)
        throw std::invalid_argument("star hitting times: mode must lie in [0, s1)");
}

}  // namespace

PhaseBounds theorem_bound(double delta, double n) {
    if (!(delta > 0.0)) throw std::domain_error("theorem_bound: delta must be positive");
    if (!(n >= 2.0)) throw std::domain_error("theorem_bound: n must be >= 2");
    const double per_phase = (std::log(n) + 1.0) / delta;
    return {per_phase, per_phase, 2.0 * per_phase};
}

double expected_t1_complete_epoch_sum(int n, int s0, int s1) {
    if (n < 2 || s1 < 0 || s0 < s1 || s0 + s1 != n)
        throw std::invalid_argument("expected_t1_complete: requires s0 >= s1 >= 0, s0 + s1 = n");
    double sum = 0.0;
    for (int i = s1 - 1; i >= 0; --i)
        sum += 1.0 / (static_cast<double>(s0 - i) * static_cast<double>(s1 - i));
    return (n - 1) * sum;
}

double expected_t1_complete(int n, int s0, int s1) {
    if (n < 2 || s1 < 0 || s0 < s1 || s0 + s1 != n)
        throw std::invalid_argument("expected_t1_complete: requires s0 >= s1 >= 0, s0 + s1 = n");
    if (s1 == 0) return 0.0;
    if (s0 == s1) return expected_t1_complete_epoch_sum(n, s0, s1);
    return static_cast<double>(n - 1) / (s0 - s1) *
           (harmonic(s1) + harmonic(s0 - s1) - harmonic(s0));
}

MarginAsymptotics margin_asymptotics(int n, double mu) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("margin_asymptotics: mu in (0, 1]");
    if (n * mu < 1.0) throw std::invalid_argument("margin_asymptotics: need n mu >= 1");
    const double logn = std::log(static_cast<double>(n));
    MarginAsymptotics out;
    out.value = std::log(n * mu) / mu;
    const double a = -std::log(mu) / logn;  // mu = n^{-a}
    if (a >= 0.9) {
        out.regime = MarginRegime::LinearN;
        out.dominant_term = static_cast<double>(n);
    } else if (a <= 0.1) {
        out.regime = MarginRegime::LogN;
        out.dominant_term = logn / mu;
    } else {
        out.regime = MarginRegime::Intermediate;
        out.dominant_term = 0.5 * (1.0 - a) * std::pow(static_cast<double>(n), a) * logn;
    }
    return out;
}

StarHittingTimes star_hitting_times(int n, int s0, int s1, int mode) {
    check_star_args(n, s0, s1, mode);
    const double x0 = s0 - mode;
    const double x1 = s1 - mode;
    const double xe = (n - s0 - s1) + 2.0 * mode;
    const double m = n - 1.0;
    // Numerator n(n xe + x0 x1): solving the first-step system gives an
    // extra factor n on the x0 x1 term relative to a naive reading; the
    // mode-0 specializations (n-1)/x1 and (n-1)/x0 confirm it.
    const double num = n * (n * xe + x0 * x1);
    StarHittingTimes t;
    t.phi0 = m * num / (x0 * x1 * (n - x0) * (n + xe));
    t.phi1 = m * num / (x0 * x1 * (n - x1) * (n + xe));
    t.phie = m * (n * static_cast<double>(n) - x0 * x1) / (x0 * x1 * (n + xe));
    return t;
}

StarHittingTimes star_hitting_oracle(int n, int s0, int s1, int mode) {
    check_star_args(n, s0, s1, mode);
    const double x0 = s0 - mode;
    const double x1 = s1 - mode;
    const double xe = (n - s0 - s1) + 2.0 * mode;
    const double m = n - 1.0;

    // First-step equations for (phi0, phie, phi1), scaled by n-1:
    //   (n - x0) phi0 - xe phie             = n - 1
    //   -x0 phi0 + (n - xe) phie - x1 phi1  = n - 1
    //             -xe phie + (n - x1) phi1  = n - 1
    double a[3][4] = {
        {n - x0, -xe, 0.0, m},
        {-x0, n - xe, -x1, m},
        {0.0, -xe, n - x1, m},
    };
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw std::runtime_error("star_hitting_oracle: singular system");
        for (int c = 0; c < 4; ++c) std::swap(a[col][c], a[pivot][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return {a[0][3] / a[0][0], a[2][3] / a[2][2], a[1][3] / a[1][1]};
}

double expected_t1_star(int n, int s0, int s1, NodeState hub_initial) {
    if (s1 < 1) throw std::invalid_argument("expected_t1_star: needs s1 >= 1");
    if (hub_initial != NodeState::Zero && hub_initial != NodeState::One)
        throw std::invalid_argument("expected_t1_star: hub must start in state 0 or 1");
    StarHittingTimes mode0 = star_hitting_times(n, s0, s1, 0);
    double total = (hub_initial == NodeState::Zero) ? mode0.phi0 : mode0.phi1;
    for (int i = 1; i < s1; ++i) total += star_hitting_times(n, s0, s1, i).phie;
    return total;
}

double star_t1_dominant_term(int n, int s0, int s1) {
    const double alpha = static_cast<double>(s0) / n;
    const double margin = 2.0 * alpha - 1.0;
    return n * std::log(static_cast<double>(n)) / (margin * (3.0 - 2.0 * alpha));
}

double phi(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("phi: argument outside [0, 1]");
    if (x == 0.0) return 1.0;  // x log(x) -> 0
    return x * std::log(x) + 1.0 - x;
}

double phi_inverse(double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("phi_inverse: argument outside [0, 1]");
    double lo = 0.0, hi = 1.0;  // phi decreases from 1 to 0
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        (phi(mid) > y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double er_time_bound(int n, double c, double alpha) {
    if (n < 2 || alpha <= 0.5 || alpha > 1.0)
        throw std::invalid_argument("er_time_bound: need n >= 2 and alpha in (1/2, 1]");
    const double margin = 2.0 * alpha - 1.0;
    if (!(c > 2.0 / margin))
        throw std::domain_error("er_time_bound: requires c > 2/(2 alpha - 1)");
    return std::log(static_cast<double>(n)) / (margin * phi_inverse(2.0 / (c * margin)));
}

std::string to_json(const AnalyticReport& r) {
    nlohmann::json j;
    j["graph_family"] = r.graph_family;
    j["n"] = r.n;
    j["s0"] = r.s0;
    j["s1"] = r.s1;
    j["delta"] = r.delta;
    j["bound_t1"] = r.bound_t1;
    j["bound_t2"] = r.bound_t2;
    j["bound_total"] = r.bound_total;
    if (r.exact_t1) j["exact_t1"] = *r.exact_t1;
    if (r.dominant_term) j["dominant_term"] = *r.dominant_term;
    j["notes"] = r.notes;
    return j.dump();
}

}  // namespace consensus
