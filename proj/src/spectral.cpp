#include "consensus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "consensus/analytics.hpp"
#include "consensus/rng.hpp"

namespace consensus {

std::vector<int> subset_members(SubsetMask s) {
    std::vector<int> out;
    for (int i = 0; s; ++i, s >>= 1)
        if (s & 1) out.push_back(i);
    return out;
}

KilledMatrix build_qs(const ContactMatrix& q, SubsetMask s) {
    const int n = q.size();
    if (s == 0) throw std::invalid_argument("build_qs: subset must be non-empty");
    if (n < 64 && (s >> n) != 0)
        throw std::invalid_argument("build_qs: subset contains out-of-range nodes");
    KilledMatrix qs;
    qs.n = n;
    qs.subset = s;
    qs.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        const bool killed = (s >> i) & 1;
        qs.entries[static_cast<std::size_t>(i) * n + i] = -q.row_sum(i);
        if (!killed)
            for (int j = 0; j < n; ++j)
                if (j != i) qs.entries[static_cast<std::size_t>(i) * n + j] = q.rate(i, j);
    }
    return qs;
}

void jacobi_eigen(const std::vector<double>& sym, int m,
                  std::vector<double>& values, std::vector<double>& vectors) {
    std::vector<double> a = sym;
    vectors.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) vectors[static_cast<std::size_t>(i) * m + i] = 1.0;

    auto at = [&](std::vector<double>& x, int i, int j) -> double& {
        return x[static_cast<std::size_t>(i) * m + j];
    };

    double fro = 0.0;
    for (double x : a) fro += x * x;
    fro = std::sqrt(fro);
    const double tol = 1e-13 * std::max(fro, 1e-300);

    bool converged = (m <= 1);
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += 2.0 * at(a, p, q) * at(a, p, q);
        if (std::sqrt(off) <= tol) {
            converged = true;
            break;
        }
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                double apq = at(a, p, q);
                if (std::abs(apq) <= tol / (static_cast<double>(m) * m)) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < m; ++k) {
                    double akp = at(a, k, p), akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    double apk = at(a, p, k), aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < m; ++k) {
                    double vkp = at(vectors, k, p), vkq = at(vectors, k, q);
                    at(vectors, k, p) = c * vkp - s * vkq;
                    at(vectors, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += 2.0 * at(a, p, q) * at(a, p, q);
        throw std::runtime_error("jacobi_eigen: no convergence, residual off-norm " +
                                 std::to_string(std::sqrt(off)));
    }
    values.resize(m);
    for (int i = 0; i < m; ++i) values[i] = at(a, i, i);
}

double dominant_eigenvalue(const KilledMatrix& qs) {
    const int n = qs.n;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> comp;
    for (int i = 0; i < n; ++i) {
        if ((qs.subset >> i) & 1)
            best = std::max(best, qs.at(i, i));  // killed rows contribute -q_i
        else
            comp.push_back(i);
    }
    const int m = static_cast<int>(comp.size());
    if (m == 0) return best;

    std::vector<double> ms(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) ms[static_cast<std::size_t>(a) * m + b] = qs.at(comp[a], comp[b]);

    std::vector<double> values, vectors;
    jacobi_eigen(ms, m, values, vectors);
    int arg = 0;
    for (int i = 1; i < m; ++i)
        if (values[i] > values[arg]) arg = i;

    // Self-check the returned eigenpair against the 1e-10 residual contract.
    double norm = 0.0, res = 0.0;
    for (double x : ms) norm += x * x;
    norm = std::sqrt(norm);
    for (int a = 0; a < m; ++a) {
        double acc = 0.0;
        for (int b = 0; b < m; ++b)
            acc += ms[static_cast<std::size_t>(a) * m + b] * vectors[static_cast<std::size_t>(b) * m + arg];
        acc -= values[arg] * vectors[static_cast<std::size_t>(a) * m + arg];
        res += acc * acc;
    }
    res = std::sqrt(res);
    if (res > 1e-10 * std::max(norm, 1e-300))
        throw std::runtime_error("dominant_eigenvalue: eigenpair residual " + std::to_string(res) +
                                 " exceeds tolerance");

    return std::max(best, values[arg]);
}

const char* method_name(DeltaMethod m) {
    switch (m) {
        case DeltaMethod::Exhaustive: return "exhaustive";
        case DeltaMethod::ClosedForm: return "closed_form";
        case DeltaMethod::Sampled: return "sampled";
    }
    return "?";
}

std::string to_json(const SpectralResult& r) {
    nlohmann::json j;
    j["delta"] = r.delta;
    auto members = subset_members(r.argmin_subset);
    for (int& i : members) ++i;  // 1-based externally
    j["argmin_subset"] = members;
    j["method"] = method_name(r.method);
    j["subset_size"] = r.subset_size;
    return j.dump();
}

int enumeration_guard_limit() {
    static const int limit = [] {
        if (const char* env = std::getenv("CONSENSUS_MAX_N")) {
            int v = std::atoi(env);
            if (v > 0) return std::min(v, 64);
        }
        return 24;
    }();
    return limit;
}

namespace {

/// All size-k subsets of {0..n-1} in colexicographic order (Gosper's hack).
std::vector<SubsetMask> combinations(int n, int k) {
    std::vector<SubsetMask> out;
    if (k == 0 || k > n) return out;
    SubsetMask mask = (k == 64) ? ~0ULL : ((1ULL << k) - 1);
    const SubsetMask limit = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    while (mask <= limit) {
        out.push_back(mask);
        SubsetMask c = mask & -mask;
        SubsetMask r = mask + c;
        if (r > limit || r < mask) break;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    return out;
}

SpectralResult minimize_over(const ContactMatrix& q, const std::vector<SubsetMask>& masks,
                             bool parallel, DeltaMethod method) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;

#pragma omp parallel if (parallel)
    {
        double local_best = std::numeric_limits<double>::infinity();
        std::size_t local_idx = 0;
#pragma omp for schedule(dynamic, 16) nowait
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(masks.size()); ++i) {
            double v = std::abs(dominant_eigenvalue(build_qs(q, masks[i])));
            if (v < local_best || (v == local_best && static_cast<std::size_t>(i) < local_idx)) {
                local_best = v;
                local_idx = static_cast<std::size_t>(i);
            }
        }
#pragma omp critical
        {
            if (local_best < best || (local_best == best && local_idx < best_idx)) {
                best = local_best;
                best_idx = local_idx;
            }
        }
    }

    SpectralResult r;
    r.delta = best;
    r.argmin_subset = masks[best_idx];
    r.method = method;
    r.subset_size = subset_size(masks[best_idx]);
    return r;
}

}  // namespace

SpectralResult delta_exhaustive(const ContactMatrix& q, int s0, int s1, bool parallel) {
    const int n = q.size();
    if (s1 < 0 || s0 <= s1) throw std::invalid_argument("delta_exhaustive: requires s0 > s1 >= 0");
    if (s0 + s1 != n) throw std::invalid_argument("delta_exhaustive: s0 + s1 must equal n");
    if (n > enumeration_guard_limit())
        throw std::invalid_argument(
            "delta_exhaustive: n exceeds the enumeration guard (" +
            std::to_string(enumeration_guard_limit()) +
            "); use a closed form or delta_sampled, or raise CONSENSUS_MAX_N");
    auto masks = combinations(n, s0 - s1);
    return minimize_over(q, masks, parallel, DeltaMethod::Exhaustive);
}

double min_abs_dominant_over_sizes(const ContactMatrix& q, int lo, int hi) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = lo; k <= hi; ++k)
        for (SubsetMask mask : combinations(q.size(), k))
            best = std::min(best, std::abs(dominant_eigenvalue(build_qs(q, mask))));
    return best;
}

SpectralResult delta_sampled(const ContactMatrix& q, int s0, int s1, int samples,
                             std::uint64_t seed) {
    const int n = q.size();
    if (s1 < 0 || s0 <= s1) throw std::invalid_argument("delta_sampled: requires s0 > s1 >= 0");
    if (s0 + s1 != n) throw std::invalid_argument("delta_sampled: s0 + s1 must equal n");
    if (n > 64) throw std::invalid_argument("delta_sampled: subset masks cap n at 64");
    if (samples < 1) throw std::invalid_argument("delta_sampled: need at least one sample");
    const int k = s0 - s1;

    Rng rng(mix64(seed));
    std::vector<int> perm(n);
    std::vector<SubsetMask> masks;
    masks.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        SubsetMask mask = 0;
        for (int i = 0; i < k; ++i) {  // partial Fisher-Yates
            int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(perm[i], perm[j]);
            mask |= 1ULL << perm[i];
        }
        masks.push_back(mask);
    }
    return minimize_over(q, masks, /*parallel=*/true, DeltaMethod::Sampled);
}

double closed_form_complete(int n, int s0, int s1) {
    if (n < 2 || s1 < 0 || s0 <= s1 || s0 + s1 != n)
        throw std::invalid_argument("closed_form_complete: invalid counts");
    const int d = s0 - s1;
    if (d == n) return 1.0;  // S = V: Q_S is diagonal with entries -1
    return static_cast<double>(d) / (n - 1);
}

double closed_form_path(int n, double alpha) {
    if (n < 2 || alpha <= 0.5 || alpha > 1.0)
        throw std::invalid_argument("closed_form_path: need n >= 2 and alpha in (1/2, 1]");
    return 2.0 * (1.0 - std::cos(std::numbers::pi / (4.0 * (1.0 - alpha) * n + 1.0)));
}

double closed_form_path_asymptotic(int n, double alpha) {
    const double m = (1.0 - alpha) * n;
    return std::numbers::pi * std::numbers::pi / (16.0 * m * m);
}

double closed_form_cycle(int n, double alpha) {
    if (n < 2 || alpha <= 0.5 || alpha > 1.0)
        throw std::invalid_argument("closed_form_cycle: need n >= 2 and alpha in (1/2, 1]");
    return 2.0 * (1.0 - std::cos(std::numbers::pi / (2.0 * (1.0 - alpha) * n + 1.0)));
}

double closed_form_cycle_asymptotic(int n, double alpha) {
    const double m = (1.0 - alpha) * n;
    return std::numbers::pi * std::numbers::pi / (4.0 * m * m);
}

double closed_form_star(int n, double alpha) {
    if (n < 2 || alpha <= 0.5 || alpha > 1.0)
        throw std::invalid_argument("closed_form_star: need n >= 2 and alpha in (1/2, 1]");
    const double disc = 1.0 - 4.0 * (2.0 * alpha - 1.0) / n;
    if (disc < 0.0)
        throw std::domain_error("closed_form_star: 4(2 alpha - 1)/n exceeds 1, square root undefined");
    return n / (2.0 * (n - 1.0)) * (1.0 - std::sqrt(disc));
}

double delta_er_bound(int n, double c, double alpha) {
    if (n < 2 || alpha <= 0.5 || alpha > 1.0)
        throw std::invalid_argument("delta_er_bound: need n >= 2 and alpha in (1/2, 1]");
    const double margin = 2.0 * alpha - 1.0;
    if (!(c > 2.0 / margin))
        throw std::domain_error("delta_er_bound: requires c > 2/(2 alpha - 1)");
    return margin * phi_inverse(2.0 / (c * margin));
}

}  // namespace consensus
