#include "consensus/contact_matrix.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "consensus/rng.hpp"

namespace consensus {

namespace {

bool connected(int n, const std::vector<double>& rates) {
    std::vector<int> stack{0};
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!seen[j] && rates[static_cast<std::size_t>(i) * n + j] > 0.0) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    return reached == n;
}

}  // namespace

ContactMatrix::ContactMatrix(int n, std::vector<double> rates)
    : n_(n), rates_(std::move(rates)) {
    if (n < 2) throw std::invalid_argument("contact matrix needs at least 2 nodes");
    if (n > kMaxNodes)
        throw std::invalid_argument("contact matrix exceeds the dense-storage limit of " +
                                    std::to_string(kMaxNodes) + " nodes");
    if (rates_.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("rate matrix has wrong dimensions");
    for (int i = 0; i < n; ++i) {
        if (rates_[static_cast<std::size_t>(i) * n + i] != 0.0)
            throw std::invalid_argument("rate matrix has a nonzero diagonal entry");
        for (int j = 0; j < i; ++j) {
            double r = rate(i, j);
            if (r < 0.0 || !std::isfinite(r))
                throw std::invalid_argument("rate matrix has a negative or non-finite entry");
            if (r != rate(j, i))
                throw std::invalid_argument("rate matrix is not symmetric");
        }
    }
    if (!connected(n_, rates_))
        throw std::invalid_argument("induced graph is not connected");

    row_sums_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += rate(i, j);
        row_sums_[i] = s;
    }
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (rate(i, j) > 0.0) {
                edges_.push_back({i, j, rate(i, j)});
                total_rate_ += rate(i, j);
            }
}

ContactMatrix complete_graph(int n) {
    if (n < 2) throw std::invalid_argument("complete_graph: n must be >= 2");
    std::vector<double> rates(static_cast<std::size_t>(n) * n, 1.0 / (n - 1));
    for (int i = 0; i < n; ++i) rates[static_cast<std::size_t>(i) * n + i] = 0.0;
    return ContactMatrix(n, std::move(rates));
}

ContactMatrix path_graph(int n) {
    if (n < 2) throw std::invalid_argument("path_graph: n must be >= 2");
    std::vector<double> rates(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        rates[static_cast<std::size_t>(i) * n + i + 1] = 1.0;
        rates[static_cast<std::size_t>(i + 1) * n + i] = 1.0;
    }
    return ContactMatrix(n, std::move(rates));
}

ContactMatrix cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
    std::vector<double> rates(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        rates[static_cast<std::size_t>(i) * n + j] = 1.0;
        rates[static_cast<std::size_t>(j) * n + i] = 1.0;
    }
    return ContactMatrix(n, std::move(rates));
}

ContactMatrix star_graph(int n) {
    if (n < 2) throw std::invalid_argument("star_graph: n must be >= 2");
    std::vector<double> rates(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 1; i < n; ++i) {
        rates[static_cast<std::size_t>(i) * n] = 1.0 / (n - 1);  // leaf row, hub column
        rates[static_cast<std::size_t>(i)] = 1.0 / (n - 1);      // hub row, leaf column
    }
    return ContactMatrix(n, std::move(rates));
}

ContactMatrix erdos_renyi_graph(const ErParams& params) {
    const int n = params.n;
    if (n < 2) throw std::invalid_argument("erdos_renyi_graph: n must be >= 2");
    const double p = params.c * std::log(static_cast<double>(n)) / n;
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("erdos_renyi_graph: p_n = c log(n)/n must lie in (0,1)");
    const double edge_rate = 1.0 / ((n - 1) * p);

    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        Rng rng(mix64(params.seed + static_cast<std::uint64_t>(attempt)));
        std::vector<double> rates(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(p)) {
                    rates[static_cast<std::size_t>(i) * n + j] = edge_rate;
                    rates[static_cast<std::size_t>(j) * n + i] = edge_rate;
                }
        try {
            return ContactMatrix(n, std::move(rates));
        } catch (const std::invalid_argument&) {
            // disconnected sample; try the next sub-seed
        }
    }
    throw GenerationFailure("erdos_renyi_graph: no connected sample in " +
                                std::to_string(params.max_attempts) + " attempts",
                            params.max_attempts);
}

ContactMatrix load_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n = -1;
    std::vector<double> rates;

    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("edge list, line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream fields(line);
        if (n < 0) {
            if (!(fields >> n)) continue;  // blank or comment before the header
            if (n < 2) fail("node count must be >= 2");
            rates.assign(static_cast<std::size_t>(n) * n, 0.0);
            std::string rest;
            if (fields >> rest) fail("trailing tokens after node count");
            continue;
        }
        int i, j;
        double r;
        if (!(fields >> i)) continue;  // blank line
        if (!(fields >> j >> r)) fail("expected `i j rate`");
        std::string rest;
        if (fields >> rest) fail("trailing tokens after rate");
        if (i < 1 || j < 1 || i > n || j > n) fail("node index out of range");
        if (i >= j) fail("edges must be listed once with i < j");
        if (!(r > 0.0) || !std::isfinite(r)) fail("rate must be positive");
        std::size_t a = static_cast<std::size_t>(i - 1) * n + (j - 1);
        if (rates[a] != 0.0) fail("duplicate edge");
        rates[a] = r;
        rates[static_cast<std::size_t>(j - 1) * n + (i - 1)] = r;
    }
    if (n < 0) throw std::invalid_argument("edge list: missing node-count header");
    try {
        return ContactMatrix(n, std::move(rates));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("edge list: ") + e.what());
    }
}

std::string to_edge_list(const ContactMatrix& q) {
    std::ostringstream out;
    out << q.size() << '\n';
    for (const auto& e : q.edges()) {
        out << (e.i + 1) << ' ' << (e.j + 1) << ' ';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", e.rate);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace consensus
