#include "ziegler/polyops.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ziegler::polyops {

Poly det(const std::vector<std::vector<Poly>>& entries) {
    const int n = static_cast<int>(entries.size());
    if (n == 0) return {1.0};
    if (n > 20) throw std::invalid_argument("polyops::det: matrix too large");
    for (const auto& row : entries)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("polyops::det: matrix not square");

    // dp[S] = determinant of the minor over rows 0..popcount(S)-1 and the
    // column set S, kept in long double until the end.
    std::vector<std::vector<long double>> dp(std::size_t{1} << n);
    dp[0] = {1.0L};
    for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s) {
        const int row = std::popcount(s) - 1;
        std::vector<long double> acc;
        int pos = 0;
        for (int j = 0; j < n; ++j) {
            if (!((s >> j) & 1u)) continue;
            const auto& sub = dp[s & ~(std::uint32_t{1} << j)];
            const Poly& e = entries[row][j];
            if (!sub.empty() && !e.empty()) {
                const long double sgn = ((row + pos) & 1) ? -1.0L : 1.0L;
                if (acc.size() < sub.size() + e.size() - 1)
                    acc.resize(sub.size() + e.size() - 1, 0.0L);
                for (std::size_t u = 0; u < e.size(); ++u) {
                    if (e[u] == 0.0) continue;
                    const long double ev = sgn * static_cast<long double>(e[u]);
                    for (std::size_t v = 0; v < sub.size(); ++v) acc[u + v] += ev * sub[v];
                }
            }
            ++pos;
        }
        dp[s] = std::move(acc);
    }
    const auto& full = dp.back();
    Poly out(full.size());
    for (std::size_t k = 0; k < full.size(); ++k) out[k] = static_cast<double>(full[k]);
    if (out.empty()) out.push_back(0.0);
    return out;
}

Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

double eval(const Poly& p, double x) {
    long double acc = 0.0L;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return static_cast<double>(acc);
}

std::complex<double> eval(const Poly& p, std::complex<double> x) {
    std::complex<long double> acc = 0.0L;
    const std::complex<long double> z(x.real(), x.imag());
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + static_cast<long double>(p[k]);
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double eval_scale(const Poly& p, double x) {
    const double ax = std::max(1.0, std::abs(x));
    long double acc = 0.0L, pw = 1.0L;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += std::abs(static_cast<long double>(p[k])) * pw;
        pw *= ax;
    }
    return static_cast<double>(acc);
}

}  // namespace ziegler::polyops
