#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "nonsig/behavior.hpp"

namespace nonsig::fixtures {

// Vertices of the non-signaling polytope: 16 deterministic points and the 8
// relabeled PR boxes.
inline const std::vector<Correlators>& ns_vertices() {
    static const std::vector<Correlators> vertices = [] {
        std::vector<Correlators> out;
        for (int code = 0; code < 16; ++code) {
            Correlators c;
            c.a = {code & 1 ? -1.0 : 1.0, code & 2 ? -1.0 : 1.0};
            c.b = {code & 4 ? -1.0 : 1.0, code & 8 ? -1.0 : 1.0};
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) c.ab[x][y] = c.a[x] * c.b[y];
            out.push_back(c);
        }
        for (int code = 0; code < 8; ++code) {
            // (-1)^(xy + alpha x + beta y + gamma)
            const int alpha = code & 1;
            const int beta = (code >> 1) & 1;
            const int gamma = (code >> 2) & 1;
            Correlators c;
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) c.ab[x][y] = ((x * y + alpha * x + beta * y + gamma) % 2) ? -1.0 : 1.0;
            out.push_back(c);
        }
        return out;
    }();
    return vertices;
}

// Random convex combination of 1 to 4 vertices, so that faces and edges are
// reached as well as the interior.
inline Correlators random_ns_correlators(std::mt19937_64& rng) {
    const auto& v = ns_vertices();
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    std::exponential_distribution<double> expo;
    const int n = count(rng);
    std::array<double, 8> acc{};
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = expo(rng);
        const auto flat = v[pick(rng)].flat();
        for (std::size_t j = 0; j < 8; ++j) acc[j] += w * flat[j];
        total += w;
    }
    for (double& a : acc) a /= total;
    return Correlators::from_flat(acc);
}

inline Behavior random_behavior(std::mt19937_64& rng) {
    return correlators_to_behavior(random_ns_correlators(rng), 1e-12);
}

// Zero marginals: the positivity conditions reduce to |<A_xB_y>| <= 1.
inline Correlators random_c_correlators(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Correlators c;
    for (auto& row : c.ab)
        for (auto& v : row) v = u(rng);
    return c;
}

}  // namespace nonsig::fixtures
