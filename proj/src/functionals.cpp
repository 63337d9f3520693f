#include "nonsig/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "nonsig/errors.hpp"

namespace nonsig {

namespace {

constexpr std::array<std::array<int, 2>, 4> kOddPair = {{{1, 1}, {0, 0}, {0, 1}, {1, 0}}};

}  // namespace

std::array<std::array<int, 2>, 2> chsh_sign_pattern(int slot) {
    if (slot < 0 || slot >= kChshSlots) throw DomainError("CHSH slot outside 0..7");
    const int sign = slot < 4 ? 1 : -1;
    const auto odd = kOddPair[static_cast<std::size_t>(slot % 4)];
    std::array<std::array<int, 2>, 2> e{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) e[x][y] = (x == odd[0] && y == odd[1]) ? -sign : sign;
    return e;
}

double chsh_linear(const Correlators& c, int slot) {
    const auto e = chsh_sign_pattern(slot);
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) s += e[x][y] * c.ab[x][y];
    return s;
}

double chsh_linear(const Behavior& p, int slot) { return chsh_linear(p.correlators(), slot); }

double s_max(const Correlators& c) noexcept {
    const double total = c.ab[0][0] + c.ab[0][1] + c.ab[1][0] + c.ab[1][1];
    double best = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) best = std::max(best, std::abs(total - 2.0 * c.ab[x][y]));
    return best;
}

double s_max(const Behavior& p) noexcept { return s_max(p.correlators()); }

int argmax_slot(const Correlators& c) noexcept {
    int best = 0;
    double value = chsh_linear(c, 0);
    for (int k = 1; k < kChshSlots; ++k) {
        const double v = chsh_linear(c, k);
        if (v > value) {
            value = v;
            best = k;
        }
    }
    return best;
}

double xlog2x(double u) noexcept {
    if (u <= 1e-300) return 0.0;
    return u * std::log2(u);
}

double mutual_information(const Behavior& p) noexcept {
    double marg = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) marg += xlog2x(p.marginal_a(a, x));
    for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) marg += xlog2x(p.marginal_b(b, y));
    double joint = 0.0;
    for (double v : p.table()) joint += xlog2x(v);
    // Cancellation can leave a few ulps outside [0, 1].
    return std::clamp(-0.5 * marg + 0.25 * joint, 0.0, 1.0);
}

FunctionalPoint functional_point(const Behavior& p) noexcept { return {s_max(p), mutual_information(p)}; }

double g(double x) {
    if (std::abs(x) > 1.0 + 1e-12) throw DomainError("g: argument outside [-1, 1]");
    x = std::clamp(x, -1.0, 1.0);
    return 0.5 * (1.0 + xlog2x((1.0 + x) / 4.0) + xlog2x((1.0 - x) / 4.0));
}

double correlation_space_info(const Correlators& c) {
    if (!has_zero_marginals(c)) throw DomainError("correlation_space_info requires zero marginals");
    return g(c.ab[0][0]) + g(c.ab[0][1]) + g(c.ab[1][0]) + g(c.ab[1][1]);
}

}  // namespace nonsig
