#include "nonsig/quantum_sampler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nonsig/errors.hpp"
#include "parallel.hpp"

namespace nonsig {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kBornTol = 1e-10;
constexpr std::size_t kChunk = 4096;

// <psi| (L (x) R) |psi>
Amplitude sandwich(const std::array<Amplitude, 4>& psi, const Qubit2x2& left, const Qubit2x2& right) {
    Amplitude total = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Amplitude row = 0.0;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) row += left[i][k] * right[j][l] * psi[2 * k + l];
            total += std::conj(psi[2 * i + j]) * row;
        }
    return total;
}

constexpr Qubit2x2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

double norm2(const std::array<Amplitude, 4>& psi) {
    double n = 0.0;
    for (const auto& c : psi) n += std::norm(c);
    return n;
}

QubitMeasurement random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    while (true) {
        const double x = normal(rng);
        const double y = normal(rng);
        const double z = normal(rng);
        if (x * x + y * y + z * z > 1e-24) return QubitMeasurement::along(x, y, z);
    }
}

}  // namespace

QubitMeasurement QubitMeasurement::along(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("measurement direction must be a nonzero finite vector");
    return QubitMeasurement{{x / n, y / n, z / n}};
}

void QubitMeasurement::check() const {
    const double n = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
    if (!(std::abs(n - 1.0) <= kUnitTol)) {
        std::ostringstream os;
        os << "Bloch vector has norm " << n << ", expected 1";
        throw DomainError(os.str());
    }
}

Qubit2x2 QubitMeasurement::observable() const noexcept {
    const auto [x, y, z] = bloch;
    return {{{Amplitude(z, 0.0), Amplitude(x, -y)}, {Amplitude(x, y), Amplitude(-z, 0.0)}}};
}

Qubit2x2 QubitMeasurement::projector(int outcome) const noexcept {
    const double sign = outcome_value(outcome);
    const Qubit2x2 obs = observable();
    Qubit2x2 p = identity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) p[i][j] = 0.5 * (p[i][j] + sign * obs[i][j]);
    return p;
}

void QuantumModel::check() const {
    const double n = norm2(state);
    if (!(std::abs(n - 1.0) <= kUnitTol)) {
        std::ostringstream os;
        os << "state has squared norm " << n << ", expected 1";
        throw ValidationError(os.str());
    }
    for (const auto& m : alice) m.check();
    for (const auto& m : bob) m.check();
}

Behavior model_to_behavior(const QuantumModel& m) {
    m.check();
    ProbabilityTable p{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    p[table_index(x, y, a, b)] =
                        sandwich(m.state, m.alice[x].projector(a), m.bob[y].projector(b)).real();
    return make_behavior(p, kBornTol);
}

Correlators expectation_correlators(const QuantumModel& m) {
    m.check();
    Correlators c;
    for (int k = 0; k < 2; ++k) {
        c.a[k] = sandwich(m.state, m.alice[k].observable(), identity()).real();
        c.b[k] = sandwich(m.state, identity(), m.bob[k].observable()).real();
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) c.ab[x][y] = sandwich(m.state, m.alice[x].observable(), m.bob[y].observable()).real();
    return c;
}

QuantumModel bell_model() {
    const double r = 1.0 / std::numbers::sqrt2;
    QuantumModel m;
    m.state = {Amplitude(r), Amplitude(0.0), Amplitude(0.0), Amplitude(r)};
    m.alice = {QubitMeasurement{{0.0, 0.0, 1.0}}, QubitMeasurement{{1.0, 0.0, 0.0}}};
    m.bob = {QubitMeasurement{{r, 0.0, r}}, QubitMeasurement{{-r, 0.0, r}}};
    return m;
}

Behavior bell_behavior() { return model_to_behavior(bell_model()); }

QuantumModel random_model(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    QuantumModel m;
    double n = 0.0;
    while (!(n > 1e-24)) {
        for (auto& c : m.state) c = Amplitude(normal(rng), normal(rng));
        n = norm2(m.state);
    }
    const double scale = 1.0 / std::sqrt(n);
    for (auto& c : m.state) c *= scale;
    for (auto& meas : m.alice) meas = random_direction(rng);
    for (auto& meas : m.bob) meas = random_direction(rng);
    return m;
}

std::vector<Behavior> sample(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample size must be at least 1");
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<Behavior>> parts(chunks);
    detail::parallel_for(static_cast<int>(chunks), [&](int chunk) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk), 0x5eedu};
        std::mt19937_64 rng(seq);
        const std::size_t begin = static_cast<std::size_t>(chunk) * kChunk;
        const std::size_t end = std::min(n, begin + kChunk);
        auto& out = parts[static_cast<std::size_t>(chunk)];
        out.reserve(end - begin);
        for (std::size_t k = begin; k < end; ++k) out.push_back(model_to_behavior(random_model(rng)));
    });
    std::vector<Behavior> all;
    all.reserve(n);
    for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
    return all;
}

}  // namespace nonsig
