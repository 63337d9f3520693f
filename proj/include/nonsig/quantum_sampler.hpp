#pragma once

// Quantum behaviors of two qubits: a pure state shared by the parties and a
// projective +-1 measurement per input, p(ab|xy) = <psi| P_a|x (x) P_b|y |psi>.

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "nonsig/behavior.hpp"

namespace nonsig {

using Amplitude = std::complex<double>;
using Qubit2x2 = std::array<std::array<Amplitude, 2>, 2>;

/// Measurement along a Bloch direction; outcome +1 projects with
/// (I + n.sigma)/2 and outcome -1 with (I - n.sigma)/2.
struct QubitMeasurement {
    std::array<double, 3> bloch{0.0, 0.0, 1.0};

    /// Normalizes (x, y, z); throws DomainError for the zero vector.
    static QubitMeasurement along(double x, double y, double z);
    /// Throws DomainError unless |bloch| = 1 within 1e-12.
    void check() const;
    /// Projector for outcome index 0 (+1) or 1 (-1).
    Qubit2x2 projector(int outcome) const noexcept;
    /// n.sigma.
    Qubit2x2 observable() const noexcept;
};

/// Basis order |00>, |01>, |10>, |11> with Alice's qubit first.
struct QuantumModel {
    std::array<Amplitude, 4> state{};
    std::array<QubitMeasurement, 2> alice;
    std::array<QubitMeasurement, 2> bob;

    /// Throws ValidationError for a state of norm != 1 (1e-12) and
    /// DomainError for a non-unit Bloch vector.
    void check() const;
};

/// Born probabilities. Throws like QuantumModel::check.
Behavior model_to_behavior(const QuantumModel& m);

/// Mean values evaluated directly as <psi| (n.sigma) (x) (m.sigma) |psi> and
/// <psi| (n.sigma) (x) I |psi>, without going through probabilities.
Correlators expectation_correlators(const QuantumModel& m);

/// (|00> + |11>)/sqrt2 with Alice measuring sigma_z, sigma_x and Bob along
/// (x + z)/sqrt2 and (z - x)/sqrt2.
QuantumModel bell_model();
Behavior bell_behavior();

/// A Haar random pure state with uniformly random Bloch directions.
QuantumModel random_model(std::mt19937_64& rng);

/// n independent random behaviors. Chunks of the output use their own
/// generator seeded from (seed, chunk), so the result depends on seed only.
std::vector<Behavior> sample(std::size_t n, std::uint64_t seed);

}  // namespace nonsig
