#pragma once

// Random generators and brute-force oracles shared by the test suites. Nothing
// here calls into the pipeline code it is used to check.

#include "qpoisson/simulator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace qpoisson::testkit {

using cd = std::complex<double>;

inline std::vector<double> random_unit_real(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    double norm = 0.0;
    for (auto& x : v) {
        x = g(rng);
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : v)
        x /= norm;
    return v;
}

inline sim::QuantumState random_state(std::mt19937_64& rng, int qubits)
{
    std::normal_distribution<double> g;
    std::vector<cd> v(std::size_t{1} << qubits);
    double norm = 0.0;
    for (auto& x : v) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    norm = std::sqrt(norm);
    for (auto& x : v)
        x /= norm;
    return sim::QuantumState::from_amplitudes(std::move(v));
}

/// Haar-ish random unitary: modified Gram-Schmidt on a complex Gaussian matrix, applied twice.
inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int dim)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m(r, c) = cd(g(rng), g(rng));
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < dim; ++c) {
            for (int p = 0; p < c; ++p) {
                const cd proj = m.col(p).dot(m.col(c));
                m.col(c) -= proj * m.col(p);
            }
            m.col(c).normalize();
        }
    }
    return m;
}

inline double max_abs_diff(std::span<const cd> a, std::span<const cd> b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Full unitary of a circuit, by applying it to every basis state.
inline Eigen::MatrixXcd unitary_of(const sim::Circuit& circuit)
{
    const int n = circuit.num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<cd> basis(dim, 0.0);
        basis[c] = 1.0;
        auto s = sim::QuantumState::from_amplitudes(std::move(basis));
        sim::apply(s, circuit);
        for (std::size_t r = 0; r < dim; ++r)
            u(r, c) = s[r];
    }
    return u;
}

/// DFT matrix F_{yx} = e^{2 pi i x y / M} / sqrt(M).
inline Eigen::MatrixXcd dft_matrix(int width)
{
    const int M = 1 << width;
    Eigen::MatrixXcd f(M, M);
    for (int y = 0; y < M; ++y)
        for (int x = 0; x < M; ++x)
            f(y, x) = std::polar(1.0 / std::sqrt(double(M)), 2.0 * std::numbers::pi * x * y / M);
    return f;
}

/// Phase-estimation outcome distribution for eigenphase `phase` (in turns) on an
/// M = 2^width register: |(1/M) sum_x e^{2 pi i x (phase - y/M)}|^2, summed directly.
inline std::vector<double> qpe_distribution(double phase, int width)
{
    const int M = 1 << width;
    std::vector<double> out(M);
    for (int y = 0; y < M; ++y) {
        cd acc = 0.0;
        for (int x = 0; x < M; ++x)
            acc += std::polar(1.0, 2.0 * std::numbers::pi * x * (phase - double(y) / M));
        out[y] = std::norm(acc / double(M));
    }
    return out;
}

} // namespace qpoisson::testkit
