#pragma once

// One-dimensional Dirichlet Poisson problem on the unit interval, its
// central-difference matrix, closed-form spectrum and two classical solvers.

#include "qpoisson/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace qpoisson {

/// Right-hand side of -v'' = b on N+1 grid points, stored as the 2^n amplitudes
/// loaded into the input register. Amplitude 0 is the (unused) boundary slot and
/// must be exactly zero; the remaining N-1 entries are the interior values b_1..b_{N-1}.
class PoissonProblem {
public:
    /// Validates and normalizes `rhs`; the original Euclidean norm is kept as scale().
    static PoissonProblem from_amplitudes(std::vector<double> rhs)
    {
        const auto size = static_cast<long long>(rhs.size());
        detail::require(size >= 2 && detail::is_power_of_two(size), "N must be a power of two >= 2");
        detail::require(rhs[0] == 0.0, "rhs[0] must be exactly 0 (boundary slot)");
        for (double v : rhs)
            detail::require(std::isfinite(v), "rhs entries must be finite");
        const double norm = std::sqrt(std::inner_product(rhs.begin(), rhs.end(), rhs.begin(), 0.0));
        detail::require(norm > 0.0, "rhs must not be identically zero");
        for (double& v : rhs)
            v /= norm;
        return PoissonProblem(std::move(rhs), norm);
    }

    int grid() const { return static_cast<int>(rhs_.size()); }
    int qubits() const { return detail::log2_exact(grid()); }
    double mesh_width() const { return 1.0 / grid(); }
    double scale() const { return scale_; }

    std::span<const double> rhs() const { return rhs_; }
    std::span<const double> interior() const { return std::span<const double>(rhs_).subspan(1); }

private:
    PoissonProblem(std::vector<double> rhs, double scale) : rhs_(std::move(rhs)), scale_(scale) {}

    std::vector<double> rhs_;
    double scale_ = 1.0;
};

/// (1/h^2) tridiag(-1, 2, -1) of dimension N-1, h = 1/N.
struct TridiagonalMatrix {
    int dim = 0;
    double diagonal = 0.0;
    double off_diagonal = 0.0;

    Eigen::MatrixXd dense() const
    {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        for (int k = 0; k < dim; ++k) {
            m(k, k) = diagonal;
            if (k + 1 < dim) {
                m(k, k + 1) = off_diagonal;
                m(k + 1, k) = off_diagonal;
            }
        }
        return m;
    }

    std::vector<double> multiply(std::span<const double> v) const
    {
        detail::require(static_cast<int>(v.size()) == dim, "dimension mismatch in matrix-vector product");
        std::vector<double> out(dim);
        for (int k = 0; k < dim; ++k) {
            double acc = diagonal * v[k];
            if (k > 0)
                acc += off_diagonal * v[k - 1];
            if (k + 1 < dim)
                acc += off_diagonal * v[k + 1];
            out[k] = acc;
        }
        return out;
    }
};

inline void validate_grid(int N)
{
    detail::require(N >= 2 && detail::is_power_of_two(N), "N must be a power of two >= 2");
}

inline TridiagonalMatrix build_matrix(int N)
{
    validate_grid(N);
    const double inv_h2 = static_cast<double>(N) * N;
    return {N - 1, 2.0 * inv_h2, -inv_h2};
}

/// Eigenpairs of the Dirichlet Laplacian, ascending.
/// lambdas[j-1] = lambda_j, eigenvectors(k-1, j-1) = u_j(k).
struct SpectralData {
    int grid = 0;
    std::vector<double> lambdas;
    Eigen::MatrixXd eigenvectors;
    double kappa = 1.0;

    int dim() const { return grid - 1; }

    /// u_j padded with a leading zero so it indexes register basis states 0..N-1.
    std::vector<double> embedded_eigenvector(int j) const
    {
        std::vector<double> out(grid, 0.0);
        for (int k = 1; k < grid; ++k)
            out[k] = eigenvectors(k - 1, j - 1);
        return out;
    }
};

inline double eigenvalue(int N, int j)
{
    const double s = std::sin(j * std::numbers::pi / (2.0 * N));
    return 4.0 * N * N * s * s;
}

inline double condition_number(const SpectralData& spectral)
{
    return spectral.lambdas.back() / spectral.lambdas.front();
}

inline SpectralData eigenpairs(int N)
{
    validate_grid(N);
    SpectralData out;
    out.grid = N;
    out.lambdas.resize(N - 1);
    out.eigenvectors.resize(N - 1, N - 1);
    const double norm = std::sqrt(2.0 / N);
    for (int j = 1; j < N; ++j) {
        out.lambdas[j - 1] = eigenvalue(N, j);
        for (int k = 1; k < N; ++k)
            out.eigenvectors(k - 1, j - 1) = norm * std::sin(j * std::numbers::pi * k / N);
    }
    out.kappa = condition_number(out);
    return out;
}

/// Thomas elimination on the constant-coefficient tridiagonal system. No pivoting:
/// the matrix is strictly diagonally dominant in every reduced row.
inline std::vector<double> solve_thomas(int N, std::span<const double> interior)
{
    const auto A = build_matrix(N);
    detail::require(static_cast<int>(interior.size()) == A.dim, "interior rhs must have N-1 entries");
    const int d = A.dim;
    std::vector<double> c_prime(d, 0.0);
    std::vector<double> d_prime(d, 0.0);
    c_prime[0] = A.off_diagonal / A.diagonal;
    d_prime[0] = interior[0] / A.diagonal;
    for (int k = 1; k < d; ++k) {
        const double denom = A.diagonal - A.off_diagonal * c_prime[k - 1];
        c_prime[k] = A.off_diagonal / denom;
        d_prime[k] = (interior[k] - A.off_diagonal * d_prime[k - 1]) / denom;
    }
    std::vector<double> v(d);
    v[d - 1] = d_prime[d - 1];
    for (int k = d - 2; k >= 0; --k)
        v[k] = d_prime[k] - c_prime[k] * v[k + 1];
    return v;
}

inline std::vector<double> solve_thomas(const PoissonProblem& problem)
{
    return solve_thomas(problem.grid(), problem.interior());
}

/// v = sum_j <u_j, b> / lambda_j u_j.
inline std::vector<double> solve_spectral(const SpectralData& spectral, std::span<const double> interior)
{
    detail::require(static_cast<int>(interior.size()) == spectral.dim(), "interior rhs must have N-1 entries");
    const Eigen::Map<const Eigen::VectorXd> b(interior.data(), static_cast<Eigen::Index>(interior.size()));
    Eigen::VectorXd beta = spectral.eigenvectors.transpose() * b;
    for (int j = 0; j < spectral.dim(); ++j)
        beta[j] /= spectral.lambdas[j];
    const Eigen::VectorXd v = spectral.eigenvectors * beta;
    return {v.data(), v.data() + v.size()};
}

inline std::vector<double> solve_spectral(const PoissonProblem& problem)
{
    return solve_spectral(eigenpairs(problem.grid()), problem.interior());
}

// --- rhs construction and parsing ---

/// Equal overlap 1/sqrt(N-1) with every eigenvector.
inline PoissonProblem flat_overlap_rhs(int N)
{
    const auto spectral = eigenpairs(N);
    std::vector<double> rhs(N, 0.0);
    for (int j = 1; j < N; ++j) {
        const auto u = spectral.embedded_eigenvector(j);
        for (int k = 1; k < N; ++k)
            rhs[k] += u[k];
    }
    return PoissonProblem::from_amplitudes(std::move(rhs));
}

inline PoissonProblem eigenvector_rhs(int N, int j)
{
    validate_grid(N);
    detail::require(j >= 1 && j < N, "eigenvector index must be in 1..N-1");
    return PoissonProblem::from_amplitudes(eigenpairs(N).embedded_eigenvector(j));
}

/// The two right-hand sides used in the published 3x3 and 7x7 runs.
inline PoissonProblem reference_rhs(int N)
{
    if (N == 4)
        return PoissonProblem::from_amplitudes({0.0, 1.0 / std::numbers::sqrt2, 0.5, 0.5});
    if (N == 8)
        return PoissonProblem::from_amplitudes({0.0, 0.25, 0.25, 0.25, 0.25, 0.5, 0.5, 0.5});
    throw ValidationError("reference rhs is only defined for N = 4 and N = 8");
}

namespace detail {

inline double parse_real(const std::string& token)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ValidationError("invalid rhs value '" + token + "'");
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used])))
        ++used;
    require(used == token.size(), "invalid rhs value '" + token + "' (complex or malformed entries are not accepted)");
    return v;
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

/// "0,0.7071,0.5,0.5" -> amplitudes.
inline std::vector<double> parse_rhs_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ','))
        out.push_back(detail::parse_real(detail::trim(token)));
    return out;
}

/// One amplitude per line, 2^n lines, first line 0. Blank lines are rejected.
inline std::vector<double> parse_rhs_stream(std::istream& in)
{
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) {
            if (in.peek() == std::char_traits<char>::eof())
                break;
            throw ValidationError("rhs file: empty line " + std::to_string(lineno));
        }
        out.push_back(detail::parse_real(t));
    }
    detail::require(!out.empty(), "rhs file is empty");
    detail::require(detail::is_power_of_two(static_cast<long long>(out.size())), "rhs file must contain 2^n lines");
    detail::require(out[0] == 0.0, "rhs file: first line must be 0");
    return out;
}

inline std::vector<double> read_rhs_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open rhs file '" + path + "'");
    return parse_rhs_stream(in);
}

} // namespace qpoisson
