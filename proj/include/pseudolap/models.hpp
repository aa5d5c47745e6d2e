#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pseudolap {

enum class ModelKind { FlatTorus2, FlatTorus3, Sphere3 };

std::string to_string(ModelKind kind);

// Row-vector lattice basis (periods A, B[, C]). Determinant must be positive.
struct LatticeBasis {
    int dimension = 3;
    std::array<std::array<double, 3>, 3> rows{};  // only [dim][dim] is used

    static LatticeBasis square(double L = 1.0);
    static LatticeBasis cubic(double L = 1.0);
    static LatticeBasis from_rows(int dim, const std::vector<double>& entries);

    double det() const;
    // Dual basis rows: (M^{-1})^T, so <A*_i, A_j> = delta_ij.
    LatticeBasis dual() const;
    // Length of the shortest nonzero lattice vector (exact for the small
    // coefficient ranges relevant here).
    double shortest_vector() const;
    // Rigorous lower bound sqrt(lambda_min(Gram)) <= shortest_vector().
    double shortest_vector_bound() const;

    std::array<double, 3> vec(long long m, long long n, long long l) const;
};

struct ManifoldModel {
    ModelKind kind = ModelKind::Sphere3;
    LatticeBasis basis{};
    int dimension = 3;
    double volume = 0.0;

    static ManifoldModel flat_torus2(const LatticeBasis& basis);
    static ManifoldModel flat_torus3(const LatticeBasis& basis);
    static ManifoldModel sphere3();

    bool is_torus() const { return kind != ModelKind::Sphere3; }
};

struct EigenLevel {
    double mu = 0.0;
    long long multiplicity = 0;
};

struct SpectrumTable {
    ManifoldModel model;
    double cutoff = 0.0;
    bool complete = false;
    std::vector<EigenLevel> levels;  // strictly increasing mu, levels[0] = (0, 1)

    std::size_t size() const { return levels.size(); }
};

// Every distinct eigenvalue <= lambda_max with its exact multiplicity.
// Torus spectra are 4 pi^2 |k*|^2 over the dual lattice; S^3 levels are
// k(k+2) with multiplicity (k+1)^2. Throws std::runtime_error when the
// enumeration would exceed the memory budget.
SpectrumTable enumerate_levels(const ManifoldModel& model, double lambda_max);

// Heat trace Theta(t) = sum m_k e^{-mu_k t}, exact in the numerically stable
// regime: eigenvalue sum for t >= 1, Poisson/theta-transformed sum below.
double heat_trace(const ManifoldModel& model, double t);

namespace detail {
// Both representations exposed for the crossover agreement tests.
double heat_trace_direct(const ManifoldModel& model, double t);
double heat_trace_dual(const ManifoldModel& model, double t);
}  // namespace detail

// Resolvent kernel R(x, y; lam) of the self-adjoint Laplacian for lam < 0 at
// geodesic distance dist. On tori the two points are separated along the
// first period direction and the image sum is truncated with an exponential
// tail bound below 1e-15 relative. The S^3 kernel takes the true spectral
// parameter of the Laplacian (the shift to the kernel variable is internal).
double resolvent_kernel(const ManifoldModel& model, double dist, double lam);

}  // namespace pseudolap
