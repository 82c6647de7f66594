#pragma once

// Shared value types for the modfold library: complex sample vectors,
// Gaussian integer fold vectors, and the sensing model description.

#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

namespace modfold {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;
using IndexSet = std::set<int>;

/// One component of a fold vector: exact integer real and imaginary part.
struct GaussInt {
    long long re = 0;
    long long im = 0;

    friend bool operator==(const GaussInt&, const GaussInt&) = default;
    friend auto operator<=>(const GaussInt&, const GaussInt&) = default;
};

using GaussianIntegerVector = std::vector<GaussInt>;

inline Complex to_complex(const GaussInt& g) {
    return {static_cast<double>(g.re), static_cast<double>(g.im)};
}

/// Thrown when a signal violates the zero-index-set constraint.
struct constraint_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when z - y is not a Gaussian integer vector within tolerance.
struct decomposition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DftKind {};
struct VandermondeKind {
    ComplexVector nodes;  // alpha_j, one per column
};

/// Measurement-model description: size, zero-index set V, matrix kind.
struct SensingConfig {
    int n = 0;
    IndexSet zero_set;  // V: indices of s forced to zero
    std::variant<DftKind, VandermondeKind> matrix_kind = DftKind{};
    double scale = 1.0;  // dynamic-range scale lambda; folding range is [-scale/2, scale/2)
};

inline double inf_norm(const ComplexVector& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double l2_norm(const ComplexVector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

}  // namespace modfold
