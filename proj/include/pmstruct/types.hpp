#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

// Core scalar/matrix aliases, tolerance policy and the error hierarchy shared by
// every module.  Scalars are real by default; all structural routines are also
// instantiated for std::complex<double>.

namespace pmstruct {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;

template <class S>
struct scalar_traits {
    static_assert(std::is_same_v<S, double> || std::is_same_v<S, cplx>,
                  "supported scalar types: double, std::complex<double>");
    static constexpr bool is_complex = std::is_same_v<S, cplx>;
    using real = double;
};

inline constexpr double eps = std::numeric_limits<double>::epsilon();

// Rank decisions everywhere use singular-value thresholding:
//   sigma_i kept iff sigma_i > max(atol, rtol * sigma_max),
// with rtol defaulting to 50*max(m,n)*eps when left negative.  The safety
// factor covers the error accumulated over several orthogonal transformations
// in staircase algorithms, which exceeds single-SVD roundoff; the bare
// max(m,n)*eps threshold has been observed to resurrect staircase noise.
struct Tol {
    double atol = 0.0;
    double rtol = -1.0;  // negative: pick the dimension-dependent default
};

inline double rank_rtol(const Tol& tol, Eigen::Index m, Eigen::Index n) {
    if (tol.rtol >= 0.0) return tol.rtol;
    return 50.0 * static_cast<double>(std::max<Eigen::Index>(std::max(m, n), 1)) * eps;
}

// Degree detection for polynomial data: a coefficient matrix counts as zero when
// its max-norm is <= atol + rtol * (largest coefficient max-norm), rtol
// defaulting to m*n*eps.
inline double degree_rtol(const Tol& tol, Eigen::Index m, Eigen::Index n) {
    if (tol.rtol >= 0.0) return tol.rtol;
    return static_cast<double>(std::max<Eigen::Index>(m * n, 1)) * eps;
}

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input-shape and precondition violations, named after the condition they report.
struct RaggedGrid : Error { using Error::Error; };
struct GradeTooSmall : Error { using Error::Error; };
struct GradeZero : Error { using Error::Error; };
struct PoleAtEvaluationPoint : Error { using Error::Error; };
struct InconsistentDims : Error { using Error::Error; };
struct NotStrictlyProper : Error { using Error::Error; };
struct SingularT : Error { using Error::Error; };
struct SingularD : Error { using Error::Error; };
struct SingularPencil : Error { using Error::Error; };
struct NotRegular : Error { using Error::Error; };
struct NotPolynomial : Error { using Error::Error; };
struct BoundTooSmall : Error { using Error::Error; };

}  // namespace pmstruct
