#pragma once

#include "lrsd/types.hpp"

namespace lrsd {

/// Inverse matrix square root of Z*Z^H + mu^2*I, built from the singular
/// value decomposition of Z itself:
///   P = U diag((sigma_i^2 + mu^2)^(-1/2)) U^H,
/// singular values padded with zeros beyond min(M, T). The result is
/// Hermitian positive-definite and satisfies P * P * (Z*Z^H + mu^2*I) = I up
/// to rounding even for rank-deficient Z with mu^2 far below the dominant
/// singular value. Requires mu > 0.
ComplexMatrix hermitian_inv_sqrt(const ComplexMatrix& z, double mu);

struct Svd {
    ComplexMatrix left;           // M x M, orthonormal columns
    RealVector singular_values;   // min(M,T), descending
    ComplexMatrix right;          // T x T, orthonormal columns
};

/// Full singular value decomposition m = left * diag(singular_values) * right^H.
Svd svd(const ComplexMatrix& m);

/// The selector Phi = Z^T (Khatri-Rao) I applied without materializing the
/// M*T x M dense matrix: Phi * gamma = vec(diag(gamma) * Z), column-major vec.
/// Column m of the implied matrix is supported on rows t*M + m with value Z(m,t).
class StructuredSelector {
public:
    explicit StructuredSelector(ComplexMatrix source);

    Index rows() const { return source_.rows() * source_.cols(); }  // M*T
    Index cols() const { return source_.rows(); }                   // M

    /// Phi * gamma; gamma has length M, result has length M*T.
    ComplexVector apply(const ComplexVector& gamma) const;

    /// Phi^H * r; r has length M*T, result has length M.
    ComplexVector adjoint_apply(const ComplexVector& r) const;

    /// Dense M*T x M matrix. Oracle tests only; never used on the solver path.
    ComplexMatrix dense() const;

    const ComplexMatrix& source() const { return source_; }

private:
    ComplexMatrix source_;
};

} // namespace lrsd
